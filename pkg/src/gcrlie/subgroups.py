"""Subsystem and Levi enumeration, character restriction to subsystems and
Levis, and enumeration of irreducible embeddings into classical groups.

Subsystems are stored by their simple roots as ambient root vectors and
canonicalized through the positive system they generate, so Borel-de
Siebenthal descent can de-duplicate structurally equal subsystems.  Embedding
enumeration follows the classical-group irreducibility constraints: a single
irreducible action for type A targets; orthogonal sums of inequivalent
self-dual pieces for types B/C/D, with the p=2 quadratic relaxation for type
D carried as an explicit flagged variant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .charcalc import (
    Character,
    form_type,
    sum_of_positive_coroot_pairings,
    weyl_character,
    weyl_dim,
)
from .modp import CoverageGap, simple_character_p, simple_dim_p, steinberg_decompose
from .rootcore import (
    ComponentInfo,
    LieError,
    RootSystem,
    RootSystemId,
    RootVector,
    Weight,
    classify_components,
    extended_diagram,
    minus_w0,
    parse_type,
    root_system,
)


# -- subsystem data ------------------------------------------------------------


def _pairing_matrix(sys_: RootSystem, roots):
    om = [sys_.root_to_omega(b) for b in roots]
    return [[sys_.pair_coroot(om[i], roots[j]) for j in range(len(roots))]
            for i in range(len(roots))]


@dataclass(frozen=True)
class SubsystemDatum:
    ambient: str
    simple_roots: tuple[RootVector, ...]
    components: tuple[ComponentInfo, ...]
    special_isogeny: bool = False

    def type_key(self) -> str:
        return "x".join(c.label() for c in self.components) if self.components else "-"

    def plain_type_key(self) -> str:
        return "x".join(str(c.id) for c in self.components) if self.components else "-"

    def subsystem_system(self) -> RootSystem:
        return root_system(tuple(c.id for c in self.components))

    def ordered_roots(self):
        """Simple roots in component-Bourbaki order (concatenated blocks)."""
        out = []
        for c in self.components:
            out.extend(self.simple_roots[i] for i in c.members)
        return out


def make_subsystem(ambient, roots, special=False) -> SubsystemDatum:
    sys_ = root_system(ambient)
    roots = tuple(tuple(r) for r in roots)
    pairing = _pairing_matrix(sys_, roots)
    lengths = [sys_.root_half_length.get(r) or sys_.root_half_length[tuple(-x for x in r)]
               for r in roots]
    comps = classify_components(pairing, lengths, ambient_max_len=max(sys_.d))
    return SubsystemDatum(sys_.key, roots, comps, special)


def _span_closure(sys_: RootSystem, seeds):
    """All ambient roots in the additive closure of +-seeds."""
    posset = set(sys_.positive_roots)
    allroots = posset | {tuple(-x for x in b) for b in posset}
    current = set()
    for s in seeds:
        s = tuple(s)
        current.add(s)
        current.add(tuple(-x for x in s))
    grew = True
    while grew:
        grew = False
        for a, b in itertools.combinations(sorted(current), 2):
            s = tuple(x + y for x, y in zip(a, b))
            if s in allroots and s not in current:
                current.add(s)
                current.add(tuple(-x for x in s))
                grew = True
    return current


def canonical_subsystem(ambient, seeds, special=False) -> SubsystemDatum:
    """Subsystem generated by the seeds, presented by the indecomposable
    elements of its positive part, sorted by (height, lex)."""
    sys_ = root_system(ambient)
    closure = _span_closure(sys_, seeds)
    pos = sorted(
        (b for b in closure if b in sys_.root_half_length), key=lambda b: (sum(b), b)
    )
    posset = set(pos)
    simples = []
    for b in pos:
        decomposable = any(
            tuple(x - y for x, y in zip(b, a)) in posset for a in pos if a != b
        )
        if not decomposable:
            simples.append(b)
    return make_subsystem(sys_, tuple(simples), special)


def subsystem_is_closed(datum: SubsystemDatum) -> bool:
    """alpha, beta in the subsystem and alpha+beta a root => alpha+beta in it."""
    sys_ = root_system(datum.ambient)
    closure = _span_closure(sys_, datum.simple_roots)
    for a, b in itertools.combinations(sorted(closure), 2):
        s = tuple(x + y for x, y in zip(a, b))
        if (s in sys_.root_half_length or tuple(-x for x in s) in sys_.root_half_length):
            if s not in closure and any(s):
                return False
    return True


def full_subsystem(ambient) -> SubsystemDatum:
    sys_ = root_system(ambient)
    n = sys_.rank
    simples = tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))
    return make_subsystem(sys_, simples)


def borel_de_siebenthal_step(datum: SubsystemDatum) -> list[SubsystemDatum]:
    """All subsystems from one extended-diagram node deletion in one simple
    factor (maximal-rank descent) plus plain node deletions, de-duplicated
    by canonical form."""
    sys_ = root_system(datum.ambient)
    out = {}
    roots = datum.simple_roots
    for comp in datum.components:
        members = [roots[i] for i in comp.members]
        comp_sys = root_system(comp.id)
        theta_coeffs = comp_sys.positive_roots[-1]
        theta = tuple(
            sum(c * m[j] for c, m in zip(theta_coeffs, members))
            for j in range(sys_.rank)
        )
        lowest = tuple(-x for x in theta)
        others = [roots[i] for i in range(len(roots)) if i not in comp.members]
        # extended-diagram deletions
        for drop in range(len(members)):
            seeds = others + [m for k, m in enumerate(members) if k != drop] + [lowest]
            sub = canonical_subsystem(sys_, seeds, datum.special_isogeny)
            out[sub.simple_roots] = sub
        # plain deletions (Levi-type descent)
        for drop in range(len(members)):
            seeds = others + [m for k, m in enumerate(members) if k != drop]
            if not seeds:
                continue
            sub = canonical_subsystem(sys_, seeds, datum.special_isogeny)
            out[sub.simple_roots] = sub
    out.pop(datum.simple_roots, None)
    return sorted(out.values(), key=lambda s: (s.type_key(), s.simple_roots))


def all_subsystems(ambient, max_steps: int = 8):
    """Transitive Borel-de Siebenthal closure from the full system."""
    start = full_subsystem(ambient)
    seen = {start.simple_roots: start}
    frontier = [start]
    for _ in range(max_steps):
        nxt = []
        for d in frontier:
            for s in borel_de_siebenthal_step(d):
                if s.simple_roots not in seen:
                    seen[s.simple_roots] = s
                    nxt.append(s)
        if not nxt:
            break
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (s.type_key(), s.simple_roots))


_DUAL_SERIES = {"B": "C", "C": "B", "F": "F", "G": "G"}
_SPECIAL_PAIRS = {("B", 2), ("C", 2), ("F", 2), ("G", 3)}


def special_isogeny_subsystems(ambient, p: int) -> list[SubsystemDatum]:
    """Subsystems lying in the dual of a closed subsystem, for the special
    pairs (B_n, 2), (C_n, 2), (F4, 2), (G2, 3); empty otherwise."""
    sys_ = root_system(ambient)
    if len(sys_.ids) != 1:
        raise LieError("special_isogeny_subsystems wants a simple ambient type")
    id_ = sys_.ids[0]
    if (id_.series, p) not in _SPECIAL_PAIRS:
        return []
    n = id_.rank
    dual = root_system(RootSystemId(_DUAL_SERIES[id_.series], n))
    if id_.series == "F":
        perm = [3, 2, 1, 0]
    elif id_.series == "G":
        perm = [1, 0]
    else:
        perm = list(range(n))

    def coroot_coords(b):
        db = sys_.root_half_length[b]
        out = [b[i] * sys_.d[i] // db for i in range(n)]
        assert all(b[i] * sys_.d[i] % db == 0 for i in range(n))
        return tuple(out)

    # bijection ambient root -> dual-system root (dual simple i = alpha_perm(i)-vee)
    to_dual = {}
    from_dual = {}
    for b in sys_.positive_roots:
        c = coroot_coords(b)
        cd = tuple(c[perm[j]] for j in range(n))
        assert cd in dual.root_half_length, (b, cd)
        to_dual[b] = cd
        from_dual[cd] = b
    out = {}
    for sub in all_subsystems(dual):
        seeds = []
        ok = True
        for gamma in sub.simple_roots:
            if gamma in from_dual:
                seeds.append(from_dual[gamma])
            elif tuple(-x for x in gamma) in from_dual:
                seeds.append(tuple(-x for x in from_dual[tuple(-x for x in gamma)]))
            else:
                ok = False
                break
        if not ok or not seeds:
            continue
        datum = make_subsystem(sys_, tuple(seeds), special=True)
        out[datum.simple_roots] = datum
    return sorted(out.values(), key=lambda s: (s.type_key(), s.simple_roots))


# -- parabolic data -------------------------------------------------------------


@dataclass(frozen=True)
class ParabolicDatum:
    ambient: str
    levi_nodes: tuple[int, ...]
    components: tuple[ComponentInfo, ...]  # members are ambient node indices
    q_roots: tuple[RootVector, ...]

    def type_key(self) -> str:
        return "x".join(c.label() for c in self.components) if self.components else "-"

    def plain_type_key(self) -> str:
        return "x".join(str(c.id) for c in self.components) if self.components else "-"

    def levi_system(self) -> RootSystem:
        return root_system(tuple(c.id for c in self.components))


def make_parabolic(ambient, levi_nodes) -> ParabolicDatum:
    sys_ = root_system(ambient)
    nodes = tuple(sorted(levi_nodes))
    if any(i < 0 or i >= sys_.rank for i in nodes):
        raise LieError("levi node out of range")
    pairing = [[sys_.cartan[i][j] for j in nodes] for i in nodes]
    lengths = [sys_.d[i] for i in nodes]
    comps = classify_components(pairing, lengths, ambient_max_len=max(sys_.d))
    comps = tuple(
        ComponentInfo(c.id, tuple(nodes[i] for i in c.members), c.tilde) for c in comps
    )
    nodeset = set(nodes)
    q = tuple(
        b for b in sys_.positive_roots
        if any(b[i] for i in range(sys_.rank) if i not in nodeset)
    )
    return ParabolicDatum(sys_.key, nodes, comps, q)


def levi_subgroups(ambient) -> list[ParabolicDatum]:
    """One parabolic datum per proper subset of simple nodes."""
    sys_ = root_system(ambient)
    out = []
    for r in range(sys_.rank):
        for nodes in itertools.combinations(range(sys_.rank), r):
            out.append(make_parabolic(sys_, nodes))
    return out


# -- restriction to subsystems and Levis ----------------------------------------


def restrict_character(c: Character, datum) -> Character:
    """Restrict an ambient character along the chosen simple coroots of a
    subsystem or Levi; multiplicities accumulate, dimension is preserved."""
    sys_ = root_system(datum.ambient)
    if c.system.key != sys_.key:
        raise LieError("restrict_character: ambient mismatch")
    if isinstance(datum, SubsystemDatum):
        if datum.special_isogeny:
            raise LieError("character restriction across a special isogeny is not defined")
        beta_list = datum.ordered_roots()
        target = datum.subsystem_system()
        out: dict[Weight, int] = {}
        for w, m in c.items():
            t = tuple(sys_.pair_coroot(w, b) for b in beta_list)
            out[t] = out.get(t, 0) + m
        return Character(target, out)
    if isinstance(datum, ParabolicDatum):
        nodes = [i for comp in datum.components for i in comp.members]
        target = datum.levi_system()
        out = {}
        for w, m in c.items():
            t = tuple(w[i] for i in nodes)
            out[t] = out.get(t, 0) + m
        return Character(target, out)
    raise LieError(f"cannot restrict along {type(datum).__name__}")


# -- epsilon coordinates for classical types ------------------------------------


def natural_dim(id_: RootSystemId) -> int:
    if id_.series == "A":
        return id_.rank + 1
    if id_.series == "B":
        return 2 * id_.rank + 1
    if id_.series in ("C", "D"):
        return 2 * id_.rank
    raise LieError(f"{id_} has no natural module in this sense")


def epsilon_coords(id_: RootSystemId, w: Weight):
    """Weight in the standard epsilon basis of the classical type (GL-lift
    for type A); entries are Fractions for spin weights."""
    n = id_.rank
    a = list(w)
    if id_.series == "A":
        return [Fraction(sum(a[j] for j in range(i, n))) for i in range(n)] + [Fraction(0)]
    if id_.series == "B":
        half = Fraction(a[n - 1], 2)
        return [Fraction(sum(a[j] for j in range(i, n - 1))) + half for i in range(n - 1)] + [half]
    if id_.series == "C":
        return [Fraction(sum(a[j] for j in range(i, n))) for i in range(n)]
    if id_.series == "D":
        halfsum = Fraction(a[n - 2] + a[n - 1], 2)
        halfdif = Fraction(a[n - 1] - a[n - 2], 2)
        out = [Fraction(sum(a[j] for j in range(i, n - 2))) + halfsum for i in range(n - 2)]
        return out + [halfsum, halfdif]
    raise LieError(f"epsilon coordinates undefined for {id_}")


# -- irreducible embeddings into classical targets -------------------------------


@dataclass(frozen=True)
class EmbeddingDatum:
    """Candidate irreducible embedding X -> classical target, given by the
    factor multiset of the target's natural module restricted to X."""

    source: str
    target: RootSystemId
    factors: tuple[tuple[Weight, int, int], ...]  # (weight, twist, multiplicity)
    special: str = ""

    def describe(self) -> str:
        parts = []
        for w, t, m in self.factors:
            s = "L(" + ",".join(map(str, w)) + ")" + (f"^[{t}]" if t else "")
            parts.append(s if m == 1 else f"{s}x{m}")
        tag = f" [{self.special}]" if self.special else ""
        return f"{self.source}->{self.target}: " + " + ".join(parts) + tag

    def defining_character(self, p: int) -> Character:
        sys_ = root_system(self.source)
        from .modp import frobenius_twist_character

        mults: dict[Weight, int] = {}
        for w, t, m in self.factors:
            ch = frobenius_twist_character(simple_character_p(sys_, w, p), p, t)
            for ww, mm in ch.items():
                mults[ww] = mults.get(ww, 0) + m * mm
        return Character(sys_, mults)


def form_type_p(system, w: Weight, p: int) -> str:
    """Form type of the simple module L(w) in odd characteristic: computed on
    the Steinberg parts (a twist does not change the form)."""
    sys_ = root_system(system)
    if minus_w0(sys_, w) != tuple(w):
        return "not-self-dual"
    parity = 0
    for part, _t in steinberg_decompose(sys_, w, p).factors:
        parity += sum_of_positive_coroot_pairings(sys_, part)
    return "symplectic" if parity % 2 else "orthogonal"


def _orbit_size(sys_: RootSystem, w: Weight) -> int:
    from .rootcore import weyl_orbit

    return len(weyl_orbit(sys_, w))


def simple_dim_lower_bound(system, lam: Weight, p: int) -> int:
    """Certified lower bound for dim L(lam): the Weyl orbit of lam plus the
    orbits of the adjacent weights lam - alpha_i that survive in the simple
    module (those with <lam, alpha_i^vee> nonzero mod p)."""
    sys_ = root_system(system)
    if not any(lam):
        return 1
    from .rootcore import dominant_representative

    reps = {tuple(lam): _orbit_size(sys_, lam)}
    for i, c in enumerate(lam):
        if c and c % p:
            mu = tuple(lam[j] - sys_.simple_omega[i][j] for j in range(sys_.rank))
            rep, _ = dominant_representative(sys_, mu)
            if rep not in reps:
                reps[rep] = _orbit_size(sys_, rep)
    return sum(reps.values())


def _restricted_candidates(sys_: RootSystem, p: int, cap: int):
    """Restricted dominant weights with dim L <= cap, plus unresolved notes."""
    n = sys_.rank
    found = []
    gaps = []

    def rec(i, prefix):
        if i == n:
            w = tuple(prefix)
            if not any(w):
                return
            if simple_dim_lower_bound(sys_, w, p) > cap:
                return
            try:
                d = simple_dim_p(sys_, w, p)
            except CoverageGap:
                gaps.append(w)
                return
            if d <= cap:
                found.append((w, d))
            return
        for a in range(0, p):
            probe = tuple(prefix + [a] + [0] * (n - i - 1))
            if a and _orbit_size(sys_, probe) > cap:
                break
            rec(i + 1, prefix + [a])

    rec(0, [])
    return found, gaps


def _simple_candidates(sys_: RootSystem, p: int, cap: int, max_twist=2):
    """Simple modules (weight, twist-profile collapsed to a full weight is not
    used; factors stay as Steinberg products) with dim <= cap.

    Returns list of (weight, dim) where weight is the full dominant weight,
    and a list of unresolved base weights.
    """
    base, gaps = _restricted_candidates(sys_, p, cap)
    # Steinberg products of restricted parts over distinct twists 0..max_twist
    out = dict(base)
    parts = sorted(base)
    for k in range(2, max_twist + 2):
        for combo in itertools.combinations(range(max_twist + 1), k):
            for choice in itertools.product(parts, repeat=k):
                d = 1
                for (_w, dd) in choice:
                    d *= dd
                if d > cap:
                    continue
                w = [0] * sys_.rank
                for (pw, _dd), t in zip(choice, combo):
                    for i, a in enumerate(pw):
                        w[i] += a * p**t
                out[tuple(w)] = d
    return sorted(out.items()), gaps


def _min_twist_normalize(factors):
    tmin = min(t for _w, t, _m in factors)
    return tuple(sorted((w, t - tmin, m) for w, t, m in factors))


def irreducible_embeddings_classical(source, target, p: int, dim_cap: int | None = None):
    """Enumerate candidate irreducible embeddings of a simple group of type
    ``source`` into the classical group of type ``target``.

    Returns (embeddings, unresolved) where unresolved lists weights whose
    simple dimension could not be certified (reported, not dropped).
    """
    src = root_system(source)
    if len(src.ids) != 1:
        raise LieError("embedding source must be simple")
    tgt = parse_type(str(target))[0] if not isinstance(target, RootSystemId) else target
    if tgt.series not in ("A", "B", "C", "D"):
        raise LieError(f"{tgt} is not classical")
    n_nat = natural_dim(tgt)
    if dim_cap is not None and n_nat > dim_cap:
        raise LieError("target natural dimension exceeds the cap")

    if tgt.series == "A":
        singles, gaps = _simple_candidates(src, p, n_nat)
        embs = []
        seen = set()
        for w, d in singles:
            if d != n_nat:
                continue
            canon = min(w, minus_w0(src, w))
            if canon in seen:
                continue
            seen.add(canon)
            embs.append(EmbeddingDatum(src.key, tgt, ((canon, 0, 1),)))
        return embs, tuple(gaps)

    pair_dim = 2 * tgt.rank  # symplectic image size for B at p=2
    total = n_nat if not (tgt.series == "B" and p == 2) else pair_dim
    singles, gaps = _simple_candidates(src, p, total)
    singles = [((0,) * src.rank, 1)] + list(singles)  # allow trivial summands
    selfdual = []
    for w, d in singles:
        if minus_w0(src, w) != w:
            continue
        if not any(w) and tgt.series == "C":
            continue  # a 1-dimensional summand of a symplectic sum is isotropic
        if p != 2:
            ft = form_type_p(src, w, p)
            want = "symplectic" if tgt.series == "C" else "orthogonal"
            if any(w) and ft != want:
                continue
        else:
            # p=2: non-defective pieces are even-dimensional; odd-dimensional
            # content only enters type D through the quadratic-part clause
            if d % 2:
                continue
        selfdual.append((w, d))
    selfdual.sort()

    def multisets(target_dim):
        """Pairwise-inequivalent (weight, twist) choices summing to target_dim."""
        results = []

        def rec(idx, remaining, acc):
            if remaining == 0:
                results.append(tuple(acc))
                return
            for k in range(idx, len(options)):
                w, t, d = options[k]
                if d <= remaining:
                    rec(k + 1, remaining - d, acc + [(w, t, 1)])

        options = []
        for w, d in selfdual:
            maxt = 2 if any(w) else 0
            for t in range(0, maxt + 1):
                options.append((w, t, d))
        options.sort()
        rec(0, target_dim, [])
        return results

    embs = {}
    for combo in multisets(total):
        fac = _min_twist_normalize(combo)
        embs[(fac, "")] = EmbeddingDatum(src.key, tgt, fac)
    if tgt.series == "D" and p == 2:
        # quadratic-part clause: a distinguished even piece V_1 of dimension
        # 2m on which the group acts through the odd orthogonal group
        zero = (0,) * src.rank
        for m in range(2, tgt.rank + 1):
            rest = total - 2 * m
            if rest < 0:
                continue
            for inner in multisets(2 * (m - 1)):
                tag = f"quadratic-part dim {2*m}"
                base = list(inner) + [(zero, 0, 2)]
                for outer in multisets(rest):
                    fac = tuple(sorted(_merge_factors(base + list(outer))))
                    embs[(fac, tag)] = EmbeddingDatum(src.key, tgt, fac, tag)
    out = sorted(embs.values(), key=lambda e: (e.factors, e.special))
    return out, tuple(gaps)


def _merge_factors(factors):
    acc: dict[tuple[Weight, int], int] = {}
    for w, t, m in factors:
        acc[(w, t)] = acc.get((w, t), 0) + m
    return [(w, t, m) for (w, t), m in acc.items()]


class EmbeddingRestrictionError(LieError):
    """The would-be embedding cannot carry the requested module (certified)."""


def restrict_through_embedding(emb: EmbeddingDatum, p: int, module: Weight,
                               variant: str = "plain") -> Character:
    """Character of the target module V(module) restricted to the source along
    the torus assignment defined by the embedding's natural-module character.

    variant 'dual' negates the assignment (the graph twist for type A /
    half-spin swap for type D).  Raises EmbeddingRestrictionError when the
    restricted weights leave the source weight lattice or are not
    Weyl-invariant, which certifies that no genuine embedding acts this way.
    """
    src = root_system(emb.source)
    tgt_sys = root_system(emb.target)
    defining = emb.defining_character(p)
    if defining.dim() != natural_dim(emb.target) and not (
        emb.target.series == "B" and p == 2 and defining.dim() == 2 * emb.target.rank
    ):
        raise LieError("defining character has the wrong dimension")
    n = emb.target.rank

    if emb.target.series == "A":
        expanded = []
        for w, m in sorted(defining.items(), reverse=True):
            expanded.extend([w] * m)
        if variant == "dual":
            expanded = sorted((tuple(-x for x in w) for w in expanded), reverse=True)
        slots = expanded
    else:
        pool: dict[Weight, int] = dict(defining.mults)
        pairs = []
        while True:
            nonzero = sorted((w for w, m in pool.items() if m and any(w)), reverse=True)
            if not nonzero:
                break
            w = nonzero[0]
            neg = tuple(-x for x in w)
            if pool.get(neg, 0) <= 0:
                raise EmbeddingRestrictionError("defining character not closed under negation")
            pool[w] -= 1
            pool[neg] -= 1
            pairs.append(w)
        if any(m for w, m in pool.items() if any(w)):
            raise EmbeddingRestrictionError("unpairable weights in defining character")
        if len(pairs) > n:
            raise EmbeddingRestrictionError("too many weight pairs for the target rank")
        # remaining slots pair up zero weights
        slots = pairs + [(0,) * src.rank] * (n - len(pairs))
        if variant == "dual":
            slots = slots[:-1] + [tuple(-x for x in slots[-1])]

    ch = weyl_character(tgt_sys, module)
    out: dict[Weight, int] = {}
    for w, m in ch.items():
        eps = epsilon_coords(emb.target, w)
        acc = [Fraction(0)] * src.rank
        for c, nu in zip(eps, slots):
            if c:
                for i, x in enumerate(nu):
                    acc[i] += c * x
        if any(a.denominator != 1 for a in acc):
            raise EmbeddingRestrictionError(
                f"non-integral restricted weight for {emb.describe()} on {module}"
            )
        t = tuple(int(a) for a in acc)
        out[t] = out.get(t, 0) + m
    res = Character(src, out)
    if not res.is_weyl_invariant():
        raise EmbeddingRestrictionError(
            f"restriction of {module} along {emb.describe()} is not Weyl-invariant"
        )
    return res
