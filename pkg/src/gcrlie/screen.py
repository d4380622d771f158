"""The screening pipeline: for a triple (X, G, p) decide whether a closed,
connected, simple subgroup of type X inside the exceptional group G can fail
to be G-completely reducible, by walking every parabolic branch.

A branch is a parabolic together with a candidate irreducible embedding of X
into the Levi's derived subgroup.  Every composition factor of the restricted
radical levels gets a certified H^1 answer where possible:

  vanishing   - certified table miss, irreducible Weyl module (Kempf), no
                trivial factor below the Weyl module, or the G2/p=5 bound;
  non-zero    - certified table hit, or a Weyl module with head plus trivials
                only, or the p=2 symplectic-natural clause for B-type X;
  unknown     - an honest coverage gap; it blocks ruled_out, never a verdict.

Verdicts: ruled_out requires every branch to end in certified vanishing;
any certified non-zero leaf yields candidate_found; otherwise needs_manual.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .absfilt import max_factor_dim, q_level_factors
from .charcalc import Character, tensor_character, weyl_dim
from .h1data import (
    H1Table,
    default_h1_table,
    g2_p5_rule,
    load_chain_restrictions,
    maximal_subgroups,
    normalize_twist,
)
from .modp import (
    CoverageGap,
    char_p_composition_factors,
    decompose_into_simples_p,
    simple_dim_p,
    steinberg_decompose,
    weyl_module_is_irreducible,
)
from .rootcore import LieError, RootSystemId, Weight, parse_type, root_system
from .subgroups import (
    EmbeddingDatum,
    EmbeddingRestrictionError,
    ParabolicDatum,
    irreducible_embeddings_classical,
    levi_subgroups,
    restrict_through_embedding,
)

EXCEPTIONAL = ("G2", "F4", "E6", "E7", "E8")

# symplectic-type image data for the p=2 odd-orthogonal clause
_SP_IMAGE = {"A1": ("A1", (1,)), "B2": ("B2", (0, 1))}


def _sp_image(xid: RootSystemId):
    if xid.series == "B" and xid.rank >= 3:
        key = f"C{xid.rank}"
        return key, (1,) + (0,) * (xid.rank - 1)
    return _SP_IMAGE.get(str(xid))


@dataclass(frozen=True)
class FactorCheck:
    level: int
    module: Weight          # Levi high weight of the radical factor
    weight: Weight          # composition factor over the subgroup side
    mult: int
    outcome: str            # vanishes | nonzero | unknown
    rule: str

    def sort_key(self):
        return (self.level, self.module, self.weight, self.rule)


@dataclass(frozen=True)
class Branch:
    levi_nodes: tuple
    levi_type: str
    embedding: str
    status: str             # vanishes | nonzero | unknown | dead
    reason: str = ""
    checks: tuple = ()


@dataclass
class CaseVerdict:
    triple: tuple
    status: str             # ruled_out | candidate_found | needs_manual | not_covered
    branches: list = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.status == "ruled_out":
            bad = [b for b in self.branches for c in b.checks if c.outcome == "unknown"]
            bad += [b for b in self.branches if b.status == "unknown"]
            if bad:
                raise LieError("soundness violation: ruled_out with unknown leaves")

    def to_dict(self):
        return {
            "triple": {
                "subgroup": self.triple[0],
                "ambient": self.triple[1],
                "p": self.triple[2],
            },
            "status": self.status,
            "branches": [
                {
                    "levi_nodes": list(b.levi_nodes),
                    "levi_type": b.levi_type,
                    "embedding": b.embedding,
                    "status": b.status,
                    "reason": b.reason,
                    "checks": [
                        {
                            "level": c.level,
                            "module": list(c.module),
                            "weight": list(c.weight),
                            "mult": c.mult,
                            "outcome": c.outcome,
                            "rule": c.rule,
                        }
                        for c in b.checks
                    ],
                }
                for b in self.branches
            ],
        }


# -- certified H^1 decision for one simple factor --------------------------------


def h1_decide(xkey: str, p: int, weight: Weight, h1: H1Table) -> tuple[str, str]:
    """Certified status of H^1(X, L(weight)): (outcome, rule)."""
    sys_ = root_system(xkey)
    if not any(weight):
        return "vanishes", "trivial module"
    expr = list(steinberg_decompose(sys_, weight, p).factors)
    if h1.covers(sys_, p):
        try:
            hit = h1.nonvanishing(sys_, p, expr)
        except CoverageGap:
            hit = None
        if hit is True:
            return "nonzero", "H1 table row"
        if hit is False:
            return "vanishes", "no H1 table row"
    normed, stripped, caveat = normalize_twist(sys_, expr, p)
    if caveat and stripped >= 1:
        return "unknown", "twisted symplectic natural outside table coverage"
    # untwist (valid outside the caveat case) and rebuild the full weight
    probe = [0] * sys_.rank
    for w, t in normed:
        for i, a in enumerate(w):
            probe[i] += a * p**t
    probe = tuple(probe)
    try:
        if weyl_module_is_irreducible(sys_, probe, p):
            return "vanishes", "irreducible Weyl module"
    except LieError:
        pass
    try:
        factors = char_p_composition_factors(sys_, probe, p)
    except CoverageGap:
        factors = None
    if factors is not None:
        trivial = (0,) * sys_.rank
        n_trivial = sum(m for w, m in factors if tuple(w) == trivial)
        if n_trivial == 0:
            return "vanishes", "no trivial factor below the Weyl module"
        others = [(w, m) for w, m in factors if tuple(w) not in (trivial, probe)]
        if not others:
            return "nonzero", "Weyl module is head plus trivials"
    if sys_.key == "G2" and p == 5:
        try:
            if simple_dim_p(sys_, probe, p) <= 56:
                return "vanishes", "G2 p=5 dimension rule"
        except CoverageGap:
            pass
    return "unknown", "outside certified coverage"


# -- embeddings per Levi component ------------------------------------------------


_emb_cache: dict = {}


def _component_embeddings(xid: RootSystemId, comp_id: RootSystemId, p: int):
    """(embeddings, gaps) for X into one classical Levi component."""
    key = (str(xid), str(comp_id), p)
    if key not in _emb_cache:
        _emb_cache[key] = irreducible_embeddings_classical(
            root_system(xid), comp_id, p
        )
    return _emb_cache[key]


def _exceptional_component_chains(xid: RootSystemId, comp_key: str, p: int, depth=0):
    """Walk the maximal-subgroup data for an E6/E7-type Levi component.

    Returns (status, chains): status in {impossible, possible, unknown};
    chains are '>'-joined type strings for single-factor descents.
    """
    if str(xid) == comp_key:
        return "possible", [""]
    if xid.rank == 1:
        return "unknown", []  # A1-factor maximals are outside the data
    if depth >= 3:
        return "unknown", []
    amb = root_system(comp_key)
    if xid.rank > amb.rank:
        return "impossible", []
    chains = []
    unknown = False
    for entry in maximal_subgroups(comp_key, p):
        if any(xid.rank > i.rank for i, _t in entry.factors):
            continue  # projection to each factor must be faithful
        if len(entry.factors) > 1:
            ok = True
            for fid, _tilde in entry.factors:
                if fid.series in ("A", "B", "C", "D"):
                    embs, gaps = _component_embeddings(xid, fid, p)
                    if not embs and not gaps:
                        ok = False
                        break
                    continue
                st, _ch = _exceptional_component_chains(xid, str(fid), p, depth + 1)
                if st == "impossible":
                    ok = False
                    break
            if ok:
                unknown = True  # product chain: existence plausible, no data
            continue
        fid, _tilde = entry.factors[0]
        if fid.series in ("A", "B", "C", "D"):
            embs, gaps = _component_embeddings(xid, fid, p)
            if embs:
                chains.append(str(fid))
            elif gaps:
                unknown = True
        else:
            st, subchains = _exceptional_component_chains(xid, str(fid), p, depth + 1)
            if st == "possible":
                chains.extend(
                    f"{fid}>{c}" if c else str(fid) for c in subchains
                )
            elif st == "unknown":
                unknown = True
    if chains:
        return "possible", sorted(set(chains))
    return ("unknown", []) if unknown else ("impossible", [])


# -- one parabolic branch ----------------------------------------------------------


def _variant_restrictions(emb: EmbeddingDatum, p: int, module: Weight):
    """Characters of the module under every assignment variant that the
    embedding supports.  Empty list certifies the embedding cannot carry it."""
    out = []
    for variant in ("plain", "dual"):
        try:
            out.append(restrict_through_embedding(emb, p, module, variant=variant))
        except EmbeddingRestrictionError:
            continue
    return out


def _branch_checks(xkey, p, pd: ParabolicDatum, assignment, h1, sp_natural=None):
    """Run all radical-factor checks for one embedding assignment.

    Returns (status, checks) with status vanishes/nonzero/unknown, or
    ('dead', reason) when the assignment is certified impossible."""
    levi_sys = pd.levi_system()
    checks = []
    worst = "vanishes"
    for level in q_level_factors(pd):
        for mod_weight, _mult in level.factors:
            if not any(mod_weight):
                continue
            # split the Levi weight over the components and restrict each
            blocks = []
            off = 0
            ok = True
            for comp, emb in zip(pd.components, assignment):
                block = mod_weight[off : off + comp.id.rank]
                off += comp.id.rank
                if not any(block):
                    continue
                variants = _variant_restrictions(emb, p, block)
                if not variants:
                    return "dead", f"cannot carry the level-{level.level_index} module", ()
                blocks.append(variants)
            if not ok:
                continue
            xsys = root_system(xkey)
            for combo in itertools.product(*blocks) if blocks else ((),):
                ch = Character(xsys, {(0,) * xsys.rank: 1})
                for part in combo:
                    ch = tensor_character(ch, part)
                try:
                    simples = decompose_into_simples_p(ch, p)
                except CoverageGap as exc:
                    checks.append(
                        FactorCheck(level.level_index, mod_weight, (-1,) * xsys.rank,
                                    0, "unknown", f"decomposition gap: {exc}")
                    )
                    worst = _worse(worst, "unknown")
                    continue
                for w, m in simples:
                    if not any(w):
                        continue
                    outcome, rule = h1_decide(xkey, p, w, h1)
                    if sp_natural is not None and w == sp_natural and outcome != "nonzero":
                        outcome, rule = "nonzero", "symplectic natural in the radical (p=2 odd-orthogonal clause)"
                    checks.append(
                        FactorCheck(level.level_index, mod_weight, w, m, outcome, rule)
                    )
                    worst = _worse(worst, outcome)
    return worst, "", tuple(sorted(checks, key=lambda c: c.sort_key()))


_ORDER = {"vanishes": 0, "unknown": 1, "nonzero": 2}


def _worse(a, b):
    return a if _ORDER[a] >= _ORDER[b] else b


# -- the main pipeline --------------------------------------------------------------


def screen_triple(X, G, p: int, h1: H1Table | None = None) -> CaseVerdict:
    """Screen the triple (X, G, p); see the module docstring for semantics."""
    xid = parse_type(str(X))[0] if not isinstance(X, RootSystemId) else X
    gsys = root_system(G)
    if gsys.key not in EXCEPTIONAL:
        raise LieError(f"{gsys.key} is not an exceptional ambient")
    if xid.rank > gsys.rank:
        raise LieError("subgroup rank exceeds ambient rank")
    if h1 is None:
        h1 = default_h1_table()
    triple = (str(xid), gsys.key, p)
    branches = []

    # global dimension shortcut: every radical factor is too small to meet
    # any certified non-vanishing module of X
    if xid.rank >= 2 and h1.covers(xid, p):
        min_dim = h1.min_module_dim(xid, p)
        if min_dim is not None:
            cap = max_factor_dim(gsys, exclude_a1_components=True)[0]
            if min_dim > cap:
                v = CaseVerdict(triple, "ruled_out", [
                    Branch((), "-", "-", "vanishes",
                           f"all H1 modules of {xid} at p={p} have dimension >= "
                           f"{min_dim} > {cap}, the largest radical factor")
                ])
                return v

    sp = _sp_image(xid) if p == 2 else None

    sources = [(str(xid), None)]
    if sp is not None and sp[0] != str(xid):
        sources.append(sp)  # odd-orthogonal X acting through its symplectic image
    if sp is not None and sp[0] == str(xid):
        sources[0] = sp

    for pd in levi_subgroups(gsys):
        if not pd.components:
            continue
        if any(c.id.rank < xid.rank for c in pd.components):
            continue  # a simple subgroup projects faithfully to every factor
        for src_key, sp_nat in sources:
            src_id = parse_type(src_key)[0]
            per_comp = []
            comp_unknown = False
            dead = False
            for comp in pd.components:
                if comp.id.series in ("A", "B", "C", "D"):
                    embs, gaps = _component_embeddings(src_id, comp.id, p)
                    if gaps:
                        comp_unknown = True
                    if not embs:
                        if not gaps:
                            dead = True
                            break
                        per_comp.append([])
                    else:
                        per_comp.append(embs)
                else:
                    status, chains = _exceptional_component_chains(src_id, str(comp.id), p)
                    if status == "impossible":
                        dead = True
                        break
                    per_comp.append([("chain", status, tuple(chains))])
                    if status == "unknown":
                        comp_unknown = True
            if dead:
                continue
            if any(not opts for opts in per_comp):
                if comp_unknown:
                    branches.append(Branch(pd.levi_nodes, pd.type_key(), src_key,
                                           "unknown", "unresolved embedding candidates"))
                continue
            for assignment in itertools.product(*per_comp):
                if any(isinstance(a, tuple) and a and a[0] == "chain" for a in assignment):
                    br = _chain_branch(src_key, p, pd, assignment, h1, sp_nat)
                    branches.append(br)
                    continue
                status, reason, checks = _branch_checks(src_key, p, pd, assignment, h1, sp_nat)
                desc = " | ".join(e.describe() for e in assignment)
                if status == "dead":
                    branches.append(Branch(pd.levi_nodes, pd.type_key(), desc, "dead", reason))
                else:
                    branches.append(Branch(pd.levi_nodes, pd.type_key(), desc, status, "", checks))
            if comp_unknown:
                branches.append(Branch(pd.levi_nodes, pd.type_key(), src_key,
                                       "unknown", "unresolved embedding candidates"))

    branches.sort(key=lambda b: (b.levi_nodes, b.embedding, b.status))
    statuses = {b.status for b in branches}
    if "nonzero" in statuses:
        status = "candidate_found"
    elif "unknown" in statuses:
        status = "needs_manual"
    else:
        status = "ruled_out"
    return CaseVerdict(triple, status, branches)


_chain_data = None


def _chain_restrictions():
    global _chain_data
    if _chain_data is None:
        _chain_data = load_chain_restrictions()
    return _chain_data


def _chain_branch(xkey, p, pd, assignment, h1, sp_nat):
    """Branch through an exceptional Levi component resolved by the
    maximal-subgroup walk; certified only when chain-restriction data covers
    the whole radical."""
    chain_infos = [a for a in assignment if isinstance(a, tuple) and a[0] == "chain"]
    info = chain_infos[0]
    _tag, status, chains = info
    exc_comps = [c for c in pd.components if c.id.series not in ("A", "B", "C", "D")]
    comp = exc_comps[0]
    desc = f"{xkey} inside {comp.id} via " + (", ".join(chains) if chains else "walk")
    if len(pd.components) > 1 or len(chain_infos) > 1 or status == "unknown":
        return Branch(pd.levi_nodes, pd.type_key(), desc, "unknown",
                      "maximal-subgroup descent without restriction data")
    # certified chains: check every radical factor through the data
    checks = []
    worst = "vanishes"
    data = _chain_restrictions()
    for level in q_level_factors(pd):
        for mod_weight, _m in level.factors:
            if not any(mod_weight):
                continue
            resolved = None
            if str(comp.id) == "E6" and sum(mod_weight) == 1:
                for chain in chains:
                    for levi_t, ch_t, cond, factors in data:
                        if levi_t == "E6" and ch_t == chain and cond(p):
                            resolved = factors
                            break
                    if resolved:
                        break
            if resolved is None:
                checks.append(FactorCheck(level.level_index, mod_weight, (),
                                          0, "unknown", "no chain restriction data"))
                worst = _worse(worst, "unknown")
                continue
            for w, m in resolved:
                if not any(w):
                    continue
                outcome, rule = h1_decide(xkey, p, w, h1)
                checks.append(FactorCheck(level.level_index, mod_weight, tuple(w), m,
                                          outcome, "chain data; " + rule))
                worst = _worse(worst, outcome)
    return Branch(pd.levi_nodes, pd.type_key(), desc, worst, "", tuple(checks))


# -- batch drivers -------------------------------------------------------------------


def simple_types_up_to_rank(max_rank: int):
    """All simple types of rank <= max_rank, modulo the low-rank coincidences
    (C2 = B2 and D3 = A3 are kept once, under their B/A names)."""
    out = []
    for series, lo in (("A", 1), ("B", 2), ("C", 3), ("D", 4),
                       ("E", 6), ("F", 4), ("G", 2)):
        r = lo
        while r <= max_rank:
            if series in ("E",) and r not in (6, 7, 8):
                r += 1
                continue
            if series == "F" and r != 4 or series == "G" and r != 2:
                break
            out.append(RootSystemId(series, r))
            r += 1
            if series in ("F", "G"):
                break
    return out


def regenerate_noncr_table(G, p: int, h1=None):
    """Screen every simple type X of rank <= rank(G) against (G, p); returns
    {X: verdict} for the non-ruled-out set."""
    gsys = root_system(G)
    flagged = {}
    for xid in simple_types_up_to_rank(gsys.rank):
        verdict = screen_triple(xid, gsys, p, h1=h1)
        if verdict.status != "ruled_out":
            flagged[str(xid)] = verdict.status
    return flagged


def load_expected_noncr_primes(path=None):
    import os

    from .modp import data_dir

    if path is None:
        path = os.path.join(data_dir(), "noncr_prime_table.txt")
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            x, g, primes = body.split()
            out[(x, g)] = () if primes == "-" else tuple(int(q) for q in primes.split(","))
    return out
