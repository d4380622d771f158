"""Level decomposition of the unipotent radical of a parabolic: group the
radical's roots by total coefficient over the non-Levi nodes, read each level
as a module over the Levi's derived subgroup, and identify the high weights
and dimensions of its factors.

Each level is spanned by its root spaces, so the factor bookkeeping is exact:
the multiset of Levi-weights of the level's roots must decompose into Weyl
characters with non-negative coefficients, and a mismatch is a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .charcalc import Character, decompose_into_weyl, weyl_dim
from .rootcore import LieError, RootSystemId, RootVector, Weight, minus_w0, root_system
from .subgroups import ParabolicDatum, levi_subgroups, make_parabolic


@dataclass(frozen=True)
class AbsLevel:
    level_index: int
    roots: tuple[RootVector, ...]
    factors: tuple[tuple[Weight, int], ...]  # (Levi high weight, multiplicity)

    def factor_dims(self, levi_system):
        return tuple(weyl_dim(levi_system, w) for w, _m in self.factors)


def levi_weight(pd: ParabolicDatum, beta: RootVector) -> Weight:
    """Pairing vector of an ambient root against the Levi's simple coroots,
    in the component-Bourbaki coordinate order."""
    sys_ = root_system(pd.ambient)
    omega = sys_.root_to_omega(beta)
    return tuple(omega[j] for comp in pd.components for j in comp.members)


def q_level_factors(pd: ParabolicDatum) -> list[AbsLevel]:
    """Levels of the unipotent radical with their Levi-module factors."""
    sys_ = root_system(pd.ambient)
    nodeset = set(pd.levi_nodes)
    nonlevi = [i for i in range(sys_.rank) if i not in nodeset]
    by_level: dict[int, list[RootVector]] = {}
    for b in pd.q_roots:
        lvl = sum(b[i] for i in nonlevi)
        by_level.setdefault(lvl, []).append(b)
    out = []
    levi_sys = pd.levi_system() if pd.components else None
    for lvl in sorted(by_level):
        roots = tuple(sorted(by_level[lvl]))
        if levi_sys is None:
            factors = (((), len(roots)),)
        else:
            mults: dict[Weight, int] = {}
            for b in roots:
                w = levi_weight(pd, b)
                mults[w] = mults.get(w, 0) + 1
            ch = Character(levi_sys, mults)
            comb = decompose_into_weyl(ch)
            if any(c < 0 for c in comb.terms.values()):
                raise LieError(
                    f"non-semisimple level decomposition at {pd.ambient} "
                    f"levi={pd.levi_nodes} level {lvl}"
                )
            factors = tuple(sorted(comb.terms.items()))
            assert sum(m * weyl_dim(levi_sys, w) for w, m in factors) == len(roots)
        out.append(AbsLevel(lvl, roots, factors))
    return out


def _component_whitelist_ok(id_: RootSystemId, block: Weight) -> bool:
    """Allowed non-trivial high weights per simple Levi factor: fundamental
    weights lambda_j with j <= 3 or dual for type A; natural or half-spin for
    type D; the 27- and 56-dimensional fundamentals for E6/E7."""
    if not any(block):
        return True
    if sum(block) != 1:
        return False
    j = block.index(1) + 1
    n = id_.rank
    if id_.series == "A":
        return min(j, n + 1 - j) <= 3
    if id_.series == "D":
        return j in (1, n - 1, n)
    if id_.series == "E" and n == 6:
        return j in (1, 6)
    if id_.series == "E" and n == 7:
        return j == 7
    return False


@dataclass
class AbsShapeReport:
    ambient: str
    checked_factors: int
    violations: tuple


def verify_abs_shapes(ambient) -> AbsShapeReport:
    """Sweep every parabolic and check each non-trivial factor's high weight
    against the allowed shapes, component by component."""
    sys_ = root_system(ambient)
    if len(sys_.ids) != 1 or sys_.ids[0].series not in ("E", "F", "G"):
        raise LieError("shape verification targets the exceptional ambients")
    violations = []
    checked = 0
    for pd in levi_subgroups(sys_):
        if not pd.components:
            continue
        for level in q_level_factors(pd):
            for w, _m in level.factors:
                if w == ():
                    continue
                checked += 1
                off = 0
                for comp in pd.components:
                    block = w[off : off + comp.id.rank]
                    off += comp.id.rank
                    if comp.id.series in ("A", "D", "E"):
                        if not _component_whitelist_ok(comp.id, block):
                            violations.append((pd.levi_nodes, level.level_index, w))
                            break
                    # B/C/F/G factors occur only for F4/G2 ambients; the shape
                    # list does not constrain them
    return AbsShapeReport(sys_.key, checked, tuple(violations))


def max_factor_dim(ambient, exclude_a1_components: bool = False,
                   require_nonsimple: bool = False):
    """Exhaustive maximum of non-trivial factor dimensions over all Levis.

    Returns (dimension, witness parabolic, witness weight)."""
    sys_ = root_system(ambient)
    best = (0, None, None)
    for pd in levi_subgroups(sys_):
        if not pd.components:
            continue
        if exclude_a1_components and any(c.id.rank == 1 for c in pd.components):
            continue
        if require_nonsimple and len(pd.components) < 2:
            continue
        levi_sys = pd.levi_system()
        for level in q_level_factors(pd):
            for w, _m in level.factors:
                if w == () or not any(w):
                    continue
                d = weyl_dim(levi_sys, w)
                if d > best[0]:
                    best = (d, pd, w)
    return best
