"""Bundled rational-cohomology data: the certified H^1 non-vanishing table
for low-rank groups, the Frobenius-twist reduction rule with its symplectic
exception, the G2/p=5 dimension rule, and the maximal-subgroup list for the
exceptional groups.

All queries outside the certified coverage fail loudly (CoverageGap) rather
than defaulting to "vanishes"; screening soundness depends on it.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

from .modp import CoverageGap, data_dir, parse_weight, simple_dim_p
from .rootcore import LieError, RootSystemId, Weight, parse_type, root_system

# natural symplectic module per group covered by the twist exception
SYMPLECTIC_NATURAL = {
    "A1": (1,),
    "B2": (0, 1),
    "C2": (1, 0),
    "C3": (1, 0, 0),
    "C4": (1, 0, 0, 0),
}


@dataclass(frozen=True)
class PCondition:
    """Prime-set predicate: 'any', 'p=k', 'p>=k' or 'p!=k1,k2'."""

    text: str

    def __call__(self, p: int) -> bool:
        t = self.text
        if t == "any":
            return True
        if t.startswith("p>="):
            return p >= int(t[3:])
        if t.startswith("p!="):
            return p not in {int(x) for x in t[3:].split(",")}
        if t.startswith("p="):
            return p == int(t[2:])
        raise LieError(f"bad p-condition {t!r}")

    def pinned_prime(self):
        return int(self.text[2:]) if self.text.startswith("p=") else None


def _parse_affine(coord: str):
    """Coordinate affine in p: 'p-2' -> (1,-2); '3' -> (0,3); '2p-2' -> (2,-2)."""
    coord = coord.strip()
    m = re.fullmatch(r"(?:(\d*)p)?([+-]?\d+)?", coord)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise LieError(f"bad affine coordinate {coord!r}")
    a = 0
    if "p" in coord:
        a = int(m.group(1)) if m.group(1) else 1
    b = int(m.group(2)) if m.group(2) else 0
    return (a, b)


def _parse_factor(tok: str):
    m = re.fullmatch(r"\(([^)]*)\)\[(\d+)\]", tok.strip())
    if not m:
        raise LieError(f"bad factor token {tok!r}")
    coords = tuple(_parse_affine(c) for c in m.group(1).split(","))
    return coords, int(m.group(2))


@dataclass(frozen=True)
class H1Entry:
    group: RootSystemId
    p_condition: PCondition
    expr: tuple  # ((affine coords, twist), ...)
    h1_dim: int
    mod_dim: str

    def instantiate(self, p: int):
        """Concrete (weight, twist) list at a prime satisfying the condition,
        with trivial factors dropped; None if p fails the condition."""
        if not self.p_condition(p):
            return None
        out = []
        for coords, twist in self.expr:
            w = tuple(a * p + b for a, b in coords)
            if any(x < 0 or x >= p for x in w):
                raise LieError(f"instantiated weight {w} not restricted at p={p}")
            if any(w):
                out.append((w, twist))
        return out

    def dim_at(self, p: int, table=None):
        inst = self.instantiate(p)
        if inst is None:
            return None
        out = 1
        for w, _t in inst:
            out *= simple_dim_p(root_system(self.group), w, p, table=table)
        return out

    def expected_dim(self, p: int):
        """Printed dimension cell evaluated at p, or None if unstated there."""
        t = self.mod_dim
        if t == "?":
            return None
        if t == "2p-2":
            return 2 * p - 2
        if t == "(p-1)^3-1":
            return (p - 1) ** 3 - 1
        if "@" in t:
            val, cond = t.split("@")
            return int(val) if p == int(cond[2:]) else None
        return int(t)


def normalize_twist(group, factors, p: int):
    """Strip the common Frobenius twist from a factor list.

    Returns (normalized factors, stripped amount, caveat) where the caveat
    marks the one exception to twist-invariance of H^1: the normalized form
    is the natural module of a symplectic-type group, so whether the original
    carried a twist is part of the data, not noise.
    """
    sys_ = root_system(group)
    factors = sorted(
        ((tuple(w), int(t)) for w, t in factors if any(w)), key=lambda x: (x[1], x[0])
    )
    if not factors:
        return (), 0, False
    k = min(t for _w, t in factors)
    normed = tuple((w, t - k) for w, t in factors)
    nat = SYMPLECTIC_NATURAL.get(sys_.key)
    caveat = nat is not None and normed == ((nat, 0),)
    return normed, k, caveat


class H1Table:
    def __init__(self, entries):
        self.entries = tuple(entries)

    def rows_for(self, group, p: int):
        key = root_system(group).key
        return [e for e in self.entries if str(e.group) == key and e.p_condition(p)]

    @staticmethod
    def covers(group, p: int) -> bool:
        key = root_system(group).key
        if key in ("A1", "A2", "B2"):
            return True
        if key == "G2":
            return p in (2, 3) or p >= 13
        if key in ("A3", "C3", "C4"):
            return p == 2
        return False

    def nonvanishing(self, group, p: int, factors) -> bool:
        """True iff H^1(group, tensor of twisted simples) is non-zero, decided
        by the certified table; CoverageGap outside the certified range."""
        sys_ = root_system(group)
        if not self.covers(sys_, p):
            raise CoverageGap(
                f"H^1 table does not cover {sys_.key} at p={p}", sys_, p
            )
        q_norm, q_strip, q_caveat = normalize_twist(sys_, factors, p)
        if not q_norm:
            return False  # trivial module
        for entry in self.rows_for(sys_, p):
            inst = entry.instantiate(p)
            if not inst:
                continue
            r_norm, r_strip, r_caveat = normalize_twist(sys_, inst, p)
            if q_norm != r_norm:
                continue
            if q_caveat or r_caveat:
                # the symplectic natural: a twist is required, not optional
                if (q_strip >= 1) == (r_strip >= 1):
                    return True
                continue
            return True
        return False

    def min_module_dim(self, group, p: int, table=None):
        """Smallest dimension among instantiated rows, or None when some row
        dimension cannot be resolved (shortcuts must not use it then)."""
        dims = []
        for entry in self.rows_for(group, p):
            try:
                d = entry.dim_at(p, table=table)
            except CoverageGap:
                return None
            if d is None:
                continue
            dims.append(d)
        if not dims:
            return None
        return min(dims)

    def validate(self, primes=(2, 3, 5, 7)):
        """Check every printed dimension cell against simple_dim_p."""
        checked = 0
        for entry in self.entries:
            for p in primes:
                if not entry.p_condition(p):
                    continue
                expected = entry.expected_dim(p)
                if expected is None:
                    continue
                got = entry.dim_at(p)
                if got != expected:
                    raise LieError(
                        f"H1 row {entry.group} {entry.p_condition.text} "
                        f"{entry.mod_dim}: dimension {got} != printed {expected} at p={p}"
                    )
                checked += 1
        return checked


def load_h1_table(path: str | None = None) -> H1Table:
    if path is None:
        path = os.path.join(data_dir(), "h1_table.txt")
    entries = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            fields = body.split()
            if len(fields) != 5:
                raise LieError(f"{path}:{ln}: expected 5 fields")
            group = parse_type(fields[0])[0]
            cond = PCondition(fields[1])
            expr = tuple(_parse_factor(tok) for tok in fields[2].split("*"))
            entries.append(H1Entry(group, cond, expr, int(fields[3]), fields[4]))
    return H1Table(entries)


_default_h1: H1Table | None = None


def default_h1_table() -> H1Table:
    global _default_h1
    if _default_h1 is None:
        _default_h1 = load_h1_table()
    return _default_h1


def h1_nonvanishing(group, p: int, factors) -> bool:
    return default_h1_table().nonvanishing(group, p, factors)


def g2_p5_rule(dim: int) -> bool:
    """G2 in characteristic 5: H^1 can only be non-zero on simples of
    dimension greater than 56.  Returns True when non-vanishing is possible."""
    return dim > 56


# -- maximal subgroups ---------------------------------------------------------


@dataclass(frozen=True)
class MaxSubgroupEntry:
    ambient: RootSystemId
    factors: tuple  # ((RootSystemId, tilde flag), ...)
    p_condition: PCondition
    subsystem: bool

    def type_key(self):
        return "x".join(("~" if t else "") + str(i) for i, t in self.factors)


def _parse_typed_product(text: str):
    out = []
    for part in text.split("x"):
        tilde = part.startswith("~")
        ids = parse_type(part.lstrip("~"))
        out.append((ids[0], tilde))
    return tuple(out)


def load_max_subgroups(path: str | None = None):
    if path is None:
        path = os.path.join(data_dir(), "max_subgroups.txt")
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            amb, kind, typ, cond = body.split()
            entries.append(
                MaxSubgroupEntry(
                    parse_type(amb)[0],
                    _parse_typed_product(typ),
                    PCondition(cond),
                    kind == "subsystem",
                )
            )
    return tuple(entries)


_default_max: tuple | None = None


def default_max_subgroups():
    global _default_max
    if _default_max is None:
        _default_max = load_max_subgroups()
    return _default_max


def maximal_subgroups(ambient, p: int):
    """Reductive maximal subgroups (no A1 factors, no connected centre) of an
    exceptional group at a given prime."""
    key = root_system(ambient).key
    return [
        e for e in default_max_subgroups() if str(e.ambient) == key and e.p_condition(p)
    ]


def load_chain_restrictions(path: str | None = None):
    """Certified composition factors of the 27-dimensional E6-Levi module
    restricted through a maximal-subgroup chain: (levi, chain, p) coverage."""
    if path is None:
        path = os.path.join(data_dir(), "levi_chain_restrictions.txt")
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            fields = body.split()
            levi, chain, cond = fields[0], fields[1], PCondition(fields[2])
            factors = []
            for tok in fields[3:]:
                wtxt, _, mtxt = tok.partition(":")
                factors.append((parse_weight(wtxt), int(mtxt or 1)))
            out.append((levi, chain, cond, tuple(factors)))
    return tuple(out)
