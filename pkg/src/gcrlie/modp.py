"""Characteristic-p layer: Steinberg factorization, Frobenius twists, the
Jantzen sum formula, and a composition-factor oracle backed by bundled data
tables.

The decomposition table is deliberately data, not algorithm: entries are
shipped in a line-oriented text file and validated at load time.  The sum
formula closes the gap for irreducible Weyl modules; everything else is an
explicit "unknown", never a guess.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

from .charcalc import (
    Character,
    DEFAULT_DIM_CAP,
    WeylCombination,
    weyl_character,
    weyl_dim,
)
from .rootcore import (
    LieError,
    RootSystemId,
    Weight,
    dominance_leq,
    dot_dominant_representative,
    root_system,
    weyl_orbit,
)

DATA_ENV_VAR = "GCRLIE_DATA_DIR"


def data_dir() -> str:
    override = os.environ.get(DATA_ENV_VAR)
    if override:
        return override
    return os.path.join(os.path.dirname(__file__), "data")


class CoverageGap(Exception):
    """A query fell outside the certified tables; distinct from invalid input."""

    def __init__(self, what: str, system=None, p=None, weight=None):
        self.system = getattr(system, "key", system)
        self.p = p
        self.weight = weight
        super().__init__(what)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def _check_prime(p):
    if not _is_prime(p):
        raise LieError(f"{p} is not a prime")


@dataclass(frozen=True)
class SteinbergFactorization:
    """L(lam) = tensor over (restricted weight, twist) of L(w)^[twist]."""

    factors: tuple[tuple[Weight, int], ...]
    prime: int

    def restricted_part(self) -> Weight | None:
        for w, t in self.factors:
            if t == 0:
                return w
        return None

    def total_weight(self, rank: int) -> Weight:
        out = [0] * rank
        for w, t in self.factors:
            for i, a in enumerate(w):
                out[i] += a * self.prime**t
        return tuple(out)


def steinberg_decompose(system, lam: Weight, p: int) -> SteinbergFactorization:
    """Coordinate-wise p-adic expansion of a dominant weight."""
    sys_ = root_system(system)
    _check_prime(p)
    if not sys_.is_dominant(lam):
        raise LieError(f"{lam} is not dominant")
    rest = list(lam)
    factors = []
    t = 0
    while any(rest):
        digit = tuple(a % p for a in rest)
        if any(digit):
            factors.append((digit, t))
        rest = [a // p for a in rest]
        t += 1
    return SteinbergFactorization(tuple(factors), p)


def frobenius_twist_character(c: Character, p: int, n: int) -> Character:
    _check_prime(p)
    if n < 0:
        raise LieError("negative twist")
    if n == 0:
        return c
    scale = p**n
    return Character(c.system, {tuple(a * scale for a in w): m for w, m in c.items()})


def _padic_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def jantzen_sum(system, lam: Weight, p: int, cap: int | None = DEFAULT_DIM_CAP) -> WeylCombination:
    """Sum of the Jantzen filtration characters, as a combination of Weyl
    characters (coefficients may be negative for deep filtrations).

    Empty combination iff V(lam) is irreducible in characteristic p.
    """
    sys_ = root_system(system)
    _check_prime(p)
    if not sys_.is_dominant(lam):
        raise LieError(f"{lam} is not dominant")
    d = weyl_dim(sys_, lam)
    if cap is not None and d > cap:
        raise LieError(f"dim V({lam}) = {d} exceeds cap {cap}")
    shifted = tuple(a + 1 for a in lam)
    terms: dict[Weight, int] = {}
    for beta in sys_.positive_roots:
        pr = sys_.pair_coroot(shifted, beta)
        beta_omega = sys_.root_to_omega(beta)
        mp = p
        while mp < pr:
            val = _padic_val(mp, p)
            off = pr - mp
            mu = tuple(lam[j] - off * beta_omega[j] for j in range(sys_.rank))
            rep, parity = dot_dominant_representative(sys_, mu)
            if rep is not None:
                sign = -1 if parity else 1
                terms[rep] = terms.get(rep, 0) + sign * val
            mp += p
    terms = {w: c for w, c in terms.items() if c}
    return WeylCombination(sys_, terms)


def weyl_module_is_irreducible(system, lam: Weight, p: int, cap=DEFAULT_DIM_CAP) -> bool:
    return jantzen_sum(system, lam, p, cap=cap).is_zero()


# -- decomposition tables -----------------------------------------------------


def parse_weight(text: str) -> Weight:
    return tuple(int(x) for x in text.split(","))


def format_weight(w: Weight) -> str:
    return ",".join(str(a) for a in w)


class DecompositionTable:
    """Composition factors of Weyl modules: (type, rank, p, weight) ->
    tuple of (weight, multiplicity), plus a provenance tag per entry."""

    def __init__(self):
        self.entries: dict[tuple[str, int, int, Weight], tuple[tuple[Weight, int], ...]] = {}
        self.provenance: dict[tuple[str, int, int, Weight], str] = {}

    def add(self, series, rank, p, weight, factors, provenance="unspecified"):
        key = (series, rank, p, tuple(weight))
        self.entries[key] = tuple((tuple(w), int(m)) for w, m in factors)
        self.provenance[key] = provenance

    def get(self, series, rank, p, weight):
        return self.entries.get((series, rank, p, tuple(weight)))

    def __len__(self):
        return len(self.entries)

    @staticmethod
    def parse_line(line: str):
        body = line.split("#", 1)[0].strip()
        if not body:
            return None
        head, _, prov = body.partition("|")
        prov = prov.strip() or "unspecified"
        fields = head.split()
        if len(fields) < 5 or fields[3] != "->":
            raise LieError(f"bad decomposition-table line: {line!r}")
        series, rank = fields[0][0], int(fields[0][1:])
        p = int(fields[1])
        weight = parse_weight(fields[2])
        factors = []
        for tok in fields[4:]:
            wtxt, _, mtxt = tok.partition(":")
            factors.append((parse_weight(wtxt), int(mtxt or 1)))
        return series, rank, p, weight, tuple(factors), prov

    @classmethod
    def load(cls, path: str, validate: bool = True) -> "DecompositionTable":
        table = cls()
        with open(path, encoding="utf-8") as fh:
            for ln, line in enumerate(fh, 1):
                try:
                    parsed = cls.parse_line(line)
                except Exception as exc:
                    raise LieError(f"{path}:{ln}: {exc}") from exc
                if parsed is None:
                    continue
                series, rank, p, weight, factors, prov = parsed
                table.add(series, rank, p, weight, factors, prov)
        if validate:
            table.validate()
        return table

    def validate(self):
        """Dimension bookkeeping: sum of factor dims equals the Weyl dimension
        whenever every factor dimension is resolvable from this table."""
        for (series, rank, p, weight), factors in self.entries.items():
            sys_ = root_system(f"{series}{rank}")
            if not sys_.is_dominant(weight):
                raise LieError(f"table entry {series}{rank} {weight}: not dominant")
            total = weyl_dim(sys_, weight)
            acc = 0
            ok = True
            for w, m in factors:
                if m <= 0 or not sys_.is_dominant(w):
                    raise LieError(f"table entry {series}{rank} {weight}: bad factor {w}:{m}")
                if w != weight and not dominance_leq(sys_, w, weight):
                    raise LieError(
                        f"table entry {series}{rank} p={p} {weight}: factor {w} not below"
                    )
                try:
                    acc += m * simple_dim_p(sys_, w, p, table=self)
                except CoverageGap:
                    ok = False
                    break
            if ok and acc != total:
                raise LieError(
                    f"table entry {series}{rank} p={p} {weight}: factor dims sum to "
                    f"{acc}, Weyl dimension is {total}"
                )


_default_table: DecompositionTable | None = None
_default_table_path: str | None = None


def default_table() -> DecompositionTable:
    global _default_table, _default_table_path
    path = os.path.join(data_dir(), "weyl_decompositions.txt")
    if _default_table is None or _default_table_path != path:
        _default_table = DecompositionTable.load(path)
        _default_table_path = path
    return _default_table


_pinned_dims: dict[str, dict] = {}


def pinned_simple_dims() -> dict:
    """Simple-module dimensions pinned from published data; last-resort
    fallback for simple_dim_p when the factor table has no entry."""
    path = os.path.join(data_dir(), "simple_dims.txt")
    if path not in _pinned_dims:
        out = {}
        if os.path.exists(path):
            with open(path, encoding="utf-8") as fh:
                for line in fh:
                    body = line.split("#", 1)[0].split("|", 1)[0].strip()
                    if not body:
                        continue
                    fields = body.split()
                    if len(fields) != 4:
                        raise LieError(f"bad simple_dims line: {line!r}")
                    key = (fields[0], int(fields[1]), parse_weight(fields[2]))
                    out[key] = int(fields[3])
        _pinned_dims[path] = out
    return _pinned_dims[path]


def char_p_composition_factors(system, lam: Weight, p: int, table=None, cap=DEFAULT_DIM_CAP):
    """Composition factors of V(lam) in characteristic p, from the bundled
    table, or [(lam, 1)] when the sum formula certifies irreducibility.
    Raises CoverageGap otherwise; never guesses."""
    sys_ = root_system(system)
    _check_prime(p)
    if not sys_.is_dominant(lam):
        raise LieError(f"{lam} is not dominant")
    if table is None:
        table = default_table()
    if len(sys_.ids) == 1:
        hit = table.get(sys_.ids[0].series, sys_.ids[0].rank, p, lam)
        if hit is not None:
            return list(hit)
        if weyl_dim(sys_, lam) <= cap and weyl_module_is_irreducible(sys_, lam, p, cap=cap):
            return [(tuple(lam), 1)]
        raise CoverageGap(
            f"no decomposition-table entry for {sys_.key} p={p} weight {lam}",
            sys_, p, tuple(lam),
        )
    # products: factor lists multiply across blocks
    out = [((), 1)]
    for id_, lo, hi in sys_.blocks:
        part = char_p_composition_factors(root_system(id_), lam[lo:hi], p, table, cap)
        out = [(w + tuple(pw), m * pm) for w, m in out for pw, pm in part]
    return out


def _resolve_dim(sys_, lam, p, table, depth, seen):
    if depth > 10:
        raise LieError("simple_dim_p: recursion depth exceeded (corrupt table?)")
    key = (sys_.key, tuple(lam), p)
    if key in seen:
        raise LieError("simple_dim_p: cyclic table data")
    seen = seen | {key}
    sf = steinberg_decompose(sys_, lam, p)
    if len(sf.factors) == 0:
        return 1
    if len(sf.factors) > 1 or sf.factors[0][1] != 0:
        out = 1
        for w, _t in sf.factors:
            out *= _resolve_dim(sys_, w, p, table, depth, seen)
        return out
    try:
        factors = char_p_composition_factors(sys_, lam, p, table=table)
    except CoverageGap:
        pin = pinned_simple_dims().get((sys_.key, p, tuple(lam)))
        if pin is not None:
            return pin
        raise
    total = weyl_dim(sys_, lam)
    for w, m in factors:
        if tuple(w) == tuple(lam):
            continue
        total -= m * _resolve_dim(sys_, w, p, table, depth + 1, seen)
    if total <= 0:
        raise LieError(f"simple_dim_p: inconsistent table near {sys_.key} {lam} p={p}")
    return total


_dim_cache: dict[tuple[str, Weight, int], int] = {}


def simple_dim_p(system, lam: Weight, p: int, table=None) -> int:
    """dim L(lam) in characteristic p via Steinberg factorization and the
    decomposition table; raises CoverageGap when a needed entry is missing."""
    sys_ = root_system(system)
    _check_prime(p)
    if not sys_.is_dominant(lam):
        raise LieError(f"{lam} is not dominant")
    caching = table is None
    if caching:
        hit = _dim_cache.get((sys_.key, tuple(lam), p))
        if hit is not None:
            return hit
        table = default_table()
    if len(sys_.blocks) > 1:
        out = _prod(
            simple_dim_p(root_system(id_), lam[lo:hi], p, table)
            for id_, lo, hi in sys_.blocks
        )
    else:
        out = _resolve_dim(sys_, tuple(lam), p, table, 0, frozenset())
    if caching:
        _dim_cache[(sys_.key, tuple(lam), p)] = out
    return out


def _prod(it):
    out = 1
    for x in it:
        out *= x
    return out


_simple_char_cache: dict[tuple[str, Weight, int], Character] = {}


def simple_character_p(system, lam: Weight, p: int, table=None) -> Character:
    """Formal character of L(lam) in characteristic p (table-backed)."""
    sys_ = root_system(system)
    _check_prime(p)
    if table is None:
        table = default_table()
    key = (sys_.key, tuple(lam), p)
    hit = _simple_char_cache.get(key)
    if hit is not None:
        return hit
    if len(sys_.blocks) > 1:
        parts = []
        for id_, lo, hi in sys_.blocks:
            parts.append((simple_character_p(root_system(id_), lam[lo:hi], p, table), lo))
        mults = {(0,) * sys_.rank: 1}
        for ch, lo in parts:
            nxt: dict[Weight, int] = {}
            for w, m in mults.items():
                for bw, bm in ch.items():
                    full = list(w)
                    full[lo : lo + len(bw)] = bw
                    t = tuple(full)
                    nxt[t] = nxt.get(t, 0) + m * bm
            mults = nxt
        out = Character(sys_, mults)
        _simple_char_cache[key] = out
        return out
    sf = steinberg_decompose(sys_, lam, p)
    if len(sf.factors) == 0:
        out = Character(sys_, {(0,) * sys_.rank: 1})
    elif len(sf.factors) > 1 or sf.factors[0][1] != 0:
        out = Character(sys_, {(0,) * sys_.rank: 1})
        from .charcalc import tensor_character

        for w, t in sf.factors:
            out = tensor_character(
                out, frobenius_twist_character(simple_character_p(sys_, w, p, table), p, t)
            )
    else:
        mults = dict(weyl_character(sys_, lam).mults)
        for w, m in char_p_composition_factors(sys_, lam, p, table=table):
            if tuple(w) == tuple(lam):
                continue
            for ww, mm in simple_character_p(sys_, w, p, table).items():
                nm = mults.get(ww, 0) - m * mm
                if nm:
                    mults[ww] = nm
                else:
                    mults.pop(ww, None)
        out = Character(sys_, mults)
        if any(m < 0 for m in out.mults.values()):
            raise LieError(f"inconsistent table data at {sys_.key} {lam} p={p}")
    _simple_char_cache[key] = out
    return out


def decompose_into_simples_p(c: Character, p: int, table=None):
    """Write a character as a non-negative combination of characteristic-p
    simple characters by highest-weight stripping.  Raises CoverageGap when a
    needed simple character is not table-resolvable."""
    from .charcalc import _maximal_dominant

    sys_ = c.system
    work = dict(c.mults)
    out: dict[Weight, int] = {}
    guard = 0
    while True:
        dom = [w for w, m in work.items() if m and all(a >= 0 for a in w)]
        if not dom:
            if any(work.values()):
                raise LieError("character does not reduce to simple characters")
            break
        top = _maximal_dominant(sys_, dom)
        coeff = work[top]
        if coeff < 0:
            raise LieError("negative multiplicity while stripping simples")
        out[top] = out.get(top, 0) + coeff
        for w, m in simple_character_p(sys_, top, p, table).items():
            nm = work.get(w, 0) - coeff * m
            if nm:
                work[w] = nm
            else:
                work.pop(w, None)
        guard += 1
        if guard > 20000:
            raise LieError("decompose_into_simples_p failed to terminate")
    return sorted(out.items())
