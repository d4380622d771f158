"""Exact characteristic-zero character calculus.

Characters are finite weight -> multiplicity maps attached to a RootSystem.
Everything is computed in exact integer arithmetic: Weyl dimension by the
product formula, weight multiplicities by Freudenthal's recursion, tensor
products by convolution, exterior powers on the expanded weight multiset,
and decomposition into Weyl characters by highest-weight stripping.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import prod

from .rootcore import (
    LieError,
    RootSystem,
    Weight,
    dominance_leq,
    dominant_representative,
    minus_w0,
    root_system,
    weyl_orbit,
)

#: refuse Freudenthal expansions beyond this dimension unless overridden
DEFAULT_DIM_CAP = 10**6


class CapExceeded(LieError):
    """A character computation exceeded the configured dimension cap."""


class Character:
    """Formal character: finite mapping weight -> positive multiplicity."""

    __slots__ = ("system", "mults")

    def __init__(self, system, mults):
        self.system = root_system(system)
        self.mults = {tuple(w): int(m) for w, m in dict(mults).items() if m}

    def dim(self) -> int:
        return sum(self.mults.values())

    def items(self):
        return self.mults.items()

    def get(self, w, default=0):
        return self.mults.get(tuple(w), default)

    def __eq__(self, other):
        return (
            isinstance(other, Character)
            and self.system.key == other.system.key
            and self.mults == other.mults
        )

    def __repr__(self):
        return f"Character({self.system.key}, dim={self.dim()})"

    def dominant_part(self):
        return {w: m for w, m in self.mults.items() if all(a >= 0 for a in w)}

    def is_weyl_invariant(self) -> bool:
        sys_ = self.system
        for w, m in self.mults.items():
            for i in range(sys_.rank):
                if self.mults.get(sys_.reflect(i, w), 0) != m:
                    return False
        return True


def trivial_character(system) -> Character:
    sys_ = root_system(system)
    return Character(sys_, {(0,) * sys_.rank: 1})


def weyl_dim(system, lam: Weight) -> int:
    """Weyl dimension formula, evaluated exactly."""
    sys_ = root_system(system)
    if len(lam) != sys_.rank:
        raise LieError("rank mismatch")
    if not sys_.is_dominant(lam):
        raise LieError(f"{lam} is not dominant")
    rho = sys_.rho
    shifted = tuple(a + 1 for a in lam)
    num = prod(sys_.pair_coroot(shifted, b) for b in sys_.positive_roots)
    den = prod(sys_.pair_coroot(rho, b) for b in sys_.positive_roots)
    assert num % den == 0
    return num // den


def _dominant_weights_below(sys_: RootSystem, lam: Weight):
    """All dominant mu with lam - mu a non-negative root-lattice vector,
    together with the root coordinates of lam - mu."""
    bounds = sys_.weight_to_root_coords(lam)
    box = [int(b) for b in bounds]  # dominant => coords >= 0
    if any(b < 0 for b in bounds):
        raise LieError("internal: non-dominant highest weight")
    out = []
    rows = sys_.simple_omega
    n = sys_.rank

    def rec(i, cur, weight):
        if i == n:
            if all(a >= 0 for a in weight):
                out.append((tuple(weight), tuple(cur)))
            return
        for c in range(box[i] + 1):
            if c and any(weight[j] - c * rows[i][j] > lam[j] + 50 for j in ()):
                pass
            cur.append(c)
            rec(i + 1, cur, [weight[j] - c * rows[i][j] for j in range(n)])
            cur.pop()

    rec(0, [], list(lam))
    return out


def _freudenthal_dominant(sys_: RootSystem, lam: Weight):
    """Dominant weight multiplicities of V(lam) by Freudenthal's recursion."""
    dom = _dominant_weights_below(sys_, lam)
    # order by height of lam-mu, top down
    dom.sort(key=lambda t: (sum(t[1]), t[0]))
    table: dict[Weight, int] = {}
    rho2 = tuple(2 * a + 2 for a in lam)  # lam + mu + 2 rho at mu = lam
    for mu, delta in dom:
        if sum(delta) == 0:
            table[mu] = 1
            continue
        acc = 0
        for beta in sys_.positive_roots:
            beta_omega = sys_.root_to_omega(beta)
            bb = 2 * sys_.root_half_length[beta]  # (beta, beta)
            nu_beta = sys_.bilinear_weight_root(mu, beta)  # (mu, beta)
            k = 1
            while True:
                nu = tuple(mu[j] + k * beta_omega[j] for j in range(sys_.rank))
                rep, _ = dominant_representative(sys_, nu)
                m = table.get(rep)
                if m is None:
                    break
                acc += m * (nu_beta + k * bb)
                k += 1
        # denominator (lam+mu+2rho, lam-mu) with lam-mu = sum delta_i alpha_i
        lm2 = tuple(lam[j] + mu[j] + 2 for j in range(sys_.rank))
        den = sum(delta[i] * lm2[i] * sys_.d[i] for i in range(sys_.rank))
        assert den > 0 and (2 * acc) % den == 0, (lam, mu)
        table[mu] = (2 * acc) // den
    return table


def freudenthal_character(system, lam: Weight, cap: int | None = DEFAULT_DIM_CAP) -> Character:
    """Full weight multiset of the Weyl module V(lam)."""
    sys_ = root_system(system)
    if not sys_.is_dominant(lam):
        raise LieError(f"{lam} is not dominant")
    d = weyl_dim(sys_, lam)
    if cap is not None and d > cap:
        raise CapExceeded(f"dim V({lam}) = {d} exceeds cap {cap}")
    if len(sys_.blocks) > 1:
        # product system: convolve per-block characters
        chars = []
        for id_, lo, hi in sys_.blocks:
            blk = root_system(id_)
            chars.append((freudenthal_character(blk, lam[lo:hi], cap=None), lo))
        mults = {(0,) * sys_.rank: 1}
        for ch, lo in chars:
            nxt: dict[Weight, int] = {}
            for w, m in mults.items():
                for bw, bm in ch.items():
                    full = list(w)
                    full[lo : lo + len(bw)] = bw
                    t = tuple(full)
                    nxt[t] = nxt.get(t, 0) + m * bm
            mults = nxt
        return Character(sys_, mults)
    table = _freudenthal_dominant(sys_, lam)
    mults: dict[Weight, int] = {}
    for mu, m in table.items():
        for w in weyl_orbit(sys_, mu):
            mults[w] = m
    ch = Character(sys_, mults)
    assert ch.dim() == d, (lam, ch.dim(), d)
    return ch


_freud_cache: dict[tuple[str, Weight], Character] = {}


def weyl_character(system, lam: Weight, cap=DEFAULT_DIM_CAP) -> Character:
    """Cached Freudenthal character of V(lam)."""
    sys_ = root_system(system)
    key = (sys_.key, tuple(lam))
    ch = _freud_cache.get(key)
    if ch is None:
        ch = freudenthal_character(sys_, lam, cap=cap)
        _freud_cache[key] = ch
    return ch


def tensor_character(c1: Character, c2: Character) -> Character:
    if c1.system.key != c2.system.key:
        raise LieError("tensor_character: mismatched root systems")
    mults: dict[Weight, int] = {}
    for w1, m1 in c1.items():
        for w2, m2 in c2.items():
            t = tuple(a + b for a, b in zip(w1, w2))
            mults[t] = mults.get(t, 0) + m1 * m2
    return Character(c1.system, mults)


def exterior_power_character(c: Character, r: int) -> Character:
    """Character of the r-th exterior power (elementary symmetric function of
    the expanded weight multiset)."""
    if r < 0:
        raise LieError("negative exterior power")
    if r == 0:
        return trivial_character(c.system)
    n = c.dim()
    if r > n:
        return Character(c.system, {})
    if n > 400:
        raise CapExceeded(f"exterior power on dimension {n} refused")
    expanded = []
    for w, m in sorted(c.items()):
        expanded.extend([w] * m)
    mults: dict[Weight, int] = {}
    rank = c.system.rank
    for combo in itertools.combinations(range(n), r):
        t = tuple(sum(expanded[i][j] for i in combo) for j in range(rank))
        mults[t] = mults.get(t, 0) + 1
    return Character(c.system, mults)


@dataclass
class WeylCombination:
    """Integer combination of Weyl characters, keyed by dominant weight."""

    system: RootSystem
    terms: dict[Weight, int]

    def is_zero(self):
        return not self.terms

    def dim(self):
        return sum(m * weyl_dim(self.system, w) for w, m in self.terms.items())

    def sorted_terms(self):
        return sorted(self.terms.items())

    def character(self) -> Character:
        mults: dict[Weight, int] = {}
        for w, m in self.terms.items():
            for ww, mm in weyl_character(self.system, w).items():
                mults[ww] = mults.get(ww, 0) + m * mm
        return Character(self.system, mults)


def _maximal_dominant(sys_, weights):
    """Dominance-maximal elements; ties resolved by picking the lex-greatest."""
    maximal = []
    for w in weights:
        if any(w != v and dominance_leq(sys_, w, v) for v in weights):
            continue
        maximal.append(w)
    return max(maximal)


def decompose_into_weyl(c: Character) -> WeylCombination:
    """Write a Weyl-invariant character as an integer combination of Weyl
    characters by repeated highest-weight stripping."""
    sys_ = c.system
    if not c.is_weyl_invariant():
        raise LieError("character is not Weyl-invariant")
    work = dict(c.mults)
    terms: dict[Weight, int] = {}
    guard = 0
    while True:
        dom = [w for w, m in work.items() if m and all(a >= 0 for a in w)]
        if not dom:
            if any(work.values()):
                raise LieError("character did not reduce to Weyl characters")
            break
        top = _maximal_dominant(sys_, dom)
        coeff = work[top]
        terms[top] = terms.get(top, 0) + coeff
        for w, m in weyl_character(sys_, top).items():
            nm = work.get(w, 0) - coeff * m
            if nm:
                work[w] = nm
            else:
                work.pop(w, None)
        guard += 1
        if guard > 10000:
            raise LieError("decompose_into_weyl failed to terminate")
    return WeylCombination(sys_, terms)


def sum_of_positive_coroot_pairings(system, lam: Weight) -> int:
    """<lam, 2 rho^vee> = sum over positive roots of <lam, beta^vee>."""
    sys_ = root_system(system)
    return sum(sys_.pair_coroot(lam, b) for b in sys_.positive_roots)


def form_type(system, lam: Weight) -> str:
    """Bilinear-form type of the self-dual module with highest weight lam:
    'not-self-dual', 'orthogonal' or 'symplectic'.

    Characteristic-zero / odd-characteristic criterion: self-dual iff
    -w0(lam) = lam; then symplectic iff <lam, 2 rho^vee> is odd.
    """
    sys_ = root_system(system)
    if not sys_.is_dominant(lam):
        raise LieError(f"{lam} is not dominant")
    if minus_w0(sys_, lam) != tuple(lam):
        return "not-self-dual"
    return "symplectic" if sum_of_positive_coroot_pairings(sys_, lam) % 2 else "orthogonal"
