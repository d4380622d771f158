"""Exact root-system data and Weyl-group combinatorics for the simple types
A1..A8, B2..B8, C2..C8, D3..D8, E6, E7, E8, F4, G2 and finite products.

Conventions, fixed once for the whole package:

* Bourbaki node numbering.  ASCII diagrams (o = long, * = short where mixed):

      A_n   1 - 2 - ... - n
      B_n   1 - 2 - ... - (n-1) = n*          (last node short)
      C_n   1* - 2* - ... - (n-1)* = n        (last node long)
      D_n   1 - 2 - ... - (n-2) < (n-1, n)    (fork at n-2)
      E_n   1 - 3 - 4 - 5 - 6 [- 7 [- 8]]  with  2 - 4
      F_4   1 - 2 = 3* - 4*
      G_2   1* == 2

* Weights are integer tuples in fundamental-weight coordinates
  (a_1, ..., a_r) = a_1*w_1 + ... + a_r*w_r.
* Roots are integer tuples in simple-root coordinates.
* cartan[i][j] = <alpha_i, alpha_j^vee>, so row i of the Cartan matrix is
  alpha_i written in fundamental-weight coordinates.
* Short roots have squared length 2; ``d[i]`` is half the squared length of
  alpha_i (1 for short, 2 or 3 for long).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

Weight = tuple[int, ...]
RootVector = tuple[int, ...]


class LieError(ValueError):
    """Invalid input to a root-system operation."""


_RANK_RULES = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 3,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


@dataclass(frozen=True, order=True)
class RootSystemId:
    series: str
    rank: int

    def __post_init__(self):
        rule = _RANK_RULES.get(self.series)
        if rule is None or not rule(self.rank):
            raise LieError(f"invalid simple type {self.series}{self.rank}")

    def __str__(self) -> str:
        return f"{self.series}{self.rank}"


def parse_type(text: str) -> tuple[RootSystemId, ...]:
    """Parse 'E6' or 'A2xA2' (also 'A2 A2') into a tuple of simple ids."""
    parts = text.replace("x", " ").replace("~", "").split()
    ids = []
    for p in parts:
        p = p.strip()
        if len(p) < 2 or not p[0].isalpha() or not p[1:].isdigit():
            raise LieError(f"cannot parse root-system type {text!r}")
        ids.append(RootSystemId(p[0].upper(), int(p[1:])))
    if not ids:
        raise LieError("empty root-system type")
    return tuple(ids)


def _cartan_and_lengths(id_: RootSystemId):
    n = id_.rank
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    d = [1] * n

    def edge(i, j):
        C[i][j] = C[j][i] = -1

    s = id_.series
    if s in ("A", "B", "C"):
        for i in range(n - 1):
            edge(i, i + 1)
        if s == "B":
            # alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
            C[n - 2][n - 1] = -2
            d = [2] * (n - 1) + [1]
        elif s == "C":
            C[n - 1][n - 2] = -2
            d = [1] * (n - 1) + [2]
    elif s == "D":
        for i in range(n - 3):
            edge(i, i + 1)
        edge(n - 3, n - 2)
        edge(n - 3, n - 1)
    elif s == "E":
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        for a, b in zip(chain, chain[1:]):
            edge(a, b)
        edge(1, 3)
    elif s == "F":
        edge(0, 1)
        edge(2, 3)
        C[1][2] = -2
        C[2][1] = -1
        d = [2, 2, 1, 1]
    elif s == "G":
        C[0][1] = -1
        C[1][0] = -3
        d = [1, 3]
    return tuple(tuple(r) for r in C), tuple(d)


def _positive_roots(cartan, d):
    """Closure from the simple roots, level by level in height.

    For each known root b and simple alpha_i, the alpha_i-string through b
    has q - p = -<b, alpha_i^vee> with p the string length below b, so
    b + alpha_i is a root iff p - <b, alpha_i^vee> > 0.
    """
    n = len(d)
    roots = {tuple(1 if k == i else 0 for k in range(n)) for i in range(n)}
    level = sorted(roots)
    while level:
        nxt = []
        for b in level:
            for i in range(n):
                pairing = sum(b[j] * cartan[j][i] for j in range(n))
                p = 0
                cur = list(b)
                while True:
                    cur[i] -= 1
                    if tuple(cur) in roots:
                        p += 1
                    else:
                        break
                if p - pairing > 0:
                    up = list(b)
                    up[i] += 1
                    t = tuple(up)
                    if t not in roots:
                        roots.add(t)
                        nxt.append(t)
        level = nxt
    return tuple(sorted(roots, key=lambda b: (sum(b), b)))


def _root_length(b, cartan, d):
    # (beta,beta)/2 = sum_ij b_i b_j (alpha_i,alpha_j)/2 with (a_i,a_j) = d_j C[i][j]
    n = len(d)
    tot = 0
    for i in range(n):
        if not b[i]:
            continue
        for j in range(n):
            if b[j]:
                tot += b[i] * b[j] * d[j] * cartan[i][j]
    assert tot % 2 == 0
    return tot // 2


class RootSystem:
    """Immutable root datum for a product of simple types.

    Products are concatenated coordinate blocks; ``blocks`` maps each simple
    factor to its slice of the coordinate range.
    """

    def __init__(self, ids: tuple[RootSystemId, ...]):
        self.ids = ids
        self.key = "x".join(str(i) for i in ids)
        self.rank = sum(i.rank for i in ids)
        blocks = []
        off = 0
        for id_ in ids:
            blocks.append((id_, off, off + id_.rank))
            off += id_.rank
        self.blocks = tuple(blocks)

        cartan = [[0] * self.rank for _ in range(self.rank)]
        d = []
        pos = []
        for id_, lo, hi in self.blocks:
            C, dd = _cartan_and_lengths(id_)
            for i in range(id_.rank):
                for j in range(id_.rank):
                    cartan[lo + i][lo + j] = C[i][j]
            d.extend(dd)
            for b in _positive_roots(C, dd):
                full = [0] * self.rank
                full[lo:hi] = b
                pos.append(tuple(full))
        self.cartan = tuple(tuple(r) for r in cartan)
        self.d = tuple(d)
        self.positive_roots = tuple(sorted(pos, key=lambda b: (sum(b), b)))
        self.root_half_length = {
            b: _root_length(b, self.cartan, self.d) for b in self.positive_roots
        }
        # omega-coordinates of each simple root: row i of the Cartan matrix
        self.simple_omega = tuple(self.cartan[i] for i in range(self.rank))
        self.rho = tuple([1] * self.rank)
        self._inv_cartan = None

    def __repr__(self):
        return f"RootSystem({self.key})"

    # -- basic linear algebra -------------------------------------------------

    def pair_coroot(self, lam: Weight, beta: RootVector) -> int:
        """<lam, beta^vee> for beta a root in simple-root coordinates."""
        if len(lam) != self.rank or len(beta) != self.rank:
            raise LieError("weight/root rank mismatch")
        db = self.root_half_length.get(beta)
        if db is None:
            db = self.root_half_length.get(tuple(-x for x in beta))
            if db is None:
                raise LieError(f"{beta} is not a root of {self.key}")
        num = sum(lam[i] * beta[i] * self.d[i] for i in range(self.rank))
        if num % db:
            raise LieError("non-integral coroot pairing (corrupt root datum)")
        return num // db

    def root_to_omega(self, beta: RootVector) -> Weight:
        return tuple(
            sum(beta[i] * self.cartan[i][j] for i in range(self.rank))
            for j in range(self.rank)
        )

    def inv_cartan(self):
        if self._inv_cartan is None:
            n = self.rank
            aug = [[Fraction(self.cartan[i][j]) for j in range(n)]
                   + [Fraction(1) if k == i else Fraction(0) for k in range(n)]
                   for i in range(n)]
            for col in range(n):
                piv = next(r for r in range(col, n) if aug[r][col] != 0)
                aug[col], aug[piv] = aug[piv], aug[col]
                pv = aug[col][col]
                aug[col] = [x / pv for x in aug[col]]
                for r in range(n):
                    if r != col and aug[r][col]:
                        f = aug[r][col]
                        aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
            self._inv_cartan = tuple(tuple(row[n:]) for row in aug)
        return self._inv_cartan

    def weight_to_root_coords(self, lam: Weight) -> tuple[Fraction, ...]:
        """Write lam (omega-coords) in the simple-root basis; entries rational."""
        inv = self.inv_cartan()
        n = self.rank
        return tuple(
            sum(Fraction(lam[i]) * inv[i][j] for i in range(n)) for j in range(n)
        )

    # (mu, alpha_i) = mu_i * d_i; extended bilinearly to roots
    def bilinear_weight_root(self, lam: Weight, beta: RootVector) -> int:
        return sum(lam[i] * beta[i] * self.d[i] for i in range(self.rank))

    # -- Weyl moves -----------------------------------------------------------

    def reflect(self, i: int, lam: Weight) -> Weight:
        c = lam[i]
        if c == 0:
            return lam
        row = self.simple_omega[i]
        return tuple(lam[j] - c * row[j] for j in range(self.rank))

    def is_dominant(self, lam: Weight) -> bool:
        return all(a >= 0 for a in lam)

    def highest_root(self) -> RootVector:
        if len(self.ids) != 1:
            raise LieError("highest root is defined per simple factor")
        return self.positive_roots[-1]


_SYSTEMS: dict[str, RootSystem] = {}


def root_system(spec) -> RootSystem:
    """Singleton RootSystem for a type key, id or tuple of ids."""
    if isinstance(spec, RootSystem):
        return spec
    if isinstance(spec, RootSystemId):
        ids = (spec,)
    elif isinstance(spec, str):
        ids = parse_type(spec)
    else:
        ids = tuple(spec)
    key = "x".join(str(i) for i in ids)
    if key not in _SYSTEMS:
        _SYSTEMS[key] = RootSystem(ids)
    return _SYSTEMS[key]


def build_root_system(id_) -> RootSystem:
    """Full root datum for a (possibly product) type; raises LieError if invalid."""
    return root_system(id_)


def pair_with_coroot(system, lam: Weight, beta: RootVector) -> int:
    return root_system(system).pair_coroot(lam, beta)


def dominance_leq(system, lam: Weight, mu: Weight) -> bool:
    """True iff mu - lam is a non-negative integer combination of simple roots."""
    sys_ = root_system(system)
    if len(lam) != sys_.rank or len(mu) != sys_.rank:
        raise LieError("rank mismatch")
    diff = tuple(m - l for l, m in zip(lam, mu))
    coords = sys_.weight_to_root_coords(diff)
    return all(c.denominator == 1 and c >= 0 for c in coords)


def dominant_representative(system, lam: Weight) -> tuple[Weight, int]:
    """Weyl-normalize lam; returns (dominant weight, parity of reflections)."""
    sys_ = root_system(system)
    cur = tuple(lam)
    count = 0
    while True:
        for i, a in enumerate(cur):
            if a < 0:
                cur = sys_.reflect(i, cur)
                count += 1
                break
        else:
            return cur, count % 2


def dot_dominant_representative(system, lam: Weight):
    """Dot-action normalization: reflects lam+rho and subtracts rho.

    Returns (weight, parity) or (None, 0) when lam+rho is singular (some
    coroot pairing vanishes, i.e. the normalized form has a zero coordinate).
    """
    sys_ = root_system(system)
    shifted = tuple(a + 1 for a in lam)
    dom, parity = dominant_representative(sys_, shifted)
    if any(a == 0 for a in dom):
        return None, 0
    return tuple(a - 1 for a in dom), parity


_W0_SELF = ("B", "C", "F", "G")


def minus_w0(system, lam: Weight) -> Weight:
    """Highest weight of the dual module: -w0 applied via diagram automorphism."""
    sys_ = root_system(system)
    if len(lam) != sys_.rank:
        raise LieError("rank mismatch")
    out = list(lam)
    for id_, lo, hi in sys_.blocks:
        blk = list(lam[lo:hi])
        n = id_.rank
        if id_.series == "A":
            blk = blk[::-1]
        elif id_.series == "D" and n % 2 == 1:
            blk[n - 2], blk[n - 1] = blk[n - 1], blk[n - 2]
        elif id_.series == "E" and n == 6:
            perm = [5, 1, 4, 3, 2, 0]  # 1<->6, 3<->5
            blk = [blk[p] for p in perm]
        out[lo:hi] = blk
    return tuple(out)


def weyl_orbit(system, lam: Weight) -> set[Weight]:
    """Full Weyl orbit by reflection closure (use only for small orbits)."""
    sys_ = root_system(system)
    seen = {tuple(lam)}
    frontier = [tuple(lam)]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(sys_.rank):
                r = sys_.reflect(i, w)
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
    return seen


@dataclass(frozen=True)
class ExtendedDiagram:
    """Affine diagram: simple nodes 0..n-1 plus the affine node 'n' attached
    via the lowest root.  Bonds are (i, j, multiplicity); affine_root is the
    negative of the highest root in simple-root coordinates."""

    system: str
    nodes: tuple[int, ...]
    bonds: tuple[tuple[int, int, int], ...]
    affine_root: RootVector

    @property
    def n_nodes(self):
        return len(self.nodes)


def extended_diagram(id_) -> ExtendedDiagram:
    sys_ = root_system(id_)
    if len(sys_.ids) != 1:
        raise LieError("extended diagram is defined for simple types")
    n = sys_.rank
    theta = sys_.highest_root()
    lowest = tuple(-x for x in theta)
    bonds = []
    for i in range(n):
        for j in range(i + 1, n):
            m = sys_.cartan[i][j] * sys_.cartan[j][i]
            if m:
                bonds.append((i, j, m))
    # pairings of -theta against the simple coroots and vice versa
    theta_omega = sys_.root_to_omega(theta)
    for i in range(n):
        a = -theta_omega[i]                      # <-theta, alpha_i^vee>
        b = -sys_.pair_coroot(sys_.simple_omega[i], theta)  # <alpha_i, theta^vee>... sign
        m = a * b
        if m:
            bonds.append((i, n, m))
    return ExtendedDiagram(sys_.key, tuple(range(n + 1)), tuple(bonds), lowest)


# -- sub-diagram classification ----------------------------------------------


@dataclass(frozen=True)
class ComponentInfo:
    """One connected component of a chosen sub-diagram: its abstract type,
    member indices in Bourbaki order, and whether it is built on strictly
    short roots of the ambient ('tilde' types in F4/G2)."""

    id: RootSystemId
    members: tuple[int, ...]
    tilde: bool = False

    def label(self):
        return ("~" if self.tilde else "") + str(self.id)


def classify_components(pairing, lengths, ambient_max_len=None):
    """Classify a set of mutually-paired 'simple roots' into simple types.

    ``pairing[i][j]`` must be <r_i, r_j^vee>; ``lengths[i]`` half squared
    lengths.  Returns a tuple of ComponentInfo sorted canonically.
    """
    n = len(lengths)
    adj = {i: [] for i in range(n)}
    for i in range(n):
        for j in range(n):
            if i != j and pairing[i][j]:
                adj[i].append(j)
    seen = set()
    comps = []
    for start in range(n):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))

    out = []
    for comp in comps:
        out.append(_classify_one(comp, pairing, lengths, adj, ambient_max_len))
    out.sort(key=lambda c: (c.id.series, c.id.rank, c.members))
    return tuple(out)


def _classify_one(comp, pairing, lengths, adj, ambient_max_len):
    k = len(comp)
    tilde = bool(ambient_max_len) and max(lengths[i] for i in comp) < ambient_max_len

    def bond(i, j):
        return pairing[i][j] * pairing[j][i]

    if k == 1:
        return ComponentInfo(RootSystemId("A", 1), (comp[0],), tilde)

    deg = {i: sum(1 for j in adj[i] if j in comp) for i in comp}
    triple = [(i, j) for i in comp for j in comp if i < j and bond(i, j) == 3]
    double = [(i, j) for i in comp for j in comp if i < j and bond(i, j) == 2]
    forks = [i for i in comp if deg[i] == 3]

    if triple:
        i, j = triple[0]
        short, long_ = (i, j) if lengths[i] < lengths[j] else (j, i)
        return ComponentInfo(RootSystemId("G", 2), (short, long_), tilde)

    if double:
        i, j = double[0]
        long_, short = (i, j) if lengths[i] > lengths[j] else (j, i)
        long_arm = _walk_path(long_, short, adj, comp)
        short_arm = _walk_path(short, long_, adj, comp)
        if len(long_arm) > 1 and len(short_arm) > 1:
            assert k == 4
            return ComponentInfo(RootSystemId("F", 4),
                                 tuple(long_arm[::-1] + short_arm), tilde)
        if len(short_arm) == 1:
            members = tuple(long_arm[::-1] + [short])
            return ComponentInfo(RootSystemId("B", k), members, tilde)
        members = tuple(short_arm[::-1] + [long_])
        return ComponentInfo(RootSystemId("C", k), members, tilde)

    if not forks:
        ends = [i for i in comp if deg[i] == 1]
        start = min(ends)
        path = _walk_path_from(start, adj, comp)
        return ComponentInfo(RootSystemId("A", k), tuple(path), tilde)

    fork = forks[0]
    arms = []
    for nb in sorted(j for j in adj[fork] if j in comp):
        arm = _walk_path_from(nb, adj, comp, forbidden={fork})
        arms.append(arm)
    arms.sort(key=len)
    (a1, a2, a3) = arms
    if len(a2) == 1:
        # D type: two single-node prongs a1, a2; tail a3
        tail = a3[::-1]
        members = tuple(tail + [fork] + [min(a1[0], a2[0]), max(a1[0], a2[0])])
        return ComponentInfo(RootSystemId("D", k), members, tilde)
    # E type: prongs of lengths (1, 2, k-4)
    assert len(a1) == 1 and len(a2) == 2
    node2 = a1[0]
    node3, node1 = a2[0], a2[1]
    members = (node1, node2, node3, fork) + tuple(a3)
    return ComponentInfo(RootSystemId("E", k), members, tilde)


def _walk_path(frm, src, adj, comp):
    """Path starting at frm walking away from src (frm included)."""
    path = [frm]
    prev, cur = src, frm
    while True:
        nxts = [j for j in adj[cur] if j in comp and j != prev]
        if not nxts:
            return path
        prev, cur = cur, nxts[0]
        path.append(cur)


def _walk_path_from(start, adj, comp, forbidden=()):
    path = [start]
    prev = set(forbidden) | {start}
    cur = start
    while True:
        nxts = [j for j in adj[cur] if j in comp and j not in prev]
        if not nxts:
            return path
        cur = nxts[0]
        prev.add(cur)
        path.append(cur)
