#!/usr/bin/env python3
"""Regenerate data/weyl_decompositions.txt.

For each covered (type, p) and dominant weight, the Jantzen sum formula is
evaluated exactly and converted into a multiset of simple characters using
already-resolved lower entries.  The radical multiplicities m(mu) satisfy

    1 <= m(mu) <= c(mu)   (c = sum-formula multiplicity; filtration decreasing),
    sum m(mu) ch L(mu) + ch L(lam) = ch V(lam)  pointwise,
    dim L(lam) fixed by Steinberg when lam is not restricted,

plus, for a handful of entries, a dimension pinned from published
decomposition data (provenance 'jantzen+pin').  An entry is emitted only when
these constraints have a unique solution; everything else is reported as
unresolved and left out of the table.

Only reducible Weyl modules are written: irreducible ones are re-certified at
runtime by the sum formula itself.
"""

from __future__ import annotations

import itertools
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from gcrlie.charcalc import weyl_character, weyl_dim
from gcrlie.modp import format_weight, jantzen_sum, steinberg_decompose
from gcrlie.rootcore import root_system, weyl_orbit

CAP = 300

COVERAGE = [
    ("A1", (2, 3, 5, 7), "coords<=20"),
    ("A2", (2, 3, 5, 7), "cap"),
    ("B2", (2, 3, 5, 7), "cap"),
    ("G2", (2, 3, 5, 7), "cap"),
    ("A3", (2, 3), "cap"),
    ("B3", (2, 3), "cap"),
    ("C3", (2, 3), "cap"),
    ("B4", (2, 3), "cap"),
    ("C4", (2, 3), "cap"),
    ("D4", (2, 3), "cap"),
]

# entries named in the source material but above the generic cap
EXTRA = {
    ("C4", 2): [(2, 0, 0, 0), (1, 0, 1, 0), (0, 1, 0, 1)],
    ("A2", 7): [(5, 5), (1, 5), (5, 1)],
    ("B2", 7): [(4, 0)],
}

# dim L(lam) pinned from published decomposition-table data; used only to cut
# the feasible set, and recorded in the provenance of the entry.
PINNED_DIMS = {
    ("A3", 2, (1, 0, 1)): 14,
    ("C3", 2, (1, 0, 1)): 48,
    ("C4", 2, (0, 1, 0, 0)): 26,
    ("C4", 2, (1, 0, 1, 0)): 246,
    ("C4", 2, (0, 1, 0, 1)): 416,
    ("G2", 3, (1, 1)): 49,
}


def dominant_weights_with_cap(key, cap):
    sys_ = root_system(key)
    n = sys_.rank
    out = []

    def rec(i, prefix):
        if i == n:
            w = tuple(prefix)
            if any(w) and weyl_dim(sys_, w) <= cap:
                out.append(w)
            return
        for a in range(0, cap + 1):
            w_probe = tuple(prefix + [a] + [0] * (n - i - 1))
            if a and weyl_dim(sys_, w_probe) > cap:
                break
            rec(i + 1, prefix + [a])

    rec(0, [])
    return out


class Resolver:
    def __init__(self, key, p):
        self.sys = root_system(key)
        self.key = key
        self.p = p
        self.factors: dict[tuple, list] = {}
        self.simple_chars: dict[tuple, dict] = {}
        self.prov: dict[tuple, str] = {}
        self.unresolved: set[tuple] = set()

    def simple_char(self, lam):
        lam = tuple(lam)
        if lam in self.simple_chars:
            return self.simple_chars[lam]
        sf = steinberg_decompose(self.sys, lam, self.p)
        if len(sf.factors) == 0:
            ch = {(0,) * self.sys.rank: 1}
        elif len(sf.factors) > 1 or sf.factors[0][1] != 0:
            ch = {(0,) * self.sys.rank: 1}
            for w, t in sf.factors:
                part = self.simple_char(w)
                if part is None:
                    return None
                scale = self.p**t
                nxt = {}
                for a, ma in ch.items():
                    for b, mb in part.items():
                        tupled = tuple(x + scale * y for x, y in zip(a, b))
                        nxt[tupled] = nxt.get(tupled, 0) + ma * mb
                ch = nxt
        else:
            facs = self.resolve(lam)
            if facs is None:
                return None
            ch = dict(weyl_character(self.sys, lam).mults)
            for w, m in facs:
                if w == lam:
                    continue
                part = self.simple_char(w)
                if part is None:
                    return None
                for ww, mm in part.items():
                    nm = ch.get(ww, 0) - m * mm
                    if nm:
                        ch[ww] = nm
                    else:
                        ch.pop(ww, None)
            assert all(v > 0 for v in ch.values()), (self.key, self.p, lam)
        self.simple_chars[lam] = ch
        return ch

    def simple_dim(self, lam):
        ch = self.simple_char(lam)
        return None if ch is None else sum(ch.values())

    def resolve(self, lam):
        """Composition factors of V(lam) as [(weight, mult)], or None."""
        lam = tuple(lam)
        if lam in self.factors:
            return self.factors[lam]
        if lam in self.unresolved:
            return None
        js = jantzen_sum(self.sys, lam, self.p, cap=None)
        if js.is_zero():
            facs = [(lam, 1)]
            self.factors[lam] = facs
            self.prov[lam] = "jantzen"
            return facs
        # convert the Weyl combination to simple multiplicities
        csimple: dict[tuple, int] = {}
        for mu, coeff in js.terms.items():
            sub = self.resolve(mu)
            if sub is None:
                self.unresolved.add(lam)
                return None
            for w, m in sub:
                csimple[w] = csimple.get(w, 0) + coeff * m
        csimple = {w: c for w, c in csimple.items() if c}
        assert all(c > 0 for c in csimple.values()), (self.key, self.p, lam, csimple)
        support = sorted(csimple)
        ranges = []
        for w in support:
            c = csimple[w]
            ranges.append(range(1, c + 1))
        target_dim = None
        sf = steinberg_decompose(self.sys, lam, self.p)
        if len(sf.factors) != 1 or sf.factors[0][1] != 0:
            # non-restricted: dim L(lam) is forced by Steinberg factorization
            target_dim = self.simple_dim(lam)
        pin = PINNED_DIMS.get((self.key, self.p, lam))
        pinned = False
        if pin is not None:
            target_dim = pin
            pinned = True
        chv = weyl_character(self.sys, lam).mults
        orbit = weyl_orbit(self.sys, lam)
        head_floor = {w: 1 for w in orbit}
        wdim = weyl_dim(self.sys, lam)
        part_chars = {}
        for w in support:
            ch = self.simple_char(w)
            if ch is None:
                self.unresolved.add(lam)
                return None
            part_chars[w] = ch
        solutions = []
        for combo in itertools.product(*ranges):
            rad_dim = sum(
                m * sum(part_chars[w].values()) for w, m in zip(support, combo)
            )
            if target_dim is not None and wdim - rad_dim != target_dim:
                continue
            total: dict[tuple, int] = dict(head_floor)
            ok = True
            for w, m in zip(support, combo):
                for ww, mm in part_chars[w].items():
                    total[ww] = total.get(ww, 0) + m * mm
                    if total[ww] > chv.get(ww, 0):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                solutions.append(combo)
        if len(solutions) != 1:
            self.unresolved.add(lam)
            return None
        combo = solutions[0]
        facs = [(lam, 1)] + [(w, m) for w, m in zip(support, combo)]
        self.factors[lam] = facs
        self.prov[lam] = "jantzen+pin" if pinned else "jantzen"
        return facs


def main():
    out_path = os.path.join(
        os.path.dirname(__file__), "..", "src", "gcrlie", "data", "weyl_decompositions.txt"
    )
    lines = [
        "# Composition factors of Weyl modules V(weight) in characteristic p.",
        "# Format: <type> <p> <weight> -> <factor>:<mult> ... | <provenance>",
        "# Regenerate with scripts/generate_decomp_tables.py; entries are derived",
        "# from the exact Jantzen sum formula, a few with a dimension pinned from",
        "# published decomposition data (provenance 'jantzen+pin').",
    ]
    n_unresolved = 0
    for key, primes, mode in COVERAGE:
        for p in primes:
            r = Resolver(key, p)
            if mode == "coords<=20":
                weights = [(a,) for a in range(1, 21)]
            else:
                weights = dominant_weights_with_cap(key, CAP)
            weights = list(dict.fromkeys(list(weights) + list(EXTRA.get((key, p), []))))
            weights.sort(key=lambda w: (weyl_dim(key, w), w))
            for w in weights:
                facs = r.resolve(w)
                if facs is None:
                    n_unresolved += 1
                    print(f"UNRESOLVED {key} p={p} {w} (weyl dim {weyl_dim(key, w)})")
                    continue
                if len(facs) == 1:
                    continue  # irreducible: runtime Jantzen re-derives it
                body = " ".join(f"{format_weight(fw)}:{m}" for fw, m in sorted(facs))
                lines.append(f"{key} {p} {format_weight(w)} -> {body} | {r.prov[w]}")
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {out_path} ({sum(1 for l in lines if not l.startswith('#'))} entries,"
          f" {n_unresolved} unresolved)")


if __name__ == "__main__":
    main()
