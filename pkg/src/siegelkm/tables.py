"""Integer exponent tables for the infinite-product expansions.

A DISCRIMINANT table maps a norm key N = 4nm - l^2 to the exponent of the
factor (1 - q^n r^l s^m); a PAIR table is keyed by (nm, l) instead.  Tables
recovered from a finite series carry their covered key set and refuse
lookups outside it; tables built from closed formulas cover a declared
range.

Closed formulas (chi(N) = (-N/2) mod-8-symbol resp. Legendre (-N/p)):

    f2(N)  = 8 f(4N) + 2 (chi(N) - 1) f(N) + f(N/4)
    f2'(N) = 8 f(4N) + (2 chi(N) - 3) f(N) + f(N/4)
    fp(N)  = p^3 f(p^2 N) + (p chi(N) - p - 1) f(N) + f(N/p^2)

f(x) is taken as 0 at non-integral arguments.  The third argument of fp is
N/p^2, matching the p = 2 instance and the coset-assembly derivation; the
N/p variant printed alongside the odd-prime statement fails the p = 2
specialization and the machine checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import InsufficientFRange
from .jacobi import char_mod8, legendre

DISCRIMINANT = "disc"
PAIR = "pair"


@dataclass
class ExponentTable:
    kind: str
    entries: dict
    floor: int = -1          # keys (or nm-keys) below this are identically 0
    covered: Optional[set] = None   # None: every admissible key is covered
    name: str = ""

    def lookup(self, key):
        if self.kind == DISCRIMINANT:
            if key < self.floor:
                return 0
            if key % 4 in (1, 2):
                return 0     # not of the form 4nm - l^2
            if self.covered is not None and key not in self.covered:
                raise InsufficientFRange(
                    "%s: key %s outside recovered domain" % (self.name or "table", key))
            return self.entries.get(key, 0)
        nkey, l = key
        if nkey < self.floor:
            return 0
        if self.covered is not None and key not in self.covered:
            raise InsufficientFRange(
                "%s: key %s outside recovered domain" % (self.name or "table", key))
        return self.entries.get(key, 0)

    def supported_l(self, nkey):
        """For PAIR tables: all l with a nonzero entry at (nkey, l)."""
        return sorted(l for (nk, l) in self.entries if nk == nkey)

    def as_json_map(self):
        if self.kind == DISCRIMINANT:
            return {str(k): v for k, v in sorted(self.entries.items())}
        return {"%d,%d" % k: v for k, v in sorted(self.entries.items())}


def quad_char2(N):
    return char_mod8(-N)


def f2_table(f: ExponentTable, nrange) -> ExponentTable:
    """Weight-35 exponents from the weight-0 generator coefficients."""
    entries = {}
    covered = set()
    for N in nrange:
        v = 8 * f.lookup(4 * N) + 2 * (quad_char2(N) - 1) * f.lookup(N)
        if N % 4 == 0:
            v += f.lookup(N // 4)
        covered.add(N)
        if v:
            entries[N] = v
    return ExponentTable(DISCRIMINANT, entries, floor=4 * f.floor,
                         covered=covered, name="table.f2")


def fprime2_table(f: ExponentTable, nrange) -> ExponentTable:
    """Weight-30 exponents: f2 with one extra f subtracted."""
    entries = {}
    covered = set()
    for N in nrange:
        v = 8 * f.lookup(4 * N) + (2 * quad_char2(N) - 3) * f.lookup(N)
        if N % 4 == 0:
            v += f.lookup(N // 4)
        covered.add(N)
        if v:
            entries[N] = v
    return ExponentTable(DISCRIMINANT, entries, floor=4 * f.floor,
                         covered=covered, name="table.f2prime")


def fp_table(f: ExponentTable, p: int, nrange) -> ExponentTable:
    """Exponents of the Humbert-p^2 form for an odd prime p."""
    if p < 3 or p % 2 == 0:
        raise ValueError("p must be an odd prime (the p = 2 case is f2/f2')")
    entries = {}
    covered = set()
    for N in nrange:
        v = p ** 3 * f.lookup(p * p * N) + (p * legendre(-N, p) - p - 1) * f.lookup(N)
        if N % (p * p) == 0:
            v += f.lookup(N // (p * p))
        covered.add(N)
        if v:
            entries[N] = v
    return ExponentTable(DISCRIMINANT, entries, floor=p * p * f.floor,
                         covered=covered, name="table.fp(%d)" % p)
