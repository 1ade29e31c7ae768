"""Combinatorics of telescopic numerical semigroups.

A sequence ``a = (a_1, ..., a_m)`` is telescopic when ``gcd(a) = 1``, every
``a_i >= 2`` and ``a_i / d_i`` lies in the semigroup generated by
``a_1/d_{i-1}, ..., a_{i-1}/d_{i-1}`` where ``d_i = gcd(a_1, ..., a_i)``.
Every element of ``<a_1, ..., a_m>`` then has a unique representation with
exponents in the box ``B(a)`` (``0 <= e_i < d_{i-1}/d_i`` for ``i >= 2``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from math import gcd
from typing import Optional, Sequence

from .errors import EntryTooSmall, InvalidCurve, NotCoprime, NotTelescopic

ExponentVector = tuple  # tuple[int, ...] of length m


def sieve(gens: Sequence[int], limit: int) -> list[bool]:
    """Membership table of the semigroup generated by ``gens`` on ``[0, limit]``."""
    member = [False] * (limit + 1)
    member[0] = True
    for v in range(1, limit + 1):
        for a in gens:
            if a <= v and member[v - a]:
                member[v] = True
                break
    return member


@dataclass(frozen=True)
class LambdaIndex:
    """One coefficient ``lambda^{(i)}_{j_1..j_m}`` of the defining equations."""

    eq_index: int
    exponents: tuple
    weight: int

    @property
    def name(self) -> str:
        return f"lam{self.eq_index}_" + "_".join(map(str, self.exponents))

    def odd_count(self) -> int:
        return sum(e % 2 for e in self.exponents)

    def to_json(self):
        return [self.eq_index, list(self.exponents)]


@dataclass(frozen=True)
class TelescopicData:
    a: tuple
    d: tuple  # d[0] = d_1 = a_1, ..., d[m-1] = d_m = 1
    ell: tuple  # ell[i-2] is the row (l_{i,1}, ..., l_{i,m}) for i = 2..m
    gaps: tuple
    genus: int
    mu: tuple
    lambda_catalog: tuple = field(repr=False)

    @property
    def m(self) -> int:
        return len(self.a)

    def ratio(self, i: int) -> int:
        """``d_{i-1}/d_i`` for 1-based ``i >= 2``."""
        return self.d[i - 2] // self.d[i - 1]

    def bounds(self) -> tuple:
        """Exclusive upper bounds of ``B(a)``; ``None`` for the free first slot."""
        return (None,) + tuple(self.ratio(i) for i in range(2, self.m + 1))

    def eq_degree(self, i: int) -> int:
        """Weighted degree ``a_i d_{i-1}/d_i`` of the defining polynomial ``F_i``."""
        return self.a[i - 1] * self.ratio(i)

    def order(self, e) -> int:
        return sum(ai * ei for ai, ei in zip(self.a, e))

    def in_box(self, e) -> bool:
        return all(e[i - 1] < self.ratio(i) for i in range(2, self.m + 1))

    def canonical_rep(self, value: int) -> Optional[tuple]:
        return canonical_rep(self, value)

    def phi_basis(self, n: int) -> list:
        return phi_basis(self, n)

    def is_gap(self, value: int) -> bool:
        return canonical_rep(self, value) is None

    def to_json(self) -> dict:
        return {
            "a": list(self.a),
            "d": list(self.d),
            "ell": [list(r) for r in self.ell],
            "genus": self.genus,
            "gaps": list(self.gaps),
            "mu": list(self.mu),
        }


def _gcd_prefixes(a: Sequence[int]) -> tuple:
    out, g = [], 0
    for x in a:
        g = gcd(g, x)
        out.append(g)
    return tuple(out)


def validate_telescopic(a: Sequence[int]) -> TelescopicData:
    """Validate ``a`` and derive every semigroup datum used downstream."""
    a = tuple(int(x) for x in a)
    if len(a) < 2:
        raise InvalidCurve("a telescopic sequence needs at least two entries")
    if any(x < 1 for x in a):
        raise InvalidCurve(f"entries must be positive integers, got {a}")
    if reduce(gcd, a) != 1:
        raise NotCoprime(f"gcd{a} = {reduce(gcd, a)} != 1")
    small = [i + 1 for i, x in enumerate(a) if x < 2]
    if small:
        raise EntryTooSmall(f"a_{small[0]} = {a[small[0] - 1]} < 2")
    d = _gcd_prefixes(a)
    for i in range(2, len(a) + 1):
        target = a[i - 1] // d[i - 1]
        gens = [a[j] // d[i - 2] for j in range(i - 1)]
        if not sieve(gens, target)[target]:
            raise NotTelescopic(i, f"a_{i}/d_{i} = {target} is not in <{', '.join(map(str, gens))}>")

    m = len(a)
    genus2 = 1 - a[0] + sum((d[i - 2] // d[i - 1] - 1) * a[i - 1] for i in range(2, m + 1))
    genus = genus2 // 2
    # provisional object: canonical_rep only needs a and d
    proto = TelescopicData(a, d, (), (), genus, (), ())

    ell = []
    for i in range(2, m + 1):
        row = canonical_rep(proto, proto.eq_degree(i))
        assert row is not None and all(row[j] == 0 for j in range(i - 1, m))
        ell.append(row)

    limit = max(2 * genus, 1)
    member = sieve(a, limit)
    gaps = tuple(v for v in range(limit + 1) if not member[v])
    if len(gaps) != genus or (genus and gaps[-1] != 2 * genus - 1):
        raise AssertionError(f"gap count {len(gaps)} disagrees with genus {genus}")
    mu = tuple(gaps[genus - 1 - k] - (genus - 1 - k) for k in range(genus))

    proto = TelescopicData(a, d, tuple(ell), gaps, genus, mu, ())
    return TelescopicData(a, d, tuple(ell), gaps, genus, mu, tuple(lambda_catalog(proto)))


def canonical_rep(td: TelescopicData, value: int) -> Optional[tuple]:
    """Unique ``k`` in ``B(a)`` with ``sum a_i k_i = value``, or ``None`` for a gap."""
    if value < 0:
        return None
    a, d, m = td.a, td.d, len(td.a)
    k = [0] * m
    rest = value
    for i in range(m, 1, -1):
        di, n = d[i - 1], d[i - 2] // d[i - 1]
        if rest % di:
            return None
        ai = a[i - 1] // di
        k[i - 1] = (rest // di) * pow(ai, -1, n) % n if n > 1 else 0
        rest -= a[i - 1] * k[i - 1]
        if rest < 0:
            return None
    if rest % a[0]:
        return None
    k[0] = rest // a[0]
    return tuple(k)


def nongaps(td: TelescopicData):
    v = 0
    while True:
        if canonical_rep(td, v) is not None:
            yield v
        v += 1


def phi_basis(td: TelescopicData, n: int) -> list:
    """First ``n`` exponent vectors of ``B(a)`` sorted by pole order."""
    out = []
    for v in nongaps(td):
        if len(out) == n:
            break
        out.append(canonical_rep(td, v))
    orders = [td.order(e) for e in out]
    assert len(set(orders)) == len(orders)
    return out


def box_elements_below(td: TelescopicData, bound: int) -> list:
    """All ``e`` in ``B(a)`` with ``order(e) < bound``, sorted by order."""
    out = [canonical_rep(td, v) for v in range(max(bound, 0))]
    return [e for e in out if e is not None]


def lambda_catalog(td: TelescopicData) -> list:
    """Admissible coefficient symbols, ordered by equation, weight descending."""
    out = []
    for i in range(2, td.m + 1):
        deg = td.eq_degree(i)
        rows = [LambdaIndex(i, e, deg - td.order(e)) for e in box_elements_below(td, deg)]
        rows.sort(key=lambda li: (-li.weight, li.exponents))
        out.extend(rows)
    return out


def box_vectors(td: TelescopicData, first_max: int):
    """Iterate ``B(a)`` with ``e_1 <= first_max`` (test helper for brute force)."""
    ranges = [range(first_max + 1)] + [range(td.ratio(i)) for i in range(2, td.m + 1)]
    return product(*ranges)

