"""Sparse polynomials in the curve coefficients with exact rational coefficients.

A monomial ``prod lambda_k^{e_k}`` is packed into one Python integer: exponent
``e_k`` occupies bit field ``k`` and the weighted degree ``sum w_k e_k`` sits in
the field above all exponents.  Multiplying monomials is then integer
addition, the weight is a shift, and sorting keys sorts by weight first.
Coefficients are ``int`` whenever integral and ``Fraction`` otherwise.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from ..errors import HomogeneityViolation

Rational = Fraction

EXPONENT_BITS = 16

_audit = False


def grading_audit_enabled() -> bool:
    return _audit


def set_grading_audit(flag: bool) -> None:
    """Recheck weight additivity on every public product when ``flag`` is set."""
    global _audit
    _audit = bool(flag)


@contextmanager
def grading_audit(flag: bool = True):
    old = _audit
    set_grading_audit(flag)
    try:
        yield
    finally:
        set_grading_audit(old)


def to_rational(x) -> int | Fraction:
    """Parse ``int``, ``Fraction`` or ``"p/q"`` into the normalized coefficient type."""
    if isinstance(x, str):
        x = Fraction(x.strip())
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, int):
        return x
    raise TypeError(f"not an exact rational: {x!r}")


def format_rational(x) -> str:
    return str(Fraction(x))


def _norm(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def clean(terms: dict) -> dict:
    """Drop zero coefficients and demote integral fractions, in place."""
    dead = []
    for k, c in terms.items():
        if not c:
            dead.append(k)
        elif type(c) is Fraction and c.denominator == 1:
            terms[k] = c.numerator
    for k in dead:
        del terms[k]
    return terms


def addmul(acc: dict, a: dict, b: dict, cap_key: Optional[int] = None) -> None:
    """``acc += a * b`` on raw term dicts; monomials with key >= cap_key are skipped."""
    get = acc.get
    if cap_key is None:
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                acc[k] = get(k, 0) + ca * cb
    else:
        for ka, ca in a.items():
            if ka >= cap_key:
                continue
            lim = cap_key - ka
            for kb, cb in b.items():
                if kb < lim:
                    k = ka + kb
                    acc[k] = get(k, 0) + ca * cb


def addscaled(acc: dict, a: dict, s) -> None:
    """``acc += s * a`` for a rational scalar ``s``."""
    get = acc.get
    for k, c in a.items():
        acc[k] = get(k, 0) + s * c


class LambdaRing:
    """The polynomial ring over the symbols of one curve.

    ``symbols`` are :class:`~telesigma.semigroup.LambdaIndex` values (or any
    objects with ``name`` and ``weight``); weights must be positive.
    """

    def __init__(self, symbols: Sequence, bits: int = EXPONENT_BITS):
        self.symbols = tuple(symbols)
        self.n = len(self.symbols)
        self.bits = bits
        self.mask = (1 << bits) - 1
        self.shift = bits * self.n
        self.weights = tuple(int(s.weight) for s in self.symbols)
        if any(w <= 0 for w in self.weights):
            raise ValueError("symbol weights must be positive")
        self.names = tuple(s.name for s in self.symbols)
        self._index = {name: k for k, name in enumerate(self.names)}
        self._gen_keys = tuple((w << self.shift) | (1 << (bits * k)) for k, w in enumerate(self.weights))

    def __repr__(self):
        return f"LambdaRing({', '.join(self.names)})"

    def __eq__(self, other):
        return isinstance(other, LambdaRing) and self.names == other.names and self.weights == other.weights

    def __hash__(self):
        return hash((self.names, self.weights))

    def index(self, name: str) -> int:
        return self._index[name]

    def cap_key(self, max_weight: Optional[int]) -> Optional[int]:
        """Smallest key whose weight exceeds ``max_weight``."""
        return None if max_weight is None else (max_weight + 1) << self.shift

    def key(self, exps: Sequence[int]) -> int:
        k = 0
        for e, g in zip(exps, self._gen_keys):
            k += e * g
        return k

    def exps(self, key: int) -> tuple:
        b, m = self.bits, self.mask
        return tuple((key >> (b * k)) & m for k in range(self.n))

    def weight(self, key: int) -> int:
        return key >> self.shift

    def gen(self, k) -> "LambdaPolynomial":
        if isinstance(k, str):
            k = self._index[k]
        return LambdaPolynomial(self, {self._gen_keys[k]: 1})

    def gens(self) -> list:
        return [self.gen(k) for k in range(self.n)]

    def const(self, c) -> "LambdaPolynomial":
        c = to_rational(c)
        return LambdaPolynomial(self, {0: c} if c else {})

    @property
    def zero(self) -> "LambdaPolynomial":
        return LambdaPolynomial(self, {})

    @property
    def one(self) -> "LambdaPolynomial":
        return LambdaPolynomial(self, {0: 1})

    def monomial_json(self, key: int) -> list:
        out = []
        for k, e in enumerate(self.exps(key)):
            if e:
                s = self.symbols[k]
                ident = s.to_json() if hasattr(s, "to_json") else s.name
                out.append([ident, e])
        return out

    def from_json(self, data: list) -> "LambdaPolynomial":
        lookup = {}
        for k, s in enumerate(self.symbols):
            ident = s.to_json() if hasattr(s, "to_json") else s.name
            lookup[repr(ident)] = k
        terms = {}
        for item in data:
            exps = [0] * self.n
            for ident, e in item["monomial"]:
                exps[lookup[repr(ident)]] += e
            terms[self.key(exps)] = to_rational(item["coeff"])
        return LambdaPolynomial(self, clean(terms))


class LambdaPolynomial:
    """Element of ``Q[lambda]``; immutable by convention."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: LambdaRing, terms: Optional[dict] = None):
        self.ring = ring
        self.terms = terms if terms is not None else {}

    # -- construction helpers -------------------------------------------------

    def _new(self, terms: dict) -> "LambdaPolynomial":
        return LambdaPolynomial(self.ring, terms)

    def _coerce(self, other) -> "LambdaPolynomial":
        if isinstance(other, LambdaPolynomial):
            return other
        return self.ring.const(other)

    # -- predicates -----------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_value(self):
        """Rational value of a constant polynomial (0 for the zero polynomial)."""
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms.get(0, 0)

    def constant_term(self):
        return self.terms.get(0, 0)

    def weights(self) -> set:
        s = self.ring.shift
        return {k >> s for k in self.terms}

    def max_weight(self) -> int:
        return max(self.weights(), default=-1)

    def is_homogeneous(self, weight: Optional[int] = None) -> bool:
        ws = self.weights()
        if not ws:
            return True
        if len(ws) != 1:
            return False
        return weight is None or ws == {weight}

    def homogeneous_weight(self) -> Optional[int]:
        ws = self.weights()
        if len(ws) > 1:
            raise HomogeneityViolation(f"mixed weights {sorted(ws)}")
        return next(iter(ws)) if ws else None

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self.terms.values())

    def denominators(self) -> set:
        return {Fraction(c).denominator for c in self.terms.values()}

    # -- arithmetic -----------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, LambdaPolynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        addscaled(out, other.terms, 1)
        return self._new(clean(out))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        addscaled(out, other.terms, -1)
        return self._new(clean(out))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, LambdaPolynomial):
            return lp_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        if isinstance(other, LambdaPolynomial) and other.is_constant() and other.terms:
            return self.scale(Fraction(1) / Fraction(other.constant_value()))
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result, base = self.ring.one, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, s) -> "LambdaPolynomial":
        s = to_rational(s) if not isinstance(s, (int, Fraction)) else s
        if not s:
            return self.ring.zero
        return self._new(clean({k: c * s for k, c in self.terms.items()}))

    def truncate(self, max_weight: int) -> "LambdaPolynomial":
        cap = self.ring.cap_key(max_weight)
        return self._new({k: c for k, c in self.terms.items() if k < cap})

    def homogeneous_part(self, weight: int) -> "LambdaPolynomial":
        s = self.ring.shift
        return self._new({k: c for k, c in self.terms.items() if k >> s == weight})

    def map_coefficients(self, f) -> "LambdaPolynomial":
        return self._new(clean({k: f(c) for k, c in self.terms.items()}))

    def substitute(self, values: Mapping[int, object], target: Optional[LambdaRing] = None) -> "LambdaPolynomial":
        """Replace symbol ``k`` by ``values[k]`` (a rational or a polynomial of ``target``)."""
        target = target or self.ring
        out = target.zero
        for key, c in self.terms.items():
            exps = self.ring.exps(key)
            term = target.const(c)
            for k, e in enumerate(exps):
                if not e:
                    continue
                if k in values:
                    v = values[k]
                    term = term * (v ** e if isinstance(v, LambdaPolynomial) else target.const(Fraction(v) ** e))
                else:
                    name = self.ring.names[k]
                    term = term * target.gen(target.index(name)) ** e
            out = out + term
        return out

    def sorted_items(self):
        return sorted(self.terms.items())

    # -- presentation ---------------------------------------------------------

    def to_json(self) -> list:
        ring = self.ring
        return [{"coeff": format_rational(c), "monomial": ring.monomial_json(k)} for k, c in self.sorted_items()]

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, c in self.sorted_items():
            mono = "*".join(
                f"{self.ring.names[i]}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(self.ring.exps(k))
                if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def lp_mul(a: LambdaPolynomial, b: LambdaPolynomial, max_weight: Optional[int] = None) -> LambdaPolynomial:
    """Exact product, optionally dropping monomials above ``max_weight``."""
    acc: dict = {}
    if a.terms and b.terms:
        addmul(acc, a.terms, b.terms, a.ring.cap_key(max_weight))
    out = LambdaPolynomial(a.ring, clean(acc))
    if _audit and max_weight is None:
        wa, wb = a.weights(), b.weights()
        if len(wa) == 1 and len(wb) == 1 and out.terms:
            if out.weights() != {min(wa) + min(wb)}:
                raise HomogeneityViolation("product of homogeneous polynomials is not homogeneous")
    return out


def lp_sum(polys: Iterable[LambdaPolynomial], ring: LambdaRing) -> LambdaPolynomial:
    acc: dict = {}
    for p in polys:
        addscaled(acc, p.terms, 1)
    return LambdaPolynomial(ring, clean(acc))
