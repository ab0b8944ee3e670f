"""Exact arithmetic for exponential polynomials and their ratios.

An ExpPoly is a finite sum ``sum_k  c_k * exp(a_k*t + b_k*x)`` with rational
coefficients ``c_k`` and rational exponent pairs ``(a_k, b_k)``.  An
ExpRational is a normalized quotient of two ExpPolys.  Both are closed under
the field operations and under the characteristic derivatives ``D_{i,j}``,
so every identity this package verifies reduces to ``is_zero`` on an exactly
cancelled numerator.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

import mpmath

# Exponent of one term: (a, b) meaning exp(a*t + b*x).
LinForm = Tuple[Fraction, Fraction]

RatLike = Union[int, str, Fraction]

#: |denominator evaluation| below this aborts numeric evaluation.
POLE_THRESHOLD = 1e-30

#: Binary precision for numeric evaluation (well above a 64-bit significand).
EVAL_PRECISION = 120

#: Hard stop for exact-division loops; legitimate quotients here are far smaller.
DIVEXACT_MAX_STEPS = 200_000


class DivisionByZeroField(ZeroDivisionError):
    """Division by an identically-zero ExpPoly/ExpRational."""


class EvalPole(ArithmeticError):
    """Numeric evaluation hit a denominator smaller than POLE_THRESHOLD."""


class InexactDivision(ArithmeticError):
    """divexact() was asked for a quotient that does not exist in the ring."""


def as_frac(v: RatLike) -> Fraction:
    """Coerce int/str/Fraction to Fraction ('p/q' strings accepted)."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        return Fraction(v)
    raise TypeError(f"not an exact rational: {v!r}")


@dataclass(frozen=True)
class WaveConstants:
    """Characteristic speeds (c1, c2, d1, d2) with delta = c1*d2 - c2*d1 != 0."""

    c1: Fraction
    c2: Fraction
    d1: Fraction
    d2: Fraction

    def __post_init__(self) -> None:
        for name in ("c1", "c2", "d1", "d2"):
            object.__setattr__(self, name, as_frac(getattr(self, name)))
        if self.delta == 0:
            raise ValueError("degenerate wave constants: c1*d2 - c2*d1 = 0")

    @property
    def delta(self) -> Fraction:
        return self.c1 * self.d2 - self.c2 * self.d1

    def deriv_factor(self, i: int, j: int, a: Fraction, b: Fraction) -> Fraction:
        """Scale factor of D_{i,j} on a term with exponent a*t + b*x."""
        return ((i * self.c1 + j * self.c2) * a + (i * self.d1 + j * self.d2) * b) / self.delta


def wave_constants(c1: RatLike, c2: RatLike, d1: RatLike, d2: RatLike) -> WaveConstants:
    return WaveConstants(as_frac(c1), as_frac(c2), as_frac(d1), as_frac(d2))


class ExpPoly:
    """Canonical finite sum of rational multiples of exp(a*t + b*x).

    The zero element is the empty term map; no zero coefficients are stored,
    so structural equality is functional equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Union[None, Dict[LinForm, Fraction], Iterable] = None):
        canon: Dict[LinForm, Fraction] = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, coef in items:
                a, b = key
                k = (as_frac(a), as_frac(b))
                c = canon.get(k, Fraction(0)) + as_frac(coef)
                if c:
                    canon[k] = c
                elif k in canon:
                    del canon[k]
        self.terms = canon

    @staticmethod
    def zero() -> "ExpPoly":
        return ExpPoly()

    @staticmethod
    def const(c: RatLike) -> "ExpPoly":
        c = as_frac(c)
        return ExpPoly({(Fraction(0), Fraction(0)): c}) if c else ExpPoly()

    @staticmethod
    def term(coef: RatLike, a: RatLike, b: RatLike) -> "ExpPoly":
        coef = as_frac(coef)
        if not coef:
            return ExpPoly()
        return ExpPoly({(as_frac(a), as_frac(b)): coef})

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "ExpPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms:
            return other
        if not other.terms:
            return self
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return _raw_poly(out)

    __radd__ = __add__

    def __neg__(self) -> "ExpPoly":
        return _raw_poly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "ExpPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ExpPoly":
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "ExpPoly":
        if isinstance(other, (int, Fraction)):
            c = as_frac(other)
            if not c:
                return ExpPoly()
            return _raw_poly({k: v * c for k, v in self.terms.items()})
        if not isinstance(other, ExpPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return ExpPoly()
        out: Dict[LinForm, Fraction] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                s = out.get(k, Fraction(0)) + c1 * c2
                if s:
                    out[k] = s
                elif k in out:
                    del out[k]
        return _raw_poly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- calculus ----------------------------------------------------------

    def deriv(self, i: int, j: int, w: WaveConstants) -> "ExpPoly":
        """Characteristic derivative D_{i,j}: term (a,b) scales by
        ((i*c1+j*c2)*a + (i*d1+j*d2)*b)/delta."""
        out: Dict[LinForm, Fraction] = {}
        for (a, b), c in self.terms.items():
            f = w.deriv_factor(i, j, a, b)
            if f:
                out[(a, b)] = c * f
        return _raw_poly(out)

    def map_exponents(self, fn) -> "ExpPoly":
        """Apply a linear substitution (a, b) -> fn(a, b) to every exponent."""
        out: Dict[LinForm, Fraction] = {}
        for (a, b), c in self.terms.items():
            k = fn(a, b)
            s = out.get(k, Fraction(0)) + c
            if s:
                out[k] = s
            elif k in out:
                del out[k]
        return _raw_poly(out)

    # -- inspection --------------------------------------------------------

    def sorted_terms(self):
        """Terms in canonical (lexicographic exponent) order."""
        return sorted(self.terms.items())

    def min_key(self) -> LinForm:
        return min(self.terms)

    def max_key(self) -> LinForm:
        return max(self.terms)

    def eval(self, t: RatLike, x: RatLike):
        """High-precision numeric value at rational (t, x), as mpmath mpf."""
        t, x = as_frac(t), as_frac(x)
        with mpmath.workprec(EVAL_PRECISION):
            total = mpmath.mpf(0)
            for (a, b), c in self.terms.items():
                total += _mpf_frac(c) * mpmath.exp(_mpf_frac(a * t + b * x))
            return total

    def eval_mass(self, t: RatLike, x: RatLike):
        """Sum of absolute term values at (t, x): the pre-cancellation scale."""
        t, x = as_frac(t), as_frac(x)
        with mpmath.workprec(EVAL_PRECISION):
            total = mpmath.mpf(0)
            for (a, b), c in self.terms.items():
                total += abs(_mpf_frac(c)) * mpmath.exp(_mpf_frac(a * t + b * x))
            return total

    def __repr__(self) -> str:
        if not self.terms:
            return "ExpPoly(0)"
        bits = []
        for (a, b), c in self.sorted_terms():
            bsign = "+" if b >= 0 else ""
            bits.append(f"{c}*e^({a}t{bsign}{b}x)")
        return "ExpPoly(" + " + ".join(bits) + ")"


def _raw_poly(terms: Dict[LinForm, Fraction]) -> ExpPoly:
    """Wrap an already-canonical term dict without re-checking."""
    p = ExpPoly.__new__(ExpPoly)
    p.terms = terms
    return p


def _coerce_poly(v) -> ExpPoly:
    if isinstance(v, ExpPoly):
        return v
    if isinstance(v, (int, Fraction)):
        return ExpPoly.const(v)
    return NotImplemented


def _mpf_frac(q: Fraction):
    return mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)


ONE = ExpPoly.const(1)


def divexact(num: ExpPoly, den: ExpPoly) -> ExpPoly:
    """Exact quotient num/den in the exponential-polynomial ring.

    Eliminates the lexicographically greatest term at each step (every
    monomial is invertible, so the ring is an ordered-group ring and an
    integral domain; when the quotient exists this terminates in exactly
    len(quotient) steps).  Raises InexactDivision if no ring quotient exists.
    """
    if den.is_zero():
        raise DivisionByZeroField("divexact by zero")
    if num.is_zero():
        return ExpPoly()
    (da, db), dc = max(den.terms.items())
    quot: Dict[LinForm, Fraction] = {}
    rem = num
    steps = 0
    while rem.terms:
        steps += 1
        if steps > DIVEXACT_MAX_STEPS:
            raise InexactDivision("quotient did not terminate")
        (ra, rb), rc = max(rem.terms.items())
        k = (ra - da, rb - db)
        c = rc / dc
        quot[k] = quot.get(k, Fraction(0)) + c
        rem = rem - ExpPoly.term(c, k[0], k[1]) * den
        if (ra, rb) in rem.terms:
            raise InexactDivision("leading term failed to cancel")
    return ExpPoly({k: c for k, c in quot.items() if c})


class ExpRational:
    """Normalized quotient of two ExpPolys.

    Canonical form: zero is 0/1; otherwise the denominator is scaled so its
    lexicographically least term has coefficient 1.  Equality is decided by
    cross-multiplication, so equal values always compare equal even though
    no polynomial gcd is taken.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _coerce_poly(num)
        den = ONE if den is None else _coerce_poly(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("ExpRational parts must be ExpPoly or rational")
        if den.is_zero():
            raise DivisionByZeroField("zero denominator")
        if num.is_zero():
            self.num, self.den = ExpPoly(), ONE
            return
        anchor = den.terms[den.min_key()]
        if anchor != 1:
            inv = 1 / anchor
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @staticmethod
    def zero() -> "ExpRational":
        return ExpRational(ExpPoly())

    @staticmethod
    def const(c: RatLike) -> "ExpRational":
        return ExpRational(ExpPoly.const(c))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den == ONE

    # -- field operations --------------------------------------------------

    def __add__(self, other) -> "ExpRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return ExpRational(self.num + other.num, self.den)
        return ExpRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "ExpRational":
        return ExpRational(-self.num, self.den)

    def __sub__(self, other) -> "ExpRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ExpRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "ExpRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ExpRational.zero()
        return ExpRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExpRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZeroField("division by zero field value")
        if self.is_zero():
            return ExpRational.zero()
        return ExpRational(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "ExpRational":
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def inv(self) -> "ExpRational":
        return 1 / self

    def __eq__(self, other) -> bool:
        other = _coerce_rational(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self) -> int:
        raise TypeError("ExpRational is not hashable (equality is semantic)")

    # -- calculus ----------------------------------------------------------

    def deriv(self, i: int, j: int, w: WaveConstants) -> "ExpRational":
        """Quotient-rule D_{i,j}."""
        if self.is_poly():
            return ExpRational(self.num.deriv(i, j, w))
        dn = self.num.deriv(i, j, w)
        dd = self.den.deriv(i, j, w)
        return ExpRational(dn * self.den - self.num * dd, self.den * self.den)

    def dlog(self, i: int, j: int, w: WaveConstants) -> "ExpRational":
        """Logarithmic derivative D_{i,j} ln(self) = deriv/self."""
        if self.is_zero():
            raise DivisionByZeroField("log derivative of zero")
        return self.deriv(i, j, w) / self

    def map_exponents(self, fn) -> "ExpRational":
        return ExpRational(self.num.map_exponents(fn), self.den.map_exponents(fn))

    def as_constant(self):
        """Return this value as a Fraction if it is constant, else None."""
        if self.is_zero():
            return Fraction(0)
        quot = None
        try:
            quot = divexact(self.num, self.den)
        except InexactDivision:
            return None
        if len(quot.terms) == 1 and (Fraction(0), Fraction(0)) in quot.terms:
            return quot.terms[(Fraction(0), Fraction(0))]
        return None

    def eval(self, t: RatLike, x: RatLike) -> float:
        """Numeric value at rational (t, x); EvalPole near denominator zeros."""
        dv = self.den.eval(t, x)
        if abs(dv) < POLE_THRESHOLD:
            raise EvalPole(f"denominator ~ {mpmath.nstr(dv, 5)} at (t={t}, x={x})")
        return float(self.num.eval(t, x) / dv)

    def __repr__(self) -> str:
        if self.is_poly():
            return f"ExpRational({self.num!r})"
        return f"ExpRational({self.num!r} / {self.den!r})"


def _coerce_rational(v) -> "ExpRational":
    if isinstance(v, ExpRational):
        return v
    if isinstance(v, (ExpPoly, int, Fraction)):
        return ExpRational(v)
    return NotImplemented
