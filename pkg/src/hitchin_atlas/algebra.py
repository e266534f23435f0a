r"""
Exact arithmetic over the Gaussian rationals.

Provides Gaussian rational scalars, univariate polynomials over any
commutative coefficient ring, truncated Laurent series, log-polar
expressions (finite sums of ``z^a zbar^b |z|^{2 gamma}``) and small dense
matrices over each of these rings. Nothing here ever rounds.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

INF = math.inf


class PrecisionError(ArithmeticError):
    """Raised when a truncated series cannot resolve the requested quantity."""


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

def _rational_sqrt(q: Fraction) -> Fraction:
    if q < 0:
        raise ValueError("negative radicand")
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise ValueError(f"{q} is not a perfect square in the Gaussian rationals")
    return Fraction(rn, rd)


class GaussRational:
    """
    An element ``re + i*im`` of Q(i).

    Instances are treated as immutable; every operation returns a new value.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Any = 0, im: Any = 0):
        if isinstance(re, GaussRational):
            if im:
                raise TypeError("cannot combine a Gaussian rational with an imaginary part")
            self.re, self.im = re.re, re.im
            return
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(x: Any) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussRational")

    @classmethod
    def parse(cls, text: str) -> "GaussRational":
        """
        Parse literals such as ``"3/2"``, ``"-i"``, ``"1/2+i*2"`` or ``"2*i"``.
        """
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian rational literal")
        if s[0] not in "+-":
            s = "+" + s
        parts = re.findall(r"[+-][^+-]+", s)
        if "".join(parts) != s:
            raise ValueError(f"malformed Gaussian rational literal {text!r}")
        total = GaussRational(0)
        for part in parts:
            sign, body = (-1 if part[0] == "-" else 1), part[1:]
            factors = body.split("*")
            imag = factors.count("i")
            factors = [f for f in factors if f != "i"]
            if imag > 1 or len(factors) > 1:
                raise ValueError(f"malformed Gaussian rational literal {text!r}")
            try:
                value = Fraction(factors[0]) if factors else Fraction(1)
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"malformed Gaussian rational literal {text!r}") from None
            total = total + (GaussRational(0, sign * value) if imag else GaussRational(sign * value))
        return total

    def conj(self) -> "GaussRational":
        return GaussRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_exact_zero(self) -> bool:
        return self.is_zero()

    def zero_like(self) -> "GaussRational":
        return GaussRational(0)

    def one_like(self) -> "GaussRational":
        return GaussRational(1)

    def is_real(self) -> bool:
        return not self.im

    def sqrt(self) -> "GaussRational":
        """Exact square root; only perfect squares in Q(i) are accepted."""
        if self.is_zero():
            return GaussRational(0)
        r = _rational_sqrt(self.norm())
        x2 = (self.re + r) / 2
        if x2:
            x = _rational_sqrt(x2)
            return GaussRational(x, self.im / (2 * x))
        return GaussRational(0, _rational_sqrt((r - self.re) / 2))

    def __add__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "GaussRational":
        n = self.norm()
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = GaussRational(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        try:
            o = GaussRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"GaussRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        mag = abs(self.im)
        tail = "i" if mag == 1 else f"i*{mag}"
        sign = "-" if self.im < 0 else "+"
        if not self.re:
            return tail if sign == "+" else "-" + tail
        return f"{self.re}{sign}{tail}"


I = GaussRational(0, 1)


def gr(x: Any) -> GaussRational:
    """Shorthand coercion to GaussRational (strings are parsed)."""
    if isinstance(x, str):
        return GaussRational.parse(x)
    return GaussRational.coerce(x)


# ---------------------------------------------------------------------------
# generic ring helpers
# ---------------------------------------------------------------------------

def _is_zero(x: Any) -> bool:
    f = getattr(x, "is_exact_zero", None)
    if f is not None:
        return f()
    return x == 0


def _one_like(x: Any) -> Any:
    f = getattr(x, "one_like", None)
    return f() if f is not None else 1


def _zero_like(x: Any) -> Any:
    f = getattr(x, "zero_like", None)
    return f() if f is not None else 0


def _join_terms(parts: list[str]) -> str:
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def _acc(total, term):
    return term if total is None else total + term


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------

class Poly:
    """
    Univariate polynomial with coefficients stored lowest degree first.

    Coefficients may come from any commutative ring implemented here
    (GaussRational, LaurentSeries, another Poly, ...), which is how
    resultants "in one variable with the other symbolic" are realized.
    """

    __slots__ = ("coeffs", "var")

    def __init__(self, coeffs: Iterable[Any] = (), var: str = "x"):
        cs = [GaussRational.coerce(c) if isinstance(c, (int, Fraction)) else c for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def monomial(cls, c: Any, e: int, var: str = "x") -> "Poly":
        z = _zero_like(c)
        return cls([z] * e + [c], var)

    @classmethod
    def gen(cls, var: str = "x") -> "Poly":
        return cls([0, 1], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Any:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_exact_zero(self) -> bool:
        return not self.coeffs

    def zero_like(self) -> "Poly":
        return Poly((), self.var)

    def one_like(self) -> "Poly":
        c = self.coeffs[0] if self.coeffs else GaussRational(0)
        return Poly([_one_like(c)], self.var)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coefficient(self, e: int) -> Any:
        if 0 <= e < len(self.coeffs):
            return self.coeffs[e]
        return GaussRational(0)

    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly) and other.var == self.var:
            return other
        if isinstance(other, (int, Fraction, GaussRational, LaurentSeries, LogPolarExpr)) or (
            isinstance(other, Poly) and other.var != self.var
        ):
            return Poly([other], self.var)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        out = []
        for i in range(n):
            if i < len(a) and i < len(b):
                out.append(a[i] + b[i])
            else:
                out.append(a[i] if i < len(a) else b[i])
        return Poly(out, self.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.coeffs or not o.coeffs:
            return Poly((), self.var)
        out: list = [None] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] = _acc(out[i + j], a * b)
        return Poly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = self.one_like()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c: Any) -> "Poly":
        return Poly([a * c for a in self.coeffs], self.var)

    def derivative(self) -> "Poly":
        return Poly([self.coeffs[i] * i for i in range(1, len(self.coeffs))], self.var)

    def __call__(self, x: Any) -> Any:
        if not self.coeffs:
            return _zero_like(x)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def map_coefficients(self, fn: Callable[[Any], Any]) -> "Poly":
        return Poly([fn(c) for c in self.coeffs], self.var)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(self.coeffs) != len(o.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, o.coeffs))

    __hash__ = None  # type: ignore[assignment]

    # --- field-coefficient operations --------------------------------------

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        """Euclidean division; requires an invertible leading coefficient."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        inv = _invert(other.lead)
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly((), self.var), self
        quo: list = [None] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] * inv
            quo[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        rem = rem[: len(other.coeffs) - 1]
        return Poly(quo, self.var), Poly(rem, self.var)

    def exact_div(self, other: Any) -> "Poly":
        if not isinstance(other, Poly):
            inv = _invert(other)
            return self.scale(inv)
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("inexact polynomial division")
        return q

    def monic(self) -> "Poly":
        return self.scale(_invert(self.lead))

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd over a coefficient field."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else a

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for e, c in enumerate(self.coeffs):
            if _is_zero(c):
                continue
            mono = "" if e == 0 else (self.var if e == 1 else f"{self.var}^{e}")
            cs = str(c)
            if any(ch in cs[1:] for ch in "+- "):
                cs = f"({cs})"
            if not mono:
                terms.append(cs)
            elif cs == "1":
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return _join_terms(terms)


def _invert(c: Any) -> Any:
    if isinstance(c, (GaussRational, LaurentSeries, LogPolarExpr)):
        return c.inverse()
    if isinstance(c, Poly):
        if c.degree != 0:
            raise ArithmeticError("non-constant polynomial is not a unit")
        return Poly([_invert(c.coeffs[0])], c.var)
    return GaussRational.coerce(c).inverse()


def sylvester_matrix(p: Poly, q: Poly) -> "Matrix":
    """Sylvester matrix with rows built from coefficients highest degree first."""
    m, n = p.degree, q.degree
    size = m + n
    z = _zero_like(p.lead)
    rows = []
    pc, qc = list(reversed(p.coeffs)), list(reversed(q.coeffs))
    for i in range(n):
        rows.append([z] * i + pc + [z] * (size - m - 1 - i))
    for i in range(m):
        rows.append([z] * i + qc + [z] * (size - n - 1 - i))
    return Matrix(rows)


def poly_resultant(p: Poly, q: Poly) -> Any:
    """
    Resultant of ``p`` and ``q`` as the determinant of their Sylvester matrix.

    The result lives in the coefficient ring of the inputs, so polynomials
    whose coefficients are polynomials in a second variable give a
    polynomial in that variable.
    """
    if p.is_zero() or q.is_zero():
        raise ValueError("undefined resultant")
    if p.degree == 0 and q.degree == 0:
        return _one_like(p.lead)
    if p.degree == 0:
        return _power(p.lead, q.degree)
    if q.degree == 0:
        return _power(q.lead, p.degree)
    return sylvester_matrix(p, q).det()


def _power(x: Any, e: int) -> Any:
    result = _one_like(x)
    for _ in range(e):
        result = result * x
    return result


def poly_discriminant(p: Poly) -> Any:
    """
    ``(-1)^(d(d-1)/2) Res(p, p') / lead(p)`` with ``d = deg p``.

    With this sign convention ``disc(x^2 + b x + c) = b^2 - 4c``.
    """
    d = p.degree
    if d < 1:
        raise ValueError("discriminant of a constant polynomial is undefined")
    if d == 1:
        return _one_like(p.lead)
    r = poly_resultant(p, p.derivative())
    lead = p.lead
    if not (isinstance(lead, GaussRational) and lead == 1):
        r = _exact_quotient(r, lead)
    return -r if (d * (d - 1) // 2) % 2 else r


def _exact_quotient(a: Any, b: Any) -> Any:
    if isinstance(a, Poly):
        return a.exact_div(b)
    return a * _invert(b)


# ---------------------------------------------------------------------------
# Truncated Laurent series
# ---------------------------------------------------------------------------

class LaurentSeries:
    """
    Laurent series ``sum c_e z^e`` known exactly for exponents below
    ``truncation_order``.

    ``truncation_order`` is ``math.inf`` for an exact (finite) Laurent
    polynomial. Binary operations keep the tightest bound below which the
    result is still exact.
    """

    __slots__ = ("_c", "_prec")

    def __init__(self, terms: dict[int, Any] | None = None, truncation_order: float = INF):
        prec = truncation_order
        if prec != INF:
            prec = int(prec)
        c = {}
        for e, v in (terms or {}).items():
            if e >= prec:
                continue
            v = GaussRational.coerce(v)
            if not v.is_zero():
                c[int(e)] = v
        self._c = c
        self._prec = prec

    # --- constructors -------------------------------------------------------

    @classmethod
    def from_list(cls, coeffs: Sequence[Any], valuation: int = 0,
                  truncation_order: float = INF) -> "LaurentSeries":
        return cls({valuation + i: c for i, c in enumerate(coeffs)}, truncation_order)

    @classmethod
    def monomial(cls, c: Any = 1, e: int = 1, truncation_order: float = INF) -> "LaurentSeries":
        return cls({e: c}, truncation_order)

    @classmethod
    def const(cls, c: Any, truncation_order: float = INF) -> "LaurentSeries":
        return cls({0: c}, truncation_order)

    @classmethod
    def zero(cls, truncation_order: float = INF) -> "LaurentSeries":
        return cls({}, truncation_order)

    # --- accessors ----------------------------------------------------------

    @property
    def truncation_order(self) -> float:
        return self._prec

    @property
    def valuation(self) -> float:
        """Lowest exponent with nonzero coefficient, or the bound if zero to truncation."""
        return min(self._c) if self._c else self._prec

    @property
    def coefficients(self) -> list[GaussRational]:
        if not self._c:
            return []
        lo = min(self._c)
        hi = max(self._c) if self._prec == INF else self._prec - 1
        return [self._c.get(e, GaussRational(0)) for e in range(lo, hi + 1)]

    def terms(self) -> dict[int, GaussRational]:
        return dict(self._c)

    def coefficient(self, e: int) -> GaussRational:
        if e >= self._prec:
            raise PrecisionError(f"coefficient of z^{e} is beyond the truncation order {self._prec}")
        return self._c.get(e, GaussRational(0))

    def is_exact(self) -> bool:
        return self._prec == INF

    def is_zero(self) -> bool:
        """Zero up to the truncation bound."""
        return not self._c

    def is_exact_zero(self) -> bool:
        return not self._c and self._prec == INF

    def is_monomial(self) -> bool:
        return len(self._c) == 1 and self._prec == INF

    def order(self) -> int:
        """Valuation, raising if the series vanishes to its truncation."""
        if not self._c:
            if self._prec == INF:
                raise ValueError("the zero series has no order")
            raise PrecisionError(f"series vanishes to truncation order {self._prec}")
        return min(self._c)

    def degree(self) -> int:
        if not self._c:
            raise ValueError("zero series has no degree")
        return max(self._c)

    def zero_like(self) -> "LaurentSeries":
        return LaurentSeries()

    def one_like(self) -> "LaurentSeries":
        return LaurentSeries({0: 1})

    def truncate(self, n: float) -> "LaurentSeries":
        return LaurentSeries(self._c, min(self._prec, n))

    def with_truncation(self, n: float) -> "LaurentSeries":
        return self.truncate(n)

    # --- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "LaurentSeries | None":
        if isinstance(x, LaurentSeries):
            return x
        if isinstance(x, (int, Fraction, GaussRational)):
            return LaurentSeries({0: x})
        return None

    def __add__(self, other):
        o = LaurentSeries._coerce(other)
        if o is None:
            return NotImplemented
        c = dict(self._c)
        for e, v in o._c.items():
            c[e] = c[e] + v if e in c else v
        return LaurentSeries(c, min(self._prec, o._prec))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({e: -v for e, v in self._c.items()}, self._prec)

    def __sub__(self, other):
        o = LaurentSeries._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = LaurentSeries._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            s = GaussRational.coerce(other)
            if s.is_zero():
                return LaurentSeries()
            return LaurentSeries({e: v * s for e, v in self._c.items()}, self._prec)
        o = LaurentSeries._coerce(other)
        if o is None:
            return NotImplemented
        prec = min(self.valuation + o._prec, o.valuation + self._prec)
        c: dict[int, GaussRational] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in o._c.items():
                e = e1 + e2
                if e < prec:
                    c[e] = c[e] + v1 * v2 if e in c else v1 * v2
        return LaurentSeries(c, prec)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by ``z^k``."""
        return LaurentSeries({e + k: v for e, v in self._c.items()}, self._prec + k)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = LaurentSeries({0: 1})
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self, relative_precision: float | None = None) -> "LaurentSeries":
        """
        Multiplicative inverse.

        Exact non-monomial series have infinite inverses; for those a
        ``relative_precision`` (number of correct terms) must be supplied.
        """
        if not self._c:
            raise PrecisionError("cannot invert a series that vanishes to its truncation")
        v = min(self._c)
        if self.is_monomial():
            return LaurentSeries({-v: self._c[v].inverse()})
        rel = self._prec - v
        if relative_precision is not None:
            rel = min(rel, relative_precision)
        if rel == INF:
            raise PrecisionError("inverse of an exact non-monomial series needs a precision")
        rel = int(rel)
        u = [self._c.get(v + i, GaussRational(0)) for i in range(rel)]
        inv0 = u[0].inverse()
        b = [inv0]
        for n in range(1, rel):
            s = GaussRational(0)
            for j in range(1, n + 1):
                if not u[j].is_zero():
                    s = s + u[j] * b[n - j]
            b.append(-(s * inv0))
        return LaurentSeries({-v + i: b[i] for i in range(rel)}, -v + rel)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            return self * GaussRational.coerce(other).inverse()
        o = LaurentSeries._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_monomial():
            return self * o.inverse()
        rel = None
        if o._prec == INF:
            if self._prec == INF:
                raise PrecisionError("quotient of exact series needs a precision; truncate first")
            rel = self._prec - self.valuation
        return self * o.inverse(rel)

    def __rtruediv__(self, other):
        o = LaurentSeries._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def derivative(self) -> "LaurentSeries":
        return LaurentSeries({e - 1: v * e for e, v in self._c.items() if e}, self._prec - 1)

    def conj_coefficients(self) -> "LaurentSeries":
        return LaurentSeries({e: v.conj() for e, v in self._c.items()}, self._prec)

    def substitute_power(self, k: int) -> "LaurentSeries":
        """Substitute ``z -> w^k`` (pullback along a k-fold cover)."""
        return LaurentSeries({e * k: v for e, v in self._c.items()}, self._prec * k)

    def rotate(self, xi: GaussRational) -> "LaurentSeries":
        """Substitute ``z -> xi * z``."""
        return LaurentSeries({e: v * xi ** e for e, v in self._c.items()}, self._prec)

    def compose(self, g: "LaurentSeries", truncation_order: float | None = None) -> "LaurentSeries":
        """
        ``self(g(z))`` for ``valuation(g) >= 1``.

        The result is exact below ``min(N_f * v, N_g + (e_min - 1) * v)``
        where ``v = val g`` and ``e_min`` is the lowest nonzero exponent of
        ``self``.
        """
        if g.is_zero() or g.valuation < 1:
            raise ValueError("composition requires a series of positive valuation")
        v = g.valuation
        nonconst = [e for e in self._c if e != 0]
        bound = self._prec * v
        if nonconst:
            bound = min(bound, g._prec + (min(nonconst) - 1) * v)
        if truncation_order is not None:
            bound = min(bound, truncation_order)
        if bound == INF and any(e < 0 for e in nonconst) and not g.is_monomial():
            raise PrecisionError("composition with negative powers needs a truncation order")
        gg = g.truncate(bound)
        result = LaurentSeries({}, bound)
        if 0 in self._c:
            result = result + LaurentSeries({0: self._c[0]})
        pos = sorted(e for e in nonconst if e > 0)
        neg = sorted((e for e in nonconst if e < 0), reverse=True)
        power = LaurentSeries({0: 1})
        cur = 0
        for e in pos:
            while cur < e:
                power = (power * gg).truncate(bound)
                cur += 1
            result = result + power * self._c[e]
        if neg:
            ginv = gg.inverse() if gg.is_monomial() else gg.inverse(bound - (min(neg) - 1) * v)
            power = LaurentSeries({0: 1})
            cur = 0
            for e in neg:
                while cur > e:
                    power = (power * ginv).truncate(bound)
                    cur -= 1
                result = result + power * self._c[e]
        return result.truncate(bound)

    def sqrt(self) -> "LaurentSeries":
        """Square root of a series with even valuation and square leading term."""
        if not self._c:
            raise PrecisionError("cannot take the square root of a series vanishing to truncation")
        v = min(self._c)
        if v % 2:
            raise ValueError("odd valuation has no Laurent square root")
        s0 = self._c[v].sqrt()
        if self.is_monomial():
            return LaurentSeries({v // 2: s0})
        rel = self._prec - v
        if rel == INF:
            raise PrecisionError("square root of an exact non-monomial series needs a truncation")
        rel = int(rel)
        u = [self._c.get(v + i, GaussRational(0)) for i in range(rel)]
        inv2 = (s0 * 2).inverse()
        s = [s0]
        for n in range(1, rel):
            acc = u[n]
            for j in range(1, n):
                acc = acc - s[j] * s[n - j]
            s.append(acc * inv2)
        return LaurentSeries({v // 2 + i: s[i] for i in range(rel)}, v // 2 + rel)

    # --- comparison ---------------------------------------------------------

    def compare(self, other: Any) -> tuple[bool, float]:
        """Equality up to the common truncation bound, with that bound."""
        o = LaurentSeries._coerce(other)
        if o is None:
            raise TypeError("cannot compare with non-series")
        bound = min(self._prec, o._prec)
        keys = {e for e in self._c if e < bound} | {e for e in o._c if e < bound}
        z = GaussRational(0)
        return all(self._c.get(e, z) == o._c.get(e, z) for e in keys), bound

    def __eq__(self, other):
        try:
            return self.compare(other)[0]
        except TypeError:
            return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self):
        return f"LaurentSeries({self})"

    def __str__(self):
        parts = []
        for e in sorted(self._c):
            c = self._c[e]
            cs = str(c)
            if "+" in cs[1:] or "-" in cs[1:]:
                cs = f"({cs})"
            if e == 0:
                parts.append(cs)
            else:
                mono = "z" if e == 1 else f"z^{e}"
                parts.append(mono if cs == "1" else (f"-{mono}" if cs == "-1" else f"{cs}*{mono}"))
        body = _join_terms(parts)
        if self._prec != INF:
            body += f" + O(z^{self._prec})"
        return body


def series_add(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    return f + g


def series_mul(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    return f * g


def series_compose(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    return f.compose(g)


def series_equal(f: LaurentSeries, g: LaurentSeries) -> tuple[bool, float]:
    return f.compare(g)


Z = LaurentSeries.monomial(1, 1)


# ---------------------------------------------------------------------------
# Log-polar expressions
# ---------------------------------------------------------------------------

Key = tuple  # (a: int, b: int, gamma: Fraction)


def _normalize_key(a: int, b: int, g: Fraction) -> Key:
    # z zbar = |z|^2, so shift the common power of z and zbar into gamma
    k = min(a, b)
    return (a - k, b - k, g + k)


class LogPolarExpr:
    """
    Finite sum ``sum c * z^a * zbar^b * |z|^(2*gamma)``.

    Keys are kept in the canonical form ``min(a, b) == 0`` so that equal
    functions have equal representations.
    """

    __slots__ = ("_t",)

    def __init__(self, terms: dict[tuple, Any] | Iterable[tuple] | None = None):
        t: dict[Key, GaussRational] = {}
        items = terms.items() if isinstance(terms, dict) else (
            ((x[0], x[1], x[2]), x[3]) for x in (terms or ()))
        for (a, b, g), c in items:
            key = _normalize_key(int(a), int(b), Fraction(g))
            c = GaussRational.coerce(c)
            if key in t:
                t[key] = t[key] + c
            else:
                t[key] = c
        self._t = {k: v for k, v in t.items() if not v.is_zero()}

    # --- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c: Any) -> "LogPolarExpr":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, gamma: Any = 0, c: Any = 1) -> "LogPolarExpr":
        return cls({(a, b, gamma): c})

    @classmethod
    def modulus_power(cls, e: Any, c: Any = 1) -> "LogPolarExpr":
        """``c * |z|^e`` for rational ``e``."""
        return cls({(0, 0, Fraction(e) / 2): c})

    @classmethod
    def from_laurent(cls, f: LaurentSeries) -> "LogPolarExpr":
        if not f.is_exact():
            raise PrecisionError("only exact Laurent polynomials embed in the log-polar ring")
        return cls({(e, 0, 0): c for e, c in f.terms().items()})

    # --- accessors ----------------------------------------------------------

    def terms(self) -> list[tuple[int, int, Fraction, GaussRational]]:
        return [(a, b, g, c) for (a, b, g), c in sorted(self._t.items())]

    def is_zero(self) -> bool:
        return not self._t

    def is_exact_zero(self) -> bool:
        return not self._t

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def zero_like(self) -> "LogPolarExpr":
        return LogPolarExpr()

    def one_like(self) -> "LogPolarExpr":
        return LogPolarExpr.const(1)

    # --- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "LogPolarExpr | None":
        if isinstance(x, LogPolarExpr):
            return x
        if isinstance(x, (int, Fraction, GaussRational)):
            return LogPolarExpr.const(x)
        if isinstance(x, LaurentSeries):
            return LogPolarExpr.from_laurent(x)
        return None

    def __add__(self, other):
        o = LogPolarExpr._coerce(other)
        if o is None:
            return NotImplemented
        t = dict(self._t)
        for k, v in o._t.items():
            t[k] = t[k] + v if k in t else v
        r = LogPolarExpr()
        r._t = {k: v for k, v in t.items() if not v.is_zero()}
        return r

    __radd__ = __add__

    def __neg__(self):
        r = LogPolarExpr()
        r._t = {k: -v for k, v in self._t.items()}
        return r

    def __sub__(self, other):
        o = LogPolarExpr._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = LogPolarExpr._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussRational)):
            s = GaussRational.coerce(other)
            r = LogPolarExpr()
            if not s.is_zero():
                r._t = {k: v * s for k, v in self._t.items()}
            return r
        o = LogPolarExpr._coerce(other)
        if o is None:
            return NotImplemented
        t: dict[Key, GaussRational] = {}
        for (a1, b1, g1), c1 in self._t.items():
            for (a2, b2, g2), c2 in o._t.items():
                key = _normalize_key(a1 + a2, b1 + b2, g1 + g2)
                c = c1 * c2
                t[key] = t[key] + c if key in t else c
        r = LogPolarExpr()
        r._t = {k: v for k, v in t.items() if not v.is_zero()}
        return r

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = LogPolarExpr.const(1)
        for _ in range(e):
            result = result * self
        return result

    def inverse(self) -> "LogPolarExpr":
        if len(self._t) != 1:
            raise ArithmeticError("not invertible in log-polar ring")
        ((a, b, g), c), = self._t.items()
        return LogPolarExpr({(-a, -b, -g): c.inverse()})

    def __truediv__(self, other):
        o = LogPolarExpr._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def conj(self) -> "LogPolarExpr":
        return LogPolarExpr({(b, a, g): c.conj() for (a, b, g), c in self._t.items()})

    def d(self) -> "LogPolarExpr":
        """Wirtinger derivative in z."""
        return LogPolarExpr({(a - 1, b, g): c * (a + g) for (a, b, g), c in self._t.items()})

    def dbar(self) -> "LogPolarExpr":
        """Wirtinger derivative in zbar."""
        return LogPolarExpr({(a, b - 1, g): c * (b + g) for (a, b, g), c in self._t.items()})

    def pullback_power(self, k: int) -> "LogPolarExpr":
        """Rewrite in ``w`` with ``z = w^k``."""
        return LogPolarExpr({(a * k, b * k, g * k): c for (a, b, g), c in self._t.items()})

    def descends(self, k: int) -> bool:
        return all(a % k == 0 and b % k == 0 for (a, b, _g) in self._t)

    def descend(self, k: int) -> "LogPolarExpr":
        """Inverse of ``pullback_power``; every term must be invariant under w -> xi w."""
        if not self.descends(k):
            raise ValueError("expression does not descend along the cover")
        return LogPolarExpr({(a // k, b // k, g / k): c for (a, b, g), c in self._t.items()})

    def rotate(self, xi: GaussRational) -> "LogPolarExpr":
        """Pull back along ``z -> xi z`` for a unit ``xi``."""
        xc = xi.conj()
        return LogPolarExpr({(a, b, g): c * xi ** a * xc ** b for (a, b, g), c in self._t.items()})

    def __eq__(self, other):
        o = LogPolarExpr._coerce(other)
        if o is None:
            return NotImplemented
        return self._t == o._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def __repr__(self):
        return f"LogPolarExpr({self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for (a, b, g), c in sorted(self._t.items()):
            mono = []
            if a:
                mono.append("z" if a == 1 else f"z^{a}")
            if b:
                mono.append("zbar" if b == 1 else f"zbar^{b}")
            if g:
                mono.append(f"|z|^{2 * g}")
            cs = str(c)
            if "+" in cs[1:] or "-" in cs[1:]:
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append("*".join(mono))
            else:
                parts.append(cs + "*" + "*".join(mono))
        return _join_terms(parts)


def wirtinger_d(e: LogPolarExpr) -> LogPolarExpr:
    return e.d()


def wirtinger_dbar(e: LogPolarExpr) -> LogPolarExpr:
    return e.dbar()


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Dense matrix over any of the rings above (or plain Python numbers)."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[Any]]):
        self.rows = tuple(tuple(r) for r in rows)
        if self.rows:
            n = len(self.rows[0])
            if n == 0 or any(len(r) != n for r in self.rows):
                raise ValueError("inconsistent matrix dimensions")

    @classmethod
    def identity(cls, n: int, one: Any = None, zero: Any = None) -> "Matrix":
        one = GaussRational(1) if one is None else one
        zero = _zero_like(one) if zero is None else zero
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int, zero: Any = None) -> "Matrix":
        zero = GaussRational(0) if zero is None else zero
        return cls([[zero] * c for _ in range(r)])

    @classmethod
    def diag(cls, entries: Sequence[Any], zero: Any = None) -> "Matrix":
        zero = _zero_like(entries[0]) if zero is None else zero
        n = len(entries)
        return cls([[entries[i] if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def block_diag(cls, *blocks: "Matrix", zero: Any = None) -> "Matrix":
        if zero is None:
            zero = _zero_like(blocks[0][0, 0])
        n = sum(b.nrows for b in blocks)
        rows = [[zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[off + i][off + j] = b[i, j]
            off += b.nrows
        return cls(rows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def map(self, fn: Callable[[Any], Any]) -> "Matrix":
        return Matrix([[fn(x) for x in r] for r in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.rows)))

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def conj_transpose(self) -> "Matrix":
        return Matrix([[x.conj() for x in r] for r in zip(*self.rows)])

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x)

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            return self.map(lambda x: x * other)
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = None
                for a, b in zip(r, c):
                    acc = _acc(acc, a * b)
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def __rmul__(self, other):
        return self.map(lambda x: other * x)

    def scale(self, c: Any) -> "Matrix":
        return self.map(lambda x: x * c)

    def trace(self) -> Any:
        acc = None
        for i in range(self.nrows):
            acc = _acc(acc, self.rows[i][i])
        return acc

    def is_zero(self) -> bool:
        return all(_zero_test(x) for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    __hash__ = None  # type: ignore[assignment]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows])

    def minor(self, i: int, j: int) -> Any:
        n = self.nrows
        if n == 1:
            return _one_like(self.rows[0][0])
        return self.submatrix([r for r in range(n) if r != i], [c for c in range(n) if c != j]).det()

    def charpoly_coefficients(self) -> list:
        """
        Coefficients ``[1, c1, ..., cn]`` of ``det(x I - A) = x^n + c1 x^(n-1) + ...``
        by the division-free Samuelson-Berkowitz recursion.
        """
        if self.nrows != self.ncols:
            raise ValueError("characteristic polynomial of a non-square matrix")
        return _berkowitz([list(r) for r in self.rows])

    def charpoly(self, var: str = "x") -> Poly:
        c = self.charpoly_coefficients()
        return Poly(list(reversed(c)), var)

    def det(self) -> Any:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        c = self.charpoly_coefficients()
        return c[-1] if self.nrows % 2 == 0 else -c[-1]

    def adjugate(self) -> "Matrix":
        n = self.nrows
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                m = self.minor(j, i)
                row.append(m if (i + j) % 2 == 0 else -m)
            out.append(row)
        return Matrix(out)

    def __repr__(self):
        return "Matrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"


def _zero_test(x: Any) -> bool:
    f = getattr(x, "is_zero", None)
    if f is not None:
        return f()
    return x == 0


def _berkowitz(a: list[list[Any]]) -> list:
    n = len(a)
    one = _one_like(a[0][0])
    if n == 1:
        return [one, -a[0][0]]
    q = _berkowitz([row[1:] for row in a[1:]])
    r_vec = a[0][1:]
    vec = [row[0] for row in a[1:]]
    sub = [row[1:] for row in a[1:]]
    t = [one, -a[0][0]]
    for _ in range(2, n + 1):
        acc = None
        for x, y in zip(r_vec, vec):
            acc = _acc(acc, x * y)
        t.append(-acc)
        vec = [_dot(row, vec) for row in sub]
    out = []
    for i in range(n + 1):
        acc = None
        for j in range(min(i, n - 1) + 1):
            acc = _acc(acc, t[i - j] * q[j])
        out.append(acc)
    return out


def _dot(u: Sequence[Any], v: Sequence[Any]) -> Any:
    acc = None
    for x, y in zip(u, v):
        acc = _acc(acc, x * y)
    return acc


def matrix_inverse_monomial_det(m: Matrix) -> Matrix:
    """
    Inverse of a log-polar matrix whose determinant is a single monomial,
    computed as adjugate divided by that unit.
    """
    if m.nrows != m.ncols:
        raise ValueError("only square matrices are invertible")
    det = LogPolarExpr._coerce(m.det())
    if det is None or not det.is_monomial():
        raise ArithmeticError("not invertible in log-polar ring")
    inv = det.inverse()
    return m.adjugate().map(lambda x: LogPolarExpr._coerce(x) * inv)
