r"""
Hitchin base points given by exact germ data.

A base point records the global degree data (``n``, genus ``g``, degree of
the twisting bundle) together with every zero of the top coefficient
``a_{2n}`` and, optionally, local germs of ``a_2, ..., a_{2n}`` there.

The reduced characteristic polynomial at a zero is

    q(z, eta) = eta^n + a_2(z) eta^(n-1) + ... + a_{2n}(z),

obtained from ``lambda^(2n) + a_2 lambda^(2n-2) + ... + a_{2n}`` by
``eta = lambda^2``. Its zero set is the quotient of the spectral curve by
the involution ``lambda -> -lambda``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .algebra import GaussRational, LaurentSeries, Poly, PrecisionError, poly_discriminant

Twist = Union[str, int]


@dataclass(frozen=True)
class MarkedZero:
    """A zero of ``a_{2n}`` with its order and optional germs ``(a_2, ..., a_{2n})``."""

    label: str
    order: int
    germs: Optional[tuple[LaurentSeries, ...]] = None

    def __post_init__(self):
        if self.germs is not None:
            object.__setattr__(self, "germs", tuple(self.germs))

    @property
    def has_germs(self) -> bool:
        return self.germs is not None

    def coefficient_germ(self, i: int) -> LaurentSeries:
        """Germ of ``a_{2i}``; ``a_0`` is the constant 1."""
        if i == 0:
            return LaurentSeries.const(1)
        if self.germs is None:
            raise ValueError("germs required")
        return self.germs[i - 1]


@dataclass(frozen=True)
class BasePoint:
    n: int
    g: int
    zeros: tuple[MarkedZero, ...]
    twist: Twist = "canonical"
    off_zero_branching: str = "simple"
    irreducible_reduced: bool = False

    def __post_init__(self):
        object.__setattr__(self, "zeros", tuple(self.zeros))

    @property
    def deg_m(self) -> int:
        if self.twist == "canonical":
            return 2 * self.g - 2
        return int(self.twist)

    @property
    def is_canonical(self) -> bool:
        return self.twist == "canonical"

    @property
    def orders(self) -> list[int]:
        return [z.order for z in self.zeros]

    @property
    def n_odd(self) -> int:
        return sum(1 for z in self.zeros if z.order % 2)

    @property
    def n_even(self) -> int:
        return sum(1 for z in self.zeros if z.order % 2 == 0)

    @property
    def germ_mode(self) -> bool:
        return bool(self.zeros) and all(z.has_germs for z in self.zeros)

    def zero(self, label: str) -> MarkedZero:
        for z in self.zeros:
            if z.label == label:
                return z
        raise KeyError(label)


def order_only(n: int, g: int, orders: Sequence[int], twist: Twist = "canonical",
               irreducible_reduced: bool = True, prefix: str = "x") -> BasePoint:
    """Convenience constructor labelling zeros ``x1, x2, ...``."""
    width = len(str(len(orders)))
    zeros = tuple(MarkedZero(f"{prefix}{i + 1:0{width}d}", m) for i, m in enumerate(orders))
    return BasePoint(n, g, zeros, twist, irreducible_reduced=irreducible_reduced)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_base_point(b: BasePoint) -> list[str]:
    """Return the list of violated invariants (empty when valid)."""
    out = []
    if b.n < 1:
        out.append(f"n must be positive, got {b.n}")
    if b.g < 2:
        out.append(f"genus must be at least 2, got {b.g}")
    if b.twist != "canonical" and (not isinstance(b.twist, int) or b.twist <= 0):
        out.append(f"twist must be 'canonical' or a positive degree, got {b.twist!r}")
        return out
    if b.off_zero_branching not in ("simple", "declared"):
        out.append(f"unknown off-zero branching mode {b.off_zero_branching!r}")
    labels = [z.label for z in b.zeros]
    if len(set(labels)) != len(labels):
        out.append("zero labels are not unique")
    for z in b.zeros:
        if z.order < 1:
            out.append(f"zero {z.label} has order {z.order} < 1")
    total, expected = sum(b.orders), 2 * b.n * b.deg_m
    if total != expected:
        out.append(f"degree mismatch {total} ≠ {expected}")
    if b.n_odd % 2:
        out.append(f"number of odd-order zeros is odd ({b.n_odd})")
    with_germs = [z for z in b.zeros if z.has_germs]
    if with_germs and len(with_germs) != len(b.zeros):
        out.append("germs must be given at every zero or at none")
    for z in with_germs:
        out.extend(_germ_violations(b.n, z))
    return out


def _germ_violations(n: int, z: MarkedZero) -> list[str]:
    out = []
    assert z.germs is not None
    if len(z.germs) != n:
        return [f"zero {z.label} carries {len(z.germs)} germs, expected {n}"]
    for i, f in enumerate(z.germs, start=1):
        if not f.is_zero() and f.valuation < 0:
            out.append(f"germ a{2 * i} at {z.label} has a pole")
        if f.truncation_order < z.order + 2:
            out.append(f"germ a{2 * i} at {z.label} is truncated below order {z.order + 2}")
    top = z.germs[-1]
    if top.is_zero():
        out.append(f"insufficient germ precision at {z.label}: a{2 * n} vanishes to truncation")
    elif top.valuation != z.order:
        out.append(f"germ order mismatch at {z.label}: ord(a{2 * n}) = {top.valuation} ≠ {z.order}")
    return out


def _require_valid(b: BasePoint) -> None:
    v = validate_base_point(b)
    if v:
        raise ValueError("invalid base point: " + "; ".join(v))


def _require_germs(b: BasePoint) -> None:
    if not b.germ_mode:
        raise ValueError("germs required")


# ---------------------------------------------------------------------------
# discriminants
# ---------------------------------------------------------------------------

def reduced_polynomial(z: MarkedZero, n: int) -> Poly:
    """``q(z, eta)`` as a polynomial in ``eta`` with series coefficients."""
    coeffs = [z.coefficient_germ(n - j) for j in range(n + 1)]
    return Poly(coeffs, "eta")


@dataclass(frozen=True)
class DiscriminantGerms:
    disc_sp: LaurentSeries
    disc_red_sp: LaurentSeries
    disc_so: LaurentSeries
    disc_red_so: LaurentSeries


@dataclass(frozen=True)
class DiscriminantOrders:
    label: str
    disc_sp: int
    disc_red_sp: int
    disc_so: int
    disc_red_so: int


def discriminant_germs(z: MarkedZero, n: int) -> DiscriminantGerms:
    """
    Local germs of the symplectic and odd orthogonal discriminants.

    The reduced discriminant is the eta-discriminant of the reduced
    polynomial; the full discriminant multiplies in ``a_{2n}``. Both
    root systems share the same product over the roots ``e_i +- e_j``, and
    the remaining factor (over ``+-2 e_i`` resp. ``+-e_i``) is ``a_{2n}`` up
    to a constant.
    """
    if not z.has_germs:
        raise ValueError("germs required")
    red = poly_discriminant(reduced_polynomial(z, n))
    if not isinstance(red, LaurentSeries):
        red = LaurentSeries.const(red)
    top = z.coefficient_germ(n)
    full = top * red
    return DiscriminantGerms(full, red, full, red)


def _order(f: LaurentSeries, label: str) -> int:
    try:
        return f.order()
    except PrecisionError:
        raise PrecisionError(f"insufficient germ precision at {label}") from None


def discriminant_orders(b: BasePoint) -> list[DiscriminantOrders]:
    """Vanishing orders of the discriminants at every marked zero."""
    _require_germs(b)
    out = []
    for z in b.zeros:
        d = discriminant_germs(z, b.n)
        red = _order(d.disc_red_sp, z.label)
        top = _order(z.coefficient_germ(b.n), z.label)
        out.append(DiscriminantOrders(z.label, top + red, red, top + red, red))
    return out


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

class Kind(str, enum.Enum):
    REGULAR = "Regular"
    SL2_SINGULAR = "Sl2TypeSingular"
    NOT_SL2 = "NotSl2Type"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ZeroDiagnostics:
    label: str
    order: int
    smooth_at_origin: bool
    sheet_count: int
    off_zero_smooth: Optional[bool] = None


@dataclass(frozen=True)
class Classification:
    kind: Kind
    zeros: tuple[ZeroDiagnostics, ...] = field(default_factory=tuple)

    @property
    def is_sl2_type(self) -> bool:
        return self.kind is not Kind.NOT_SL2


def _constant_terms(z: MarkedZero, n: int, power: int) -> Poly:
    # coefficient of z^power in q(z, eta), as a polynomial in eta
    coeffs = []
    for j in range(n + 1):
        f = z.coefficient_germ(n - j)
        try:
            coeffs.append(f.coefficient(power))
        except PrecisionError:
            raise PrecisionError(f"insufficient germ precision at {z.label}") from None
    return Poly(coeffs, "eta")


def _off_zero_smooth(z: MarkedZero, n: int) -> bool:
    q0 = _constant_terms(z, n, 0)
    d = next(i for i, c in enumerate(q0.coeffs) if not c.is_zero())
    u = Poly(q0.coeffs[d:], "eta")
    r = u.gcd(u.derivative())
    if r.is_constant():
        return True
    dz = _constant_terms(z, n, 1)
    return r.gcd(dz).is_constant()


def classify_sl2_type(b: BasePoint) -> Classification:
    """
    Decide whether the quotient curve is smooth over every marked zero.

    At a zero of order ``m >= 2`` the origin of the quotient is smooth iff
    ``a_{2n-2}`` does not vanish there. In ``declared`` mode the other
    repeated roots of ``q(0, eta)`` are tested through
    ``gcd(gcd(u, u'), dq/dz)``.
    """
    _require_germs(b)
    _require_valid(b)
    diags = []
    for z in b.zeros:
        q0 = _constant_terms(z, b.n, 0)
        mult = next(i for i, c in enumerate(q0.coeffs) if not c.is_zero())
        sub_top = q0.coefficient(1)
        smooth = z.order == 1 or not sub_top.is_zero()
        off = _off_zero_smooth(z, b.n) if b.off_zero_branching == "declared" else None
        diags.append(ZeroDiagnostics(z.label, z.order, smooth, 2 * mult, off))
    if any(not d.smooth_at_origin or d.off_zero_smooth is False for d in diags):
        kind = Kind.NOT_SL2
    elif all(d.order <= 1 for d in diags):
        kind = Kind.REGULAR
    else:
        kind = Kind.SL2_SINGULAR
    return Classification(kind, tuple(diags))


# ---------------------------------------------------------------------------
# curve invariants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurveInvariants:
    genus_quotient: int
    genus_normalized: int
    prym_dim: int
    deg_R_quotient: int
    n_odd: int
    n_even: int


def curve_invariants(b: BasePoint) -> CurveInvariants:
    """
    Genera of the quotient curve and of the normalized spectral curve.

    In germ mode the base point is classified first and rejected unless it
    is of sl(2)-type; order-only base points are taken as asserted.
    """
    _require_valid(b)
    if b.germ_mode and not classify_sl2_type(b).is_sl2_type:
        raise ValueError("curve invariants require an sl(2)-type base point")
    n, g, d = b.n, b.g, b.deg_m
    gq = n * (g - 1) + (n * n - n) * d + 1
    gn = 2 * n * (g - 1) + 2 * (n * n - n) * d + b.n_odd // 2 + 1
    return CurveInvariants(gq, gn, gn - gq, n * (2 * n - 2) * d, b.n_odd, b.n_even)


def prym_dim_canonical(n: int, g: int, n_odd: int) -> int:
    """Prym dimension for the canonical twist in closed form."""
    return n * (2 * n - 1) * (g - 1) + n_odd // 2
