"""
Singular hermitian metrics solving the decoupled Hitchin equation.

A metric ``h`` and Higgs field ``phi`` solve the decoupled equation when
the Chern connection of ``h`` is flat and ``phi`` is normal with respect
to ``h``. Metrics are matrices over the log-polar ring; every metric
handled here has a single-monomial determinant and is therefore invertible
in that ring.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .algebra import (
    GaussRational,
    I,
    LaurentSeries,
    LogPolarExpr,
    Matrix,
    matrix_inverse_monomial_det,
)
from .localmodels import PushforwardResult

ODD = "odd"
EVEN = "even"

_ROOTS = {2: GaussRational(-1), 4: I}


def lp(x) -> LogPolarExpr:
    """Embed a number, exact Laurent polynomial or log-polar value."""
    if isinstance(x, LogPolarExpr):
        return x
    if isinstance(x, LaurentSeries):
        return LogPolarExpr.from_laurent(x)
    return LogPolarExpr.const(x)


def lp_matrix(m: Matrix) -> Matrix:
    return m.map(lp)


def modulus(e) -> LogPolarExpr:
    """``|z|^e``."""
    return LogPolarExpr.modulus_power(Fraction(e))


@dataclass(frozen=True)
class HermitianGerm:
    h: Matrix
    coordinate_label: str = "z"

    def __post_init__(self):
        h = lp_matrix(self.h)
        object.__setattr__(self, "h", h)
        if h.nrows != h.ncols:
            raise ValueError("metric must be square")
        if h.conj_transpose() != h:
            raise ValueError("metric is not hermitian")
        if not lp(h.det()).is_monomial():
            raise ArithmeticError("not invertible in log-polar ring")

    @property
    def rank(self) -> int:
        return self.h.nrows

    def inverse(self) -> Matrix:
        return matrix_inverse_monomial_det(self.h)

    def det(self) -> LogPolarExpr:
        return lp(self.h.det())


@dataclass(frozen=True)
class DecoupledReport:
    curvature_defect: Matrix
    normality_defect: Matrix

    @property
    def flat(self) -> bool:
        return self.curvature_defect.is_zero()

    @property
    def normal(self) -> bool:
        return self.normality_defect.is_zero()

    @property
    def ok(self) -> bool:
        return self.flat and self.normal


def _as_metric(h) -> HermitianGerm:
    return h if isinstance(h, HermitianGerm) else HermitianGerm(h)


def adjoint_higgs(phi: Matrix, h) -> Matrix:
    """``h^{-1} phi^dagger h``, the adjoint of ``phi`` with respect to ``h``."""
    h = _as_metric(h)
    p = lp_matrix(phi)
    if p.shape != h.h.shape:
        raise ValueError("Higgs field and metric have different sizes")
    return h.inverse() * p.conj_transpose() * h.h


def normality_defect(phi: Matrix, h) -> Matrix:
    """``phi phi^* - phi^* phi``."""
    p = lp_matrix(phi)
    adj = adjoint_higgs(p, h)
    return p * adj - adj * p


def chern_curvature(h) -> Matrix:
    """``dbar(h^{-1} d h)``, entrywise in the log-polar ring."""
    h = _as_metric(h)
    conn = h.inverse() * h.h.map(lambda x: x.d())
    return conn.map(lambda x: x.dbar())


def decoupled_report(phi: Matrix, h) -> DecoupledReport:
    return DecoupledReport(chern_curvature(h), normality_defect(phi, h))


# ---------------------------------------------------------------------------
# rank 2 models
# ---------------------------------------------------------------------------

def sl2_higgs_model(m: int, l: int) -> Matrix:
    """``[[0, z^l], [z^(m-l), 0]]``."""
    return Matrix([[lp(0), LogPolarExpr.monomial(l)], [LogPolarExpr.monomial(m - l), lp(0)]])


def build_hdc_sl2(m: int, l: int, parity: Optional[str] = None, g1=1, g2=0) -> HermitianGerm:
    """
    Decoupled metric at a zero of order ``m`` with Higgs divisor
    coefficient ``l`` and ``n = m - 2l``.

    Odd ``n``::

        [[g1 |z|^(n/2),                     g2 z^((1-n)/2) |z|^(n/2)],
         [conj(g2) zbar^((1-n)/2) |z|^(n/2), g1 |z|^(-n/2)]]

    subject to ``g1^2 - |g2|^2 |z| = 1``; even ``n`` uses ``z^(-n/2)`` and
    ``g1^2 - |g2|^2 = 1``.
    """
    if not 0 <= 2 * l <= m:
        raise ValueError(f"l = {l} outside [0, {m // 2}]")
    n = m - 2 * l
    actual = ODD if n % 2 else EVEN
    if parity is not None and parity.lower() != actual:
        raise ValueError(f"parity {parity!r} does not match n = {n}")
    g1, g2 = lp(g1), lp(g2)
    if g1.conj() != g1:
        raise ValueError("not a valid decoupled metric candidate: g1 must be real")
    shift = (1 - n) // 2 if actual == ODD else -(n // 2)
    cross = g2 * g2.conj() * (modulus(1) if actual == ODD else lp(1))
    if g1 * g1 - cross != lp(1):
        raise ValueError("not a valid decoupled metric candidate")
    half = modulus(Fraction(n, 2))
    off = g2 * LogPolarExpr.monomial(shift, 0) * half
    h = Matrix([[g1 * half, off], [off.conj(), g1 * modulus(Fraction(-n, 2))]])
    return HermitianGerm(h)


def _sigma_parts(f: LogPolarExpr) -> tuple[LogPolarExpr, LogPolarExpr]:
    s = f.rotate(GaussRational(-1))
    return f + s, f - s


def hecke_push_metric(f, alpha, l: int = 0) -> HermitianGerm:
    """
    Metric on the Hecke transform of ``L + sigma^* L`` induced by
    ``h_L = f |w|^(2 alpha)``, written in ``z = w^2``::

        [[(f + s f) |w|^(2a),              (f - s f) (|w|/w)^(2a)],
         [(f - s f) (|w|/wbar)^(2a),       (f + s f) |w|^(-2a)]]

    with ``s f`` the pullback under ``w -> -w``. ``l`` is the Higgs divisor
    coefficient of the zero and is kept for bookkeeping only.
    """
    if l < 0:
        raise ValueError("Higgs divisor coefficient must be nonnegative")
    alpha = Fraction(alpha)
    if (2 * alpha).denominator != 1:
        raise ValueError("weight must be a half-integer")
    t = int(2 * alpha)
    f = lp(f)
    plus, minus = _sigma_parts(f)
    up = modulus(2 * alpha)
    down = modulus(-2 * alpha)
    rows = [[plus * up, minus * up * LogPolarExpr.monomial(-t, 0)],
            [minus * up * LogPolarExpr.monomial(0, -t), plus * down]]
    out = []
    for r in rows:
        row = []
        for x in r:
            if not x.descends(2):
                raise ValueError("not σ-equivariant")
            row.append(x.descend(2))
        out.append(row)
    return HermitianGerm(Matrix(out))


# ---------------------------------------------------------------------------
# rank 3 model
# ---------------------------------------------------------------------------

def build_hdc_so3(m: int, l: int) -> HermitianGerm:
    """
    ``diag(|z|^(m-2l), 1, |z|^(2l-m))``, the metric induced on the adjoint
    bundle by ``diag(|z|^(n/2), |z|^(-n/2))`` with ``n = m - 2l``.

    Normality of the field from ``so3_example_higgs`` forces the outer
    exponent to be ``m - 2l``; the shifted exponent ``m - l`` only works
    for ``l = 0`` (see ``so3_diagonal_metric``).
    """
    if not 0 <= 2 * l <= m:
        raise ValueError(f"l = {l} outside [0, {m // 2}]")
    return so3_diagonal_metric(m - 2 * l)


def so3_diagonal_metric(e) -> HermitianGerm:
    """``diag(|z|^e, 1, |z|^(-e))``."""
    return HermitianGerm(Matrix.diag([modulus(e), lp(1), modulus(-e)], lp(0)))


@dataclass(frozen=True)
class ScaledHiggs:
    """A Higgs field ``sqrt(scale_sq) * phi`` with ``phi`` over the Gaussian rationals."""

    phi: Matrix
    scale_sq: Fraction


def so3_example_higgs(m: int, l: int) -> ScaledHiggs:
    """
    Orthogonal Higgs field for the antidiagonal form ``antidiag(1, 1, 1)``:
    ``sqrt(2) * i * [[0, a, 0], [-b, 0, -a], [0, b, 0]]`` with
    ``a = z^l`` and ``b = z^(m-l)``.
    """
    if not 0 <= 2 * l <= m:
        raise ValueError(f"l = {l} outside [0, {m // 2}]")
    a, b, zero = LogPolarExpr.monomial(l, 0, 0, I), LogPolarExpr.monomial(m - l, 0, 0, I), lp(0)
    phi = Matrix([[zero, a, zero], [-b, zero, -a], [zero, b, zero]])
    return ScaledHiggs(phi, Fraction(2))


def scaled_decoupled_report(higgs: ScaledHiggs, h) -> DecoupledReport:
    """
    The normality defect is quadratic in the Higgs field and conjugate
    linear in its scale, so for a real scale ``c`` it equals ``c^2`` times
    the defect of the unscaled field.
    """
    rep = decoupled_report(higgs.phi, h)
    return DecoupledReport(rep.curvature_defect, rep.normality_defect.scale(higgs.scale_sq))


# ---------------------------------------------------------------------------
# pushforward along z = w^2
# ---------------------------------------------------------------------------

def pushforward_metric(h, k: int, frames: PushforwardResult) -> HermitianGerm:
    """
    Metric ``h |dp|^{-1}`` on the covering, with ``p(w) = w^k``, summed over
    the sheets on the frame ``w^j s_i`` of the pushforward and descended to
    ``z``. For ``k = 2`` the factor is ``|2w|^{-1}``.
    """
    if k != 2 or frames.k != 2:
        raise ValueError("pushforward metric is implemented for double covers")
    h = _as_metric(h)
    if h.rank != 2:
        raise ValueError("pushforward metric needs a rank-2 metric")
    xi = _ROOTS[k]
    jac = modulus(1 - k) * Fraction(1, k)
    hp = h.h.map(lambda x: x * jac)
    size = 2 * k
    out = [[None] * size for _ in range(size)]
    for a, (i, j) in enumerate(frames.frame_labels):
        for b, (i2, j2) in enumerate(frames.frame_labels):
            acc = lp(0)
            base = LogPolarExpr.monomial(j2, j) * hp[i, i2]
            for t in range(k):
                acc = acc + base.rotate(xi ** t)
            if not acc.descends(k):
                raise ValueError("pushforward metric does not descend")
            out[a][b] = acc.descend(k)
    return HermitianGerm(Matrix(out))


def nilpotent_control() -> tuple[Matrix, HermitianGerm]:
    """A nilpotent Higgs field with the flat metric: normality fails."""
    phi = Matrix([[lp(0), lp(1)], [lp(0), lp(0)]])
    return phi, HermitianGerm(Matrix.identity(2, lp(1), lp(0)))
