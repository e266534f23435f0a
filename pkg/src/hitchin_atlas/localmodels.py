"""
Local models of Higgs fields on a disc.

Germs are matrices of truncated Laurent series together with an optional
bilinear form. The Higgs matrix is the coefficient of the Higgs field with
respect to a fixed local generator of the twisting bundle, so pulling back
or pushing forward along ``z = w^k`` acts on it as a multiplication
operator.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import (
    INF,
    GaussRational,
    I,
    LaurentSeries,
    Matrix,
    Poly,
    poly_resultant,
)

SYMPLECTIC = "symplectic"
SYMMETRIC = "symmetric"

_ONE = GaussRational(1)


def _series(x) -> LaurentSeries:
    if isinstance(x, LaurentSeries):
        return x
    return LaurentSeries.const(x)


def zmono(e: int, c=1, truncation_order: float = INF) -> LaurentSeries:
    return LaurentSeries.monomial(c, e, truncation_order)


def series_matrix(rows) -> Matrix:
    return Matrix([[_series(x) for x in r] for r in rows])


def _min_prec(m: Matrix) -> float:
    return min(x.truncation_order for r in m.rows for x in r)


def _min_val(xs) -> float:
    return min(x.valuation for x in xs)


@dataclass(frozen=True)
class LocalHiggsGerm:
    phi: Matrix
    form: Optional[Matrix] = None
    form_kind: Optional[str] = None
    coordinate_label: str = "z"

    def __post_init__(self):
        object.__setattr__(self, "phi", self.phi.map(_series))
        if self.phi.nrows != self.phi.ncols:
            raise ValueError("Higgs matrix must be square")
        if self.form is not None:
            object.__setattr__(self, "form", self.form.map(_series))
            if self.form.shape != self.phi.shape:
                raise ValueError("form and Higgs matrix have different sizes")
            if self.form_kind not in (SYMPLECTIC, SYMMETRIC):
                raise ValueError("a form needs form_kind 'symplectic' or 'symmetric'")
        elif self.form_kind is not None:
            raise ValueError("form_kind given without a form")

    @property
    def rank(self) -> int:
        return self.phi.nrows

    @property
    def truncation_order(self) -> float:
        p = _min_prec(self.phi)
        if self.form is not None:
            p = min(p, _min_prec(self.form))
        return p

    def charpoly(self, var: str = "lam") -> Poly:
        return self.phi.charpoly(var)

    def form_det(self) -> LaurentSeries:
        if self.form is None:
            raise ValueError("germ carries no form")
        return self.form.det()

    def form_symmetry_ok(self) -> bool:
        if self.form is None:
            return True
        t = self.form.T
        return t == self.form if self.form_kind == SYMMETRIC else t == -self.form

    def antisymmetry_defect(self) -> Matrix:
        """``phi^T form + form phi``; zero iff the Higgs field is skew for the form."""
        if self.form is None:
            raise ValueError("germ carries no form")
        return self.phi.T * self.form + self.form * self.phi

    def is_antisymmetric(self) -> bool:
        return self.antisymmetry_defect().is_zero()

    def truncate(self, n: float) -> "LocalHiggsGerm":
        form = None if self.form is None else self.form.map(lambda x: x.truncate(n))
        return LocalHiggsGerm(self.phi.map(lambda x: x.truncate(n)), form, self.form_kind,
                              self.coordinate_label)


def _J() -> Matrix:
    return series_matrix([[0, 1], [-1, 0]])


def standard_symplectic(rank: int) -> Matrix:
    return Matrix.block_diag(*[_J() for _ in range(rank // 2)])


def charpoly_equal(a: Poly, b: Poly) -> tuple[bool, float]:
    """Coefficientwise comparison of polynomials with series coefficients."""
    if a.degree != b.degree:
        return False, INF
    ok, bound = True, INF
    for x, y in zip(a.coeffs, b.coeffs):
        same, bd = _series(x).compare(_series(y))
        ok, bound = ok and same, min(bound, bd)
    return ok, bound


def germ_equivalent(a: LocalHiggsGerm, b: LocalHiggsGerm) -> tuple[bool, float]:
    """
    Frame-change equivalence test by invariants: rank, characteristic
    polynomial up to the common truncation, and congruence class of the
    form (symmetry type and determinant valuation).
    """
    if a.rank != b.rank or a.form_kind != b.form_kind:
        return False, INF
    ok, bound = charpoly_equal(a.charpoly(), b.charpoly())
    if a.form is not None:
        da, db = a.form_det(), b.form_det()
        ok = ok and not da.is_zero() and not db.is_zero() and da.valuation == db.valuation
    return ok, bound


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------

def _check_split(m: int, l: int) -> None:
    if m < 0:
        raise ValueError(f"vanishing order must be nonnegative, got {m}")
    if not 0 <= 2 * l <= m:
        raise ValueError(f"l = {l} outside [0, {m // 2}]")


def sp_local_normal_form(m: int, l: int, regular_eigenvalues: Sequence[LaurentSeries] = (),
                         truncation_order: float = INF) -> LocalHiggsGerm:
    """
    Symplectic normal form near a zero of order ``m`` with Higgs divisor
    coefficient ``l``: the nilpotent-type block ``[[0, z^l], [z^(m-l), 0]]``
    followed by ``diag(lam, -lam)`` for each given regular eigenvalue.

    INPUT: ``regular_eigenvalues`` lists one representative ``lam`` of each
    pair ``+-lam``; each must have valuation 0.
    OUTPUT: germ with the standard symplectic form ``blockdiag(J, ..., J)``.
    """
    _check_split(m, l)
    blocks = [series_matrix([[0, zmono(l, 1, truncation_order)],
                             [zmono(m - l, 1, truncation_order), 0]])]
    for lam in regular_eigenvalues:
        lam = _series(lam)
        if lam.is_zero() or lam.valuation != 0:
            raise ValueError("regular eigenvalues must have valuation 0")
        blocks.append(Matrix.diag([lam, -lam], LaurentSeries.zero()))
    phi = Matrix.block_diag(*blocks, zero=LaurentSeries.zero())
    return LocalHiggsGerm(phi, standard_symplectic(phi.nrows), SYMPLECTIC)


def so3_local_normal_form(m: int, l: int, truncation_order: float = INF) -> LocalHiggsGerm:
    """
    Orthogonal normal form with identity Gram matrix and characteristic
    polynomial ``lam (lam^2 - 4 z^m)``.
    """
    _check_split(m, l)
    u = zmono(m - 2 * l, 1, truncation_order)
    s = zmono(l, 1, truncation_order)
    a = s * (1 - u)
    b = s * (u + 1) * I
    zero = LaurentSeries.zero()
    phi = Matrix([[zero, a, zero], [-a, zero, b], [zero, -b, zero]])
    return LocalHiggsGerm(phi, Matrix.identity(3, LaurentSeries.const(1), zero), SYMMETRIC)


def _adjoint_matrix(p, q, r) -> Matrix:
    # ad of [[p, q], [r, -p]] in the basis (2E, H, F)
    zero = LaurentSeries.zero()
    return Matrix([[p * 2, -q, zero], [r * -2, zero, q], [zero, r * 2, p * -2]])


def killing_gram() -> Matrix:
    """Gram matrix of ``tr(XY)/2`` in the basis ``(2E, H, F)``."""
    return series_matrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def so3_from_sl2_adjoint(psi: LocalHiggsGerm) -> LocalHiggsGerm:
    """
    Adjoint action of a traceless rank-2 germ on ``sl(2)``.

    The basis is ``(2E, H, F)``, in which the invariant form ``tr(XY)/2``
    has Gram matrix ``antidiag(1, 1, 1)``. The characteristic polynomial is
    ``lam (lam^2 + 4 det(psi))``.
    """
    if psi.rank != 2:
        raise ValueError("adjoint construction needs a rank-2 germ")
    if not psi.phi.trace().is_zero():
        raise ValueError("adjoint construction needs a traceless germ")
    p, q, r = psi.phi[0, 0], psi.phi[0, 1], psi.phi[1, 0]
    return LocalHiggsGerm(_adjoint_matrix(p, q, r), killing_gram(), SYMMETRIC,
                          psi.coordinate_label)


def orthonormal_frame_change() -> Matrix:
    """
    Columns give the frame ``(E + F, -H, i(E - F))`` in the basis
    ``(2E, H, F)``; it carries ``antidiag(1, 1, 1)`` to the identity.
    """
    h = GaussRational(1, 0) / 2
    return series_matrix([[h, 0, I / 2], [0, -1, 0], [1, 0, -I]])


def change_frame(e: LocalHiggsGerm, P: Matrix, P_inv: Optional[Matrix] = None) -> LocalHiggsGerm:
    """Express ``e`` in the frame given by the columns of ``P``."""
    if P_inv is None:
        P_inv = invert_series_matrix(P)
    phi = P_inv * e.phi * P
    form = None if e.form is None else P.T * e.form * P
    return LocalHiggsGerm(phi, form, e.form_kind, e.coordinate_label)


def invert_series_matrix(P: Matrix, relative_precision: float | None = None) -> Matrix:
    det = P.det()
    if det.is_zero():
        raise ArithmeticError("frame change is singular to truncation")
    inv = det.inverse() if det.is_monomial() else det.inverse(relative_precision)
    return P.adjugate().map(lambda x: x * inv)


def so3_orthonormalize(adj: LocalHiggsGerm) -> LocalHiggsGerm:
    return change_frame(adj, orthonormal_frame_change())


# ---------------------------------------------------------------------------
# pushforward along z = w^k
# ---------------------------------------------------------------------------

_ROOTS = {1: _ONE, 2: GaussRational(-1), 4: I}


@dataclass(frozen=True)
class PushforwardResult:
    germ: LocalHiggsGerm
    k: int
    frames_used: Optional[tuple[tuple[GaussRational, ...], ...]]
    transition: Matrix
    transition_coordinate: str = "w"
    frame_labels: tuple[tuple[int, int], ...] = field(default_factory=tuple)


def _single_residue_class(f: LaurentSeries, k: int) -> bool:
    return len({e % k for e in f.terms()}) <= 1


def _trace_down(f: LaurentSeries, k: int) -> LaurentSeries:
    """``Tr_{w/z}`` of ``f`` divided by ``k``: keep exponents divisible by ``k``."""
    prec = f.truncation_order
    out_prec = INF if prec == INF else math.ceil(prec / k)
    return LaurentSeries({e // k: c for e, c in f.terms().items() if e % k == 0}, out_prec)


def pushforward_germ(e: LocalHiggsGerm, k: int, twist_halfR: bool = True) -> PushforwardResult:
    """
    Push a rank-2 germ in the covering coordinate ``w`` down to ``z = w^k``.

    The frame is ``w^j s_i`` for ``0 <= j < k`` ordered by ``2j + i``. The
    Higgs field acts by multiplication; the form is the relative trace of
    ``omega`` twisted by the square root of the ramification divisor
    (``twist_halfR``) or untwisted, giving a constant antidiagonal form in
    the first case.

    OUTPUT: the rank-``2k`` germ, the symmetrized frame coefficients (for
    ``k`` in ``{1, 2, 4}``) and the transition ``diag(1, 1, w, w, ...)``.
    """
    if e.rank != 2:
        raise ValueError("pushforward is implemented for rank-2 germs")
    if k < 1:
        raise ValueError("covering degree must be positive")
    entries = list(itertools.chain.from_iterable(e.phi.rows))
    if e.form is not None:
        entries += list(itertools.chain.from_iterable(e.form.rows))
    if k not in _ROOTS and not all(_single_residue_class(f, k) for f in entries):
        raise ValueError("root of unity not in coefficient field")

    size = 2 * k
    idx = lambda i, j: 2 * j + i  # noqa: E731
    rows: list[list[dict[int, GaussRational]]] = [[{} for _ in range(size)] for _ in range(size)]
    precs = [[INF] * size for _ in range(size)]
    for i in range(2):
        for j in range(k):
            col = idx(i, j)
            for a in range(2):
                f = e.phi[a, i]
                n_w = f.truncation_order
                for r in range(k):
                    if n_w != INF:
                        precs[idx(a, r)][col] = math.ceil((n_w + j - r) / k)
                for ex, c in f.terms().items():
                    q, r = divmod(ex + j, k)
                    d = rows[idx(a, r)][col]
                    d[q] = d[q] + c if q in d else c
    phi = Matrix([[LaurentSeries(rows[x][y], precs[x][y]) for y in range(size)] for x in range(size)])

    form = None
    if e.form is not None:
        shift = k - 1 if twist_halfR else 0
        out: list[list] = [[None] * size for _ in range(size)]
        for i, j, i2, j2 in itertools.product(range(2), range(k), range(2), range(k)):
            f = e.form[i, i2].shift(j + j2 - shift)
            tr = _trace_down(f, k)
            out[idx(i, j)][idx(i2, j2)] = tr if twist_halfR else tr * k
        form = Matrix(out)

    if k in _ROOTS:
        xi = _ROOTS[k]
        frames = tuple(tuple((xi ** (j * t)) / k for t in range(k)) for j in range(k))
    else:
        frames = None
    trans = Matrix.diag([zmono(j) for j in range(k) for _ in range(2)], LaurentSeries.zero())
    labels = tuple((i, j) for j in range(k) for i in range(2))
    germ = LocalHiggsGerm(phi, form, e.form_kind if form is not None else None, "z")
    return PushforwardResult(germ, k, frames, trans, "w", labels)


def sheet_norm(p: Poly, k: int) -> Poly:
    """
    ``prod_t p(lam; xi^t w)`` rewritten in ``z = w^k`` for a polynomial in
    ``lam`` with series coefficients in ``w``; ``k`` in ``{1, 2, 4}``.
    """
    if k not in _ROOTS:
        raise ValueError("root of unity not in coefficient field")
    xi = _ROOTS[k]
    acc = None
    for t in range(k):
        rot = p.map_coefficients(lambda c, t=t: _series(c).rotate(xi ** t))
        acc = rot if acc is None else acc * rot
    out = []
    for c in acc.coeffs:
        c = _series(c)
        if any(ex % k for ex in c.terms()):
            raise ArithmeticError("sheet product does not descend")
        prec = c.truncation_order
        out.append(LaurentSeries({ex // k: v for ex, v in c.terms().items()},
                                 INF if prec == INF else math.ceil(prec / k)))
    return Poly(out, p.var)


def resultant_norm(p: Poly, k: int) -> Poly:
    """
    Norm of ``p(lam; w)`` along ``z = w^k`` as ``Res_w(w^k - z, p)``.

    ``p`` must have exact coefficients without poles. Works for every
    ``k`` because no root of unity appears.
    """
    lam = p.var
    by_power: dict[int, list] = {}
    for i, c in enumerate(p.coeffs):
        c = _series(c)
        if not c.is_exact() or (not c.is_zero() and c.valuation < 0):
            raise ValueError("resultant norm needs exact coefficients without poles")
        for ex, v in c.terms().items():
            by_power.setdefault(ex, [LaurentSeries.zero()] * len(p.coeffs))[i] = LaurentSeries.const(v)
    top = max(by_power) if by_power else 0
    zero_lam = Poly([], lam)
    b = Poly([Poly(by_power[e], lam) if e in by_power else zero_lam for e in range(top + 1)], "w")
    a_coeffs = [Poly([-zmono(1)], lam)] + [zero_lam] * (k - 1) + [Poly([LaurentSeries.const(1)], lam)]
    a = Poly(a_coeffs, "w")
    res = poly_resultant(a, b)
    return res if isinstance(res, Poly) else Poly([res], lam)


def pullback_germ(e: LocalHiggsGerm, k: int, coordinate_label: str = "w") -> LocalHiggsGerm:
    """Substitute ``z = w^k`` in every entry."""
    phi = e.phi.map(lambda f: f.substitute_power(k))
    form = None if e.form is None else e.form.map(lambda f: f.substitute_power(k))
    return LocalHiggsGerm(phi, form, e.form_kind, coordinate_label)


# ---------------------------------------------------------------------------
# eigen-germ pullback
# ---------------------------------------------------------------------------

def _matrix_poly(p: Poly, A: Matrix) -> Matrix:
    n = A.nrows
    zero = LaurentSeries.zero()
    acc = None
    for c in reversed(p.coeffs):
        term = Matrix.diag([_series(c)] * n, zero)
        acc = term if acc is None else acc * A + term
    return acc


def _best_minor(V: Matrix, cols: Sequence[int] | None = None):
    best = None
    col_sets = [tuple(cols)] if cols is not None else itertools.combinations(range(V.ncols), 2)
    for cs in col_sets:
        for rs in itertools.combinations(range(V.nrows), 2):
            d = V.submatrix(rs, cs).det()
            if d.is_zero():
                continue
            if best is None or d.valuation < best[0].valuation:
                best = (d, rs, cs)
    return best


def saturated_kernel_frame(V: Matrix, truncation_order: float, slack: int = 0):
    """
    Saturated rank-2 frame of the column span of ``V``: pick the 2x2 minor
    of least valuation and normalize it to the identity. The inverse of
    that minor is taken to enough precision that the frame is exact below
    ``truncation_order``.
    """
    best = _best_minor(V)
    if best is None:
        raise ArithmeticError("eigen splitting not resolved")
    _, rs, cs = best
    W = V.submatrix(range(V.nrows), cs)
    d, rs, _ = _best_minor(W, (0, 1))
    M = W.submatrix(rs, (0, 1))
    inv = d.inverse() if d.is_monomial() else d.inverse(truncation_order + d.valuation + slack)
    M_inv = M.adjugate().map(lambda x: x * inv)
    return W * M_inv, rs


def pullback_eigengerm(e: LocalHiggsGerm, b2: LaurentSeries, k: int = 1,
                       form_twist: int | None = None,
                       truncation_order: int = 16) -> LocalHiggsGerm:
    """
    Rank-2 eigen-germ of ``phi^2 + b2`` inside ``e``.

    With ``k > 1`` the germ is first pulled back along ``z = w^k``. The
    characteristic polynomial must split as ``(lam^2 + b2) * Q`` with ``Q``
    coprime to the first factor; the eigen-germ is the saturation of the
    column space of ``Q(phi)``. The restricted form is divided by
    ``w^form_twist`` (default ``k - 1``, matching the half-ramification
    twist of the pushforward), so its determinant valuation matches the
    original rank-2 germ.
    """
    if k > 1:
        e = pullback_germ(e, k)
    b2 = _series(b2)
    P = e.charpoly()
    fac = Poly([b2, LaurentSeries.zero(), LaurentSeries.const(1)], P.var)
    Q, R = P.divmod(fac)
    if not all(_series(c).is_zero() for c in R.coeffs):
        raise ArithmeticError("eigen splitting not resolved: lam^2 + b2 does not divide the characteristic polynomial")
    res = _series(poly_resultant(fac, Q)) if Q.degree > 0 else LaurentSeries.const(1)
    if res.is_zero():
        raise ArithmeticError("eigen splitting not resolved: factors are not coprime to truncation")
    V = _matrix_poly(Q, e.phi)
    twist = (k - 1) if form_twist is None else form_twist
    U, rs = saturated_kernel_frame(V, truncation_order, twist + 1)
    A = (e.phi * U).submatrix(rs, (0, 1))
    form = None
    if e.form is not None:
        form = (U.T * e.form * U).map(lambda f: f.shift(-twist))
    return LocalHiggsGerm(A, form, e.form_kind, e.coordinate_label)


# ---------------------------------------------------------------------------
# orthogonal kernel data and reconstruction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelData:
    kernel_order: int
    form_on_kernel: LaurentSeries
    vector: tuple[LaurentSeries, ...]

    def __iter__(self):
        yield self.kernel_order
        yield self.form_on_kernel


def so_kernel_data(e: LocalHiggsGerm) -> KernelData:
    """
    Kernel line of a rank-3 orthogonal germ.

    The kernel is read off the adjugate column of least valuation; that
    valuation is ``2 l`` and the normalized vector spans the saturated
    kernel. The form restricted to it has valuation ``m - 2 l``.
    """
    if e.rank != 3 or e.form_kind != SYMMETRIC:
        raise ValueError("kernel data needs a rank-3 orthogonal germ")
    adj = e.phi.adjugate()
    cols = [adj.column(j) for j in range(3)]
    nonzero = [c for c in cols if not all(x.is_zero() for x in c)]
    if not nonzero:
        raise ArithmeticError("kernel not one-dimensional at the working truncation")
    col = min(nonzero, key=lambda c: _min_val(c))
    val = _min_val(col)
    if val % 2:
        raise ArithmeticError("kernel adjugate has odd valuation")
    v = tuple(x.shift(-val) for x in col)
    gv = e.form * Matrix([[x] for x in v])
    kappa = sum((v[i] * gv[i, 0] for i in range(3)), LaurentSeries.zero())
    return KernelData(val // 2, kappa, v)


@dataclass(frozen=True)
class KernelSplit:
    kernel_form: LaurentSeries
    germ: LocalHiggsGerm
    frame: Matrix


def _bilinear(G: Matrix, x: Sequence, y: Sequence) -> LaurentSeries:
    acc = LaurentSeries.zero()
    for i in range(len(x)):
        for j in range(len(y)):
            acc = acc + x[i] * G[i, j] * y[j]
    return acc


def working_precision(m: int, l: int) -> int:
    """
    Relative precision for series inverses in the orthogonal split and
    reconstruction; each of the three steps loses up to ``m - 2l`` orders,
    so this keeps the output exact to at least ``m + 4``.
    """
    return m + 4 + 3 * (m - 2 * l) + 2


def so_kernel_split(e: LocalHiggsGerm, relative_precision: float | None = None) -> KernelSplit:
    """
    Frame ``(v, e1, e2)`` with ``v`` spanning the kernel, ``e1, e2`` spanning
    its orthogonal complement and the form equal to ``diag(kappa, kappa, c2)``
    with ``kappa`` the form on the kernel and ``c2`` a unit.
    """
    kd = so_kernel_data(e)
    v, kappa, G = list(kd.vector), kd.form_on_kernel, e.form
    if relative_precision is None:
        d = kappa.order()
        relative_precision = working_precision(d + 2 * kd.kernel_order, kd.kernel_order)
    cov = [sum((G[i, j] * v[j] for j in range(3)), LaurentSeries.zero()) for i in range(3)]
    pivot = next((i for i in range(3) if not cov[i].is_zero() and cov[i].valuation == 0), None)
    if pivot is None:
        raise ArithmeticError("kernel covector is not primitive")
    others = [i for i in range(3) if i != pivot]
    inv_p = cov[pivot].inverse(relative_precision)
    perp = []
    for o in others:
        x = [LaurentSeries.zero()] * 3
        x[o] = LaurentSeries.const(1)
        x[pivot] = -cov[o] * inv_p
        perp.append(x)
    norms = [_bilinear(G, x, x) for x in perp]
    unit = next((i for i in range(2) if not norms[i].is_zero() and norms[i].valuation == 0), None)
    if unit is None:
        x = [a + b for a, b in zip(perp[0], perp[1])]
        if _bilinear(G, x, x).valuation != 0:
            raise ArithmeticError("orthogonal complement has no unit vector")
        perp = [x, perp[1]]
        unit = 0
    e2 = perp[unit]
    other = perp[1 - unit]
    c2 = _bilinear(G, e2, e2)
    t = _bilinear(G, other, e2) * c2.inverse(relative_precision)
    e1 = [a - t * b for a, b in zip(other, e2)]
    n1 = _bilinear(G, e1, e1)
    scale = (kappa * n1.inverse(relative_precision)).sqrt()
    e1 = [x * scale for x in e1]
    frame = Matrix([[v[i], e1[i], e2[i]] for i in range(3)])
    phi = _solve_frame(frame, e.phi * frame, relative_precision)
    form = frame.T * G * frame
    return KernelSplit(kappa, LocalHiggsGerm(phi, form, SYMMETRIC, e.coordinate_label), frame)


def _solve_frame(frame: Matrix, image: Matrix, relative_precision: float) -> Matrix:
    return invert_series_matrix(frame, relative_precision) * image


@dataclass(frozen=True)
class HeckeResult:
    germ: LocalHiggsGerm
    torsion_length: int
    transition: Matrix


def so_hecke_reconstruct(kernel_form: LaurentSeries, v2: LocalHiggsGerm, m: int, l: int,
                         relative_precision: float | None = None) -> HeckeResult:
    """
    Undo the degeneration of the form in a frame ``(e0, e1, e2)`` where it
    reads ``diag(kappa, kappa, c2)`` with ``val(kappa) = m - 2l``.

    The isotropic vectors ``f+- = e0 +- i e1`` pair to ``2 kappa``; dividing
    the one that keeps the Higgs field holomorphic by ``z^(m-2l)`` gives a
    unimodular form ``diag(c, c, c2)`` in the frame
    ``((f+ + f-)/2, (f+ - f-)/(2i), e2)``.
    """
    _check_split(m, l)
    d = m - 2 * l
    if relative_precision is None:
        relative_precision = working_precision(m, l)
    kappa = _series(kernel_form)
    if v2.rank != 3 or v2.form is None or v2.form_kind != SYMMETRIC:
        raise ValueError("reconstruction needs a rank-3 orthogonal germ in the split frame")
    if kappa.is_zero() or kappa.valuation != d:
        raise ValueError(f"kernel form valuation {kappa.valuation} does not match m - 2l = {d}")
    half = GaussRational(1, 0) / 2
    zero = LaurentSeries.zero()
    one = LaurentSeries.const(1)
    for sign in (1, -1):
        # columns: new frame in terms of (e0, e1, e2)
        fp = [one, LaurentSeries.const(I * sign), zero]
        fm = [one, LaurentSeries.const(-I * sign), zero]
        fp = [x.shift(-d) for x in fp]
        e0 = [(a + b) * half for a, b in zip(fp, fm)]
        e1 = [(a - b) * (half / (I * sign)) for a, b in zip(fp, fm)]
        T = Matrix([[e0[i], e1[i], [zero, zero, one][i]] for i in range(3)])
        T_inv = invert_series_matrix(T, relative_precision)
        phi = T_inv * v2.phi * T
        if any(x.valuation < 0 for r in phi.rows for x in r if not x.is_zero()):
            continue
        form = T.T * v2.form * T
        germ = LocalHiggsGerm(phi, form, SYMMETRIC, v2.coordinate_label)
        return HeckeResult(germ, d, T)
    raise ArithmeticError("no symmetric modification")
