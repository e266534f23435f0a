from fractions import Fraction

import pytest

from hitchin_atlas.algebra import I, GaussRational, LogPolarExpr, Matrix
from hitchin_atlas.localmodels import SYMPLECTIC, LocalHiggsGerm, pushforward_germ, series_matrix, standard_symplectic, zmono
from hitchin_atlas.metrics import (
    HermitianGerm,
    adjoint_higgs,
    build_hdc_sl2,
    build_hdc_so3,
    chern_curvature,
    decoupled_report,
    hecke_push_metric,
    lp,
    modulus,
    nilpotent_control,
    normality_defect,
    pushforward_metric,
    scaled_decoupled_report,
    sl2_higgs_model,
    so3_diagonal_metric,
    so3_example_higgs,
)


def grid(m_max):
    return [(m, l) for m in range(m_max + 1) for l in range(m // 2 + 1)]


def test_modulus_is_hermitian_and_positive_power():
    assert modulus(1) * modulus(1) == LogPolarExpr.monomial(1, 1)
    assert modulus(Fraction(1, 2)).conj() == modulus(Fraction(1, 2))


def test_hermitian_check():
    with pytest.raises(ValueError):
        HermitianGerm(Matrix([[lp(1), lp(I)], [lp(I), lp(1)]]))
    with pytest.raises(ArithmeticError):
        HermitianGerm(Matrix([[lp(1) + modulus(1)]]))


@pytest.mark.parametrize("m,l", grid(8))
def test_hdc_sl2_is_flat_and_normal(m, l):
    rep = decoupled_report(sl2_higgs_model(m, l), build_hdc_sl2(m, l))
    assert rep.flat and rep.normal


def test_hdc_sl2_det_is_one():
    for m, l in grid(6):
        assert build_hdc_sl2(m, l).det() == lp(1)


def test_hdc_sl2_with_offdiagonal_even():
    # even n: g1^2 - |g2|^2 = 1 with g1 = 5/4, g2 = 3/4
    h = build_hdc_sl2(4, 1, g1=Fraction(5, 4), g2=Fraction(3, 4))
    assert chern_curvature(h).is_zero()
    assert h.det() == lp(1)


def test_hdc_sl2_constraint_and_parity():
    with pytest.raises(ValueError, match="not a valid"):
        build_hdc_sl2(3, 1, g1=2, g2=0)
    with pytest.raises(ValueError):
        build_hdc_sl2(3, 1, parity="even")
    with pytest.raises(ValueError):
        build_hdc_sl2(3, 1, g1=I)
    with pytest.raises(ValueError):
        build_hdc_sl2(3, 2)


@pytest.mark.parametrize("m,l", grid(8))
def test_hdc_so3_is_flat_and_normal(m, l):
    rep = scaled_decoupled_report(so3_example_higgs(m, l), build_hdc_so3(m, l))
    assert rep.flat and rep.normal


@pytest.mark.parametrize("m,l", [(2, 1), (3, 1), (4, 1), (4, 2), (6, 2)])
def test_so3_outer_exponent_m_minus_l_is_not_normal(m, l):
    # diag(|z|^(m-l), 1, |z|^(l-m)) is flat but the example field is not normal for it
    rep = scaled_decoupled_report(so3_example_higgs(m, l), so3_diagonal_metric(m - l))
    assert rep.flat
    assert not rep.normal


@pytest.mark.parametrize("m", range(0, 9))
def test_so3_exponents_agree_when_l_is_zero(m):
    assert build_hdc_so3(m, 0).h == so3_diagonal_metric(m).h


def test_so3_metric_is_adjoint_of_sl2_metric():
    # adjoint metric of diag(|z|^(n/2), |z|^(-n/2)) on (E, H, F) is diag(|z|^n, 1, |z|^-n)
    for m, l in grid(6):
        n = m - 2 * l
        assert build_hdc_so3(m, l).h == Matrix.diag([modulus(n), lp(1), modulus(-n)], lp(0))


def test_nilpotent_negative_control():
    phi, h = nilpotent_control()
    d = normality_defect(phi, h)
    assert not d.is_zero()
    assert d == Matrix([[lp(1), lp(0)], [lp(0), lp(-1)]])


def test_adjoint_higgs_flat_metric():
    phi = sl2_higgs_model(2, 1)
    h = HermitianGerm(Matrix.identity(2, lp(1), lp(0)))
    assert adjoint_higgs(phi, h) == phi.conj_transpose()


def cover_germ(m, l):
    return LocalHiggsGerm(series_matrix([[0, zmono(l)], [zmono(m - l), 0]]), standard_symplectic(2),
                          SYMPLECTIC, "w")


@pytest.mark.parametrize("m,l", [(0, 0), (1, 0), (2, 1), (3, 1), (4, 0)])
def test_pushforward_metric_flat_and_normal(m, l):
    pf = pushforward_germ(cover_germ(m, l), 2)
    H = pushforward_metric(build_hdc_sl2(m, l), 2, pf)
    rep = decoupled_report(pf.germ.phi, H)
    assert rep.ok


def test_pushforward_metric_simplest_values():
    pf = pushforward_germ(cover_germ(1, 0), 2)
    H = pushforward_metric(build_hdc_sl2(1, 0), 2, pf)
    q = Fraction(1, 4)
    assert H.h == Matrix.diag([modulus(-q), modulus(-3 * q), modulus(3 * q), modulus(q)], lp(0))


def test_pushforward_metric_only_double_covers():
    pf = pushforward_germ(cover_germ(1, 0), 4)
    with pytest.raises(ValueError):
        pushforward_metric(build_hdc_sl2(1, 0), 4, pf)


def test_hecke_push_metric_constant():
    h = hecke_push_metric(1, Fraction(1, 2))
    assert h.h == Matrix.diag([lp(2) * modulus(Fraction(1, 2)), lp(2) * modulus(Fraction(-1, 2))], lp(0))
    assert chern_curvature(h).is_zero()


def test_hecke_push_metric_rejects_nonequivariant():
    f = LogPolarExpr.monomial(1, 0) + LogPolarExpr.monomial(0, 1)  # w + wbar
    with pytest.raises(ValueError, match="equivariant"):
        hecke_push_metric(f, 1)
    with pytest.raises(ArithmeticError):
        hecke_push_metric(f, Fraction(1, 2))
    with pytest.raises(ValueError):
        hecke_push_metric(1, Fraction(1, 3))


def test_scaled_report_scales_defect():
    higgs = so3_example_higgs(2, 1)
    h = so3_diagonal_metric(1)
    plain = decoupled_report(higgs.phi, h).normality_defect
    scaled = scaled_decoupled_report(higgs, h).normality_defect
    assert scaled == plain.scale(GaussRational(2))
