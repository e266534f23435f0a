import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hitchin_atlas.algebra import (
    I,
    INF,
    GaussRational,
    LaurentSeries,
    LogPolarExpr,
    Matrix,
    Poly,
    PrecisionError,
    matrix_inverse_monomial_det,
    poly_discriminant,
    poly_resultant,
    sylvester_matrix,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gauss = st.builds(GaussRational, small, small)


def leibniz_det(rows):
    """Sum over permutations; used as an oracle for the Berkowitz routine."""
    n = len(rows)
    total = GaussRational(0)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = GaussRational(-1 if inversions % 2 else 1)
        for i in range(n):
            term = term * rows[i][perm[i]]
        total = total + term
    return total


def evaluate(p: Poly, x):
    acc = GaussRational(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def from_roots(roots, var="x"):
    p = Poly([1], var)
    for r in roots:
        p = p * Poly([-r, 1], var)
    return p


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

def test_gauss_parse_examples():
    assert GaussRational.parse("3/2") == GaussRational(Fraction(3, 2))
    assert GaussRational.parse("1/2+i*2") == GaussRational(Fraction(1, 2), 2)
    assert GaussRational.parse("-i") == GaussRational(0, -1)
    assert GaussRational.parse("2*i") == GaussRational(0, 2)
    with pytest.raises(ValueError):
        GaussRational.parse("1/0")
    with pytest.raises(ValueError):
        GaussRational.parse("")


@given(gauss)
def test_gauss_str_roundtrip(x):
    assert GaussRational.parse(str(x)) == x


@given(gauss, gauss, gauss)
def test_gauss_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b).conj() == a.conj() * b.conj()
    if not a.is_zero():
        assert a * a.inverse() == 1


def test_i_squared():
    assert I * I == -1


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

@settings(max_examples=40)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(gauss, min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_det_matches_leibniz(rows):
    assert Matrix(rows).det() == leibniz_det(rows)


@settings(max_examples=25)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(gauss, min_size=n, max_size=n),
                                                     min_size=n, max_size=n)),
       st.integers(-3, 3))
def test_charpoly_matches_leibniz_at_integer_points(rows, t):
    n = len(rows)
    A = Matrix(rows)
    shifted = [[(GaussRational(t) if i == j else GaussRational(0)) - rows[i][j] for j in range(n)]
               for i in range(n)]
    assert evaluate(A.charpoly(), GaussRational(t)) == leibniz_det(shifted)


@settings(max_examples=25)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(gauss, min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_adjugate_identity(rows):
    A = Matrix(rows)
    n = len(rows)
    assert A * A.adjugate() == Matrix.identity(n).scale(A.det())


def test_monomial_det_inverse():
    A = Matrix([[LaurentSeries.monomial(1, 2), LaurentSeries.const(3)],
                [LaurentSeries.zero(), LaurentSeries.monomial(1, -1)]])
    Ainv = matrix_inverse_monomial_det(A)
    assert A * Ainv == Matrix.identity(2, LaurentSeries.const(1), LaurentSeries.zero())
    B = Matrix([[LaurentSeries.const(1) + LaurentSeries.monomial(1, 1)]])
    with pytest.raises(ArithmeticError):
        matrix_inverse_monomial_det(B)


# ---------------------------------------------------------------------------
# resultants and discriminants
# ---------------------------------------------------------------------------

roots_st = st.lists(st.integers(-4, 4), min_size=1, max_size=4)


@settings(max_examples=50)
@given(roots_st, roots_st)
def test_resultant_is_product_over_roots(rp, rq):
    p, q = from_roots(rp), from_roots(rq)
    want = GaussRational(1)
    for a in rp:
        for b in rq:
            want = want * (a - b)
    assert poly_resultant(p, q) == want
    assert sylvester_matrix(p, q).det() == want


@settings(max_examples=50)
@given(st.lists(gauss, min_size=2, max_size=5), st.lists(gauss, min_size=2, max_size=5))
def test_resultant_swap_sign(a, b):
    p, q = Poly(a), Poly(b)
    if p.degree < 1 or q.degree < 1:
        return
    sign = -1 if (p.degree * q.degree) % 2 else 1
    assert poly_resultant(q, p) == poly_resultant(p, q) * sign


@settings(max_examples=50)
@given(st.lists(st.integers(-4, 4), min_size=2, max_size=5))
def test_discriminant_is_product_of_root_differences(roots):
    want = GaussRational(1)
    for i, j in itertools.combinations(range(len(roots)), 2):
        want = want * (roots[i] - roots[j]) ** 2
    assert poly_discriminant(from_roots(roots)) == want


def test_quadratic_discriminant():
    b, c = GaussRational(3), GaussRational(5)
    assert poly_discriminant(Poly([c, b, 1])) == b * b - 4 * c


def test_discriminant_over_series_ring():
    # eta^2 + a2 eta + a4 with a2 = 1 + z, a4 = z^2
    a2 = LaurentSeries({0: 1, 1: 1})
    a4 = LaurentSeries({2: 1})
    d = poly_discriminant(Poly([a4, a2, LaurentSeries.const(1)], "eta"))
    assert d == a2 * a2 - a4 * 4


def test_resultant_of_zero_raises():
    with pytest.raises(ValueError):
        poly_resultant(Poly([]), Poly([1, 1]))


def test_linear_discriminant_is_one():
    assert poly_discriminant(Poly([5, 2])) == 1


# ---------------------------------------------------------------------------
# truncated Laurent series
# ---------------------------------------------------------------------------

def naive_product(f: dict, g: dict, prec: int) -> dict:
    out = {}
    for a, x in f.items():
        for b, y in g.items():
            if a + b < prec:
                out[a + b] = out.get(a + b, GaussRational(0)) + x * y
    return {k: v for k, v in out.items() if not v.is_zero()}


series_terms = st.dictionaries(st.integers(-2, 5), gauss, max_size=5)


@given(series_terms, series_terms)
def test_series_product_matches_naive(f, g):
    F, G = LaurentSeries(f, 8), LaurentSeries(g, 8)
    H = F * G
    vf = min(f) if f else None
    vg = min(g) if g else None
    if vf is None or vg is None:
        return
    prec = min(8 + vg, 8 + vf)
    assert H.truncation_order == prec
    want = naive_product({k: v for k, v in f.items() if not v.is_zero()},
                         {k: v for k, v in g.items() if not v.is_zero()}, prec)
    assert H.terms() == want


@given(series_terms.filter(lambda d: any(not v.is_zero() for v in d.values())))
def test_series_inverse(f):
    F = LaurentSeries(f, 10)
    one, bound = (F * F.inverse()).compare(LaurentSeries.const(1))
    assert one
    assert bound >= 10 - F.valuation


def test_coefficient_beyond_truncation_raises():
    f = LaurentSeries({0: 1}, 3)
    with pytest.raises(PrecisionError):
        f.coefficient(3)


def test_sqrt_of_unit_series():
    f = LaurentSeries({0: 4, 1: 4, 2: 1}, 12)  # (2 + z)^2
    r = f.sqrt()
    assert (r * r).compare(f)[0]
    assert r.coefficient(0) in (GaussRational(2), GaussRational(-2))


def test_compose_and_substitute():
    f = LaurentSeries({1: 1, 2: 1})
    g = LaurentSeries({2: 1})
    assert f.compose(g) == f.substitute_power(2)
    assert f.rotate(GaussRational(-1)) == LaurentSeries({1: -1, 2: 1})


def test_exact_series_have_infinite_precision():
    assert LaurentSeries.monomial(3, 2).truncation_order == INF


# ---------------------------------------------------------------------------
# log-polar expressions
# ---------------------------------------------------------------------------

def test_wirtinger_of_modulus_square():
    assert LogPolarExpr.modulus_power(2).d() == LogPolarExpr.monomial(0, 1)
    assert LogPolarExpr.modulus_power(2).dbar() == LogPolarExpr.monomial(1, 0)


lp_terms = st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3),
                              st.fractions(min_value=-3, max_value=3, max_denominator=2), gauss),
                    max_size=4)


@given(lp_terms)
def test_wirtinger_derivatives_commute(terms):
    e = LogPolarExpr(terms)
    assert e.d().dbar() == e.dbar().d()


@given(lp_terms)
def test_conjugation_swaps_derivatives(terms):
    e = LogPolarExpr(terms)
    assert e.d().conj() == e.conj().dbar()
    assert e.conj().conj() == e


@given(lp_terms, lp_terms)
def test_leibniz_rule(s, t):
    a, b = LogPolarExpr(s), LogPolarExpr(t)
    assert (a * b).d() == a.d() * b + a * b.d()


def test_descent_along_square():
    e = LogPolarExpr.monomial(2, 0, 1)
    assert e.descends(2)
    assert e.descend(2) == LogPolarExpr.monomial(1, 0, Fraction(1, 2))
    assert not LogPolarExpr.monomial(1, 0).descends(2)


def test_laurent_embedding():
    f = LaurentSeries({-1: 2, 3: I})
    assert LogPolarExpr.from_laurent(f) == LogPolarExpr.monomial(-1, 0, 0, 2) + LogPolarExpr.monomial(3, 0, 0, I)
    assert LogPolarExpr.from_laurent(f).dbar().is_zero()
