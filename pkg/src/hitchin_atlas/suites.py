"""
Bundled verification suites over grids of local models.

Each case returns a ``CaseResult``; a suite passes when every case does.
Cases are independent and are collected in grid order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable

from .algebra import LaurentSeries, Matrix, Poly
from .localmodels import (
    SYMPLECTIC,
    LocalHiggsGerm,
    charpoly_equal,
    germ_equivalent,
    pullback_eigengerm,
    pushforward_germ,
    resultant_norm,
    series_matrix,
    sheet_norm,
    so3_from_sl2_adjoint,
    so3_local_normal_form,
    so3_orthonormalize,
    so_hecke_reconstruct,
    so_kernel_data,
    so_kernel_split,
    sp_local_normal_form,
    standard_symplectic,
    zmono,
)
from .metrics import (
    build_hdc_sl2,
    build_hdc_so3,
    decoupled_report,
    nilpotent_control,
    pushforward_metric,
    scaled_decoupled_report,
    sl2_higgs_model,
    so3_example_higgs,
)


@dataclass
class CaseResult:
    suite: str
    case: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteSummary:
    cases: list[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failures(self) -> list[CaseResult]:
        return [c for c in self.cases if not c.passed]

    def extend(self, results: Iterable[CaseResult]) -> None:
        self.cases.extend(results)


def _case(suite: str, name: str, fn: Callable[[], tuple[bool, str]]) -> CaseResult:
    try:
        ok, detail = fn()
    except Exception as exc:  # a raised error is a failed case, not a crash
        return CaseResult(suite, name, False, f"{type(exc).__name__}: {exc}")
    return CaseResult(suite, name, bool(ok), detail)


def _grid(m_max: int):
    for m in range(m_max + 1):
        for l in range(m // 2 + 1):
            yield m, l


def _cover_germ(m: int, l: int, perturb: bool) -> LocalHiggsGerm:
    low = zmono(m - l) * (1 + zmono(1)) if perturb else zmono(m - l)
    return LocalHiggsGerm(series_matrix([[0, zmono(l)], [low, 0]]), standard_symplectic(2),
                          SYMPLECTIC, "w")


def _expected_push_form(k: int) -> Matrix:
    size = 2 * k
    rows = [[LaurentSeries.zero()] * size for _ in range(size)]
    omega = [[0, 1], [-1, 0]]
    for i in range(2):
        for j in range(k):
            for i2 in range(2):
                j2 = k - 1 - j
                rows[2 * j + i][2 * j2 + i2] = LaurentSeries.const(omega[i][i2])
    return Matrix(rows)


# ---------------------------------------------------------------------------
# local suite
# ---------------------------------------------------------------------------

def _sp_normal_case(m, l):
    e = sp_local_normal_form(m, l)
    want = Poly([-zmono(m), LaurentSeries.zero(), LaurentSeries.const(1)], "lam")
    ok, _ = charpoly_equal(e.charpoly(), want)
    return ok and e.is_antisymmetric(), str(e.charpoly())


def _push_case(m, l, k):
    e = _cover_germ(m, l, False)
    r = pushforward_germ(e, k)
    char = r.germ.charpoly()
    ok_res, _ = charpoly_equal(char, resultant_norm(e.charpoly(), k))
    ok_sheet = True
    if k in (1, 2, 4):
        ok_sheet, _ = charpoly_equal(char, sheet_norm(e.charpoly(), k))
    ok_form = r.germ.form == _expected_push_form(k)
    ok_trans = r.transition == Matrix.diag([zmono(j) for j in range(k) for _ in range(2)],
                                            LaurentSeries.zero())
    ok = ok_res and ok_sheet and ok_form and ok_trans and r.germ.is_antisymmetric()
    return ok, f"norm={ok_res and ok_sheet} form={ok_form} transition={ok_trans}"


def _roundtrip_case(m, l, k, truncation):
    e = _cover_germ(m, l, perturb=(m % 2 == 0))
    b2 = -(e.phi[0, 1] * e.phi[1, 0])
    r = pushforward_germ(e, k)
    # pushing forward again divides the exactness bound by k
    back = pullback_eigengerm(r.germ, b2, k=k, truncation_order=k * truncation)
    ok, bound = germ_equivalent(back, e)
    again = pushforward_germ(back, k)
    ok2, bound2 = germ_equivalent(again.germ, r.germ)
    return ok and ok2 and min(bound, bound2) >= truncation, f"bound={min(bound, bound2)}"


def _so3_case(m, l, corrupt):
    nf = so3_local_normal_form(m, l)
    if corrupt:
        phi = nf.phi
        rows = [list(r) for r in phi.rows]
        rows[0][1] = rows[0][1] + 1
        nf = LocalHiggsGerm(Matrix(rows), nf.form, nf.form_kind)
    got = so3_orthonormalize(so3_from_sl2_adjoint(sp_local_normal_form(m, l)))
    ok_entries = got.phi == nf.phi and got.form == nf.form
    want = Poly([LaurentSeries.zero(), -zmono(m, 4), LaurentSeries.zero(), LaurentSeries.const(1)], "lam")
    ok_char, _ = charpoly_equal(nf.charpoly(), want)
    kd = so_kernel_data(nf)
    ok_kernel = kd.kernel_order == l and kd.form_on_kernel.valuation == m - 2 * l
    detail = f"entries={ok_entries} char={ok_char} kernel={ok_kernel}"
    if not ok_entries:
        detail += f" defect={got.phi - nf.phi}"
    return ok_entries and ok_char and ok_kernel and nf.is_antisymmetric(), detail


def _hecke_case(m, l):
    nf = so3_local_normal_form(m, l)
    split = so_kernel_split(nf)
    rec = so_hecke_reconstruct(split.kernel_form, split.germ, m, l)
    ok, bound = germ_equivalent(rec.germ, nf)
    ok = ok and rec.torsion_length == m - 2 * l and bound >= m + 4 and rec.germ.is_antisymmetric()
    return ok, f"torsion={rec.torsion_length} bound={bound}"


def run_local(m_max: int = 6, k: int = 2, truncation: int | None = None,
              corrupt: bool = False) -> SuiteSummary:
    out = SuiteSummary()
    for m, l in _grid(m_max):
        trunc = truncation if truncation is not None else m + 4
        tag = f"m={m},l={l}"
        out.extend([
            _case("local", f"sp-normal-form {tag}", lambda: _sp_normal_case(m, l)),
            _case("local", f"pushforward k={k} {tag}", lambda: _push_case(m, l, k)),
            _case("local", f"so3-normal-form {tag}", lambda: _so3_case(m, l, corrupt)),
            _case("local", f"so3-reconstruct {tag}", lambda: _hecke_case(m, l)),
        ])
        if k in (2, 4):
            out.extend([_case("local", f"roundtrip k={k} {tag}",
                              lambda: _roundtrip_case(m, l, k, trunc))])
    return out


# ---------------------------------------------------------------------------
# metrics suite
# ---------------------------------------------------------------------------

def _report_detail(rep) -> str:
    parts = [f"flat={rep.flat}", f"normal={rep.normal}"]
    if not rep.normal:
        parts.append(f"normality_defect={rep.normality_defect}")
    if not rep.flat:
        parts.append(f"curvature_defect={rep.curvature_defect}")
    return " ".join(parts)


def _hdc_sl2_case(m, l):
    rep = decoupled_report(sl2_higgs_model(m, l), build_hdc_sl2(m, l))
    return rep.ok, _report_detail(rep)


def _hdc_so3_case(m, l):
    rep = scaled_decoupled_report(so3_example_higgs(m, l), build_hdc_so3(m, l))
    return rep.ok, _report_detail(rep)


def _push_metric_case(m, l):
    e = _cover_germ(m, l, False)
    pf = pushforward_germ(e, 2)
    H = pushforward_metric(build_hdc_sl2(m, l), 2, pf)
    rep = decoupled_report(pf.germ.phi, H)
    return rep.ok, _report_detail(rep)


def _negative_control():
    phi, h = nilpotent_control()
    rep = decoupled_report(phi, h)
    return not rep.normal, "nilpotent field flagged" if not rep.normal else "nilpotent field passed"


def run_metrics(m_max: int = 8) -> SuiteSummary:
    out = SuiteSummary()
    for m, l in _grid(m_max):
        tag = f"m={m},l={l}"
        out.extend([
            _case("metrics", f"hdc-sl2 {tag}", lambda: _hdc_sl2_case(m, l)),
            _case("metrics", f"hdc-so3 {tag}", lambda: _hdc_so3_case(m, l)),
            _case("metrics", f"pushforward-metric {tag}", lambda: _push_metric_case(m, l)),
        ])
    out.extend([_case("metrics", "negative-control nilpotent", _negative_control)])
    return out


def run_suite(name: str, m_max: int | None = None, k: int = 2,
              truncation: int | None = None, corrupt: bool = False) -> SuiteSummary:
    out = SuiteSummary()
    if name in ("local", "all"):
        out.extend(run_local(6 if m_max is None else m_max, k, truncation, corrupt).cases)
    if name in ("metrics", "all"):
        out.extend(run_metrics(8 if m_max is None else m_max).cases)
    if name not in ("local", "metrics", "all"):
        raise ValueError(f"unknown suite {name!r}")
    return out
