import csv
import io
import json
from fractions import Fraction

import pytest

from hitchin_atlas import __version__
from hitchin_atlas.cli import (
    ConfigError,
    ValidationError,
    config_to_dict,
    main,
    parse_config,
    parse_germ,
)
from hitchin_atlas.algebra import GaussRational, LaurentSeries
from hitchin_atlas.suites import run_suite

INTRO = {"n": 2, "g": 2, "irreducible_reduced": True,
         "zeros": [{"label": "x0", "order": 2}] + [{"label": f"x{i}", "order": 1} for i in range(1, 7)]}


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def germ_cfg():
    zeros = [{"label": "a", "order": 2, "germs": {"a2": "1", "a4": "z^2"}}]
    zeros += [{"label": f"f{i}", "order": 1, "germs": {"a2": "1/2+i*2", "a4": "z - 3/2*z^2"}} for i in range(6)]
    return {"n": 2, "g": 2, "irreducible_reduced": True, "zeros": zeros}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def test_parse_germ_literals():
    f = parse_germ("(1/2+i*2)*z^3 - 3/4*z + 2", 6)
    assert f.terms() == {0: GaussRational(2), 1: GaussRational(Fraction(-3, 4)),
                         3: GaussRational(Fraction(1, 2), 2)}
    assert f.truncation_order == 6
    assert parse_germ("1/2+i*2", 5) == LaurentSeries({0: GaussRational(Fraction(1, 2), 2)}, 5)
    with pytest.raises(ValueError):
        parse_germ("1**z", 4)
    with pytest.raises(ValueError):
        parse_germ("", 4)


def test_minimal_order_only_config():
    cfg = parse_config({"n": 1, "g": 2, "zeros": [{"label": f"p{i}", "order": 1} for i in range(4)]})
    assert cfg.base_point.orders == [1, 1, 1, 1]
    assert cfg.truncation_order == 5


def test_germ_config_and_roundtrip():
    cfg = parse_config(germ_cfg())
    assert cfg.base_point.germ_mode
    again = parse_config(config_to_dict(cfg))
    assert again.base_point == cfg.base_point
    assert config_to_dict(again) == config_to_dict(cfg)


def test_unknown_keys_rejected_with_pointer():
    with pytest.raises(ConfigError) as exc:
        parse_config({**INTRO, "colour": "red"})
    assert exc.value.pointer == "$.colour"
    bad = json.loads(json.dumps(INTRO))
    bad["zeros"][2]["foo"] = 1
    with pytest.raises(ConfigError) as exc:
        parse_config(bad)
    assert exc.value.pointer == "$.zeros[2].foo"
    g = germ_cfg()
    g["zeros"][0]["germs"]["a6"] = "z"
    with pytest.raises(ConfigError) as exc:
        parse_config(g)
    assert exc.value.pointer == "$.zeros[0].germs.a6"


def test_degree_mismatch_is_validation_error():
    with pytest.raises(ValidationError, match="degree mismatch"):
        parse_config({"n": 1, "g": 2, "zeros": [{"label": "a", "order": 1}, {"label": "b", "order": 1}]})


# ---------------------------------------------------------------------------
# commands and exit codes
# ---------------------------------------------------------------------------

def test_intro_strata(tmp_path, capsys):
    code, out, _ = run(["strata", "-i", write(tmp_path, INTRO), "--side", "sp", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert [(r["r"], r["s"], r["dim"]) for r in rep["strata"]] == [("1", "0", "10"), ("0", "0", "9")]
    assert rep["version"] == __version__
    assert len(rep["config_hash"]) == 64


def test_duality_rows(tmp_path, capsys):
    code, out, _ = run(["duality", "-i", write(tmp_path, INTRO), "--format", "json"], capsys)
    rows = json.loads(out)["duality"]
    assert code == 0 and len(rows) == 2
    assert all(r["hecke_iso"] and r["abelian_dual"] for r in rows)


def test_exit_codes(tmp_path, capsys):
    assert run(["strata", "-i", write(tmp_path, {**INTRO, "bogus": 1})], capsys)[0] == 2
    assert run(["strata", "-i", str(tmp_path / "missing.json")], capsys)[0] == 2
    (tmp_path / "broken.json").write_text("{not json")
    assert run(["strata", "-i", str(tmp_path / "broken.json")], capsys)[0] == 2
    wrong = {"n": 1, "g": 2, "zeros": [{"label": "a", "order": 3}]}
    assert run(["strata", "-i", write(tmp_path, wrong)], capsys)[0] == 3
    twisted = {**INTRO, "twist": 2}
    twisted["zeros"] = [{"label": c, "order": 2} for c in "abcd"]
    code, _, err = run(["strata", "-i", write(tmp_path, twisted)], capsys)
    assert code == 4 and "M = K" in err
    no_flag = {k: v for k, v in INTRO.items() if k != "irreducible_reduced"}
    assert run(["strata", "-i", write(tmp_path, no_flag)], capsys)[0] == 4
    assert run(["frobnicate"], capsys)[0] == 2


def test_degeneration_order_six(tmp_path, capsys):
    cfg = {"n": 1, "g": 4, "irreducible_reduced": True,
           "zeros": [{"label": "a", "order": 6}] + [{"label": f"b{i}", "order": 1} for i in range(6)]}
    code, _, err = run(["degeneration", "-i", write(tmp_path, cfg)], capsys)
    assert code == 4
    assert "fibre model beyond the tabulated orders" in err


def test_classify_germ_mode(tmp_path, capsys):
    code, out, _ = run(["classify", "-i", write(tmp_path, germ_cfg()), "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["classification"]["kind"] == "Sl2TypeSingular"
    first = rep["classification"]["zeros"][0]
    assert first["ord_disc_sp"] == "2" and first["ord_disc_red_sp"] == "0"


def test_classify_needs_germs(tmp_path, capsys):
    assert run(["classify", "-i", write(tmp_path, INTRO)], capsys)[0] == 4


def test_report_deterministic_and_formats_agree(tmp_path, capsys):
    path = write(tmp_path, INTRO)
    outs = {}
    for fmt in ("json", "md", "csv"):
        target = tmp_path / f"out.{fmt}"
        assert run(["report", "-i", path, "--format", fmt, "-o", str(target)], capsys)[0] == 0
        first = target.read_bytes()
        run(["report", "-i", path, "--format", fmt, "-o", str(target)], capsys)
        assert target.read_bytes() == first
        outs[fmt] = first.decode()
    rep = json.loads(outs["json"])
    json_rows = [(r["divisor"], r["deg_D"], r["r"], r["s"], r["dim"], r["covering_degree"], r["side"])
                 for side in ("sp", "so") for r in rep["strata"][side]]
    csv_rows = [(r["divisor"], r["deg_D"], r["r"], r["s"], r["dim"], r["covering_degree"], r["side"])
                for r in csv.DictReader(io.StringIO(outs["csv"]))]
    assert csv_rows == json_rows
    md_rows = []
    for line in outs["md"].splitlines():
        cells = [c.strip() for c in line.strip("|").split("|")]
        if len(cells) == 8 and cells[-1] in ("sp", "so"):
            md_rows.append((cells[0], cells[1], cells[2], cells[3], cells[4], cells[6], cells[7]))
    assert md_rows == json_rows
    assert rep["config_hash"] in outs["md"]
    inv = rep["curve_invariants"]
    assert f"| {inv['genus_quotient']} | {inv['genus_normalized']} | {inv['prym_dim']} |" in outs["md"]


def test_report_numbers_are_strings(tmp_path, capsys):
    _, out, _ = run(["report", "-i", write(tmp_path, INTRO), "--format", "json"], capsys)

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, list):
            for v in x:
                walk(v)
        else:
            assert not isinstance(x, (int, float)) or isinstance(x, bool)

    walk(json.loads(out))


def test_report_records_unavailable_degeneration(tmp_path, capsys):
    cfg = {"n": 1, "g": 2, "irreducible_reduced": True, "zeros": [{"label": "a", "order": 2}, {"label": "b", "order": 2}]}
    code, out, _ = run(["report", "-i", write(tmp_path, cfg), "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["degeneration"]["available"] is False


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

def test_verify_local(capsys):
    code, out, _ = run(["verify", "local", "--m-max", "6", "--k", "2"], capsys)
    assert code == 0
    assert "FAIL" not in out


def test_verify_metrics(capsys):
    code, out, _ = run(["verify", "metrics", "--m-max", "8"], capsys)
    assert code == 0
    assert "hdc-so3 m=8,l=4" in out


def test_verify_injected_fault(capsys):
    code, out, _ = run(["verify", "all", "--inject-fault", "--m-max", "3"], capsys)
    assert code == 5
    assert "FAIL local: so3-normal-form" in out
    assert "defect=Matrix(" in out


def test_verify_json_output(capsys):
    code, out, _ = run(["verify", "metrics", "--m-max", "2", "--format", "json"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["passed"] is True
    assert rep["grid"] == {"m_max": "2", "k": "2"}


def test_suite_k4_roundtrips():
    summary = run_suite("local", 3, 4)
    assert summary.passed
    assert any("roundtrip k=4" in c.case for c in summary.cases)
