"""
Command line interface: ``atlas <command> ...``.

Exit codes: 0 success, 2 parse error, 3 validation error, 4 precondition
violation, 5 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from . import __version__
from .algebra import GaussRational, LaurentSeries, PrecisionError
from .spectral import (
    BasePoint,
    MarkedZero,
    classify_sl2_type,
    curve_invariants,
    discriminant_orders,
    validate_base_point,
)
from .strata import (
    PreconditionError,
    component_count,
    duality_report,
    first_degeneration_model,
    global_fibration,
    stratification_table,
)
from .suites import run_suite

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_PRECONDITION, EXIT_VERIFY = 0, 2, 3, 4, 5

TOP_KEYS = {"n", "g", "twist", "irreducible_reduced", "off_zero_branching", "zeros", "truncation_order"}
REQUIRED_TOP = {"n", "g", "zeros"}
ZERO_KEYS = {"label", "order", "germs"}


class ConfigError(Exception):
    def __init__(self, pointer: str, message: str):
        super().__init__(f"{pointer}: {message}")
        self.pointer = pointer


class ValidationError(Exception):
    pass


# ---------------------------------------------------------------------------
# germ strings
# ---------------------------------------------------------------------------

def _split_terms(text: str) -> list[str]:
    terms, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and i > start and text[i - 1] not in "^*/":
            terms.append(text[start:i])
            start = i
    terms.append(text[start:])
    return [t for t in terms if t]


def _split_factors(term: str) -> list[str]:
    out, depth, start = [], 0, 0
    for i, ch in enumerate(term):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(term[start:i])
            start = i + 1
    out.append(term[start:])
    return out


_POWER = re.compile(r"^z(?:\^(-?\d+))?$")


def parse_germ(text: str, truncation_order: float) -> LaurentSeries:
    """
    Parse a sum of terms ``c*z^k`` into a series truncated at
    ``truncation_order``; ``c`` is a rational or Gaussian rational literal,
    optionally parenthesized.
    """
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty germ")
    out: dict[int, GaussRational] = {}
    for term in _split_terms(s):
        sign = -1 if term[0] == "-" else 1
        body = term[1:] if term[0] in "+-" else term
        coeff, exp = GaussRational(sign), 0
        for factor in _split_factors(body) if body else []:
            m = _POWER.match(factor)
            if m:
                exp += int(m.group(1)) if m.group(1) is not None else 1
                continue
            if factor.startswith("(") and factor.endswith(")"):
                factor = factor[1:-1]
            if not factor:
                raise ValueError(f"malformed term {term!r}")
            coeff = coeff * GaussRational.parse(factor)
        out[exp] = out[exp] + coeff if exp in out else coeff
    return LaurentSeries(out, truncation_order)


def format_germ(series: LaurentSeries) -> str:
    """Inverse of ``parse_germ`` up to the truncation order."""
    if not series.terms():
        return "0"
    return str(LaurentSeries(series.terms()))


# ---------------------------------------------------------------------------
# config
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Config:
    base_point: BasePoint
    truncation_order: int
    raw: dict
    config_hash: str


def config_to_dict(cfg: Config) -> dict:
    """Normalized configuration; ``parse_config`` of the result gives an equal base point."""
    b = cfg.base_point
    zeros = []
    for z in b.zeros:
        entry: dict = {"label": z.label, "order": z.order}
        if z.has_germs:
            entry["germs"] = {f"a{2 * (j + 1)}": format_germ(s) for j, s in enumerate(z.germs)}
        zeros.append(entry)
    return {
        "n": b.n,
        "g": b.g,
        "twist": b.twist,
        "irreducible_reduced": b.irreducible_reduced,
        "off_zero_branching": b.off_zero_branching,
        "zeros": zeros,
        "truncation_order": cfg.truncation_order,
    }


def _expect(cond: bool, pointer: str, message: str) -> None:
    if not cond:
        raise ConfigError(pointer, message)


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def canonical_json(data: Any) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def parse_config(source: str | dict) -> Config:
    """
    Parse and validate a configuration given as a path, JSON text or an
    already decoded dictionary. Raises ``ConfigError`` on schema problems
    and ``ValidationError`` when the base point violates its invariants.
    """
    if isinstance(source, dict):
        raw = source
    else:
        text = source
        if not source.lstrip().startswith("{"):
            try:
                text = Path(source).read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError("$", f"cannot read config: {exc}") from None
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("$", f"invalid JSON: {exc}") from None
    _expect(isinstance(raw, dict), "$", "config must be a JSON object")
    for key in sorted(raw):
        _expect(key in TOP_KEYS, f"$.{key}", "unknown key")
    for key in sorted(REQUIRED_TOP):
        _expect(key in raw, f"$.{key}", "missing required key")
    n, g = raw["n"], raw["g"]
    _expect(_is_int(n) and n >= 1, "$.n", "must be a positive integer")
    _expect(_is_int(g), "$.g", "must be an integer")
    twist = raw.get("twist", "canonical")
    _expect(twist == "canonical" or (_is_int(twist) and twist > 0), "$.twist",
            "must be 'canonical' or a positive integer")
    irr = raw.get("irreducible_reduced", False)
    _expect(isinstance(irr, bool), "$.irreducible_reduced", "must be a boolean")
    branching = raw.get("off_zero_branching", "simple")
    _expect(branching in ("simple", "declared"), "$.off_zero_branching", "must be 'simple' or 'declared'")
    zeros_raw = raw["zeros"]
    _expect(isinstance(zeros_raw, list) and zeros_raw, "$.zeros", "must be a nonempty list")
    orders = []
    for i, z in enumerate(zeros_raw):
        ptr = f"$.zeros[{i}]"
        _expect(isinstance(z, dict), ptr, "must be an object")
        for key in sorted(z):
            _expect(key in ZERO_KEYS, f"{ptr}.{key}", "unknown key")
        _expect("label" in z and isinstance(z["label"], str) and z["label"], f"{ptr}.label",
                "must be a nonempty string")
        _expect("order" in z and _is_int(z["order"]), f"{ptr}.order", "must be an integer")
        orders.append(z["order"])
    default_trunc = max(orders) + 4
    trunc = raw.get("truncation_order", default_trunc)
    _expect(_is_int(trunc) and trunc >= 1, "$.truncation_order", "must be a positive integer")
    zeros = []
    for i, z in enumerate(zeros_raw):
        ptr = f"$.zeros[{i}]"
        germs = None
        if "germs" in z:
            gd = z["germs"]
            _expect(isinstance(gd, dict), f"{ptr}.germs", "must be an object")
            wanted = [f"a{2 * j}" for j in range(1, n + 1)]
            for key in sorted(gd):
                _expect(key in wanted, f"{ptr}.germs.{key}", f"unknown coefficient (expected {', '.join(wanted)})")
            series = []
            for key in wanted:
                _expect(key in gd, f"{ptr}.germs.{key}", "missing coefficient")
                _expect(isinstance(gd[key], str), f"{ptr}.germs.{key}", "must be a string")
                try:
                    series.append(parse_germ(gd[key], trunc))
                except (ValueError, ZeroDivisionError) as exc:
                    raise ConfigError(f"{ptr}.germs.{key}", str(exc)) from None
            germs = tuple(series)
        zeros.append(MarkedZero(z["label"], z["order"], germs))
    bp = BasePoint(n, g, tuple(zeros), twist, branching, irr)
    violations = validate_base_point(bp)
    if violations:
        raise ValidationError("; ".join(violations))
    digest = hashlib.sha256(canonical_json(raw).encode("utf-8")).hexdigest()
    return Config(bp, trunc, raw, digest)


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def _s(x: Any) -> str:
    return str(x)


def classification_section(b: BasePoint) -> dict:
    c = classify_sl2_type(b)
    zeros = []
    orders = {d.label: d for d in discriminant_orders(b)}
    for d in c.zeros:
        o = orders[d.label]
        zeros.append({
            "label": d.label,
            "order": _s(d.order),
            "smooth_at_origin": d.smooth_at_origin,
            "sheet_count": _s(d.sheet_count),
            "off_zero_smooth": d.off_zero_smooth,
            "ord_disc_sp": _s(o.disc_sp),
            "ord_disc_red_sp": _s(o.disc_red_sp),
            "ord_disc_so": _s(o.disc_so),
            "ord_disc_red_so": _s(o.disc_red_so),
        })
    return {"kind": c.kind.value, "zeros": zeros}


def invariants_section(b: BasePoint) -> dict:
    ci = curve_invariants(b)
    return {
        "genus_quotient": _s(ci.genus_quotient),
        "genus_normalized": _s(ci.genus_normalized),
        "prym_dim": _s(ci.prym_dim),
        "deg_R_quotient": _s(ci.deg_R_quotient),
        "n_odd": _s(ci.n_odd),
        "n_even": _s(ci.n_even),
    }


def _stratum_row(s) -> dict:
    return {
        "divisor": str(s.divisor),
        "deg_D": _s(s.deg_D),
        "r": _s(s.r),
        "s": _s(s.s),
        "dim": _s(s.dim),
        "n_diag": _s(s.n_diag),
        "torsor_base": s.torsor.base_kind,
        "torsor_components": _s(s.torsor.components),
        "torsor_label": s.torsor.twist_label,
        "covering_degree": _s(s.covering_degree),
        "side": s.side,
    }


def strata_section(b: BasePoint, side: str) -> list[dict]:
    return [_stratum_row(s) for s in stratification_table(b, side)]


def duality_section(b: BasePoint) -> list[dict]:
    return [{
        "divisor": str(r.divisor),
        "sp": {"r": _s(r.sp.r), "s": _s(r.sp.s), "dim": _s(r.sp.dim), "base": r.sp.torsor.base_kind},
        "so": {"r": _s(r.so.r), "s": _s(r.so.s), "dim": _s(r.so.dim), "base": r.so.torsor.base_kind},
        "hecke_iso": r.hecke_iso,
        "abelian_dual": r.abelian_dual,
    } for r in duality_report(b)]


def degeneration_section(b: BasePoint) -> list[dict]:
    return [{"label": lab, "model": model} for lab, model in first_degeneration_model(b)]


def components_section(b: BasePoint) -> dict:
    out = {}
    for side in ("sp", "so"):
        c, i = component_count(b, side)
        out[side] = {"connected": _s(c), "irreducible": _s(i)}
    return out


def _header(cfg: Config, command: str) -> dict:
    return {"tool": "atlas", "version": __version__, "config_hash": cfg.config_hash, "command": command}


def run_report(cfg: Config, command: str = "all", side: str = "sp") -> dict:
    """
    Assemble the report for one command. Theorem preconditions raise
    ``PreconditionError``; the ``all`` report records unavailable optional
    sections instead of failing on them.
    """
    b = cfg.base_point
    rep = _header(cfg, command)
    if command == "classify":
        if not b.germ_mode:
            raise PreconditionError("germs required")
        rep["classification"] = classification_section(b)
        rep["curve_invariants"] = _optional(lambda: invariants_section(b))
    elif command == "strata":
        rep["side"] = side
        rep["strata"] = strata_section(b, side)
    elif command == "duality":
        rep["duality"] = duality_section(b)
    elif command == "degeneration":
        rep["degeneration"] = degeneration_section(b)
    elif command == "all":
        if b.germ_mode:
            rep["classification"] = classification_section(b)
        rep["curve_invariants"] = invariants_section(b)
        rep["strata"] = {"sp": strata_section(b, "sp"), "so": strata_section(b, "so")}
        rep["duality"] = duality_section(b)
        rep["components"] = components_section(b)
        rep["degeneration"] = _optional(lambda: degeneration_section(b))
        gf = global_fibration(b)
        rep["global_fibration"] = gf if gf is not None else "no statement"
    else:
        raise ValueError(f"unknown command {command!r}")
    return rep


def _optional(fn):
    try:
        return fn()
    except (PreconditionError, ValueError) as exc:
        return {"available": False, "reason": str(exc)}


# ---------------------------------------------------------------------------
# emitters
# ---------------------------------------------------------------------------

def to_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


CSV_COLUMNS = ["divisor", "deg_D", "r", "s", "dim", "torsor_label", "covering_degree", "side"]


def _strata_rows(rep: dict) -> list[dict]:
    st = rep.get("strata")
    if isinstance(st, list):
        return st
    if isinstance(st, dict):
        return st.get("sp", []) + st.get("so", [])
    return []


def to_csv(rep: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for row in _strata_rows(rep):
        w.writerow(row)
    return buf.getvalue()


def _md_table(rows: list[dict], cols: list[str]) -> list[str]:
    out = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
    for r in rows:
        out.append("| " + " | ".join(_md_cell(r.get(c, "")) for c in cols) + " |")
    return out


def _md_cell(x: Any) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, dict):
        return ", ".join(f"{k}={_md_cell(v)}" for k, v in x.items())
    return str(x).replace("|", "\\|")


def to_markdown(rep: dict) -> str:
    lines = [f"# atlas report: {rep['command']}", "",
             f"version {rep['version']}, config {rep['config_hash']}", ""]
    if "classification" in rep:
        c = rep["classification"]
        lines += ["## Classification", "", f"kind: {c['kind']}", ""]
        lines += _md_table(c["zeros"], list(c["zeros"][0].keys()) if c["zeros"] else [])
        lines.append("")
    ci = rep.get("curve_invariants")
    if isinstance(ci, dict) and ci.get("available", True):
        lines += ["## Curve invariants", ""]
        lines += _md_table([ci], list(ci.keys()))
        lines.append("")
    st = rep.get("strata")
    if st is not None:
        groups = {rep.get("side", "sp"): st} if isinstance(st, list) else st
        for side, rows in groups.items():
            lines += [f"## Strata ({side})", ""]
            lines += _md_table(rows, CSV_COLUMNS)
            lines.append("")
    if "duality" in rep:
        lines += ["## Duality", ""]
        lines += _md_table(rep["duality"], ["divisor", "sp", "so", "hecke_iso", "abelian_dual"])
        lines.append("")
    if "components" in rep:
        lines += ["## Components", ""]
        rows = [{"side": k, **v} for k, v in rep["components"].items()]
        lines += _md_table(rows, ["side", "connected", "irreducible"])
        lines.append("")
    deg = rep.get("degeneration")
    if deg is not None:
        lines += ["## First degeneration", ""]
        if isinstance(deg, list):
            lines += _md_table(deg, ["label", "model"])
        else:
            lines.append(f"unavailable: {deg['reason']}")
        lines.append("")
    if "global_fibration" in rep:
        lines += [f"global fibration: {_md_cell(rep['global_fibration'])}", ""]
    return "\n".join(lines)


def emit(rep: dict, fmt: str) -> str:
    if fmt == "json":
        return to_json(rep)
    if fmt == "csv":
        return to_csv(rep)
    if fmt == "md":
        return to_markdown(rep)
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# verification output
# ---------------------------------------------------------------------------

def verify_report(suite: str, m_max: Optional[int], k: int, corrupt: bool = False) -> tuple[dict, bool]:
    summary = run_suite(suite, m_max, k, corrupt=corrupt)
    rep = {
        "tool": "atlas",
        "version": __version__,
        "command": f"verify {suite}",
        "grid": {"m_max": "default" if m_max is None else _s(m_max), "k": _s(k)},
        "passed": summary.passed,
        "cases": [{"suite": c.suite, "case": c.case, "passed": c.passed, "detail": c.detail}
                  for c in summary.cases],
    }
    return rep, summary.passed


def verify_text(rep: dict) -> str:
    lines = []
    for c in rep["cases"]:
        mark = "PASS" if c["passed"] else "FAIL"
        line = f"{mark} {c['suite']}: {c['case']}"
        if not c["passed"]:
            line += f"  [{c['detail']}]"
        lines.append(line)
    total = len(rep["cases"])
    failed = sum(1 for c in rep["cases"] if not c["passed"])
    lines.append(f"{total - failed}/{total} cases passed")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"atlas: error: {message}\n")
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="atlas", description="Exact computations for sl(2)-type Hitchin fibres.")
    p.add_argument("--version", action="version", version=f"atlas {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("-i", "--input", required=True, help="JSON config path")
        sp.add_argument("--format", choices=["md", "json", "csv"], default="md")
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        return sp

    with_input("classify", "classify the base point and list discriminant orders")
    st = with_input("strata", "stratification table for one side")
    st.add_argument("--side", choices=["sp", "so"], default="sp")
    with_input("duality", "compare both sides stratum by stratum")
    with_input("degeneration", "fibre models contributed by each zero")
    with_input("report", "full report")

    v = sub.add_parser("verify", help="run the bundled verification suites")
    v.add_argument("suite", choices=["local", "metrics", "all"])
    v.add_argument("--m-max", type=int, default=None)
    v.add_argument("--k", type=int, default=2)
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.add_argument("--inject-fault", action="store_true",
                   help="corrupt the orthogonal normal form as a negative control")
    return p


def _write(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_PARSE

    if args.command == "verify":
        if args.k < 1 or (args.m_max is not None and args.m_max < 0):
            sys.stderr.write("atlas: error: --k must be positive and --m-max nonnegative\n")
            return EXIT_PARSE
        rep, ok = verify_report(args.suite, args.m_max, args.k, args.inject_fault)
        sys.stdout.write(to_json(rep) if args.format == "json" else verify_text(rep))
        return EXIT_OK if ok else EXIT_VERIFY

    try:
        cfg = parse_config(args.input)
    except ConfigError as exc:
        sys.stderr.write(f"atlas: config error at {exc}\n")
        return EXIT_PARSE
    except ValidationError as exc:
        sys.stderr.write(f"atlas: invalid base point: {exc}\n")
        return EXIT_VALIDATION

    command = "all" if args.command == "report" else args.command
    try:
        rep = run_report(cfg, command, getattr(args, "side", "sp"))
    except (PreconditionError, PrecisionError, ValueError) as exc:
        sys.stderr.write(f"atlas: precondition not met: {exc}\n")
        return EXIT_PRECONDITION
    _write(emit(rep, args.format), args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
