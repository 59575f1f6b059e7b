"""Command-line front end.

    semiquasi compute <input> [--connection lc|ssmc] [--report ...] [--format text|json|latex]
    semiquasi corpus <name>

Exit status: 0 when every requested check passes, 1 when a verification
fails, 2 on unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .chart import ChartError, ChartSpec, load_spec
from .classify import ClassificationReport, classify, identity_suite
from .connection import ConnectionKind, connection, metric_compatibility, torsion
from .corpus import BUILTIN, UnknownCorpusError, corpus_document, load_corpus
from .curvature import DEFAULT_RICCI_SIGN, RICCI_SIGNS, curvature
from .expr import ExprError, latex_symbol, to_latex, to_text
from .verdict import CheckResult, Verdict, check_tensor

REPORTS = ("christoffel", "riemann", "ricci", "classify", "all")


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    input: str
    connection: str = "lc"
    report: str = "all"
    format: str = "text"
    points: int = 16
    seed: int = 42
    tol: float = 1e-9
    ricci_sign: str = DEFAULT_RICCI_SIGN


def resolve_input(name: str) -> ChartSpec:
    path = Path(name)
    if name in BUILTIN and not path.exists():
        return load_corpus(name)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot open {name}: {exc.strerror or exc}") from None
    return load_spec(data)


def _default_tol() -> float:
    raw = os.environ.get("SQE_TOL")
    if raw is None:
        return 1e-9
    try:
        tol = float(raw)
    except ValueError:
        raise InputError(f"SQE_TOL is not a number: {raw!r}") from None
    if not tol > 0:
        raise InputError("SQE_TOL must be positive")
    return tol


def _entries(t, skip_zero=True):
    return [(idx, e) for idx, e in t.items() if not (skip_zero and e.is_zero_constant())]


def build_report(config: RunConfig) -> tuple[dict, bool]:
    """Run the pipeline; returns ``(report, failed)``."""
    chart = resolve_input(config.input)
    zc = chart.zero_config(config.points, config.seed, config.tol)
    kind = ConnectionKind(config.connection)
    if kind is ConnectionKind.SEMI_SYMMETRIC:
        chart.require_one_form()
    want = {config.report} if config.report != "all" else set(REPORTS)

    conn = connection(chart, kind, check=False)
    bundle = curvature(chart, kind, config.ricci_sign)
    tables: dict = {}
    if "christoffel" in want:
        tables["christoffel"] = _entries(conn.gamma)
    if "riemann" in want:
        tables["riemann"] = _entries(bundle.riemann)
    if "ricci" in want:
        tables["ricci"] = bundle.ricci.as_matrix()

    if chart.has_one_form:
        checks = identity_suite(chart, zc, config.ricci_sign)
    else:
        ok, worst, failure = metric_compatibility(conn, zc)
        checks = [
            CheckResult(
                "metric_lc",
                Verdict.PASS if ok else Verdict.FAIL,
                worst,
                None if failure is None else {"index": list(failure[0])},
            ),
            check_tensor("torsion_lc", torsion(conn), zc),
        ]
    classification = None
    if "classify" in want:
        classification = classify(chart, zc, config.ricci_sign)
    failed = any(c.verdict is Verdict.FAIL for c in checks) or bool(classification and classification.failed)
    return {
        "chart": chart,
        "connection": kind,
        "tables": tables,
        "classification": classification,
        "checks": checks,
    }, failed


# -- rendering ------------------------------------------------------------------------


def render_json(report: dict) -> str:
    chart: ChartSpec = report["chart"]
    tables = {}
    for name, value in report["tables"].items():
        if name == "ricci":
            tables[name] = [[to_text(e) for e in row] for row in value]
        else:
            tables[name] = [{"indices": list(idx), "expr": to_text(e)} for idx, e in value]
    cls: ClassificationReport | None = report["classification"]
    doc = {
        "chart": chart.to_document(),
        "connection": report["connection"].value,
        "tables": tables,
        "classification": None if cls is None else cls.to_json(),
        "residual_summaries": [c.summary() for c in report["checks"]],
    }
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _index_names(chart, idx, split):
    names = [chart.coordinates[i] for i in idx]
    return names[:split], names[split:]


def render_text(report: dict) -> str:
    chart: ChartSpec = report["chart"]
    kind = report["connection"]
    bar = "bar" if kind is ConnectionKind.SEMI_SYMMETRIC else ""
    lines = [f"chart {chart.name} ({', '.join(chart.coordinates)}), connection {kind.value}"]
    tables = report["tables"]
    if "christoffel" in tables:
        lines.append("")
        lines.append("Christoffel symbols (nonzero):")
        for idx, e in tables["christoffel"]:
            up, down = _index_names(chart, idx, 1)
            lines.append(f"  Gamma{bar}[{up[0]}; {', '.join(down)}] = {to_text(e)}")
    if "riemann" in tables:
        lines.append("")
        lines.append("Riemann tensor R[l; i, j, k] (nonzero):")
        for idx, e in tables["riemann"]:
            up, down = _index_names(chart, idx, 1)
            lines.append(f"  R{bar}[{up[0]}; {', '.join(down)}] = {to_text(e)}")
    if "ricci" in tables:
        lines.append("")
        lines.append("Ricci tensor:")
        n = chart.dim
        for i in range(n):
            for j in range(n):
                lines.append(f"  S{bar}[{chart.coordinates[i]}, {chart.coordinates[j]}] = {to_text(tables['ricci'][i][j])}")
    lines.append("")
    lines.append("Checks:")
    for c in report["checks"]:
        lines.append(f"  {c.name}: {c.verdict.value} (max residual {c.max_residual:.3g})")
    cls = report["classification"]
    if cls is not None:
        doc = cls.to_json()
        lines.append("")
        lines.append("Classification:")
        for k, v in doc["flags"].items():
            lines.append(f"  {k}: {v}")
        lines.append("Witnesses:")
        for k, v in doc["witnesses"].items():
            lines.append(f"  {k} = {v}")
        lines.append("Theorems:")
        for k, v in doc["theorems"].items():
            lines.append(f"  {k}: {v}")
        for note in doc["notes"]:
            lines.append(f"  note: {note}")
    return "\n".join(lines) + "\n"


def render_latex(report: dict) -> str:
    chart: ChartSpec = report["chart"]
    kind = report["connection"]
    sym = latex_symbol
    g = r"\bar{\Gamma}" if kind is ConnectionKind.SEMI_SYMMETRIC else r"\Gamma"
    r = r"\bar{R}" if kind is ConnectionKind.SEMI_SYMMETRIC else "R"
    s = r"\bar{S}" if kind is ConnectionKind.SEMI_SYMMETRIC else "S"
    out = []
    tables = report["tables"]
    if "christoffel" in tables:
        out.append(r"\begin{align*}")
        rows = []
        for idx, e in tables["christoffel"]:
            up, down = _index_names(chart, idx, 1)
            rows.append(f"{g}^{{{sym(up[0])}}}_{{{' '.join(sym(d) for d in down)}}} &= {to_latex(e)}")
        out.append(" \\\\\n".join(rows))
        out.append(r"\end{align*}")
    if "riemann" in tables:
        out.append(r"\begin{align*}")
        rows = []
        for idx, e in tables["riemann"]:
            up, down = _index_names(chart, idx, 1)
            rows.append(f"{r}^{{{sym(up[0])}}}_{{{' '.join(sym(d) for d in down)}}} &= {to_latex(e)}")
        out.append(" \\\\\n".join(rows))
        out.append(r"\end{align*}")
    if "ricci" in tables:
        out.append(f"{s} = " + r"\begin{pmatrix}")
        out.append(" \\\\\n".join(" & ".join(to_latex(e) for e in row) for row in tables["ricci"]))
        out.append(r"\end{pmatrix}")
    return "\n".join(out) + "\n"


RENDERERS = {"text": render_text, "json": render_json, "latex": render_latex}


# -- entry point -----------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semiquasi", description="Connections, curvature and S(QE^n) classification.")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", help="compute tables and checks for a chart")
    c.add_argument("input", help="spec file path or built-in chart name")
    c.add_argument(
        "--connection",
        choices=[k.value for k in ConnectionKind],
        default="lc",
        help="Levi-Civita or semi-symmetric metric connection (default: lc)",
    )
    c.add_argument("--report", choices=REPORTS, default="all", help="which tables to include (default: all)")
    c.add_argument("--format", choices=sorted(RENDERERS), default="text")
    c.add_argument("--points", type=int, default=16, help="sample points per numeric zero test")
    c.add_argument("--seed", type=int, default=42, help="sampling seed")
    c.add_argument("--tol", type=float, default=None, help="zero-test tolerance (default: $SQE_TOL or 1e-9)")
    c.add_argument(
        "--ricci-sign",
        choices=sorted(RICCI_SIGNS),
        default=DEFAULT_RICCI_SIGN,
        help="overall sign of the Ricci contraction (default: %(default)s)",
    )
    e = sub.add_parser("corpus", help="print the spec file of a built-in chart")
    e.add_argument("name")
    return p


def _fail(message: str) -> int:
    print(f"semiquasi: {message}", file=sys.stderr)
    return 2


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "corpus":
        try:
            sys.stdout.buffer.write(corpus_document(args.name))
        except UnknownCorpusError as exc:
            return _fail(str(exc))
        sys.stdout.flush()
        return 0
    try:
        tol = args.tol if args.tol is not None else _default_tol()
        if args.points < 1:
            raise InputError("--points must be at least 1")
        config = RunConfig(
            args.input, args.connection, args.report, args.format, args.points, args.seed, tol, args.ricci_sign
        )
        report, failed = build_report(config)
    except (InputError, ChartError, ExprError) as exc:
        return _fail(str(exc).splitlines()[0])
    sys.stdout.buffer.write(RENDERERS[config.format](report).encode("utf-8"))
    sys.stdout.flush()
    return 1 if failed else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
