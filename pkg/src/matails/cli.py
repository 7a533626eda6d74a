"""Config-driven experiment runner.

Commands::

    matails simulate --config exp.ini          write replicate windows
    matails limits   --config exp.ini          theoretical measures only
    matails verify   --config exp.ini          empirical vs theoretical table
    matails hill     --config exp.ini --k 500  tail-index report
    matails hill     --sample out.csv --k 500  same, from a sample file

The config is an INI file with one section per concern; any key can be
overridden on the command line with ``--set section.key=value``.  Every
output carries a JSON echo of the resolved config (sidecar ``.meta.json``
for CSV, inline for JSON), which is sufficient to reproduce the run
byte for byte: outputs contain no timestamps and floats are written with
full round-trip precision.

Exit status: 0 success, 2 configuration or validation error, 3 runtime
error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from . import __version__
from .errors import AssumptionError, ParameterError, UnsupportedError
from .estimation import convergence_table, hill, theoretical_tail_measure
from .innovations import ParetoFamily, TailModel
from .limit_measures import UpperRect
from .ma_process import (
    INFINITE,
    CoefficientSeq,
    ExplicitFinite,
    Geometric,
    Polynomial,
    simulate,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

EXAMPLE_CONFIG = """\
[coefficients]
family = geometric          ; explicit | geometric | polynomial
rho = 0.5                   ; geometric ratio
; values = 1, 0.5, 0.25     ; explicit family
; beta = 1.5                ; polynomial decay
m = infinite                ; moving-average order, or "infinite"
; trunc_eps = 2e-8          ; truncation tolerance for m = infinite

[tail]
family = standard_pareto    ; standard_pareto | shifted_pareto
alpha = 1.0
scale = 1.0

[rows]
; one evaluation row per key: "<order j> ; index:threshold, ..."
row0 = 0; 0:1.0
row1 = 1; 0:1.0, 1:1.0

[run]
n = 100000
t = 1000                    ; omit to default to n/1000 (about 1000 exceedances)
; t_grid = 10, 100, 1000   ; used by verify instead of t when present
seed = 42
; window = -1:2             ; simulate window; defaults to the rows' span
; integration_budget = 200000

[output]
path = out.csv
format = csv                ; csv | json
"""


class ConfigError(ValueError):
    pass


@dataclass
class Experiment:
    """Fully parsed and validated experiment description."""

    coeffs: CoefficientSeq
    m: object
    trunc_eps: float | None
    model: TailModel
    rows: list[tuple[int, UpperRect]]
    n: int | None
    t_grid: list[float]
    seed: int
    window: tuple[int, int] | None
    integration_budget: int
    out_path: str | None
    out_format: str
    raw: dict


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _parse_coefficients(sec) -> tuple[CoefficientSeq, object, float | None]:
    family = sec.get("family", "").strip().lower()
    if family == "explicit":
        if "values" not in sec:
            raise ConfigError("explicit coefficients need 'values'")
        coeffs = ExplicitFinite(_floats(sec["values"]))
    elif family == "geometric":
        coeffs = Geometric(float(sec.get("rho", "nan")))
    elif family == "polynomial":
        coeffs = Polynomial(float(sec.get("beta", "nan")))
    else:
        raise ConfigError(f"unknown coefficient family {family!r}")
    m_text = sec.get("m", "").strip().lower()
    if not m_text:
        raise ConfigError("coefficients section needs 'm' (order or 'infinite')")
    if m_text in ("infinite", "inf"):
        m = INFINITE
    else:
        m = int(m_text)
        if m < 0:
            raise ConfigError(f"order m must be nonnegative, got {m}")
    trunc_eps = float(sec["trunc_eps"]) if "trunc_eps" in sec else None
    return coeffs, m, trunc_eps


def _parse_tail(sec) -> TailModel:
    family = sec.get("family", "").strip().lower()
    try:
        fam = ParetoFamily(family)
    except ValueError:
        raise ConfigError(f"unknown tail family {family!r}") from None
    return TailModel(fam, float(sec.get("alpha", "nan")), float(sec.get("scale", "1.0")))


def _parse_row(text: str) -> tuple[int, UpperRect]:
    head, _, body = text.partition(";")
    if not body.strip():
        raise ConfigError(f"row {text!r} must look like '<j>; index:threshold, ...'")
    j = int(head)
    pairs = []
    for tok in body.replace(",", " ").split():
        k, _, a = tok.partition(":")
        pairs.append((int(k), float(a)))
    return j, UpperRect(pairs)


def _parse_window(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    return (int(lo), int(hi)) if sep else (int(lo), int(lo))


def load_experiment(path: str, overrides: list[str]) -> Experiment:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, option = key.partition(".")
        if not (sep and dot and section and option):
            raise ConfigError(f"--set expects section.key=value, got {item!r}")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, option, value)

    if not parser.has_section("coefficients") or not parser.has_section("tail"):
        raise ConfigError("config needs [coefficients] and [tail] sections")
    coeffs, m, trunc_eps = _parse_coefficients(parser["coefficients"])
    model = _parse_tail(parser["tail"])

    rows = []
    if parser.has_section("rows"):
        for key in parser["rows"]:
            rows.append(_parse_row(parser["rows"][key]))

    run = parser["run"] if parser.has_section("run") else {}
    n = int(run["n"]) if "n" in run else None
    if n is not None and n < 1:
        raise ConfigError(f"replicate count must be >= 1, got {n}")
    seed = int(run.get("seed", "0"))
    if "t_grid" in run:
        t_grid = _floats(run["t_grid"])
        if any(b <= a for a, b in zip(t_grid, t_grid[1:])):
            raise ConfigError("t_grid must be strictly increasing")
    elif "t" in run:
        t_grid = [float(run["t"])]
    else:
        t_grid = []
    if any(t < 1.0 for t in t_grid):
        raise ConfigError("tail levels must be >= 1")
    window = _parse_window(run["window"]) if "window" in run else None
    if window and window[0] > window[1]:
        raise ConfigError(f"window is empty: {window}")
    budget = int(run.get("integration_budget", "200000"))
    if budget <= 0:
        raise ConfigError(f"integration_budget must be positive, got {budget}")

    out = parser["output"] if parser.has_section("output") else {}
    out_format = out.get("format", "csv").strip().lower()
    if out_format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {out_format!r}")

    raw = {s: dict(parser[s]) for s in parser.sections()}
    return Experiment(
        coeffs, m, trunc_eps, model, rows, n, t_grid, seed, window,
        budget, out.get("path"), out_format, raw,
    )


def _fmt(value) -> str:
    """Full round-trip text for a cell."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _rect_text(rect: UpperRect) -> str:
    return ",".join(f"{k}:{_fmt(a)}" for k, a in rect.constraints)


def _meta(exp: Experiment, command: str, extra: dict | None = None) -> dict:
    meta = {"command": command, "config": exp.raw, "version": __version__}
    if extra:
        meta.update(extra)
    return meta


def _write_output(exp: Experiment, out_path, columns, rows, meta) -> None:
    """CSV body plus .meta.json sidecar, or a single JSON document."""
    if out_path is None:
        raise ConfigError("no output path: set [output] path or pass --out")
    if exp.out_format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
        with open(f"{out_path}.meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        doc = {
            "meta": meta,
            "columns": list(columns),
            "rows": [[None if v is None else v for v in row] for row in rows],
        }
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _simulation_window(exp: Experiment) -> tuple[int, int]:
    if exp.window is not None:
        return exp.window
    if exp.rows:
        return (
            min(rect.min_index for _, rect in exp.rows),
            max(rect.max_index for _, rect in exp.rows),
        )
    raise ConfigError("no window: set [run] window or provide rows")


def cmd_simulate(exp: Experiment, threads: int) -> int:
    if exp.n is None:
        raise ConfigError("simulate needs [run] n")
    window = _simulation_window(exp)
    batch = simulate(
        exp.coeffs, exp.m, exp.model, window, exp.n, exp.seed, exp.trunc_eps, threads=threads
    )
    rows = []
    for r in range(len(batch)):
        for w in range(batch.matrix.shape[1]):
            v = batch.matrix[r, w]
            if v != 0.0:
                rows.append((r, batch.lo + w, float(v)))
    meta = _meta(exp, "simulate", {
        "seed": exp.seed,
        "truncation_order": batch.truncation_order,
        "window": list(window),
        "n": exp.n,
    })
    _write_output(exp, exp.out_path, ("replicate_id", "index", "value"), rows, meta)
    return EXIT_OK


def cmd_limits(exp: Experiment) -> int:
    if not exp.rows:
        raise ConfigError("limits needs a [rows] section")
    out_rows = []
    for j, rect in exp.rows:
        try:
            mv = theoretical_tail_measure(
                exp.coeffs, exp.m, exp.model.alpha, j, rect,
                exp.trunc_eps, exp.integration_budget, exp.seed,
            )
        except (ParameterError, UnsupportedError) as exc:
            out_rows.append((j, _rect_text(rect), None, None, None, None, str(exc)))
            continue
        value = "+inf (not bounded away)" if mv.is_infinite else mv.value
        out_rows.append(
            (j, _rect_text(rect), value, mv.method.value, mv.stderr,
             mv.truncation_error_bound, mv.note)
        )
    columns = ("j", "rect", "value", "method", "stderr", "truncation_error_bound", "note")
    _write_output(exp, exp.out_path, columns, out_rows, _meta(exp, "limits"))
    return EXIT_OK


def cmd_verify(exp: Experiment, threads: int) -> int:
    if not exp.rows:
        raise ConfigError("verify needs a [rows] section")
    if exp.n is None:
        raise ConfigError("verify needs [run] n")
    # default tail level targets ~1000 exceedances per cell
    t_grid = exp.t_grid or [max(1.0, exp.n / 1000.0)]
    cells = convergence_table(
        exp.coeffs, exp.m, exp.model, exp.rows, exp.n, t_grid, exp.seed,
        exp.trunc_eps, exp.integration_budget, threads,
    )
    out_rows = []
    for t, row in cells:
        if row.error:
            out_rows.append((t, row.j, _rect_text(row.rect)) + (None,) * 8 + (row.error,))
            continue
        emp, theo = row.empirical, row.theoretical
        z = row.z_score
        out_rows.append((
            t, row.j, _rect_text(row.rect),
            emp.value, emp.stderr, emp.count,
            theo.value, theo.stderr,
            row.abs_error,
            None if z is None or math.isinf(z) else z,
            emp.degenerate, None,
        ))
    columns = (
        "t", "j", "rect", "empirical", "empirical_stderr", "count",
        "theoretical", "theoretical_stderr", "abs_error", "z_score",
        "degenerate", "error",
    )
    _write_output(exp, exp.out_path, columns, out_rows, _meta(exp, "verify"))
    return EXIT_OK


def _values_from_sample_file(path: str, index: int) -> list[float]:
    """Reconstruct a coordinate's replicate values from a simulate CSV."""
    try:
        with open(f"{path}.meta.json", "r", encoding="utf-8") as fh:
            n = json.load(fh)["n"]
    except (OSError, KeyError, json.JSONDecodeError):
        n = None
    values: dict[int, float] = {}
    max_id = -1
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["replicate_id", "index", "value"]:
            raise ConfigError(f"{path} is not a simulate output file")
        for rec in reader:
            rid = int(rec["replicate_id"])
            max_id = max(max_id, rid)
            if int(rec["index"]) == index:
                values[rid] = float(rec["value"])
    total = n if n is not None else max_id + 1
    return [values.get(r, 0.0) for r in range(total)]


def cmd_hill(exp: Experiment | None, sample: str | None, k: int, index: int, threads: int,
             out_path: str | None) -> int:
    if sample is not None:
        vals = _values_from_sample_file(sample, index)
        source = sample
    else:
        if exp is None:
            raise ConfigError("hill needs --sample or --config")
        if exp.n is None:
            raise ConfigError("hill from config needs [run] n")
        window = exp.window if exp.window is not None else (index, index)
        batch = simulate(
            exp.coeffs, exp.m, exp.model, window, exp.n, exp.seed, exp.trunc_eps,
            threads=threads,
        )
        col = index - batch.lo
        if not 0 <= col < batch.matrix.shape[1]:
            raise ConfigError(f"index {index} lies outside the simulated window")
        vals = batch.matrix[:, col].tolist()
        source = "config"
    alpha_hat = hill(vals, k)
    report = {"alpha_hat": alpha_hat, "k": k, "n": len(vals), "index": index, "source": source}
    print(f"alpha_hat = {alpha_hat!r}  (k = {k}, n = {len(vals)}, index = {index})")
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matails",
        description="Simulate heavy-tailed moving averages and verify their tail-measure limits.",
        epilog="Run 'matails example-config' to print a template config file.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        p.add_argument("--config", required=needs_config, help="INI experiment file")
        p.add_argument("--set", action="append", default=[], metavar="SECTION.KEY=VALUE",
                       help="override a config entry (repeatable)")
        p.add_argument("--threads", type=int, default=1, help="worker cap (output-invariant)")
        p.add_argument("--out", help="output path (overrides [output] path)")
        p.add_argument("--format", choices=("csv", "json"),
                       help="output format (overrides [output] format)")

    common(sub.add_parser("simulate", help="write replicate windows to a sample file"))
    common(sub.add_parser("limits", help="evaluate the theoretical measures only"))
    common(sub.add_parser("verify", help="empirical vs theoretical comparison table"))
    p_hill = sub.add_parser("hill", help="tail-index estimate from a sample file or config")
    common(p_hill, needs_config=False)
    p_hill.add_argument("--sample", help="CSV produced by the simulate command")
    p_hill.add_argument("--k", type=int, required=True, help="number of top order statistics")
    p_hill.add_argument("--index", type=int, default=0, help="sequence index to estimate on")
    sub.add_parser("example-config", help="print a template config file")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "example-config":
        print(EXAMPLE_CONFIG, end="")
        return EXIT_OK
    try:
        exp = None
        if args.config:
            exp = load_experiment(args.config, args.set)
            if args.out:
                exp.out_path = args.out
            if args.format:
                exp.out_format = args.format
        if args.command == "simulate":
            return cmd_simulate(exp, args.threads)
        if args.command == "limits":
            return cmd_limits(exp)
        if args.command == "verify":
            return cmd_verify(exp, args.threads)
        return cmd_hill(exp, args.sample, args.k, args.index, args.threads, args.out)
    except (ConfigError, ParameterError, AssumptionError, UnsupportedError,
            configparser.Error, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
