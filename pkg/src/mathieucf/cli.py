"""Command-line interface: evaluate enclosures, tabulate bounds, compare
independent routes, benchmark, and run the invariant suite.

Subcommands
    eval      certified enclosure of S(r) (plus optional extra methods)
    bounds    classical and fraction-derived bounds side by side
    compare   cross-check the independent routes at each r
    bench     term counts and wall time, direct summation vs fraction
    apery     approximants of the zeta(3) fraction
    selftest  run the built-in invariant checks

Common flags: ``--r`` takes a single value, a comma list, or
``start:stop:count`` (with ``--log`` for geometric spacing); ``--format``
selects table/json/csv; ``--output`` writes to a file instead of stdout.

Exit codes: 0 success; 1 when a result is only partial (an invariant
failed, or a requested tolerance was not certified within the term cap);
2 for configuration errors, in which case nothing is written to --output.

JSON and CSV outputs serialize floats via ``repr``, which round-trips
bit-exactly; a parsed output file reproduces the in-memory rows.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import statistics
import sys
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__, bounds, oracles, series
from .selftest import run_selftest

__all__ = [
    "ConfigError",
    "RunConfig",
    "main",
    "run",
    "rows_to_csv",
    "csv_to_rows",
    "payload_to_json",
    "rows_to_table",
]

SCHEMA_VERSION = 1

Row = Dict[str, Any]


class ConfigError(ValueError):
    """Invalid command-line configuration (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand run depends on, echoed into JSON output."""

    command: str
    r_values: Tuple[float, ...] = (1.0,)
    k: int = 2
    l: int = 1
    tol: float = 1e-12
    max_terms: int = 200_000
    methods: Tuple[str, ...] = ("cf", "direct")
    n_terms: int = 60
    k_values: Tuple[int, ...] = (1, 2, 3, 5)
    repeats: int = 5
    force_fail: bool = False
    format: str = "table"
    output: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        d = {
            "command": self.command,
            "r_values": list(self.r_values),
            "k": self.k,
            "l": self.l,
            "tol": self.tol,
            "max_terms": self.max_terms,
            "methods": list(self.methods),
            "n_terms": self.n_terms,
            "k_values": list(self.k_values),
            "repeats": self.repeats,
            "force_fail": self.force_fail,
            "format": self.format,
            "output": self.output,
        }
        return d


def parse_r_values(text: str, log_spacing: bool) -> Tuple[float, ...]:
    """Parse --r: '2', '0.5,1,2', or 'start:stop:count' (count >= 2)."""

    def one(tok: str) -> float:
        try:
            v = float(tok)
        except ValueError:
            raise ConfigError(f"invalid r value {tok!r}") from None
        if math.isnan(v) or math.isinf(v):
            raise ConfigError(f"r must be finite; got {tok!r}")
        return v

    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range must be start:stop:count; got {text!r}")
        start, stop = one(parts[0]), one(parts[1])
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"range count must be an integer; got {parts[2]!r}") from None
        if count < 2:
            raise ConfigError(f"range count must be >= 2; got {count}")
        if log_spacing:
            if start <= 0 or stop <= 0:
                raise ConfigError("--log spacing requires positive endpoints")
            lo, hi = math.log(start), math.log(stop)
            return tuple(math.exp(lo + (hi - lo) * i / (count - 1)) for i in range(count))
        return tuple(start + (stop - start) * i / (count - 1) for i in range(count))
    if "," in text:
        return tuple(one(tok) for tok in text.split(",") if tok.strip())
    return (one(text),)


def _require_positive(r_values: Sequence[float], command: str):
    for r in r_values:
        if not (r > 0):
            raise ConfigError(f"{command} requires r > 0; got r={r!r}")


# ---------------------------------------------------------------------------
# subcommands: each returns (rows, exit_code)


def _timed(fn: Callable[[], Any]) -> Tuple[Any, int]:
    start = time.perf_counter_ns()
    result = fn()
    return result, time.perf_counter_ns() - start


def cmd_eval(cfg: RunConfig) -> Tuple[List[Row], int]:
    known = {"cf", "direct", "trigamma", "integral", "asymptotic"}
    unknown = set(cfg.methods) - known
    if unknown:
        raise ConfigError(f"unknown method(s): {', '.join(sorted(unknown))}")
    for r in cfg.r_values:
        if not (r >= 0):
            raise ConfigError(f"eval requires r >= 0; got r={r!r}")
    rows: List[Row] = []
    exit_code = 0

    def add(r, method, *, lower=None, upper=None, value=None, terms=None, t_ns=None, note=""):
        width = upper - lower if lower is not None and upper is not None else None
        if value is None and lower is not None:
            value = 0.5 * (lower + upper)
        rows.append(
            {
                "r": r,
                "method": method,
                "lower": lower,
                "upper": upper,
                "value": value,
                "width": width,
                "terms_used": terms,
                "time_ns": t_ns,
                # Empty strings are reserved for None in CSV cells, so notes
                # are either absent or non-empty.
                "note": note or None,
            }
        )

    for r in cfg.r_values:
        methods = list(cfg.methods)
        if r == 0 and "cf" in methods:
            # The fraction needs r > 0; serve the limit by direct summation.
            methods = [m for m in methods if m != "cf"]
            if "direct" not in methods:
                methods.insert(0, "direct")
            add(r, "cf", note="skipped: fraction requires r > 0; see direct row")
        for method in methods:
            try:
                if method == "cf":
                    (enc, terms, achieved), t_ns = _timed(
                        lambda: series.theorem1_to_width(r, cfg.k, cfg.tol, cfg.max_terms)
                    )
                    note = ""
                    if not achieved:
                        note = (
                            f"tolerance not certified: width {enc.width:.3e} "
                            f"at the {cfg.max_terms}-term cap"
                        )
                        exit_code = max(exit_code, 1)
                    add(r, "cf", lower=enc.lower, upper=enc.upper, terms=terms,
                        t_ns=t_ns, note=note)
                elif method == "direct":
                    enc, t_ns = _timed(lambda: series.mathieu_direct(r, cfg.tol))
                    add(r, "direct", lower=enc.lower, upper=enc.upper, t_ns=t_ns)
                elif method == "trigamma":
                    value, t_ns = _timed(lambda: oracles.mathieu_trigamma(r))
                    add(r, "trigamma", value=value, t_ns=t_ns)
                elif method == "integral":
                    tol = max(cfg.tol, 1e-10)
                    note = "" if tol == cfg.tol else "tolerance floored at 1e-10"
                    value, t_ns = _timed(lambda: oracles.mathieu_integral(r, tol))
                    add(r, "integral", value=value, t_ns=t_ns, note=note)
                elif method == "asymptotic":
                    result, t_ns = _timed(lambda: series.asymptotic(r))
                    note = f"first omitted term {result.first_omitted_term:.3e}"
                    add(r, "asymptotic", value=result.value, terms=result.terms_used,
                        t_ns=t_ns, note=note)
            except ValueError as exc:
                add(r, method, note=f"failed: {exc}")
                exit_code = max(exit_code, 1)
    rows.sort(key=lambda row: (row["r"], row["method"]))
    return rows, exit_code


_BOUND_METHODS = ("makai", "alzer", "mp", "cf", "closed2", "closed3")


def cmd_bounds(cfg: RunConfig) -> Tuple[List[Row], int]:
    _require_positive(cfg.r_values, "bounds")
    rows: List[Row] = []
    for r in sorted(cfg.r_values):
        s_ref = series.theorem1_to_width(r, 3, 1e-12, cfg.max_terms)[0].midpoint
        results = {
            "makai": bounds.makai_bounds(r),
            "alzer": bounds.alzer_bounds(r),
            "mp": bounds.mp_upper(r),
            "cf": bounds.cf_bounds(r, cfg.k, cfg.l),
            "closed2": bounds.closed_form_bounds(r, 2),
            "closed3": bounds.closed_form_bounds(r, 3),
        }
        row: Row = {"r": r, "s_ref": s_ref}
        for name in _BOUND_METHODS:
            b = results[name]
            row[f"{name}_lower"] = b.lower
            row[f"{name}_upper"] = b.upper
            row[f"{name}_gap_lower"] = None if b.lower is None else s_ref - b.lower
            row[f"{name}_gap_upper"] = None if b.upper is None else b.upper - s_ref
        row["tightest_lower"] = max(
            (name for name in _BOUND_METHODS if results[name].lower is not None),
            key=lambda name: results[name].lower,
        )
        row["tightest_upper"] = min(
            (name for name in _BOUND_METHODS if results[name].upper is not None),
            key=lambda name: results[name].upper,
        )
        rows.append(row)
    return rows, 0


def cmd_compare(cfg: RunConfig) -> Tuple[List[Row], int]:
    _require_positive(cfg.r_values, "compare")
    rows: List[Row] = []
    exit_code = 0
    budget = max(10 * cfg.tol, 2e-9)
    for r in sorted(cfg.r_values):
        enc = series.theorem1_to_width(r, cfg.k, cfg.tol, cfg.max_terms)[0]
        direct = series.mathieu_direct(r, cfg.tol)
        tri = oracles.mathieu_trigamma(r)
        integral = oracles.mathieu_integral(r, max(cfg.tol, 1e-10))
        asym = series.asymptotic(r)
        core = [enc.midpoint, direct.midpoint, tri, integral]
        spread = max(core) - min(core)
        note = ""
        if spread > budget:
            note = f"routes disagree beyond budget {budget:.1e}"
            exit_code = 1
        rows.append(
            {
                "r": r,
                "cf": enc.midpoint,
                "direct": direct.midpoint,
                "trigamma": tri,
                "integral": integral,
                "spread": spread,
                "asymptotic": asym.value,
                "asymptotic_first_omitted": asym.first_omitted_term,
                "note": note or None,
            }
        )
    return rows, exit_code


def _median_seconds(fn: Callable[[], Any], repeats: int) -> float:
    times = []
    for _ in range(max(1, repeats)):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def _direct_terms_for_tol(r: float, tol: float) -> int:
    """Smallest M with the one-sided remainder bound 1/(M^2+r^2) <= tol."""
    target = 1 / tol - r * r
    if target <= 0:
        return 1
    M = max(1, math.isqrt(int(target)))
    while 1 / (M * M + r * r) > tol:
        M += 1
    while M > 1 and 1 / ((M - 1) ** 2 + r * r) <= tol:
        M -= 1
    return M


def cmd_bench(cfg: RunConfig) -> Tuple[List[Row], int]:
    _require_positive(cfg.r_values, "bench")
    rows: List[Row] = []
    for r in sorted(cfg.r_values):
        rr = r * r
        M = _direct_terms_for_tol(r, cfg.tol)

        def direct_run():
            return math.fsum(2 * m / (m * m + rr) ** 2 for m in range(1, M + 1))

        direct_seconds = _median_seconds(direct_run, cfg.repeats)
        rows.append(
            {
                "r": r,
                "method": "direct_sum",
                "tol": cfg.tol,
                "terms": M,
                "median_seconds": direct_seconds,
                "terms_ratio": 1.0,
                "note": None,
            }
        )
        for k in cfg.k_values:
            enc, terms, achieved = series.theorem1_to_width(r, k, cfg.tol, cfg.max_terms)
            seconds = _median_seconds(
                lambda: series.theorem1_to_width(r, k, cfg.tol, cfg.max_terms),
                cfg.repeats,
            )
            note = "" if achieved else f"width {enc.width:.3e} at the term cap"
            rows.append(
                {
                    "r": r,
                    "method": f"cf(k={k})",
                    "tol": cfg.tol,
                    "terms": terms,
                    "median_seconds": seconds,
                    "terms_ratio": M / terms,
                    "note": note or None,
                }
            )
    rows.sort(key=lambda row: (row["r"], row["method"]))
    return rows, 0


def cmd_apery(cfg: RunConfig) -> Tuple[List[Row], int]:
    if cfg.n_terms < 1:
        raise ConfigError(f"--n-terms must be >= 1; got {cfg.n_terms}")
    z3 = oracles.zeta3_reference()
    rows = []
    for n in range(1, cfg.n_terms + 1):
        value = oracles.apery_cf(n)
        rows.append(
            {
                "n": n,
                "value": value,
                "abs_error": abs(value - z3),
                "side": "above" if value > z3 else "below",
            }
        )
    return rows, 0


def cmd_selftest(cfg: RunConfig) -> Tuple[List[Row], int]:
    report = run_selftest(force_fail=cfg.force_fail)
    rows = [
        {
            "check": res.name,
            "status": "pass" if res.ok else "FAIL",
            "seconds": round(res.seconds, 6),
            "detail": res.detail,
        }
        for res in report.results
    ]
    return rows, 0 if report.ok else 1


_COMMANDS = {
    "eval": cmd_eval,
    "bounds": cmd_bounds,
    "compare": cmd_compare,
    "bench": cmd_bench,
    "apery": cmd_apery,
    "selftest": cmd_selftest,
}


# ---------------------------------------------------------------------------
# serialization


def _columns(rows: List[Row]) -> List[str]:
    cols: List[str] = []
    for row in rows:
        for key in row:
            if key not in cols:
                cols.append(key)
    return cols


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(rows: List[Row]) -> str:
    """Serialize rows to CSV; floats via repr, so parsing is bit-exact."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = _columns(rows)
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_csv_cell(row.get(col)) for col in cols])
    return buf.getvalue()


_INT_RE = re.compile(r"^-?\d+$")


def _csv_uncell(text: str) -> Any:
    if text == "":
        return None
    if _INT_RE.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def csv_to_rows(text: str) -> List[Row]:
    """Inverse of ``rows_to_csv`` for the cell types this package emits."""
    reader = csv.reader(io.StringIO(text))
    try:
        cols = next(reader)
    except StopIteration:
        return []
    return [{col: _csv_uncell(cell) for col, cell in zip(cols, row)} for row in reader]


def payload_to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _table_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def rows_to_table(rows: List[Row]) -> str:
    """Human-readable aligned columns (floats shortened to 12 digits)."""
    if not rows:
        return "(no rows)\n"
    cols = _columns(rows)
    cells = [[_table_cell(row.get(col)) for col in cols] for row in rows]
    widths = [
        max(len(col), *(len(line[i]) for line in cells)) for i, col in enumerate(cols)
    ]
    lines = ["  ".join(col.ljust(widths[i]) for i, col in enumerate(cols)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for line in cells:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip())
    return "\n".join(lines) + "\n"


def render(cfg: RunConfig, rows: List[Row]) -> str:
    if cfg.format == "json":
        payload = {
            "version": {"schema": SCHEMA_VERSION, "package": __version__},
            "config": cfg.to_dict(),
            "rows": rows,
        }
        return payload_to_json(payload)
    if cfg.format == "csv":
        return rows_to_csv(rows)
    return rows_to_table(rows)


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mathieucf",
        description="Certified enclosures and bounds for S(r) = sum 2m/(m^2+r^2)^2.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_r: str = "1"):
        p.add_argument("--r", default=default_r,
                       help="r value, comma list, or start:stop:count range")
        p.add_argument("--log", action="store_true",
                       help="geometric spacing for start:stop:count ranges")
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")
        p.add_argument("--output", help="write output to this file instead of stdout")

    p = sub.add_parser("eval", help="certified enclosure of S(r)")
    common(p)
    p.add_argument("--k", type=int, default=2, help="series split point (k >= 1)")
    p.add_argument("--tol", type=float, default=1e-12, help="target enclosure width")
    p.add_argument("--max-terms", type=int, default=200_000,
                   help="term cap for the adaptive fraction")
    p.add_argument("--methods", default="cf,direct",
                   help="comma list from cf,direct,trigamma,integral,asymptotic")

    p = sub.add_parser("bounds", help="bound methods side by side")
    common(p)
    p.add_argument("--k", type=int, default=2, help="split point for the cf bounds column")
    p.add_argument("--l", type=int, default=1,
                   help="bracketing pairs for the cf bounds column")

    p = sub.add_parser("compare", help="independent routes to S(r)")
    common(p)
    p.add_argument("--k", type=int, default=3, help="split point for the fraction route")
    p.add_argument("--tol", type=float, default=1e-10, help="per-route tolerance")
    p.add_argument("--max-terms", type=int, default=200_000)

    p = sub.add_parser("bench", help="direct summation vs fraction cost")
    common(p)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--k-values", default="1,2,3,5",
                   help="comma list of split points to benchmark")
    p.add_argument("--repeats", type=int, default=5,
                   help="timing repetitions (median reported)")
    p.add_argument("--max-terms", type=int, default=200_000)

    p = sub.add_parser("apery", help="approximants of the zeta(3) fraction")
    p.add_argument("--n-terms", type=int, default=60)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--output")

    p = sub.add_parser("selftest", help="run the built-in invariant checks")
    p.add_argument("--force-fail", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--output")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    kwargs: Dict[str, Any] = {"command": args.command, "format": args.format,
                              "output": args.output}
    if hasattr(args, "r"):
        kwargs["r_values"] = parse_r_values(args.r, getattr(args, "log", False))
    if hasattr(args, "k"):
        if args.k < 1:
            raise ConfigError(f"--k must be >= 1; got {args.k}")
        kwargs["k"] = args.k
    if hasattr(args, "l"):
        if args.l < 1:
            raise ConfigError(f"--l must be >= 1; got {args.l}")
        kwargs["l"] = args.l
    if hasattr(args, "tol"):
        if not (args.tol > 0):
            raise ConfigError(f"--tol must be > 0; got {args.tol!r}")
        kwargs["tol"] = args.tol
    if hasattr(args, "max_terms"):
        if args.max_terms < 2:
            raise ConfigError(f"--max-terms must be >= 2; got {args.max_terms}")
        kwargs["max_terms"] = args.max_terms
    if hasattr(args, "methods"):
        methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
        if not methods:
            raise ConfigError("--methods must name at least one method")
        kwargs["methods"] = methods
    if hasattr(args, "k_values"):
        try:
            k_values = tuple(int(tok) for tok in args.k_values.split(",") if tok.strip())
        except ValueError:
            raise ConfigError(f"invalid --k-values {args.k_values!r}") from None
        if not k_values or any(k < 1 for k in k_values):
            raise ConfigError(f"--k-values must be positive integers; got {args.k_values!r}")
        kwargs["k_values"] = k_values
    if hasattr(args, "repeats"):
        if args.repeats < 1:
            raise ConfigError(f"--repeats must be >= 1; got {args.repeats}")
        kwargs["repeats"] = args.repeats
    if hasattr(args, "n_terms"):
        kwargs["n_terms"] = args.n_terms
    if hasattr(args, "force_fail"):
        kwargs["force_fail"] = args.force_fail
    return RunConfig(**kwargs)


def run(cfg: RunConfig) -> Tuple[List[Row], int, str]:
    """Execute a config: returns (rows, exit_code, rendered_output)."""
    rows, exit_code = _COMMANDS[cfg.command](cfg)
    return rows, exit_code, render(cfg, rows)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        rows, exit_code, text = run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        try:
            with open(cfg.output, "w") as fp:
                fp.write(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.output!r}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return exit_code
