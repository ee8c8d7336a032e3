"""Command-line front end: single-point bound evaluation, parameter sweeps,
figure-style presets, and CSV/JSON emission.

The math core works in normalized radians per sample; Hz enters only through
the optional --f-int conversion.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import benchmarks, mapsim, testpoints, wwb
from .numerics import QuadratureError, QuadratureSpec
from .prior import VonMisesPrior
from .signal_model import SignalConfig
from .testpoints import TestPointConfig

__all__ = ["SweepSpec", "run_sweep", "emit", "main"]

CSV_COLUMNS = [
    "kind", "snr_db", "k", "kappa", "mu_rad", "s", "trio",
    "value_rad2", "value_db", "extra",
]

KINDS = ("WWB", "BCRB", "ZZB", "MAP")


class SpecError(ValueError):
    """Sweep/flag validation failure; carries the offending field name."""

    def __init__(self, fieldname: str, message: str):
        super().__init__(f"invalid {fieldname}: {message}")
        self.fieldname = fieldname


class GridPointError(RuntimeError):
    """Numerical failure at a specific grid point."""


@dataclass
class SweepSpec:
    snr_db: list[float]
    k_values: list[int]
    kappa_values: list[float]
    mu_values: list[float]
    bound_kinds: list[str]
    trios: list[tuple[int, int, int]] = field(default_factory=lambda: [(2, 9, 10)])
    s_grid: list[float] = field(default_factory=lambda: [0.5])
    seed: int = 0
    trials: int = 10_000
    mc_grid_size: int = 4096
    quad_nodes: int = 32
    f_int_hz: float | None = None
    output_path: str = "-"
    output_format: str = "csv"

    def validate(self):
        if not self.snr_db:
            raise SpecError("snr_db", "empty SNR grid")
        if any(not (-45.0 <= v <= 30.0) for v in self.snr_db):
            raise SpecError("snr_db", "values must lie within [-45, 30] dB")
        if not self.k_values:
            raise SpecError("k_values", "empty list")
        if any(k < 1 for k in self.k_values):
            raise SpecError("k_values", "K must be >= 1")
        if not self.kappa_values:
            raise SpecError("kappa_values", "empty list")
        if any(k < 0 for k in self.kappa_values):
            raise SpecError("kappa_values", "kappa must be >= 0")
        if not self.mu_values:
            raise SpecError("mu_values", "empty list")
        if any(not (-math.pi <= m <= math.pi) for m in self.mu_values):
            raise SpecError("mu_values", "mu must lie in [-pi, pi]")
        if not self.bound_kinds:
            raise SpecError("bound_kinds", "empty list")
        if any(k not in KINDS for k in self.bound_kinds):
            raise SpecError("bound_kinds", f"kinds must be a subset of {KINDS}")
        if not self.s_grid or any(not (0.0 < s < 1.0) for s in self.s_grid):
            raise SpecError("s_grid", "values must lie in (0, 1)")
        if not self.trios:
            raise SpecError("testpoint_trio", "empty list")
        if self.trials < 1:
            raise SpecError("trials", "must be >= 1")
        if self.output_format not in ("csv", "json"):
            raise SpecError("output_format", "must be csv or json")


def _trio_str(trio: tuple[int, int, int]) -> str:
    return f"{trio[0]},{trio[1]},{trio[2]}"


def _row(kind, snr_db, k, kappa, mu, s, trio, value, extra):
    return {
        "kind": kind,
        "snr_db": float(snr_db),
        "k": int(k),
        "kappa": float(kappa),
        "mu_rad": float(mu),
        "s": None if s is None else float(s),
        "trio": "" if trio is None else _trio_str(trio),
        "value_rad2": float(value),
        "value_db": 10.0 * math.log10(value),
        "extra": extra or {},
    }


def _maybe_add_hz(row: dict, f_int_hz: float | None):
    if f_int_hz is not None:
        # f_IF = theta * f_INT / (2 pi); RMS error converted the same way
        row["extra"]["rmse_hz"] = math.sqrt(row["value_rad2"]) * f_int_hz / (2.0 * math.pi)
    return row


def run_sweep(spec: SweepSpec) -> list[dict]:
    """Evaluate the Cartesian product of sweep axes; one row per (kind, point)."""
    spec.validate()
    quad = QuadratureSpec(node_count=spec.quad_nodes)
    rows: list[dict] = []
    point_index = 0
    for kind in spec.bound_kinds:
        for k in spec.k_values:
            for kappa in spec.kappa_values:
                for mu in spec.mu_values:
                    prior = VonMisesPrior(mu=mu, kappa=kappa)
                    point_sets = {}
                    if kind == "WWB":
                        for trio in spec.trios:
                            point_sets[trio] = testpoints.build(
                                TestPointConfig(*trio), k
                            )
                    for snr_db in spec.snr_db:
                        snr = 10.0 ** (snr_db / 10.0)
                        where = f"kind={kind} K={k} kappa={kappa} mu={mu} snr_db={snr_db}"
                        try:
                            rows.extend(
                                _eval_point(
                                    kind, spec, quad, prior, k, kappa, mu,
                                    snr_db, snr, point_sets, point_index,
                                )
                            )
                        except (QuadratureError, OverflowError, RuntimeError) as err:
                            raise GridPointError(f"numerical failure at {where}: {err}") from err
                        point_index += 1
    for row in rows:
        _maybe_add_hz(row, spec.f_int_hz)
    rows.sort(
        key=lambda r: (r["kind"], r["k"], r["kappa"], r["mu_rad"], r["snr_db"],
                       r["trio"], -1.0 if r["s"] is None else r["s"])
    )
    return rows


def _eval_point(kind, spec, quad, prior, k, kappa, mu, snr_db, snr, point_sets, point_index):
    rows = []
    if kind == "WWB":
        config = SignalConfig(K=k, snr=snr)
        for trio, points in point_sets.items():
            for s in spec.s_grid:
                res = wwb.wwb_value(prior, config, points.with_exponent(s), quad)
                extra = {}
                if res.dropped_points:
                    extra["dropped_points"] = list(res.dropped_points)
                rows.append(_row("WWB", snr_db, k, kappa, mu, s, trio, res.mse_bound, extra))
    elif kind == "BCRB":
        rows.append(_row("BCRB", snr_db, k, kappa, mu, None, None,
                         benchmarks.bcrb(prior, k, snr), {}))
    elif kind == "ZZB":
        rows.append(_row("ZZB", snr_db, k, kappa, mu, None, None,
                         benchmarks.zzb(prior, k, snr), {}))
    elif kind == "MAP":
        point_seed = int(np.random.SeedSequence([spec.seed, point_index]).generate_state(1)[0])
        mc = mapsim.McConfig(trials=spec.trials, grid_size=spec.mc_grid_size, seed=point_seed)
        res = mapsim.run_monte_carlo(SignalConfig(K=k, snr=snr), prior, mc)
        rows.append(_row("MAP", snr_db, k, kappa, mu, None, None, res.mse,
                         {"trials": res.trials_used,
                          "outlier_fraction": res.outlier_fraction}))
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def emit(rows: list[dict], fmt: str, path: str) -> None:
    """Serialize result rows as CSV or JSON; floats carry 17 significant digits."""
    if not rows:
        raise SpecError("table", "no rows to emit")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([
                row["kind"], _fmt(row["snr_db"]), row["k"], _fmt(row["kappa"]),
                _fmt(row["mu_rad"]), _fmt(row["s"]), row["trio"],
                _fmt(row["value_rad2"]), _fmt(row["value_db"]),
                json.dumps(row["extra"], sort_keys=True),
            ])
        text = buf.getvalue()
    else:
        text = json.dumps(rows, sort_keys=True, indent=1) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w") as fh:
                fh.write(text)
        except OSError as err:
            raise RuntimeError(f"cannot write {path}: {err}") from err


def parse_rows(text: str) -> list[dict]:
    """Inverse of emit() for the CSV format."""
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        rows.append({
            "kind": rec["kind"],
            "snr_db": float(rec["snr_db"]),
            "k": int(rec["k"]),
            "kappa": float(rec["kappa"]),
            "mu_rad": float(rec["mu_rad"]),
            "s": float(rec["s"]) if rec["s"] else None,
            "trio": rec["trio"],
            "value_rad2": float(rec["value_rad2"]),
            "value_db": float(rec["value_db"]),
            "extra": json.loads(rec["extra"]),
        })
    return rows


# ---------------------------------------------------------------------------
# argument parsing

def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip() != ""]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip() != ""]


def _snr_axis(text: str) -> list[float]:
    """Either 'start:stop:step' or a comma list of dB values."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SpecError("snr_db", f"expected start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise SpecError("snr_db", "step must be > 0")
        n = int(round((stop - start) / step))
        return [start + i * step for i in range(n + 1)]
    return _floats(text)


def _trio(text: str) -> tuple[int, int, int]:
    vals = _ints(text)
    if len(vals) != 3:
        raise SpecError("testpoint_trio", f"expected C,S,E, got {text!r}")
    return (vals[0], vals[1], vals[2])


_FIGURE_SNR = "-20:10:1"
_KAPPA_FAMILY = "0,1,2,5,20"

# preset axes for the figure-style sweeps; None marks a value the figure
# caption leaves unstated, which must then come from an explicit flag
FIGURE_PRESETS = {
    6: dict(kinds="WWB", k="20,40,60", kappa="2", mu="0", trios=["2,9,0"], s="0.1,0.5"),
    7: dict(kinds="WWB", k="20", kappa=None, mu="0", trios=["2,9,0", "2,9,10"], s="0.5"),
    8: dict(kinds="WWB", k="20", kappa="0,1,2,5", mu="0,1.5707963267948966",
            trios=["2,1,0", "2,3,0", "2,5,0", "2,7,0", "2,9,0"], s="0.5"),
    11: dict(kinds="WWB,BCRB,MAP", k="20", kappa=_KAPPA_FAMILY, mu="0",
             trios=["2,9,10"], s="0.5"),
    12: dict(kinds="WWB,ZZB", k="20", kappa=_KAPPA_FAMILY, mu="0",
             trios=["2,9,10"], s="0.5"),
    13: dict(kinds="WWB,ZZB,MAP", k="20", kappa="1", mu="0",
             trios=["2,9,10"], s="0.5"),
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", default="0", help="master seed for all randomness")
    common.add_argument("--out", "-o", default="-", help="output path, '-' for stdout")
    common.add_argument("--format", default="csv", choices=("csv", "json"))
    common.add_argument("--quad-nodes", default="32", help="quadrature panel count")
    common.add_argument("--f-int", default=None, help="integration rate in Hz for unit columns")
    common.add_argument("--config-file", default=None, help="flat key=value file; flags override")

    parser = argparse.ArgumentParser(
        prog="circbound",
        description="Bayesian lower bounds on circular frequency estimation error",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wwb", parents=[common], help="evaluate the analytic bound")
    p.add_argument("--snr-db", default="0", help="dB value or comma list")
    p.add_argument("--k", default="20")
    p.add_argument("--kappa", default="1")
    p.add_argument("--mu", default="0")
    p.add_argument("--trio", default="2,9,10", help="C,S,E test point counts")
    p.add_argument("--s", default="0.5", help="exponent value or comma grid (grid -> maximize)")

    for name in ("bcrb", "zzb"):
        p = sub.add_parser(name, parents=[common], help=f"evaluate the {name.upper()}")
        p.add_argument("--snr-db", default="0")
        p.add_argument("--k", default="20")
        p.add_argument("--kappa", default="1")
        p.add_argument("--mu", default="0")

    p = sub.add_parser("map-sim", parents=[common], help="Monte Carlo MAP estimator MSE")
    p.add_argument("--snr-db", default="0")
    p.add_argument("--k", default="20")
    p.add_argument("--kappa", default="1")
    p.add_argument("--mu", default="0")
    p.add_argument("--phi", default="0")
    p.add_argument("--trials", default="10000")
    p.add_argument("--grid-size", default="4096")
    p.add_argument("--no-refine", action="store_true")
    p.add_argument("--linear-error", action="store_true",
                   help="score estimate - truth without circular wrapping")
    p.add_argument("--theta", default=None, help="fix the true frequency instead of sampling")

    p = sub.add_parser("testpoints", parents=[common], help="print a test point set")
    p.add_argument("--k", default="20")
    p.add_argument("--config", default="2,9,10", help="C,S,E counts")

    p = sub.add_parser("sweep", parents=[common], help="grid sweep / figure presets")
    p.add_argument("--figure", default=None, type=int, choices=sorted(FIGURE_PRESETS))
    p.add_argument("--snr-db", default=None, help="start:stop:step or comma list")
    p.add_argument("--k", default=None)
    p.add_argument("--kappa", default=None)
    p.add_argument("--mu", default=None)
    p.add_argument("--kinds", default=None, help="comma subset of WWB,BCRB,ZZB,MAP")
    p.add_argument("--trio", default=None)
    p.add_argument("--s", default=None)
    p.add_argument("--trials", default="10000")
    p.add_argument("--grid-size", default="4096")
    return parser


def _apply_config_file(argv: list[str], parser: argparse.ArgumentParser) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if args.config_file:
        overrides = {}
        with open(args.config_file) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise SpecError("config_file", f"expected key=value, got {line!r}")
                key, value = (part.strip() for part in line.split("=", 1))
                overrides[key.replace("-", "_")] = value
        # flags given explicitly on the command line win over the file
        explicit = {a.lstrip("-").replace("-", "_").split("=")[0] for a in argv if a.startswith("--")}
        for key, value in overrides.items():
            if key not in explicit and hasattr(args, key):
                setattr(args, key, value)
    return args


def _make_spec(args) -> SweepSpec:
    preset = FIGURE_PRESETS.get(args.figure, {}) if args.figure else {}

    def pick(flag_value, preset_key, fallback):
        if flag_value is not None:
            return flag_value
        value = preset.get(preset_key, fallback) if preset else fallback
        if value is None:
            raise SpecError(
                preset_key,
                f"figure {args.figure} leaves this unstated; pass --{preset_key} explicitly",
            )
        return value

    kinds = pick(args.kinds, "kinds", "WWB").split(",")
    trios = [_trio(args.trio)] if args.trio is not None else [
        _trio(t) for t in preset.get("trios", ["2,9,10"])
    ]
    return SweepSpec(
        snr_db=_snr_axis(args.snr_db if args.snr_db is not None else _FIGURE_SNR),
        k_values=_ints(pick(args.k, "k", "20")),
        kappa_values=_floats(pick(args.kappa, "kappa", "1")),
        mu_values=_floats(pick(args.mu, "mu", "0")),
        bound_kinds=[k.strip().upper() for k in kinds],
        trios=trios,
        s_grid=_floats(pick(args.s, "s", "0.5")),
        seed=int(args.seed),
        trials=int(args.trials),
        mc_grid_size=int(args.grid_size),
        quad_nodes=int(args.quad_nodes),
        f_int_hz=float(args.f_int) if args.f_int else None,
        output_path=args.out,
        output_format=args.format,
    )


def _single_point_spec(args, kind: str) -> SweepSpec:
    spec = SweepSpec(
        snr_db=_floats(args.snr_db),
        k_values=_ints(args.k),
        kappa_values=_floats(args.kappa),
        mu_values=_floats(args.mu),
        bound_kinds=[kind],
        quad_nodes=int(args.quad_nodes),
        seed=int(args.seed),
        f_int_hz=float(args.f_int) if args.f_int else None,
        output_path=args.out,
        output_format=args.format,
    )
    if kind == "WWB":
        spec.trios = [_trio(args.trio)]
        spec.s_grid = _floats(args.s)
    if kind == "MAP":
        spec.trials = int(args.trials)
        spec.mc_grid_size = int(args.grid_size)
    return spec


def _cmd_testpoints(args) -> int:
    trio = _trio(args.config)
    points = testpoints.build(TestPointConfig(*trio), int(args.k))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["h_rad", "h_over_pi", "provenance"])
    for h, tag in zip(points.h, points.provenance):
        writer.writerow([f"{h:.17g}", f"{h / math.pi:.17g}", tag])
    text = buf.getvalue()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def _cmd_wwb_like(args, kind: str) -> int:
    spec = _single_point_spec(args, kind)
    if kind == "WWB" and len(spec.s_grid) > 1:
        # grid means: maximize over s and report only the winner
        rows = []
        quad = QuadratureSpec(node_count=spec.quad_nodes)
        spec.validate()
        for k in spec.k_values:
            for kappa in spec.kappa_values:
                for mu in spec.mu_values:
                    prior = VonMisesPrior(mu=mu, kappa=kappa)
                    points = testpoints.build(TestPointConfig(*spec.trios[0]), k)
                    for snr_db in spec.snr_db:
                        config = SignalConfig(K=k, snr=10.0 ** (snr_db / 10.0))
                        s_best, res = wwb.optimize_s(prior, config, points, spec.s_grid, quad)
                        extra = {"s_grid": spec.s_grid}
                        if res.dropped_points:
                            extra["dropped_points"] = list(res.dropped_points)
                        rows.append(_maybe_add_hz(
                            _row("WWB", snr_db, k, kappa, mu, s_best, spec.trios[0],
                                 res.mse_bound, extra),
                            spec.f_int_hz,
                        ))
    else:
        rows = run_sweep(spec)
    emit(rows, spec.output_format, spec.output_path)
    return 0


def _cmd_map_sim(args) -> int:
    spec = _single_point_spec(args, "MAP")
    spec.validate()
    rows = []
    for k in spec.k_values:
        for kappa in spec.kappa_values:
            for mu in spec.mu_values:
                prior = VonMisesPrior(mu=mu, kappa=kappa)
                for snr_db in spec.snr_db:
                    config = SignalConfig(K=k, snr=10.0 ** (snr_db / 10.0),
                                          phi=float(args.phi))
                    mc = mapsim.McConfig(
                        trials=spec.trials, grid_size=spec.mc_grid_size,
                        refine=not args.no_refine, seed=spec.seed,
                    )
                    res = mapsim.run_monte_carlo(
                        config, prior, mc,
                        theta_fixed=float(args.theta) if args.theta is not None else None,
                        wrap=not args.linear_error,
                    )
                    rows.append(_maybe_add_hz(
                        _row("MAP", snr_db, k, kappa, mu, None, None, res.mse,
                             {"trials": res.trials_used,
                              "outlier_fraction": res.outlier_fraction}),
                        spec.f_int_hz,
                    ))
    emit(rows, spec.output_format, spec.output_path)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = _apply_config_file(list(sys.argv[1:] if argv is None else argv), parser)
        if args.command == "testpoints":
            return _cmd_testpoints(args)
        if args.command == "wwb":
            return _cmd_wwb_like(args, "WWB")
        if args.command == "bcrb":
            return _cmd_wwb_like(args, "BCRB")
        if args.command == "zzb":
            return _cmd_wwb_like(args, "ZZB")
        if args.command == "map-sim":
            return _cmd_map_sim(args)
        if args.command == "sweep":
            spec = _make_spec(args)
            rows = run_sweep(spec)
            emit(rows, spec.output_format, spec.output_path)
            return 0
        raise SpecError("command", f"unknown command {args.command}")
    except (SpecError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (GridPointError, QuadratureError, OverflowError, RuntimeError) as err:
        print(f"numerical error: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
