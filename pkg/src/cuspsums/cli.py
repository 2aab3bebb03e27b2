"""Command-line driver: coeffs, verify-lemmas, meansquare, voronoi, omega.

Every command reads one flat config file (all keys optional), writes its
artifacts under the output directory, and prints a short deterministic
summary.  Exit codes: 0 success, 1 validation failure, 2 numerical
budget refusal, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .calibrated import JM_RATIO_MAX, STATED_RATIO_MAX
from .coeffs import generate_tau, load_cache, save_cache
from .config import ExperimentConfig, config_lines, load_config
from .errors import ConfigError, NodeBudgetError
from .meansquare import exponent_fit, omega_statistic, run_sweep, sweep_grid
from .oscillatory import (l3_spec, l4_spec, l5_spec, lemma5_derivative_check,
                          oscillatory_integral, stated_bound)
from .rational import make_rational_point
from .reporting import (sha256_file, sha256_text, svg_line_plot, write_csv,
                        write_json, write_svg)
from .voronoi import VoronoiParams, fit_error_envelope, voronoi_error_scan
from .weight import build_weight

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_BUDGET = 2
EXIT_IO = 3

# (m, n) pairs exercised by verify-lemmas; spread from near-degenerate
# to well-separated frequencies
_LEMMA_PAIRS = ((1, 2), (2, 3), (1, 4), (3, 5), (4, 9), (9, 10))
_LEMMA5_GRID = (1.0e3, 1.0e5, 129)


def _provenance(cfg: ExperimentConfig) -> dict:
    """Version plus content fingerprints; no wall clock, so reruns match."""
    info = {
        "package": "cuspsums",
        "version": __version__,
        "config_sha256": sha256_text(config_lines(cfg)),
    }
    table = Path(cfg.table)
    info["table_sha256"] = sha256_file(table) if table.is_file() else None
    return info


def _load_table(cfg: ExperimentConfig):
    path = Path(cfg.table)
    if not path.is_file():
        raise FileNotFoundError(
            f"coefficient cache {str(path)!r} not found; create it with: "
            f"cuspsums coeffs --table {path}"
        )
    return load_cache(path)


def _require_coverage(table, needed: float, what: str) -> None:
    if needed > table.n_max:
        raise ConfigError(
            f"{what} needs coefficients up to {needed:.0f} but the cache "
            f"stops at {table.n_max}; rebuild with a larger n"
        )


def _delta(cfg: ExperimentConfig, m: float, k: int) -> float:
    return min(max(cfg.delta_coeff * k * m ** cfg.delta_exponent, 1.0e3), m)


def cmd_coeffs(cfg: ExperimentConfig, out_dir: Path, emit_json: bool) -> int:
    table = generate_tau(cfg.n)
    save_cache(table, cfg.table)
    size = Path(cfg.table).stat().st_size
    digest = sha256_file(cfg.table)
    print(f"coefficients: {cfg.n}")
    print(f"cache: {cfg.table}")
    print(f"bytes: {size}")
    print(f"sha256: {digest}")
    print(f"tau({cfg.n}) = {table.tau[-1]}")
    if emit_json:
        write_json(out_dir / "coeffs.json", {
            "n": cfg.n,
            "cache": str(cfg.table),
            "bytes": size,
            "sha256": digest,
            "tau_last": str(table.tau[-1]),
            "provenance": _provenance(cfg),
        })
    return EXIT_OK


def cmd_verify_lemmas(cfg: ExperimentConfig, out_dir: Path,
                      emit_json: bool) -> int:
    m_scale = min(cfg.ms)
    bound_rows = []
    deriv_rows = []
    for k in sorted(set(cfg.ks)):
        delta = _delta(cfg, m_scale, k)
        weight = build_weight(m_scale, delta, cfg.rise_fraction * delta)
        point = make_rational_point(0 if k == 1 else 1, k)
        for m, n in _LEMMA_PAIRS:
            specs = (("L3", l3_spec(m, n, point)),
                     ("L4", l4_spec(m, n, point)),
                     ("L5", l5_spec(m, n, point)))
            for family, spec in specs:
                for p in (1, 2):
                    value = abs(oscillatory_integral(
                        weight, spec, node_budget=cfg.node_budget))
                    bound = stated_bound(spec, p, weight)
                    bound_rows.append((family, m, n, k, p, value, bound,
                                       value / bound))
            grid = np.geomspace(*_LEMMA5_GRID)
            ratio = lemma5_derivative_check(l5_spec(m, n, point), grid)
            deriv_rows.append((m, n, k, ratio))

    bound_rows.sort(key=lambda r: (r[0], r[1], r[2], r[3], r[4]))
    deriv_rows.sort(key=lambda r: (r[0], r[1], r[2]))
    n_bounds = write_csv(out_dir / "lemma_bounds.csv", (
        "family", "m_frequency_index", "n_frequency_index", "k_denominator",
        "p_derivative_order", "integral_abs_dimensionless",
        "stated_bound_dimensionless", "ratio_integral_over_bound_dimensionless",
    ), bound_rows)
    write_csv(out_dir / "lemma5_ratios.csv", (
        "m_frequency_index", "n_frequency_index", "k_denominator",
        "min_ratio_derivative_over_lower_bound_dimensionless",
    ), deriv_rows)

    worst = max(r[7] for r in bound_rows)
    deriv_min = min(r[3] for r in deriv_rows)
    bounded = (np.isfinite(worst) and worst <= STATED_RATIO_MAX
               and deriv_min >= 1.0)
    print(f"lemma bound rows: {n_bounds}")
    print(f"max ratio: {worst:.6e} (cap {STATED_RATIO_MAX})")
    print(f"min derivative ratio: {deriv_min:.6f} (needs >= 1)")
    print(f"verdict: {'bounded' if bounded else 'BOUND EXCEEDED'}")
    if emit_json:
        write_json(out_dir / "lemmas.json", {
            "rows": n_bounds,
            "max_ratio": worst,
            "stated_ratio_cap": STATED_RATIO_MAX,
            "jm_ratio_cap": JM_RATIO_MAX,
            "min_derivative_ratio": deriv_min,
            "bounded": bool(bounded),
            "provenance": _provenance(cfg),
        })
    return EXIT_OK if bounded else EXIT_INVALID


def cmd_meansquare(cfg: ExperimentConfig, out_dir: Path,
                   emit_json: bool) -> int:
    table = _load_table(cfg)
    ms = tuple(sorted(cfg.ms))
    ks = tuple(sorted(set(cfg.ks)))
    combos = sweep_grid(ms, ks, cfg.delta_coeff, cfg.delta_exponent)
    if not combos:
        raise ConfigError("sweep is empty; every k exceeds m^(1/4)")
    worst = max(m + delta for m, _, delta in combos)
    _require_coverage(table, worst + worst ** 0.5 + 1.0, "mean-square sweep")

    results = run_sweep(table, ms, ks, cfg.delta_coeff, cfg.delta_exponent,
                        cfg.rise_fraction)
    rows = [(r.m, r.point.k, r.point.h, r.delta, r.integral,
             float(r.diagonal), r.ratio, r.method) for r in results]
    rows.sort(key=lambda r: (r[0], r[1]))
    n_rows = write_csv(out_dir / "meansquare.csv", (
        "m_window_start_index", "k_denominator", "h_numerator",
        "delta_window_length_index_units", "integral_weighted_index_units",
        "diagonal_term_index_units", "ratio_integral_over_delta_sqrt_m",
        "method",
    ), rows)

    try:
        fit = exponent_fit(results)
        fit_info = {"alpha": fit.alpha, "beta": fit.beta, "coeff": fit.coeff,
                    "rms_residual": fit.rms_residual}
        fit_line = f"fit: alpha={fit.alpha:.4f} beta={fit.beta:.4f}"
    except ValueError as exc:
        fit_info = {"error": str(exc)}
        fit_line = f"fit: unavailable ({exc})"

    series = []
    for k in ks:
        pts = [(r.m, r.integral / r.delta) for r in results if r.point.k == k]
        if pts:
            series.append((f"k = {k}", [p[0] for p in pts],
                           [p[1] for p in pts]))
    write_svg(out_dir / "meansquare.svg", svg_line_plot(
        series, "Weighted mean square of short sums",
        "window start M", "integral / Delta"))

    ratios = [r.ratio for r in results]
    print(f"sweep rows: {n_rows}")
    print(fit_line)
    print(f"ratio range: [{min(ratios):.6e}, {max(ratios):.6e}]")
    if emit_json:
        write_json(out_dir / "meansquare.json", {
            "config": list(config_lines(cfg)),
            "rows": [{
                "m": r.m, "k": r.point.k, "h": r.point.h, "delta": r.delta,
                "integral": r.integral, "diagonal": float(r.diagonal),
                "ratio": r.ratio, "method": r.method,
            } for r in results],
            "exponent_fit": fit_info,
            "ratio_min": min(ratios),
            "ratio_max": max(ratios),
            "provenance": _provenance(cfg),
        })
    return EXIT_OK


def cmd_voronoi(cfg: ExperimentConfig, out_dir: Path, emit_json: bool) -> int:
    table = _load_table(cfg)
    scales = tuple(sorted(cfg.voronoi_ms))
    ks = tuple(sorted(set(cfg.voronoi_ks)))
    top = 2.0 * max(scales)
    _require_coverage(table, top + top ** 0.5 + 1.0, "voronoi scan")

    rng = np.random.default_rng(cfg.seed)
    rows = []
    summaries = []
    pooled = {"xs": [], "errs0": [], "errs4": [], "ns": [], "ks": []}
    for m_scale in scales:
        for k in ks:
            point = make_rational_point(0 if k == 1 else 1, k)
            xs = np.sort(rng.uniform(m_scale, 2.0 * m_scale,
                                     cfg.voronoi_samples))
            n_full = int(round(m_scale))
            scan4 = voronoi_error_scan(
                xs, VoronoiParams(point, n_full), table)
            scan0 = voronoi_error_scan(
                xs, VoronoiParams(point, n_full, phase_shift=0.0), table)
            sixteenth = voronoi_error_scan(
                xs, VoronoiParams(point, max(1, n_full // 4)), table)
            for i, x in enumerate(xs):
                rows.append((m_scale, k, point.h, float(x), n_full,
                             scan0.errors[i], scan4.errors[i],
                             scan4.errors_quarter[i],
                             sixteenth.errors_quarter[i]))
            med_full = scan4.median_error
            med_quarter = float(np.median(scan4.errors_quarter))
            med_sixteenth = float(np.median(sixteenth.errors_quarter))
            summaries.append({
                "m_scale": m_scale, "k": k, "n_trunc": n_full,
                "median_err_phase0": scan0.median_error,
                "median_err_phase_pi4": med_full,
                "decay_sixteenth_to_quarter": med_sixteenth / med_quarter,
                "decay_quarter_to_full": med_quarter / med_full,
            })
            pooled["xs"].extend(xs.tolist())
            pooled["errs0"].extend(scan0.errors.tolist())
            pooled["errs4"].extend(scan4.errors.tolist())
            pooled["ns"].extend([n_full] * len(xs))
            pooled["ks"].extend([k] * len(xs))

    n_rows = write_csv(out_dir / "voronoi.csv", (
        "m_scale_index_units", "k_denominator", "h_numerator",
        "x_sample_index_units", "n_trunc_terms", "err_phase0",
        "err_phase_pi4", "err_phase_pi4_quarter_terms",
        "err_phase_pi4_sixteenth_terms",
    ), rows)

    env4 = fit_error_envelope(pooled["xs"], pooled["errs4"], pooled["ns"],
                              pooled["ks"])
    env0 = fit_error_envelope(pooled["xs"], pooled["errs0"], pooled["ns"],
                              pooled["ks"])
    # per-scale slope of log median error against log k
    slopes = {}
    for m_scale in scales:
        meds = [(s["k"], s["median_err_phase_pi4"]) for s in summaries
                if s["m_scale"] == m_scale]
        if len(meds) >= 2:
            t = np.log([k for k, _ in meds])
            y = np.log([e for _, e in meds])
            slopes[f"{m_scale:.0f}"] = float(np.polyfit(t, y, 1)[0])

    print(f"scan rows: {n_rows}")
    print(f"envelope exponent (phase -pi/4): {env4.exponent:.4f} "
          f"coeff {env4.coeff:.4e}")
    print(f"envelope exponent (phase 0):     {env0.exponent:.4f} "
          f"coeff {env0.coeff:.4e}")
    for key in sorted(slopes):
        print(f"k-slope at M={key}: {slopes[key]:.4f}")
    if emit_json:
        write_json(out_dir / "voronoi.json", {
            "rows": n_rows,
            "summaries": summaries,
            "envelope_phase_pi4": {
                "coeff": env4.coeff, "exponent": env4.exponent,
                "rms_residual": env4.rms_residual, "points": env4.points,
            },
            "envelope_phase0": {
                "coeff": env0.coeff, "exponent": env0.exponent,
                "rms_residual": env0.rms_residual, "points": env0.points,
            },
            "k_slope_by_scale": slopes,
            "provenance": _provenance(cfg),
        })
    return EXIT_OK


def cmd_omega(cfg: ExperimentConfig, out_dir: Path, emit_json: bool) -> int:
    table = _load_table(cfg)
    delta = cfg.omega_delta
    _require_coverage(table, 3.0 * delta + 1.0, "omega windows")
    rng = np.random.default_rng(cfg.seed)
    starts = np.sort(rng.uniform(delta, table.n_max - 2.0 * delta,
                                 cfg.omega_windows))
    stat = omega_statistic(starts, delta, table)

    root = delta ** 0.5
    rows = [(float(m), delta, float(v * root), float(v))
            for m, v in zip(stat.ms, stat.values)]
    n_rows = write_csv(out_dir / "omega.csv", (
        "window_start_index_units", "window_length_index_units",
        "sum_abs_coefficient_units", "sum_abs_per_sqrt_window_length",
    ), rows)

    passed = stat.max >= cfg.omega_threshold
    print(f"windows: {n_rows}")
    print(f"max normalized sum: {stat.max:.6f}")
    print(f"rms normalized sum: {stat.rms:.6f}")
    print(f"threshold: {cfg.omega_threshold:.6f} "
          f"({'cleared' if passed else 'NOT CLEARED'})")
    if emit_json:
        write_json(out_dir / "omega.json", {
            "windows": n_rows,
            "delta": delta,
            "max": stat.max,
            "rms": stat.rms,
            "threshold": cfg.omega_threshold,
            "cleared": bool(passed),
            "seed": cfg.seed,
            "provenance": _provenance(cfg),
        })
    return EXIT_OK if passed else EXIT_INVALID


_COMMANDS = {
    "coeffs": cmd_coeffs,
    "verify-lemmas": cmd_verify_lemmas,
    "meansquare": cmd_meansquare,
    "voronoi": cmd_voronoi,
    "omega": cmd_omega,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="key = value configuration file")
    common.add_argument("--out", metavar="DIR",
                        help="output directory (default from config)")
    common.add_argument("--table", metavar="PATH",
                        help="coefficient cache path (default from config)")
    common.add_argument("--seed", type=int, metavar="U64",
                        help="RNG seed override")
    common.add_argument("--json", action="store_true",
                        help="also write a JSON mirror of the report")

    parser = argparse.ArgumentParser(
        prog="cuspsums",
        description="numerical experiments on short sums of cusp-form "
                    "coefficients")
    parser.add_argument("--version", action="version",
                        version=f"cuspsums {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("coeffs", parents=[common],
                       help="build and cache the coefficient table")
    p.add_argument("--n", type=int, metavar="N",
                   help="coefficient count override")
    sub.add_parser("verify-lemmas", parents=[common],
                   help="oscillatory integral bounds against certificates")
    sub.add_parser("meansquare", parents=[common],
                   help="weighted mean-square sweep with diagonal tracking")
    sub.add_parser("voronoi", parents=[common],
                   help="truncated main-term error scan at both phases")
    sub.add_parser("omega", parents=[common],
                   help="normalized window sums against the threshold")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = {"table": args.table, "out": args.out, "seed": args.seed}
        if args.command == "coeffs" and args.n is not None:
            overrides["n"] = args.n
        cfg = load_config(args.config, **overrides)
        out_dir = Path(cfg.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, out_dir, args.json)
    except NodeBudgetError as exc:
        print(f"budget refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, ValueError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"i/o: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
