"""Long and short exponential sums, and the short sum as an exact step series.

The short sum S(x) = sum over x <= n <= x + sqrt(x) of a(n) e(n alpha) is a
piecewise-constant function of x: it changes only when an integer crosses one
of the closed window ends. Entry breakpoints are the integers themselves (n
leaves as x passes n); exit breakpoints are roots of x + sqrt(x) = m (m joins
as x passes ((-1 + sqrt(1+4m))/2)^2). step_series materializes every piece in
O(delta) coefficient updates instead of O(delta * sqrt(m)) re-summations,
re-anchoring against a directly computed window sum every ~1000 events so
rounding drift cannot accumulate across tens of thousands of updates.

Phases at a rational point h/k are evaluated from exact residues n*h mod k;
phases at a generic real alpha are reduced mod 1 in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from cuspsums.coeffs import CoefficientTable
from cuspsums.rational import RationalPoint

_BREAKPOINT_TOL = 1e-9
_ANCHOR_EVERY = 1024


def _phase_factors(ns: np.ndarray, alpha) -> np.ndarray:
    """e(n*alpha) for an integer array; exact residue arithmetic when rational."""
    if isinstance(alpha, RationalPoint):
        k = alpha.k
        if k == 1:
            return np.ones(ns.shape, dtype=complex)
        roots = np.exp((2j * np.pi / k) * np.arange(k))
        return roots[(ns.astype(np.int64) * alpha.h) % k]
    a = float(alpha)
    if not math.isfinite(a):
        raise ValueError(f"phase point must be finite, got {alpha!r}")
    return np.exp(2j * np.pi * np.mod(ns * a, 1.0))


def _require_table(table: CoefficientTable, n_needed: int, what: str) -> None:
    if n_needed > table.n_max:
        raise ValueError(
            f"{what} needs coefficients up to n={n_needed}, "
            f"table holds {table.n_max}"
        )


def window_bounds(x: float) -> tuple[int, int]:
    """Integer window [ceil(x), floor(x + sqrt(x))]; both ends closed."""
    if not math.isfinite(x) or x < 1.0:
        raise ValueError(f"window position must satisfy x >= 1, got {x}")
    return math.ceil(x), math.floor(x + math.sqrt(x))


def short_sum(x: float, alpha, table: CoefficientTable) -> complex:
    """S(x) = sum_{x <= n <= x + sqrt(x)} a(n) e(n alpha), summed pairwise."""
    lo, hi = window_bounds(x)
    _require_table(table, hi, f"short_sum at x={x}")
    if hi < lo:
        return 0j
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    return complex(np.sum(table.a[lo - 1: hi] * _phase_factors(ns, alpha)))


def long_sum(x: float, alpha, table: CoefficientTable) -> complex:
    """sum_{1 <= n <= x} a(n) e(n alpha)."""
    if not math.isfinite(x):
        raise ValueError(f"need finite x, got {x}")
    hi = math.floor(x)
    if hi < 1:
        return 0j
    _require_table(table, hi, f"long_sum at x={x}")
    ns = np.arange(1, hi + 1, dtype=np.int64)
    return complex(np.sum(table.a[:hi] * _phase_factors(ns, alpha)))


def unweighted_window_sum(m: float, delta: float, table: CoefficientTable) -> complex:
    """sum_{m <= n <= m + delta} a(n); the alpha = 0 window statistic."""
    if delta < 0:
        raise ValueError(f"need delta >= 0, got {delta}")
    lo = math.ceil(m)
    hi = math.floor(m + delta)
    if lo < 1:
        raise ValueError(f"window must start at m >= 1, got m={m}")
    _require_table(table, hi, f"window sum at m={m}")
    if hi < lo:
        return 0j
    return complex(np.sum(table.a[lo - 1: hi]))


def breakpoints(m: float, delta: float) -> np.ndarray:
    """All window entry/exit abscissas in [m, m + delta], sorted and merged.

    Entries are the integers of [m, m+delta]; exits solve x + sqrt(x) = j.
    Points closer than 1e-9 are merged (exit roots at perfect squares x = i^2
    coincide exactly with the entry at i^2, since then x + sqrt(x) = i^2 + i).
    """
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if delta < 0:
        raise ValueError(f"need delta >= 0, got {delta}")
    lo, hi = float(m), float(m + delta)
    ints = np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=float)
    tops = np.arange(math.ceil(lo + math.sqrt(lo)),
                     math.floor(hi + math.sqrt(hi)) + 1, dtype=np.int64)
    exits = ((np.sqrt(1.0 + 4.0 * tops.astype(float)) - 1.0) / 2.0) ** 2
    exits = exits[(exits >= lo) & (exits <= hi)]
    pts = np.sort(np.concatenate([ints, exits]))
    if pts.size == 0:
        return pts
    keep = np.concatenate([[True], np.diff(pts) > _BREAKPOINT_TOL])
    return pts[keep]


@dataclass(frozen=True)
class StepSeries:
    """Exact piecewise-constant representation of the short sum on [m, m+delta].

    values[i] is S(x) on the open piece (breakpoints[i], breakpoints[i+1]);
    breakpoints include both endpoints, so len(values) = len(breakpoints) - 1.
    """

    m: float
    delta: float
    point: RationalPoint
    breakpoints: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)


def step_series(m: float, delta: float, point: RationalPoint,
                table: CoefficientTable) -> StepSeries:
    """Build the step structure with O(delta) single-term updates."""
    hi = m + delta
    _require_table(table, math.floor(hi + math.sqrt(hi)), "step_series")
    inner = breakpoints(m, delta)
    edges = [float(m)]
    for x in inner:
        if x - edges[-1] > _BREAKPOINT_TOL:
            edges.append(float(x))
    if hi - edges[-1] > _BREAKPOINT_TOL:
        edges.append(float(hi))
    else:
        edges[-1] = float(hi)
    edges = np.asarray(edges)

    xs = edges[1:-1]
    n_piece = edges.size - 1
    piece_delta = np.zeros(n_piece, dtype=complex)
    if xs.size:
        # entry events: integer n leaves the window as x passes n
        n_cand = np.rint(xs)
        is_entry = np.abs(xs - n_cand) <= _BREAKPOINT_TOL
        # exit events: integer j joins as x + sqrt(x) passes j
        tops = xs + np.sqrt(xs)
        j_cand = np.rint(tops)
        is_exit = np.abs(tops - j_cand) <= _BREAKPOINT_TOL
        deltas = np.zeros(xs.size, dtype=complex)
        for mask, sign, cand in ((is_entry, -1.0, n_cand), (is_exit, +1.0, j_cand)):
            if mask.any():
                js = cand[mask].astype(np.int64)
                deltas[mask] += sign * table.a[js - 1] * _phase_factors(js, point)
        piece_delta[1:] = deltas

    mids = 0.5 * (edges[:-1] + edges[1:])
    values = np.empty(n_piece, dtype=complex)
    start = 0
    while start < n_piece:
        stop = min(start + _ANCHOR_EVERY, n_piece)
        anchor = short_sum(float(mids[start]), point, table)
        block = np.concatenate([[anchor], piece_delta[start + 1: stop]])
        values[start:stop] = np.cumsum(block)
        start = stop
    return StepSeries(m=float(m), delta=float(delta), point=point,
                      breakpoints=edges, values=values)


def eval_step(series: StepSeries, x: float) -> complex:
    """Value of the piece containing x; breakpoints take the right-hand piece."""
    if not series.m <= x <= series.m + series.delta:
        raise ValueError(f"x={x} outside step series domain "
                         f"[{series.m}, {series.m + series.delta}]")
    i = int(np.searchsorted(series.breakpoints, x, side="right")) - 1
    i = min(max(i, 0), series.values.size - 1)
    return complex(series.values[i])
