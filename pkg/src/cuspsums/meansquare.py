"""Mean square of the short windowed sums over a smooth window.

The integral I = ∫ w(x) |S(x)|² dx is computed exactly from the step
structure of S (piecewise-constant, so I is a finite sum of |S_i|² times
smooth weight masses), and compared against its predicted pieces: the
diagonal term

    (k/2π²) Σ_{n≤M} |a(n)|² n^(-3/2) ∫ w(x) √x (cos Φ₁' - cos Φ₂')² dx

with Φ' the shifted/plain phases carrying the -π/4 offset, and the
off-diagonal double sum of cross integrals. The diagonal splits each
squared difference into one non-oscillatory part, evaluated for every n
on a shared coarse grid, and three oscillatory parts, evaluated exactly
for small n and certified (not evaluated) past a cutoff where their
first-derivative-test bounds fall off like n^(-1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from cuspsums.coeffs import CoefficientTable
from cuspsums.oscillatory import (T_SHIFTED, build_phase, derivative_certificate,
                                  jm_bound, l3_spec)
from cuspsums.rational import RationalPoint, make_rational_point
from cuspsums.sums import short_sum, step_series, unweighted_window_sum
from cuspsums.weight import WeightProfile, build_weight, eval_weight

_METHODS = ("exact-step", "quadrature")
_GAUSS8_NODES, _GAUSS8_WEIGHTS = np.polynomial.legendre.leggauss(8)
_GAUSS16_NODES, _GAUSS16_WEIGHTS = np.polynomial.legendre.leggauss(16)
_QUARTER_TURN = math.pi / 4.0

SWEEP_MS = (1e4, 3e4, 1e5, 3e5)
SWEEP_KS = (1, 2, 3, 5, 7)


@dataclass(frozen=True)
class MeanSquareResult:
    """One weighted mean-square evaluation and its diagonal prediction."""

    m: float
    delta: float
    point: RationalPoint
    integral: float
    diagonal: float
    ratio: float
    method: str

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")
        if not self.integral >= 0.0:
            raise ValueError("the integrand |S|^2 w is nonnegative")


@dataclass(frozen=True)
class DiagonalTerm:
    """Diagonal value with its certified error budget.

    value carries the computed sum, slack the certified bound on every
    oscillatory piece that was bounded instead of evaluated, n_exact the
    cutoff below which brackets are exact, and flagged any n whose
    evaluation hit the node budget and fell back to the trivial bound.
    """

    value: float
    slack: float
    n_exact: int
    flagged: tuple[int, ...]

    def __float__(self) -> float:
        return self.value


def _check_geometry(m: float, delta: float, weight: WeightProfile) -> None:
    if not (math.isclose(weight.m, m, rel_tol=1e-12)
            and math.isclose(weight.delta, delta, rel_tol=1e-12)):
        raise ValueError(
            f"weight supported on [{weight.m}, {weight.m + weight.delta}] "
            f"does not match the window [{m}, {m + delta}]"
        )


def _piece_weight_masses(weight: WeightProfile, edges: np.ndarray) -> np.ndarray:
    """∫ w over each piece by fixed-order Gauss quadrature on the smooth w."""
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = mid[:, None] + half[:, None] * _GAUSS8_NODES[None, :]
    return half * (eval_weight(weight, x) @ _GAUSS8_WEIGHTS)


def theorem_integral(m: float, delta: float, point: RationalPoint,
                     weight: WeightProfile, table: CoefficientTable,
                     method: str = "exact-step") -> MeanSquareResult:
    """I = ∫ w |S|² assembled piece by piece; S is constant between breakpoints.

    exact-step reads the piece values off the incremental step series;
    quadrature re-evaluates S fresh at every piece midpoint, an independent
    path through the same decomposition of [m, m+delta].
    """
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}")
    _check_geometry(m, delta, weight)
    series = step_series(m, delta, point, table)
    edges = series.breakpoints
    if method == "exact-step":
        squares = np.abs(series.values) ** 2
    else:
        mids = 0.5 * (edges[:-1] + edges[1:])
        squares = np.array([abs(short_sum(float(x), point, table)) ** 2
                            for x in mids])
    integral = float(squares @ _piece_weight_masses(weight, edges))
    diag = diagonal_term(m, delta, point.k, weight, table)
    return MeanSquareResult(m=m, delta=delta, point=point, integral=integral,
                            diagonal=diag.value,
                            ratio=integral / (delta * math.sqrt(m)),
                            method=method)


def _weighted_nodes(weight: WeightProfile, panels: int):
    """Gauss-16 abscissae over the support plus w(x)·√x·quadrature weights."""
    lo, hi = weight.support
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * _GAUSS16_NODES[None, :]).ravel()
    wts = (half[:, None] * _GAUSS16_WEIGHTS[None, :]).ravel()
    return x, wts * eval_weight(weight, x) * np.sqrt(x)


def _bracket_matrix(ns: np.ndarray, k: int, xs: np.ndarray) -> np.ndarray:
    """(cos Φ₁' - cos Φ₂')² at each (n, x); phases carry the -π/4 offset."""
    r_shift = np.sqrt(xs + np.sqrt(xs))
    r_plain = np.sqrt(xs)
    scale = (4.0 * math.pi / k) * np.sqrt(ns.astype(float))
    diff = (np.cos(np.outer(scale, r_shift) - _QUARTER_TURN)
            - np.cos(np.outer(scale, r_plain) - _QUARTER_TURN))
    return diff * diff


def diagonal_profile(ns, k: int, weight: WeightProfile,
                     node_budget: int = 2_000_000):
    """Exact per-n brackets ∫ w √x (cos Φ₁' - cos Φ₂')² dx, one shared grid.

    The grid resolves the fastest requested frequency, so one evaluation
    covers every n at once; panel doubling must agree to 1e-9 relative to
    the weight mass. Returns (brackets, flagged) where flagged lists the n
    whose rows never converged inside the budget and were replaced by the
    trivial bound 4 ∫ w √x.
    """
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size == 0:
        return np.zeros(0), ()
    if np.any(ns < 1):
        raise ValueError("frequencies must satisfy n >= 1")
    lo, hi = weight.support
    delta = hi - lo
    peak = 4.0 * math.sqrt(float(ns.max())) / (k * math.sqrt(lo))
    panels = max(8, math.ceil(1.25 * peak * delta),
                 math.ceil(2.0 * delta / weight.r))
    xs, wsx = _weighted_nodes(weight, panels)
    tol = 1e-9 * float(np.sum(np.abs(wsx)))
    values = _bracket_matrix(ns, k, xs) @ wsx
    nodes_used = xs.size
    settled = np.zeros(ns.size, dtype=bool)
    while nodes_used + 32 * panels <= node_budget:
        panels *= 2
        xs, wsx = _weighted_nodes(weight, panels)
        nodes_used += xs.size
        refined = _bracket_matrix(ns, k, xs) @ wsx
        settled |= np.abs(refined - values) <= tol
        values = refined
        if settled.all():
            return values, ()
    flagged = tuple(int(n) for n in ns[~settled])
    trivial = 4.0 * float(np.sum(wsx))
    values[~settled] = trivial
    return values, flagged


def _slow_brackets(ns: np.ndarray, k: int, xs: np.ndarray,
                   wsx: np.ndarray) -> np.ndarray:
    """Non-oscillatory part ∫ w √x (1 - cos 2π(Φ₁-Φ₂)) dx for many n.

    Φ₁-Φ₂ = (2√n/k)(√(x+√x) - √x) moves well under one cycle across any
    window with delta <= M, so a weight-resolving grid is enough. Chunked
    so the (n, x) matrix never exceeds a few million entries.
    """
    g = np.sqrt(xs + np.sqrt(xs)) - np.sqrt(xs)
    mass = float(np.sum(wsx))
    out = np.empty(ns.size)
    scale = (4.0 * math.pi / k) * np.sqrt(ns.astype(float))
    step = max(1, 4_000_000 // max(1, xs.size))
    for start in range(0, ns.size, step):
        block = scale[start:start + step]
        out[start:start + step] = mass - np.cos(np.outer(block, g)) @ wsx
    return out


def diagonal_term(m: float, delta: float, k: int, weight: WeightProfile,
                  table: CoefficientTable, n_exact: int | None = None,
                  node_budget: int = 2_000_000) -> DiagonalTerm:
    """(k/2π²) Σ_{n≤M} |a(n)|² n^(-3/2) × bracket, with certified tail.

    Brackets are exact up to n_exact (default max(256, 4k²), covering the
    damped range n <= k² and the first oscillatory stretch). Past the
    cutoff only the non-oscillatory part is evaluated; the three dropped
    oscillatory pieces are bounded by first-derivative certificates whose
    minimum phase slope grows like √n, and the summed bound is returned as
    slack rather than folded into the value.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    _check_geometry(m, delta, weight)
    n_top = math.floor(m)
    if table.n_max < n_top:
        raise ValueError(
            f"table holds {table.n_max} coefficients, diagonal needs {n_top}")
    if n_exact is None:
        n_exact = max(256, 4 * k * k)
    n_exact = min(int(n_exact), n_top)
    if n_exact < 1:
        raise ValueError("need at least one exact bracket")

    coeff = (k / (2.0 * math.pi ** 2)) \
        * np.abs(table.a[:n_top]) ** 2 / np.arange(1, n_top + 1) ** 1.5

    exact_ns = np.arange(1, n_exact + 1, dtype=np.int64)
    exact_vals, flagged = diagonal_profile(exact_ns, k, weight,
                                           node_budget=node_budget)
    value = float(coeff[:n_exact] @ exact_vals)

    slack = 0.0
    if n_exact < n_top:
        panels = max(8, math.ceil(2.0 * delta / weight.r))
        xs, wsx = _weighted_nodes(weight, panels)
        tail_ns = np.arange(n_exact + 1, n_top + 1, dtype=np.int64)
        value += float(coeff[n_exact:] @ _slow_brackets(tail_ns, k, xs, wsx))
        # certify the three dropped oscillatory pieces at the cutoff
        # frequency; their minimum phase slope scales exactly as sqrt(n)
        pt = make_rational_point(0, 1) if k == 1 else make_rational_point(1, k)
        b1 = min(
            derivative_certificate(weight, spec, p=1).b1
            for spec in (l3_spec(n_exact, n_exact, pt, t_n=T_SHIFTED, t_m=T_SHIFTED),
                         l3_spec(n_exact, n_exact, pt),
                         l3_spec(n_exact, n_exact, pt, t_m=T_SHIFTED))
        )
        cert = derivative_certificate(weight, l3_spec(n_exact, n_exact, pt), p=1)
        per_piece = jm_bound(cert) * cert.b1 / b1  # rebased on the smallest slope
        slack = 2.0 * per_piece * float(
            coeff[n_exact:] @ np.sqrt(n_exact / tail_ns.astype(float)))
    return DiagonalTerm(value=value, slack=slack, n_exact=n_exact,
                        flagged=flagged)


@dataclass(frozen=True)
class DiagIdentityCheck:
    """Max deviation of (cos A - cos B)² from 4 sin²((A+B)/2) sin²((A-B)/2).

    paper_discrepancy is the deviation from the factor-free product, and
    recovered_factor the observed ratio between the two sides.
    """

    discrepancy: float
    paper_discrepancy: float
    recovered_factor: float

    def __float__(self) -> float:
        return self.discrepancy


def diag_identity_check(n: int, k: int, xs) -> DiagIdentityCheck:
    """Pointwise check of the product form of the squared cosine difference."""
    if n < 1 or k < 1:
        raise ValueError(f"need n, k >= 1, got n={n}, k={k}")
    xs = np.asarray(xs, dtype=float)
    if np.any(xs < 1.0):
        raise ValueError("need sample points x >= 1")
    a = (4.0 * math.pi / k) * np.sqrt(n * (xs + np.sqrt(xs))) - _QUARTER_TURN
    b = (4.0 * math.pi / k) * np.sqrt(n * xs) - _QUARTER_TURN
    lhs = (np.cos(a) - np.cos(b)) ** 2
    product = np.sin(0.5 * (a + b)) ** 2 * np.sin(0.5 * (a - b)) ** 2
    keep = product > 1e-12
    factor = float(np.median(lhs[keep] / product[keep])) if keep.any() else math.nan
    return DiagIdentityCheck(
        discrepancy=float(np.max(np.abs(lhs - 4.0 * product))),
        paper_discrepancy=float(np.max(np.abs(lhs - product))),
        recovered_factor=factor,
    )


@dataclass(frozen=True)
class OffDiagonalReport:
    """Truncated expansion of I split into its predicted pieces.

    total = diagonal + offdiagonal is the reconstruction; allowance is the
    k²Δ error budget the expansion carries at face value; majorant the
    k²√M-scaled closed-form dominating the off-diagonal double sum.
    """

    diagonal: float
    offdiagonal: float
    allowance: float
    theorem: float
    majorant: float
    n_trunc: int

    @property
    def total(self) -> float:
        return self.diagonal + self.offdiagonal

    @property
    def rel_gap(self) -> float:
        return abs(self.total - self.theorem) / self.theorem


def offdiagonal_majorant(n_trunc: int) -> float:
    """Σ_{m<n≤N} n^(-1/4) m^(-3/4) (n-m)^(-1), the ε=0 dominating sum."""
    if n_trunc < 2:
        return 0.0
    ns = np.arange(1, n_trunc + 1, dtype=float)
    total = 0.0
    for i, n in enumerate(ns[1:], start=1):
        ms = ns[:i]
        total += float(n ** -0.25 * np.sum(ms ** -0.75 / (n - ms)))
    return total


def offdiagonal_crosscheck(m: float, delta: float, point: RationalPoint,
                           weight: WeightProfile, table: CoefficientTable,
                           n_trunc: int,
                           node_budget: int = 8_000_000) -> OffDiagonalReport:
    """Reconstruct I from the truncated dual expansion of S and compare.

    S is replaced by its n <= n_trunc main-term sum; |S|² then splits into
    the diagonal (squared brackets) and the off-diagonal double sum, both
    integrated on one shared grid that resolves the fastest cross phase.
    Quadratic cost in n_trunc keeps this a small-M instrument.
    """
    if m > 2e3:
        raise ValueError(f"crosscheck is restricted to m <= 2e3, got {m}")
    if not 1 <= n_trunc <= 200:
        raise ValueError(f"need 1 <= n_trunc <= 200, got {n_trunc}")
    _check_geometry(m, delta, weight)
    k = point.k
    lo, hi = weight.support
    # fastest phase among all cross terms: both radicals at n_trunc, summed
    peak = 4.0 * math.sqrt(float(n_trunc)) / (k * math.sqrt(lo))
    panels = max(8, math.ceil(1.25 * peak * delta),
                 math.ceil(2.0 * delta / weight.r))
    if 48 * panels > node_budget:
        raise ValueError("truncation level needs more nodes than budgeted")
    ns = np.arange(1, n_trunc + 1, dtype=np.int64)

    def pair_integrals(n_panels: int) -> np.ndarray:
        xs, wsx = _weighted_nodes(weight, n_panels)
        scale = (4.0 * math.pi / k) * np.sqrt(ns.astype(float))
        diffs = (np.cos(np.outer(scale, np.sqrt(xs + np.sqrt(xs))) - _QUARTER_TURN)
                 - np.cos(np.outer(scale, np.sqrt(xs)) - _QUARTER_TURN))
        return (diffs * wsx) @ diffs.T

    coarse = pair_integrals(panels)
    pairs = pair_integrals(2 * panels)
    if float(np.max(np.abs(pairs - coarse))) > 1e-9 * (hi - lo) * math.sqrt(hi):
        raise ValueError("pair integrals did not settle under panel doubling")

    z = (table.a[:n_trunc] * ns ** -0.75
         * np.exp(-2j * np.pi * ((ns * point.h_bar) % k) / k))
    full = float(np.real(np.conj(z) @ pairs @ z))
    diag = float(np.abs(z) ** 2 @ np.diag(pairs))
    prefactor = k / (2.0 * math.pi ** 2)
    theorem = theorem_integral(m, delta, point, weight, table).integral
    return OffDiagonalReport(
        diagonal=prefactor * diag,
        offdiagonal=prefactor * (full - diag),
        allowance=k * k * delta,
        theorem=theorem,
        majorant=k * k * math.sqrt(m) * offdiagonal_majorant(n_trunc),
        n_trunc=n_trunc,
    )


@dataclass(frozen=True)
class OmegaStatistic:
    """Normalized window sums |Σ a(n)| / √Δ over a grid of window starts."""

    ms: np.ndarray
    values: np.ndarray
    max: float
    rms: float


def omega_statistic(ms, delta: float, table: CoefficientTable) -> OmegaStatistic:
    """The empirical lower-bound witness: how large |Σ_{M≤n≤M+Δ} a(n)|/√Δ gets."""
    ms = np.asarray(ms, dtype=float)
    if ms.size == 0:
        raise ValueError("need at least one window start")
    values = np.array([
        abs(unweighted_window_sum(float(start), delta, table)) for start in ms
    ]) / math.sqrt(delta)
    return OmegaStatistic(ms=ms, values=values, max=float(values.max()),
                          rms=float(np.sqrt(np.mean(values ** 2))))


@dataclass(frozen=True)
class ExponentFit:
    """Least-squares exponents in I ≈ C Δ M^alpha k^beta."""

    alpha: float
    beta: float
    coeff: float
    rms_residual: float


def exponent_fit(results) -> ExponentFit:
    """Fit log I - log Δ against (log M, log k) by least squares."""
    results = list(results)
    if len(results) < 6:
        raise ValueError(f"need at least 6 results, got {len(results)}")
    ms = np.array([r.m for r in results])
    ks = np.array([r.point.k for r in results], dtype=float)
    integrals = np.array([r.integral for r in results])
    deltas = np.array([r.delta for r in results])
    if ms.max() / ms.min() < 10.0:
        raise ValueError("fit needs at least one decade of spread in M")
    if np.unique(ks).size < 2:
        raise ValueError("fit needs at least two distinct k")
    if np.any(integrals <= 0.0):
        raise ValueError("fit needs strictly positive integrals")
    design = np.column_stack([np.ones(len(results)), np.log(ms), np.log(ks)])
    rhs = np.log(integrals) - np.log(deltas)
    coeffs, _, rank, _ = np.linalg.lstsq(design, rhs, rcond=None)
    if rank < 3:
        raise ValueError("degenerate design: M and k values are collinear")
    residual = rhs - design @ coeffs
    return ExponentFit(alpha=float(coeffs[1]), beta=float(coeffs[2]),
                       coeff=float(math.exp(coeffs[0])),
                       rms_residual=float(np.sqrt(np.mean(residual ** 2))))


def sweep_grid(ms=SWEEP_MS, ks=SWEEP_KS, delta_coeff: float = 4.0,
               delta_exponent: float = 0.55):
    """(M, point, Δ) combinations inside the theorem regime.

    Δ = c k M^p clipped to [1e3, M]; h = 1 except at k = 1 where the point
    is untwisted; combinations violating k <= M^(1/4) are dropped.
    """
    if not 0.5 < delta_exponent <= 1.0:
        raise ValueError("the Δ-rule exponent must lie in (0.5, 1]")
    combos = []
    for m in ms:
        for k in ks:
            if k > m ** 0.25:
                continue
            point = make_rational_point(0 if k == 1 else 1, k)
            delta = min(max(delta_coeff * k * m ** delta_exponent, 1e3), m)
            combos.append((float(m), point, float(delta)))
    return combos


def run_sweep(table: CoefficientTable, ms=SWEEP_MS, ks=SWEEP_KS,
              delta_coeff: float = 4.0, delta_exponent: float = 0.55,
              rise_fraction: float = 0.25) -> list[MeanSquareResult]:
    """theorem_integral across the default grid; results are independent."""
    out = []
    for m, point, delta in sweep_grid(ms, ks, delta_coeff, delta_exponent):
        weight = build_weight(m, delta, rise_fraction * delta)
        out.append(theorem_integral(m, delta, point, weight, table))
    return out
