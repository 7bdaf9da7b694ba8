"""Carleson-measure tests for radial measures.

Two criteria are computed side by side.  The literal annulus criterion takes
``sup_r (1-r^2)^-(2+alpha) * m([r, 1))`` over a dyadic grid.  The operative
moment-ratio test compares disk moments against the weighted monomial norms
``w_n(alpha)``; for a radial measure the monomial family is diagonal, so the
ratio supremum *is* the embedding constant.  The two disagree on the
normalized area measure itself (the literal exponent classifies it as
non-Carleson while the embedding constant is 1); both numbers are reported
and the disagreement is flagged, with the moment-ratio test authoritative
for the classification pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConsistencyError
from .radial import disk_moment

#: Dyadic grid depth: r_k = 1 - 2^-k for k = 0 .. GRID_DEPTH.
GRID_DEPTH = 40

#: Monotone growth by this factor over the trailing window flags divergence.
DIVERGENCE_FACTOR = 1.5

#: Trailing window length for the annulus-criterion divergence test.
DIVERGENCE_WINDOW = 5

#: Pointwise slack for the exact weighted-measure inequality.
IMPLICATION_TOL = 1e-12


def _require_nonnegative(measure):
    if not measure.is_nonnegative():
        raise ValueError("apply to total variation: Carleson tests need a nonnegative measure")


def annulus_mass(measure, r):
    """``m([r, 1))``: density integral over [r, 1) plus atoms at radii >= r."""
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise ValueError("annulus cut must lie in [0, 1)")
    _require_nonnegative(measure)
    return measure.density_interval_moment(0, r, 1.0) + measure.atom_mass_from(r)


def weight_norm(n, alpha):
    """``w_n(alpha) = integral_D |z|^(2n) (1-|z|^2)^alpha dA = B(n+1, alpha+1)``."""
    if alpha <= -1:
        raise ValueError("weight exponent must exceed -1")
    if alpha == 0.0:
        return 1.0 / (n + 1.0)
    if alpha == 1.0:
        return 1.0 / ((n + 1.0) * (n + 2.0))
    return float(special.beta(n + 1.0, alpha + 1.0))


def _dyadic_grid(measure, depth):
    rs = [1.0 - 2.0 ** (-k) for k in range(depth + 1)]
    rs.extend(r for _, r in measure.atoms if r > 0.0)
    return sorted(set(rs))


def _annulus_ratio_scan(measure, alpha, depth):
    grid = _dyadic_grid(measure, depth)
    ratios = []
    for r in grid:
        mass = annulus_mass(measure, r)
        ratios.append(mass / (1.0 - r * r) ** (2.0 + alpha))
    # local refinement around the running maximum
    if ratios:
        best = int(np.argmax(ratios))
        lo = grid[best - 1] if best > 0 else 0.0
        hi = grid[best + 1] if best + 1 < len(grid) else grid[best]
        for r in np.linspace(lo, hi, 10)[1:-1]:
            mass = annulus_mass(measure, float(r))
            grid.append(float(r))
            ratios.append(mass / (1.0 - r * r) ** (2.0 + alpha))
    dyadic_tail = [
        mass / (1.0 - r * r) ** (2.0 + alpha)
        for r, mass in (
            (1.0 - 2.0 ** (-k), annulus_mass(measure, 1.0 - 2.0 ** (-k)))
            for k in range(depth - DIVERGENCE_WINDOW + 1, depth + 1)
        )
    ]
    diverging = len(dyadic_tail) == DIVERGENCE_WINDOW and all(
        b > a for a, b in zip(dyadic_tail, dyadic_tail[1:])
    ) and dyadic_tail[-1] >= DIVERGENCE_FACTOR * dyadic_tail[0] > 0.0
    pairs = sorted(zip(grid, ratios))
    return pairs, diverging


def paper_criterion_sup(measure, alpha=0.0, depth=GRID_DEPTH):
    """Literal annulus criterion ``sup_r (1-r^2)^-(2+alpha) m([r,1))``.

    Returns ``math.inf`` when the dyadic tail grows monotonically by the
    divergence factor; see the module docstring for the exponent caveat.
    """
    _require_nonnegative(measure)
    pairs, diverging = _annulus_ratio_scan(measure, alpha, depth)
    if diverging:
        return math.inf
    return max((q for _, q in pairs), default=0.0)


def _moment_schedule(n_max):
    ns = list(range(0, min(64, n_max) + 1))
    n = 128
    while n <= n_max:
        ns.append(n)
        n *= 2
    return ns


def _moment_ratio_scan(measure, alpha, n_max):
    ns = _moment_schedule(n_max)
    ratios = [disk_moment(measure, n).value / weight_norm(n, alpha) for n in ns]
    dyadic = [(n, q) for n, q in zip(ns, ratios) if n >= 64]
    diverging = False
    if len(dyadic) >= 3:
        tail = [q for _, q in dyadic[-3:]]
        diverging = all(b > a for a, b in zip(tail, tail[1:])) and tail[-1] >= DIVERGENCE_FACTOR * tail[0] > 0.0
    return list(zip(ns, ratios)), diverging


def moment_ratio_sup(measure, alpha=0.0, n_max=1024):
    """Diagonal embedding constant ``sup_n m_{2n} / w_n(alpha)``.

    The supremum is taken over a dense head plus a dyadic tail schedule;
    monotone growth across the trailing schedule points reports ``math.inf``
    (not Carleson).  For generator-friendly measures with ``alpha = 0`` the
    ratio equals the eigenvalue sequence, so the certified limit extends the
    supremum beyond the schedule.
    """
    if n_max < 64:
        raise ValueError("schedule needs n_max >= 64")
    _require_nonnegative(measure)
    pairs, diverging = _moment_ratio_scan(measure, alpha, n_max)
    if diverging:
        return math.inf
    sup = max((q for _, q in pairs), default=0.0)
    if alpha == 0.0 and measure.sample_grid is None and not measure.pieces:
        # ratio_n = lambda_n of the measure; the polynomial part tends to the
        # coefficient sum, which bounds the unscheduled tail
        tail_limit = math.fsum(measure.poly) if measure.poly else 0.0
        sup = max(sup, tail_limit)
    return sup


@dataclass(frozen=True)
class CarlesonReport:
    """Both Carleson numbers for one measure, with grid diagnostics."""

    alpha: float
    paper_criterion_sup: float
    moment_ratio_sup: float
    paper_diverging: bool
    moment_diverging: bool
    criteria_agree: bool
    annulus_grid: tuple  # ((r, ratio), ...) on the dyadic grid
    moment_schedule: tuple  # ((n, ratio), ...)

    def __post_init__(self):
        if self.paper_criterion_sup < 0 or self.moment_ratio_sup < 0:
            raise ValueError("criterion suprema must be nonnegative")


def carleson_report(measure, alpha=0.0, n_max=1024, depth=GRID_DEPTH):
    """Evaluate both criteria on a nonnegative measure and flag disagreement."""
    _require_nonnegative(measure)
    annulus_pairs, paper_div = _annulus_ratio_scan(measure, alpha, depth)
    moment_pairs, moment_div = _moment_ratio_scan(measure, alpha, n_max)
    paper_sup = math.inf if paper_div else max((q for _, q in annulus_pairs), default=0.0)
    moment_sup = math.inf if moment_div else max((q for _, q in moment_pairs), default=0.0)
    dyadic_only = [(r, q) for r, q in annulus_pairs]
    return CarlesonReport(
        alpha=float(alpha),
        paper_criterion_sup=paper_sup,
        moment_ratio_sup=moment_sup,
        paper_diverging=paper_div,
        moment_diverging=moment_div,
        criteria_agree=paper_div == moment_div,
        annulus_grid=tuple(dyadic_only[: depth + 1]),
        moment_schedule=tuple(moment_pairs),
    )


@dataclass(frozen=True)
class WeightedImplicationReport:
    """Pointwise check that weighting by ``(1 - r^2)`` preserves the Carleson bound."""

    grid: tuple
    lhs: tuple  # (1-r^2)^-3 * integral_r^1 (1-s^2) dm
    rhs: tuple  # (1-r^2)^-2 * integral_r^1 dm
    max_relative_violation: float
    weighted_ratio_sup: float
    base_ratio_sup: float
    passed: bool


def weighted_implication_check(measure, n_max=256, depth=20):
    """Verify ``(1-r^2)^-3 int_r^1 (1-s^2) dm <= (1-r^2)^-2 int_r^1 dm`` pointwise.

    The inequality is exact (``1 - s^2 <= 1 - r^2`` on the annulus), so any
    violation beyond rounding is an internal-consistency failure.  The
    moment-ratio supremum of the weighted measure at ``alpha = 1`` is also
    compared against the base supremum at ``alpha = 0``.
    """
    _require_nonnegative(measure)
    weighted = measure.weighted_by_one_minus_r_squared()
    grid = _dyadic_grid(measure, depth)
    lhs = []
    rhs = []
    violation = 0.0
    for r in grid:
        one_minus = 1.0 - r * r
        left = annulus_mass(weighted, r) / one_minus ** 3
        right = annulus_mass(measure, r) / one_minus ** 2
        lhs.append(left)
        rhs.append(right)
        violation = max(violation, (left - right) / max(1.0, abs(right)))
    if violation > IMPLICATION_TOL:
        raise ConsistencyError(
            f"weighted annulus inequality violated by {violation:.3e} (bug signal)"
        )
    weighted_sup = moment_ratio_sup(weighted, alpha=1.0, n_max=n_max)
    base_sup = moment_ratio_sup(measure, alpha=0.0, n_max=n_max)
    passed = violation <= IMPLICATION_TOL and weighted_sup <= base_sup + 1e-9
    return WeightedImplicationReport(
        grid=tuple(grid),
        lhs=tuple(lhs),
        rhs=tuple(rhs),
        max_relative_violation=violation,
        weighted_ratio_sup=weighted_sup,
        base_ratio_sup=base_sup,
        passed=passed,
    )
