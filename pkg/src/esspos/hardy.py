"""Real symbols on the circle and their Toeplitz-matrix finite sections.

For a real bounded circle symbol, positive and essentially positive collapse
to the same condition: the essential infimum of the symbol is nonnegative.
The classifier therefore never emits the intermediate verdict.  Finite
Toeplitz sections provide the numerical cross-check: all their eigenvalues
lie in the closed convex hull of the symbol's range, and the extreme
eigenvalues approach the hull endpoints monotonically as the section grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .classify import Classification, Verdict
from .errors import ConsistencyError
from .sequences import DEFAULT_EPS
from .truncation import HermitianTruncation, hermitian_eigensystem

#: Band limit for Fourier data (desk scale).
MAX_BAND = 1024

#: Real-symbol condition f_{-k} = conj(f_k) must hold to this tolerance.
REALITY_TOL = 1e-12

#: When both representations are given, the DFT of the samples must match.
DFT_MATCH_TOL = 1e-10

#: Eigenvalues may exceed the hull by at most this much (rounding allowance).
HULL_TOL = 1e-8

#: Bisection tolerance on the angle for extremum refinement.
EXTREMUM_THETA_TOL = 1e-12


@dataclass(frozen=True)
class CircleSymbol:
    """Circle symbol as Fourier coefficients and/or uniform samples.

    ``coefficients`` is a sorted tuple of ``(k, value)`` pairs; ``samples``
    are values at ``theta_j = 2 pi j / M``.  Real symbols (the only ones the
    classifiers accept) satisfy ``f_{-k} = conj(f_k)``.
    """

    coefficients: tuple = ()
    samples: np.ndarray | None = None
    note: str = field(default="", compare=False)

    def __post_init__(self):
        coeffs = tuple(sorted((int(k), complex(v)) for k, v in self.coefficients))
        if coeffs:
            ks = [k for k, _ in coeffs]
            if len(set(ks)) != len(ks):
                raise ValueError("duplicate Fourier index")
            if max(abs(k) for k in ks) > MAX_BAND:
                raise ValueError(f"band limited to |k| <= {MAX_BAND}")
            if any(not (math.isfinite(v.real) and math.isfinite(v.imag)) for _, v in coeffs):
                raise ValueError("Fourier coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)
        if self.samples is not None:
            samples = np.asarray(self.samples, dtype=np.float64).reshape(-1)
            if samples.size < 2:
                raise ValueError("need at least two samples")
            if not np.all(np.isfinite(samples)):
                raise ValueError("samples must be finite")
            samples = samples.copy()
            samples.flags.writeable = False
            object.__setattr__(self, "samples", samples)
        if coeffs and self.samples is not None:
            self._check_dft_consistency()

    def _check_dft_consistency(self):
        m = self.samples.size
        fourier = np.fft.fft(self.samples) / m  # f_k = (1/M) sum f_j e^{-2pi i jk/M}
        for k, v in self.coefficients:
            if abs(k) > m // 4:
                continue
            got = fourier[k % m]
            if abs(got - v) > DFT_MATCH_TOL:
                raise ValueError(
                    f"samples and Fourier data disagree at k={k}: {got!r} vs {v!r}"
                )

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_fourier(cls, table, complete_conjugate=True):
        """Build from a ``k -> value`` mapping.

        With ``complete_conjugate`` every index missing its mirror gets
        ``f_{-k} = conj(f_k)`` filled in, which makes the symbol real.
        """
        table = {int(k): complex(v) for k, v in dict(table).items()}
        if complete_conjugate:
            for k in list(table):
                if -k not in table:
                    table[-k] = table[k].conjugate()
        return cls(tuple(table.items()))

    @classmethod
    def from_samples(cls, values):
        return cls(samples=np.asarray(values, dtype=np.float64))

    @classmethod
    def from_samples_csv(cls, path):
        """One real value per line; row ``j`` is the sample at ``2 pi j / M``."""
        values = []
        with open(path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                text = line.strip()
                if not text:
                    continue
                try:
                    values.append(float(text))
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: not a real number: {text!r}") from exc
        return cls.from_samples(values)

    # -- structure -------------------------------------------------------

    @property
    def fourier(self):
        return dict(self.coefficients)

    @property
    def band(self):
        return max((abs(k) for k, _ in self.coefficients), default=0)

    @property
    def grid_size(self):
        return 0 if self.samples is None else int(self.samples.size)

    def is_real(self):
        table = self.fourier
        if table:
            for k, v in table.items():
                mirror = table.get(-k, 0.0)
                if abs(mirror - np.conj(v)) > REALITY_TOL:
                    return False
        return True

    def require_real(self):
        if not self.is_real():
            raise ValueError("non-real symbol rejected: need f_{-k} = conj(f_k)")

    def coefficient(self, k):
        return self.fourier.get(int(k), 0.0 + 0.0j)

    def evaluate(self, theta):
        """Trigonometric-polynomial value(s) at angle(s) ``theta`` (real part)."""
        if not self.coefficients:
            raise ValueError("no Fourier data to evaluate")
        theta = np.asarray(theta, dtype=np.float64)
        total = np.zeros(theta.shape, dtype=np.complex128)
        for k, v in self.coefficients:
            total += v * np.exp(1j * k * theta)
        return total.real if self.is_real() else total

    def _derivative_value(self, theta):
        total = 0.0 + 0.0j
        for k, v in self.coefficients:
            total += 1j * k * v * np.exp(1j * k * theta)
        return total.real

    def grid_values(self, m):
        """Values at ``theta_j = 2 pi j / m`` via the inverse FFT."""
        arr = np.zeros(m, dtype=np.complex128)
        for k, v in self.coefficients:
            arr[k % m] += v
        values = np.fft.ifft(arr) * m
        return values.real


@dataclass(frozen=True)
class EssentialRangeEstimate:
    """Estimated essential infimum/supremum of a real circle symbol."""

    lower: float
    upper: float
    method: str

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")


def _refine_extremum(symbol, theta_lo, theta_hi):
    # bisection on the derivative sign change bracketed by grid neighbours
    d_lo = symbol._derivative_value(theta_lo)
    d_hi = symbol._derivative_value(theta_hi)
    if d_lo == 0.0:
        return theta_lo
    if d_hi == 0.0 or (d_lo > 0) == (d_hi > 0):
        return None
    while theta_hi - theta_lo > EXTREMUM_THETA_TOL:
        mid = 0.5 * (theta_lo + theta_hi)
        d_mid = symbol._derivative_value(mid)
        if d_mid == 0.0:
            return mid
        if (d_mid > 0) == (d_lo > 0):
            theta_lo, d_lo = mid, d_mid
        else:
            theta_hi = mid
    return 0.5 * (theta_lo + theta_hi)


def essential_range_bounds(symbol, grid_size=None):
    """Estimate ``[ess inf f, ess sup f]`` of a real symbol.

    Band-limited symbols are evaluated on a fine grid and every local
    extremum is refined by bisection on the derivative, which makes the
    bounds exact for trigonometric polynomials.  Sampled-only symbols return
    the sample extremes: null sets are invisible at sampling resolution.
    """
    symbol.require_real()
    if symbol.coefficients:
        band = max(symbol.band, 1)
        m = int(grid_size) if grid_size else max(4096, 8 * band)
        if m < 8 * band:
            raise ValueError("grid size must be at least 8 times the band")
        values = symbol.grid_values(m)
        thetas = 2.0 * math.pi * np.arange(m) / m
        candidates = list(values)
        left = np.roll(values, 1)
        right = np.roll(values, -1)
        extremal = ((values >= left) & (values >= right)) | ((values <= left) & (values <= right))
        for j in np.nonzero(extremal)[0]:
            lo = thetas[j] - 2.0 * math.pi / m
            hi = thetas[j] + 2.0 * math.pi / m
            theta = _refine_extremum(symbol, lo, hi)
            if theta is not None:
                candidates.append(float(symbol.evaluate(theta)))
        return EssentialRangeEstimate(
            lower=float(min(candidates)),
            upper=float(max(candidates)),
            method=f"trigonometric polynomial, grid {m} with derivative refinement",
        )
    return EssentialRangeEstimate(
        lower=float(symbol.samples.min()),
        upper=float(symbol.samples.max()),
        method=(
            "sample quantiles (0, 1); null sets cannot be detected from samples, "
            "bounds hold up to sampling resolution"
        ),
    )


def classify_hardy(symbol, eps=DEFAULT_EPS, grid_size=None):
    """Classify a real circle symbol by its essential infimum.

    For these operators positivity and essential positivity are equivalent,
    so the verdict is Positive exactly when the essential infimum is at
    least ``-eps`` and NotEssentiallyPositive otherwise; the intermediate
    verdict is never emitted and the certificate records the collapse.
    """
    if eps <= 0:
        raise ValueError("invalid tolerance: eps must be positive")
    symbol.require_real()
    bounds = essential_range_bounds(symbol, grid_size=grid_size)
    certificate = {
        "basis": "essential-range",
        "essential_infimum": bounds.lower,
        "essential_supremum": bounds.upper,
        "method": bounds.method,
        "note": (
            "for real circle symbols, positive and essentially positive are "
            "equivalent; the intermediate verdict cannot occur"
        ),
    }
    if not symbol.coefficients:
        certificate["qualifier"] = "up to sampling resolution"
    verdict = Verdict.POSITIVE if bounds.lower >= -eps else Verdict.NOT_ESSENTIALLY_POSITIVE
    return Classification(verdict, eps, certificate)


def toeplitz_truncation(symbol, n):
    """The ``n x n`` section with entries ``T[j, k] = f_{j-k}``."""
    symbol.require_real()
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if not symbol.coefficients:
        raise ValueError("Toeplitz sections need Fourier coefficients")
    column = np.array([symbol.coefficient(j) for j in range(n)], dtype=np.complex128)
    row = np.array([symbol.coefficient(-j) for j in range(n)], dtype=np.complex128)
    matrix = linalg.toeplitz(column, row)
    if np.allclose(matrix.imag, 0.0, atol=0.0):
        matrix = matrix.real
    return HermitianTruncation.from_matrix(matrix)


@dataclass(frozen=True)
class HullCheckReport:
    """Per-size extreme eigenvalues against the convex hull of the range."""

    lower: float
    upper: float
    sizes: tuple
    min_eigenvalues: tuple
    max_eigenvalues: tuple
    gaps_lower: tuple
    gaps_upper: tuple
    all_within_hull: bool
    note: str = (
        "extreme-eigenvalue convergence toward the hull endpoints is expected "
        "but heuristic; it is reported, not asserted"
    )


def hull_cross_check(symbol, sizes):
    """Check every section spectrum against the convex hull of the symbol range.

    An eigenvalue outside the hull by more than the rounding allowance is an
    internal-consistency failure and raises :class:`ConsistencyError`.
    """
    symbol.require_real()
    bounds = essential_range_bounds(symbol)
    sizes = [int(n) for n in sizes]
    mins, maxs, gaps_lo, gaps_hi = [], [], [], []
    for n in sizes:
        section = toeplitz_truncation(symbol, n)
        w, _ = hermitian_eigensystem(section.matrix)
        lo, hi = float(w[0]), float(w[-1])
        if lo < bounds.lower - HULL_TOL or hi > bounds.upper + HULL_TOL:
            raise ConsistencyError(
                f"section eigenvalue escapes the hull at N={n}: "
                f"[{lo!r}, {hi!r}] vs [{bounds.lower!r}, {bounds.upper!r}] (bug signal)"
            )
        mins.append(lo)
        maxs.append(hi)
        gaps_lo.append(lo - bounds.lower)
        gaps_hi.append(bounds.upper - hi)
    return HullCheckReport(
        lower=bounds.lower,
        upper=bounds.upper,
        sizes=tuple(sizes),
        min_eigenvalues=tuple(mins),
        max_eigenvalues=tuple(maxs),
        gaps_lower=tuple(gaps_lo),
        gaps_upper=tuple(gaps_hi),
        all_within_hull=True,
    )
