"""Radial profile measures on [0, 1) and their Toeplitz eigenvalue sequences.

A radial real-valued measure on the disk is represented here by its profile
on the radius axis: ``dm(r) = f(r) dr`` with ``f`` a polynomial (or a
tabulated density interpolated monotone-cubically), plus finitely many point
masses.  The associated Bergman-space Toeplitz operator is diagonal in the
monomial basis with

    ``lambda_n = 2 (n+1) * integral_0^1 r^(2n+1) dm(r)``.

Disk-convention inputs (densities against normalized area measure, uniform
masses on circles) are converted by explicit constructors; the profile is
the single primitive so the ``2r`` polar Jacobian is never double counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, interpolate

from .errors import QuadratureError
from .sequences import EigenvalueSequence, LacunaryGenerator, PolyAtomGenerator

#: Densities above this polynomial degree are rejected (desk scale).
MAX_POLY_DEGREE = 64

#: Tolerance for root isolation when taking pointwise absolute values.
ROOT_ISOLATION_TOL = 1e-12

#: Relative tolerance for adaptive quadrature of sampled densities.
QUADRATURE_RTOL = 1e-10


def _poly_interval_moment(coeffs, k, lo, hi):
    """``integral_lo^hi r^k * sum_j c_j r^j dr`` in closed form."""
    total = 0.0
    for j, c in enumerate(coeffs):
        if c != 0.0:
            p = k + j + 1
            total += c * (hi ** p - lo ** p) / p
    return total


def _poly_roots_in_unit_interval(coeffs):
    """Real roots of the density polynomial strictly inside (0, 1)."""
    arr = np.trim_zeros(np.asarray(coeffs, dtype=np.float64), "b")
    if arr.size <= 1:
        return []
    roots = np.polynomial.polynomial.polyroots(arr)
    real = [
        float(z.real)
        for z in roots
        if abs(z.imag) <= ROOT_ISOLATION_TOL and ROOT_ISOLATION_TOL < z.real < 1.0 - ROOT_ISOLATION_TOL
    ]
    real.sort()
    merged = []
    for r in real:
        if not merged or r - merged[-1] > ROOT_ISOLATION_TOL:
            merged.append(r)
    return merged


def _sign_partition(coeffs):
    """Partition [0, 1] into intervals of constant density sign.

    Returns ``((lo, hi, sign), ...)`` with ``sign`` in {-1, 0, +1} chosen so
    that ``sign * f >= 0`` on each piece.
    """
    cuts = [0.0] + _poly_roots_in_unit_interval(coeffs) + [1.0]
    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = 0.5 * (lo + hi)
        value = float(np.polynomial.polynomial.polyval(mid, np.asarray(coeffs, dtype=np.float64)))
        if abs(value) <= ROOT_ISOLATION_TOL:
            sign = 0
        else:
            sign = 1 if value > 0 else -1
        pieces.append((lo, hi, sign))
    return tuple(pieces)


@dataclass(frozen=True)
class RadialProfileMeasure:
    """Signed measure ``f(r) dr + sum_i m_i delta_{r_i}`` on [0, 1).

    ``poly`` holds ascending density coefficients; alternatively a tabulated
    density (``sample_grid``/``sample_values``) is interpolated with a
    monotone cubic.  ``pieces`` is internal: when present the effective
    density is ``sign * f`` piecewise, which is how total-variation measures
    of sign-changing polynomials stay exactly integrable.
    """

    poly: tuple = ()
    atoms: tuple = ()  # ((mass, radius), ...)
    sample_grid: np.ndarray | None = None
    sample_values: np.ndarray | None = None
    pieces: tuple = field(default=(), repr=False)

    def __post_init__(self):
        poly = tuple(float(c) for c in self.poly)
        if len(poly) > MAX_POLY_DEGREE + 1:
            raise ValueError(f"polynomial density degree capped at {MAX_POLY_DEGREE}")
        if any(not math.isfinite(c) for c in poly):
            raise ValueError("density coefficients must be finite")
        object.__setattr__(self, "poly", poly)

        atoms = tuple((float(m), float(r)) for m, r in self.atoms)
        radii = [r for _, r in atoms]
        if any(not (0.0 <= r < 1.0) for r in radii):
            raise ValueError("atom radii must lie in [0, 1)")
        if len(set(radii)) != len(radii):
            raise ValueError("atom radii must be distinct")
        if any(not math.isfinite(m) for m, _ in atoms):
            raise ValueError("atom masses must be finite")
        object.__setattr__(self, "atoms", tuple(sorted(atoms, key=lambda a: a[1])))

        if (self.sample_grid is None) != (self.sample_values is None):
            raise ValueError("sampled density needs both a grid and values")
        if self.sample_grid is not None:
            if poly:
                raise ValueError("density is either polynomial or sampled, not both")
            grid = np.asarray(self.sample_grid, dtype=np.float64)
            vals = np.asarray(self.sample_values, dtype=np.float64)
            if grid.ndim != 1 or grid.size < 2 or grid.shape != vals.shape:
                raise ValueError("sampled density needs matching 1-D grid and values")
            if not (np.all(np.diff(grid) > 0) and grid[0] >= 0.0 and grid[-1] < 1.0):
                raise ValueError("sample grid must be strictly increasing inside [0, 1)")
            if not np.all(np.isfinite(vals)):
                raise ValueError("sampled density values must be finite")
            grid = grid.copy()
            vals = vals.copy()
            grid.flags.writeable = False
            vals.flags.writeable = False
            object.__setattr__(self, "sample_grid", grid)
            object.__setattr__(self, "sample_values", vals)

    # -- constructors -------------------------------------------------

    @classmethod
    def from_poly(cls, coeffs, atoms=()):
        return cls(poly=tuple(coeffs), atoms=tuple(atoms))

    @classmethod
    def from_atoms(cls, atoms):
        return cls(atoms=tuple(atoms))

    @classmethod
    def lebesgue(cls):
        """Profile of the normalized area measure; its operator is the identity."""
        return cls(poly=(1.0,))

    @classmethod
    def from_samples(cls, grid, values, atoms=()):
        return cls(sample_grid=np.asarray(grid), sample_values=np.asarray(values), atoms=tuple(atoms))

    # -- density evaluation -------------------------------------------

    def _interpolant(self):
        return interpolate.PchipInterpolator(self.sample_grid, self.sample_values, extrapolate=True)

    def density(self, r):
        """Density value(s) at ``r``, respecting any sign partition."""
        r = np.asarray(r, dtype=np.float64)
        if self.sample_grid is not None:
            out = self._interpolant()(r)
        else:
            out = np.polynomial.polynomial.polyval(r, np.asarray(self.poly or (0.0,)))
        if self.pieces:
            sign = np.zeros_like(out)
            for lo, hi, s in self.pieces:
                mask = (r >= lo) & (r <= hi) if hi >= 1.0 else (r >= lo) & (r < hi)
                sign = np.where(mask & (sign == 0), s, sign)
            out = out * sign
        return out

    @property
    def has_density(self):
        if self.sample_grid is not None:
            return bool(np.any(self.sample_values != 0.0))
        return any(c != 0.0 for c in self.poly)

    # -- integration --------------------------------------------------

    def density_interval_moment(self, k, lo=0.0, hi=1.0):
        """``integral_lo^hi r^k * density(r) dr`` (closed form for polynomials)."""
        if not 0.0 <= lo <= hi <= 1.0:
            raise ValueError("integration interval must sit inside [0, 1]")
        if self.sample_grid is not None:
            return self._sampled_moment(k, lo, hi)
        if self.pieces:
            total = 0.0
            for a, b, s in self.pieces:
                if s == 0:
                    continue
                a2, b2 = max(a, lo), min(b, hi)
                if a2 < b2:
                    total += s * _poly_interval_moment(self.poly, k, a2, b2)
            return total
        return _poly_interval_moment(self.poly, k, lo, hi)

    def _sampled_moment(self, k, lo, hi):
        f = self._interpolant()
        hi = min(hi, float(self.sample_grid[-1]))
        lo = min(lo, hi)
        if lo >= hi:
            return 0.0
        interior = self.sample_grid[(self.sample_grid > lo) & (self.sample_grid < hi)]
        value, abserr = integrate.quad(
            lambda r: f(r) * r ** k,
            lo,
            hi,
            epsabs=1e-14,
            epsrel=QUADRATURE_RTOL,
            limit=400,
            points=interior.tolist() if 0 < interior.size <= 80 else None,
        )
        if abserr > QUADRATURE_RTOL * max(1.0, abs(value)) * 10:
            raise QuadratureError(
                f"moment quadrature reached only {abserr:.3e} absolute error", achieved=abserr
            )
        return float(value)

    def moment(self, k):
        """``integral_0^1 r^k dm(r)`` including atoms."""
        if k < 0:
            raise ValueError("moment order must be nonnegative")
        total = self.density_interval_moment(k) if (self.poly or self.sample_grid is not None) else 0.0
        for mass, radius in self.atoms:
            total += mass * radius ** k
        return float(total)

    def atom_mass_from(self, r):
        return sum(m for m, radius in self.atoms if radius >= r)

    # -- signed-measure structure --------------------------------------

    def total_variation(self):
        """Componentwise total variation: ``|density|`` plus ``|atom masses|``.

        Exact for polynomial densities via sign-change root isolation; the
        absolutely continuous part and the atoms are mutually singular, so
        the components can be handled independently.
        """
        atoms = tuple((abs(m), r) for m, r in self.atoms)
        if self.sample_grid is not None:
            return RadialProfileMeasure(
                sample_grid=np.asarray(self.sample_grid),
                sample_values=np.abs(self.sample_values),
                atoms=atoms,
            )
        if not self.poly:
            return RadialProfileMeasure(atoms=atoms)
        if self.pieces:  # already a total variation
            return RadialProfileMeasure(poly=self.poly, atoms=atoms, pieces=self.pieces)
        partition = _sign_partition(self.poly)
        if all(s >= 0 for _, _, s in partition):
            return RadialProfileMeasure(poly=self.poly, atoms=atoms)
        if all(s <= 0 for _, _, s in partition):
            return RadialProfileMeasure(poly=tuple(-c for c in self.poly), atoms=atoms)
        return RadialProfileMeasure(poly=self.poly, atoms=atoms, pieces=partition)

    def is_nonnegative(self):
        if any(m < 0 for m, _ in self.atoms):
            return False
        if self.sample_grid is not None:
            return bool(np.all(self.sample_values >= 0.0))
        if self.pieces:
            return True
        if not self.poly:
            return True
        return all(s >= 0 for _, _, s in _sign_partition(self.poly))

    def weighted_by_one_minus_r_squared(self):
        """The measure ``(1 - r^2) dm(r)``; polynomial structure is preserved."""
        atoms = tuple((m * (1.0 - r * r), r) for m, r in self.atoms)
        if self.sample_grid is not None:
            return RadialProfileMeasure(
                sample_grid=np.asarray(self.sample_grid),
                sample_values=self.sample_values * (1.0 - np.asarray(self.sample_grid) ** 2),
                atoms=atoms,
            )
        coeffs = list(self.poly) + [0.0, 0.0]
        for j, c in enumerate(self.poly):
            coeffs[j + 2] -= c
        return RadialProfileMeasure(poly=tuple(coeffs), atoms=atoms, pieces=self.pieces)

    # -- linear structure (polynomial/atomic measures) ------------------

    def __add__(self, other):
        if not isinstance(other, RadialProfileMeasure):
            return NotImplemented
        if self.sample_grid is not None or other.sample_grid is not None or self.pieces or other.pieces:
            return NotImplemented
        n = max(len(self.poly), len(other.poly))
        poly = tuple(
            (self.poly[j] if j < len(self.poly) else 0.0)
            + (other.poly[j] if j < len(other.poly) else 0.0)
            for j in range(n)
        )
        masses = {}
        for m, r in self.atoms + other.atoms:
            masses[r] = masses.get(r, 0.0) + m
        atoms = tuple((m, r) for r, m in masses.items() if m != 0.0)
        return RadialProfileMeasure(poly=poly, atoms=atoms)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        if self.sample_grid is not None or self.pieces:
            return NotImplemented
        return RadialProfileMeasure(
            poly=tuple(scalar * c for c in self.poly),
            atoms=tuple((scalar * m, r) for m, r in self.atoms),
        )

    __rmul__ = __mul__


@dataclass(frozen=True)
class DiskMoment:
    """Even disk moment ``m_{2n} = integral_D |w|^(2n) d(mu_disk)``."""

    order: int
    value: float


def disk_moment(measure, n):
    """``m_{2n}`` of the disk measure represented by a profile measure."""
    if n < 0:
        raise ValueError("moment index must be nonnegative")
    return DiskMoment(2 * n, 2.0 * measure.moment(2 * n + 1))


def moment(measure, k):
    """Profile moment ``integral_0^1 r^k dm(r)``."""
    return measure.moment(k)


def eigenvalue_sequence(measure, n_last):
    """Diagonal ``lambda_n = 2(n+1) moment(2n+1)`` for ``n = 0 .. n_last``.

    Polynomial/atomic measures get a closed-form generator attached; sampled
    or piecewise densities are integrated per index.
    """
    if n_last < 1:
        raise ValueError("need at least indices 0 and 1")
    n = np.arange(n_last + 1, dtype=np.float64)
    if measure.sample_grid is None and not measure.pieces:
        generator = PolyAtomGenerator(coeffs=measure.poly, atoms=measure.atoms)
        return EigenvalueSequence(generator(n), generator=generator)
    values = np.array([2.0 * (k + 1) * measure.moment(2 * k + 1) for k in range(n_last + 1)])
    return EigenvalueSequence(values, note="eigenvalues integrated numerically per index")


def zhao_zheng_symbol(a, b):
    """Profile measure of the radial disk density ``|w|^2 + a |w| + b``.

    The eigenvalues are ``(n+1)/(n+2) + 2a(n+1)/(2n+3) + b`` with boundary
    limit ``1 + a + b``.
    """
    return RadialProfileMeasure(poly=(float(b), float(a), 1.0))


def lacunary_operator(n_terms=256):
    """Diagonal operator with -1 at power-of-two indices, 0 elsewhere."""
    generator = LacunaryGenerator()
    values = generator(np.arange(n_terms))
    return EigenvalueSequence(values, generator=generator)


def boundedness_check(seq):
    """Re-export of :func:`esspos.sequences.boundedness_check` (operator norm of the diagonal)."""
    from .sequences import boundedness_check as _check

    return _check(seq)


def disk_to_profile(*, density_poly=None, density_samples=None, atom=None):
    """Convert disk-convention radial data to a profile measure.

    A disk density ``f`` against normalized area measure maps to the profile
    density with the *same* radial function, because
    ``(n+1) * 2 * integral r^(2n) f(r) r dr = 2(n+1) integral r^(2n+1) f(r) dr``.
    A uniform mass ``c`` on the circle of radius ``r0 > 0`` maps to a profile
    atom of mass ``c / (2 r0)`` at ``r0``.
    """
    given = [x is not None for x in (density_poly, density_samples, atom)]
    if sum(given) != 1:
        raise ValueError("provide exactly one of density_poly, density_samples, atom")
    if density_poly is not None:
        return RadialProfileMeasure(poly=tuple(density_poly))
    if density_samples is not None:
        grid, values = density_samples
        return RadialProfileMeasure.from_samples(grid, values)
    mass, radius = atom
    if radius == 0.0:
        raise ValueError(
            "a disk mass concentrated at the origin has no circle-average profile; "
            "its only effect is the single moment m_0 = mass, which is not "
            "representable as a profile atom (a profile atom at radius 0 is a no-op)"
        )
    if not 0.0 < radius < 1.0:
        raise ValueError("circle radius must lie in (0, 1)")
    return RadialProfileMeasure(atoms=((float(mass) / (2.0 * radius), float(radius)),))
