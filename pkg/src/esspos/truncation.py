"""Finite sections, finite-rank perturbations and eigenvalue counting probes.

Finite truncations are the numerical handle on essential spectra: negative
eigenvalue counts that stabilize as the section grows are evidence of
essential positivity, growing counts are evidence against.  Counts from
finite sections are heuristic by nature and are labelled as such.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .sequences import EigenvalueSequence

#: Eigensolve contract: per-pair residual relative to the operator norm.
EIGENSOLVE_RESIDUAL_TOL = 1e-10


def hermitian_eigensystem(matrix, check_residual=True):
    """Dense Hermitian eigendecomposition with a per-pair residual check.

    Returns ``(w, V)`` with ascending eigenvalues.  Raises
    :class:`ConsistencyError` when any residual ``||A v - w v||`` exceeds
    ``1e-10 * ||A||``.
    """
    matrix = np.asarray(matrix)
    w, v = np.linalg.eigh(matrix)
    if check_residual:
        scale = max(float(np.abs(w).max()) if w.size else 0.0, np.finfo(np.float64).tiny)
        residual = np.linalg.norm(matrix @ v - v * w, axis=0)
        worst = float(residual.max()) if residual.size else 0.0
        if worst > EIGENSOLVE_RESIDUAL_TOL * scale:
            raise ConsistencyError(
                f"eigensolve residual {worst:.3e} exceeds {EIGENSOLVE_RESIDUAL_TOL:.1e} * ||A||"
            )
    return w, v


@dataclass(frozen=True)
class HermitianTruncation:
    """An ``N x N`` Hermitian matrix, exactly Hermitian by construction."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("truncation must be a square matrix")
        if not np.array_equal(m, m.conj().T):
            raise ValueError("matrix is not exactly Hermitian; use from_matrix to symmetrize")
        m = np.array(m, copy=True)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix):
        """Build from any square matrix, storing each entry once and mirroring."""
        m = np.asarray(matrix, dtype=np.result_type(matrix, np.float64))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("truncation must be a square matrix")
        upper = np.triu(m, 1)
        diag = np.diag(np.real(np.diag(m)).astype(m.dtype))
        return cls(upper + upper.conj().T + diag)

    @classmethod
    def from_diagonal(cls, values):
        values = np.asarray(values, dtype=np.float64)
        return cls(np.diag(values))

    @property
    def dimension(self):
        return int(self.matrix.shape[0])

    def eigenvalues(self, check_residual=True):
        return hermitian_eigensystem(self.matrix, check_residual=check_residual)[0]

    def diagonal(self):
        return np.real(np.diag(self.matrix)).astype(np.float64)


@dataclass(frozen=True)
class FiniteRankPerturbation:
    """Self-adjoint finite-rank operator ``K = sum_i w_i u_i u_i^*``."""

    vectors: tuple  # tuple of 1-D arrays
    weights: tuple  # matching real weights

    def __post_init__(self):
        if len(self.vectors) != len(self.weights):
            raise ValueError("vectors and weights must have equal length")
        vecs = []
        for u in self.vectors:
            u = np.array(u, dtype=np.result_type(u, np.float64), copy=True).reshape(-1)
            u.flags.writeable = False
            vecs.append(u)
        object.__setattr__(self, "vectors", tuple(vecs))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    @property
    def rank(self):
        return len(self.vectors)

    @classmethod
    def random_gaussian(cls, rank, dim, rng, weight_scale=1.0):
        """Random unit vectors with uniform weights in ``[-weight_scale, weight_scale]``."""
        vectors = []
        for _ in range(rank):
            u = rng.standard_normal(dim)
            vectors.append(u / np.linalg.norm(u))
        weights = rng.uniform(-weight_scale, weight_scale, size=rank)
        return cls(tuple(vectors), tuple(weights))

    def matrix(self, n):
        """The top-left ``n x n`` block of ``K``; vectors must have length >= n."""
        out = np.zeros((n, n), dtype=np.result_type(*self.vectors, np.float64))
        for u, w in zip(self.vectors, self.weights):
            if u.size < n:
                raise ValueError(
                    f"perturbation vector of length {u.size} shorter than truncation size {n}"
                )
            head = u[:n]
            out += w * np.outer(head, head.conj())
        return out


def apply_finite_rank(truncation, perturbation):
    """``T + K`` restricted to the truncation's block; Hermitian by construction."""
    n = truncation.dimension
    return HermitianTruncation.from_matrix(truncation.matrix + perturbation.matrix(n))


@dataclass(frozen=True)
class NegativeCountProfile:
    """Counts of eigenvalues ``<= -eps`` across growing section sizes.

    Finite-section counting is a heuristic probe: stabilizing counts are
    evidence of essential positivity, growing counts evidence against.
    """

    sizes: tuple
    counts: tuple
    eps: float
    label: str = "heuristic (finite sections)"

    @property
    def trend(self):
        if len(self.counts) < 2:
            return "insufficient"
        diffs = [b - a for a, b in zip(self.counts, self.counts[1:])]
        if all(d == 0 for d in diffs):
            return "stable"
        if all(d >= 0 for d in diffs) and self.counts[-1] > self.counts[0]:
            return "growing"
        if all(d <= 0 for d in diffs) and self.counts[-1] < self.counts[0]:
            return "shrinking"
        return "mixed"


def negative_count_profile(builder, eps, sizes):
    """Count eigenvalues ``<= -eps`` of ``builder(N)`` for each section size."""
    sizes = [int(n) for n in sizes]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing")
    if eps <= 0:
        raise ValueError("invalid tolerance: eps must be positive")
    counts = []
    for n in sizes:
        truncation = builder(n)
        w = truncation.eigenvalues()
        counts.append(int(np.count_nonzero(w <= -eps)))
    return NegativeCountProfile(tuple(sizes), tuple(counts), float(eps))


def basis_weyl_probe(operator):
    """The diagonal ``<T e_n, e_n>`` along the canonical orthonormal basis.

    The canonical basis is weakly null, so a negative limit point of this
    sequence obstructs essential positivity.  Accepts a truncation or an
    eigenvalue sequence (whose probe is the sequence itself).
    """
    if isinstance(operator, EigenvalueSequence):
        return operator
    if isinstance(operator, HermitianTruncation):
        return EigenvalueSequence(operator.diagonal(), note="canonical-basis diagonal probe")
    raise TypeError("expected an EigenvalueSequence or HermitianTruncation")
