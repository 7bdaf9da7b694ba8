"""Essential-positivity classification of diagonal eigenvalue sequences.

A bounded diagonal self-adjoint operator is essentially positive exactly when
``liminf lambda_n >= 0``.  Finite data cannot decide a lim inf, so verdicts
are certified only when a closed-form generator settles the tail or when the
tail infima stabilize across a doubling window schedule; everything else is
reported as Inconclusive rather than guessed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .sequences import DEFAULT_EPS, tail_infimum

#: Successive tail infima within this absolute distance count as stabilized.
WINDOW_STABILIZATION_TOL = 1e-6


class Verdict(str, enum.Enum):
    POSITIVE = "Positive"
    ESSENTIALLY_POSITIVE_ONLY = "EssentiallyPositiveOnly"
    NOT_ESSENTIALLY_POSITIVE = "NotEssentiallyPositive"
    INCONCLUSIVE = "Inconclusive"


#: Certificate bases that rest on a closed form rather than finite data.
STRUCTURAL_BASES = frozenset(
    {"generator-limit", "generator-subsequence", "compact-structural"}
)


@dataclass(frozen=True)
class Classification:
    """Verdict plus a certificate that can be re-checked from the sequence alone."""

    verdict: Verdict
    tolerance: float
    certificate: dict

    @property
    def essentially_positive(self):
        """True/False for certified verdicts, ``None`` for Inconclusive."""
        if self.verdict in (Verdict.POSITIVE, Verdict.ESSENTIALLY_POSITIVE_ONLY):
            return True
        if self.verdict is Verdict.NOT_ESSENTIALLY_POSITIVE:
            return False
        return None

    @property
    def is_certified(self):
        return self.verdict is not Verdict.INCONCLUSIVE

    def basis(self):
        return self.certificate.get("basis", "")


def window_schedule(seq):
    """Doubling window starts ``[w, 2w, 4w]`` fitted to the stored head."""
    base = max(1, seq.last_index // 4)
    return [w for w in (base, 2 * base, 4 * base) if w <= seq.last_index]


def _window_certificate(seq):
    starts = window_schedule(seq)
    infima = [tail_infimum(seq, w) for w in starts]
    stabilized = len(infima) == 3 and all(
        abs(infima[i + 1] - infima[i]) <= WINDOW_STABILIZATION_TOL
        for i in range(len(infima) - 1)
    )
    return starts, infima, stabilized


def classify_diagonal(seq, eps=DEFAULT_EPS):
    """Classify a diagonal operator by the sign of its eigenvalue tail.

    Certification order: a generator-backed negative subsequence or closed
    form limit decides first; a structurally zero limit certifies a compact
    operator; otherwise the doubling-window tail infima are consulted, and a
    computed limit inside ``[-eps, eps]`` yields Inconclusive because the
    dichotomy at zero is genuine boundary behaviour.
    """
    if eps <= 0:
        raise ValueError("invalid tolerance: eps must be positive")
    values = seq.values
    min_index = int(np.argmin(values))
    min_value = float(values[min_index])
    certificate = {
        "min_computed": min_value,
        "min_index": min_index,
        "generator": seq.generator.describe() if seq.generator is not None else None,
    }

    liminf = seq.generator.liminf_value() if seq.generator is not None else None
    limit_info = seq.limit_info()

    # 1. generator-backed negative subsequence
    if liminf is not None and liminf < -eps:
        witness = seq.generator.negative_witness()
        certificate.update(
            basis="generator-subsequence",
            liminf=liminf,
            witness=witness,
        )
        return Classification(Verdict.NOT_ESSENTIALLY_POSITIVE, eps, certificate)

    # 2. closed-form limit
    if limit_info is not None:
        limit, structural_zero, provenance = limit_info
        certificate.update(basis="generator-limit", limit=limit, limit_provenance=provenance)
        if limit < -eps:
            return Classification(Verdict.NOT_ESSENTIALLY_POSITIVE, eps, certificate)
        if limit > eps:
            verdict = (
                Verdict.POSITIVE
                if min_value >= -eps
                else Verdict.ESSENTIALLY_POSITIVE_ONLY
            )
            return Classification(verdict, eps, certificate)
        if structural_zero:
            certificate["basis"] = "compact-structural"
            certificate["note"] = (
                "eigenvalues vanish geometrically, so the operator is compact; "
                "adding its negation makes it positive"
            )
            verdict = (
                Verdict.POSITIVE
                if min_value >= -eps
                else Verdict.ESSENTIALLY_POSITIVE_ONLY
            )
            return Classification(verdict, eps, certificate)
        certificate["note"] = (
            f"computed limit {limit!r} lies within the tolerance band [-eps, eps]; "
            "the sign of the boundary value is not certified"
        )
        return Classification(Verdict.INCONCLUSIVE, eps, certificate)

    # 3. finite data: doubling window schedule
    starts, infima, stabilized = _window_certificate(seq)
    certificate.update(
        basis="data-window",
        window_starts=starts,
        window_infima=infima,
        stabilized=stabilized,
        label="heuristic tail evidence from finite data",
    )
    if stabilized and infima[-1] <= -eps:
        certificate["label"] = "stabilized doubling-window tail infimum"
        return Classification(Verdict.NOT_ESSENTIALLY_POSITIVE, eps, certificate)
    if min_value >= -eps:
        return Classification(Verdict.POSITIVE, eps, certificate)
    if len(infima) == 3 and all(v >= -eps for v in infima):
        return Classification(Verdict.ESSENTIALLY_POSITIVE_ONLY, eps, certificate)
    return Classification(Verdict.INCONCLUSIVE, eps, certificate)
