"""Eigenvalue sequences of diagonal self-adjoint operators.

The central object is :class:`EigenvalueSequence`: a finite stored head
``lambda_0 .. lambda_N`` together with an optional closed-form generator that
evaluates the sequence at arbitrary indices and certifies tail behaviour
(limit, lim inf, global bound).  Classification logic lives in
:mod:`esspos.classify`; the constructors that produce sequences from radial
measures live in :mod:`esspos.radial`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

#: Shared default tolerance for sign decisions on eigenvalue data.
DEFAULT_EPS = 1e-8

#: Stored values must match an attached generator to this relative accuracy.
GENERATOR_MATCH_RTOL = 1e-12


class SequenceGenerator:
    """Closed-form descriptor of a diagonal eigenvalue sequence.

    Subclasses evaluate ``lambda_n`` at arbitrary indices and, where the
    closed form allows it, certify tail behaviour.  The default
    implementations return ``None``, meaning "no certified information".
    """

    def __call__(self, n):
        """Vectorized evaluation at indices ``n`` (array-like of ints)."""
        raise NotImplementedError

    def limit_value(self):
        """Certified limit of ``lambda_n`` as ``n -> inf``, or ``None``."""
        return None

    def limit_is_structural_zero(self):
        """True when the limit is zero by the *form* of the generator.

        A structural zero (e.g. a purely atomic measure, whose eigenvalues
        decay geometrically) certifies compactness of the operator.  A limit
        that merely evaluates to zero as a floating-point sum of coefficients
        is not structural and is treated as a boundary case.
        """
        return False

    def liminf_value(self):
        """Certified lim inf of the sequence, or ``None``."""
        return self.limit_value()

    def abs_bound(self):
        """Upper bound for ``sup_n |lambda_n|`` over all indices, or ``None``."""
        return None

    def deviation_bound(self, n0):
        """Bound for ``sup_{n >= n0} |lambda_n - limit|``, or ``None``."""
        return None

    def negative_witness(self, head=8):
        """Witness of a negative subsequence: dict with indices/value, or ``None``."""
        return None

    def series_support(self, n_max):
        """Sparse support ``(indices, values)`` of the sequence up to ``n_max``.

        Only generators whose sequences are mostly zero implement this; it
        lets power-series evaluation skip the zero terms.  Returns ``None``
        when the sequence has dense support.
        """
        return None

    def describe(self):
        return type(self).__name__


@dataclass(frozen=True)
class PolyAtomGenerator(SequenceGenerator):
    """Eigenvalues of a radial measure with polynomial density plus atoms.

    ``lambda_n = sum_j 2(n+1) c_j / (2n+2+j) + sum_i 2(n+1) m_i r_i^(2n+1)``

    The density part converges to ``sum_j c_j``; every atom contributes a
    geometrically decaying term, so a purely atomic generator certifies a
    structural zero limit (a compact operator).
    """

    coeffs: tuple = ()
    atoms: tuple = ()  # ((mass, radius), ...), radii in [0, 1)

    def __call__(self, n):
        n = np.asarray(n, dtype=np.float64)
        out = np.zeros_like(n)
        for j, c in enumerate(self.coeffs):
            if c != 0.0:
                out = out + 2.0 * (n + 1.0) * c / (2.0 * n + 2.0 + j)
        for mass, radius in self.atoms:
            if mass != 0.0:
                out = out + 2.0 * (n + 1.0) * mass * radius ** (2.0 * n + 1.0)
        return out

    def limit_value(self):
        return math.fsum(self.coeffs) if self.coeffs else 0.0

    def limit_is_structural_zero(self):
        return all(c == 0.0 for c in self.coeffs)

    def _atom_peak_index(self):
        # (n+1) r^(2n+1) peaks at n + 1 = -1 / (2 ln r); beyond it the atom
        # contribution is monotone decreasing.
        peak = 0.0
        for _, radius in self.atoms:
            if 0.0 < radius < 1.0:
                peak = max(peak, -1.0 / (2.0 * math.log(radius)))
        return int(math.ceil(peak)) + 1

    def _atom_tail_bound(self, n0):
        n0 = max(n0, self._atom_peak_index())
        return sum(
            2.0 * (n0 + 1.0) * abs(mass) * radius ** (2.0 * n0 + 1.0)
            for mass, radius in self.atoms
        ), n0

    def deviation_bound(self, n0):
        poly_dev = sum(
            abs(c) * j / (2.0 * n0 + 2.0 + j) for j, c in enumerate(self.coeffs)
        )
        atom_bound, peak = self._atom_tail_bound(n0)
        if peak > n0:
            # atoms may still be rising before their peak; take the direct max
            n = np.arange(n0, peak + 1, dtype=np.float64)
            atom = np.zeros_like(n)
            for mass, radius in self.atoms:
                atom += 2.0 * (n + 1.0) * abs(mass) * radius ** (2.0 * n + 1.0)
            atom_bound = float(atom.max()) if atom.size else 0.0
        return poly_dev + atom_bound

    def abs_bound(self):
        n0 = max(64, self._atom_peak_index())
        head = self(np.arange(n0 + 1))
        head_max = float(np.abs(head).max()) if head.size else 0.0
        return max(head_max, abs(self.limit_value()) + self.deviation_bound(n0))

    def describe(self):
        parts = []
        if any(c != 0.0 for c in self.coeffs):
            parts.append(f"polynomial density, coefficients {list(self.coeffs)}")
        if self.atoms:
            parts.append(f"{len(self.atoms)} atom(s)")
        return "radial measure eigenvalues: " + ("; ".join(parts) or "zero measure")


def _is_power_of_two(n):
    n = np.asarray(n)
    if not np.issubdtype(n.dtype, np.integer):
        n = np.rint(n).astype(np.int64)
    return (n >= 1) & ((n & (n - 1)) == 0)


@dataclass(frozen=True)
class LacunaryGenerator(SequenceGenerator):
    """Diagonal with value -1 at the power-of-two indices {1, 2, 4, 8, ...}.

    The sequence has no limit: lim inf is exactly -1 along the witness
    subsequence while the complementary indices give lim sup 0.
    """

    def __call__(self, n):
        return np.where(_is_power_of_two(n), -1.0, 0.0)

    def limit_value(self):
        return None

    def liminf_value(self):
        return -1.0

    def abs_bound(self):
        return 1.0

    def negative_witness(self, head=8):
        return {
            "description": "indices {1, 2, 4, 8, ...} (powers of two)",
            "value": -1.0,
            "indices": [2 ** k for k in range(head)],
        }

    def series_support(self, n_max):
        indices = []
        k = 0
        while 2 ** k <= n_max:
            indices.append(2 ** k)
            k += 1
        idx = np.asarray(indices, dtype=np.int64)
        return idx, np.full(idx.shape, -1.0)

    def describe(self):
        return "lacunary diagonal: -1 at power-of-two indices, 0 elsewhere"


@dataclass(frozen=True)
class PerturbedGenerator(SequenceGenerator):
    """A base generator with finitely many entries overridden.

    Finite perturbations never change the tail behaviour, so limit, lim inf
    and deviation bounds delegate to the base generator.
    """

    base: SequenceGenerator
    overrides: tuple  # ((index, value), ...)

    def __call__(self, n):
        n = np.asarray(n)
        out = np.array(self.base(n), dtype=np.float64)
        scalar = out.ndim == 0
        out = np.atleast_1d(out)
        idx = np.atleast_1d(n)
        for i, value in self.overrides:
            out[idx == i] = value
        return out[0] if scalar else out

    def limit_value(self):
        return self.base.limit_value()

    def limit_is_structural_zero(self):
        return self.base.limit_is_structural_zero()

    def liminf_value(self):
        return self.base.liminf_value()

    def abs_bound(self):
        bound = self.base.abs_bound()
        if bound is None:
            return None
        over = max((abs(v) for _, v in self.overrides), default=0.0)
        return max(bound, over)

    def deviation_bound(self, n0):
        dev = self.base.deviation_bound(n0)
        limit = self.base.limit_value()
        if dev is None or limit is None:
            return dev
        extra = max(
            (abs(v - limit) for i, v in self.overrides if i >= n0),
            default=0.0,
        )
        return max(dev, extra)

    def negative_witness(self, head=8):
        witness = self.base.negative_witness(head=head)
        if witness is None:
            return None
        overridden = {i for i, _ in self.overrides}
        witness = dict(witness)
        witness["indices"] = [i for i in witness["indices"] if i not in overridden]
        witness["note"] = "finitely many overridden indices excluded"
        return witness

    def series_support(self, n_max):
        support = self.base.series_support(n_max)
        if support is None:
            return None
        idx, values = support
        table = dict(zip(idx.tolist(), values.tolist()))
        for i, value in self.overrides:
            if i <= n_max:
                table[i] = value
        table = {i: v for i, v in table.items() if v != 0.0}
        keys = np.asarray(sorted(table), dtype=np.int64)
        return keys, np.asarray([table[i] for i in keys.tolist()])

    def describe(self):
        return f"{self.base.describe()} with {len(self.overrides)} entr(ies) overridden"


@dataclass(frozen=True)
class EigenvalueSequence:
    """The diagonal ``lambda_n`` of a diagonal self-adjoint operator.

    ``values`` stores the head ``n = 0 .. N``.  When ``generator`` is
    present it must reproduce every stored entry to ``1e-12`` relative
    accuracy, and it extends evaluation to arbitrary indices.
    ``known_limit`` records an externally certified limit with a provenance
    note.
    """

    values: np.ndarray
    generator: SequenceGenerator | None = None
    known_limit: float | None = None
    note: str = field(default="", compare=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True).reshape(-1)
        if values.size == 0:
            raise ValueError("eigenvalue sequence must be nonempty")
        if not np.all(np.isfinite(values)):
            raise ValueError("eigenvalue sequence entries must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        if self.known_limit is not None and not math.isfinite(self.known_limit):
            raise ValueError("known_limit must be finite")
        if self.generator is not None:
            expected = np.asarray(self.generator(np.arange(values.size)), dtype=np.float64)
            tol = GENERATOR_MATCH_RTOL * np.maximum(1.0, np.abs(expected))
            if not np.all(np.abs(values - expected) <= tol):
                worst = int(np.argmax(np.abs(values - expected) - tol))
                raise ValueError(
                    f"stored value at index {worst} does not match the generator: "
                    f"{values[worst]!r} vs {expected[worst]!r}"
                )

    def __len__(self):
        return int(self.values.size)

    @property
    def last_index(self):
        return int(self.values.size) - 1

    def evaluate(self, n):
        """``lambda_n`` at a single index, using the generator beyond the head."""
        n = int(n)
        if n < 0:
            raise IndexError("negative index")
        if n <= self.last_index:
            return float(self.values[n])
        if self.generator is None:
            raise IndexError(
                f"index {n} beyond stored range {self.last_index} and no generator attached"
            )
        return float(np.asarray(self.generator(np.asarray([n])))[0])

    def evaluate_block(self, lo, hi):
        """Vectorized ``lambda_n`` for ``lo <= n < hi``."""
        if lo < 0 or hi < lo:
            raise IndexError("invalid block")
        if self.generator is not None:
            return np.asarray(self.generator(np.arange(lo, hi, dtype=np.int64)), dtype=np.float64)
        if hi > len(self):
            raise IndexError(
                f"block end {hi} beyond stored range {self.last_index} and no generator attached"
            )
        return self.values[lo:hi]

    def sup_abs_stored(self):
        return float(np.abs(self.values).max())

    def certified_abs_bound(self):
        """Global bound for ``sup_n |lambda_n|`` when one is certifiable, else ``None``."""
        if self.generator is not None:
            bound = self.generator.abs_bound()
            if bound is not None:
                return max(bound, self.sup_abs_stored())
        return None

    def limit_info(self):
        """(limit, structural_zero_flag, provenance) or ``None`` when no limit is certified."""
        if self.generator is not None:
            limit = self.generator.limit_value()
            if limit is not None:
                return limit, self.generator.limit_is_structural_zero(), self.generator.describe()
        if self.known_limit is not None:
            return self.known_limit, False, self.note or "externally supplied limit"
        return None

    def with_replaced_entries(self, replacements):
        """Copy with finitely many stored entries replaced.

        ``replacements`` maps index -> new value.  The generator, if any, is
        wrapped so that tail certificates survive the perturbation; this is
        the desk-scale model of a finite-rank diagonal perturbation.
        """
        values = np.array(self.values, dtype=np.float64)
        items = tuple(sorted((int(i), float(v)) for i, v in dict(replacements).items()))
        for i, v in items:
            if not 0 <= i <= self.last_index:
                raise IndexError(f"replacement index {i} outside stored range")
            if not math.isfinite(v):
                raise ValueError("replacement values must be finite")
            values[i] = v
        generator = None
        if self.generator is not None:
            generator = PerturbedGenerator(self.generator, items)
        return EigenvalueSequence(
            values,
            generator=generator,
            known_limit=self.known_limit,
            note=self.note,
        )


def constant_sequence(value, n_terms):
    """Constant diagonal, e.g. the identity operator for ``value = 1``."""
    return EigenvalueSequence(
        np.full(n_terms, float(value)),
        generator=PolyAtomGenerator(coeffs=(float(value),)),
    )


def explicit_sequence(values, note=""):
    """Sequence from explicit data, with no tail information."""
    return EigenvalueSequence(np.asarray(values, dtype=np.float64), note=note)


def tail_infimum(seq, window_start):
    """``inf { lambda_n : window_start <= n <= N }`` over the stored head."""
    window_start = int(window_start)
    if window_start < 0 or window_start > seq.last_index:
        raise ValueError("window beyond sequence")
    return float(seq.values[window_start:].min())


def split_positive_compact(seq):
    """Split into ``(lambda_plus, lambda_minus)`` with ``lambda = lambda_plus + lambda_minus``.

    ``lambda_plus = max(lambda, 0)`` entrywise and ``lambda_minus``
    collects the negative parts.  The operator is essentially positive
    exactly when the negative part is compact, i.e. ``lambda_minus -> 0``;
    when the generator settles that question the returned note records it.
    """
    plus = np.maximum(seq.values, 0.0)
    minus = seq.values - plus
    plus_gen = minus_gen = None
    note = ""
    if isinstance(seq.generator, LacunaryGenerator):
        plus_gen = PolyAtomGenerator()  # identically zero
        minus_gen = seq.generator
    if seq.generator is not None:
        liminf = seq.generator.liminf_value()
        if liminf is not None:
            if liminf < 0.0:
                note = (
                    "negative part not compact: lim inf of the sequence is "
                    f"{liminf!r} < 0"
                )
            else:
                note = "negative part compact: lambda_minus tends to 0"
    return (
        EigenvalueSequence(plus, generator=plus_gen, note="positive part"),
        EigenvalueSequence(minus, generator=minus_gen, note=note or "negative part"),
    )


def boundedness_check(seq):
    """Supremum of ``|lambda_n|`` over the stored head.

    With a generator attached the certified limit extends the supremum past
    the head; for the built-in families (where the deviation from the limit
    shrinks monotonically) the returned value is the global supremum.
    """
    sup = seq.sup_abs_stored()
    info = seq.limit_info()
    if info is not None:
        sup = max(sup, abs(info[0]))
    return sup
