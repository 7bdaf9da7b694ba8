"""Report assembly and deterministic JSON/CSV emission.

Identical command + spec + tolerances must produce byte-identical output:
dictionaries are built in fixed field order and every float is rendered with
17 significant digits.  Non-finite numbers never reach the serializer;
diverging suprema are encoded as ``null`` values next to an explicit flag.
"""

from __future__ import annotations

import math

import numpy as np

from . import __version__
from .berezin import (
    abel_mean,
    berezin_disk_quadrature,
    berezin_series,
    boundary_limit,
    cesaro_means,
    classify_radial,
    difference_coeffs,
)
from .carleson import carleson_report, weighted_implication_check
from .classify import Verdict, classify_diagonal
from .config import ToleranceConfig
from .errors import SeriesTailError
from .hardy import classify_hardy, essential_range_bounds, hull_cross_check, toeplitz_truncation
from .radial import lacunary_operator
from .sequences import EigenvalueSequence
from .symbolspec import render_symbol
from .truncation import FiniteRankPerturbation, HermitianTruncation, negative_count_profile, basis_weyl_probe

#: Exit codes (stable contract).
EXIT_CERTIFIED = 0
EXIT_INCONCLUSIVE = 2
EXIT_HYPOTHESIS = 3
EXIT_PARSE = 4

#: Default abscissae for Berezin sampling.
BEREZIN_T_GRID = (0.0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.999)

#: Length of the spectrum CSV and of diagonal heads built from generators.
SPECTRUM_LENGTH = 128

#: Entries of the eigenvalue head echoed in reports.
LAMBDA_HEAD = 33  # n <= 32


def format_float(x):
    """Fixed 17-significant-digit rendering used in both JSON and CSV."""
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite float reached the serializer")
        return format(x, ".17g")
    return str(x)


def dumps(value):
    """Deterministic JSON with insertion-ordered objects."""
    pieces = []
    _write_json(value, pieces)
    return "".join(pieces)


def _write_json(value, out):
    if value is None:
        out.append("null")
    elif value is True:
        out.append("true")
    elif value is False:
        out.append("false")
    elif isinstance(value, str):
        out.append(_escape_string(value))
    elif isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        out.append(format_float(float(value)))
    elif isinstance(value, dict):
        out.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                out.append(",")
            if not isinstance(key, str):
                raise TypeError("JSON object keys must be strings")
            out.append(_escape_string(key))
            out.append(":")
            _write_json(item, out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for i, item in enumerate(value):
            if i:
                out.append(",")
            _write_json(item, out)
        out.append("]")
    elif isinstance(value, np.ndarray):
        _write_json(value.tolist(), out)
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")


_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


def _escape_string(text):
    parts = ['"']
    for ch in text:
        if ch in _ESCAPES:
            parts.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            parts.append(f"\\u{ord(ch):04x}")
        else:
            parts.append(ch)
    parts.append('"')
    return "".join(parts)


def csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join("" if cell is None else format_float(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _finite_or_none(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _tool_header(spec, cfg):
    return {
        "tool": {"name": "esspos", "version": __version__},
        "spec": {"kind": spec.kind, "text": render_symbol(spec)},
        "tolerances": cfg.as_dict(),
    }


def _classification_dict(classification):
    certificate = dict(classification.certificate)
    if "carleson" in certificate:
        certificate["carleson"] = _carleson_dict(certificate["carleson"])
    if "berezin_liminf_estimate" in certificate:
        certificate["berezin_liminf_estimate"] = _finite_or_none(
            certificate["berezin_liminf_estimate"]
        )
    if "boundary_limit" in certificate:
        certificate["boundary_limit"] = _finite_or_none(certificate["boundary_limit"])
    return {
        "verdict": classification.verdict.value,
        "essentially_positive": classification.essentially_positive,
        "tolerance": classification.tolerance,
        "certificate": _jsonable(certificate),
    }


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _carleson_dict(report):
    return {
        "alpha": report.alpha,
        "paper_criterion_sup": _finite_or_none(report.paper_criterion_sup),
        "paper_diverging": report.paper_diverging,
        "moment_ratio_sup": _finite_or_none(report.moment_ratio_sup),
        "moment_diverging": report.moment_diverging,
        "criteria_agree": report.criteria_agree,
        "annulus_grid": [[r, _finite_or_none(q)] for r, q in report.annulus_grid],
        "moment_schedule": [[n, _finite_or_none(q)] for n, q in report.moment_schedule],
    }


def _lambda_head(seq):
    head = seq.values[:LAMBDA_HEAD]
    return [float(v) for v in head]


def _berezin_samples(seq, measure, cfg):
    rows = []
    for t in BEREZIN_T_GRID:
        try:
            value, bound = berezin_series(seq, t, tol=cfg.series_tol, max_terms=cfg.max_terms)
        except SeriesTailError:
            continue
        quad_value = None
        if measure is not None and t <= 0.999:
            quad_value = berezin_disk_quadrature(measure, t, rtol=cfg.quadrature_tol)
        rows.append((t, value, bound, quad_value))
    return rows


def run_classify(spec, cfg=ToleranceConfig()):
    """Full classification report; returns ``(payload, exit_code)``."""
    payload = _tool_header(spec, cfg)
    if spec.kind == "hardy":
        symbol = spec.to_circle_symbol()
        classification = classify_hardy(symbol, eps=cfg.epsilon)
        bounds = essential_range_bounds(symbol)
        payload["classification"] = _classification_dict(classification)
        payload["essential_range"] = {
            "lower": bounds.lower,
            "upper": bounds.upper,
            "method": bounds.method,
        }
        if symbol.coefficients:
            head = min(LAMBDA_HEAD, 33)
            probe = basis_weyl_probe(toeplitz_truncation(symbol, head))
            payload["lambda_head"] = _lambda_head(probe)
        code = EXIT_CERTIFIED if classification.is_certified else EXIT_INCONCLUSIVE
        return payload, code

    measure = spec.to_measure() if spec.kind == "radial" else None
    seq = spec.to_sequence(n_terms=SPECTRUM_LENGTH * 2)
    if spec.kind == "radial":
        classification = classify_radial(measure, eps=cfg.epsilon, series_tol=cfg.series_tol)
    else:
        classification = classify_diagonal(seq, eps=cfg.epsilon)
    limit = boundary_limit(seq, tol=cfg.series_tol)
    payload["classification"] = _classification_dict(classification)
    payload["lambda_head"] = _lambda_head(seq)
    payload["boundary_limit"] = {
        "value": _finite_or_none(limit.value),
        "status": limit.status,
        "note": limit.note,
    }
    payload["berezin"] = [
        {"t": t, "value": v, "tail_bound": b, "quadrature_value": q}
        for t, v, b, q in _berezin_samples(seq, measure, cfg)
    ]
    if spec.kind == "radial":
        payload["carleson"] = _carleson_dict(
            carleson_report(measure.total_variation(), alpha=0.0)
        )
    code = EXIT_CERTIFIED if classification.is_certified else EXIT_INCONCLUSIVE
    return payload, code


def run_berezin(spec, cfg=ToleranceConfig()):
    """Berezin samples as CSV rows; quadrature column only for radial specs."""
    if spec.kind == "hardy":
        raise ValueError("berezin sampling applies to radial or diagonal specs")
    measure = spec.to_measure() if spec.kind == "radial" else None
    seq = spec.to_sequence(n_terms=SPECTRUM_LENGTH * 2)
    header = ["t", "value", "tail_bound", "quadrature_value"]
    rows = _berezin_samples(seq, measure, cfg)
    return header, rows


def run_carleson(spec, cfg=ToleranceConfig()):
    if spec.kind != "radial":
        raise ValueError("carleson reports apply to radial specs")
    measure = spec.to_measure().total_variation()
    report = carleson_report(measure, alpha=0.0, depth=cfg.grid_depth)
    implication = weighted_implication_check(measure)
    payload = _tool_header(spec, cfg)
    payload["carleson"] = _carleson_dict(report)
    payload["weighted_implication"] = {
        "max_relative_violation": implication.max_relative_violation,
        "weighted_ratio_sup": _finite_or_none(implication.weighted_ratio_sup),
        "base_ratio_sup": _finite_or_none(implication.base_ratio_sup),
        "passed": implication.passed,
    }
    return payload, EXIT_CERTIFIED


def run_spectrum(spec, cfg=ToleranceConfig()):
    """Eigenvalue head as CSV rows ``(n, lambda, cesaro, a_n)``."""
    if spec.kind == "hardy":
        raise ValueError("spectrum output applies to radial or diagonal specs")
    seq = spec.to_sequence(n_terms=SPECTRUM_LENGTH)
    coeffs = difference_coeffs(seq)
    means = cesaro_means(coeffs)
    header = ["n", "lambda", "cesaro", "a_n"]
    rows = [
        (n, float(seq.values[n]), float(means[n]), float(coeffs.a[n]))
        for n in range(len(seq))
    ]
    return header, rows


def run_demo_lacunary(cfg=ToleranceConfig()):
    """The built-in counterexample narrative as a machine-readable report.

    The diagonal with -1 at power-of-two indices has Berezin transform
    vanishing at the boundary, yet no compact perturbation can make it
    positive: the canonical-basis probe stays at -1 along the witness
    subsequence and the negative eigenvalue counts of its finite sections
    keep growing, even after a random finite-rank perturbation.
    """
    seq = lacunary_operator(512)
    payload = {
        "tool": {"name": "esspos", "version": __version__},
        "demo": "lacunary",
        "tolerances": cfg.as_dict(),
    }

    ladder = []
    for k in range(3, 15):
        t = 1.0 - 2.0 ** (-k)
        value, bound = berezin_series(seq, t, tol=cfg.series_tol, max_terms=cfg.max_terms)
        ladder.append({"k": k, "t": t, "value": value, "tail_bound": bound})
    payload["berezin_ladder"] = ladder
    payload["berezin_vanishes"] = bool(abs(ladder[-1]["value"]) <= 0.05)

    classification = classify_diagonal(seq, eps=cfg.epsilon)
    payload["classification"] = _classification_dict(classification)

    rng = np.random.default_rng(20240213)
    perturbation = FiniteRankPerturbation.random_gaussian(rank=5, dim=256, rng=rng)
    base_builder = lambda n: HermitianTruncation.from_diagonal(seq.values[:n])
    perturbed_builder = lambda n: HermitianTruncation.from_matrix(
        np.diag(seq.values[:n]) + perturbation.matrix(n)
    )
    sizes = (32, 64, 128, 256)
    base = negative_count_profile(base_builder, 0.5, sizes)
    perturbed = negative_count_profile(perturbed_builder, 0.5, sizes)
    probe = basis_weyl_probe(perturbed_builder(256))
    witness = [int(2 ** j) for j in range(8)]
    payload["perturbation_experiment"] = {
        "rank": perturbation.rank,
        "sizes": list(sizes),
        "base_counts": list(base.counts),
        "perturbed_counts": list(perturbed.counts),
        "counts_label": base.label,
        "perturbed_trend": perturbed.trend,
        "witness_indices": witness,
        "witness_probe_values": [float(probe.values[i]) for i in witness],
    }
    still_growing = perturbed.counts[-1] > perturbed.counts[0]
    payload["conclusion"] = {
        "berezin_boundary_limit": 0.0,
        "verdict": classification.verdict.value,
        "finite_rank_cannot_repair": bool(still_growing),
    }
    return payload, EXIT_CERTIFIED
