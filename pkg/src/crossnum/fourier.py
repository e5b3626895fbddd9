"""Rank-optimal Fourier truncation and Parseval error accounting.

The best rank-m approximation of the embedding keeps exactly the modes of
largest reciprocal weight; for the sharp weight those are the symmetric
crosses.  The worst-case error of the truncation over the unit ball is
attained by the single cheapest excluded mode, and for a concrete
coefficient model the squared L2 error splits, by Parseval, into an
exactly enumerated part plus a certified tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .combinatorics import (IndexVector, count_cross, enumerate_cross,
                            enumeration_guard, write_points_csv)
from .errors import ResourceLimitError
from .spectra import ApproxNumber, exact_an_sharp


@dataclass(frozen=True)
class TruncationOperator:
    """Projection onto the Fourier modes of a symmetric cross.

    ``indices`` lists the kept modes in enumeration order; ``rank`` equals
    ``len(indices)`` and is strictly below the n the operator was built
    for, and every kept mode has product weight at most ``r - 1``.
    """

    indices: tuple[IndexVector, ...]
    rank: int
    d: int
    s: float
    r: int

    def __post_init__(self) -> None:
        if self.rank != len(self.indices):
            raise ValueError("rank must equal the number of kept modes")
        if self.r < 1:
            raise ValueError(f"radius must be a positive integer, got {self.r}")


def optimal_truncation(n: int, d: int, s: float, *,
                       max_enum: int | None = None) -> TruncationOperator:
    """The rank-optimal truncation for the n-th approximation number.

    Keeps the modes with product weight at most r - 1, where r is the
    breakpoint radius of a_n; the resulting rank C(r-1, d) is < n.
    """
    step = exact_an_sharp(n, d, s)  # validates n, d, s
    r = step.r
    rank = count_cross(r - 1, d) if r > 1 else 0
    guard = enumeration_guard(max_enum)
    if rank > guard:
        raise ResourceLimitError(
            f"truncation operator keeps {rank} modes, guard is {guard}",
            requested=rank, limit=guard)
    indices = tuple(enumerate_cross(r - 1, d)) if r > 1 else ()
    op = TruncationOperator(indices, rank, d, float(s), r)
    assert op.rank < n
    return op


def worst_case_witness(op: TruncationOperator) -> tuple[IndexVector, float]:
    """The cheapest excluded mode and its exact worst-case error.

    The witness frequency (r - 1, 0, ..., 0) lies just outside the kept
    cross; a unit-norm function concentrated there is approximated no
    better than r^{-s}, which matches the exact spectrum value at the
    first index the operator cannot reach.
    """
    witness = (op.r - 1,) + (0,) * (op.d - 1)
    error = ApproxNumber(op.r, op.s).value()
    achieved = exact_an_sharp(op.rank + 1, op.d, op.s).value()
    assert error == achieved  # witnessed error is the exact spectrum value
    return witness, error


@dataclass(frozen=True)
class CoefficientModel:
    """Fourier coefficients with a certified decay envelope.

    ``evaluator`` returns c_k (any value accepted by ``abs``);
    the certificate is |c_k| <= decay_scale * (prod (1 + |k_j|))^{-decay_rate}.
    Square-summability of the tail accounting needs decay_rate > 1/2.
    """

    evaluator: Callable[[IndexVector], complex]
    decay_scale: float
    decay_rate: float

    def __post_init__(self) -> None:
        if not self.decay_scale > 0:
            raise ValueError(f"decay scale must be positive, got {self.decay_scale}")
        if not self.decay_rate > 0.5:
            raise ValueError(
                f"decay rate must exceed 1/2 for a summable tail, got {self.decay_rate}")


def _count_ceiling(x: float, d: int) -> float:
    # Continuous ceiling on the cross count at real radius x >= 1, from the
    # volume upper bound f_l(x) = x (ln x)^{l-1} / (l-1)! per support size.
    log_x = math.log(x)
    total = 1.0
    for ell in range(1, d + 1):
        total += (math.comb(d, ell) * 2.0 ** ell * x * log_x ** (ell - 1)
                  / math.factorial(ell - 1))
    return total


_TAIL_REL_CUTOFF = 1e-18
_TAIL_MAX_SHELLS = 100_000


def _tail_bound(model: CoefficientModel, d: int, radius: int) -> float:
    # Everything outside N(radius, d) in dyadic product shells
    # [2^j (radius+1), 2^{j+1} (radius+1)): at most the count ceiling at the
    # outer edge, each term at most (inner edge)^{-2t}.
    two_t = 2.0 * model.decay_rate
    scale_sq = model.decay_scale ** 2
    total = 0.0
    for j in range(_TAIL_MAX_SHELLS):
        inner = float(radius + 1) * 2.0 ** j
        outer = inner * 2.0
        term = scale_sq * _count_ceiling(outer, d) * inner ** (-two_t)
        if not math.isfinite(term):
            break  # shell arithmetic left double range before settling
        total += term
        if j > 0 and term <= total * _TAIL_REL_CUTOFF:
            return total
    raise ValueError(
        f"certified tail did not converge; decay rate {model.decay_rate} "
        "is too close to 1/2")


def truncation_error(model: CoefficientModel, op: TruncationOperator,
                     tail_radius: int, *,
                     max_enum: int | None = None) -> tuple[float, float]:
    """L2 error of the truncation for one coefficient model, by Parseval.

    Returns ``(model_error, certified_bound)``: the square root of the
    enumerated residual energy inside N(tail_radius, d), and the same with
    the certified decay tail added.  ``tail_radius`` must reach the
    operator's own radius, so the enumerated part covers every excluded
    mode the operator is responsible for.
    """
    if tail_radius < op.r:
        raise ValueError(
            f"tail radius {tail_radius} must reach the operator radius {op.r}")
    guard = enumeration_guard(max_enum)
    total = count_cross(tail_radius, op.d)
    if total > guard:
        raise ResourceLimitError(
            f"error accounting needs the {total} points of "
            f"N({tail_radius},{op.d}), guard is {guard}",
            requested=total, limit=guard)
    kept = frozenset(op.indices)
    terms: list[float] = []
    for k in enumerate_cross(tail_radius, op.d):
        if k in kept:
            continue
        terms.append(abs(model.evaluator(k)) ** 2)
    residual = math.fsum(terms)  # deterministic: fixed order, exact accumulation
    tail = _tail_bound(model, op.d, tail_radius)
    return math.sqrt(residual), math.sqrt(residual + tail)


def error_report(model: CoefficientModel, op: TruncationOperator,
                 tail_radius: int, *,
                 max_enum: int | None = None) -> dict[str, object]:
    """JSON-ready error report; counts travel as decimal strings."""
    model_error, certified = truncation_error(model, op, tail_radius,
                                              max_enum=max_enum)
    _, worst = worst_case_witness(op)
    return {
        "n": str(op.rank + 1),
        "r": op.r,
        "rank": str(op.rank),
        "worst_case": worst,
        "model_error": model_error,
        "certified_bound": certified,
    }


def write_index_csv(path_or_file, op: TruncationOperator) -> int:
    """Export the kept modes as CSV rows ``k_1..k_d,product``."""
    return write_points_csv(path_or_file, op.indices, op.d)
