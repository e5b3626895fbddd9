"""Information complexity of the embeddings and tractability certificates.

For the sharp weight the complexity n(eps, d) = min{n : a_n <= eps} is
exact: with r* the least integer radius satisfying r*^{-s} <= eps, the
answer is C(r* - 1, d) + 1.  The other weight families are enclosed
between sharp complexities via norm-one comparisons, with an optional
exact resolution by certified enumeration in low dimension.

The quasi-polynomial certificate checks

    n(eps, d) <= C_t * exp(t * ln(1/eps) * (1 + ln d))

on a grid; a proof-derived uniform pair (t, C_t) valid for every d and
eps is available as the default.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

from ._logs import log_int
from .combinatorics import count_cross
from .spectra import WeightKind, rearranged_spectrum

_REL_TOL = 1e-12


def _first_radius(eps: float, s: float) -> int:
    # least integer r with r^{-s} <= eps; ties within 1e-12 relative of an
    # integer boundary resolve toward inclusion (a_n <= eps)
    x = float(eps) ** (-1.0 / s)
    nearest = round(x)
    if nearest >= 1 and abs(x - nearest) <= _REL_TOL * x:
        return nearest
    return math.ceil(x)


def info_complexity_sharp(eps: float, d: int, s: float) -> int:
    """Exact n(eps, d) = min{n : a_n <= eps} for the sharp weight."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"tolerance must lie in (0, 1), got {eps}")
    if d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d}")
    if not s > 0:
        raise ValueError(f"smoothness must be positive, got {s}")
    r_star = _first_radius(eps, s)
    if r_star <= 1:
        return 1
    return count_cross(r_star - 1, d) + 1


@dataclass(frozen=True)
class ComplexityEnclosure:
    """lower <= n(eps, d) <= upper, with the exact value when resolved."""

    lower: int
    upper: int
    exact: int | None = None

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError("enclosure is empty")
        if self.exact is not None and not self.lower <= self.exact <= self.upper:
            raise ValueError("exact value escapes its enclosure")


def info_complexity_bounds(kind: WeightKind, eps: float, d: int, *,
                           exact: bool = False,
                           max_enum: int | None = None) -> ComplexityEnclosure:
    """Enclose n(eps, d) for any weight family between sharp complexities.

    The enclosures come from norm-one comparisons only:

    * plus(s):  [n_sharp(s),  n_sharp(s/2)]
    * star(s):  [n_sharp(s),  n_sharp(1/2)] for s >= 1/2,
                [n_sharp(1/2), n_sharp(s)] for s <= 1/2
                (the star and sharp weights coincide at s = 1/2)
    * intm(m):  [n_sharp(m),  n_sharp(1/2)]

    With ``exact=True`` (supported for d <= 3) the value is resolved by a
    certified enumerated spectrum and asserted to lie in the enclosure.
    """
    s = kind.s
    if kind.family == "sharp":
        n = info_complexity_sharp(eps, d, s)
        return ComplexityEnclosure(n, n, n)
    if kind.family == "plus":
        lower = info_complexity_sharp(eps, d, s)
        upper = info_complexity_sharp(eps, d, s / 2.0)
    elif kind.family == "star":
        if s >= 0.5:
            lower = info_complexity_sharp(eps, d, s)
            upper = info_complexity_sharp(eps, d, 0.5)
        else:
            lower = info_complexity_sharp(eps, d, 0.5)
            upper = info_complexity_sharp(eps, d, s)
    else:
        lower = info_complexity_sharp(eps, d, float(kind.m))
        upper = info_complexity_sharp(eps, d, 0.5)
    if not exact:
        return ComplexityEnclosure(lower, upper)
    if d > 3:
        raise ValueError("exact resolution is supported for d <= 3 only")
    table = rearranged_spectrum(kind, d, upper, max_enum=max_enum)
    lo, hi = 1, upper  # sigma_upper <= eps is guaranteed by the enclosure
    while lo < hi:
        mid = (lo + hi) // 2
        # boundary ties resolve toward a_n <= eps, as in the sharp case
        if table.sigma(mid) <= eps * (1.0 + _REL_TOL):
            hi = mid
        else:
            lo = mid + 1
    return ComplexityEnclosure(lower, upper, lo)


def qpt_constants(s: float) -> tuple[float, float]:
    """A uniform certificate pair (t, C_t) for the sharp family.

    Chaining ln C(r, d) <= 2 + max(4, 2 + log2 d) * ln r with
    r* <= 2 eps^{-1/s} and max(4, 2 + log2 d) <= 4 (1 + ln d) absorbs the
    whole d-dependence into ln(1/eps) (1 + ln d) once eps <= 2^{-s}; for
    larger eps the complexity is at most 2 <= e^2.  Coarse but valid for
    every d >= 1 and 0 < eps < 1: t = 8/s, C_t = e^2.
    """
    if not s > 0:
        raise ValueError(f"smoothness must be positive, got {s}")
    return 8.0 / s, math.exp(2.0)


@dataclass(frozen=True)
class QptCertificate:
    """Grid evidence for (or against) one quasi-polynomial pair (t, C_t).

    ``slack`` is the largest value of ln n - ln C_t - t ln(1/eps)(1 + ln d)
    over the grid (negative when the certificate holds everywhere);
    ``per_point_t`` records the minimal exponent that would work at each
    grid point with C_t fixed.
    """

    s: float
    t: float
    c_t: float
    grid: tuple[tuple[float, int], ...]
    passed: bool
    violations: tuple[tuple[float, int], ...]
    worst_point: tuple[float, int]
    slack: float
    per_point_t: tuple[float, ...]


def qpt_certify(s: float, d_grid: Sequence[int], eps_grid: Sequence[float],
                t: float | None = None,
                c_t: float | None = None) -> QptCertificate:
    """Check n(eps, d) <= C_t exp(t ln(1/eps)(1 + ln d)) over a grid.

    Defaults to the proof-derived uniform pair from :func:`qpt_constants`.
    Comparisons run in log space on the exact complexities, so passing is
    meaningful even when n overflows double precision.
    """
    if t is None or c_t is None:
        t_default, c_default = qpt_constants(s)
        t = t_default if t is None else t
        c_t = c_default if c_t is None else c_t
    if not t > 0 or not c_t > 0:
        raise ValueError("certificate constants must be positive")
    if not d_grid or not eps_grid:
        raise ValueError("certificate grid must be non-empty")
    ln_ct = math.log(c_t)
    grid: list[tuple[float, int]] = []
    violations: list[tuple[float, int]] = []
    per_point_t: list[float] = []
    worst: tuple[float, int] | None = None
    slack = -math.inf
    for d in d_grid:
        if d < 1:
            raise ValueError(f"dimension must be a positive integer, got {d}")
        for eps in eps_grid:
            n = info_complexity_sharp(eps, d, s)
            scale = math.log(1.0 / eps) * (1.0 + math.log(d))
            margin = log_int(n) - ln_ct - t * scale
            grid.append((float(eps), d))
            per_point_t.append(max(0.0, (log_int(n) - ln_ct) / scale))
            if margin > slack:
                slack = margin
                worst = (float(eps), d)
            if margin > 0.0:
                violations.append((float(eps), d))
    assert worst is not None
    return QptCertificate(float(s), float(t), float(c_t), tuple(grid),
                          not violations, tuple(violations), worst, slack,
                          tuple(per_point_t))


def certificate_record(cert: QptCertificate) -> dict[str, object]:
    """JSON-ready payload for a quasi-polynomial certificate."""
    return {
        "s": cert.s,
        "t": cert.t,
        "C_t": cert.c_t,
        "grid": [[eps, d] for eps, d in cert.grid],
        "pass": cert.passed,
        "violations": [[eps, d] for eps, d in cert.violations],
        "worst_point": list(cert.worst_point),
        "slack": cert.slack,
        "per_point_t": list(cert.per_point_t),
    }


def write_complexity_csv(path_or_file,
                         rows: Sequence[tuple[float, int, int]]) -> int:
    """CSV rows ``eps,d,n`` (n as a decimal string; it can be huge)."""
    from .combinatorics import _open_for_write

    handle, owned = _open_for_write(path_or_file)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["eps", "d", "n"])
        for eps, d, n in rows:
            writer.writerow([repr(float(eps)), d, str(n)])
        return len(rows)
    finally:
        if owned:
            handle.close()
