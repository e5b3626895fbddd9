"""Weights for the four norm variants and exact spectra of the embeddings.

Each norm is induced by a multiplicative weight on frequency vectors: the
norm of f is the l2 norm of (w(k) c_k(f))_k over k in Z^d.  The embedding
into L2 is then unitarily a diagonal operator with entries 1/w(k), so its
approximation numbers are the non-increasing rearrangement of 1/w.

Variants (s > 0 real, m >= 1 integer; 0^0 = 1 throughout):

    sharp   w(k) = prod_j (1 + |k_j|)^s
    plus    w(k) = prod_j (1 + k_j^2)^{s/2}
    star    w(k) = prod_j (1 + |k_j|^{2s})^{1/2}
    intm    w(k) = prod_j v_m(k_j),   v_m(l)^2 = sum_{a=0}^{m} l^{2a}

The sharp spectrum is piecewise constant with exactly known breakpoints:
a_n = r^{-s} precisely when C(r-1, d) < n <= C(r, d).  The other variants
are computed by bounded enumeration with a stopping certificate that no
point outside the enumerated cross can enter the table.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

from ._logs import log_int
from .combinatorics import (IndexVector, count_cross, enumerate_cross,
                            enumeration_guard)
from .errors import ResourceLimitError, UnsupportedRegimeError

_FAMILIES = ("sharp", "plus", "star", "intm")
_REL_TOL = 1e-12


@dataclass(frozen=True)
class WeightKind:
    """One of the four weight families together with its smoothness."""

    family: str
    s: float

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown weight family {self.family!r}")
        if not self.s > 0:
            raise ValueError(f"smoothness must be positive, got {self.s}")
        if self.family == "intm" and (self.s != int(self.s) or self.s < 1):
            raise ValueError(
                f"integer-m weights need an integer m >= 1, got {self.s}")

    @classmethod
    def sharp(cls, s: float) -> "WeightKind":
        return cls("sharp", float(s))

    @classmethod
    def plus(cls, s: float) -> "WeightKind":
        return cls("plus", float(s))

    @classmethod
    def star(cls, s: float) -> "WeightKind":
        return cls("star", float(s))

    @classmethod
    def integer_m(cls, m: int) -> "WeightKind":
        return cls("intm", float(m))

    @property
    def m(self) -> int:
        if self.family != "intm":
            raise AttributeError("m is only defined for integer-m weights")
        return int(self.s)

    def label(self) -> str:
        if self.family == "intm":
            return f"intm({self.m})"
        return f"{self.family}({self.s:g})"


def weight(kind: WeightKind, k: Sequence[int]) -> float:
    """w_kind(k).  Multiplicative over coordinates; equals 1 at k = 0."""
    total = 1.0
    if kind.family == "sharp":
        # exact integer product first: every index vector on one shell then
        # gets the bit-identical weight, which exact_an_sharp mirrors
        product = 1
        for kj in k:
            product *= 1 + abs(kj)
        if product.bit_length() * kind.s > 1000.0:
            return math.exp(kind.s * log_int(product))
        total = float(product) ** kind.s
    elif kind.family == "plus":
        for kj in k:
            total *= float(1 + kj * kj) ** (kind.s / 2.0)
    elif kind.family == "star":
        for kj in k:
            total *= math.sqrt(1.0 + float(abs(kj)) ** (2.0 * kind.s))
    else:
        m = kind.m
        for kj in k:
            base = kj * kj
            acc = 1
            power = 1
            for _ in range(m):
                power *= base
                acc += power
            total *= math.sqrt(acc)
    return total


@dataclass(frozen=True)
class ApproxNumber:
    """An exact spectrum value r^{-s}, kept symbolic as the pair (r, s)."""

    r: int
    s: float

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError(f"radius must be a positive integer, got {self.r}")
        if not self.s > 0:
            raise ValueError(f"smoothness must be positive, got {self.s}")

    def value(self) -> float:
        # mirror the enumeration arithmetic (1 / float(p) ** s) bit for bit
        # while r^s stays inside double range; log space beyond that
        if self.r.bit_length() * self.s <= 1000.0:
            return 1.0 / float(self.r) ** self.s
        return math.exp(-self.s * log_int(self.r))


@dataclass(frozen=True)
class Breakpoint:
    """One step of the sharp spectrum: a_n = value for C(r-1,d) < n <= cumulative."""

    r: int
    cumulative: int
    value: ApproxNumber


def breakpoints_sharp(d: int, s: float, r_max: int) -> list[Breakpoint]:
    """The sharp staircase for radii 1..r_max, with exact cumulative counts."""
    if r_max < 1:
        raise ValueError(f"r_max must be a positive integer, got {r_max}")
    return [Breakpoint(r, count_cross(r, d), ApproxNumber(r, float(s)))
            for r in range(1, r_max + 1)]


def exact_an_sharp(n: int, d: int, s: float) -> ApproxNumber:
    """The exact n-th approximation number for the sharp weight.

    Returns r^{-s} (symbolically) for the unique radius r with
    C(r-1, d) < n <= C(r, d); the radius is located by galloping followed
    by binary search on the exact counts.
    """
    if n < 1:
        raise ValueError(f"index must be a positive integer, got {n}")
    if d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d}")
    if not s > 0:
        raise ValueError(f"smoothness must be positive, got {s}")
    hi = 1
    while count_cross(hi, d) < n:
        hi <<= 1
    lo = hi >> 1  # count at lo is < n (or lo == 0)
    while lo + 1 < hi:
        mid = (lo + hi) // 2
        if count_cross(mid, d) < n:
            lo = mid
        else:
            hi = mid
    return ApproxNumber(hi, float(s))


@dataclass(frozen=True)
class SpectrumTable:
    """sigma_1 >= sigma_2 >= ... >= sigma_n for one weight kind.

    ``certification`` is "exact" for tables assembled from breakpoints and
    "enumerated-certified" for tables produced by bounded enumeration with
    the stopping certificate; ``radius`` records the certified enumeration
    radius in the latter case.  ``bases`` carries the per-entry radius for
    exact sharp tables.
    """

    values: tuple[float, ...]
    kind: WeightKind
    d: int
    certification: str
    radius: int | None = None
    bases: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a spectrum table needs at least one entry")
        if self.values[0] != 1.0:
            raise ValueError(f"sigma_1 must be 1, got {self.values[0]}")
        for a, b in zip(self.values, self.values[1:]):
            if b > a:
                raise ValueError("spectrum values must be non-increasing")

    def __len__(self) -> int:
        return len(self.values)

    def sigma(self, n: int) -> float:
        """1-based lookup of sigma_n."""
        if not 1 <= n <= len(self.values):
            raise IndexError(f"n = {n} outside table of length {len(self.values)}")
        return self.values[n - 1]


def sharp_table(d: int, s: float, n_max: int) -> SpectrumTable:
    """Exact sharp spectrum sigma_1..sigma_{n_max} from the breakpoint staircase."""
    if n_max < 1:
        raise ValueError(f"table length must be positive, got {n_max}")
    top = exact_an_sharp(n_max, d, s)
    values: list[float] = []
    bases: list[int] = []
    filled = 0
    for r in range(1, top.r + 1):
        width = min(count_cross(r, d), n_max) - filled
        if width <= 0:
            continue
        entry = ApproxNumber(r, float(s)).value()
        values.extend([entry] * width)
        bases.extend([r] * width)
        filled += width
    return SpectrumTable(tuple(values), WeightKind.sharp(s), d, "exact",
                         radius=None, bases=tuple(bases))


def _domination(kind: WeightKind, d: int) -> tuple[float, float]:
    # (c, s_eff) with 1/weight(kind, k) <= c * (prod (1 + |k_j|))^{-s_eff}:
    # the coarse envelope that lets enumeration stop.  Per coordinate,
    # (1+|l|)/2 <= (1+l^2)^{1/2}, ((1+|l|)/2)^{2s} <= 1+|l|^{2s} and
    # ((1+|l|)/2)^{2m} <= v_m(l)^2.
    if kind.family == "sharp":
        return 1.0, kind.s
    if kind.family == "plus":
        return 2.0 ** (d * kind.s / 2.0), kind.s
    if kind.family == "star":
        return 2.0 ** (d * kind.s), kind.s
    return 2.0 ** (d * kind.m), float(kind.m)


def rearranged_spectrum(kind: WeightKind, d: int, n_max: int, *,
                        max_enum: int | None = None) -> SpectrumTable:
    """sigma_1..sigma_{n_max}: the n_max largest values of 1/weight over Z^d.

    Enumerates N(R, d) for growing R and stops once
    c * (R + 1)^{-s_eff} <= sigma_{n_max}: every point outside N(R, d) has
    product > R, hence 1/weight below that ceiling, and the table is
    certified complete.  Works for every family; for sharp it reproduces
    :func:`sharp_table` and exists as a cross-check.
    """
    if n_max < 1:
        raise ValueError(f"table length must be positive, got {n_max}")
    if d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d}")
    guard = enumeration_guard(max_enum)
    c, s_eff = _domination(kind, d)
    radius = 1
    while count_cross(radius, d) < n_max:
        radius <<= 1
    if c > 1.0:
        stretch = c ** (1.0 / s_eff)
        radius <<= max(0, math.ceil(math.log2(stretch)))
    while True:
        total = count_cross(radius, d)
        if total > guard:
            raise ResourceLimitError(
                f"spectrum enumeration needs the {total} points of "
                f"N({radius},{d}), guard is {guard}",
                requested=total, limit=guard)
        inverse = [1.0 / weight(kind, k) for k in enumerate_cross(radius, d)]
        inverse.sort(reverse=True)
        values = inverse[:n_max]
        ceiling = c * float(radius + 1) ** (-s_eff)
        if ceiling <= values[-1]:
            return SpectrumTable(tuple(values), kind, d,
                                 "enumerated-certified", radius=radius)
        radius <<= 1


@dataclass(frozen=True)
class DominationReport:
    """Result of a pointwise weight-domination check on a sample box."""

    source: WeightKind
    target: WeightKind
    d: int
    regime: str
    passed: bool
    checked: int
    counterexample: IndexVector | None
    factor: float = 1.0  # norm bound certified; 1 for norm-one embeddings


# weight orderings within one smoothness value: earlier = larger weight
_SAME_S_ORDERS = (
    ("high", lambda s: s >= 1.0 - _REL_TOL, ("sharp", "plus", "star")),
    ("mid", lambda s: 0.5 - _REL_TOL <= s <= 1.0 + _REL_TOL, ("sharp", "star", "plus")),
    ("low", lambda s: s <= 0.5 + _REL_TOL, ("star", "sharp", "plus")),
)


def _integer_chain_violation(m: int, radius: int) -> int | None:
    # 1 + l^{2m} <= v_m(l)^2 <= (1 + l^2)^m <= (2^m / (m+1)) v_m(l)^2,
    # checked in exact integer arithmetic; returns the offending l if any.
    for level in range(radius + 1):
        base = level * level
        v_sq = 1
        power = 1
        for _ in range(m):
            power *= base
            v_sq += power
        if 1 + power > v_sq:
            return level
        mid = (1 + base) ** m
        if v_sq > mid:
            return level
        if (m + 1) * mid > (1 << m) * v_sq:
            return level
    return None


def verify_weight_domination(pair: tuple[WeightKind, WeightKind], d: int,
                             sample_radius: int, *,
                             max_enum: int | None = None) -> DominationReport:
    """Check the pointwise inequality behind a norm-one embedding source -> target.

    The embedding has norm one iff weight(target, k) <= weight(source, k)
    for every k; the check runs over the box |k|_inf <= sample_radius with
    relative tolerance 1e-12.  Supported regimes:

    * same family with s_source >= s_target;
    * sharp/plus/star at equal s, following the ordering valid for that s
      (s >= 1; 1/2 <= s <= 1; s <= 1/2), compositions included;
    * plus(s) -> sharp(s/2);
    * intm(m) -> star(m) and plus(m) -> intm(m), norm one;
    * intm(m) -> plus(m), norm (2^m/(m+1))^{d/2}; the per-coordinate
      integer chain behind that factor is checked exactly alongside.

    Anything else raises :class:`UnsupportedRegimeError`.
    """
    source, target = pair
    if d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d}")
    if sample_radius < 1:
        raise ValueError(f"sample radius must be positive, got {sample_radius}")
    s, t = source.s, target.s
    same_s = abs(s - t) <= _REL_TOL * max(s, t)
    factor = 1.0
    regime = None
    if source.family == target.family:
        if s + _REL_TOL * max(s, t) >= t:
            regime = "same-family-monotone"
        else:
            raise UnsupportedRegimeError(
                f"{source.label()} does not dominate {target.label()}: "
                "same family needs s_source >= s_target")
    elif same_s and "intm" in (source.family, target.family):
        m_side = source if source.family == "intm" else target
        m = m_side.m
        if source.family == "intm" and target.family == "star":
            regime = "intm-to-star"
        elif source.family == "plus" and target.family == "intm":
            regime = "plus-to-intm"
        elif source.family == "intm" and target.family == "plus":
            regime = "intm-to-plus-bounded"
            factor = (2.0 ** m / (m + 1)) ** (d / 2.0)
            bad = _integer_chain_violation(m, sample_radius)
            if bad is not None:
                return DominationReport(source, target, d, regime, False,
                                        sample_radius + 1, (bad,), factor)
        else:
            raise UnsupportedRegimeError(
                f"no supported comparison {source.label()} -> {target.label()}")
    elif same_s:
        for name, applies, order in _SAME_S_ORDERS:
            if applies(s) and order.index(source.family) < order.index(target.family):
                regime = f"equal-smoothness-{name}"
                break
        if regime is None:
            raise UnsupportedRegimeError(
                f"{source.label()} -> {target.label()} is outside the proven "
                f"orderings at s = {s:g}")
    elif (source.family, target.family) == ("plus", "sharp") and \
            abs(t - s / 2.0) <= _REL_TOL * s:
        regime = "plus-to-half-sharp"
    else:
        raise UnsupportedRegimeError(
            f"no supported comparison {source.label()} -> {target.label()}")

    box = (2 * sample_radius + 1) ** d
    guard = enumeration_guard(max_enum)
    if box > guard:
        raise ResourceLimitError(
            f"domination check box has {box} points, guard is {guard}",
            requested=box, limit=guard)

    checked = 0
    counterexample = None
    ranges = [range(-sample_radius, sample_radius + 1)] * d
    prefix: list[int] = []

    def scan(axis: int) -> bool:
        nonlocal checked, counterexample
        if axis == d:
            k = tuple(prefix)
            checked += 1
            if weight(target, k) > factor * weight(source, k) * (1.0 + _REL_TOL):
                counterexample = k
                return False
            return True
        for kj in ranges[axis]:
            prefix.append(kj)
            ok = scan(axis + 1)
            prefix.pop()
            if not ok:
                return False
        return True

    passed = scan(0)
    return DominationReport(source, target, d, regime, passed, checked,
                            counterexample, factor)


def spectrum_record(table: SpectrumTable) -> dict[str, object]:
    """JSON-ready payload for a spectrum table."""
    record: dict[str, object] = {
        "kind": table.kind.label(),
        "d": table.d,
        "certification": table.certification,
        "values": list(table.values),
    }
    if table.radius is not None:
        record["radius"] = table.radius
    return record


def write_spectrum_csv(path_or_file, table: SpectrumTable) -> int:
    """CSV rows ``n,sigma[,r]`` in table order; returns the row count."""
    from .combinatorics import _open_for_write  # shared writer plumbing

    handle, owned = _open_for_write(path_or_file)
    try:
        writer = csv.writer(handle, lineterminator="\n")
        header = ["n", "sigma"] + (["r"] if table.bases is not None else [])
        writer.writerow(header)
        for i, value in enumerate(table.values, start=1):
            row: list[object] = [i, repr(value)]
            if table.bases is not None:
                row.append(table.bases[i - 1])
            writer.writerow(row)
        return len(table.values)
    finally:
        if owned:
            handle.close()
