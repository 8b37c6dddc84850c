"""Lattice-point counts in planar regions and their boundary error terms.

Every count is exact integer arithmetic; the floats only enter through the
smooth main terms (area, volume, x log x).  Counts come in up to three
flavors per region: a direct floor sum, a route through the localization
identity (floor = ray count + 1), and a comparison-only brute-force oracle.
The error series fitted here measure how the signed boundary error
main_term - count grows with the region size.
"""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import IO, Callable, Optional, Sequence

import numpy as np

from .quadrature import integrate
from .sieve import ArithTable, build_table, isqrt_array
from .special import EULER_GAMMA
from .tuples import RAY_ENUM_BOUND, localization_sum

log = logging.getLogger(__name__)

REGION_KINDS = ("graph", "circle_quadrant", "full_circle", "divisor_hyperbola", "ball3")
METHODS = ("direct", "localization", "brute_force")

CIRCLE_R_MAX = 10 ** 7
BALL3_R_MAX = 3000
DIVISOR_DIRECT_MAX = 10 ** 9
DIVISOR_BRUTE_MAX = 10 ** 7
_CHUNK = 1 << 20


@dataclass(frozen=True)
class RegionSpec:
    kind: str
    parameter: float
    func: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}")
        if not self.parameter > 0:
            raise ValueError("region parameter must be positive")
        if (self.func is not None) != (self.kind == "graph"):
            raise ValueError("a function handle is required exactly for kind=graph")


@dataclass(frozen=True)
class CountResult:
    count: int
    main_term: float
    error: float  # main_term - count, signed
    method: str

    @classmethod
    def assemble(cls, count: int, main_term: float, method: str) -> "CountResult":
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        return cls(int(count), float(main_term), float(main_term) - int(count), method)


@dataclass(frozen=True)
class ErrorSeries:
    samples: tuple  # (R, count, main_term, error) rows
    fitted_exponent: float
    residual: float
    fit_window: tuple


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")


def _radius_floor_sq(R):
    """(floor(R), floor(R^2)) with the square exact for int, float, Fraction."""
    if isinstance(R, int):
        return R, R * R
    q = Fraction(R) ** 2
    m = q.numerator // q.denominator
    return isqrt(m), m


def _chunked_isqrt_sum(m: int, lo: int, hi: int, threads: int = 1) -> int:
    """sum_{n=lo}^{hi} isqrt(m - n^2), exact, chunked for memory and threads."""
    if hi < lo:
        return 0
    starts = list(range(lo, hi + 1, _CHUNK))

    def one(start: int) -> int:
        ns = np.arange(start, min(start + _CHUNK, hi + 1), dtype=np.int64)
        return int(np.sum(isqrt_array(m - ns * ns)))

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(one, starts))
    return sum(one(s) for s in starts)


def _floor_via_localization(table: ArithTable, y: float) -> int:
    # the identity gives floor(y) - 1; values below 2 carry floor 0 or 1
    if y < 2.0:
        return int(math.floor(y))
    return localization_sum(table, y) + 1


# ---------------------------------------------------------------------------
# Graph regions


def count_under_graph(f: Callable, x_max, method: str = "direct",
                      table: Optional[ArithTable] = None) -> CountResult:
    """Sum of floor(f(n)) over integer n in [0, floor(x_max)].

    The localization method recomputes each floor >= 2 as ray count plus one
    (floor_readings exposes the pair); terms above RAY_ENUM_BOUND fall back
    to direct floors with a logged notice.
    """
    _check_method(method)
    n_top = int(math.floor(x_max))
    if n_top < 0:
        raise ValueError("x_max must be >= 0")
    values = []
    for n in range(n_top + 1):
        y = float(f(n))
        if not math.isfinite(y):
            raise ValueError(f"f is not finite at index {n}")
        values.append(y)

    if method == "localization":
        capped = sum(1 for y in values if y > RAY_ENUM_BOUND)
        if capped:
            log.info("%d graph terms above localization cap %d, using direct floors",
                     capped, RAY_ENUM_BOUND)
        if table is None:
            top = max((y for y in values if y <= RAY_ENUM_BOUND), default=0.0)
            table = build_table(max(4, int(top) + 2))
        count = 0
        for y in values:
            if y > RAY_ENUM_BOUND:
                count += int(math.floor(y))
            else:
                count += _floor_via_localization(table, y)
    else:
        # brute force for a graph is the same floor-by-floor walk
        count = sum(int(math.floor(y)) for y in values)

    def fv(rs):
        # quadrature hands arrays; plain scalar handles get mapped
        try:
            out = np.asarray(f(rs), dtype=np.float64)
            if out.shape == np.shape(rs):
                return out
        except (TypeError, ValueError):
            pass
        return np.array([float(f(t)) for t in np.atleast_1d(rs)])

    if float(x_max) > 0:
        main = integrate(fv, 0.0, float(x_max), abs_tol=1e-9)
    else:
        main = 0.0
    return CountResult.assemble(count, main, method)


def floor_readings(table: ArithTable, y) -> tuple[int, int]:
    """(localization sum, reconciled floor) for y >= 2; the sum is floor - 1."""
    if y < 2:
        raise ValueError("readings need y >= 2")
    s = localization_sum(table, y)
    return s, s + 1


# ---------------------------------------------------------------------------
# Circles


def _disk_count_sq(m: int, threads: int = 1) -> int:
    """#{(a,b) in Z^2 : a^2 + b^2 <= m} for integer m >= 0."""
    if m < 0:
        return 0
    r = isqrt(m)
    return 1 + 4 * r + 4 * _chunked_isqrt_sum(m, 1, r, threads)


def _disk_brute_sq(m: int) -> int:
    # comparison-only oracle: no isqrt on the boundary
    r = isqrt(m)
    bs = np.arange(-r, r + 1, dtype=np.int64) ** 2
    return sum(int(np.count_nonzero(bs <= m - a * a)) for a in range(-r, r + 1))


def gauss_circle_count(R, method: str = "direct", threads: int = 1,
                       table: Optional[ArithTable] = None) -> CountResult:
    """Lattice points in the closed disk of radius R, three ways."""
    _check_method(method)
    if not 0 < R <= CIRCLE_R_MAX:
        raise ValueError(f"need 0 < R <= {CIRCLE_R_MAX}, got {R}")
    r_floor, m = _radius_floor_sq(R)
    main = math.pi * float(R) * float(R)

    if method == "direct":
        return CountResult.assemble(_disk_count_sq(m, threads), main, method)

    if method == "brute_force":
        if R > 2000:
            raise ValueError("brute force capped at R <= 2000")
        return CountResult.assemble(_disk_brute_sq(m), main, method)

    if R > RAY_ENUM_BOUND:
        raise ValueError(f"localization route capped at R <= {RAY_ENUM_BOUND}")
    if table is None:
        table = build_table(max(4, r_floor + 2))
    count = 1
    count += 4 * (_floor_via_localization(table, float(R)) if R >= 2 else r_floor)
    for n in range(1, r_floor + 1):
        # float sqrt of an exact integer; cannot misround across an integer
        # boundary for radicands below 2^50 (true root is > 1/(2r) away)
        count += 4 * _floor_via_localization(table, math.sqrt(m - n * n))
    return CountResult.assemble(count, main, method)


@dataclass(frozen=True)
class QuadrantSplit:
    """Strict-quadrant count split at c = floor(R/sqrt(2)).

    square_part + 2 * wing_sum reproduces the quadrant: points with both
    coordinates <= c always fit (2c^2 <= R^2), points with both > c never
    do, and the two single-wing halves mirror each other.  half_square_total
    is the floor(R^2/2)-fronted variant of the same assembly, kept for
    comparison; tests record that it overshoots.
    """
    split_at: int
    square_part: int
    wing_sum: int
    total: int
    half_square_total: int


def quadrant_split(R) -> QuadrantSplit:
    r_floor, m = _radius_floor_sq(R)
    c = isqrt(m // 2)  # floor(R / sqrt 2)
    wing = _chunked_isqrt_sum(m, c + 1, r_floor)
    wing_from_c = _chunked_isqrt_sum(m, c, r_floor)
    return QuadrantSplit(
        split_at=c,
        square_part=c * c,
        wing_sum=wing,
        total=c * c + 2 * wing,
        half_square_total=m // 2 + 2 * wing_from_c,
    )


def strict_quadrant_count(R) -> int:
    """#{(a,b), a >= 1, b >= 1, a^2 + b^2 <= R^2}."""
    r_floor, m = _radius_floor_sq(R)
    return _chunked_isqrt_sum(m, 1, r_floor)


# ---------------------------------------------------------------------------
# Divisor hyperbola


def _divisor_direct(x: int, threads: int = 1) -> int:
    starts = list(range(1, x + 1, _CHUNK))

    def one(start: int) -> int:
        ns = np.arange(start, min(start + _CHUNK, x + 1), dtype=np.int64)
        return int(np.sum(x // ns))

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(one, starts))
    return sum(one(s) for s in starts)


def divisor_count_split(x: int) -> int:
    """Hyperbola-split form 2 sum_{n<=sqrt x} floor(x/n) - floor(sqrt x)^2."""
    x = int(x)
    if x < 1:
        raise ValueError("need x >= 1")
    s = isqrt(x)
    ns = np.arange(1, s + 1, dtype=np.int64)
    return 2 * int(np.sum(x // ns)) - s * s


def divisor_hyperbola_count(x, method: str = "direct", threads: int = 1,
                            table: Optional[ArithTable] = None) -> CountResult:
    """sum_{n<=x} floor(x/n), i.e. lattice points under the hyperbola ab <= x."""
    _check_method(method)
    xi = int(x)
    if xi != x or xi < 1:
        raise ValueError(f"need a positive integer, got {x!r}")
    main = xi * math.log(xi) + (2.0 * EULER_GAMMA - 1.0) * xi

    if method == "direct":
        if xi > DIVISOR_DIRECT_MAX:
            raise ValueError(f"direct sum capped at x <= {DIVISOR_DIRECT_MAX}")
        return CountResult.assemble(_divisor_direct(xi, threads), main, method)

    if method == "brute_force":
        # tally divisors of every m <= x; counts the same (a, b) pairs without
        # a single division
        if xi > DIVISOR_BRUTE_MAX:
            raise ValueError(f"brute force capped at x <= {DIVISOR_BRUTE_MAX}")
        tally = np.zeros(xi + 1, dtype=np.int64)
        for a in range(1, xi + 1):
            tally[a::a] += 1
        return CountResult.assemble(int(np.sum(tally)), main, method)

    if xi > RAY_ENUM_BOUND:
        raise ValueError(f"localization route capped at x <= {RAY_ENUM_BOUND}")
    if table is None:
        table = build_table(max(4, xi + 2))
    count = 0
    for n in range(1, xi + 1):
        # x/n stays > 1/n away from any other integer, safely beyond one ulp
        count += _floor_via_localization(table, xi / n)
    return CountResult.assemble(count, main, method)


# ---------------------------------------------------------------------------
# 3-ball


def ball3_count(R, method: str = "direct", threads: int = 1) -> CountResult:
    """#{(a,b,c) in Z^3 : a^2+b^2+c^2 <= R^2} by disk slices along one axis."""
    if method not in ("direct", "brute_force"):
        raise ValueError(f"ball3 supports direct and brute_force, got {method!r}")
    if not 0 < R <= BALL3_R_MAX:
        raise ValueError(f"need 0 < R <= {BALL3_R_MAX}, got {R}")
    r_floor, m = _radius_floor_sq(R)
    main = 4.0 / 3.0 * math.pi * float(R) ** 3

    if method == "brute_force":
        if R > 100:
            raise ValueError("brute force capped at R <= 100")
        count = 0
        cs = np.arange(-r_floor, r_floor + 1, dtype=np.int64) ** 2
        for a in range(-r_floor, r_floor + 1):
            for b in range(-r_floor, r_floor + 1):
                rem = m - a * a - b * b
                if rem >= 0:
                    count += int(np.count_nonzero(cs <= rem))
        return CountResult.assemble(count, main, method)

    slices = list(range(-r_floor, r_floor + 1))

    def one(c: int) -> int:
        return _disk_count_sq(m - c * c)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            count = sum(pool.map(one, slices))
    else:
        count = sum(one(c) for c in slices)
    return CountResult.assemble(count, main, method)


# ---------------------------------------------------------------------------
# Error-growth fits


def fit_error_samples(samples: Sequence[tuple]) -> ErrorSeries:
    """Least-squares slope of log|error| against log R.

    Zero-error samples are excluded; if none are left the fit is refused
    rather than fabricated.
    """
    rows = [(float(r), int(c), float(mt), float(e)) for (r, c, mt, e) in samples]
    live = [(r, e) for (r, _, _, e) in rows if abs(e) > 0.0]
    if len(live) < 2:
        raise ValueError("not enough nonzero errors to fit")
    lx = np.log([r for r, _ in live])
    ly = np.log([abs(e) for _, e in live])
    coeffs, res, *_ = np.polyfit(lx, ly, 1, full=True)
    slope = float(coeffs[0])
    residual = float(np.sqrt(res[0] / len(live))) if len(res) else 0.0
    if not math.isfinite(slope):
        raise ValueError("fit produced a non-finite exponent")
    rs = [r for r, *_ in rows]
    return ErrorSeries(tuple(rows), slope, residual, (min(rs), max(rs)))


def _region_counter(region_kind, threads: int = 1) -> Callable:
    kind = region_kind.kind if isinstance(region_kind, RegionSpec) else str(region_kind)
    if kind in ("circle", "full_circle"):
        return lambda R: gauss_circle_count(R, threads=threads)
    if kind in ("divisor", "divisor_hyperbola", "hyperbola"):
        def count_divisor(x):
            xi = int(x)
            c = divisor_count_split(xi)
            main = xi * math.log(xi) + (2.0 * EULER_GAMMA - 1.0) * xi
            return CountResult.assemble(c, main, "direct")
        return count_divisor
    if kind == "ball3":
        return lambda R: ball3_count(R, threads=threads)
    raise ValueError(f"no error series for region kind {kind!r}")


def error_exponent_fit(region_kind, R_samples: Sequence, threads: int = 1) -> ErrorSeries:
    """Measure the boundary-error exponent over a sweep of sizes.

    Needs at least 8 samples spanning at least two decades; the counts are
    exact, so the only noise in the fit is the arithmetic of |error| itself.
    """
    rs = sorted(set(float(r) for r in R_samples))
    if len(rs) < 8:
        raise ValueError(f"need >= 8 samples, got {len(rs)}")
    if max(rs) < 100.0 * min(rs):
        raise ValueError("samples must span at least two decades")
    counter = _region_counter(region_kind, threads)
    samples = []
    for r in rs:
        r_arg = int(r) if float(r).is_integer() else r
        got = counter(r_arg)
        samples.append((float(r), got.count, got.main_term, got.error))
    return fit_error_samples(samples)


def geometric_sizes(lo: float, hi: float, count: int = 12) -> list:
    """Distinct integer sample sizes, geometrically spaced over [lo, hi]."""
    if not (0 < lo < hi) or count < 2:
        raise ValueError("need 0 < lo < hi and count >= 2")
    raw = np.geomspace(lo, hi, count)
    out: list = []
    for v in raw:
        n = max(1, int(round(v)))
        if not out or n > out[-1]:
            out.append(n)
    return out


# ---------------------------------------------------------------------------
# Emission


def write_error_series_csv(series: ErrorSeries, f: IO[str]) -> None:
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["R", "count", "main_term", "error"])
    for r, c, mt, e in series.samples:
        w.writerow([repr(r), c, repr(mt), repr(e)])


def error_series_summary(series: ErrorSeries) -> dict:
    return {
        "fitted_exponent": series.fitted_exponent,
        "residual": series.residual,
        "window": [series.fit_window[0], series.fit_window[1]],
    }
