"""Offset patterns, exponent vectors, and exact k-tuple counting.

An offset pattern H = (0, h_2, ..., h_k) shifts a base integer n to the
tuple (n, n+h_2, ..., n+h_k); an exponent vector m = (m_1, ..., m_k) turns a
prime tuple into the prime-power product prod_i (n+h_i)^{m_i}.  Counting all
such products up to a cutoff, over every pattern and every exponent vector,
is the same thing as counting ordered prime factorizations, which is where
the floor-of-x identity checked by :func:`localization_sum` comes from.

Every product here is computed in exact (unbounded) integer arithmetic, so
"overflow" cannot occur; a product either is <= the cutoff or it is not.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import floor
from typing import IO, Iterable, Sequence

import numpy as np

from .sieve import ArithTable, iroot

RAY_ENUM_BOUND = 10 ** 6


@dataclass(frozen=True)
class OffsetSet:
    """Strictly increasing nonnegative offsets starting at 0."""

    offsets: tuple[int, ...]

    def __post_init__(self):
        offs = tuple(int(h) for h in self.offsets)
        object.__setattr__(self, "offsets", offs)
        if not offs:
            raise ValueError("offset set must be nonempty")
        if offs[0] != 0:
            raise ValueError("first offset must be 0")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise ValueError(f"offsets must be strictly increasing: {offs}")

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def max_offset(self) -> int:
        return self.offsets[-1]

    @classmethod
    def parse(cls, text: str) -> "OffsetSet":
        """Parse '0,2,6' style comma-separated offsets."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if not parts:
            raise ValueError(f"no offsets in {text!r}")
        return cls(tuple(int(p) for p in parts))

    def __str__(self):
        return "{" + ",".join(str(h) for h in self.offsets) + "}"


@dataclass(frozen=True)
class ExponentVector:
    """Positive integer exponents m = (m_1, ..., m_k)."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if not exps:
            raise ValueError("exponent vector must be nonempty")
        if any(e < 1 for e in exps):
            raise ValueError(f"exponents must be >= 1: {exps}")

    @property
    def k(self) -> int:
        return len(self.exponents)

    @property
    def total(self) -> int:
        return sum(self.exponents)

    @classmethod
    def parse(cls, text: str) -> "ExponentVector":
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if not parts:
            raise ValueError(f"no exponents in {text!r}")
        return cls(tuple(int(p) for p in parts))

    def __str__(self):
        return "(" + ",".join(str(e) for e in self.exponents) + ")"


@dataclass(frozen=True)
class RayPoint:
    """One prime-power tuple: base n, pattern H, exponents m, and the product.

    product is stored, not trusted: recompute_product() must return the same
    value, and enumerate_rays checks this for every point it emits.
    """

    base: int
    offset_set: OffsetSet
    exponents: ExponentVector
    product: int

    def recompute_product(self) -> int:
        return ray_product(self.base, self.offset_set, self.exponents)

    def entries(self) -> tuple[int, ...]:
        return tuple(self.base + h for h in self.offset_set.offsets)


@dataclass(frozen=True)
class TupleWeight:
    value: float
    is_indicator: bool


@dataclass(frozen=True)
class LocalizationReport:
    """Measured relation between the all-rays count and floor(x)."""

    x: float
    floor_x: int
    ray_count: int

    @property
    def offset_from_floor(self) -> int:
        return self.floor_x - self.ray_count


def ray_product(n: int, H: OffsetSet, m: ExponentVector) -> int:
    """prod_i (n + h_i)^{m_i}, exact."""
    if m.k != H.k:
        raise ValueError(f"exponent vector length {m.k} != offset count {H.k}")
    prod = 1
    for h, e in zip(H.offsets, m.exponents):
        prod *= (n + h) ** e
    return prod


# ---------------------------------------------------------------------------
# tuple weights and prime k-tuple counts


def tuple_weight(table: ArithTable, n: int, H: OffsetSet) -> TupleWeight:
    """Indicator weight of the tuple at base n.

    Each prime entry n+h contributes a factor mu(p)Lambda(p)/log p = -1; any
    non-prime entry contributes 0 (a higher prime power has mu = 0, anything
    else has Lambda = 0).  The leading (-1)^k of the inversion-sign
    convention is folded in, so the weight is exactly 1 on prime tuples and
    0 otherwise.  We evaluate the primality route directly; tests check the
    float mu*Lambda/log product agrees.
    """
    n = int(n)
    if n < 2:
        raise ValueError(f"base must be >= 2, got {n}")
    if n + H.max_offset > table.limit:
        raise ValueError(
            f"n + max offset = {n + H.max_offset} exceeds table limit {table.limit}"
        )
    value = 1.0
    for h in H.offsets:
        if not table.is_prime(n + h):
            value = 0.0
            break
    return TupleWeight(value=value, is_indicator=value in (0.0, 1.0))


def pi_k(table: ArithTable, r, H: OffsetSet) -> int:
    """Count bases n <= r (n >= 2) with n + h prime for every offset h."""
    rf = int(floor(r))
    if rf < 2:
        return 0
    if rf + H.max_offset > table.limit:
        raise ValueError(
            f"r + max offset = {rf + H.max_offset} exceeds table limit {table.limit}"
        )
    flags = table.is_prime_array()
    acc = flags[2 : rf + 1].copy()
    for h in H.offsets[1:]:
        acc &= flags[2 + h : rf + 1 + h]
    return int(np.count_nonzero(acc))


def max_base_for_cutoff(x, H: OffsetSet, m: ExponentVector) -> int:
    """Largest n >= 1 with ray_product(n, H, m) <= x, or 0 if there is none.

    The product is strictly increasing in n and >= n^{sum(m)}, so binary
    search on [1, iroot(x, sum m)] suffices.
    """
    xf = int(floor(x))
    if xf < 1:
        return 0
    hi = iroot(xf, m.total)
    if hi < 1:
        return 0
    if ray_product(1, H, m) > xf:
        return 0
    lo = 1  # product(lo) <= xf invariant
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if ray_product(mid, H, m) <= xf:
            lo = mid
        else:
            hi = mid - 1
    return lo


def pi_k_power(table: ArithTable, x, H: OffsetSet, m: ExponentVector) -> int:
    """Count bases n >= 2, all n+h prime, with prod (n+h_i)^{m_i} <= x."""
    if m.k != H.k:
        raise ValueError(f"exponent vector length {m.k} != offset count {H.k}")
    n_star = max_base_for_cutoff(x, H, m)
    if n_star < 2:
        return 0
    return pi_k(table, n_star, H)


def _exponent_vectors(bases: Sequence[int], x: int) -> list[tuple[int, ...]]:
    """All m >= (1,...,1) with prod bases[i]^{m_i} <= x, DFS order."""
    k = len(bases)
    # suffix[i] = minimal product of the remaining positions at exponent 1
    suffix = [1] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix[i] = suffix[i + 1] * bases[i]
    out: list[tuple[int, ...]] = []
    cur: list[int] = []

    def rec(i: int, prod: int):
        if i == k:
            out.append(tuple(cur))
            return
        e = 1
        p = prod * bases[i]
        while p * suffix[i + 1] <= x:
            cur.append(e)
            rec(i + 1, p)
            cur.pop()
            e += 1
            p *= bases[i]

    rec(0, 1)
    return out


def capital_pi_k(table: ArithTable, x, H: OffsetSet) -> int:
    """Count prime-power tuples along the H ray with product <= x.

    Sums pi_k_power over every exponent vector whose minimal achievable
    product (base n = 2) stays <= x; the DFS bound makes the sum finite
    because every entry is >= 2, so sum(m) <= log2(x).
    """
    xf = int(floor(x))
    if xf < 2:
        return 0
    bases = [2 + h for h in H.offsets]
    total = 0
    for exps in _exponent_vectors(bases, xf):
        total += pi_k_power(table, xf, H, ExponentVector(exps))
    return total


# ---------------------------------------------------------------------------
# ray enumeration: one ray point per integer via its factorization


def factor_sorted(table: ArithTable, n: int) -> tuple[list[int], list[int]]:
    """Factor n into (primes ascending, exponents) via the spf table."""
    table._check_range(n, lo=2)
    n = int(n)
    spf = table.spf
    primes: list[int] = []
    exps: list[int] = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        primes.append(p)
        exps.append(e)
    return primes, exps


def ray_from_integer(table: ArithTable, n: int) -> RayPoint:
    """The unique ray point whose product is n (grouped factorization)."""
    primes, exps = factor_sorted(table, n)
    base = primes[0]
    point = RayPoint(
        base=base,
        offset_set=OffsetSet(tuple(p - base for p in primes)),
        exponents=ExponentVector(tuple(exps)),
        product=int(n),
    )
    if point.recompute_product() != int(n):
        raise AssertionError(f"factorization of {n} does not multiply back")
    return point


def enumerate_rays(table: ArithTable, x, max_x: int = RAY_ENUM_BOUND) -> list[RayPoint]:
    """All ray points with product <= x, exactly one per integer in [2, x].

    Enumeration is by factorizing each integer, so the one-point-per-integer
    bijection holds by construction; each point's product is still recomputed
    from its parts and checked.
    """
    xf = int(floor(x))
    if xf < 2:
        return []
    if xf > max_x:
        raise ValueError(f"x={xf} above enumeration bound {max_x}")
    if xf > table.limit:
        raise ValueError(f"x={xf} exceeds table limit {table.limit}")
    return [ray_from_integer(table, n) for n in range(2, xf + 1)]


def enumerate_rays_combinatorial(
    table: ArithTable, x, max_x: int = 10 ** 4
) -> list[RayPoint]:
    """Independent ray generator: choose increasing primes, then exponents.

    Used to cross-validate enumerate_rays; never call it at large x, the
    prime-subset recursion is only meant for test ranges.
    """
    xf = int(floor(x))
    if xf > max_x:
        raise ValueError(f"x={xf} above combinatorial bound {max_x}")
    if xf < 2:
        return []
    primes = [int(p) for p in table.primes()[table.primes() <= xf]]
    rays: list[RayPoint] = []

    def assign_exponents(chosen: list[int]):
        for exps in _exponent_vectors(chosen, xf):
            prod = 1
            for p, e in zip(chosen, exps):
                prod *= p ** e
            base = chosen[0]
            rays.append(
                RayPoint(
                    base=base,
                    offset_set=OffsetSet(tuple(p - base for p in chosen)),
                    exponents=ExponentVector(exps),
                    product=prod,
                )
            )

    def extend(start: int, chosen: list[int], min_prod: int):
        if chosen:
            assign_exponents(chosen)
        for idx in range(start, len(primes)):
            p = primes[idx]
            if min_prod * p > xf:
                break
            chosen.append(p)
            extend(idx + 1, chosen, min_prod * p)
            chosen.pop()

    extend(0, [], 1)
    return rays


# ---------------------------------------------------------------------------
# localization: total ray count against floor(x)


def _verify_ray_products(table: ArithTable, upto: int, block: int = 1 << 20) -> None:
    """Check prod-of-factorization == n for every n in (watermark, upto].

    Vectorized: repeatedly strip the smallest prime factor across a whole
    block, accumulating the product; at most log2(upto) passes.  Advances
    the table's verified watermark so repeated sums stay cheap.
    """
    done = table._rays_verified_upto
    if upto <= done:
        return
    spf = table.spf
    for lo in range(done + 1, upto + 1, block):
        hi = min(lo + block - 1, upto)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        rem = n.copy()
        prod = np.ones_like(n)
        while True:
            active = rem > 1
            if not active.any():
                break
            p = spf[rem].astype(np.int64)
            p[~active] = 1
            prod *= p
            rem //= p
        if not np.array_equal(prod, n):
            bad = int(n[np.flatnonzero(prod != n)[0]])
            raise AssertionError(f"factor product mismatch at n={bad}")
        table._rays_verified_upto = hi


def localization_sum(table: ArithTable, x, max_x: int = RAY_ENUM_BOUND) -> int:
    """Total number of ray points with product <= x, over all patterns.

    Equivalent to summing capital_pi_k over every admissible-or-not offset
    pattern; computed instead by the factorization bijection: every integer
    in [2, floor(x)] is the product of exactly one ray point, and 1 is the
    product of none (its factorization is empty).  The count therefore comes
    out floor(x) - 1, one below the floor; callers that want the comparison
    spelled out should use localization_report.
    """
    xf = int(floor(x))
    if xf < 2:
        return 0
    if xf > max_x:
        raise ValueError(f"x={xf} above enumeration bound {max_x}")
    if xf > table.limit:
        raise ValueError(f"x={xf} exceeds table limit {table.limit}")
    _verify_ray_products(table, xf)
    count = xf - 1  # one verified ray per integer in [2, xf]
    assert count == xf - 1
    return count


def localization_report(table: ArithTable, x, max_x: int = RAY_ENUM_BOUND) -> LocalizationReport:
    xf = int(floor(x))
    return LocalizationReport(
        x=float(x), floor_x=xf, ray_count=localization_sum(table, x, max_x=max_x)
    )


# ---------------------------------------------------------------------------
# CSV dump


def write_ray_csv(rays: Iterable[RayPoint], f: IO[str]) -> None:
    """Dump ray points as CSV: k, offsets, exponents, base, product."""
    w = csv.writer(f, lineterminator="\n")
    w.writerow(["k", "offsets", "exponents", "base", "product"])
    for r in rays:
        w.writerow(
            [
                r.offset_set.k,
                ";".join(str(h) for h in r.offset_set.offsets),
                ";".join(str(e) for e in r.exponents.exponents),
                r.base,
                r.product,
            ]
        )
