"""Smallest-prime-factor sieve and the exact k=1 counting functions.

The central object is :class:`ArithTable`, a segmented smallest-prime-factor
(spf) table for 2..limit.  Everything else (primality, Mobius mu, von Mangoldt
Lambda, prime-power decomposition, pi(x), Pi(x), J(x)) is derived from spf on
demand, so a single 4-byte-per-entry array serves the whole package.

Memory bound: spf is stored as uint32, one entry per integer, so the table
supports limit < 2**32 in principle; practically a limit of 10**8 costs
~400 MB plus ~46 MB for the lazily built prime list.  The default desk limit
used by the CLI is 10**7 (~40 MB).
"""

from __future__ import annotations

import struct
from fractions import Fraction
from math import isqrt, log
from typing import BinaryIO, Optional

import numpy as np

DEFAULT_SEGMENT_SIZE = 1 << 20

_CACHE_MAGIC = b"SPF1"


def iroot(x: int, n: int) -> int:
    """Integer n-th root: the largest r >= 0 with r**n <= x.

    Pure integer Newton iteration with a final correction step; no floating
    point is involved, so there are no off-by-one errors for large x.
    """
    x = int(x)
    n = int(n)
    if n <= 0:
        raise ValueError("iroot: n must be positive")
    if x < 0:
        raise ValueError("iroot: x must be nonnegative")
    if x in (0, 1) or n == 1:
        return x
    if n == 2:
        return isqrt(x)
    if x < (1 << n):  # x < 2**n means the root is 1
        return 1
    # Newton iteration on r -> ((n-1)*r + x // r**(n-1)) // n, started from a
    # power of two just above the true root.
    r = 1 << -(-x.bit_length() // n)
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


def isqrt_array(m: np.ndarray) -> np.ndarray:
    """Elementwise floor square root of a nonnegative int64 array.

    A float64 sqrt provides the initial guess; exact int64 comparisons then
    correct it, so the result satisfies v*v <= m < (v+1)*(v+1) exactly.
    Valid for m < 2**62 (the +-1 guess correction needs (v+1)**2 in range).
    """
    m = np.asarray(m, dtype=np.int64)
    v = np.sqrt(m.astype(np.float64)).astype(np.int64)
    # float sqrt is within 1 ulp; two correction sweeps settle every entry
    for _ in range(2):
        v = np.where((v + 1) * (v + 1) <= m, v + 1, v)
        v = np.where(v * v > m, v - 1, v)
    return v


class ArithTable:
    """Immutable smallest-prime-factor table for 2..limit.

    ``spf[n]`` is the smallest prime dividing n (so spf[n] == n exactly when
    n is prime).  Construction is segmented; after construction the table is
    read-only and safe to share between threads.
    """

    def __init__(self, limit: int, spf: np.ndarray):
        self.limit = int(limit)
        self.spf = spf
        self._primes: Optional[np.ndarray] = None
        self._is_prime: Optional[np.ndarray] = None
        self._rays_verified_upto = 1  # see tuples.localization_sum

    # -- derived arrays ----------------------------------------------------

    def primes(self) -> np.ndarray:
        """Sorted int64 array of all primes <= limit (built lazily)."""
        if self._primes is None:
            n = np.arange(2, self.limit + 1, dtype=np.uint32)
            self._primes = (np.flatnonzero(self.spf[2:] == n) + 2).astype(np.int64)
        return self._primes

    def is_prime_array(self) -> np.ndarray:
        """Boolean array of length limit+1 with is_prime[n] for n <= limit."""
        if self._is_prime is None:
            flags = np.zeros(self.limit + 1, dtype=bool)
            n = np.arange(2, self.limit + 1, dtype=np.uint32)
            flags[2:] = self.spf[2:] == n
            self._is_prime = flags
        return self._is_prime

    def is_prime(self, n: int) -> bool:
        self._check_range(n)
        return n >= 2 and int(self.spf[n]) == n

    def _check_range(self, n, lo=1):
        if not float(n).is_integer():
            raise ValueError(f"expected an integer, got {n!r}")
        if n < lo or n > self.limit:
            raise ValueError(f"n={n} outside table range [{lo}, {self.limit}]")


def build_table(limit: int, segment_size: int = DEFAULT_SEGMENT_SIZE) -> ArithTable:
    """Build the spf table for 2..limit with a segmented sieve.

    The result is identical for every segment_size (tested); the segmentation
    only bounds the working set touched per pass.
    """
    if not isinstance(limit, (int, np.integer)) or isinstance(limit, bool):
        raise ValueError("limit must be an integer")
    limit = int(limit)
    if limit < 2:
        raise ValueError("limit must be >= 2")
    if limit >= 1 << 32:
        raise ValueError("limit must be < 2**32 for the uint32 spf table")
    if segment_size < 16:
        raise ValueError("segment_size too small")
    try:
        spf = np.zeros(limit + 1, dtype=np.uint32)
    except MemoryError as exc:
        raise MemoryError(
            f"cannot allocate spf table of {4 * (limit + 1)} bytes for limit={limit}"
        ) from exc

    root = isqrt(limit)
    small = _simple_prime_list(root)

    for lo in range(2, limit + 1, segment_size):
        hi = min(lo + segment_size, limit + 1)
        for p in small:
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start >= hi:
                continue
            view = spf[start:hi:p]
            view[view == 0] = p
    # every unmarked n >= 2 has no prime factor <= sqrt(limit) below itself
    idx = np.flatnonzero(spf[2:] == 0).astype(np.int64) + 2
    spf[idx] = idx
    return ArithTable(limit, spf)


def _simple_prime_list(n: int) -> list[int]:
    """Plain boolean Eratosthenes sieve, primes <= n (n is small: sqrt(limit))."""
    if n < 2:
        return []
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).tolist()


# -- arithmetic functions ---------------------------------------------------


def mu(table: ArithTable, n: int) -> int:
    """Mobius function: (-1)^(number of prime factors) if squarefree, else 0."""
    table._check_range(n)
    n = int(n)
    if n == 1:
        return 1
    sign = 1
    while n > 1:
        p = int(table.spf[n])
        n //= p
        if n % p == 0:
            return 0
        sign = -sign
    return sign


def prime_power_decompose(table: ArithTable, n: int) -> Optional[tuple[int, int]]:
    """Return (p, a) with n == p**a if n is a prime power, else None."""
    table._check_range(n)
    n = int(n)
    if n == 1:
        return None
    p = int(table.spf[n])
    a = 0
    while n % p == 0:
        n //= p
        a += 1
    return (p, a) if n == 1 else None


def von_mangoldt(table: ArithTable, n: int) -> float:
    """Lambda(n) = log p if n = p**a, else 0.  (1 maps to 0.)"""
    table._check_range(n)
    if n == 1:
        return 0.0
    pa = prime_power_decompose(table, n)
    return log(pa[0]) if pa else 0.0


# -- counting functions -----------------------------------------------------


def _floor_arg(table: ArithTable, x) -> int:
    if x > table.limit:
        raise ValueError(f"x={x} exceeds table limit {table.limit}")
    return int(np.floor(x))


def pi_exact(table: ArithTable, x) -> int:
    """Number of primes <= x (x real, x <= limit)."""
    xf = _floor_arg(table, x)
    if xf < 2:
        return 0
    return int(np.searchsorted(table.primes(), xf, side="right"))


def capital_pi_exact(table: ArithTable, x) -> int:
    """Number of prime powers p**a <= x with a >= 1.

    Evaluated as sum over a of pi(floor(x**(1/a))) with exact integer roots;
    the sum stops at a = floor(log2 x) since 2**a must stay <= x.
    """
    xf = _floor_arg(table, x)
    if xf < 2:
        return 0
    total = 0
    a = 1
    while (1 << a) <= xf:
        total += pi_exact(table, iroot(xf, a))
        a += 1
    return total


def j_exact(table: ArithTable, x) -> Fraction:
    """Weighted prime-power count sum_{p^a <= x} 1/a, as an exact Fraction.

    Each n = p**a contributes Lambda(n)/log(n) = 1/a, evaluated symbolically:
    grouping by exponent gives sum over a of pi(floor(x**(1/a)))/a.
    """
    xf = _floor_arg(table, x)
    total = Fraction(0)
    if xf < 2:
        return total
    a = 1
    while (1 << a) <= xf:
        total += Fraction(pi_exact(table, iroot(xf, a)), a)
        a += 1
    return total


# -- binary cache -----------------------------------------------------------
#
# Format: magic "SPF1", uint64 little-endian limit, then spf entries for
# n = 2..limit as uint32 little-endian.


def save_spf_cache(table: ArithTable, f: BinaryIO) -> None:
    f.write(_CACHE_MAGIC)
    f.write(struct.pack("<Q", table.limit))
    f.write(table.spf[2:].astype("<u4").tobytes())


def load_spf_cache(f: BinaryIO) -> ArithTable:
    magic = f.read(4)
    if magic != _CACHE_MAGIC:
        raise ValueError(f"bad spf cache magic {magic!r}")
    raw = f.read(8)
    if len(raw) != 8:
        raise ValueError("truncated spf cache header")
    (limit,) = struct.unpack("<Q", raw)
    if limit < 2 or limit >= 1 << 32:
        raise ValueError(f"spf cache limit {limit} out of range")
    body = f.read()
    if len(body) != 4 * (limit - 1):
        raise ValueError(
            f"spf cache body has {len(body)} bytes, expected {4 * (limit - 1)}"
        )
    spf = np.zeros(limit + 1, dtype=np.uint32)
    spf[2:] = np.frombuffer(body, dtype="<u4")
    return ArithTable(int(limit), spf)
