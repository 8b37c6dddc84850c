import io
from fractions import Fraction
from math import isqrt

import numpy as np
import pytest

from primelattice import sieve
from primelattice.sieve import (
    ArithTable,
    build_table,
    capital_pi_exact,
    iroot,
    isqrt_array,
    j_exact,
    load_spf_cache,
    mu,
    pi_exact,
    prime_power_decompose,
    save_spf_cache,
    von_mangoldt,
)

LIMIT = 20_000


@pytest.fixture(scope="module")
def table() -> ArithTable:
    return build_table(LIMIT)


# ---------------------------------------------------------------------------
# reference implementations (independent of the sieve)


def spf_ref(n: int) -> int:
    for d in range(2, isqrt(n) + 1):
        if n % d == 0:
            return d
    return n


def mu_ref(n: int) -> int:
    sign = 1
    for d in range(2, isqrt(n) + 1):
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            sign = -sign
    return sign if n == 1 else -sign


def factor_ref(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# spf correctness


def test_spf_matches_trial_division_exhaustive(table):
    for n in range(2, 3000):
        assert int(table.spf[n]) == spf_ref(n), n


def test_spf_matches_trial_division_sampled(table):
    rng = np.random.default_rng(7)
    for n in rng.integers(2, LIMIT + 1, size=400):
        assert int(table.spf[n]) == spf_ref(int(n))


def test_segment_size_does_not_change_result():
    base = build_table(5000)
    for seg in (16, 97, 1024, 5001, 10**6):
        alt = build_table(5000, segment_size=seg)
        assert np.array_equal(alt.spf, base.spf)


def test_build_rejects_bad_limits():
    with pytest.raises(ValueError):
        build_table(1)
    with pytest.raises(ValueError):
        build_table(2.5)  # type: ignore[arg-type]
    with pytest.raises(ValueError):
        build_table(100, segment_size=4)


def test_primes_list(table):
    ps = table.primes()
    assert ps[:10].tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    # every listed entry is prime, no prime is missed
    flags = table.is_prime_array()
    assert np.array_equal(np.flatnonzero(flags), ps)
    for n in range(2, 500):
        assert table.is_prime(n) == all(n % d for d in range(2, n))
    assert not table.is_prime(1)


# ---------------------------------------------------------------------------
# mu, Lambda, prime powers


def test_mu_exhaustive(table):
    assert mu(table, 1) == 1
    for n in range(2, 2000):
        assert mu(table, n) == mu_ref(n), n


def test_mu_mertens_partial_sums(table):
    # frozen Mertens values M(n) = sum_{m<=n} mu(m)
    acc = 0
    known = {10: -1, 100: 1, 1000: 2, 10000: -23}
    for n in range(1, 10001):
        acc += mu(table, n)
        if n in known:
            assert acc == known[n]


def test_prime_power_decompose(table):
    assert prime_power_decompose(table, 1) is None
    for n in range(2, 3000):
        got = prime_power_decompose(table, n)
        fac = factor_ref(n)
        if len(fac) == 1:
            ((p, a),) = fac.items()
            assert got == (p, a)
            assert p ** a == n
        else:
            assert got is None


def test_von_mangoldt(table):
    assert von_mangoldt(table, 1) == 0.0
    assert von_mangoldt(table, 12) == 0.0
    assert von_mangoldt(table, 8) == pytest.approx(np.log(2))
    assert von_mangoldt(table, 9) == pytest.approx(np.log(3))
    # Chebyshev psi(100) = sum Lambda(n), frozen from a direct high-precision sum
    psi = sum(von_mangoldt(table, n) for n in range(1, 101))
    assert psi == pytest.approx(94.04531122935739, rel=1e-12)


# ---------------------------------------------------------------------------
# counting functions


def test_pi_known_values(table):
    for x, want in [(1, 0), (2, 1), (10, 4), (100, 25), (1000, 168), (10000, 1229)]:
        assert pi_exact(table, x) == want
    # real arguments floor
    assert pi_exact(table, 10.99) == 4
    assert pi_exact(table, 2.0) == 1


def test_pi_against_running_count(table):
    count = 0
    for n in range(1, 5001):
        if n >= 2 and table.is_prime(n):
            count += 1
        assert pi_exact(table, n) == count


def test_pi_rejects_out_of_range(table):
    with pytest.raises(ValueError):
        pi_exact(table, LIMIT + 1)


def test_capital_pi_known_values(table):
    assert capital_pi_exact(table, 1) == 0
    assert capital_pi_exact(table, 2) == 1
    assert capital_pi_exact(table, 100) == 35
    # direct count oracle
    for x in (10, 30, 100, 1000, 7919):
        direct = sum(
            1 for n in range(2, x + 1) if prime_power_decompose(table, n) is not None
        )
        assert capital_pi_exact(table, x) == direct


def test_j_exact_values(table):
    assert j_exact(table, 1) == 0
    assert j_exact(table, 10) == Fraction(16, 3)
    # direct weighted-count oracle
    for x in (2, 20, 100, 1000):
        direct = Fraction(0)
        for n in range(2, x + 1):
            pa = prime_power_decompose(table, n)
            if pa is not None:
                direct += Fraction(1, pa[1])
        assert j_exact(table, x) == direct
    # J(x) - Pi(x) difference only comes from exponents >= 2
    assert j_exact(table, 100) == Fraction(25, 1) + Fraction(4, 2) + Fraction(
        2, 3
    ) + Fraction(2, 4) + Fraction(1, 5) + Fraction(1, 6)


# ---------------------------------------------------------------------------
# integer roots


def test_iroot_small_exhaustive():
    for x in range(0, 200):
        for n in range(1, 8):
            r = iroot(x, n)
            assert r ** n <= x and (r + 1) ** n > x, (x, n)


def test_iroot_large_edges():
    assert iroot(10 ** 18, 3) == 10 ** 6
    assert iroot(10 ** 18 - 1, 3) == 10 ** 6 - 1
    for n in (2, 3, 5, 17):
        big = 12345678901234567 ** n
        assert iroot(big, n) == 12345678901234567
        assert iroot(big - 1, n) == 12345678901234566
        assert iroot(big + 1, n) == 12345678901234567
    with pytest.raises(ValueError):
        iroot(-1, 2)
    with pytest.raises(ValueError):
        iroot(10, 0)


def test_isqrt_array_exact():
    m = np.array([0, 1, 2, 3, 4, 8, 9, 10 ** 12, 10 ** 12 + 1, 2 ** 61], dtype=np.int64)
    v = isqrt_array(m)
    for mi, vi in zip(m.tolist(), v.tolist()):
        assert vi == isqrt(mi)
    rng = np.random.default_rng(11)
    m = rng.integers(0, 2 ** 61, size=2000)
    v = isqrt_array(m)
    assert np.all(v.astype(object) ** 2 <= m.astype(object))
    assert np.all((v.astype(object) + 1) ** 2 > m.astype(object))


# ---------------------------------------------------------------------------
# cache round trip


def test_cache_roundtrip(table):
    buf = io.BytesIO()
    save_spf_cache(table, buf)
    buf.seek(0)
    back = load_spf_cache(buf)
    assert back.limit == table.limit
    assert np.array_equal(back.spf, table.spf)
    assert pi_exact(back, 10000) == 1229


def test_cache_header_layout(table):
    buf = io.BytesIO()
    save_spf_cache(table, buf)
    raw = buf.getvalue()
    assert raw[:4] == b"SPF1"
    assert int.from_bytes(raw[4:12], "little") == LIMIT
    assert len(raw) == 12 + 4 * (LIMIT - 1)
    # entry for n=2 is the first body word
    assert int.from_bytes(raw[12:16], "little") == 2


def test_cache_rejects_corruption(table):
    buf = io.BytesIO()
    save_spf_cache(table, buf)
    raw = buf.getvalue()
    with pytest.raises(ValueError):
        load_spf_cache(io.BytesIO(b"XXXX" + raw[4:]))
    with pytest.raises(ValueError):
        load_spf_cache(io.BytesIO(raw[:-4]))
    with pytest.raises(ValueError):
        load_spf_cache(io.BytesIO(raw[:10]))
