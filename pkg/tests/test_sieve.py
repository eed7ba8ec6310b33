"""
Tests for the segmented sieve and its on-disk cache.
"""

import numpy as np
import pytest

from cliffpoint.constants import MAX_SIEVE_LIMIT, SIEVE_MAGIC, SieveOrigin
from cliffpoint.services.prime_ap import is_prime
from cliffpoint.services.sieve import (
    SieveCache,
    SieveCacheError,
    SieveLimitError,
    cache_path,
    clear_memory_cache,
    load_or_build,
    simple_sieve,
    sieve
)


def test_small_primes():
    """Test the primes up to 30."""
    assert sieve(30).primes().tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert sieve(2).primes().tolist() == [2]
    assert sieve(3).primes().tolist() == [2, 3]


def test_prime_counts():
    """Test pi(100) and pi(10^6)."""
    assert sieve(100).count() == 25
    cache = sieve(10 ** 6)
    assert cache.count() == 78498
    assert cache.count(100) == 25


def test_matches_trial_division():
    """Test every entry up to 10^4 against trial division."""
    cache = sieve(10 ** 4)
    for n in range(10 ** 4 + 1):
        assert cache.is_prime(n) == is_prime(n), n


def test_matches_simple_sieve():
    """Test the segmented sieve against the plain one."""
    limit = 200_001
    assert np.array_equal(sieve(limit).primes(), simple_sieve(limit))


def test_workers_do_not_change_result():
    """Test the bitset is independent of the worker count."""
    limit = 5_000_000
    single = sieve(limit, workers=1)
    threaded = sieve(limit, workers=3)
    assert np.array_equal(single.odd_bits, threaded.odd_bits)


def test_limits():
    """Test out-of-range requests."""
    with pytest.raises(SieveLimitError):
        sieve(1)
    with pytest.raises(SieveLimitError):
        sieve(MAX_SIEVE_LIMIT + 1)

    cache = sieve(100)
    with pytest.raises(SieveLimitError):
        cache.is_prime(101)
    with pytest.raises(SieveLimitError):
        cache.primes(1000)


def test_bitset_shape_checked():
    """Test a bitset of the wrong length is rejected."""
    with pytest.raises(SieveCacheError):
        SieveCache(100, np.ones(10, dtype=bool))


def test_cache_round_trip(tmp_path):
    """Test save and load reproduce the bitset."""
    cache = sieve(12_345)
    path = cache.save(tmp_path / "nested" / "primes.svc")

    loaded = SieveCache.load(path)
    assert loaded.origin == SieveOrigin.FILE
    assert loaded.limit == 12_345
    assert np.array_equal(loaded.odd_bits, cache.odd_bits)
    assert loaded.checksum() == cache.checksum()
    assert path.read_bytes().startswith(SIEVE_MAGIC)


def test_corrupted_cache_rejected(tmp_path):
    """Test a flipped payload byte fails the checksum."""
    path = sieve(10_000).save(tmp_path / "primes.svc")
    blob = bytearray(path.read_bytes())
    blob[20] ^= 0xFF
    path.write_bytes(bytes(blob))

    with pytest.raises(SieveCacheError):
        SieveCache.load(path)


def test_bad_cache_files(tmp_path):
    """Test missing and foreign files raise the cache error."""
    with pytest.raises(SieveCacheError):
        SieveCache.load(tmp_path / "missing.svc")

    foreign = tmp_path / "foreign.svc"
    foreign.write_bytes(b"not a sieve cache at all")
    with pytest.raises(SieveCacheError):
        SieveCache.load(foreign)


def test_load_or_build(tmp_path):
    """Test the cache is written on first use and read from disk afterwards."""
    clear_memory_cache()
    first = load_or_build(5000, tmp_path)
    assert first.origin == SieveOrigin.MEMORY
    assert cache_path(tmp_path, 5000).exists()

    clear_memory_cache()
    second = load_or_build(5000, tmp_path)
    assert second.origin == SieveOrigin.FILE
    assert second.count() == first.count() == 669


def test_load_or_build_memoises(tmp_path):
    """Test repeated requests return the sieve already held in memory."""
    clear_memory_cache()
    first = load_or_build(3000)
    assert load_or_build(3000) is first
    assert first.origin == SieveOrigin.MEMORY

    on_disk = load_or_build(3000, tmp_path)
    assert on_disk is not first
    cache_path(tmp_path, 3000).unlink()
    assert load_or_build(3000, tmp_path) is on_disk

    clear_memory_cache()
    assert load_or_build(3000) is not first
