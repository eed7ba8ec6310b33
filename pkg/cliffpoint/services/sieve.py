"""
Segmented odd-only sieve of Eratosthenes with an on-disk cache.

Cache file layout (little-endian):
    b"SVC1" | limit: u64 | packed odd bitset (bit i <-> 2i+1) | blake2b-64 of the bitset
"""

import hashlib
import logging
import math
import struct
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from ..constants import (
    MAX_SIEVE_LIMIT,
    SIEVE_CACHE_SUFFIX,
    SIEVE_MAGIC,
    SIEVE_SEGMENT_ODDS,
    SieveOrigin,
)

logger = logging.getLogger(__name__)

_HEADER = struct.Struct("<Q")
_CHECKSUM_BYTES = 8


class PrimeAPError(Exception):
    """Base exception for prime and progression computations."""
    pass

class SieveLimitError(PrimeAPError):
    """Raised when a limit is outside the sieve's range or budget."""
    pass

class SieveCacheError(PrimeAPError):
    """Raised when a cache file cannot be read, verified or written."""
    pass


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as int64."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Odd-index mask for indices [lo, hi), i.e. the odd numbers 2i+1."""
    mask = np.ones(hi - lo, dtype=bool)
    low = 2 * lo + 1
    high = 2 * hi + 1  # exclusive
    for p in base:
        p = int(p)
        p2 = p * p
        if p2 >= high:
            break
        start = max(p2, ((low + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start >= high:
            continue
        mask[(start - low) // 2 :: p] = False
    return mask


class SieveCache:
    """Primality of the odd numbers up to a limit, plus the prime 2."""

    def __init__(self, limit: int, odd_bits: np.ndarray, origin: SieveOrigin = SieveOrigin.MEMORY):
        expected = (limit + 1) // 2
        if odd_bits.shape != (expected,):
            raise SieveCacheError(f"bitset has {odd_bits.shape[0]} entries, expected {expected}")
        self.limit = limit
        self.odd_bits = odd_bits
        self.origin = origin
        self._primes: Optional[np.ndarray] = None

    def is_prime(self, n: int) -> bool:
        if n < 0 or n > self.limit:
            raise SieveLimitError(f"{n} is outside the sieved range [0, {self.limit}]")
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        return bool(self.odd_bits[n // 2])

    def primes(self, upto: Optional[int] = None) -> np.ndarray:
        """Primes <= upto (default: the limit), increasing, as int64."""
        if upto is None:
            upto = self.limit
        if upto > self.limit:
            raise SieveLimitError(f"primes up to {upto} requested from a sieve of {self.limit}")
        if self._primes is None:
            odd = 2 * np.flatnonzero(self.odd_bits).astype(np.int64) + 1
            self._primes = np.concatenate([np.array([2], dtype=np.int64), odd]) if self.limit >= 2 else odd
        end = int(np.searchsorted(self._primes, upto, side="right"))
        return self._primes[:end]

    def count(self, upto: Optional[int] = None) -> int:
        return int(self.primes(upto).shape[0])

    # ------------------------------------------------------------------
    # Persistence
    # ------------------------------------------------------------------

    def packed(self) -> bytes:
        return np.packbits(self.odd_bits, bitorder="little").tobytes()

    def checksum(self) -> bytes:
        return hashlib.blake2b(self.packed(), digest_size=_CHECKSUM_BYTES).digest()

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        payload = self.packed()
        digest = hashlib.blake2b(payload, digest_size=_CHECKSUM_BYTES).digest()
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(path.suffix + ".tmp")
            tmp.write_bytes(SIEVE_MAGIC + _HEADER.pack(self.limit) + payload + digest)
            tmp.replace(path)
        except OSError as e:
            logger.error(f"Failed to write sieve cache {path}: {e}")
            raise SieveCacheError(f"cannot write sieve cache {path}: {e}")
        logger.info(f"Saved sieve up to {self.limit} to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> "SieveCache":
        path = Path(path)
        try:
            blob = path.read_bytes()
        except OSError as e:
            logger.error(f"Failed to read sieve cache {path}: {e}")
            raise SieveCacheError(f"cannot read sieve cache {path}: {e}")
        head = len(SIEVE_MAGIC) + _HEADER.size
        if len(blob) < head + _CHECKSUM_BYTES or blob[: len(SIEVE_MAGIC)] != SIEVE_MAGIC:
            raise SieveCacheError(f"{path} is not a sieve cache file")
        (limit,) = _HEADER.unpack(blob[len(SIEVE_MAGIC) : head])
        payload, digest = blob[head:-_CHECKSUM_BYTES], blob[-_CHECKSUM_BYTES:]
        if hashlib.blake2b(payload, digest_size=_CHECKSUM_BYTES).digest() != digest:
            logger.error(f"Checksum mismatch in {path}")
            raise SieveCacheError(f"checksum mismatch in {path}")
        count = (limit + 1) // 2
        if len(payload) != (count + 7) // 8:
            raise SieveCacheError(f"{path} holds {len(payload)} bitset bytes, expected {(count + 7) // 8}")
        bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), count=count, bitorder="little").astype(bool)
        logger.info(f"Loaded sieve up to {limit} from {path}")
        return cls(limit, bits, origin=SieveOrigin.FILE)


def _segments(count: int) -> List[Tuple[int, int]]:
    return [(lo, min(lo + SIEVE_SEGMENT_ODDS, count)) for lo in range(0, count, SIEVE_SEGMENT_ODDS)]


def sieve(limit: int, workers: int = 1) -> SieveCache:
    """
    Segmented sieve of the odd numbers up to `limit`.

    Segments may run on a thread pool; they are assembled in index order, so
    the bitset does not depend on `workers`.
    """
    if limit < 2:
        raise SieveLimitError(f"sieve limit must be at least 2, got {limit}")
    if limit > MAX_SIEVE_LIMIT:
        logger.error(f"Sieve limit {limit} exceeds the memory budget {MAX_SIEVE_LIMIT}")
        raise SieveLimitError(f"sieve limit {limit} exceeds {MAX_SIEVE_LIMIT}")
    count = (limit + 1) // 2
    base = simple_sieve(math.isqrt(limit))
    base = base[base > 2]
    segments = _segments(count)
    logger.debug(f"Sieving {limit} in {len(segments)} segments with {workers} worker(s)")
    if workers > 1 and len(segments) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            masks = list(pool.map(lambda seg: _sieve_segment(seg[0], seg[1], base), segments))
    else:
        masks = [_sieve_segment(lo, hi, base) for lo, hi in segments]
    bits = np.concatenate(masks)
    bits[0] = False  # 1 is not prime
    logger.info(f"Sieved {limit}: {int(bits.sum()) + 1} primes")
    return SieveCache(limit, bits)


def cache_path(cache_dir: Union[str, Path], limit: int) -> Path:
    return Path(cache_dir) / f"sieve-{limit}{SIEVE_CACHE_SUFFIX}"


_memory: Dict[Tuple[int, Optional[str]], SieveCache] = {}
_memory_lock = threading.Lock()


def clear_memory_cache() -> None:
    """Forget every sieve held in memory by load_or_build."""
    with _memory_lock:
        _memory.clear()


def load_or_build(limit: int, cache_dir: Optional[Union[str, Path]] = None, workers: int = 1) -> SieveCache:
    """
    Sieve for `limit`, from memory, then the cache file, then a fresh build.

    Sieves are kept in memory per (limit, cache_dir) for the life of the
    process; a build with a cache directory is also written to disk.
    """
    key = (limit, str(Path(cache_dir).resolve()) if cache_dir is not None else None)
    with _memory_lock:
        held = _memory.get(key)
        if held is not None:
            logger.debug(f"Sieve up to {limit} served from memory")
            return held
        if cache_dir is None:
            built = sieve(limit, workers)
        else:
            path = cache_path(cache_dir, limit)
            if path.exists():
                built = SieveCache.load(path)
            else:
                built = sieve(limit, workers)
                built.save(path)
        _memory[key] = built
    return built
