"""Occurrences of a gap constellation among actual consecutive primes.

This is an empirical count only.  The sieve-model weight printed beside it
is a different quantity.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from sieve_lab.census import Constellation
from sieve_lab.errors import PreconditionError, ResourceCeilingError

DEFAULT_CEILING = 10**9
DEFAULT_SEGMENT = 1 << 22


@dataclass(frozen=True)
class PrimeWindowCount:
    constellation: Constellation
    bound: int
    occurrences: int
    first_occurrence: int | None

    def csv_row(self) -> list:
        first = "" if self.first_occurrence is None else self.first_occurrence
        return [str(self.constellation), self.bound, self.occurrences, first]


def simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieve_segment(low: int, high: int, base: np.ndarray) -> np.ndarray:
    """Odd primes in [low, high); low is odd.  One flag per odd number."""
    n = (high - low + 1) // 2
    flags = np.ones(n, dtype=bool)
    for p in base.tolist():
        if p * p >= high:
            break
        start = max(p * p, -(-low // p) * p)
        if start % 2 == 0:
            start += p
        if start < high:
            flags[(start - low) // 2 :: p] = False
    if low == 1:
        flags[0] = False
    return low + 2 * np.flatnonzero(flags).astype(np.int64)


def segmented_primes(
    limit: int, segment_size: int = DEFAULT_SEGMENT, threads: int = 1
) -> Iterator[np.ndarray]:
    """Ascending primes <= limit in chunks; segment_size counts odd candidates."""
    if limit < 2:
        return
    yield np.array([2], dtype=np.int64)
    base = simple_sieve(math.isqrt(limit))[1:]
    span = 2 * segment_size
    lows = range(1, limit + 1, span)
    jobs = [(lo, min(lo + span, limit + 1)) for lo in lows]
    if threads <= 1:
        for lo, hi in jobs:
            yield _sieve_segment(lo, hi, base)
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map preserves order; segments are merged in ascending order
        for batch in range(0, len(jobs), threads * 2):
            chunk_jobs = jobs[batch : batch + threads * 2]
            yield from pool.map(lambda j: _sieve_segment(j[0], j[1], base), chunk_jobs)


def _window_matches(primes: np.ndarray, gaps: tuple[int, ...]) -> np.ndarray:
    """Start indices i with primes[i+k+1] - primes[i+k] == gaps[k] for all k."""
    d = np.diff(primes)
    m = len(d) - len(gaps) + 1
    if m <= 0:
        return np.empty(0, dtype=np.int64)
    ok = np.ones(m, dtype=bool)
    for k, g in enumerate(gaps):
        ok &= d[k : k + m] == g
    return np.flatnonzero(ok)


def count_among_primes(
    s,
    bound: int,
    ceiling: int = DEFAULT_CEILING,
    segment_size: int = DEFAULT_SEGMENT,
    threads: int = 1,
) -> PrimeWindowCount:
    """Count starting primes p <= bound - |s| whose next j1 gaps are exactly s."""
    s = Constellation.of(s)
    if bound < 3:
        raise PreconditionError(f"bound must be >= 3, got {bound}", reason="bound_too_small")
    if bound > ceiling:
        raise ResourceCeilingError(f"bound {bound} exceeds ceiling {ceiling}")
    j1 = s.j1
    count = 0
    first = None
    tail = np.empty(0, dtype=np.int64)
    for chunk in segmented_primes(bound, segment_size, threads):
        arr = np.concatenate((tail, chunk))
        hits = arr[_window_matches(arr, s.gaps)]
        if len(hits):
            if first is None:
                first = int(hits[0])
            count += len(hits)
        tail = arr[-j1:]
    return PrimeWindowCount(s, bound, count, first)


def count_among_primes_simple(s, bound: int) -> PrimeWindowCount:
    """Single-array reference used to check the segmented path."""
    s = Constellation.of(s)
    primes = simple_sieve(bound)
    hits = primes[_window_matches(primes, s.gaps)]
    return PrimeWindowCount(s, bound, len(hits), int(hits[0]) if len(hits) else None)
