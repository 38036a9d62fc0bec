"""Driving-term censuses of a constellation inside a cycle of gaps.

A driving term for s = g_1..g_j1 is a run of consecutive gaps that splits into
j1 blocks with sums g_1, ..., g_j1.  Every gap position in the cycle is tried
once as a start; the run may wrap around the cycle any number of times.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Sequence

import numpy as np

from sieve_lab.cycle import CycleStream, GapCycle, open_cycle
from sieve_lab.errors import PreconditionError
from sieve_lab.numeric import kernel_of, next_prime


@dataclass(frozen=True)
class Constellation:
    gaps: tuple[int, ...]

    def __post_init__(self):
        gaps = tuple(int(g) for g in self.gaps)
        if not gaps:
            raise PreconditionError("constellation must have at least one gap", reason="empty")
        if any(g < 1 for g in gaps):
            raise PreconditionError(f"gaps must be positive: {gaps}", reason="nonpositive_gap")
        object.__setattr__(self, "gaps", gaps)

    @classmethod
    def parse(cls, text: str) -> "Constellation":
        try:
            return cls(tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok))
        except ValueError as exc:
            raise PreconditionError(f"cannot parse constellation {text!r}", reason="parse") from exc

    @classmethod
    def of(cls, s: "Constellation | Sequence[int] | str") -> "Constellation":
        if isinstance(s, Constellation):
            return s
        if isinstance(s, str):
            return cls.parse(s)
        return cls(tuple(s))

    @property
    def j1(self) -> int:
        return len(self.gaps)

    @property
    def span(self) -> int:
        return sum(self.gaps)

    @property
    def all_even(self) -> bool:
        return all(g % 2 == 0 for g in self.gaps)

    def reversed(self) -> "Constellation":
        return Constellation(self.gaps[::-1])

    def __str__(self) -> str:
        return ",".join(map(str, self.gaps))


@dataclass(frozen=True)
class DrivingTermCensus:
    constellation: Constellation
    stage_prime: int
    counts: tuple[int, ...]

    @property
    def j_min(self) -> int:
        return self.constellation.j1

    @property
    def j_max(self) -> int:
        return self.j_min + len(self.counts) - 1

    def total(self) -> int:
        return sum(self.counts)

    def padded(self, j_max: int) -> tuple[int, ...]:
        """Counts zero-extended (never truncated) to cover j1..j_max."""
        extra = j_max - self.j_max
        return self.counts + (0,) * max(extra, 0)

    def to_json(self) -> dict:
        return {
            "constellation": list(self.constellation.gaps),
            "stage_prime": self.stage_prime,
            "j1": self.j_min,
            "J": self.j_max,
            "counts": [str(c) for c in self.counts],
        }


def _scan_linear(gaps: np.ndarray, nstarts: int, cums: Sequence[int]) -> np.ndarray:
    """Histogram of driving-term lengths for starts 0..nstarts-1 of a linear gap array.

    The array must extend far enough past the last start to hold any driving term.
    """
    prefix = np.concatenate(([0], np.cumsum(gaps, dtype=np.int64)))
    base = prefix[:nstarts]
    ok = np.ones(nstarts, dtype=bool)
    idx = None
    for c in cums:
        target = base + c
        idx = np.searchsorted(prefix, target)
        idx_c = np.minimum(idx, len(prefix) - 1)
        ok &= prefix[idx_c] == target
    lengths = idx[ok] - np.arange(nstarts)[ok]
    return np.bincount(lengths)


def _merge(hists: Iterable[np.ndarray]) -> list[int]:
    out: list[int] = []
    for h in hists:
        h = h.tolist()
        if len(h) > len(out):
            out.extend([0] * (len(h) - len(out)))
        for i, v in enumerate(h):
            out[i] += v
    return out


def _scan_cycle(cycle: GapCycle, cums: list[int], window: int, threads: int) -> list[int]:
    n = len(cycle)
    reps = -(-(n + window) // n)
    ext = np.tile(cycle.gaps.astype(np.int64), reps)
    nseg = max(1, min(threads, n // 4096 or 1))
    bounds = [n * k // nseg for k in range(nseg + 1)]

    def work(k):
        a, b = bounds[k], bounds[k + 1]
        return _scan_linear(ext[a : b + window], b - a, cums)

    if nseg == 1:
        return _merge([work(0)])
    with ThreadPoolExecutor(max_workers=nseg) as pool:
        return _merge(pool.map(work, range(nseg)))


def _scan_stream(stream: CycleStream, cums: list[int], window: int) -> list[int]:
    if len(stream) <= window:
        # driving terms would wrap the cycle more than once; it is tiny anyway
        small = GapCycle(stream.stage_prime, np.concatenate(list(stream.chunks())))
        return _scan_cycle(small, cums, window, 1)
    hists = []
    head = np.empty(0, dtype=np.int64)
    carry = np.empty(0, dtype=np.int64)
    for chunk in stream.chunks():
        chunk = chunk.astype(np.int64)
        if len(head) < window:
            head = np.concatenate((head, chunk[: window - len(head)]))
        buf = np.concatenate((carry, chunk))
        ready = len(buf) - window
        if ready > 0:
            hists.append(_scan_linear(buf, ready, cums))
            carry = buf[ready:]
        else:
            carry = buf
    hists.append(_scan_linear(np.concatenate((carry, head)), len(carry), cums))
    return _merge(hists)


def default_threads() -> int:
    return os.cpu_count() or 1


def scan_census(
    cycle: GapCycle | CycleStream, s, threads: int | None = None
) -> DrivingTermCensus:
    """Count driving terms of s by length at every start position of the cycle."""
    s = Constellation.of(s)
    if not s.all_even:
        return DrivingTermCensus(s, cycle.stage_prime, (0,))
    cums = list(accumulate(s.gaps))
    window = s.span // 2
    if isinstance(cycle, CycleStream):
        hist = _scan_stream(cycle, cums, window)
    else:
        hist = _scan_cycle(cycle, cums, window, threads or default_threads())
    counts = hist[s.j1 :]
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return DrivingTermCensus(s, cycle.stage_prime, tuple(counts) if counts else (0,))


def max_driving_length(s, p0: int | None = None) -> int:
    """Largest j with a nonzero count at the seed stage (j1 for an empty census).

    Accepts a census directly, or a constellation plus the seed prime to scan.
    """
    if isinstance(s, DrivingTermCensus):
        census = s
    else:
        census = scan_census(open_cycle(p0), s)
    for j in range(census.j_max, census.j_min - 1, -1):
        if census.counts[j - census.j_min]:
            return j
    return census.j_min


def p0_full_model(s) -> int:
    """Smallest prime p0 with |s| < 2 * next_prime(p0)."""
    s = Constellation.of(s)
    p = 2
    while s.span >= 2 * next_prime(p):
        p = next_prime(p)
    return p


def p0_asymptotic(s) -> int:
    """Largest prime dividing any contiguous interval sum of s, floored at 2."""
    s = Constellation.of(s)
    best = 2
    for i in range(s.j1):
        total = 0
        for g in s.gaps[i:]:
            total += g
            if total >= 2:
                best = max(best, kernel_of(total)[-1])
    return best
