"""The cycle of gaps G(p#) among generators of Z mod p#.

A cycle is anchored at generator 1: the first gap steps from 1 to the next
generator and the last gap wraps from the largest generator to p# + 1.  For
p = 5 this gives 6,4,2,4,2,4,6,2.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterable, Iterator, NamedTuple

import numpy as np

from sieve_lab.errors import PreconditionError, ResourceCeilingError
from sieve_lab.numeric import is_prime, next_prime, prev_prime, primes_up_to, primorial

GAP_DTYPE = np.dtype("<u2")
BYTES_PER_GAP = GAP_DTYPE.itemsize
MATERIALIZE_CEILING = 19
STREAM_CEILING = 29
DIRECT_CEILING = 13
MEM_BUDGET_ENV = "SIEVE_LAB_MEM_BUDGET"

MAGIC = b"PGAP"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sBQQ")


class SizeEstimate(NamedTuple):
    gap_count: int
    bytes: int


def cycle_size_estimate(p: int) -> SizeEstimate:
    """Exact number of gaps in G(p#) and its storage at 2 bytes per gap."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime", reason="not_prime")
    count = math.prod(q - 1 for q in primes_up_to(p))
    return SizeEstimate(count, count * BYTES_PER_GAP)


def sci(n: int) -> str:
    """6-significant-digit scientific form, e.g. 3.06561E10."""
    mantissa, exp = f"{n:.5E}".split("E")
    return f"{mantissa}E{int(exp)}"


def default_memory_budget() -> int:
    env = os.environ.get(MEM_BUDGET_ENV)
    if env:
        return int(env)
    return cycle_size_estimate(MATERIALIZE_CEILING).bytes


def _ceiling_error(p: int, limit_desc: str) -> ResourceCeilingError:
    est = cycle_size_estimate(p)
    return ResourceCeilingError(
        f"G({p}#) has {est.gap_count} gaps (~{sci(est.gap_count)}, {est.bytes} bytes); {limit_desc}",
        gap_count=est.gap_count,
        nbytes=est.bytes,
    )


@dataclass(frozen=True, eq=False)
class GapCycle:
    stage_prime: int
    gaps: np.ndarray

    def __post_init__(self):
        self.gaps.setflags(write=False)

    def __len__(self) -> int:
        return len(self.gaps)

    def __iter__(self) -> Iterator[int]:
        return iter(self.gaps.tolist())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GapCycle):
            return NotImplemented
        return self.stage_prime == other.stage_prime and np.array_equal(self.gaps, other.gaps)

    @property
    def modulus(self) -> int:
        return primorial(self.stage_prime)

    def tolist(self) -> list[int]:
        return self.gaps.tolist()

    def total(self) -> int:
        return int(self.gaps.sum(dtype=np.int64))

    def generators(self) -> np.ndarray:
        """Generators in [1, p#), ascending."""
        return 1 + np.concatenate(([0], np.cumsum(self.gaps[:-1], dtype=np.int64)))

    def to_text(self) -> str:
        return ",".join(map(str, self.tolist()))


def _next_stage(gaps: np.ndarray, nxt: int) -> np.ndarray:
    """One step of the recursion: nxt copies of the cycle, then fuse at nxt * (old generators)."""
    walk = np.concatenate(([1], 1 + np.cumsum(np.tile(gaps.astype(np.int64), nxt))))
    doomed = nxt * walk[: len(gaps)]
    # both arrays ascending; each doomed value is a candidate in the walk
    hit = np.searchsorted(walk, doomed)
    keep = np.ones(len(walk), dtype=bool)
    keep[hit] = False
    return np.diff(walk[keep]).astype(GAP_DTYPE)


def build_cycle_recursive(p: int, memory_budget: int | None = None) -> GapCycle:
    """Build G(p#) from G(2#) = (2) by copying and closing gaps stage by stage."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime", reason="not_prime")
    budget = default_memory_budget() if memory_budget is None else memory_budget
    if cycle_size_estimate(p).bytes > budget:
        raise _ceiling_error(p, f"exceeds memory budget of {budget} bytes")
    gaps = np.array([2], dtype=GAP_DTYPE)
    q = 2
    while q < p:
        nxt = next_prime(q)
        gaps = _next_stage(gaps, nxt)
        q = nxt
    return GapCycle(p, gaps)


def build_cycle_direct(p: int) -> GapCycle:
    """Oracle: list residues coprime to p# and difference them."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime", reason="not_prime")
    if p > DIRECT_CEILING:
        raise PreconditionError(
            f"direct construction limited to p <= {DIRECT_CEILING}", reason="oracle_scale"
        )
    modulus = primorial(p)
    values = [c for c in range(1, modulus + 2) if math.gcd(c, modulus) == 1]
    return GapCycle(p, np.diff(np.array(values, dtype=np.int64)).astype(GAP_DTYPE))


def _generator_chunks(p: int, base: GapCycle) -> Iterator[np.ndarray]:
    """Ascending generators of Z mod p# in chunks, built lazily above the base stage."""
    if p == base.stage_prime:
        yield base.generators()
        return
    prev = prev_prime(p - 1)
    prev_mod = primorial(prev)
    for k in range(p):
        for chunk in _generator_chunks(prev, base):
            vals = chunk + k * prev_mod
            # equivalent to fusing at p * (generators of the previous stage)
            yield vals[vals % p != 0]


class CycleStream:
    """Single-pass producer of G(p#) in canonical order without holding the cycle.

    Iterating gives ints; ``chunks()`` gives uint16 arrays and is the fast path.
    Each call to ``chunks()`` restarts the pass from the beginning.
    """

    def __init__(self, stage_prime: int, base: int = MATERIALIZE_CEILING):
        self.stage_prime = stage_prime
        self._base_prime = min(base, stage_prime)
        self._base: GapCycle | None = None

    def __len__(self) -> int:
        return cycle_size_estimate(self.stage_prime).gap_count

    @property
    def modulus(self) -> int:
        return primorial(self.stage_prime)

    def chunks(self) -> Iterator[np.ndarray]:
        last = None
        if self._base is None:
            self._base = build_cycle_recursive(self._base_prime, memory_budget=1 << 62)
        for vals in _generator_chunks(self.stage_prime, self._base):
            if len(vals) == 0:
                continue
            if last is None:
                gaps = np.diff(vals)
            else:
                gaps = np.diff(vals, prepend=last)
            last = int(vals[-1])
            if len(gaps):
                yield gaps.astype(GAP_DTYPE)
        yield np.array([self.modulus + 1 - last], dtype=GAP_DTYPE)

    def __iter__(self) -> Iterator[int]:
        for chunk in self.chunks():
            yield from chunk.tolist()

    def count(self) -> int:
        return sum(len(c) for c in self.chunks())

    def stats(self) -> dict:
        n = total = 0
        biggest = 0
        for c in self.chunks():
            n += len(c)
            total += int(c.sum(dtype=np.int64))
            biggest = max(biggest, int(c.max()))
        return {"prime": self.stage_prime, "length": n, "sum": total, "max_gap": biggest}


def stream_cycle(p: int, ceiling: int = STREAM_CEILING) -> CycleStream:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime", reason="not_prime")
    if p > ceiling:
        raise _ceiling_error(p, f"streaming ceiling is p <= {ceiling}")
    return CycleStream(p)


def open_cycle(p: int, memory_budget: int | None = None) -> GapCycle | CycleStream:
    """Materialize G(p#) when it fits the budget, otherwise stream it."""
    budget = default_memory_budget() if memory_budget is None else memory_budget
    if cycle_size_estimate(p).bytes <= budget:
        return build_cycle_recursive(p, budget)
    return stream_cycle(p)


def cycle_stats(cycle: GapCycle) -> dict:
    return {
        "prime": cycle.stage_prime,
        "length": len(cycle),
        "sum": cycle.total(),
        "max_gap": int(cycle.gaps.max()),
    }


def write_binary(fh: BinaryIO, stage_prime: int, chunks: Iterable[np.ndarray], count: int) -> None:
    fh.write(_HEADER.pack(MAGIC, FORMAT_VERSION, stage_prime, count))
    written = 0
    for chunk in chunks:
        fh.write(np.asarray(chunk, dtype=GAP_DTYPE).tobytes())
        written += len(chunk)
    if written != count:
        raise ValueError(f"header promised {count} gaps, wrote {written}")


def read_binary(fh: BinaryIO) -> GapCycle:
    magic, version, prime, count = _HEADER.unpack(fh.read(_HEADER.size))
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported cycle file version {version}")
    gaps = np.frombuffer(fh.read(count * BYTES_PER_GAP), dtype=GAP_DTYPE).copy()
    if len(gaps) != count:
        raise ValueError("truncated cycle file")
    return GapCycle(prime, gaps)
