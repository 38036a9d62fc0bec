"""Exact population dynamics for driving terms across sieve stages.

From one stage to the next, the census vector n_s (indexed by driving-term
length j1..J) is multiplied by an upper bidiagonal matrix with diagonal
p-j1-1, ..., p-J-1 and superdiagonal 1, 2, ..., J-j1.  That matrix factors as
R * diag(p-j-1) * L with L the upper Pascal matrix and R its signed inverse,
neither depending on p.  Everything here is integer or Fraction arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import Sequence

from sieve_lab.census import Constellation, DrivingTermCensus, p0_asymptotic, scan_census
from sieve_lab.cycle import open_cycle
from sieve_lab.errors import PreconditionError
from sieve_lab.numeric import is_prime, next_prime, phi_i_primorial, prev_prime

Matrix = tuple[tuple[int, ...], ...]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def diag(values: Sequence[int]) -> Matrix:
    n = len(values)
    return tuple(tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class TransitionMatrix:
    stage_prime: int
    j_min: int
    j_max: int
    entries: Matrix

    @property
    def dim(self) -> int:
        return self.j_max - self.j_min + 1

    def __matmul__(self, vec):
        return matvec(self.entries, vec)


@dataclass(frozen=True)
class PascalPair:
    """L[i][j] = C(j, i) and R[i][j] = (-1)^(i+j) C(j, i) for i <= j (0-based)."""

    dim: int
    L: Matrix
    R: Matrix


@dataclass(frozen=True)
class NormalizedCensus:
    constellation: Constellation
    stage_prime: int
    weights: tuple[Fraction, ...]


def eigenvalue_ladder(p: int, j1: int, J: int) -> tuple[int, ...]:
    return tuple(p - j - 1 for j in range(j1, J + 1))


def transition_matrix(p: int, j1: int, J: int) -> TransitionMatrix:
    if j1 < 1 or J < j1:
        raise PreconditionError(f"need J >= j1 >= 1, got j1={j1}, J={J}", reason="invalid_range")
    n = J - j1 + 1
    rows = []
    for i in range(n):
        row = [0] * n
        row[i] = p - (j1 + i) - 1
        if i + 1 < n:
            # a length-(j+1) term has j+1-j1 interior closures, each leaving a length-j term
            row[i + 1] = i + 1
        rows.append(tuple(row))
    return TransitionMatrix(p, j1, J, tuple(rows))


def pascal_pair(n: int) -> PascalPair:
    if n < 1:
        raise PreconditionError(f"dimension must be >= 1, got {n}")
    L = tuple(tuple(comb(j, i) if i <= j else 0 for j in range(n)) for i in range(n))
    R = tuple(tuple((-1) ** (i + j) * comb(j, i) if i <= j else 0 for j in range(n)) for i in range(n))
    return PascalPair(n, L, R)


def check_full_model(s: Constellation, p: int) -> None:
    """Raise unless stepping from stage p keeps every closure in a separate copy."""
    nxt = next_prime(p)
    if s.span >= 2 * nxt:
        raise PreconditionError(
            f"condition |s| < 2p_1 violated at stage {p}: |s|={s.span} >= 2*{nxt}",
            reason="full_model_condition",
        )


def _stages_after(p: int, to_prime: int) -> list[int]:
    if not is_prime(to_prime) or to_prime <= p:
        raise PreconditionError(
            f"target stage must be a prime above {p}, got {to_prime}", reason="bad_target"
        )
    out = []
    q = next_prime(p)
    while q <= to_prime:
        out.append(q)
        q = next_prime(q)
    return out


def propagate_trace(census: DrivingTermCensus, to_prime: int) -> list[DrivingTermCensus]:
    """Census at every stage from the seed to to_prime inclusive, by stepwise products."""
    s = census.constellation
    check_full_model(s, census.stage_prime)
    out = [census]
    vec = census.counts
    for q in _stages_after(census.stage_prime, to_prime):
        vec = transition_matrix(q, census.j_min, census.j_max) @ vec
        out.append(DrivingTermCensus(s, q, vec))
    return out


def propagate_diagonal(census: DrivingTermCensus, to_prime: int) -> tuple[int, ...]:
    """R * prod(Lambda) * L * n0; needs no intermediate vectors."""
    check_full_model(census.constellation, census.stage_prime)
    stages = _stages_after(census.stage_prime, to_prime)
    pp = pascal_pair(len(census.counts))
    powers = [
        prod(q - j - 1 for q in stages) for j in range(census.j_min, census.j_max + 1)
    ]
    return matvec(pp.R, matvec(diag(powers), matvec(pp.L, census.counts)))


def propagate(census: DrivingTermCensus, to_prime: int) -> DrivingTermCensus:
    result = propagate_trace(census, to_prime)[-1]
    direct = propagate_diagonal(census, to_prime)
    if direct != result.counts:
        raise AssertionError(f"eigen path {direct} disagrees with stepwise {result.counts}")
    return result


def normalize(census: DrivingTermCensus) -> NormalizedCensus:
    """Divide each count by phi_{j1+1}(p#)."""
    phi = phi_i_primorial(census.stage_prime, census.j_min + 1)
    return NormalizedCensus(
        census.constellation, census.stage_prime, tuple(Fraction(c, phi) for c in census.counts)
    )


def required_seed(s) -> int:
    """Smallest stage at which the total-population law makes w-infinity exact.

    Besides the interval-sum prime, every prime q <= j1+1 must already be
    sieved: its growth factor q-j1-1 is not a factor of phi_{j1+1}.
    """
    s = Constellation.of(s)
    return max(p0_asymptotic(s), prev_prime(s.j1 + 1) or 2)


def asymptotic_weight(census: DrivingTermCensus) -> Fraction:
    """Limit of the total normalized population: sum(counts) / phi_{j1+1}(p#)."""
    need = required_seed(census.constellation)
    if census.stage_prime < need:
        raise PreconditionError(
            f"seed stage {census.stage_prime} too small for {census.constellation}; need p >= {need}",
            reason="seed_too_small",
        )
    return sum(normalize(census).weights, Fraction(0))


def winf(s, stage: int | None = None, threads: int | None = None) -> tuple[Fraction, DrivingTermCensus]:
    """Scan G(p#) at the seed stage and return (w-infinity, census used)."""
    s = Constellation.of(s)
    p = required_seed(s) if stage is None else stage
    census = scan_census(open_cycle(p), s, threads=threads)
    return asymptotic_weight(census), census


def subdominant_ratios(census: DrivingTermCensus, to_prime: int) -> tuple[Fraction, ...]:
    """Normalized eigenvalue products prod (q-j-1)/(q-j1-1) over stages up to to_prime."""
    stages = _stages_after(census.stage_prime, to_prime)
    lead = prod(q - census.j_min - 1 for q in stages)
    if lead == 0:
        raise PreconditionError("dominant eigenvalue vanishes on this stage range", reason="zero_eigenvalue")
    return tuple(
        Fraction(prod(q - j - 1 for q in stages), lead)
        for j in range(census.j_min, census.j_max + 1)
    )
