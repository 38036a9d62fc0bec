"""Repetitions g,g,...,g (consecutive candidate primes in arithmetic progression).

The weight of a feasible repetition depends only on the distinct primes Q of g
and the length j1: phi_1(Q) / phi_{j1+1}(Q).  The weight is computed from that
closed form.  The construction behind it (starting from the non-primorial
cycle G(Q) and sieving the missing primes rho_i to reach G(q_m#)) is never run
here.  The census pipeline checks it instead, see tests/test_polignac.py.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sieve_lab.errors import PreconditionError
from sieve_lab.numeric import kernel_of, next_prime, phi_i, primorial


@dataclass(frozen=True)
class RepetitionSpec:
    gap: int
    length: int

    def __post_init__(self):
        if self.gap < 2 or self.gap % 2:
            raise PreconditionError(f"gap must be a positive even integer, got {self.gap}", reason="odd_gap")
        if self.length < 1:
            raise PreconditionError(f"length must be >= 1, got {self.length}", reason="bad_length")

    @property
    def kernel(self) -> tuple[int, ...]:
        return kernel_of(self.gap)

    @property
    def gaps(self) -> tuple[int, ...]:
        return (self.gap,) * self.length


def largest_primorial_divisor(g: int) -> int:
    """Largest prime p with p# | g (g even, so at least 2)."""
    p = 2
    while g % primorial(next_prime(p)) == 0:
        p = next_prime(p)
    return p


def is_feasible(spec: RepetitionSpec) -> bool:
    return spec.length < next_prime(largest_primorial_divisor(spec.gap)) - 1


def repetition_weight(spec: RepetitionSpec) -> Fraction:
    if not is_feasible(spec):
        raise PreconditionError(
            f"repetition of {spec.gap} with length {spec.length} is not feasible",
            reason="infeasible_repetition",
        )
    q = spec.kernel
    return Fraction(phi_i(q, 1), phi_i(q, spec.length + 1))


def gap_weight(g: int) -> Fraction:
    """prod over odd primes q | g of (q-1)/(q-2)."""
    if g < 2 or g % 2:
        raise PreconditionError(f"gap must be a positive even integer, got {g}", reason="odd_gap")
    w = Fraction(1)
    for q in kernel_of(g):
        if q > 2:
            w *= Fraction(q - 1, q - 2)
    return w


def report(spec: RepetitionSpec) -> dict:
    feasible = is_feasible(spec)
    return {
        "gap": spec.gap,
        "length": spec.length,
        "feasible": feasible,
        "weight": str(repetition_weight(spec)) if feasible else None,
        "kernel": list(spec.kernel),
    }
