"""Exact populations of gap constellations across the stages of Eratosthenes sieve."""

from sieve_lab.numeric import (
    kernel_of,
    next_prime,
    phi_i,
    primes_up_to,
    primorial,
)
from sieve_lab.cycle import (
    GapCycle,
    CycleStream,
    build_cycle_direct,
    build_cycle_recursive,
    cycle_size_estimate,
    stream_cycle,
)
from sieve_lab.census import (
    Constellation,
    DrivingTermCensus,
    max_driving_length,
    p0_asymptotic,
    p0_full_model,
    scan_census,
)
from sieve_lab.dynamics import (
    asymptotic_weight,
    normalize,
    pascal_pair,
    propagate,
    transition_matrix,
)
from sieve_lab.polignac import RepetitionSpec, gap_weight, is_feasible, repetition_weight
from sieve_lab.primecensus import count_among_primes

__version__ = "0.1.0"
