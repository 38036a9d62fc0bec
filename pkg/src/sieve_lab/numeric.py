"""Prime iteration, primorials and the generalized totients phi_i.

Integers are plain Python ints and ratios are ``fractions.Fraction``; both
are exact and unbounded, which is all the dynamics need.
"""

from __future__ import annotations

import math
from functools import lru_cache

from sieve_lab.errors import PreconditionError


def primes_up_to(limit: int) -> list[int]:
    """Ascending primes <= limit (simple sieve)."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return [n for n in range(limit + 1) if flags[n]]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime", reason="not_prime")


def next_prime(p: int) -> int:
    """Smallest prime strictly greater than p."""
    n = p + 1
    while not is_prime(n):
        n += 1
    return n


def prev_prime(n: int) -> int | None:
    """Largest prime <= n, or None below 2."""
    while n >= 2:
        if is_prime(n):
            return n
        n -= 1
    return None


def primes_through(p: int) -> list[int]:
    """Primes 2..p inclusive, i.e. the kernel of p#."""
    _require_prime(p)
    return primes_up_to(p)


@lru_cache(maxsize=None)
def primorial(p: int) -> int:
    _require_prime(p)
    return math.prod(primes_up_to(p))


def kernel_of(n: int) -> tuple[int, ...]:
    """Ascending distinct prime factors of n (trial division; inputs are small gaps)."""
    if n < 2:
        raise PreconditionError(f"kernel_of needs n >= 2, got {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def phi_i(kernel, i: int) -> int:
    """Product of (q - i) over primes q > i in the squarefree kernel."""
    if i < 1:
        raise PreconditionError(f"phi_i needs i >= 1, got {i}")
    primes = tuple(kernel)
    if any(b <= a for a, b in zip(primes, primes[1:])):
        raise PreconditionError("kernel must be strictly ascending distinct primes")
    return math.prod(q - i for q in primes if q > i)


def phi_i_primorial(p: int, i: int) -> int:
    """phi_i(p#)."""
    return phi_i(primes_through(p), i)
