import math

import pytest

from sieve_lab.cycle import build_cycle_recursive


@pytest.fixture(scope="session")
def cycles():
    """G(p#) for every p <= 13, built once per session."""
    return {p: build_cycle_recursive(p) for p in (2, 3, 5, 7, 11, 13)}


def brute_census(gaps, s):
    """Walk the cycle from every start, adding gaps until each block sum is hit or passed.

    Returns {length: count}.  Deliberately naive; no prefix sums or search.
    """
    n = len(gaps)
    out = {}
    for start in range(n):
        pos = start
        used = 0
        ok = True
        for g in s:
            acc = 0
            while acc < g:
                acc += gaps[pos % n]
                pos += 1
                used += 1
            if acc != g:
                ok = False
                break
        if ok:
            out[used] = out.get(used, 0) + 1
    return out


def brute_coprime_count(n):
    return sum(1 for c in range(1, n + 1) if math.gcd(c, n) == 1)
