"""Prime sieve and p-adic valuations."""

from __future__ import annotations

import math


def primes_upto(x: int) -> list[int]:
    """Primes p <= x by the sieve of Eratosthenes."""
    n = int(x)
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytes(len(range(i * i, n + 1, i)))
    return [i for i, flag in enumerate(sieve) if flag]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % k for k in range(3, math.isqrt(n) + 1, 2))


def valuation(n: int, p: int) -> float | int:
    """Exponent of p in n; ``math.inf`` for n == 0."""
    if n == 0:
        return math.inf
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
