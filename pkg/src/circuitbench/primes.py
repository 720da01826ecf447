"""Primality testing and prime sieves.

The Miller-Rabin test with the first twelve prime bases is deterministic for
all inputs below 3.3 * 10^24, which covers every modulus this package ever
manufactures (the largest are the protocol primes p >= n! * M^n at desk
scale).
"""

from .errors import BudgetError

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n):
    """Deterministic primality test for n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n >= _MR_DETERMINISTIC_LIMIT:
        raise ValueError(f"{n} exceeds the deterministic Miller-Rabin range")
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sieve(limit):
    """All primes <= limit, ascending."""
    if limit < 2:
        return []
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    i = 2
    while i * i <= limit:
        if flags[i]:
            flags[i * i :: i] = bytearray((limit - i * i) // i + 1)
        i += 1
    return [i for i in range(2, limit + 1) if flags[i]]


def prime_count(limit):
    """pi(limit): the number of primes <= limit."""
    return len(sieve(limit))


def next_prime_at_least(n, search_budget=10_000_000):
    """Smallest prime >= n."""
    c = max(2, n)
    for _ in range(search_budget):
        if is_prime(c):
            return c
        c += 1
    raise BudgetError(f"no prime found in [{n}, {c})", reached=c)
