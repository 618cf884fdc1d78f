"""Exact integer arithmetic: Kronecker symbols, sieves, factorization, class numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class IncompleteFactorization(Exception):
    """Raised when a cofactor resists the trial-division + rho pipeline."""

    def __init__(self, n, cofactor, partial):
        super().__init__(f"could not fully factor {n}; unfactored cofactor {cofactor}")
        self.n = n
        self.cofactor = cofactor
        self.partial = partial


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined (treat separately)")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), fully extended to all integers.

    Agrees with the Legendre symbol for odd prime n and is completely
    multiplicative in both arguments.  (a|0) is 1 for a = +-1 and 0 otherwise.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        e = valuation(n, 2)
        n >>= e
        if e % 2 == 1 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def primes_up_to(bound: int) -> list[int]:
    """Ascending list of primes <= bound (simple sieve of Eratosthenes)."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, flag in enumerate(sieve) if flag]


@dataclass(frozen=True)
class PrimeSieve:
    """Primes up to a fixed bound, built once and shared read-only."""

    bound: int
    primes: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        if self.primes is None:
            object.__setattr__(self, "primes", tuple(primes_up_to(self.bound)))

    def __iter__(self):
        return iter(self.primes)

    def __contains__(self, p):
        return p in set(self.primes)


# Deterministic Miller-Rabin bases, valid for all n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = valuation(d, 2)
    d >>= r
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int | None:
    """One Brent-style rho pass over a few polynomial offsets; None on failure."""
    if n % 2 == 0:
        return 2
    for c in (1, 3, 5, 7, 11):
        x = y = 2
        d = 1
        f = lambda v: (v * v + c) % n
        count = 0
        while d == 1 and count < 1_000_000:
            x = f(x)
            y = f(f(y))
            d = math.gcd(abs(x - y), n)
            count += 1
        if 1 < d < n:
            return d
    return None


@dataclass(frozen=True)
class Factorization:
    """Signed factorization: sign * prod p^e, primes distinct and ascending."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def radical(self) -> int:
        out = 1
        for p, _ in self.factors:
            out *= p
        return out

    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int, smooth_bound: int = 10**6) -> Factorization:
    """Factor n by trial division up to smooth_bound, then Pollard rho.

    Raises IncompleteFactorization (carrying the cofactor) if a composite
    cofactor survives both stages.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = 1 if n > 0 else -1
    m = abs(n)
    factors: dict[int, int] = {}

    def take(p):
        nonlocal m
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            factors[p] = factors.get(p, 0) + e

    take(2)
    take(3)
    p = 5
    while p * p <= m and p <= smooth_bound:
        take(p)
        take(p + 2)
        p += 6
    if m > 1 and m <= smooth_bound * smooth_bound:
        # cofactor below the trial-division square is necessarily prime
        factors[m] = factors.get(m, 0) + 1
        m = 1
    stack = [m] if m > 1 else []
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_prime(c):
            take(c)
            continue
        d = _pollard_rho(c)
        if d is None:
            partial = Factorization(sign, tuple(sorted(factors.items())))
            raise IncompleteFactorization(n, c, partial)
        stack.append(d)
        stack.append(c // d)
    return Factorization(sign, tuple(sorted(factors.items())))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(abs(n)).factors)


def class_number(D: int) -> int:
    """Class number of discriminant D < 0: count of reduced primitive forms.

    Enumerates ax^2+bxy+cy^2 with b^2-4ac = D, |b| <= a <= c, and b >= 0
    whenever |b| = a or a = c.  a is bounded by sqrt(|D|/3).
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    count = 0
    a_max = math.isqrt(abs(D) // 3)
    for a in range(1, a_max + 1):
        for b in range(-a, a + 1):
            num = b * b - D
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (a == -b or a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            count += 1
    return count


def class_number_one_discriminants(floor: int = -200) -> list[int]:
    """All discriminants D with floor <= D < 0 and class number 1."""
    out = []
    for D in range(floor, 0):
        if D % 4 in (0, 1):
            try:
                if class_number(D) == 1:
                    out.append(D)
            except ValueError:
                pass
    return out
