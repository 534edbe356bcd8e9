"""Prime pair and tuple searches driving the degree bookkeeping.

An even number n >= 4 "splits doubly" when it is a sum of two primes in two
different ways (distinct unordered pairs) with the largest prime below n
avoided by both. The construction for genus g needs such splittings of
2g + 2 arranged into an ordered tuple (q1, q2, q4, q5, q3) with

    q4 < q1 <= q2 < q5 < q3 < 2g + 2,
    q1 + q2 = q4 + q5 = 2g + 2,

and q3 a further prime strictly between q5 and 2g + 2.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import is_prime, primes_up_to


@dataclass(frozen=True)
class GoldbachTuple:
    """Ordered prime tuple (q1, q2, q4, q5, q3) for a fixed genus."""

    g: int
    q1: int
    q2: int
    q4: int
    q5: int
    q3: int

    def __post_init__(self) -> None:
        n = 2 * self.g + 2
        for q in (self.q1, self.q2, self.q3, self.q4, self.q5):
            if not is_prime(q):
                raise ValueError(f"{q} is not prime")
        if self.q1 + self.q2 != n or self.q4 + self.q5 != n:
            raise ValueError("pair sums must equal 2g + 2")
        if not (self.q4 < self.q1 <= self.q2 < self.q5 < self.q3 < n):
            raise ValueError("tuple violates the ordering q4 < q1 <= q2 < q5 < q3 < 2g+2")

    @property
    def qs(self) -> tuple[int, int, int, int, int]:
        return (self.q1, self.q2, self.q4, self.q5, self.q3)


def goldbach_pairs(n: int) -> list[tuple[int, int]]:
    """All unordered prime pairs (a, b), a <= b, with a + b = n (n even >= 4)."""
    if n < 4 or n % 2:
        raise ValueError("n must be an even integer >= 4")
    table = set(primes_up_to(n))
    return [(a, n - a) for a in sorted(table) if a <= n - a and n - a in table]


def conjecture_holds(n: int) -> bool:
    """True if even n has two distinct prime pairs avoiding the largest prime < n."""
    if n < 4 or n % 2:
        raise ValueError("n must be an even integer >= 4")
    primes = primes_up_to(n - 1)
    if not primes:
        return False
    largest = primes[-1]
    count = 0
    table = set(primes)
    for a in primes:
        if a > n - a:
            break
        b = n - a
        if b in table and a != largest and b != largest:
            count += 1
            if count == 2:
                return True
    return False


def verify_range(bound: int) -> list[int]:
    """Even n in [4, bound] failing the double-splitting condition.

    Single sieve up to bound; the largest prime below each n is tracked
    incrementally.
    """
    if bound < 4:
        raise ValueError("bound must be >= 4")
    primes = primes_up_to(bound)
    table = bytearray(bound + 1)
    for p in primes:
        table[p] = 1
    exceptions = []
    idx = 0  # index of first prime >= n
    for n in range(4, bound + 1, 2):
        while idx < len(primes) and primes[idx] < n:
            idx += 1
        largest = primes[idx - 1] if idx else 0
        count = 0
        for a in primes:
            if a > n - a:
                break
            b = n - a
            if table[b] and a != largest and b != largest:
                count += 1
                if count == 2:
                    break
        if count < 2:
            exceptions.append(n)
    return exceptions


def two_g_eps_tuples(g: int) -> list[GoldbachTuple]:
    """All valid tuples for genus g, ascending by (q1, q2, q4, q5, q3)."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    n = 2 * g + 2
    pairs = goldbach_pairs(n)
    primes_between = [q for q in primes_up_to(n - 1) if q > 2]
    out = []
    for q1, q2 in pairs:
        for q4, q5 in pairs:
            if not (q4 < q1 <= q2 < q5):
                continue
            for q3 in primes_between:
                if q5 < q3 < n:
                    out.append(GoldbachTuple(g=g, q1=q1, q2=q2, q4=q4, q5=q5, q3=q3))
    out.sort(key=lambda t: t.qs)
    return out
