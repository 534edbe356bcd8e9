"""Integer and polynomial arithmetic primitives.

Polynomials are lists of Python ints in ascending order of degree
([a0, a1, ..., an] for a0 + a1*x + ... + an*x^n), normalized so that the
last entry is nonzero; the zero polynomial is the empty list. Helpers that
take a modulus keep coefficients reduced into [0, m).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

# ---------------------------------------------------------------------------
# primes

_MR_WITNESSES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def primes_up_to(bound: int) -> list[int]:
    """All primes <= bound, by a segmented sieve of Eratosthenes."""
    if bound < 2:
        return []
    root = math.isqrt(bound)
    base = bytearray([1]) * (root + 1)
    base[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(root) + 1):
        if base[i]:
            base[i * i :: i] = bytearray(len(base[i * i :: i]))
    small = [i for i in range(2, root + 1) if base[i]]
    primes = list(small)
    seg_size = 1 << 16
    low = root + 1
    while low <= bound:
        high = min(low + seg_size - 1, bound)
        seg = bytearray([1]) * (high - low + 1)
        for p in small:
            start = max(p * p, ((low + p - 1) // p) * p)
            if start > high:
                continue
            seg[start - low :: p] = bytearray(len(seg[start - low :: p]))
        primes.extend(i + low for i, flag in enumerate(seg) if flag)
        low = high + 1
    return primes


def _mr_witness(n: int, a: int) -> bool:
    """True if a witnesses the compositeness of odd n > 2."""
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


# the first 64 primes, used as a fixed witness schedule above 2^64
_MR_WITNESSES_BIG = tuple(primes_up_to(311))


def is_prime(n: int) -> bool:
    """Primality test.

    Deterministic below 2^64 (Miller-Rabin with the witness set 2..37);
    above that it is a strong probable-prime test to the first 64 prime
    bases, which no known composite passes.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    witnesses = _MR_WITNESSES_64 if n < 1 << 64 else _MR_WITNESSES_BIG
    return not any(_mr_witness(n, a) for a in witnesses)


_RHO_TRIAL_PRIMES = primes_up_to(1000)


def _brent_rho(n: int, budget: int | float, rng: random.Random) -> tuple[int, int]:
    """One nontrivial factor of odd composite n, or 1 on budget exhaustion.

    Returns (factor, iterations_used). Brent's cycle variant with batched
    gcds; the budget caps total iterations across restarts.
    """
    used = 0
    while used < budget:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g, r, q = 1, 1, 1
        x = ys = y
        while g == 1 and used < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1 and used < budget:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                used += min(m, r - k)
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g, used
        # g == n even after backtracking, or budget ran out: retry with new c
    return 1, used


def pollard_factor(n: int, budget: int | float = 10**6, seed: int = 0) -> tuple[dict[int, int], int]:
    """Partially factor n >= 1 within an iteration budget.

    Returns (factors, cofactor) where factors maps primes to exponents and
    cofactor is the unfactored remainder (1 when the factorization is
    complete). Small primes are removed by trial division first; the budget
    only limits the rho iterations spent on what is left.
    """
    if n < 1:
        raise ValueError("n must be positive")
    factors: dict[int, int] = {}
    for p in _RHO_TRIAL_PRIMES:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    rng = random.Random(seed)
    remaining = budget
    stack = [n] if n > 1 else []
    cofactor = 1
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        root = math.isqrt(m)
        if root * root == m:
            stack.extend((root, root))
            continue
        d, used = _brent_rho(m, remaining, rng)
        remaining -= used
        if d == 1:
            cofactor *= m
        else:
            stack.extend((d, m // d))
    return factors, cofactor


def factorize(n: int, budget: int | float = 10**7, seed: int = 0) -> dict[int, int]:
    """Complete factorization of n >= 1; raises if the budget is too small."""
    factors, cofactor = pollard_factor(n, budget, seed)
    if cofactor != 1:
        raise ValueError(f"could not fully factor {n}: cofactor {cofactor} remains")
    return factors


def is_primitive_root(a: int, q: int) -> bool:
    """True if a generates the multiplicative group mod the prime q.

    gcd(a, q) = 1 is expected; a ≡ 0 mod q returns False (not a unit, so
    not a generator) rather than raising.
    """
    if not is_prime(q):
        raise ValueError("q not prime")
    a %= q
    if q == 2:
        return a == 1
    if a == 0:
        return False
    for p in factorize(q - 1):
        if pow(a, (q - 1) // p, q) == 1:
            return False
    return True


# ---------------------------------------------------------------------------
# CRT

def crt_integers(residues: list[tuple[int, int]]) -> int:
    """Solve x ≡ r_i (mod m_i) for all i; returns x in [0, lcm of moduli).

    Moduli need not be coprime; raises ValueError("inconsistent congruence")
    when no solution exists.
    """
    if not residues:
        raise ValueError("no congruences given")
    x, m = residues[0]
    if m <= 0:
        raise ValueError("moduli must be positive")
    x %= m
    for r, n in residues[1:]:
        if n <= 0:
            raise ValueError("moduli must be positive")
        g = math.gcd(m, n)
        if (r - x) % g != 0:
            raise ValueError("inconsistent congruence")
        lcm = m // g * n
        # x + m*k ≡ r (mod n)  =>  k ≡ (r-x)/g * inv(m/g) (mod n/g)
        k = (r - x) // g * pow(m // g, -1, n // g) % (n // g)
        x = (x + m * k) % lcm
        m = lcm
    return x


# ---------------------------------------------------------------------------
# polynomials over Z and Z/m

def poly_trim(c: list[int]) -> list[int]:
    """Strip trailing zero coefficients (canonical form)."""
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def poly_reduce(c: list[int], m: int) -> list[int]:
    return poly_trim([a % m for a in c])


def poly_deg(c: list[int]) -> int:
    """Degree, with the zero polynomial at -1."""
    return len(c) - 1


def poly_add(a: list[int], b: list[int], m: int | None = None) -> list[int]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    if m is not None:
        out = [c % m for c in out]
    return poly_trim(out)


def poly_sub(a: list[int], b: list[int], m: int | None = None) -> list[int]:
    return poly_add(a, [-c for c in b], m)


def poly_mul(a: list[int], b: list[int], m: int | None = None) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    if m is not None:
        out = [c % m for c in out]
    return poly_trim(out)


def poly_scale(a: list[int], s: int, m: int | None = None) -> list[int]:
    out = [s * c for c in a]
    if m is not None:
        out = [c % m for c in out]
    return poly_trim(out)


def poly_eval(a: list[int], x: int, m: int | None = None) -> int:
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
        if m is not None:
            acc %= m
    return acc


def poly_derivative(a: list[int], m: int | None = None) -> list[int]:
    out = [i * a[i] for i in range(1, len(a))]
    if m is not None:
        out = [c % m for c in out]
    return poly_trim(out)


def poly_compose_shift(a: list[int], s: int, m: int | None = None) -> list[int]:
    """a(x + s), via Horner on the shifted variable."""
    out: list[int] = []
    for c in reversed(a):
        out = poly_add(poly_mul(out, [s, 1], m), [c], m)
    return out


# ---------------------------------------------------------------------------
# polynomials over F_p

def fp_monic(a: list[int], p: int) -> list[int]:
    a = poly_reduce(a, p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def fp_divmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    """Quotient and remainder of a by b over F_p (b nonzero)."""
    a = poly_reduce(a, p)
    b = poly_reduce(b, p)
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = a[:]
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        coef = r[-1] * inv % p
        shift = len(r) - 1 - db
        q[shift] = coef
        for i, bc in enumerate(b):
            r[shift + i] = (r[shift + i] - coef * bc) % p
        r = poly_trim(r)
    return poly_trim(q), r


def fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    """Monic gcd over F_p."""
    a = poly_reduce(a, p)
    b = poly_reduce(b, p)
    while b:
        a, b = b, fp_divmod(a, b, p)[1]
    return fp_monic(a, p)


def fp_extgcd(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int], list[int]]:
    """(g, s, t) with s*a + t*b = g = monic gcd(a, b) over F_p."""
    r0, r1 = poly_reduce(a, p), poly_reduce(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = fp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, p), p)
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1, p), p)
    if not r0:
        return [], s0, t0
    lead_inv = pow(r0[-1], -1, p)
    return (
        poly_scale(r0, lead_inv, p),
        poly_scale(s0, lead_inv, p),
        poly_scale(t0, lead_inv, p),
    )


def fp_pow_mod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    """base^e mod (mod) over F_p, by square and multiply."""
    result = [1]
    base = fp_divmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = fp_divmod(poly_mul(result, base, p), mod, p)[1]
        base = fp_divmod(poly_mul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def _fp_pth_root(a: list[int], p: int) -> list[int]:
    """p-th root of a polynomial of the form g(x^p) over F_p."""
    # coefficients are in F_p, where c^(1/p) = c
    return poly_trim([a[i] for i in range(0, len(a), p)])


def fp_squarefree_decomposition(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Squarefree decomposition of monic f over F_p.

    Returns [(g_e, e), ...] with each g_e monic squarefree, pairwise coprime,
    and f = prod g_e^e; multiplicities ascending.
    """
    out: dict[int, list[int]] = {}

    def accumulate(g: list[int], mult: int) -> None:
        if poly_deg(g) < 1:
            return
        if mult in out:
            out[mult] = poly_mul(out[mult], g, p)
        else:
            out[mult] = g

    def walk(f: list[int], outer: int) -> None:
        if poly_deg(f) < 1:
            return
        fd = poly_derivative(f, p)
        if not fd:
            walk(_fp_pth_root(f, p), outer * p)
            return
        c = fp_gcd(f, fd, p)
        w = fp_divmod(f, c, p)[0]
        i = 1
        while poly_deg(w) > 0:
            y = fp_gcd(w, c, p)
            accumulate(fp_divmod(w, y, p)[0], i * outer)
            w = y
            c = fp_divmod(c, y, p)[0]
            i += 1
        if poly_deg(c) > 0:
            walk(_fp_pth_root(c, p), outer * p)

    walk(fp_monic(f, p), 1)
    return [(g, e) for e, g in sorted(out.items())]


@dataclass(frozen=True)
class Factorization:
    """Factorization over F_p: unit * prod(poly^mult)."""

    p: int
    unit: int
    factors: tuple[tuple[tuple[int, ...], int], ...]

    def multiplicity_profile(self) -> list[int]:
        prof: list[int] = []
        for poly, e in self.factors:
            prof.extend([e] * (len(poly) - 1))
        return sorted(prof)


def _fp_ddf(f: list[int], p: int) -> list[tuple[list[int], int]]:
    """Distinct-degree split of monic squarefree f: [(product, degree), ...]."""
    out = []
    h = [0, 1]  # x
    x = [0, 1]
    d = 0
    while poly_deg(f) > 0:
        d += 1
        if 2 * d > poly_deg(f):
            out.append((f, poly_deg(f)))
            break
        h = fp_pow_mod(h, p, f, p)
        g = fp_gcd(poly_sub(h, x, p), f, p)
        if poly_deg(g) > 0:
            out.append((g, d))
            f = fp_divmod(f, g, p)[0]
            h = fp_divmod(h, f, p)[1]
    return out


def _fp_edf(f: list[int], d: int, p: int, rng: random.Random) -> list[list[int]]:
    """Equal-degree split of monic squarefree f (all factors of degree d)."""
    n = poly_deg(f)
    if n == d:
        return [f]
    while True:
        a = [rng.randrange(p) for _ in range(n - 1)] + [1]
        if p == 2:
            # trace map: a + a^2 + ... + a^(2^(d-1))
            t = a
            acc = a
            for _ in range(d - 1):
                t = fp_pow_mod(t, 2, f, p)
                acc = poly_add(acc, t, p)
            g = fp_gcd(acc, f, p)
        else:
            b = fp_pow_mod(a, (p**d - 1) // 2, f, p)
            g = fp_gcd(poly_sub(b, [1], p), f, p)
        if 0 < poly_deg(g) < n:
            return _fp_edf(g, d, p, rng) + _fp_edf(fp_divmod(f, g, p)[0], d, p, rng)


def fp_factor(f: list[int], p: int, seed: int = 0) -> Factorization:
    """Full factorization of f over F_p (Cantor-Zassenhaus).

    Deterministic for a fixed seed; factors are sorted by degree then by
    coefficient tuple.
    """
    if not is_prime(p):
        raise ValueError("modulus not prime")
    fbar = poly_reduce(f, p)
    if not fbar:
        raise ValueError("zero polynomial mod p")
    unit = fbar[-1]
    rng = random.Random(seed)
    factors: list[tuple[tuple[int, ...], int]] = []
    for sqfree, mult in fp_squarefree_decomposition(fbar, p):
        for block, d in _fp_ddf(sqfree, p):
            for irr in _fp_edf(block, d, p, rng):
                factors.append((tuple(irr), mult))
    factors.sort(key=lambda fe: (len(fe[0]), fe[0]))
    return Factorization(p=p, unit=unit, factors=tuple(factors))


def fp_is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test: f monic of degree n is irreducible over F_p."""
    f = fp_monic(f, p)
    n = poly_deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    h = fp_pow_mod([0, 1], p**n, f, p)
    if poly_trim(poly_sub(h, [0, 1], p)):
        return False
    for q in factorize(n):
        h = fp_pow_mod([0, 1], p ** (n // q), f, p)
        if poly_deg(fp_gcd(poly_sub(h, [0, 1], p), f, p)) != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# Hensel lifting

def hensel_lift_factorization(
    f: list[int], factors: list[list[int]], p: int, m: int
) -> list[list[int]]:
    """Lift a coprime monic factorization of f mod p to mod p^m.

    f must be monic with f ≡ prod(factors) mod p, the factors monic and
    pairwise coprime mod p. Returns the unique lifts, coefficients in
    [0, p^m).
    """
    if not f or f[-1] % p != 1:
        raise ValueError("f must be monic")
    if m < 1:
        raise ValueError("target exponent must be >= 1")
    red = [fp_monic(g, p) for g in factors]
    if any(poly_deg(g) < 1 for g in red):
        raise ValueError("factors must be nonconstant")
    for i in range(len(red)):
        for j in range(i + 1, len(red)):
            if poly_deg(fp_gcd(red[i], red[j], p)) != 0:
                raise ValueError("non-coprime factorization")
    prod = [1]
    for g in red:
        prod = poly_mul(prod, g, p)
    if poly_trim(poly_sub(poly_reduce(f, p), prod, p)):
        raise ValueError("factors do not multiply to f mod p")

    pm = p**m

    def lift_pair(target: list[int], g: list[int], h: list[int]) -> tuple[list[int], list[int]]:
        # target ≡ g*h mod p, all monic; returns lifts mod p^m
        gbar, hbar = poly_reduce(g, p), poly_reduce(h, p)
        one, s, t = fp_extgcd(gbar, hbar, p)
        if one != [1]:
            raise ValueError("non-coprime factorization")
        G = [c % pm for c in gbar]
        H = [c % pm for c in hbar]
        modulus = p
        while modulus < pm:
            diff = poly_sub(poly_reduce(target, pm), poly_mul(G, H, pm))
            e = poly_reduce([c // modulus for c in diff], p)
            # split the correction: G += modulus*w, H += modulus*r with
            # gbar*r + hbar*w = e, deg r < deg hbar, deg w < deg gbar
            q, r = fp_divmod(poly_mul(s, e, p), hbar, p)
            w = poly_add(poly_mul(t, e, p), poly_mul(q, gbar, p), p)
            G = poly_add(G, poly_scale(w, modulus), pm)
            H = poly_add(H, poly_scale(r, modulus), pm)
            modulus *= p
        return G, H

    def lift_list(target: list[int], parts: list[list[int]]) -> list[list[int]]:
        if len(parts) == 1:
            return [poly_reduce(target, pm)]
        rest = [1]
        for g in parts[1:]:
            rest = poly_mul(rest, g, p)
        G, H = lift_pair(target, parts[0], rest)
        return [G] + lift_list(H, parts[1:])

    return lift_list(poly_reduce(f, pm), red)


# ---------------------------------------------------------------------------
# resultants

def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, over Z."""
    r = a[:]
    db = poly_deg(b)
    lb = b[-1]
    steps = poly_deg(a) - db + 1
    done = 0
    while r and poly_deg(r) >= db:
        shift = poly_deg(r) - db
        lead = r[-1]
        r = [lb * c for c in r]
        for i, bc in enumerate(b):
            r[shift + i] -= lead * bc
        r = poly_trim(r)
        done += 1
    if done < steps:
        r = [lb ** (steps - done) * c for c in r]
    return r


def _exact_div(a: list[int], d: int) -> list[int]:
    out = []
    for c in a:
        q, rem = divmod(c, d)
        if rem:
            raise ArithmeticError("inexact division in subresultant sequence")
        out.append(q)
    return out


def resultant(a: list[int], b: list[int]) -> int:
    """Resultant of two nonzero integer polynomials.

    Signed subresultant PRS (Brown-Traub recurrence), exact over Z.
    Convention: Res(a, b) = lc(a)^deg(b) * prod b(alpha_i) over the roots of
    a, so Res(a, b) = (-1)^(deg a * deg b) Res(b, a) and Res(a, c) = c^deg(a)
    for constant c.
    """
    a, b = poly_trim(list(a)), poly_trim(list(b))
    if not a or not b:
        raise ValueError("resultant of zero polynomial")
    sign = 1
    if poly_deg(a) < poly_deg(b):
        if poly_deg(a) % 2 == 1 and poly_deg(b) % 2 == 1:
            sign = -1
        a, b = b, a
    f, g = a, b
    m = poly_deg(g)
    d = poly_deg(f) - m
    h = _pseudo_rem(f, g)
    if d % 2 == 0:  # first divisor is (-1)^(d+1)
        h = [-c for c in h]
    lc = g[-1]
    c = lc**d
    s_val, s_deg = c, m
    c = -c
    while h:
        k = poly_deg(h)
        f, g, m, d = g, h, k, m - k
        h = _exact_div(_pseudo_rem(f, g), -lc * c**d)
        lc = g[-1]
        if d > 1:
            q, rem = divmod((-lc) ** d, c ** (d - 1))
            if rem:
                raise ArithmeticError("inexact division in subresultant sequence")
            c = q
        else:
            c = -lc
        s_val, s_deg = -c, k
    if s_deg > 0:
        return 0
    return sign * s_val
