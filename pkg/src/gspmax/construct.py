"""Assembly of integer polynomials from menus of local congruences.

Plans the auxiliary primes for a genus, lays out one congruence per prime,
combines witness polynomials into a single monic integer polynomial by the
Chinese remainder theorem, and repairs residual triple roots so that only the
planned primes see roots of multiplicity three or more.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .arith import (
    crt_integers,
    fp_factor,
    fp_gcd,
    fp_is_irreducible,
    is_prime,
    is_primitive_root,
    pollard_factor,
    poly_deg,
    poly_derivative,
    poly_reduce,
    poly_trim,
    primes_up_to,
    resultant,
)
from .goldbach import GoldbachTuple, two_g_eps_tuples
from .localtypes import (
    FIXTURE_SEED,
    WITNESS_BUDGET,
    LocalSpec,
    good_reduction_at_2,
    multiplicity_profile,
    recognize_type,
    witness_poly,
)

PLAN_SCAN_BOUND = 10**6

DEFAULT_SCAN_BOUND = 10**5

DEFAULT_RHO_BUDGET = 10**4


class ExceptionalGenusError(ValueError):
    """Raised for the genera whose degree admits no valid prime tuple."""


def _fixture_plan_g6(tup: GoldbachTuple) -> "PrimePlan":
    """The frozen prime plan behind the genus-6 reference certificate."""
    return PrimePlan(
        g=6,
        prime_tuple=tup,
        p_t=7,
        p_t_prime=11,
        p_2=19,
        p_2_prime=41,
        p_3=37,
        p_3_prime=17,
        p_irr=23,
        p_lin=29,
    )


@dataclass(frozen=True)
class PrimePlan:
    """The eight auxiliary primes driving one construction.

    p_t and p_t_prime force transvections, the four large primes force the
    block patterns tied to the prime tuple, and p_irr / p_lin force an
    irreducible and a linear-times-irreducible reduction. Validity of all
    size, distinctness, and multiplicative-order constraints is checked on
    creation.
    """

    g: int
    prime_tuple: GoldbachTuple
    p_t: int
    p_t_prime: int
    p_2: int
    p_2_prime: int
    p_3: int
    p_3_prime: int
    p_irr: int
    p_lin: int

    def __post_init__(self) -> None:
        g, tup = self.g, self.prime_tuple
        if tup.g != g:
            raise ValueError("prime tuple belongs to a different genus")
        primes = self.all_primes
        for p in primes:
            if not is_prime(p):
                raise ValueError(f"{p} is not prime")
        if len(set(primes)) != 8:
            raise ValueError("plan primes must be pairwise distinct")
        reserved = {2} | {p for p in primes_up_to(g) if p % 2 == 1}
        if any(p in reserved for p in primes):
            raise ValueError("plan primes must avoid 2 and the odd primes <= g")
        if not (self.p_t > g and self.p_t_prime > g):
            raise ValueError("transvection primes must exceed the genus")
        bound = 2 * g + 2
        for p in (self.p_2, self.p_2_prime, self.p_3, self.p_3_prime):
            if p <= bound:
                raise ValueError("block-pattern primes must exceed 2g + 2")
        conditions = [
            (self.p_2, tup.q1),
            (self.p_2, tup.q2),
            (self.p_2, tup.q3),
            (self.p_3, tup.q3),
            (self.p_2_prime, tup.q3),
            (self.p_2_prime, tup.q4),
            (self.p_2_prime, tup.q5),
            (self.p_3_prime, tup.q5),
        ]
        for p, q in conditions:
            if not is_primitive_root(p, q):
                raise ValueError(f"{p} is not a primitive root mod {q}")
        if self.p_2 % 3 != 1 or self.p_3 % 3 != 1:
            raise ValueError("p_2 and p_3 must be 1 mod 3")

    @property
    def all_primes(self) -> tuple[int, ...]:
        return (
            self.p_t,
            self.p_t_prime,
            self.p_2,
            self.p_2_prime,
            self.p_3,
            self.p_3_prime,
            self.p_irr,
            self.p_lin,
        )

    @property
    def exceptions(self) -> tuple[int, ...]:
        """The primes allowed to keep roots of multiplicity three or more."""
        return tuple(sorted((self.p_2, self.p_2_prime, self.p_3, self.p_3_prime)))


def _scan_prime(lower: int, used: set[int], ok) -> int:
    """Smallest unused prime > lower satisfying the predicate."""
    for n in range(lower + 1, PLAN_SCAN_BOUND):
        if n in used or not is_prime(n):
            continue
        if ok(n):
            return n
    raise ValueError(f"no suitable prime in ({lower}, {PLAN_SCAN_BOUND})")


def plan_primes(g: int, tup: GoldbachTuple, seed: int = 0) -> PrimePlan:
    """Choose the eight auxiliary primes for a genus and its prime tuple.

    The scan is deterministic: each slot takes the smallest prime meeting its
    constraints, in the order p_t, p_t', p_2, p_3, p_2', p_3', p_irr, p_lin,
    skipping 2, the odd primes <= g, and primes already assigned. The seed
    only selects the frozen reference plan (available for genus 6).
    """
    if tup.g != g:
        raise ValueError("prime tuple belongs to a different genus")
    if seed == FIXTURE_SEED:
        if g != 6 or tup.qs != (7, 7, 3, 11, 13):
            raise ValueError("no reference plan for this genus and tuple")
        return _fixture_plan_g6(tup)
    used = {2} | {p for p in primes_up_to(g) if p % 2 == 1}

    def take(lower: int, ok=lambda n: True) -> int:
        p = _scan_prime(lower, used, ok)
        used.add(p)
        return p

    big = 2 * g + 2
    p_t = take(g)
    p_t_prime = take(g)
    p_2 = take(
        big,
        lambda n: n % 3 == 1
        and is_primitive_root(n, tup.q1)
        and is_primitive_root(n, tup.q2)
        and is_primitive_root(n, tup.q3),
    )
    p_3 = take(big, lambda n: n % 3 == 1 and is_primitive_root(n, tup.q3))
    p_2_prime = take(
        big,
        lambda n: is_primitive_root(n, tup.q3)
        and is_primitive_root(n, tup.q4)
        and is_primitive_root(n, tup.q5),
    )
    p_3_prime = take(big, lambda n: is_primitive_root(n, tup.q5))
    p_irr = take(2)
    p_lin = take(2)
    return PrimePlan(
        g=g,
        prime_tuple=tup,
        p_t=p_t,
        p_t_prime=p_t_prime,
        p_2=p_2,
        p_2_prime=p_2_prime,
        p_3=p_3,
        p_3_prime=p_3_prime,
        p_irr=p_irr,
        p_lin=p_lin,
    )


def local_spec_list(plan: PrimePlan) -> list[LocalSpec]:
    """The full congruence menu for a prime plan, one spec per modulus."""
    g, tup = plan.g, plan.prime_tuple
    specs = [
        LocalSpec(p=plan.p_t, kind="type", m=2, t=1, qs=(2,)),
        LocalSpec(p=plan.p_t_prime, kind="type", m=2, t=1, qs=(2,)),
    ]
    for ell in primes_up_to(g):
        if ell % 2 == 1:
            specs.append(LocalSpec(p=ell, kind="double_roots", m=2, count=g))
    specs.extend(
        [
            LocalSpec(p=plan.p_2, kind="type", m=2, t=1, qs=(tup.q1, tup.q2)),
            LocalSpec(p=plan.p_2_prime, kind="type", m=2, t=1, qs=(tup.q4, tup.q5)),
            LocalSpec(p=plan.p_3, kind="type", m=3, t=2, qs=(tup.q3,)),
            LocalSpec(p=plan.p_3_prime, kind="type", m=3, t=2, qs=(tup.q5,)),
            LocalSpec(p=plan.p_irr, kind="irreducible", m=1),
            LocalSpec(p=plan.p_lin, kind="linear_times_irreducible", m=1),
            LocalSpec(p=2, kind="good_reduction_2", m=2 * g + 2),
        ]
    )
    return specs


def assemble(items: list[tuple[LocalSpec, list[int]]], g: int) -> tuple[list[int], int]:
    """Combine per-modulus witness polynomials into one monic polynomial.

    Each item pairs a spec with a residue polynomial mod the spec's modulus.
    Returns (f0, N) where N is the product of the moduli and f0 is the unique
    monic degree 2g+2 polynomial with coefficients in [0, N) matching every
    witness. The result does not depend on the order of the items.
    """
    if not items:
        raise ValueError("no congruences given")
    deg = 2 * g + 2
    moduli = [spec.modulus for spec, _ in items]
    for (m1, m2) in itertools.combinations(moduli, 2):
        if math.gcd(m1, m2) != 1:
            raise ValueError("moduli must be pairwise coprime")
    reduced: list[list[int]] = []
    for spec, wit in items:
        w = [c % spec.modulus for c in wit]
        if poly_deg(poly_trim(list(wit))) != deg or w[-1] != 1:
            raise ValueError("inconsistent degrees in the witness list")
        reduced.append(w)
    f0 = [
        crt_integers([(w[i], m) for w, m in zip(reduced, moduli)])
        for i in range(deg)
    ]
    f0.append(1)
    return f0, math.prod(moduli)


@dataclass(frozen=True)
class TripleRootScreen:
    """Primes at which a polynomial could have a root of multiplicity >= 3.

    Any such prime divides the resultant of the first two derivatives, so the
    found prime divisors are the only candidates below the scan bound, and
    the residual cofactor bounds what remains unexplored above it.
    """

    resultant_abs: int
    found_primes: tuple[int, ...]
    residual_cofactor: int
    scan_bound: int

    @property
    def complete(self) -> bool:
        return self.residual_cofactor == 1


def screen_triple_roots(
    f: list[int],
    scan_bound: int = DEFAULT_SCAN_BOUND,
    rho_budget: int | float = DEFAULT_RHO_BUDGET,
    seed: int = 0,
) -> TripleRootScreen:
    """Factor the resultant of f'' and f' to locate candidate bad primes."""
    d1 = poly_derivative(f)
    d2 = poly_derivative(d1)
    res = abs(resultant(d1, d2))
    if res == 0:
        raise ValueError("the first two derivatives share a root over the rationals")
    found: set[int] = set()
    cofactor = res
    for p in primes_up_to(scan_bound):
        if cofactor % p == 0:
            found.add(p)
            while cofactor % p == 0:
                cofactor //= p
    if cofactor > 1:
        extra, cofactor = pollard_factor(cofactor, rho_budget, seed)
        found.update(extra)
    return TripleRootScreen(
        resultant_abs=res,
        found_primes=tuple(sorted(found)),
        residual_cofactor=cofactor,
        scan_bound=scan_bound,
    )


@dataclass(frozen=True)
class RepairRecord:
    """Outcome of the triple-root repair pass.

    f is the adjusted polynomial, congruent to the input mod N. pre_stage
    lists (p, u, w) adjustments by N*(u*x + w) applied at small primes,
    linear_nudges counts how many times n_tilde was added to the linear
    coefficient, and z is the final constant shift in units of n_tilde.
    status is "clean" when the candidate-prime screen was exhaustive and
    "conditional" when an unfactored cofactor remains.
    """

    f: tuple[int, ...]
    n_tilde: int
    pre_stage: tuple[tuple[int, int, int], ...]
    linear_nudges: int
    z: int
    repaired_primes: tuple[int, ...]
    found_primes: tuple[int, ...]
    scan_bound: int
    residual_cofactor: int
    status: str


def _has_triple_root(f: list[int], p: int) -> bool:
    """True iff f mod p has a root of multiplicity >= 3 over the closure."""
    fp = poly_trim(poly_reduce(f, p))
    d1 = poly_trim(poly_derivative(fp, p))
    d2 = poly_trim(poly_derivative(d1, p))
    common = fp_gcd(fp_gcd(fp, d1, p), d2, p)
    return poly_deg(common) >= 1


def _clear_small_prime(f: list[int], n: int, p: int) -> tuple[int, int]:
    """(u, w) in F_p x F_p such that f + n*(u*x + w) loses its triple roots mod p."""
    for u, w in itertools.product(range(p), repeat=2):
        candidate = list(f)
        candidate[1] += n * u
        candidate[0] += n * w
        if not _has_triple_root(candidate, p):
            return u, w
    raise ValueError(f"no linear adjustment clears the multiplicity-3 roots mod {p}")


def _coprime_shift(f: list[int], p: int, g: int) -> int:
    """Smallest c in F_p with f + c coprime to f'' mod p.

    The second derivative has at most 2g roots, so at most 2g residues are
    forbidden and a valid c exists among the first 2g + 1 candidates.
    """
    fp = poly_trim(poly_reduce(f, p))
    d2 = poly_trim(poly_derivative(poly_derivative(fp, p), p))
    for c in range(min(p, 2 * g + 2)):
        shifted = list(fp)
        shifted[0] = (shifted[0] + c) % p
        if poly_deg(fp_gcd(shifted, d2, p)) == 0:
            return c
    raise RuntimeError(f"internal error: no coprime constant shift mod {p}")


def fix_multiplicities(
    f0: list[int],
    n: int,
    g: int,
    exceptions: tuple[int, ...] = (),
    scan_bound: int = DEFAULT_SCAN_BOUND,
    rho_budget: int | float = DEFAULT_RHO_BUDGET,
    seed: int = 0,
) -> RepairRecord:
    """Adjust f0 within its congruence class mod n to remove stray triple roots.

    After the repair, f has no roots of multiplicity three or more modulo any
    found candidate prime outside the exceptions, while f stays congruent to
    f0 mod n. The exceptions must divide n; primes dividing n but not listed
    are required to be clean already, since no shift by a multiple of n can
    change f modulo them.
    """
    deg = 2 * g + 2
    f = list(f0)
    if poly_deg(poly_trim(f)) != deg or f[-1] != 1:
        raise ValueError("f0 must be monic of degree 2g + 2")
    if n < 1:
        raise ValueError("n must be positive")
    for p in exceptions:
        if not is_prime(p) or n % p != 0:
            raise ValueError("exceptions must be primes dividing n")

    small = [p for p in primes_up_to(2 * g - 1) if n % p != 0]
    pre_fixes = [
        (p, *_clear_small_prime(f, n, p)) for p in small if _has_triple_root(f, p)
    ]
    if pre_fixes:
        u = crt_integers([(u_p, p) for p, u_p, _ in pre_fixes])
        w = crt_integers([(w_p, p) for p, _, w_p in pre_fixes])
        f[1] += n * u
        f[0] += n * w

    n_tilde = n * math.prod(small)
    skip = set(exceptions) | {2}
    nudges = 0
    while resultant(poly_derivative(f), poly_derivative(poly_derivative(f))) == 0:
        f[1] += n_tilde
        nudges += 1
        if nudges > 2 * g + 1:
            raise RuntimeError("internal error: no coprime linear nudge found")

    screen = screen_triple_roots(f, scan_bound, rho_budget, seed)
    for p in screen.found_primes:
        if n % p == 0 and p not in skip and _has_triple_root(f, p):
            raise ValueError(f"unrepairable multiplicity-3 root at {p} dividing n")

    candidates = [p for p in screen.found_primes if n_tilde % p != 0]
    constrained: dict[int, int] = {}
    z = 0
    for _ in range(len(candidates) + 1):
        shifted = list(f)
        shifted[0] += z * n_tilde
        new_bad = [
            p for p in candidates if p not in constrained and _has_triple_root(shifted, p)
        ]
        if not new_bad:
            f = shifted
            break
        for p in new_bad:
            if p <= 2 * g:
                raise RuntimeError(f"internal error: {p} <= 2g should divide n_tilde")
            constrained[p] = _coprime_shift(f, p, g)
        z = crt_integers(
            [((c * pow(n_tilde, -1, p)) % p, p) for p, c in constrained.items()]
        )
    else:
        raise RuntimeError("internal error: repair loop did not converge")

    for p in candidates:
        if _has_triple_root(f, p):
            raise RuntimeError(f"internal error: repair left a triple root mod {p}")
    return RepairRecord(
        f=tuple(f),
        n_tilde=n_tilde,
        pre_stage=tuple(pre_fixes),
        linear_nudges=nudges,
        z=z,
        repaired_primes=tuple(sorted(constrained)),
        found_primes=screen.found_primes,
        scan_bound=scan_bound,
        residual_cofactor=screen.residual_cofactor,
        status="clean" if screen.complete else "conditional",
    )


@dataclass(frozen=True)
class Certificate:
    """A constructed polynomial with the plan and evidence behind it."""

    g: int
    plan: PrimePlan
    specs: tuple[LocalSpec, ...]
    witnesses: tuple[tuple[int, ...], ...]
    f0: tuple[int, ...]
    modulus: int
    repair: RepairRecord

    @property
    def f(self) -> tuple[int, ...]:
        """The final polynomial, after the triple-root repair."""
        return self.repair.f


def _closed_form_modulus(plan: PrimePlan) -> int:
    """The modulus product written out prime by prime."""
    g = plan.g
    value = (
        plan.p_t**2
        * plan.p_t_prime**2
        * plan.p_lin
        * plan.p_irr
        * plan.p_2**2
        * plan.p_2_prime**2
        * plan.p_3**3
        * plan.p_3_prime**3
        * 2 ** (2 * g + 2)
    )
    for ell in primes_up_to(g):
        if ell % 2 == 1:
            value *= ell**2
    return value


def _check_spec(f: list[int], spec: LocalSpec, g: int) -> bool:
    """Re-verify one congruence on the assembled polynomial from scratch."""
    if spec.kind == "type":
        return recognize_type(f, spec.p, spec.t, list(spec.qs)) is not None
    if spec.kind == "double_roots":
        deg = 2 * g + 2
        want = [1] * (deg - 2 * spec.count) + [2] * spec.count
        return multiplicity_profile(f, spec.p) == want
    if spec.kind == "irreducible":
        return fp_is_irreducible(poly_reduce(f, spec.p), spec.p)
    if spec.kind == "linear_times_irreducible":
        fac = fp_factor(poly_reduce(f, spec.p), spec.p)
        degrees = sorted(len(poly) - 1 for poly, _ in fac.factors)
        return degrees == [1, 2 * g + 1] and all(e == 1 for _, e in fac.factors)
    return good_reduction_at_2(f, g)


def build_certificate(
    g: int,
    seed: int = 0,
    scan_bound: int = DEFAULT_SCAN_BOUND,
    rho_budget: int | float = DEFAULT_RHO_BUDGET,
    budget: int = WITNESS_BUDGET,
) -> Certificate:
    """Construct a certified polynomial for one genus, end to end.

    Picks the first prime tuple for the genus, plans the auxiliary primes,
    generates witness polynomials, assembles them, repairs stray triple
    roots, and re-checks every congruence on the result before returning.
    """
    tuples = two_g_eps_tuples(g)
    if not tuples:
        raise ExceptionalGenusError(
            f"genus {g} admits no prime tuple: {2 * g + 2} has no two prime-pair "
            "splittings q1 + q2 = q4 + q5 with a fifth prime between q5 and 2g + 2"
        )
    tup = tuples[0]
    plan = plan_primes(g, tup, seed)
    specs = local_spec_list(plan)
    witnesses = [witness_poly(spec, g, seed=seed, budget=budget) for spec in specs]
    f0, modulus = assemble(list(zip(specs, witnesses)), g)
    if modulus != _closed_form_modulus(plan):
        raise RuntimeError("internal error: modulus mismatch against the closed form")
    for spec in specs:
        if not _check_spec(f0, spec, g):
            raise RuntimeError(f"internal error: assembled f0 fails its shape mod {spec.p}")
    repair = fix_multiplicities(
        f0,
        modulus,
        g,
        exceptions=plan.exceptions,
        scan_bound=scan_bound,
        rho_budget=rho_budget,
        seed=seed,
    )
    if any((a - b) % modulus != 0 for a, b in zip(repair.f, f0)):
        raise RuntimeError("internal error: repair left the congruence class")
    return Certificate(
        g=g,
        plan=plan,
        specs=tuple(specs),
        witnesses=tuple(tuple(w) for w in witnesses),
        f0=tuple(f0),
        modulus=modulus,
        repair=repair,
    )
