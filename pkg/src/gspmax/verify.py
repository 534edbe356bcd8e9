"""Hypothesis checking and verdicts for constructed polynomials.

Evaluates the full hypothesis list on a polynomial and its prime plan, runs
the triple-root scan, and turns the outcome into a verdict on how large the
mod-l monodromy groups are guaranteed to be.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .arith import (
    fp_factor,
    fp_is_irreducible,
    is_prime,
    is_primitive_root,
    poly_deg,
    poly_derivative,
    poly_reduce,
    poly_trim,
    resultant,
)
from .construct import (
    DEFAULT_RHO_BUDGET,
    DEFAULT_SCAN_BOUND,
    PrimePlan,
    screen_triple_roots,
)
from .inertia import is_totally_toric
from .localtypes import good_reduction_at_2, multiplicity_profile, recognize_type

FLAG_NAMES = ("2G+eps", "2T", "TT", "p2", "p3", "p2'", "p3'", "3", "S_2g+2", "ss")

EXCEPTIONAL_EXCLUDED = {
    2: {3, 5},
    3: {3, 5, 7},
    4: {5, 7},
    5: {5, 7, 11},
    7: {5, 11, 13},
    13: {11, 17, 23},
}


@dataclass(frozen=True)
class HypothesisFlag:
    """One checked hypothesis: pass, fail, or conditional, with evidence."""

    name: str
    status: str
    detail: str

    def __post_init__(self) -> None:
        if self.status not in ("pass", "fail", "conditional"):
            raise ValueError(f"unknown flag status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status != "fail"


@dataclass(frozen=True)
class ScanRecord:
    """Result of the triple-root scan behind the semistability flag.

    found_primes are the located prime divisors of the derivative resultant;
    bad_primes pairs each one carrying a root of multiplicity >= 3 with that
    maximal multiplicity. A residual_cofactor above 1 means the scan was not
    exhaustive; 0 means the screen itself was unavailable.
    """

    bound: int
    found_primes: tuple[int, ...]
    bad_primes: tuple[tuple[int, int], ...]
    residual_cofactor: int


@dataclass(frozen=True)
class SymmetricGroupEvidence:
    """The three ingredients forcing the full symmetric mod-2 group."""

    full_cycle: bool
    near_cycle: bool
    transposition: bool

    @property
    def complete(self) -> bool:
        return self.full_cycle and self.near_cycle and self.transposition


@dataclass(frozen=True)
class Verdict:
    """What the hypothesis outcome guarantees about the mod-l images."""

    kind: str
    excluded: tuple[int, ...]
    conditional: bool
    basis: str
    text: str


@dataclass(frozen=True)
class VerificationReport:
    """All hypothesis flags, the scan record, and the resulting verdict."""

    g: int
    plan: PrimePlan
    flags: tuple[HypothesisFlag, ...]
    scan: ScanRecord
    mod_2: SymmetricGroupEvidence
    admissible_derived: bool
    partial_admissible: bool
    verdict: Verdict | None = None

    def flag(self, name: str) -> HypothesisFlag:
        for fl in self.flags:
            if fl.name == name:
                return fl
        raise KeyError(name)


def excluded_primes_exceptional(g: int) -> set[int]:
    """Primes that stay out of reach for the genera without a prime tuple."""
    if g not in EXCEPTIONAL_EXCLUDED:
        raise ValueError(f"no exceptional-genus row for genus {g}")
    return set(EXCEPTIONAL_EXCLUDED[g])


def _tuple_flag(plan: PrimePlan) -> HypothesisFlag:
    tup = plan.prime_tuple
    qs = (tup.q1, tup.q2, tup.q3, tup.q4, tup.q5)
    ok = (
        all(is_prime(q) for q in qs)
        and tup.q1 + tup.q2 == 2 * plan.g + 2 == tup.q4 + tup.q5
        and tup.q4 < tup.q1 <= tup.q2 < tup.q5 < tup.q3 < 2 * plan.g + 2
    )
    detail = f"{2 * plan.g + 2} = {tup.q1}+{tup.q2} = {tup.q4}+{tup.q5}, q3 = {tup.q3}"
    return HypothesisFlag("2G+eps", "pass" if ok else "fail", detail)


def _type_at(f: list[int], p: int, t: int, qs: tuple[int, ...]) -> bool:
    return recognize_type(f, p, t, list(qs)) is not None


def _block_flag(
    name: str,
    f: list[int],
    p: int,
    t: int,
    qs: tuple[int, ...],
    roots_mod: tuple[int, ...],
    g: int,
) -> tuple[HypothesisFlag, bool]:
    """Flag for one planned block pattern; also returns the bare type fact."""
    typed = _type_at(f, p, t, qs)
    big = p > 2 * g + 2
    generator = all(is_primitive_root(p, q) for q in roots_mod)
    ok = typed and big and generator
    blocks = ",".join(str(q) for q in qs)
    parts = [f"type {t}-{{{blocks}}} at {p}: {'yes' if typed else 'no'}"]
    if not big:
        parts.append(f"{p} <= 2g+2")
    parts.append(
        f"generator mod {', '.join(str(q) for q in roots_mod)}: "
        f"{'yes' if generator else 'no'}"
    )
    return HypothesisFlag(name, "pass" if ok else "fail", "; ".join(parts)), typed


def check_hypotheses(
    f: list[int],
    plan: PrimePlan,
    scan_bound: int = DEFAULT_SCAN_BOUND,
    rho_budget: int | float = DEFAULT_RHO_BUDGET,
    seed: int = 0,
) -> VerificationReport:
    """Evaluate every hypothesis flag for f against its prime plan.

    A flag reads "pass" only when this checker can certify the hypothesis;
    "fail" means not certified. The semistability flag is "conditional" when
    all located candidate primes are clean but an unfactored cofactor of the
    derivative resultant remains.
    """
    g = plan.g
    deg = 2 * g + 2
    f = list(f)
    if poly_deg(poly_trim(f)) != deg or f[-1] != 1:
        raise ValueError("f must be monic of degree 2g + 2")
    if resultant(f, poly_derivative(f)) == 0:
        raise ValueError("f must be squarefree")
    tup = plan.prime_tuple

    flag_tuple = _tuple_flag(plan)

    t_at = _type_at(f, plan.p_t, 1, (2,))
    t_at_prime = _type_at(f, plan.p_t_prime, 1, (2,))
    two_t_ok = (
        t_at
        and t_at_prime
        and plan.p_t != plan.p_t_prime
        and plan.p_t > g
        and plan.p_t_prime > g
    )
    flag_2t = HypothesisFlag(
        "2T",
        "pass" if two_t_ok else "fail",
        f"type 1-{{2}} at {plan.p_t}: {'yes' if t_at else 'no'}; "
        f"at {plan.p_t_prime}: {'yes' if t_at_prime else 'no'}",
    )

    small_odd = [ell for ell in range(3, g + 1, 2) if is_prime(ell)]
    toric = {ell: is_totally_toric(f, ell, g) for ell in small_odd}
    flag_tt = HypothesisFlag(
        "TT",
        "pass" if all(toric.values()) else "fail",
        "; ".join(
            f"totally toric at {ell}: {'yes' if ok else 'no'}"
            for ell, ok in toric.items()
        )
        or "no odd primes <= g",
    )

    flag_p2, typed_p2 = _block_flag(
        "p2", f, plan.p_2, 1, (tup.q1, tup.q2), (tup.q1, tup.q2, tup.q3), g
    )
    flag_p3, typed_p3 = _block_flag("p3", f, plan.p_3, 2, (tup.q3,), (tup.q3,), g)
    flag_p2p, typed_p2p = _block_flag(
        "p2'", f, plan.p_2_prime, 1, (tup.q4, tup.q5), (tup.q3, tup.q4, tup.q5), g
    )
    flag_p3p, typed_p3p = _block_flag(
        "p3'", f, plan.p_3_prime, 2, (tup.q5,), (tup.q5,), g
    )

    three_ok = plan.p_2 % 3 == 1 and plan.p_3 % 3 == 1
    flag_3 = HypothesisFlag(
        "3",
        "pass" if three_ok else "fail",
        f"{plan.p_2} = {plan.p_2 % 3} mod 3, {plan.p_3} = {plan.p_3 % 3} mod 3",
    )

    irreducible = fp_is_irreducible(poly_reduce(f, plan.p_irr), plan.p_irr)
    lin_fac = fp_factor(poly_reduce(f, plan.p_lin), plan.p_lin)
    lin_shape = sorted(len(poly) - 1 for poly, _ in lin_fac.factors) == [
        1,
        deg - 1,
    ] and all(e == 1 for _, e in lin_fac.factors)
    mod_2 = SymmetricGroupEvidence(
        full_cycle=irreducible, near_cycle=lin_shape, transposition=t_at or t_at_prime
    )
    flag_s = HypothesisFlag(
        "S_2g+2",
        "pass" if irreducible and lin_shape else "fail",
        f"irreducible mod {plan.p_irr}: {'yes' if irreducible else 'no'}; "
        f"linear times irreducible mod {plan.p_lin}: {'yes' if lin_shape else 'no'}",
    )

    exceptions = set(plan.exceptions)
    good_2 = good_reduction_at_2(f, g)
    try:
        screen = screen_triple_roots(f, scan_bound, rho_budget, seed)
        bad = []
        for p in screen.found_primes:
            mult = max(multiplicity_profile(f, p))
            if mult >= 3:
                bad.append((p, mult))
        scan = ScanRecord(
            bound=scan_bound,
            found_primes=screen.found_primes,
            bad_primes=tuple(bad),
            residual_cofactor=screen.residual_cofactor,
        )
        stray = [p for p, _ in bad if p not in exceptions and p != 2]
        if not good_2 or stray:
            status = "fail"
        elif screen.complete:
            status = "pass"
        else:
            status = "conditional"
        detail = (
            f"2-adic good-reduction family: {'yes' if good_2 else 'no'}; "
            f"stray triple-root primes to {scan_bound}: "
            f"{sorted(stray) if stray else 'none'}"
        )
        if not screen.complete:
            detail += (
                f"; unfactored cofactor of "
                f"{screen.residual_cofactor.bit_length()} bits remains"
            )
    except ValueError:
        scan = ScanRecord(scan_bound, (), (), 0)
        status = "fail"
        detail = "triple-root screen unavailable: derivatives share a root"
    flag_ss = HypothesisFlag("ss", status, detail)

    flags = (
        flag_tuple,
        flag_2t,
        flag_tt,
        flag_p2,
        flag_p3,
        flag_p2p,
        flag_p3p,
        flag_3,
        flag_s,
        flag_ss,
    )
    admissible_derived = all(
        fl.ok for fl in (flag_p2, flag_p3, flag_p2p, flag_p3p, flag_ss)
    )
    stray_partial = [
        (p, m)
        for p, m in scan.bad_primes
        if p != 2 and p not in (plan.p_2, plan.p_3)
    ]
    partial_admissible = (
        good_2
        and scan.residual_cofactor != 0
        and all(
            (p == plan.p_2_prime and typed_p2p) or (p == plan.p_3_prime and typed_p3p)
            for p, _ in stray_partial
        )
    )
    report = VerificationReport(
        g=g,
        plan=plan,
        flags=flags,
        scan=scan,
        mod_2=mod_2,
        admissible_derived=admissible_derived,
        partial_admissible=partial_admissible,
    )
    return dataclasses.replace(report, verdict=verdict(report, g))


def verdict(report: VerificationReport, g: int) -> Verdict:
    """Turn a hypothesis report into the strongest supported verdict.

    The full flag set certifies maximality at every prime. The core set
    without the mod-3 or symmetric-group flags certifies all primes outside
    {3} or {2}. A passing partial set (2T, p2, p3, tuple, derivable
    admissibility) certifies all primes outside {2, 3, q1, q2, q3, p2, p3}
    subject to its per-prime case conditions. Anything less is "none".
    """
    if g != report.g:
        raise ValueError("genus does not match the report")
    by_name = {fl.name: fl for fl in report.flags}
    conditional = by_name["ss"].status == "conditional"
    core = all(
        by_name[n].ok for n in ("2G+eps", "2T", "TT", "p2", "p3", "p2'", "p3'", "ss")
    )
    tail = " (conditional on no triple roots above the scan bound)" if conditional else ""
    if core and by_name["3"].ok and by_name["S_2g+2"].ok:
        return Verdict(
            kind="maximal-all-ell",
            excluded=(),
            conditional=conditional,
            basis="full-hypothesis-set",
            text="mod-l image maximal for every prime l" + tail,
        )
    if core:
        excluded = tuple(
            sorted(
                ({2} if not by_name["S_2g+2"].ok else set())
                | ({3} if not by_name["3"].ok else set())
            )
        )
        inside = ", ".join(str(p) for p in excluded)
        return Verdict(
            kind="maximal-except",
            excluded=excluded,
            conditional=conditional,
            basis="full-hypothesis-set",
            text=f"mod-l image maximal for every prime l outside {{{inside}}}" + tail,
        )
    partial = (
        by_name["2G+eps"].ok
        and by_name["2T"].ok
        and by_name["p2"].ok
        and by_name["p3"].ok
        and report.partial_admissible
    )
    if partial:
        plan = report.plan
        tup = plan.prime_tuple
        excluded = tuple(sorted({2, 3, tup.q1, tup.q2, tup.q3, plan.p_2, plan.p_3}))
        inside = ", ".join(str(p) for p in excluded)
        return Verdict(
            kind="maximal-except",
            excluded=excluded,
            conditional=conditional,
            basis="partial-hypothesis-set",
            text=(
                f"mod-l image maximal for primes l outside {{{inside}}} that are "
                "semistable above the genus, totally toric, or generators mod "
                f"{tup.q3}" + tail
            ),
        )
    return Verdict(
        kind="none",
        excluded=(),
        conditional=conditional,
        basis="insufficient",
        text="hypothesis set insufficient for a maximality conclusion",
    )
