"""Coset obstructions and the character-sum audits surrounding them.

A set P in (Z/qZ)^x sits inside a coset x*H of the index-d subgroup H exactly
when d divides every difference of discrete logs of elements of P.  Taking
d = gcd(q-1, all dlog differences) therefore finds the tightest obstruction
in one pass; a brute-force subgroup/coset sweep serves as the oracle.

Containment in a coset is the same thing as some non-principal character
being constant on P.  Two quantitative audits surround that statement: the
prefix maxima of character sums (Polya-Vinogradov hard bound, Burgess shape
recorded), and the partial sums of z^Omega(n), whose main term

    x * (log x)^(z-1) * ( prod_p (1-z/p)^-1 (1-1/p)^z ) / Gamma(z)

stays bounded away from zero for |z| = 1, Re(z) >= -1/2.  A character
constant (= z) on the primes below x agrees with z^Omega(n) on all of [1, x],
so the two audits pull in opposite directions; the tension report evaluates
both at finite x.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.special import gamma as complex_gamma

from .modular import (
    CharacterTable,
    Subgroup,
    character_table,
    divisors,
    modulus_value,
    subgroup_of_index,
)
from .primes import Eta, factor_sieve, prime_residues, primes_below
from .reports import FAIL, PASS, RECORDED, AuditReport
from .residues import ResidueSet

EULER_PRODUCT_PRIME_LIMIT = 10**6
EULER_PRODUCT_TAIL_BOUND = 2e-6  # remainder of sum_p O(1/p^2) beyond the limit


def _dlog_gcd(p: ResidueSet, table: CharacterTable) -> int:
    """gcd(q-1, pairwise dlog differences); > 1 iff trapped in a proper coset."""
    els = p.elements()
    t0 = int(table.dlog[els[0]])
    return reduce(math.gcd, (int(table.dlog[a]) - t0 for a in els[1:]), table.order)


def is_coset_trapped(p: ResidueSet) -> bool:
    if not p:
        raise ValueError("emptiness is not a coset question")
    return _dlog_gcd(p, character_table(p.q)) > 1


@dataclass(frozen=True)
class CosetWitness:
    """A proper subgroup H and representative x certifying P inside x*H."""

    subgroup: Subgroup
    representative: int

    def coset(self) -> ResidueSet:
        q = self.subgroup.q
        bits = 0
        for h in self.subgroup.elements:
            bits |= 1 << (self.representative * h % q)
        return ResidueSet(q, bits)


def coset_obstruction(p: ResidueSet, table: CharacterTable | None = None) -> CosetWitness | None:
    """Tightest coset containment of P, or None when no proper coset traps it.

    A singleton {a} is trapped in a*{1} (the trivial subgroup, index q-1);
    that degenerate witness is returned as such.
    """
    if not p:
        raise ValueError("coset obstruction needs a nonempty set")
    table = table or character_table(p.q)
    d = _dlog_gcd(p, table)
    if d == 1:
        return None
    witness = CosetWitness(subgroup_of_index(p.q, d), next(iter(p)))
    if not p.is_subset(witness.coset()):
        raise AssertionError("dlog-gcd witness failed containment; bug")
    return witness


def coset_obstruction_brute(p: ResidueSet) -> CosetWitness | None:
    """Oracle: sweep all proper subgroups, largest index first.

    Containment in *some* coset of H is containment in the coset of its first
    element, since cosets partition the group.
    """
    if not p:
        raise ValueError("coset obstruction needs a nonempty set")
    q = p.q
    a0 = next(iter(p))
    for m in sorted(divisors(q - 1), reverse=True):
        if m == 1:
            continue
        h = subgroup_of_index(q, m)
        coset_bits = 0
        for v in h.elements:
            coset_bits |= 1 << (a0 * v % q)
        if p.bits & ~coset_bits == 0:
            return CosetWitness(h, a0)
    return None


def character_constant_on(p: ResidueSet, table: CharacterTable, j: int, tol: float = 1e-9) -> bool:
    """True iff chi_j takes one single value across P (within tol)."""
    if not p:
        raise ValueError("needs a nonempty set")
    if not 0 <= j <= table.order - 1:
        raise ValueError(f"character index {j} outside [0, {table.order - 1}]")
    els = np.array(p.elements(), dtype=np.int64)
    vals = table.roots[(j * table.dlog[els]) % table.order]
    return bool(np.abs(vals - vals[0]).max() <= tol)


def character_prefix_max(table: CharacterTable, j: int) -> AuditReport:
    """M = max_{x<q} |sum_{n<=x} chi_j(n)| vs the sqrt(q)*log(q) prefix bound.

    The prefix bound is a hard assertion; the Burgess-shaped ceilings at
    r = 2, 3 are recorded ratios with no asserted constant.
    """
    if j % table.order == 0:
        raise ValueError("prefix maxima are for non-principal characters")
    q = table.q
    prefix = np.cumsum(table.character_values(j)[1:])
    mags = np.abs(prefix)
    m = float(mags.max())
    arg = int(mags.argmax()) + 1
    bound = math.sqrt(q) * math.log(q)
    burgess = {}
    xs = np.arange(1, q, dtype=float)
    for r in (2, 3):
        shape = xs ** (1 - 1 / r) * q ** ((r + 1) / (4 * r * r)) * math.log(q) ** (1 / r)
        burgess[f"r{r}_max_ratio"] = float((mags / shape).max())
    ok = m <= bound + 1e-6
    return AuditReport(
        name="character.prefix-max",
        params={"q": q, "j": j},
        computed=m,
        bound=bound,
        ratio=m / bound,
        verdict=PASS if ok else FAIL,
        tolerance=1e-6,
        witness=None if ok else arg,
        details={"argmax_x": arg, **burgess},
    )


# ---------------------------------------------------------------------------
# Partial sums of z^Omega(n)


@dataclass(frozen=True)
class OmegaSumReport:
    """sum_{n<=x} z^Omega(n) against its main term."""

    z: complex
    x: int
    lhs: complex
    main_term: complex
    euler_product: complex
    rel_error: float
    tail_bound: float
    noncancel_ratio: float
    noncancel_applicable: bool


def euler_product_constant(z: complex, prime_limit: int = EULER_PRODUCT_PRIME_LIMIT) -> complex:
    """prod_p (1 - z/p)^-1 * (1 - 1/p)^z, truncated at prime_limit.

    Terms are O(1/p^2), so the truncation error beyond 10^6 is below
    EULER_PRODUCT_TAIL_BOUND; callers fold that into their error bars.
    """
    ps = primes_below(prime_limit).primes.astype(np.float64)
    total = (-np.log(1 - z / ps) + z * np.log1p(-1.0 / ps)).sum()
    return complex(cmath.exp(total))


def omega_power_sum(z: complex, x: int) -> OmegaSumReport:
    """Exact sum_{n<=x} z^Omega(n) vs x * (log x)^(z-1) * C(z)/Gamma(z).

    Requires |z| = 1 and z != -1 (Gamma blows up against the (log x)^(z-1)
    factor there; that root is excluded).  The non-cancellation ratio
    |LHS| * log^(3/2)(x) / x is meaningful on Re(z) >= -1/2.
    """
    z = complex(z)
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError(f"z must lie on the unit circle, got |z| = {abs(z)}")
    if abs(z + 1.0) < 1e-9:
        raise ValueError("z = -1 is excluded")
    if x < 100:
        raise ValueError("x must be at least 100")

    sieve = factor_sieve(x)
    om = sieve.omega_values[1 : x + 1]
    zpow = z ** np.arange(int(om.max()) + 1)
    lhs = complex(zpow[om].sum())

    logx = math.log(x)
    c = euler_product_constant(z)
    main = x * cmath.exp((z - 1) * cmath.log(logx)) * (c / complex(complex_gamma(z)))
    rel = abs(lhs - main) / abs(main)
    re_ok = z.real >= -0.5 - 1e-12
    return OmegaSumReport(
        z=z,
        x=x,
        lhs=lhs,
        main_term=main,
        euler_product=c,
        rel_error=rel,
        tail_bound=EULER_PRODUCT_TAIL_BOUND,
        noncancel_ratio=abs(lhs) * logx**1.5 / x,
        noncancel_applicable=re_ok,
    )


# ---------------------------------------------------------------------------
# Experiments on the primes below eta*q


def coset_scan_report(q: int, eta: Eta | float | str = 1) -> AuditReport:
    """Run the obstruction detector on P_eta and report any witness found."""
    qv = modulus_value(q)
    e = Eta.coerce(eta)
    p = prime_residues(qv, e)
    if not p:
        return AuditReport(
            name="coset.obstruction-scan",
            params={"q": qv, "eta": e.label()},
            computed=0.0,
            verdict=RECORDED,
            details={"prime_count": 0, "obstructed": None, "note": "P_eta is empty"},
        )
    witness = coset_obstruction(p)
    details = {"prime_count": len(p), "obstructed": witness is not None}
    if witness is not None:
        details["subgroup_index"] = witness.subgroup.index
        details["representative"] = witness.representative
    return AuditReport(
        name="coset.obstruction-scan",
        params={"q": qv, "eta": e.label()},
        computed=float(witness.subgroup.index if witness else 1),
        verdict=RECORDED,
        witness=(witness.subgroup.index, witness.representative) if witness else None,
        details=details,
    )


def obstruction_tension_report(q: int, eta: Eta | float | str = 1) -> AuditReport:
    """When P_eta is trapped, weigh both sides of the contradiction machinery.

    A trapping character chi is constant (= z) on the primes below eta*q, so
    sum_{n<=x} chi(n) = sum_{n<=x} z^Omega(n) exactly at x = floor(eta*q);
    the report compares that common value against the Burgess-shaped ceiling
    (which squeezes it down) and the non-cancellation floor (which props it
    up), for the best admissible power of chi (Re(z^k) >= -1/2, k coprime to
    the order).  Asymptotically the two cannot coexist; at desk scale we
    record where each side stands and the q-scale where the shapes cross.
    """
    qv = modulus_value(q)
    e = Eta.coerce(eta)
    p = prime_residues(qv, e)
    if not p:
        raise ValueError("P_eta is empty; nothing to audit")
    witness = coset_obstruction(p)
    params = {"q": qv, "eta": e.label()}
    if witness is None:
        return AuditReport(
            name="coset.obstruction-tension",
            params=params,
            verdict=RECORDED,
            details={"obstructed": False},
        )

    table = character_table(qv)
    d = witness.subgroup.index
    j0 = table.order // d  # chi_{j0} generates the characters constant on P
    x = min(e.largest_admitted(qv), qv - 1)
    t0 = int(table.dlog[next(iter(p))])

    best = None
    for k in range(1, d):
        if math.gcd(k, d) != 1:
            continue
        zval = complex(table.roots[(j0 * k * t0) % table.order])
        if zval.real < -0.5 - 1e-12:
            continue
        chi_sum = complex(table.character_values(j0 * k)[1 : x + 1].sum())
        if x >= 100 and abs(zval + 1) > 1e-9:
            rep = omega_power_sum(zval, x)
            strength = rep.noncancel_ratio
            lhs_abs = abs(rep.lhs)
            # chi^k agrees with z^Omega on all of [1, x]: hard sanity identity
            gap = abs(rep.lhs - chi_sum) / max(1.0, abs(rep.lhs))
            if gap > 1e-6:
                raise AssertionError("trapped character disagrees with z^Omega; bug")
        else:
            lhs_abs = abs(chi_sum)
            strength = lhs_abs * math.log(max(x, 3)) ** 1.5 / max(x, 1)
        if best is None or strength > best["noncancel_ratio"]:
            best = {"power": k, "z": zval, "lhs_abs": lhs_abs, "noncancel_ratio": strength}

    details: dict = {
        "obstructed": True,
        "subgroup_index": d,
        "x": x,
    }
    if best is None:
        details["note"] = "no admissible power keeps Re(z) >= -1/2 (quadratic-type trap)"
        return AuditReport(
            name="coset.obstruction-tension", params=params, verdict=RECORDED, details=details
        )

    logq = math.log(qv)
    burgess = min(
        x ** (1 - 1 / r) * qv ** ((r + 1) / (4 * r * r)) * logq ** (1 / r) for r in (2, 3, 4)
    )
    details.update(
        {
            "best_power": best["power"],
            "z": best["z"],
            "common_sum_abs": best["lhs_abs"],
            "burgess_ceiling": burgess,
            "noncancel_ratio": best["noncancel_ratio"],
            "crossover_q": _crossover_scale(e, best["noncancel_ratio"]),
        }
    )
    return AuditReport(
        name="coset.obstruction-tension",
        params=params,
        computed=best["lhs_abs"],
        bound=burgess,
        ratio=best["lhs_abs"] / burgess if burgess else None,
        verdict=RECORDED,
        details=details,
    )


def _crossover_scale(e: Eta, noncancel_const: float) -> float | None:
    """Smallest q (log-grid) where the non-cancellation floor beats Burgess."""
    c = max(noncancel_const, 1e-6)
    for lg in range(2, 120):
        qq = 10.0**lg
        x = e.value_at(int(min(qq, 1e18)) | 1) * qq
        if x < 10:
            continue
        floor_side = c * x / math.log(x) ** 1.5
        ceil_side = min(
            x ** (1 - 1 / r) * qq ** ((r + 1) / (4 * r * r)) * math.log(qq) ** (1 / r)
            for r in (2, 3, 4, 6, 8)
        )
        if floor_side > ceil_side:
            return qq
    return None
