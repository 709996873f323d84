"""Crank generating functions for t-core partitions and their verification.

For t in {5, 7, 11, 17, 19} the product

    C_t(zeta, q) = prod (1-q^n)(1-q^{tn})^P prod_k (1-zeta^{+-k} q^{tn}) / (1-zeta^{+-1} q^n)

specialises at zeta = 1 to the t-core generating function.  Modulo Phi_3 it
collapses to an integer eta-quotient times (1-q^{3tn})^j, and the vanishing
of its coefficients along 3tn + beta is certified with ``modular_cert``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from qcrank.arith import divisors, is_prime
from qcrank.modular_cert import Certificate, RaduTuple, certify, orbit
from qcrank.qseries import (
    ZZ,
    Cyclotomic,
    EtaQuotientSpec,
    QSeries,
    eta_product,
    euler_power,
    series_inv,
    twisted_pair_product,
)

DEFAULT_DIRECT_BOUND = 30
REDUCTION_PRECISION = 200


@dataclass(frozen=True)
class CrankProductSpec:
    t: int
    tcore_power: int
    twists: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.tcore_power + 2 * len(self.twists) != self.t:
            raise ValueError(f"product for t={self.t} does not specialise to the t-core product")


SPECS = {
    5: CrankProductSpec(5, 1, (2, 4)),
    7: CrankProductSpec(7, 3, (2, 4)),
    11: CrankProductSpec(11, 3, (2, 4, 8, 10)),
    17: CrankProductSpec(17, 5, (2, 4, 8, 10, 14, 16)),
    19: CrankProductSpec(19, 7, (2, 4, 8, 10, 14, 16)),
}

# Residues beta with [q^{3tn + beta}] C_t divisible by Phi_3.
THEOREM_BETAS = {
    5: frozenset({6, 10, 12, 13}),
    7: frozenset({8, 11, 17}),
    11: frozenset({11, 20, 26, 29, 32}),
    17: frozenset({14, 20, 23, 26, 35, 38, 41, 47}),
    19: frozenset({14, 17, 26, 35, 38, 41, 44, 50, 56}),
}

# Level N and auxiliary vector a (divisor order of N) used to certify each t.
CERT_DATA = {
    5: (45, (2, 0, 0, 0, 0, 0)),
    7: (42, (2, 0, 0, 0, 0, 0, 0, 0)),
    11: (33, (4, 0, 0, 0)),
    17: (51, (6, 0, 0, 0)),
    19: (57, (6, 0, 0, 0)),
}

# t = 5 tuple with r_t = +1 (sign of the t = 1 mod 3 reduction); kept as a regression only.
ALT_T5_TUPLE = RaduTuple.make(15, 15, 45, (2, -1, 1, 0), 6)


def _spec(t: int) -> CrankProductSpec:
    try:
        return SPECS[t]
    except KeyError:
        raise ValueError(f"no crank product is known for t={t}; supported: {sorted(SPECS)}") from None


def _twisted_pairs(ring, k: int, stride: int, precision: int) -> QSeries:
    if ring == ZZ:
        return euler_power(stride, 2, precision)
    return twisted_pair_product(k, stride, ring.ell, precision)


def build_crank_gf(ell: int, precision: int) -> QSeries:
    """prod (1-q^n) / ((1-zeta q^n)(1-zeta^-1 q^n)) over Z[zeta]/Phi_l."""
    if not is_prime(ell):
        raise ValueError(f"cyclotomic order must be prime, got {ell}")
    ring = Cyclotomic(ell)
    num = euler_power(1, 1, precision).promote(ring)
    return num * series_inv(twisted_pair_product(1, 1, ell, precision))


def build_tcore_gf(t: int, precision: int) -> QSeries:
    """prod (1-q^{tn})^t / (1-q^n) over the integers."""
    if t < 2:
        raise ValueError("t must be at least 2")
    r = {d: 0 for d in divisors(t)}
    r[1] -= 1
    r[t] += t
    return eta_product(EtaQuotientSpec(t, r), precision)


def build_product(spec: CrankProductSpec, ring, precision: int) -> QSeries:
    """Expand ``spec`` over ``ring``; over ZZ every zeta power becomes 1."""
    t = spec.t
    untwisted = eta_product(EtaQuotientSpec(t, {1: 1, t: spec.tcore_power}), precision)
    num = untwisted.promote(ring)
    for k in spec.twists:
        num = num * _twisted_pairs(ring, k, t, precision)
    return num * series_inv(_twisted_pairs(ring, 1, 1, precision))


def build_Ct(t: int, precision: int) -> QSeries:
    """C_t over Z[zeta]/Phi_3."""
    return build_product(_spec(t), Cyclotomic(3), precision)


def build_Ct_at_one(t: int, precision: int) -> QSeries:
    """The same product with zeta = 1, rebuilt over the integers."""
    return build_product(_spec(t), ZZ, precision)


# -- reduction modulo Phi_3 -------------------------------------------------


@dataclass(frozen=True)
class ReductionResult:
    t: int
    spec: EtaQuotientSpec
    j: int
    verified_to: int


class ReductionError(AssertionError):
    pass


def stated_reduction(t: int) -> EtaQuotientSpec:
    """(1-q^n)^2 (1-q^{tn})^{+-1} / (1-q^{3n}), sign + when t = 1 mod 3."""
    M = 3 * t
    r = {d: 0 for d in divisors(M)}
    r[1], r[3] = 2, -1
    r[t] = 1 if t % 3 == 1 else -1
    return EtaQuotientSpec(M, r)


def reduce_mod_phi3(t: int, verify_to: int = REDUCTION_PRECISION) -> ReductionResult:
    """Collapse C_t modulo Phi_3 and check the identity coefficientwise.

    With zeta a primitive cube root of unity, a twisted pair with k = 0 mod 3
    is (1-x)^2 and any other pair is 1 + x + x^2 = (1-x^3)/(1-x), with
    x = q^{tn}.  The denominator pair is (1-q^{3n})/(1-q^n).
    """
    spec = _spec(t)
    if t % 3 == 0:
        raise ValueError("t must be prime to 3")
    j = sum(1 for k in spec.twists if k % 3)
    untwisted = len(spec.twists) - j
    r = {d: 0 for d in divisors(3 * t)}
    r[1] = 2
    r[3] = -1
    r[t] = spec.tcore_power - j + 2 * untwisted
    derived = EtaQuotientSpec(3 * t, r)
    if derived != stated_reduction(t):
        raise ReductionError(f"t={t}: derived exponents {derived.vector()} differ from {stated_reduction(t).vector()}")

    ring = Cyclotomic(3)
    expected = (eta_product(derived, verify_to) * euler_power(3 * t, j, verify_to)).promote(ring)
    actual = build_Ct(t, verify_to)
    for n in range(verify_to):
        if actual[n] != expected[n]:
            raise ReductionError(f"t={t}: reduction fails at q^{n}: {actual[n]} != {expected[n]}")
    return ReductionResult(t, derived, j, verify_to)


# -- verification ------------------------------------------------------------


def certification_tuples(t: int, reduced: EtaQuotientSpec | None = None) -> list[RaduTuple]:
    """One tuple per orbit needed to cover the listed residues, smallest seed first."""
    reduced = reduced or stated_reduction(t)
    N, _ = CERT_DATA[t]
    alpha = 3 * t
    covered: set[int] = set()
    tuples = []
    for beta in sorted(THEOREM_BETAS[t]):
        if beta in covered:
            continue
        tup = RaduTuple(alpha, alpha, N, reduced, beta)
        covered |= orbit(tup)
        tuples.append(tup)
    return tuples


def a_vector(t: int) -> EtaQuotientSpec:
    N, a = CERT_DATA[t]
    return EtaQuotientSpec.from_vector(N, a)


def direct_vanishing(t: int, n_max: int, betas=None) -> dict[int, int | None]:
    """For each beta, the first n <= n_max with a non-zero image of [q^{3tn+beta}] C_t, or None."""
    alpha = 3 * t
    betas = range(alpha) if betas is None else sorted(betas)
    series = build_Ct(t, alpha * (n_max + 1))
    return {b: next((n for n in range(n_max + 1) if not series.is_zero_at(alpha * n + b)), None) for b in betas}


@dataclass(frozen=True)
class ScanResult:
    t: int
    modulus: int
    alpha: int
    n_max: int
    residues: tuple[int, ...]


def scan(t: int, modulus: int, alpha: int, n_max: int) -> ScanResult:
    """Residues beta with p_t(alpha n + beta) = 0 mod ``modulus`` for all n <= n_max."""
    if alpha < 1 or modulus < 2:
        raise ValueError("need alpha >= 1 and modulus >= 2")
    f = build_tcore_gf(t, alpha * (n_max + 1))
    hits = tuple(b for b in range(alpha) if all(f[alpha * n + b] % modulus == 0 for n in range(n_max + 1)))
    return ScanResult(t, modulus, alpha, n_max, hits)


@dataclass
class VerificationReport:
    t: int
    theorem_betas: frozenset[int]
    reduction: ReductionResult
    certificates: list[Certificate]
    certified: frozenset[int]
    direct_check_bound: int
    first_nonzero: dict[int, int | None]
    scan: ScanResult
    explained: frozenset[int] = field(init=False)
    unexplained_vanishing: frozenset[int] = field(init=False)
    theorem_match: bool = field(init=False)

    def __post_init__(self) -> None:
        direct = frozenset(b for b, n in self.first_nonzero.items() if n is None)
        self.explained = direct
        self.unexplained_vanishing = frozenset(self.scan.residues) - direct
        self.theorem_match = (
            direct == self.theorem_betas
            and self.certified >= self.theorem_betas
            and all(c.proven for c in self.certificates)
        )

    def to_json(self) -> dict:
        return {
            "t": str(self.t),
            "explained": [str(b) for b in sorted(self.explained)],
            "unexplained_vanishing": [str(b) for b in sorted(self.unexplained_vanishing)],
            "certified": [str(b) for b in sorted(self.certified)],
            "reduction": {
                "r": [str(x) for x in self.reduction.spec.vector()],
                "j": str(self.reduction.j),
                "verified_to": str(self.reduction.verified_to),
            },
            "certificates": [c.to_json() for c in self.certificates],
            "direct_check_bound": str(self.direct_check_bound),
            "theorem_match": self.theorem_match,
        }


def verify_theorem(t: int, n_max_direct: int = DEFAULT_DIRECT_BOUND) -> VerificationReport:
    """Reduce, certify every orbit, and classify all residues by direct expansion."""
    reduction = reduce_mod_phi3(t)
    a = a_vector(t)
    certs = [certify(tup, a) for tup in certification_tuples(t, reduction.spec)]
    certified = frozenset(b for c in certs if c.proven for b in c.orbit)
    first = direct_vanishing(t, n_max_direct)
    return VerificationReport(
        t=t,
        theorem_betas=THEOREM_BETAS[t],
        reduction=reduction,
        certificates=certs,
        certified=certified,
        direct_check_bound=n_max_direct,
        first_nonzero=first,
        scan=scan(t, 3, 3 * t, n_max_direct),
    )


def verify_all(ts=None, n_max_direct: int = DEFAULT_DIRECT_BOUND, jobs: int = 1) -> list[VerificationReport]:
    ts = sorted(SPECS) if ts is None else list(ts)
    if jobs <= 1:
        return [verify_theorem(t, n_max_direct) for t in ts]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(verify_theorem, ts, [n_max_direct] * len(ts)))
