"""Radu's lemma, specialised to proving that a progression of an eta-quotient vanishes.

Given ``(alpha, M, N, r, beta)`` and an auxiliary exponent vector ``a`` over
the divisors of N, the lemma reduces the statement

    a(alpha n + beta') = 0 for all n >= 0 and all beta' in P_{alpha,r}(beta)

to a finite check of the coefficients with ``n <= floor(nu)``, provided the
tuple is admissible (the seven arithmetic conditions) and the order bound
``p_lower + p_star`` is non-negative at a full set of double-coset
representatives for Gamma_0(N) \\ SL2(Z) / Gamma_inf.

All arithmetic is exact (ints and Fractions).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd
from typing import Sequence

from qcrank.arith import divisors, is_squarefree, prime_factors, totient, units
from qcrank.cyclotomic import rational_str
from qcrank.qseries import EtaQuotientSpec, eta_product

# An auxiliary vector (a_delta) in R(N) has the same shape as an eta-quotient exponent vector.
AVector = EtaQuotientSpec


@dataclass(frozen=True)
class RaduTuple:
    alpha: int
    M: int
    N: int
    r: EtaQuotientSpec
    beta: int

    def __post_init__(self) -> None:
        if min(self.alpha, self.M, self.N) < 1:
            raise ValueError("alpha, M and N must be positive")
        if self.r.M != self.M:
            raise ValueError(f"exponents are indexed by divisors of {self.r.M}, expected {self.M}")
        if not 0 <= self.beta < self.alpha:
            raise ValueError(f"beta={self.beta} is not a residue mod {self.alpha}")

    @classmethod
    def make(cls, alpha: int, M: int, N: int, r: Sequence[int], beta: int) -> RaduTuple:
        return cls(alpha, M, N, EtaQuotientSpec.from_vector(M, r), beta)

    def with_beta(self, beta: int) -> RaduTuple:
        return RaduTuple(self.alpha, self.M, self.N, self.r, beta)

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "M": str(self.M),
            "N": str(self.N),
            "r": [str(x) for x in self.r.vector()],
            "beta": str(self.beta),
        }


@dataclass(frozen=True)
class CosetRep:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.as_list()} is not 1")

    def as_list(self) -> list[int]:
        return [self.a, self.b, self.c, self.d]

    def __matmul__(self, other: CosetRep) -> CosetRep:
        return CosetRep(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> CosetRep:
        return CosetRep(self.d, -self.b, -self.c, self.a)

    def cusp(self) -> tuple[int, int]:
        """The image of infinity, as a reduced pair (numerator, denominator)."""
        return self.a, self.c

    def normalized(self, N: int) -> CosetRep:
        """Same double coset, with lower-left entry c >= 1."""
        g = self
        if g.c == 0:
            g = CosetRep(1, 0, N, 1) @ g
        if g.c < 0:
            g = CosetRep(-g.a, -g.b, -g.c, -g.d)
        return g


def translation(k: int) -> CosetRep:
    return CosetRep(1, k, 0, 1)


# -- arithmetic invariants -------------------------------------------------


def kappa(alpha: int) -> int:
    if alpha < 1:
        raise ValueError("alpha must be positive")
    return gcd(alpha * alpha - 1, 24)


def pi_decomp(spec: EtaQuotientSpec) -> tuple[int, int]:
    """``(s, j)`` with prod delta^|r_delta| = 2^s * j and j odd."""
    prod = 1
    for d, e in spec.r.items():
        prod *= d ** abs(e)
    s = 0
    while prod % 2 == 0:
        prod //= 2
        s += 1
    return s, prod


def squares_set(modulus: int) -> set[int]:
    """Squares of the units modulo ``modulus``."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    return {x * x % modulus for x in units(modulus)}


def odot(s: int, beta: int, tup: RaduTuple) -> int:
    """The square class ``s`` acting on the residue ``beta``."""
    s %= 24 * tup.alpha
    if (s - 1) % 24:
        raise ValueError(f"{s} is not congruent to 1 mod 24")
    return (beta * s + (s - 1) // 24 * tup.r.weighted_sum()) % tup.alpha


def orbit(tup: RaduTuple) -> frozenset[int]:
    return frozenset(odot(s, tup.beta, tup) for s in squares_set(24 * tup.alpha))


def delta_star_check(tup: RaduTuple) -> list[int]:
    """Numbers of the admissibility conditions that fail; empty means admissible."""
    alpha, N = tup.alpha, tup.N
    k = kappa(alpha)
    r = tup.r.r
    failed = []
    if not (alpha > 0 and tup.M > 0 and N > 0 and 0 <= tup.beta < alpha):
        failed.append(1)
    if any(N % p for p in prime_factors(alpha)):
        failed.append(2)
    if any(e and (alpha * N) % d for d, e in r.items()):
        failed.append(3)
    # r_delta * alpha N / delta may be fractional when condition 3 fails; keep it exact.
    weighted = sum(Fraction(e * alpha * N, d) for d, e in r.items())
    if (k * N * weighted) % 24:
        failed.append(4)
    if (k * N * tup.r.total()) % 8:
        failed.append(5)
    shift = k * (-24 * tup.beta - tup.r.weighted_sum())
    if N % (24 * alpha // gcd(shift, 24 * alpha)):
        failed.append(6)
    if alpha % 2 == 0:
        s, j = pi_decomp(tup.r)
        if not ((k * N % 4 == 0 and s * N % 8 == 0) or (s % 2 == 0 and N * (1 - j) % 8 == 0)):
            failed.append(7)
    return failed


# -- Gamma_0(N) --------------------------------------------------------------


def index_gamma0(N: int) -> int:
    """[SL2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)."""
    if N < 1:
        raise ValueError("N must be positive")
    idx = N
    for p in prime_factors(N):
        idx = idx // p * (p + 1)
    return idx


def wang_applies(N: int) -> bool:
    return is_squarefree(N) or (N % 2 == 0 and is_squarefree(N // 2))


def cusp_reps(N: int) -> list[CosetRep]:
    """One matrix per cusp a/c of Gamma_0(N): c | N, a running over units mod gcd(c, N/c)."""
    reps = []
    for c in divisors(N):
        g = gcd(c, N // c)
        for a0 in units(g):
            a = a0
            while gcd(a, c) != 1:
                a += g
            d = pow(a, -1, c) if c > 1 else 0
            reps.append(CosetRep(a, (a * d - 1) // c, c, d))
    return reps


def coset_reps(N: int) -> list[CosetRep]:
    """Representatives of Gamma_0(N) \\ SL2(Z) / Gamma_inf with c >= 1."""
    if wang_applies(N):
        return [CosetRep(1, 0, d, 1) for d in divisors(N)]
    return cusp_reps(N)


def same_double_coset(g1: CosetRep, g2: CosetRep, N: int) -> bool:
    """Whether g1 lies in Gamma_0(N) g2 Gamma_inf.

    Equivalent to N dividing the lower-left entry of g1 T^k g2^-1 for some k,
    and that entry is affine in k, so k mod N suffices.
    """
    return any((g1.c * g2.d - (g1.c * k + g1.d) * g2.c) % N == 0 for k in range(N))


def count_cusps(N: int) -> int:
    return sum(totient(gcd(c, N // c)) for c in divisors(N))


# -- order bounds ----------------------------------------------------------


def p_lower(g: CosetRep, tup: RaduTuple) -> Fraction:
    """min over lambda in 0..alpha-1 of (1/24) sum r_delta gcd^2(delta(a + kappa lambda c), alpha c) / (delta alpha)."""
    if g.c == 0:
        raise ValueError("normalise the representative first (c must be non-zero)")
    alpha = tup.alpha
    k = kappa(alpha)
    best = None
    for lam in range(alpha):
        shifted = g.a + k * lam * g.c
        total = sum(
            Fraction(e * gcd(d * shifted, alpha * g.c) ** 2, d * alpha) for d, e in tup.r.r.items() if e
        )
        if best is None or total < best:
            best = total
    return best / 24


def p_star(g: CosetRep, a: AVector) -> Fraction:
    """(1/24) sum_{delta | N} a_delta gcd^2(delta, c) / delta."""
    if g.c == 0:
        raise ValueError("normalise the representative first (c must be non-zero)")
    return sum((Fraction(e * gcd(d, g.c) ** 2, d) for d, e in a.r.items() if e), Fraction(0)) / 24


def nu_bound(tup: RaduTuple, a: AVector, orb: frozenset[int] | set[int]) -> Fraction:
    if not orb:
        raise ValueError("orbit must be non-empty")
    if a.M != tup.N:
        raise ValueError(f"auxiliary vector must be indexed by divisors of N={tup.N}")
    idx = index_gamma0(tup.N)
    return (
        Fraction((a.total() + tup.r.total()) * idx - a.weighted_sum(), 24)
        - Fraction(tup.r.weighted_sum(), 24 * tup.alpha)
        - Fraction(min(orb), tup.alpha)
    )


# -- certificate -------------------------------------------------------------


@dataclass
class Certificate:
    tuple: RaduTuple
    a: AVector
    kappa: int
    pi: tuple[int, int]
    orbit: list[int]
    beta_min: int
    reps: list[CosetRep]
    p_values: list[tuple[Fraction, Fraction]]
    nu: Fraction
    nu_floor: int
    failed_conditions: list[int] = field(default_factory=list)
    checked: list[tuple[int, int, int]] = field(default_factory=list)
    verdict: str = "proven"

    @property
    def proven(self) -> bool:
        return self.verdict == "proven"

    def to_json(self) -> dict:
        return {
            "tuple": self.tuple.to_json(),
            "a": [str(x) for x in self.a.vector()],
            "kappa": str(self.kappa),
            "pi": [str(self.pi[0]), str(self.pi[1])],
            "orbit": [str(b) for b in self.orbit],
            "beta_min": str(self.beta_min),
            "reps": [[str(x) for x in g.as_list()] for g in self.reps],
            "p_values": [
                {"rep_index": str(i), "p_lower": rational_str(lo), "p_star": rational_str(st)}
                for i, (lo, st) in enumerate(self.p_values)
            ],
            "nu": rational_str(self.nu),
            "nu_floor": str(self.nu_floor),
            "checked": [{"beta": str(b), "n": str(n), "value": str(v)} for b, n, v in self.checked],
            "verdict": self.verdict,
        }


def certify(tup: RaduTuple, a: AVector) -> Certificate:
    """Run every hypothesis of the lemma and the finite coefficient check."""
    orb = sorted(orbit(tup))
    reps = [g.normalized(tup.N) for g in coset_reps(tup.N)]
    p_values = [(p_lower(g, tup), p_star(g, a)) for g in reps]
    nu = nu_bound(tup, a, orb)
    cert = Certificate(
        tuple=tup,
        a=a,
        kappa=kappa(tup.alpha),
        pi=pi_decomp(tup.r),
        orbit=orb,
        beta_min=orb[0],
        reps=reps,
        p_values=p_values,
        nu=nu,
        nu_floor=floor(nu),
        failed_conditions=delta_star_check(tup),
    )
    reasons = []
    if cert.failed_conditions:
        reasons.append(f"admissibility conditions {cert.failed_conditions} fail")
    for i, (lo, st) in enumerate(p_values):
        if lo + st < 0:
            reasons.append(f"p_lower + p_star = {lo + st} < 0 at representative {i} {reps[i].as_list()}")
            break
    n_top = max(cert.nu_floor, -1)
    series = eta_product(tup.r, tup.alpha * (n_top + 1) + orb[-1] + 1)
    for n in range(n_top + 1):
        for b in orb:
            value = series[tup.alpha * n + b]
            cert.checked.append((b, n, value))
    bad = next(((b, n, v) for b, n, v in cert.checked if v), None)
    if bad is not None:
        b, n, v = bad
        reasons.append(f"coefficient a({tup.alpha}*{n}+{b}) = {v} is non-zero")
    if reasons:
        cert.verdict = "failed: " + "; ".join(reasons)
    return cert


def spot_check(tup: RaduTuple, n_max: int, residues=None) -> tuple[int, int, int] | None:
    """First non-zero a(alpha n + beta') with n <= n_max, or None when all vanish."""
    residues = sorted(orbit(tup) if residues is None else residues)
    series = eta_product(tup.r, tup.alpha * (n_max + 1) + residues[-1] + 1)
    for n in range(n_max + 1):
        for b in residues:
            v = series[tup.alpha * n + b]
            if v:
                return b, n, v
    return None
