"""Exact scalar arithmetic in zeta.

``LaurentPoly`` holds finitely supported integer polynomials in zeta and
zeta^-1.  ``CycElem`` is an element of Z[zeta]/Phi_l(zeta) for a prime l,
stored in the basis 1, zeta, ..., zeta^(l-2).  A Laurent polynomial is
divisible by Phi_l exactly when its projection is the zero ``CycElem``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from qcrank.arith import is_prime

# p_a, p_a^* and nu are rationals with small denominators; Fraction is exact.
ExactRational = Fraction


def rational_str(x: Fraction) -> str:
    """Serialise as ``"num/den"`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _check_prime(ell: int) -> None:
    if not isinstance(ell, int) or not is_prime(ell):
        raise ValueError(f"cyclotomic order must be prime, got {ell!r}")


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial in zeta; ``coeffs`` maps exponent to coefficient."""

    coeffs: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {int(k): int(v) for k, v in self.coeffs.items() if v}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> LaurentPoly:
        return cls({exponent: coeff})

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int]]) -> LaurentPoly:
        acc: dict[int, int] = {}
        for k, v in terms:
            acc[k] = acc.get(k, 0) + v
        return cls(acc)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        return LaurentPoly.from_terms([*self.coeffs.items(), *other.coeffs.items()])

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: LaurentPoly) -> LaurentPoly:
        return self + (-other)

    def __mul__(self, other: LaurentPoly) -> LaurentPoly:
        return LaurentPoly.from_terms(
            (i + j, a * b) for i, a in self.coeffs.items() for j, b in other.coeffs.items()
        )

    def evaluate_at_one(self) -> int:
        return sum(self.coeffs.values())

    def __repr__(self) -> str:
        if not self.coeffs:
            return "LaurentPoly(0)"
        terms = " + ".join(f"{v}*z^{k}" for k, v in self.coeffs.items())
        return f"LaurentPoly({terms})"


def cyclotomic_poly(ell: int) -> LaurentPoly:
    """Phi_l(zeta) = 1 + zeta + ... + zeta^(l-1) for prime l."""
    _check_prime(ell)
    return LaurentPoly({k: 1 for k in range(ell)})


def reduce_vector(ell: int, raw: Iterable[int]) -> tuple[int, ...]:
    """Reduce coefficients of 1, zeta, zeta^2, ... (any length) into Z[zeta]/Phi_l."""
    folded = [0] * ell
    for k, v in enumerate(raw):
        folded[k % ell] += v
    top = folded[ell - 1]
    return tuple(c - top for c in folded[: ell - 1])


@dataclass(frozen=True)
class CycElem:
    """Element of Z[zeta]/Phi_l(zeta), l prime."""

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_prime(self.order)
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.order - 1:
            coeffs = reduce_vector(self.order, coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, ell: int) -> CycElem:
        return cls(ell, (0,) * (ell - 1))

    @classmethod
    def from_int(cls, ell: int, n: int) -> CycElem:
        return cls(ell, (n,) + (0,) * (ell - 2))

    @classmethod
    def zeta_power(cls, ell: int, k: int) -> CycElem:
        raw = [0] * ell
        raw[k % ell] = 1
        return cls(ell, reduce_vector(ell, raw))

    def _check(self, other: CycElem) -> None:
        if not isinstance(other, CycElem) or other.order != self.order:
            raise ValueError("cyclotomic order mismatch")

    def __add__(self, other: CycElem) -> CycElem:
        self._check(other)
        return CycElem(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: CycElem) -> CycElem:
        self._check(other)
        return CycElem(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CycElem:
        return CycElem(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other: CycElem | int) -> CycElem:
        if isinstance(other, int):
            return CycElem(self.order, tuple(a * other for a in self.coeffs))
        return cyc_mul(self, other)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def as_integer(self) -> int | None:
        """The integer this element equals, or None if it is not in Z."""
        if any(self.coeffs[1:]):
            return None
        return self.coeffs[0]

    def inverse(self) -> CycElem:
        """Multiplicative inverse; raises ``ZeroDivisionError`` unless a unit of Z[zeta]."""
        ell = self.order
        w = ell - 1
        # Row i of the system holds self * zeta^i; solve y . rows = e_0 over Q.
        rows = [list(cyc_mul(self, CycElem.zeta_power(ell, i)).coeffs) for i in range(w)]
        aug = [[Fraction(rows[i][j]) for i in range(w)] + [Fraction(int(j == 0))] for j in range(w)]
        for col in range(w):
            pivot = next((r for r in range(col, w) if aug[r][col] != 0), None)
            if pivot is None:
                raise ZeroDivisionError(f"{self} is not invertible")
            aug[col], aug[pivot] = aug[pivot], aug[col]
            pv = aug[col][col]
            aug[col] = [x / pv for x in aug[col]]
            for r in range(w):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        sol = [aug[r][w] for r in range(w)]
        if any(x.denominator != 1 for x in sol):
            raise ZeroDivisionError(f"{self} is not a unit of Z[zeta]/Phi_{ell}")
        return CycElem(ell, tuple(int(x) for x in sol))

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)


def cyc_project(p: LaurentPoly, ell: int) -> CycElem:
    """Image of ``p`` in Z[zeta]/Phi_l; zero iff Phi_l divides ``p``."""
    _check_prime(ell)
    raw = [0] * ell
    for k, v in p.coeffs.items():
        raw[k % ell] += v
    return CycElem(ell, reduce_vector(ell, raw))


def cyc_mul(a: CycElem, b: CycElem) -> CycElem:
    a._check(b)
    ell = a.order
    raw = [0] * (2 * ell - 3)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                raw[i + j] += x * y
    return CycElem(ell, reduce_vector(ell, raw))


def cyc_is_zero(a: CycElem) -> bool:
    return a.is_zero()
