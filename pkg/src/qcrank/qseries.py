"""Truncated power series in q over Z or Z[zeta]/Phi_l.

Coefficients live in a numpy object array of shape ``(precision, width)`` of
Python ints: width 1 for the integers and ``l - 1`` for the cyclotomic ring.
Products of binomial factors ``(1 - u q^d)`` are built by shifted
subtraction, which costs O(T) per factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from qcrank.arith import divisors, is_prime
from qcrank.cyclotomic import CycElem, reduce_vector


class Integers:
    width = 1
    name = "ZZ"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Integers)

    def __hash__(self) -> int:
        return hash("ZZ")

    def __repr__(self) -> str:
        return "ZZ"

    def to_row(self, x: int) -> list[int]:
        if isinstance(x, CycElem):
            raise TypeError("cannot place a cyclotomic element in an integer series")
        return [int(x)]

    def from_row(self, row: Sequence[int]) -> int:
        return int(row[0])

    def one(self) -> int:
        return 1

    def mul_matrix(self, x: int) -> np.ndarray:
        return np.array([[int(x)]], dtype=object)

    def reduce_columns(self, buf: np.ndarray) -> np.ndarray:
        return buf

    def inverse(self, x: int) -> int:
        if x not in (1, -1):
            raise ZeroDivisionError(f"{x} is not a unit of ZZ")
        return x


class Cyclotomic:
    """Z[zeta]/Phi_l(zeta) with l prime."""

    def __init__(self, ell: int) -> None:
        if not is_prime(ell):
            raise ValueError(f"cyclotomic order must be prime, got {ell}")
        self.ell = ell
        self.width = ell - 1
        self.name = f"QQ(zeta_{ell})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Cyclotomic) and other.ell == self.ell

    def __hash__(self) -> int:
        return hash(("cyc", self.ell))

    def __repr__(self) -> str:
        return f"Cyclotomic({self.ell})"

    def to_row(self, x: CycElem | int) -> list[int]:
        if isinstance(x, CycElem):
            if x.order != self.ell:
                raise ValueError("cyclotomic order mismatch")
            return list(x.coeffs)
        return list(CycElem.from_int(self.ell, int(x)).coeffs)

    def from_row(self, row: Sequence[int]) -> CycElem:
        return CycElem(self.ell, tuple(int(c) for c in row))

    def one(self) -> CycElem:
        return CycElem.from_int(self.ell, 1)

    def mul_matrix(self, x: CycElem | int) -> np.ndarray:
        """Matrix ``m`` with ``row @ m`` equal to the coefficient row of ``row * x``."""
        x = self.from_row(self.to_row(x))
        rows = [(CycElem.zeta_power(self.ell, i) * x).coeffs for i in range(self.width)]
        return np.array(rows, dtype=object)

    def reduce_columns(self, buf: np.ndarray) -> np.ndarray:
        """Reduce a ``(T, k)`` block of zeta-power columns to width ``l - 1``."""
        ell = self.ell
        folded = np.zeros((buf.shape[0], ell), dtype=object)
        for k in range(buf.shape[1]):
            folded[:, k % ell] += buf[:, k]
        return folded[:, : ell - 1] - folded[:, ell - 1 : ell]

    def inverse(self, x: CycElem) -> CycElem:
        return self.from_row(self.to_row(x)).inverse()


ZZ = Integers()


def _zeros(precision: int, width: int) -> np.ndarray:
    return np.zeros((precision, width), dtype=object)


class QSeries:
    """Immutable truncated series sum_{n < precision} c_n q^n."""

    __slots__ = ("ring", "_c")

    def __init__(self, ring, coeffs: np.ndarray) -> None:
        coeffs = np.asarray(coeffs, dtype=object)
        if coeffs.ndim != 2 or coeffs.shape[1] != ring.width or coeffs.shape[0] < 1:
            raise ValueError(f"coefficient block of shape {coeffs.shape} does not fit {ring!r}")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        self.ring = ring
        self._c = coeffs

    # construction

    @classmethod
    def from_list(cls, values: Iterable, ring=ZZ, precision: int | None = None) -> QSeries:
        values = list(values)
        if precision is None:
            precision = len(values)
        if precision < 1:
            raise ValueError("precision must be positive")
        block = _zeros(precision, ring.width)
        for n, v in enumerate(values[:precision]):
            block[n, :] = ring.to_row(v)
        return cls(ring, block)

    @classmethod
    def one(cls, precision: int, ring=ZZ) -> QSeries:
        return cls.from_list([ring.one()], ring, precision)

    @classmethod
    def monomial(cls, exponent: int, precision: int, coeff=1, ring=ZZ) -> QSeries:
        block = _zeros(precision, ring.width)
        if exponent < precision:
            block[exponent, :] = ring.to_row(coeff)
        return cls(ring, block)

    # access

    @property
    def precision(self) -> int:
        return self._c.shape[0]

    @property
    def block(self) -> np.ndarray:
        return self._c

    def __len__(self) -> int:
        return self.precision

    def __getitem__(self, n: int):
        if not 0 <= n < self.precision:
            raise IndexError(f"q^{n} is outside precision {self.precision}")
        return self.ring.from_row(self._c[n])

    def coefficients(self) -> list:
        return [self[n] for n in range(self.precision)]

    def is_zero_at(self, n: int) -> bool:
        return not any(self._c[n])

    def is_zero(self) -> bool:
        return not any(any(row) for row in self._c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.precision == other.precision
            and bool(np.all(self._c == other._c))
        )

    def __hash__(self) -> int:
        return hash((self.ring, tuple(map(tuple, self._c))))

    def __repr__(self) -> str:
        head = ", ".join(str(self[n]) for n in range(min(self.precision, 8)))
        more = ", ..." if self.precision > 8 else ""
        return f"QSeries({self.ring!r}, [{head}{more}] + O(q^{self.precision}))"

    # arithmetic

    def _aligned(self, other: QSeries) -> tuple[np.ndarray, np.ndarray]:
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
        t = min(self.precision, other.precision)
        return self._c[:t], other._c[:t]

    def __add__(self, other: QSeries) -> QSeries:
        a, b = self._aligned(other)
        return QSeries(self.ring, a + b)

    def __sub__(self, other: QSeries) -> QSeries:
        a, b = self._aligned(other)
        return QSeries(self.ring, a - b)

    def __neg__(self) -> QSeries:
        return QSeries(self.ring, -self._c)

    def __mul__(self, other: QSeries) -> QSeries:
        return series_mul(self, other)

    def scale(self, x) -> QSeries:
        return QSeries(self.ring, self._c.dot(self.ring.mul_matrix(x)))

    def truncate(self, precision: int) -> QSeries:
        if not 1 <= precision <= self.precision:
            raise ValueError(f"cannot truncate precision {self.precision} to {precision}")
        return QSeries(self.ring, self._c[:precision])

    def inverse(self) -> QSeries:
        return series_inv(self)

    def promote(self, ring) -> QSeries:
        """Map an integer series into ``ring`` through Z -> ring."""
        if self.ring == ring:
            return self
        if self.ring != ZZ:
            raise ValueError(f"cannot promote {self.ring!r} to {ring!r}")
        block = _zeros(self.precision, ring.width)
        block[:, 0] = self._c[:, 0]
        return QSeries(ring, block)

    def times_binomial(self, u, d: int) -> QSeries:
        """Multiply by ``(1 - u q^d)``; ``u`` is a ring element, ``d >= 1``."""
        if d < 1:
            raise ValueError("binomial stride must be positive")
        t = self.precision
        if d >= t:
            return self
        out = self._c.copy()
        out[d:] -= self._c[: t - d].dot(self.ring.mul_matrix(u))
        return QSeries(self.ring, out)

    def to_json(self) -> list:
        if self.ring == ZZ:
            return [str(self[n]) for n in range(self.precision)]
        return [self[n].to_json() for n in range(self.precision)]


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    """Truncated Cauchy product; precision is the smaller of the two."""
    x, y = a._aligned(b)
    t = x.shape[0]
    ring = a.ring
    w = ring.width
    buf = _zeros(t, 2 * w - 1)
    for i in range(w):
        if not any(x[:, i]):
            continue
        for j in range(w):
            if not any(y[:, j]):
                continue
            buf[:, i + j] += np.convolve(x[:, i], y[:, j])[:t]
    return QSeries(ring, ring.reduce_columns(buf))


def series_inv(a: QSeries) -> QSeries:
    """Inverse of a series whose constant term is a unit of the ring."""
    ring = a.ring
    try:
        head_inv = ring.inverse(a[0])
    except ZeroDivisionError as exc:
        raise ZeroDivisionError(f"constant term {a[0]} is not a unit: {exc}") from None
    t, w = a.precision, ring.width
    h = ring.mul_matrix(head_inv)
    f = a.block
    # Coordinates of zeta^(i+j) products, reduced per (i, j) once.
    pair = {(i, j): ring.reduce_columns(_unit_column(i + j, 2 * w - 1))[0] for i in range(w) for j in range(w)}
    g = _zeros(t, w)
    g[0] = np.array(ring.to_row(head_inv), dtype=object)
    for n in range(1, t):
        acc = np.zeros(w, dtype=object)
        tail = f[1 : n + 1]
        prev = g[:n][::-1]
        for i in range(w):
            col = tail[:, i]
            if not any(col):
                continue
            for j in range(w):
                s = col.dot(prev[:, j])
                if s:
                    acc = acc + s * pair[(i, j)]
        g[n] = -(acc.dot(h))
    return QSeries(ring, g)


def _unit_column(k: int, width: int) -> np.ndarray:
    v = np.zeros((1, width), dtype=object)
    v[0, k] = 1
    return v


@dataclass(frozen=True)
class EtaQuotientSpec:
    """Exponents r_delta for prod_{delta | M} prod_{n >= 1} (1 - q^{delta n})^{r_delta}."""

    M: int
    r: Mapping[int, int]

    def __post_init__(self) -> None:
        if self.M < 1:
            raise ValueError("M must be positive")
        r = {int(k): int(v) for k, v in self.r.items()}
        if set(r) != set(divisors(self.M)):
            raise ValueError(f"exponents must be indexed by the divisors of {self.M}: {sorted(r)}")
        object.__setattr__(self, "r", dict(sorted(r.items())))

    @classmethod
    def from_vector(cls, M: int, values: Sequence[int]) -> EtaQuotientSpec:
        """Exponents listed in increasing divisor order, e.g. ``(2, -1, 1, 0)`` for M = 21."""
        ds = divisors(M)
        if len(values) != len(ds):
            raise ValueError(f"M={M} has {len(ds)} divisors, got {len(values)} exponents")
        return cls(M, dict(zip(ds, values)))

    def vector(self) -> tuple[int, ...]:
        return tuple(self.r[d] for d in divisors(self.M))

    def __hash__(self) -> int:
        return hash((self.M, self.vector()))

    def weighted_sum(self) -> int:
        """sum_delta delta * r_delta."""
        return sum(d * e for d, e in self.r.items())

    def total(self) -> int:
        return sum(self.r.values())


def binomial_product(ring, precision: int, factors: Iterable[tuple[object, int]]) -> QSeries:
    """prod (1 - u q^d) over the given ``(u, d)`` pairs, truncated."""
    f = QSeries.one(precision, ring)
    for u, d in factors:
        if d < precision:
            f = f.times_binomial(u, d)
    return f


def euler_power(stride: int, power: int, precision: int, ring=ZZ) -> QSeries:
    """prod_{n >= 1} (1 - q^{stride n})^power; negative powers go through ``series_inv``."""
    one = ring.one()
    pos = binomial_product(
        ring, precision, ((one, stride * n) for n in range(1, precision // stride + 1) for _ in range(abs(power)))
    )
    return series_inv(pos) if power < 0 else pos


def eta_product(spec: EtaQuotientSpec, precision: int) -> QSeries:
    """Integer expansion of the eta-quotient described by ``spec``."""
    if precision < 1:
        raise ValueError("precision must be positive")
    num: list[tuple[int, int]] = []
    den: list[tuple[int, int]] = []
    for d, e in spec.r.items():
        bucket = num if e > 0 else den
        bucket.extend((1, d * n) for n in range(1, precision // d + 1) for _ in range(abs(e)))
    f = binomial_product(ZZ, precision, num)
    if den:
        f = f * series_inv(binomial_product(ZZ, precision, den))
    return f


def twisted_pair_product(k: int, stride: int, ell: int, precision: int) -> QSeries:
    """prod_{n >= 1} (1 - zeta^k q^{stride n})(1 - zeta^-k q^{stride n}) over Z[zeta]/Phi_l."""
    if precision < 1 or stride < 1:
        raise ValueError("precision and stride must be positive")
    ring = Cyclotomic(ell)
    up, down = CycElem.zeta_power(ell, k), CycElem.zeta_power(ell, -k)
    return binomial_product(
        ring,
        precision,
        ((u, stride * n) for n in range(1, precision // stride + 1) for u in (up, down)),
    )


def slice_progression(f: QSeries, alpha: int, beta: int) -> QSeries:
    """g[n] = f[alpha n + beta] for every index inside the precision of ``f``."""
    if alpha < 1 or not 0 <= beta < alpha:
        raise ValueError(f"need 0 <= beta < alpha, got alpha={alpha}, beta={beta}")
    if beta >= f.precision:
        raise ValueError(f"residue {beta} lies beyond precision {f.precision}")
    return QSeries(f.ring, f.block[beta::alpha])
