import json
import random
from fractions import Fraction
from math import floor, gcd

import pytest
from hypothesis import given, settings, strategies as st

from qcrank.arith import divisors
from qcrank.modular_cert import (
    CosetRep,
    RaduTuple,
    certify,
    coset_reps,
    count_cusps,
    cusp_reps,
    delta_star_check,
    index_gamma0,
    kappa,
    nu_bound,
    odot,
    orbit,
    p_lower,
    p_star,
    pi_decomp,
    same_double_coset,
    spot_check,
    squares_set,
    translation,
    wang_applies,
)
from qcrank.qseries import EtaQuotientSpec

T7 = RaduTuple.make(21, 21, 42, (2, -1, 1, 0), 8)
T11 = RaduTuple.make(33, 33, 33, (2, -1, -1, 0), 11)
T17 = RaduTuple.make(51, 51, 51, (2, -1, -1, 0), 14)
T19 = RaduTuple.make(57, 57, 57, (2, -1, 1, 0), 14)
T5 = RaduTuple.make(15, 15, 45, (2, -1, -1, 0), 6)
T5_ALT = RaduTuple.make(15, 15, 45, (2, -1, 1, 0), 6)


def avec(N, values):
    return EtaQuotientSpec.from_vector(N, values)


def random_gamma0(N, rng):
    """A random element of Gamma_0(N) with bounded entries."""
    while True:
        c = N * rng.randint(-4, 4)
        d = rng.randint(-25, 25)
        if gcd(c, d) != 1:
            continue
        if c == 0:
            return CosetRep(d, rng.randint(-5, 5), 0, d)  # d = +-1
        a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
        b = (a * d - 1) // c
        return CosetRep(a, b, c, d)


def test_kappa():
    assert kappa(1) == 24
    assert kappa(15) == 8
    assert kappa(21) == 8
    assert [kappa(a) for a in (33, 51, 57)] == [gcd(a * a - 1, 24) for a in (33, 51, 57)]


def test_pi_decomp():
    assert pi_decomp(EtaQuotientSpec.from_vector(1, [5])) == (0, 1)
    assert pi_decomp(EtaQuotientSpec.from_vector(21, [2, -1, 1, 0])) == (0, 21)
    assert pi_decomp(EtaQuotientSpec.from_vector(2, [0, 3])) == (3, 1)
    assert pi_decomp(EtaQuotientSpec.from_vector(12, [1, -2, 1, 0, 0, 1])) == (4, 9)  # 1 * 2^2 * 3 * 12 = 144


def test_squares_set():
    assert squares_set(24) == {1}
    assert squares_set(360) == {1, 49, 121, 169, 241, 289}
    for m in (24, 72, 360, 504):
        assert all(gcd(s, m) == 1 and s % 24 == 1 for s in squares_set(m))


def test_odot():
    assert odot(1, 8, T7) == 8
    assert odot(25, 8, T7) == 17
    assert odot(49, 6, T5) == 12
    with pytest.raises(ValueError):
        odot(7, 0, T7)


@pytest.mark.parametrize(
    "tup, expected",
    [
        (T7, {8, 11, 17}),
        (T11, {11, 20, 26, 29, 32}),
        (T17, {14, 20, 23, 26, 35, 38, 41, 47}),
        (T19, {14, 17, 26, 35, 38, 41, 44, 50, 56}),
        (T5, {6, 12}),
        (T5.with_beta(10), {10, 13}),
    ],
)
def test_orbits(tup, expected):
    assert orbit(tup) == expected


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([T5, T7, T11, T17, T19, T5_ALT]), st.data())
def test_orbits_partition_residues(tup, data):
    beta = data.draw(st.integers(0, tup.alpha - 1))
    orb = orbit(tup.with_beta(beta))
    assert beta in orb
    for b in orb:
        assert orbit(tup.with_beta(b)) == orb


def test_delta_star():
    for tup in (T7, T11, T17, T19, T5, T5.with_beta(10)):
        assert delta_star_check(tup) == []
    assert 2 in delta_star_check(RaduTuple.make(15, 15, 44, (2, -1, -1, 0), 6))


def test_condition_seven_only_for_even_alpha():
    # alpha = 2, r = (0, 1): pi = (1, 1), kappa = 3, N = 2 -> both alternatives fail
    tup = RaduTuple.make(2, 2, 2, (0, 1), 1)
    assert 7 in delta_star_check(tup)
    assert 7 not in delta_star_check(RaduTuple.make(3, 2, 3, (0, 1), 1))


def brute_index(N):
    """|P^1(Z/N)| counted from primitive pairs."""
    prim = sum(1 for c in range(N) for d in range(N) if gcd(gcd(c, d), N) == 1)
    units = sum(1 for u in range(N) if gcd(u, N) == 1)
    return prim // units


def test_index():
    assert index_gamma0(1) == 1
    assert index_gamma0(45) == 72
    assert index_gamma0(42) == 96
    for N in range(1, 60):
        assert index_gamma0(N) == brute_index(N)


def test_coset_rep_examples():
    assert [g.as_list() for g in coset_reps(6)] == [[1, 0, d, 1] for d in (1, 2, 3, 6)]
    assert len(coset_reps(42)) == 8
    assert len(coset_reps(45)) == 8 and not wang_applies(45)
    assert all(g.c >= 1 for g in coset_reps(45))


def classes(mats, N):
    reps = []
    for g in mats:
        if not any(same_double_coset(g, h, N) for h in reps):
            reps.append(g)
    return reps


@pytest.mark.parametrize("N", [4, 8, 9, 12, 18, 25, 27, 45, 50])
def test_cusp_count_by_clustering(N):
    mats = [CosetRep(1, 0, 0, 1)]
    for c in range(1, N + 1):
        for a in range(c):
            if gcd(a, c) == 1:
                d = pow(a, -1, c) if c > 1 else 0
                mats.append(CosetRep(a, (a * d - 1) // c, c, d))
    assert len(classes(mats, N)) == count_cusps(N) == len(cusp_reps(N))
    reps = cusp_reps(N)
    assert len(classes(reps, N)) == len(reps)


def test_same_double_coset_under_group_actions():
    rng = random.Random(7)
    for N in (33, 42, 45, 57):
        for g in coset_reps(N):
            for _ in range(10):
                h = random_gamma0(N, rng) @ g @ translation(rng.randint(-20, 20))
                assert same_double_coset(h, g, N)


def direct_p_lower(g, tup):
    values = []
    k = gcd(tup.alpha**2 - 1, 24)
    for lam in range(tup.alpha):
        num = Fraction(0)
        for d, e in tup.r.r.items():
            x = gcd(d * (g.a + k * lam * g.c), tup.alpha * g.c)
            num += Fraction(e) * x * x / d
        values.append(num / (24 * tup.alpha))
    return min(values)


def test_p_lower_examples():
    zero = RaduTuple.make(21, 21, 42, (0, 0, 0, 0), 8)
    assert all(p_lower(g, zero) == 0 for g in coset_reps(42))
    g = CosetRep(1, 0, 1, 1)
    value = p_lower(g, T7)
    assert value == direct_p_lower(g, T7)
    assert p_lower(g @ translation(1), T7) == value
    with pytest.raises(ValueError):
        p_lower(CosetRep(1, 0, 0, 1), T7)


@pytest.mark.parametrize("tup", [T5, T7, T11, T17, T19])
def test_p_lower_matches_direct_and_is_coset_invariant(tup):
    rng = random.Random(tup.alpha)
    for g in coset_reps(tup.N):
        assert p_lower(g, tup) == direct_p_lower(g, tup)
        for _ in range(8):
            h = (random_gamma0(tup.N, rng) @ g @ translation(rng.randint(-9, 9))).normalized(tup.N)
            assert p_lower(h, tup) == p_lower(g, tup)


def test_p_star():
    assert p_star(CosetRep(1, 0, 7, 1), avec(42, [0] * 8)) == 0
    assert p_star(CosetRep(1, 0, 1, 1), avec(42, [2] + [0] * 7)) == Fraction(1, 12)
    a = avec(45, [1, -2, 0, 3, 0, 1])
    rng = random.Random(3)
    for g in coset_reps(45):
        for _ in range(10):
            h = (random_gamma0(45, rng) @ g).normalized(45)
            assert p_star(h, a) == p_star(g, a)


def test_nu_examples():
    assert floor(nu_bound(T7, avec(42, [2] + [0] * 7), orbit(T7))) == 15
    assert floor(nu_bound(T19, avec(57, [6, 0, 0, 0]), orbit(T19))) == 26
    a45 = avec(45, [2, 0, 0, 0, 0, 0])
    assert floor(nu_bound(T5_ALT, a45, {6})) == 11
    assert floor(nu_bound(T5_ALT, a45, orbit(T5_ALT))) == 11
    assert nu_bound(T5, a45, orbit(T5)) == Fraction(142, 24) + Fraction(6, 360) - Fraction(6, 15)
    assert floor(nu_bound(T5, a45, orbit(T5))) == 5


def test_certify_table_rows():
    cert = certify(T11, avec(33, [4, 0, 0, 0]))
    assert cert.proven and cert.nu_floor == 7
    assert len(cert.checked) == 5 * 8
    assert all(v == 0 for _, _, v in cert.checked)
    assert certify(T7, avec(42, [2] + [0] * 7)).proven


def test_certify_reports_tampering():
    bad = RaduTuple.make(21, 21, 42, (2, -1, -1, 0), 8)
    cert = certify(bad, avec(42, [2] + [0] * 7))
    assert not cert.proven
    assert "is non-zero" in cert.verdict
    b, n, v = next((b, n, v) for b, n, v in cert.checked if v)
    assert f"a(21*{n}+{b}) = {v}" in cert.verdict


@pytest.mark.parametrize("N", [6, 10, 15, 21, 30, 33, 42])
def test_cusp_branch_agrees_with_wang(N):
    tup = RaduTuple.make(N, N, N, [1] * len(divisors(N)), 0)
    a = avec(N, list(range(len(divisors(N)))))
    wang, cusp = coset_reps(N), cusp_reps(N)
    assert len(wang) == len(cusp)
    assert sorted(p_lower(g, tup) + p_star(g, a) for g in wang) == sorted(p_lower(g, tup) + p_star(g, a) for g in cusp)


@pytest.mark.parametrize("tup, a", [(T7, [2] + [0] * 7), (T11, [4, 0, 0, 0]), (T5, [2, 0, 0, 0, 0, 0])])
def test_proven_certificates_extend(tup, a):
    cert = certify(tup, avec(tup.N, a))
    assert cert.proven
    assert spot_check(tup, 5 * cert.nu_floor) is None


def test_certificate_json_schema():
    cert = certify(T11, avec(33, [4, 0, 0, 0]))
    data = json.loads(json.dumps(cert.to_json()))
    assert set(data) == {
        "tuple", "a", "kappa", "pi", "orbit", "beta_min", "reps", "p_values", "nu", "nu_floor", "checked", "verdict",
    }
    assert data["nu_floor"] == "7" and data["verdict"] == "proven"
    assert data["nu"] == f"{cert.nu.numerator}/{cert.nu.denominator}"

    def leaves(x):
        if isinstance(x, dict):
            for v in x.values():
                yield from leaves(v)
        elif isinstance(x, list):
            for v in x:
                yield from leaves(v)
        else:
            yield x

    assert all(isinstance(x, str) for x in leaves(data))
