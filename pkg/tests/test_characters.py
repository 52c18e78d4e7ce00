import math
import random
from fractions import Fraction

import mpmath
import pytest

from siegeleis.arith import factorize
from siegeleis.characters import (
    DirichletCharacter,
    GenericCharacter,
    characters_mod,
    gauss_sum,
    kronecker_character,
    local_component,
    parity,
    power_character,
    primitive_characters_mod,
    product_with_kronecker,
)
from siegeleis.cyclotomic import RootU
from siegeleis.scalars import mp_workdps, to_mpc


def test_evaluate_basic():
    triv = DirichletCharacter(1, 1)
    assert all(triv(n) == RootU.one() for n in range(-3, 7))
    eta3 = DirichletCharacter(3, 2)
    assert eta3(2) == RootU(Fraction(1, 2))
    assert eta3(3) == 0
    chi5 = DirichletCharacter(5, 2)
    assert chi5(2) == RootU(Fraction(1, 4))  # order 4 with value i at 2
    assert chi5(4) == RootU(Fraction(1, 2))  # multiplicativity: i^2 = -1


def test_multiplicative():
    rng = random.Random(3)
    for N in (5, 7, 8, 9, 12, 15, 16, 21):
        for eta in characters_mod(N):
            for _ in range(20):
                a, b = rng.randint(1, 100), rng.randint(1, 100)
                va, vb, vab = eta(a), eta(b), eta(a * b)
                if va == 0 or vb == 0:
                    assert vab == 0
                else:
                    assert va * vb == vab
            assert eta(1) == RootU.one()


def test_conductor_primitivity():
    triv6 = DirichletCharacter(6, 1)
    assert triv6.conductor() == 1 and not triv6.is_primitive()
    eta3 = DirichletCharacter(3, 2)
    assert eta3.conductor() == 3 and eta3.is_primitive()
    # characters mod 9 induced from mod 3 have conductor 3
    induced = [c for c in characters_mod(9) if not c.is_primitive() and not c.is_trivial()]
    assert induced and all(c.conductor() == 3 for c in induced)


def test_conductor_by_restriction():
    # conductor = smallest c with eta trivial on units = 1 mod c
    for N in (8, 9, 12, 15, 16, 24):
        for eta in characters_mod(N):
            c = eta.conductor()
            for x in range(1, N + 1):
                if x % c == 1 % c and math.gcd(x, N) == 1:
                    assert eta.exponent(x) == 0
            gen = GenericCharacter.from_character(eta)
            assert gen.conductor() == c


def test_parity():
    assert parity(DirichletCharacter(1, 1)) == 0
    assert parity(DirichletCharacter(4, 3)) == 1
    assert parity(DirichletCharacter(5, 2)) == 1
    for N in (3, 5, 7, 8, 12):
        for eta in characters_mod(N):
            val = eta(-1)
            expected = RootU(0) if parity(eta) == 0 else RootU(Fraction(1, 2))
            assert val == expected


def test_gauss_sum_values():
    assert gauss_sum(DirichletCharacter(1, 1)).as_fraction() == 1
    g3 = gauss_sum(DirichletCharacter(3, 2))
    with mp_workdps():
        assert abs(to_mpc(g3) - mpmath.mpc(0, 1) * mpmath.sqrt(3)) < mpmath.mpf(10) ** -40


def test_gauss_sum_conjugate_identity():
    # G(eta) G(eta-bar) = eta(-1) N for primitive eta, N <= 30, exactly
    for N in range(1, 31):
        for eta in primitive_characters_mod(N):
            bar = GenericCharacter(
                N, {x: -t for x, t in GenericCharacter.from_character(eta)._exp.items()}
            )
            prod = gauss_sum(eta) * gauss_sum(bar)
            sign = 1 if parity(eta) == 0 else -1
            assert prod.is_rational() and prod.as_fraction() == sign * N


def test_local_component_values():
    # single prime power: x_p = 1 mod p^(n_p) forces chi_p(p) = 1
    for label in ("3:2", "5:2", "9:2", "4:3", "8:3"):
        eta = DirichletCharacter.from_label(label)
        p, a = factorize(eta.modulus)[0]
        lc = local_component(eta, p)
        assert lc.chi_at_p == RootU.one()
        assert lc.n_p == a
    # N = 12: chi_3(3) = eta(7) (7 = 3 mod 4, 1 mod 3), chi_2(2) = eta(5)
    for eta in primitive_characters_mod(12):
        assert local_component(eta, 3).chi_at_p == eta(7)
        assert local_component(eta, 2).chi_at_p == eta(5)
    # N = 1: unramified everywhere
    triv = DirichletCharacter(1, 1)
    for p in (2, 3, 5):
        lc = local_component(triv, p)
        assert lc.n_p == 0 and lc.chi_at_p == RootU.one()


def test_local_component_conductor_exponent():
    from siegeleis.arith import valuation

    for N in (3, 4, 5, 8, 9, 12, 15, 16, 24):
        for eta in primitive_characters_mod(N):
            for p in (2, 3, 5):
                n_p = valuation(N, p) if N % p == 0 else 0
                assert local_component(eta, p).n_p == n_p


def test_local_component_needs_primitive():
    with pytest.raises(ValueError):
        local_component(DirichletCharacter(6, 1), 2)


def test_adelization_product_identity():
    # chi_infty(d) prod_{p not | N} chi_p(d) = prod_{p | N} chi_p(d)^(-1) = eta(d)
    rng = random.Random(17)
    for N in (3, 4, 5, 12, 15):
        for eta in primitive_characters_mod(N):
            locs = {p: local_component(eta, p) for p, _ in factorize(N)}
            for _ in range(20):
                d = rng.randint(1, 400)
                if math.gcd(d, N) != 1:
                    continue
                prod = RootU.one()
                for p, lc in locs.items():
                    prod = prod * lc.value(d).inverse()
                assert prod == eta(d)


def test_product_with_kronecker():
    triv = DirichletCharacter(1, 1)
    prod, core, lost = product_with_kronecker(triv, 1)
    assert prod.modulus == 1 and core.modulus == 1 and lost == []
    prod, core, lost = product_with_kronecker(triv, -4)
    assert prod.modulus == 4 and prod.conductor() == 4 and core.modulus == 4
    eta4 = DirichletCharacter(4, 3)
    prod, core, lost = product_with_kronecker(eta4, -4)
    assert core.modulus == 1 and lost == [2]
    # product really is the pointwise product
    for x in range(1, 16):
        expect = kronecker_character(-4)(x)
        got = prod(x % 16)
        if math.gcd(x, 16) > 1 or expect == 0:
            continue
        lhs = eta4(x) * expect if eta4(x) != 0 else 0
        assert (lhs == 0 and prod(x) == 0) or prod(x) == lhs


def test_power_character():
    eta5 = DirichletCharacter(5, 2)  # order 4
    sq = power_character(eta5, 2)
    assert sq.order() == 2 and sq.conductor() == 5
    quad = power_character(eta5, 4)
    assert quad.order() == 1 and quad.conductor() == 1


def test_kronecker_character_matches_symbol():
    from siegeleis.arith import kronecker_symbol

    for D in (-8, -7, -4, -3, 1, 5, 8, 12):
        chi = kronecker_character(D)
        for x in range(1, 40):
            sym = kronecker_symbol(D, x)
            val = chi(x)
            if sym == 0:
                assert val == 0
            else:
                assert val == RootU(0 if sym == 1 else Fraction(1, 2))
