"""Dirichlet characters mod N and their local (p-adic) data.

Characters are addressed externally by a Conrey-style label "N:index" and
stored internally by CRT components, one per prime power p^a || N.  For odd
p the component is determined by a discrete logarithm with respect to the
smallest primitive root mod p^2; for 2^a (a >= 3) with respect to the
generators -1 and 5.  All values are exact roots of unity (`RootU`).

The attached idele class character has local components chi_p determined by

* conductor exponent a(chi_p) = v_p(N),
* chi_p(p) = eta(x_p) where x_p = p mod q^(n_q) for q | N, q != p, and
  x_p = 1 mod p^(n_p),
* chi_p(u) = eta_p(u)^(-1) for units u when p | N, and chi_p unramified
  with chi_p(p) = eta(p) when p does not divide N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import factorize, is_prime, kronecker_symbol, valuation
from .cyclotomic import Cyclotomic, RootU

__all__ = [
    "DirichletCharacter",
    "GenericCharacter",
    "LocalCharacterData",
    "characters_mod",
    "primitive_characters_mod",
    "parity",
    "gauss_sum",
    "local_component",
    "product_with_kronecker",
    "power_character",
    "kronecker_character",
]


@lru_cache(maxsize=None)
def _primitive_root(p: int) -> int:
    """Smallest primitive root mod p that stays primitive mod p^2."""
    phi = p - 1
    prime_divs = [q for q, _ in factorize(phi)]
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in prime_divs):
            if pow(g, phi, p * p) != 1:
                return g
            return g + p
    raise ValueError(f"{p} has no primitive root")


@lru_cache(maxsize=None)
def _dlog_table(p: int, a: int) -> dict[int, int]:
    """x -> ind(x) for the generator of the cyclic group (Z/p^a)^x, p odd."""
    q = p**a
    g = _primitive_root(p) % q
    table, x = {}, 1
    for i in range(q - q // p):
        table[x] = i
        x = x * g % q
    return table


@lru_cache(maxsize=None)
def _dlog2_table(a: int) -> dict[int, tuple[int, int]]:
    """x -> (eps, ind5) with x = (-1)^eps 5^ind5 mod 2^a, for a >= 3."""
    q = 2**a
    table = {}
    for eps in (0, 1):
        x = q - 1 if eps else 1
        for i in range(q // 4):
            table[x] = (eps, i)
            x = x * 5 % q
    return table


class _Component:
    """Conrey component of a character at one prime power p^a."""

    def __init__(self, p: int, a: int, index: int):
        self.p, self.a = p, a
        q = p**a
        self.q = q
        self.index = index % q
        if p == 2:
            if a == 1:
                self._kind = "trivial"
            elif a == 2:
                self._kind = "two"
                self._aj = 0 if self.index % 4 == 1 else 1
            else:
                self._kind = "two_big"
                self._aj, self._bj = _dlog2_table(a)[self.index]
        else:
            self._kind = "odd"
            self._indj = _dlog_table(p, a)[self.index]

    def exponent(self, x: int) -> Fraction | None:
        """Exponent t with component(x) = e(t); None when p | x."""
        x %= self.q
        if math.gcd(x, self.p) != 1:
            return None
        if self._kind == "trivial":
            return Fraction(0)
        if self._kind == "two":
            ax = 0 if x % 4 == 1 else 1
            return Fraction(self._aj * ax, 2)
        if self._kind == "two_big":
            ax, bx = _dlog2_table(self.a)[x]
            return Fraction(self._aj * ax, 2) + Fraction(self._bj * bx, 2 ** (self.a - 2))
        phi = self.q - self.q // self.p
        return Fraction(self._indj * _dlog_table(self.p, self.a)[x], phi)

    def conductor(self) -> int:
        if self._kind == "trivial":
            return 1
        if self._kind == "two":
            return 4 if self._aj else 1
        if self._kind == "two_big":
            m5 = 2 ** (self.a - 2) // math.gcd(2 ** (self.a - 2), self._bj)
            if m5 > 1:
                return 1 << (valuation(m5, 2) + 2)
            return 4 if self._aj else 1
        phi = self.q - self.q // self.p
        m = phi // math.gcd(phi, self._indj)
        if m == 1:
            return 1
        return self.p ** (valuation(m, self.p) + 1)


class DirichletCharacter:
    """Dirichlet character mod N with Conrey index, exact root-of-unity values."""

    def __init__(self, modulus: int, index: int = 1):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        index %= max(modulus, 1)
        if modulus == 1:
            index = 1
        if modulus > 1 and math.gcd(index, modulus) != 1:
            raise ValueError(f"index {index} not a unit mod {modulus}")
        self.modulus = modulus
        self.index = index
        self._components = [_Component(p, a, index) for p, a in factorize(modulus)] if modulus > 1 else []
        self._conductor = math.prod(c.conductor() for c in self._components) if self._components else 1

    @classmethod
    def from_label(cls, label: str) -> "DirichletCharacter":
        try:
            n, j = label.split(":")
            return cls(int(n), int(j))
        except Exception as exc:
            raise ValueError(f"bad character label {label!r}; expected 'N:index'") from exc

    @property
    def label(self) -> str:
        return f"{self.modulus}:{self.index}"

    def exponent(self, n: int) -> Fraction | None:
        """Exponent t of eta(n) = e(t), or None when gcd(n, N) > 1."""
        if self.modulus == 1:
            return Fraction(0)
        total = Fraction(0)
        for comp in self._components:
            t = comp.exponent(n)
            if t is None:
                return None
            total += t
        return total - (total.numerator // total.denominator)

    def __call__(self, n: int):
        """eta(n) as a RootU, or the integer 0 on non-units."""
        t = self.exponent(n)
        return RootU(t) if t is not None else 0

    def value(self, n: int):
        return self(n)

    def inverse_value(self, n: int):
        """eta^(-1)(n): conjugate on units, 0 otherwise."""
        t = self.exponent(n)
        return RootU(-t) if t is not None else 0

    def conductor(self) -> int:
        return self._conductor

    def is_primitive(self) -> bool:
        return self._conductor == self.modulus

    def is_trivial(self) -> bool:
        return self._conductor == 1

    def order(self) -> int:
        if self.modulus == 1:
            return 1
        return math.lcm(*(self.exponent_order(c) for c in self._components))

    @staticmethod
    def exponent_order(comp: _Component) -> int:
        if comp._kind == "trivial":
            return 1
        if comp._kind == "two":
            return 2 if comp._aj else 1
        if comp._kind == "two_big":
            m5 = 2 ** (comp.a - 2) // math.gcd(2 ** (comp.a - 2), comp._bj)
            return max(m5, 2 if comp._aj else 1)
        phi = comp.q - comp.q // comp.p
        return phi // math.gcd(phi, comp._indj)

    def is_quadratic(self) -> bool:
        """Order dividing 2 (includes the trivial character)."""
        return self.order() <= 2

    def __eq__(self, other):
        return (
            isinstance(other, DirichletCharacter)
            and self.modulus == other.modulus
            and self.index == other.index
        )

    def __hash__(self):
        return hash((self.modulus, self.index))

    def __repr__(self):
        return f"DirichletCharacter({self.label})"


def characters_mod(N: int) -> list[DirichletCharacter]:
    return [DirichletCharacter(N, j) for j in range(1, max(N, 2)) if math.gcd(j, N) == 1] if N > 1 else [DirichletCharacter(1, 1)]


def primitive_characters_mod(N: int) -> list[DirichletCharacter]:
    return [chi for chi in characters_mod(N) if chi.is_primitive()]


def parity(eta) -> int:
    """0 for even (eta(-1) = 1), 1 for odd."""
    t = eta.exponent(-1)
    assert t is not None
    if t == 0:
        return 0
    if t == Fraction(1, 2):
        return 1
    raise AssertionError("eta(-1) must be +-1")


def gauss_sum(eta) -> Cyclotomic:
    """G(eta) = sum of eta(a) e(a/N), exact in Q(zeta_lcm(N, order)).

    Accumulates the exponent histogram first and reduces once; every term
    is a single root of unity.
    """
    N = eta.modulus
    if N == 1:
        return Cyclotomic.from_rational(1)
    n = math.lcm(N, eta.order())
    coeffs = [0] * n
    for a in range(N):
        t = eta.exponent(a)
        if t is None:
            continue
        k = (t + Fraction(a, N)) * n
        assert k.denominator == 1
        coeffs[k.numerator % n] += 1
    return Cyclotomic(n, coeffs)


def gauss_sum_numeric(eta):
    """G(eta) as an mpc at working precision, without cyclotomic overhead."""
    import mpmath

    from .scalars import mp_workdps

    N = eta.modulus
    with mp_workdps():
        total = mpmath.mpc(0)
        for a in range(max(N, 1)):
            t = eta.exponent(a)
            if t is None:
                continue
            phase = t + Fraction(a, N) if N > 1 else Fraction(0)
            total += mpmath.expjpi(2 * mpmath.mpf(phase.numerator) / phase.denominator)
        return total if N > 1 else mpmath.mpc(1)


@dataclass(frozen=True)
class LocalCharacterData:
    """Local component chi_p of the idele class character attached to eta."""

    p: int
    n_p: int
    chi_at_p: RootU
    unit_values: dict  # u mod p^(n_p), coprime to p -> RootU

    def unit_value(self, u: int) -> RootU:
        if self.n_p == 0:
            return RootU.one()
        return self.unit_values[u % (self.p**self.n_p)]

    def value(self, x: Fraction | int) -> RootU:
        """chi_p on a nonzero rational, via v_p and the unit part mod p^(n_p)."""
        x = Fraction(x)
        v = valuation(x, self.p)
        u = x / Fraction(self.p) ** v
        mod = self.p ** max(self.n_p, 1)
        u_int = u.numerator * pow(u.denominator, -1, mod) % mod
        return (self.chi_at_p ** v) * self.unit_value(u_int)

    def is_quadratic(self) -> bool:
        return self.chi_at_p.order <= 2 and all(v.order <= 2 for v in self.unit_values.values())


def local_component(eta: DirichletCharacter, p: int) -> LocalCharacterData:
    """Local data of the adelization of a primitive eta at the prime p."""
    if not eta.is_primitive():
        raise ValueError("adelization requires a primitive character")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    N = eta.modulus
    n_p = valuation(N, p) if N % p == 0 else 0
    if n_p == 0:
        val = eta(p)
        assert val != 0
        return LocalCharacterData(p, 0, val, {1: RootU.one()})
    q = p**n_p
    M = N // q
    # x_p = p mod M, x_p = 1 mod q
    if M == 1:
        x_p = 1
    else:
        inv_q = pow(q, -1, M)
        x_p = (1 + q * ((p - 1) * inv_q % M)) % N
        assert x_p % q == 1 and x_p % M == p % M
    chi_at_p = eta(x_p)
    # eta_p = component of eta at p: evaluate eta on lifts that are 1 mod M.
    unit_values = {}
    for u in range(1, q):
        if u % p == 0:
            continue
        if M == 1:
            lift = u
        else:
            lift = (u * M * pow(M, -1, q) + q * pow(q, -1, M)) % N
        t = eta.exponent(lift)
        assert t is not None
        unit_values[u] = RootU(-t)  # chi_p(u) = eta_p(u)^(-1)
    return LocalCharacterData(p, n_p, chi_at_p, unit_values)


class GenericCharacter:
    """A (possibly imprimitive) character given by explicit unit values.

    Used for pointwise products like chi_D * eta, and for powers eta^k.
    Stores the full value table mod M; fine for the small moduli that occur.
    """

    def __init__(self, modulus: int, exponents: dict[int, Fraction]):
        self.modulus = modulus
        self._exp = {}
        for x, t in exponents.items():
            t = Fraction(t)
            self._exp[x] = t - (t.numerator // t.denominator)

    @classmethod
    def from_character(cls, eta) -> "GenericCharacter":
        M = eta.modulus
        table = {}
        for x in range(1, max(M, 2)):
            if math.gcd(x, M) == 1:
                t = eta.exponent(x)
                assert t is not None
                table[x % M if M > 1 else 1] = t
        if M == 1:
            table = {0: Fraction(0)}
        return cls(M, table)

    def exponent(self, n: int) -> Fraction | None:
        if self.modulus == 1:
            return Fraction(0)
        n %= self.modulus
        return self._exp.get(n)

    def __call__(self, n: int):
        t = self.exponent(n)
        return RootU(t) if t is not None else 0

    def value(self, n: int):
        return self(n)

    def inverse_value(self, n: int):
        t = self.exponent(n)
        return RootU(-t) if t is not None else 0

    def order(self) -> int:
        if self.modulus == 1:
            return 1
        return math.lcm(*(max(t.denominator, 1) for t in self._exp.values()))

    def conductor(self) -> int:
        M = self.modulus
        for c in sorted(d for d in _divisors_of(M)):
            if self._factors_through(c):
                return c
        return M

    def _factors_through(self, c: int) -> bool:
        M = self.modulus
        for x in range(1, M + 1):
            if x % c == 1 % c and math.gcd(x, M) == 1 and self.exponent(x) != 0:
                return False
        return True

    def primitive_core(self) -> "GenericCharacter":
        """The primitive character inducing this one."""
        c = self.conductor()
        if c == self.modulus:
            return self
        table = {}
        for x in range(1, max(c, 2)):
            if math.gcd(x, c) != 1:
                continue
            lift = x
            while math.gcd(lift, self.modulus) != 1:
                lift += c
            table[x % c if c > 1 else 1] = self.exponent(lift)
        if c == 1:
            table = {0: Fraction(0)}
        return GenericCharacter(c, table)

    def lost_euler_primes(self) -> list[int]:
        """Primes dividing the modulus but not the conductor."""
        c = self.conductor()
        return [p for p, _ in factorize(self.modulus) if c % p != 0] if self.modulus > 1 else []

    def is_quadratic(self) -> bool:
        return self.order() <= 2

    def __repr__(self):
        return f"GenericCharacter(mod {self.modulus}, order {self.order()})"


def _divisors_of(n: int) -> list[int]:
    from .arith import divisors

    return divisors(n) if n >= 1 else []


def kronecker_character(D: int) -> GenericCharacter:
    """chi_D as an explicit character mod |D| (D fundamental or 1)."""
    M = max(abs(D), 1)
    table = {}
    for x in range(1, max(M, 2)):
        if math.gcd(x, M) == 1:
            s = kronecker_symbol(D, x)
            table[x % M if M > 1 else 1] = Fraction(0) if s == 1 else Fraction(1, 2)
    if M == 1:
        table = {0: Fraction(0)}
    return GenericCharacter(M, table)


def product_with_kronecker(eta, D: int):
    """The character chi_D * eta mod |D| N, its primitive core, lost primes.

    Returns (product, core, lost) where `product` is the literal pointwise
    product (zero off units of |D| N), `core` the primitive character
    inducing it, and `lost` the Euler primes of |D| N absent from the
    conductor.
    """
    N = eta.modulus
    M = abs(D) * N if D != 0 else N
    M = max(M, 1)
    table = {}
    for x in range(1, max(M, 2)):
        if math.gcd(x, M) != 1:
            continue
        s = kronecker_symbol(D, x)
        t = eta.exponent(x)
        if s == 0 or t is None:
            continue
        table[x % M if M > 1 else 1] = t + (Fraction(0) if s == 1 else Fraction(1, 2))
    if M == 1:
        table = {0: Fraction(0)}
    product = GenericCharacter(M, table)
    core = product.primitive_core()
    return product, core, product.lost_euler_primes()


def power_character(eta, k: int) -> GenericCharacter:
    """eta^k as an explicit character mod N (possibly imprimitive)."""
    base = GenericCharacter.from_character(eta)
    table = {}
    for x, t in base._exp.items():
        kt = k * t
        table[x] = kt - (kt.numerator // kt.denominator)
    return GenericCharacter(eta.modulus, table)
