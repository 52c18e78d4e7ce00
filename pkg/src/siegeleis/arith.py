"""Exact integer and rational arithmetic helpers.

Valuations, Kronecker symbols, fundamental discriminants, splitting an
integer into its N-part and prime-to-N part, divisor sums twisted by a
character, and the half-integral symmetric matrices T = [[n, r/2], [r/2, m]]
that index Fourier coefficients.

Everything here is exact: integers are unbounded, rationals are
`fractions.Fraction`.  Factorization is trial division with a deterministic
Miller-Rabin check; inputs in the intended use are tiny.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "HalfIntegralForm",
    "DiscriminantSplit",
    "LevelSplit",
    "is_prime",
    "factorize",
    "divisors",
    "moebius",
    "valuation",
    "kronecker_symbol",
    "fundamental_discriminant",
    "squarefree_part",
    "split_by_level",
    "divisor_sum",
    "content",
]

# Strong-pseudoprime witnesses certifying primality for all n < 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the sizes that occur here."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of |n| as a sorted tuple of (p, exponent)."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out = []
    for p in (2, 3):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e:
                out.append((p, e))
        f += 6
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int) -> list[int]:
    """Positive divisors of |n|, ascending."""
    out = [1]
    for p, e in factorize(n):
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def moebius(n: int) -> int:
    if n == 1:
        return 1
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def valuation(x, p: int) -> int:
    """p-adic valuation of a nonzero integer or Fraction."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if x == 0:
        raise ValueError("valuation of 0 is +infinity")
    if isinstance(x, Fraction):
        return valuation(x.numerator, p) - valuation(x.denominator, p)
    x = int(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol (D/n), extended to all integers n.

    For D a fundamental discriminant this is the quadratic character
    attached to Q(sqrt(D)); in particular (D/p) = 0 exactly when p | D.
    """
    if n == 0:
        return 1 if D in (1, -1) else 0
    if D == 0:
        return 1 if n in (1, -1) else 0
    sym = 1
    if n < 0:
        n = -n
        if D < 0:
            sym = -sym
    # (D/2) by the supplementary law.
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if D % 2 == 0:
            return 0
        if v % 2 and abs(D % 8) in (3, 5):
            sym = -sym
    a = D % n
    # Jacobi symbol (a/n) for odd n > 0 by quadratic reciprocity.
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sym = -sym
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sym = -sym
        a %= n
    return sym if n == 1 else 0


def squarefree_part(n: int) -> int:
    """Signed squarefree part: n / (largest square dividing n)."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    out = -1 if n < 0 else 1
    for p, e in factorize(n):
        if e % 2:
            out *= p
    return out


@dataclass(frozen=True)
class DiscriminantSplit:
    """M = D * f**2 with D a fundamental discriminant and f > 0."""

    D: int
    f: int


def fundamental_discriminant(M: int) -> DiscriminantSplit:
    """Split M = D * f**2, for nonzero M with M = 0, 1 mod 4.

    D is squarefree = 1 mod 4, or 4 times a squarefree integer = 2, 3 mod 4.
    The pair (D, f) is unique with f > 0.
    """
    if M == 0:
        raise ValueError("M must be nonzero")
    if M % 4 not in (0, 1):
        raise ValueError(f"M = {M} is not 0 or 1 mod 4")
    d = squarefree_part(M)
    D = d if d % 4 == 1 else 4 * d
    f2 = M // D
    f = math.isqrt(f2)
    assert f * f == f2 and M == D * f * f
    return DiscriminantSplit(D, f)


@dataclass(frozen=True)
class LevelSplit:
    """r = r_N * r_Nhat with r_N supported on p | N and gcd(r_Nhat, N) = 1."""

    r_N: int
    r_Nhat: int


def split_by_level(r: int, N: int) -> LevelSplit:
    """Split off the N-part of a nonzero integer; the sign goes to r_Nhat."""
    if r == 0:
        raise ValueError("r must be nonzero")
    if N < 1:
        raise ValueError("N must be positive")
    rN = 1
    rest = abs(r)
    for p, _ in factorize(N):
        while rest % p == 0:
            rest //= p
            rN *= p
    return LevelSplit(rN, r // rN)


@dataclass(frozen=True)
class HalfIntegralForm:
    """T = [[n, r/2], [r/2, m]] with integer n, r, m."""

    n: int
    r: int
    m: int

    @property
    def delta(self) -> int:
        """Delta = 4nm - r**2 = 4 det(T)."""
        return 4 * self.n * self.m - self.r * self.r

    @property
    def rank(self) -> int:
        if self.delta != 0:
            return 2
        return 0 if (self.n, self.r, self.m) == (0, 0, 0) else 1

    def is_positive_semidefinite(self) -> bool:
        return self.n >= 0 and self.m >= 0 and self.delta >= 0

    def is_positive_definite(self) -> bool:
        return self.n > 0 and self.delta > 0

    def __str__(self) -> str:
        return f"({self.n},{self.r},{self.m})"


def content(T: HalfIntegralForm) -> int:
    """gcd(n, r, m) > 0, the content of T."""
    e = math.gcd(math.gcd(abs(T.n), abs(T.r)), abs(T.m))
    if e == 0:
        raise ValueError("the zero form has no content")
    return e


def divisor_sum(a: int, ell: int, eta=None):
    """Twisted divisor sum: sum of eta^(-1)(d) * d**ell over positive d | a.

    `eta` is any character-like callable returning a root of unity (with an
    `inverse_value` for eta^(-1)) or None/0 on non-units; eta=None means the
    trivial character.  Values where gcd(d, modulus) > 1 contribute 0.
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    total = 0
    for d in divisors(a):
        if eta is None:
            total += Fraction(d) ** ell
        else:
            val = eta.inverse_value(d)
            if val:
                total = total + val * Fraction(d) ** ell
    return total
