"""Exact scalars of the shape q * pi^a * sqrt(d), plus numeric conversion.

The level-1 Fourier coefficients are rational, but the intermediate factors
are not: the archimedean prefactor carries pi^(2k-1), the zeta values carry
pi^k and pi^(2k-2), and det(T)^(k-3/2) together with the odd quadratic
L-value carries sqrt(|D|) on both sides.  `Exact` keeps those symbols
symbolic so the cancellation is literal: multiply everything, then assert
the pi-exponent is 0 and the radicand is 1 and read off the rational.

Numeric work (any character of order > 2) uses mpmath at a configurable
binary precision; `set_precision`/`get_precision` holds the default, which
the CLI can override via flag or the SIEGELEIS_PRECISION environment
variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .arith import factorize
from .cyclotomic import Cyclotomic, RootU

__all__ = ["Exact", "set_precision", "get_precision", "mp_workdps", "to_mpc"]

_DEFAULT_PRECISION_BITS = 192


def _env_precision() -> int:
    try:
        return int(os.environ.get("SIEGELEIS_PRECISION", _DEFAULT_PRECISION_BITS))
    except ValueError:
        return _DEFAULT_PRECISION_BITS


_precision_bits = _env_precision()


def set_precision(bits: int) -> None:
    global _precision_bits
    if bits < 53:
        raise ValueError("precision below 53 bits is not supported")
    _precision_bits = bits


def get_precision() -> int:
    return _precision_bits


class mp_workdps:
    """Context manager running mpmath at the configured binary precision."""

    def __init__(self, extra_bits: int = 16):
        self.prec = _precision_bits + extra_bits

    def __enter__(self):
        self._old = mpmath.mp.prec
        mpmath.mp.prec = self.prec
        return mpmath.mp

    def __exit__(self, *exc):
        mpmath.mp.prec = self._old
        return False


@dataclass(frozen=True)
class Exact:
    """The real number q * pi^pi_pow * sqrt(root), root a positive integer.

    `root` is kept squarefree; multiplication extracts square factors into q.
    """

    q: Fraction
    pi_pow: int = 0
    root: int = 1

    @staticmethod
    def of(q) -> "Exact":
        return Exact(Fraction(q))

    @staticmethod
    def pi(power: int = 1) -> "Exact":
        return Exact(Fraction(1), power)

    @staticmethod
    def sqrt(n: int) -> "Exact":
        if n <= 0:
            raise ValueError("sqrt tag must be positive")
        q, root = _extract_square(n)
        return Exact(q, 0, root)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Exact(self.q * other, self.pi_pow, self.root)
        if isinstance(other, Exact):
            q2, root = _extract_square(self.root * other.root)
            return Exact(self.q * other.q * q2, self.pi_pow + other.pi_pow, root)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Exact(self.q / other, self.pi_pow, self.root)
        if isinstance(other, Exact):
            if other.q == 0:
                raise ZeroDivisionError
            # 1/sqrt(r) = sqrt(r)/r
            inv = Exact(1 / (other.q * other.root), -other.pi_pow, other.root)
            return self * inv
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Exact.of(other)
        if isinstance(other, Exact):
            if self.q == 0:
                return other
            if other.q == 0:
                return self
            if (self.pi_pow, self.root) != (other.pi_pow, other.root):
                raise ValueError("incompatible exact tags; use numerics instead")
            return Exact(self.q + other.q, self.pi_pow, self.root)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Exact(-self.q, self.pi_pow, self.root)

    def is_rational(self) -> bool:
        return self.q == 0 or (self.pi_pow == 0 and self.root == 1)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.q

    def to_mpf(self) -> mpmath.mpf:
        with mp_workdps():
            val = mpmath.mpf(self.q.numerator) / self.q.denominator
            if self.pi_pow:
                val *= mpmath.pi ** self.pi_pow
            if self.root != 1:
                val *= mpmath.sqrt(self.root)
            return val

    def __repr__(self):
        s = str(self.q)
        if self.pi_pow:
            s += f"*pi^{self.pi_pow}"
        if self.root != 1:
            s += f"*sqrt({self.root})"
        return s


def _extract_square(n: int) -> tuple[Fraction, int]:
    """n = (a**2) * root with root squarefree; returns (a, root)."""
    a, root = 1, 1
    for p, e in factorize(n):
        a *= p ** (e // 2)
        if e % 2:
            root *= p
    return Fraction(a), root


def to_mpc(value) -> mpmath.mpc:
    """Coerce any scalar used in this package to an mpmath complex."""
    with mp_workdps():
        if isinstance(value, (int, Fraction)):
            return mpmath.mpc(mpmath.mpf(Fraction(value).numerator) / Fraction(value).denominator)
        if isinstance(value, Exact):
            return mpmath.mpc(value.to_mpf())
        if isinstance(value, (RootU, Cyclotomic)):
            return mpmath.mpc(value.to_mpc())
        if isinstance(value, (mpmath.mpf, mpmath.mpc, float, complex)):
            return mpmath.mpc(value)
    raise TypeError(f"cannot coerce {type(value)} to mpc")
