"""Exact arithmetic in F_p and F_{p^2} = F_p(sqrt(D)).

Residues are plain Python ints; :class:`FpElem` and :class:`Fp2Elem` are thin
immutable wrappers used where carrying the modulus around is convenient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


class FieldError(ValueError):
    """Invalid modulus or an operation undefined for the given residue."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    """Raise :class:`FieldError` unless ``p`` is a prime larger than 3."""
    if not isinstance(p, int) or isinstance(p, bool) or p <= 3 or not is_prime(p):
        raise FieldError("p must be an odd prime > 3")
    return p


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division, ascending."""
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise FieldError("0 has no inverse mod %d" % p)
    return pow(a, p - 2, p)


def legendre(a: Union[int, "FpElem"], p: int | None = None) -> int:
    """Legendre symbol of ``a`` modulo ``p`` as -1, 0 or +1.

    ``p`` may be omitted when ``a`` is an :class:`FpElem`.
    """
    if isinstance(a, FpElem):
        p = a.p if p is None else p
        a = a.value
    if p is None:
        raise TypeError("modulus required for integer argument")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def find_nonsquare(p: int) -> int:
    """Smallest positive non-square modulo ``p``."""
    for d in range(2, p):
        if legendre(d, p) == -1:
            return d
    raise FieldError("no non-square mod %d" % p)


def multiplicative_order(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise FieldError("0 has no multiplicative order")
    k, x = 1, a
    while x != 1:
        x = x * a % p
        k += 1
    return k


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group of F_p."""
    qs = prime_factors(p - 1)
    for a in range(2, p):
        if all(pow(a, (p - 1) // q, p) != 1 for q in qs):
            return a
    raise FieldError("no primitive root mod %d" % p)


def sqrt_minus_one(p: int) -> int:
    """The smaller root of X^2 + 1 = 0 in F_p; requires p = 1 (mod 4)."""
    if p % 4 != 1:
        raise FieldError("-1 is not a square mod %d (p = 3 mod 4)" % p)
    for x in range(1, p):
        if x * x % p == p - 1:
            return x
    raise FieldError("no square root of -1 mod %d" % p)


@dataclass(frozen=True)
class FpElem:
    value: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise FieldError("mixed moduli %d and %d" % (self.p, other.p))
            return other.value
        return int(other)

    def __add__(self, other):
        return FpElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElem(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FpElem(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FpElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __truediv__(self, other):
        return FpElem(self.value * inv(self._coerce(other), self.p), self.p)

    def __pow__(self, k: int):
        if k < 0:
            return FpElem(pow(inv(self.value, self.p), -k, self.p), self.p)
        return FpElem(pow(self.value, k, self.p), self.p)

    def inv(self) -> "FpElem":
        return FpElem(inv(self.value, self.p), self.p)

    def legendre(self) -> int:
        return legendre(self.value, self.p)

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return "FpElem(%d mod %d)" % (self.value, self.p)


@dataclass(frozen=True)
class Fp2Elem:
    """``x + y*sqrt(D)`` with ``D`` a fixed non-square mod ``p``."""

    x: int
    y: int
    D: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "x", self.x % self.p)
        object.__setattr__(self, "y", self.y % self.p)
        object.__setattr__(self, "D", self.D % self.p)

    @classmethod
    def one(cls, D: int, p: int) -> "Fp2Elem":
        return cls(1, 0, D, p)

    def _check(self, other: "Fp2Elem"):
        if (self.D, self.p) != (other.D, other.p):
            raise FieldError("elements of different quadratic extensions")

    def __add__(self, other: "Fp2Elem") -> "Fp2Elem":
        self._check(other)
        return Fp2Elem(self.x + other.x, self.y + other.y, self.D, self.p)

    def __sub__(self, other: "Fp2Elem") -> "Fp2Elem":
        self._check(other)
        return Fp2Elem(self.x - other.x, self.y - other.y, self.D, self.p)

    def __neg__(self) -> "Fp2Elem":
        return Fp2Elem(-self.x, -self.y, self.D, self.p)

    def __mul__(self, other: "Fp2Elem") -> "Fp2Elem":
        self._check(other)
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        return Fp2Elem(x1 * x2 + self.D * y1 * y2, x1 * y2 + x2 * y1, self.D, self.p)

    def norm(self) -> int:
        return (self.x * self.x - self.D * self.y * self.y) % self.p

    def conjugate(self) -> "Fp2Elem":
        return Fp2Elem(self.x, -self.y, self.D, self.p)

    def inv(self) -> "Fp2Elem":
        n = self.norm()
        if n == 0:
            raise FieldError("zero has no inverse")
        ni = inv(n, self.p)
        return Fp2Elem(self.x * ni, -self.y * ni, self.D, self.p)

    def __pow__(self, k: int) -> "Fp2Elem":
        return fp2_pow(self, k)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_one(self) -> bool:
        return self.x == 1 and self.y == 0


def fp2_pow(e: Fp2Elem, k: int) -> Fp2Elem:
    """``e**k`` by square-and-multiply; ``k`` must be non-negative."""
    if k < 0:
        return fp2_pow(e.inv(), -k)
    acc = Fp2Elem.one(e.D, e.p)
    base = e
    while k:
        if k & 1:
            acc = acc * base
        base = base * base
        k >>= 1
    return acc


def is_primitive_fp2(e: Fp2Elem) -> bool:
    if e.is_zero():
        return False
    n = e.p * e.p - 1
    return all(not fp2_pow(e, n // q).is_one() for q in prime_factors(n))


def find_primitive_fp2(p: int, D: int) -> tuple[int, int]:
    """First ``(s, t)`` with ``s + t*sqrt(D)`` of order ``p^2 - 1``.

    Scan order is ``t = 1..p-1`` outer and ``s = 0..p-1`` inner.
    """
    if legendre(D, p) != -1:
        raise FieldError("D=%d is not a non-square mod %d" % (D, p))
    for t in range(1, p):
        for s in range(p):
            if is_primitive_fp2(Fp2Elem(s, t, D, p)):
                return s, t
    raise RuntimeError("no primitive element of F_%d^2 found" % p)
