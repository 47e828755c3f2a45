"""Unitary operators on C(F_p) and the Weil representation of SL(2, F_p).

Vectors are complex128 numpy arrays whose last axis has length ``p`` and is
indexed by ``t = 0..p-1``; every operator acts along that axis, so a stack of
vectors of shape ``(n, p)`` is transformed row by row.
"""

from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from .finite_field import FieldError, inv, legendre, primitive_root
from .tori import SL2


@lru_cache(maxsize=None)
def roots_of_unity(n: int) -> np.ndarray:
    """``exp(2*pi*i*k/n)`` for k = 0..n-1, read-only."""
    r = np.exp(2j * np.pi * np.arange(n) / n)
    r.setflags(write=False)
    return r


def chi(a, p: int):
    """Additive character ``a -> exp(2*pi*i*a/p)``; ``a`` may be an int array."""
    return roots_of_unity(p)[np.asarray(a) % p]


class CharacterTable:
    """Additive, multiplicative and quadratic characters of F_p.

    ``psi(j, a)`` is the multiplicative character sending ``alpha**k`` to
    ``exp(2*pi*i*j*k/(p-1))``, with ``psi(j, 0) = 0`` for ``j != 0`` and
    ``psi(0, 0) = 1``.
    """

    def __init__(self, p: int, alpha: int | None = None):
        self.p = p
        self.alpha = primitive_root(p) if alpha is None else alpha % p
        log = np.full(p, -1, dtype=np.int64)
        x = 1
        for k in range(p - 1):
            log[x] = k
            x = x * self.alpha % p
        if (log[1:] < 0).any():
            raise FieldError("%d is not a generator mod %d" % (self.alpha, p))
        self.log = log

    def chi(self, a):
        return chi(a, self.p)

    def sigma(self, a: int) -> int:
        return legendre(a, self.p)

    def psi(self, j: int, a):
        a = np.asarray(a) % self.p
        k = self.log[a]
        vals = roots_of_unity(self.p - 1)[(j * k) % (self.p - 1)]
        return np.where(a == 0, 1.0 if j % (self.p - 1) == 0 else 0.0, vals)

    def psi_vector(self, j: int) -> np.ndarray:
        """``psi_j`` sampled at t = 0..p-1."""
        return self.psi(j, np.arange(self.p)).astype(np.complex128)


class Operator:
    """A unitary map on C(F_p) kept in structural form.

    Subclasses implement :meth:`apply`; :attr:`matrix` materializes the dense
    ``p x p`` realization once and caches it.
    """

    p: int

    def apply(self, f: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=np.complex128)
        if f.shape[-1] != self.p:
            raise ValueError("vector length %d != p=%d" % (f.shape[-1], self.p))
        return self.apply(f)

    def __matmul__(self, other: "Operator") -> "Composition":
        return Composition(self, other)

    @cached_property
    def matrix(self) -> np.ndarray:
        m = self(np.eye(self.p, dtype=np.complex128)).T.copy()
        m.setflags(write=False)
        return m


class TimeShift(Operator):
    def __init__(self, tau: int, p: int):
        self.tau, self.p = tau % p, p

    def apply(self, f):
        return np.roll(f, -self.tau, axis=-1)

    def __repr__(self):
        return "TimeShift(%d)" % self.tau


class Modulation(Operator):
    def __init__(self, omega: int, p: int):
        self.omega, self.p = omega % p, p
        self.phase = chi(self.omega * np.arange(p), p)

    def apply(self, f):
        return self.phase * f

    def __repr__(self):
        return "Modulation(%d)" % self.omega


class Scale(Operator):
    """``f(t) -> sigma(a) * f(a^-1 * t)``."""

    def __init__(self, a: int, p: int):
        a %= p
        if a == 0:
            raise FieldError("scale factor must be nonzero")
        self.a, self.p = a, p
        self.sign = legendre(a, p)
        self.index = inv(a, p) * np.arange(p) % p

    def apply(self, f):
        out = f[..., self.index]
        return -out if self.sign < 0 else out

    def __repr__(self):
        return "Scale(%d)" % self.a


class Chirp(Operator):
    """``f(t) -> chi(-b*t^2/2) * f(t)``."""

    def __init__(self, b: int, p: int):
        self.b, self.p = b % p, p
        t = np.arange(p)
        k = (-inv(2, p) * self.b % p) * (t * t % p) % p
        self.phase = chi(k, p)

    def apply(self, f):
        return self.phase * f

    def __repr__(self):
        return "Chirp(%d)" % self.b


@lru_cache(maxsize=None)
def dft_kernel(p: int) -> np.ndarray:
    """``K[j, t] = chi(j*t) / sqrt(p)`` (symmetric)."""
    t = np.arange(p)
    k = chi(np.outer(t, t) % p, p) / np.sqrt(p)
    k.setflags(write=False)
    return k


class DFT(Operator):
    """``F f(j) = p^-1/2 * sum_t chi(t*j) f(t)``, direct summation.

    The kernel carries ``exp(+2*pi*i*j*t/p)``, the opposite sign to
    ``numpy.fft.fft``.
    """

    def __init__(self, p: int):
        self.p = p

    def apply(self, f):
        return f @ dft_kernel(self.p)

    def __repr__(self):
        return "DFT()"


class Composition(Operator):
    """``Composition(A, B, C)`` is ``A o B o C``: C is applied first."""

    def __init__(self, *ops: Operator):
        flat = []
        for op in ops:
            flat.extend(op.ops if isinstance(op, Composition) else [op])
        if not flat:
            raise ValueError("empty composition")
        if len({op.p for op in flat}) != 1:
            raise FieldError("mixed moduli in composition")
        self.ops = tuple(flat)
        self.p = flat[0].p

    def apply(self, f):
        for op in reversed(self.ops):
            f = op.apply(f)
        return f

    def __repr__(self):
        return " o ".join(map(repr, self.ops))


def time_shift(tau: int, f) -> np.ndarray:
    f = np.asarray(f)
    return TimeShift(tau, f.shape[-1])(f)


def modulation(omega: int, f) -> np.ndarray:
    f = np.asarray(f)
    return Modulation(omega, f.shape[-1])(f)


def scale(a: int, f) -> np.ndarray:
    f = np.asarray(f)
    return Scale(a, f.shape[-1])(f)


def chirp(b: int, f) -> np.ndarray:
    f = np.asarray(f)
    return Chirp(b, f.shape[-1])(f)


def dft(f) -> np.ndarray:
    f = np.asarray(f)
    return DFT(f.shape[-1])(f)


def as_matrix(op: Operator) -> np.ndarray:
    return op.matrix


def rho(g: SL2) -> Composition:
    """Weil operator of ``g`` assembled from its Bruhat factorization.

    For ``b != 0``: ``S_b o N_{bd} o F o N_{a/b}``; for ``b == 0``:
    ``S_a o N_{ac}``. Agrees with a true representation only up to a
    unimodular scalar per product.
    """
    p = g.p
    a, b, c, d = g.entries()
    if b:
        return Composition(Scale(b, p), Chirp(b * d, p), DFT(p), Chirp(a * inv(b, p), p))
    return Composition(Scale(a, p), Chirp(a * c, p))
