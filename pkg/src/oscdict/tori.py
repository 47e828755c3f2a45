"""SL(2, F_p) matrices, the non-split torus T_D and coset representatives.

Matrices are stored row-major as residues ``a, b, c, d`` so that
``[[a, b], [c, d]]`` has determinant ``a*d - b*c = 1 (mod p)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .finite_field import FieldError, find_primitive_fp2, inv, legendre, sqrt_minus_one


@dataclass(frozen=True)
class SL2:
    a: int
    b: int
    c: int
    d: int
    p: int

    def __post_init__(self):
        p = self.p
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % p)
        if (self.a * self.d - self.b * self.c) % p != 1:
            raise FieldError("determinant of %r is not 1" % (self.entries(),))

    @classmethod
    def identity(cls, p: int) -> "SL2":
        return cls(1, 0, 0, 1, p)

    @classmethod
    def weyl(cls, p: int) -> "SL2":
        return cls(0, 1, -1, 0, p)

    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def __matmul__(self, other: "SL2") -> "SL2":
        if other.p != self.p:
            raise FieldError("mixed moduli")
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return SL2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h, self.p)

    def inv(self) -> "SL2":
        return SL2(self.d, -self.b, -self.c, self.a, self.p)

    def __pow__(self, k: int) -> "SL2":
        base = self if k >= 0 else self.inv()
        k = abs(k)
        acc = SL2.identity(self.p)
        while k:
            if k & 1:
                acc = acc @ base
            base = base @ base
            k >>= 1
        return acc

    def is_identity(self) -> bool:
        return self.entries() == (1, 0, 0, 1)

    def order(self) -> int:
        k, g = 1, self
        while not g.is_identity():
            g = g @ self
            k += 1
        return k

    def __repr__(self):
        return "SL2([[%d, %d], [%d, %d]] mod %d)" % (self.entries() + (self.p,))


def enumerate_sl2(p: int) -> Iterator[SL2]:
    """All p(p^2 - 1) elements of SL(2, F_p)."""
    for a in range(p):
        for b in range(p):
            for c in range(p):
                for d in range(p):
                    if (a * d - b * c) % p == 1:
                        yield SL2(a, b, c, d, p)


def enumerate_TD(p: int, D: int) -> list[SL2]:
    """Elements [[x, y], [D*y, x]] with x^2 - D*y^2 = 1, ordered by (x, y)."""
    if legendre(D, p) != -1:
        raise FieldError("D=%d is a square mod %d; T_D would split" % (D, p))
    return [
        SL2(x, y, D * y, x, p)
        for x in range(p)
        for y in range(p)
        if (x * x - D * y * y) % p == 1
    ]


def build_gD(p: int, D: int, s: int, t: int) -> SL2:
    """Generator of T_D obtained from the primitive element s + t*sqrt(D).

    It is the image of (s + t*sqrt(D))^(p-1) = (s - t*sqrt(D)) / (s + t*sqrt(D)).
    """
    n = (s * s - D * t * t) % p
    ninv = inv(n, p)
    u = (s * s + D * t * t) * ninv % p
    v = -2 * s * t * ninv % p
    g = SL2(u, v, D * v, u, p)
    if g.order() != p + 1:
        raise FieldError("(s, t) = (%d, %d) is not primitive: order %d" % (s, t, g.order()))
    return g


def in_normalizer_ND(g: SL2, D: int) -> bool:
    p = g.p
    a, b, c, d = g.entries()
    D %= p
    if c == b * D % p and d == a:
        return (a * a - b * b * D) % p == 1
    if c == -b * D % p and d == -a % p:
        return (b * b * D - a * a) % p == 1
    return False


def in_normalizer_NA(g: SL2) -> bool:
    """Membership in the normalizer of the diagonal torus."""
    return (g.b == 0 and g.c == 0) or (g.a == 0 and g.d == 0)


@dataclass(frozen=True)
class TorusDescriptor:
    D: int
    s: int
    t: int
    generator: SL2
    elements: tuple[SL2, ...]

    @property
    def p(self) -> int:
        return self.generator.p


def nonsplit_torus(p: int, D: int, s: int | None = None, t: int | None = None) -> TorusDescriptor:
    """T_D listed as powers g_D^0, ..., g_D^p of its canonical generator."""
    if s is None or t is None:
        s, t = find_primitive_fp2(p, D)
    g = build_gD(p, D, s, t)
    elements = [SL2.identity(p)]
    for _ in range(p):
        elements.append(elements[-1] @ g)
    return TorusDescriptor(D % p, s, t, g, tuple(elements))


def build_S(p: int) -> list[int]:
    """Residues in [1, (p-1)/2], one per orbit {x, -x, i*x, -i*x} of F_p^*.

    Each orbit meets the lower half in two residues; the smaller is kept.
    """
    i = sqrt_minus_one(p)
    half = (p - 1) // 2
    seen = set()
    S = []
    for x in range(1, p):
        if x in seen:
            continue
        orbit = {x, -x % p, i * x % p, -i * x % p}
        seen |= orbit
        S.append(min(y for y in orbit if y <= half))
    return sorted(S)


@dataclass(frozen=True)
class CosetReps:
    kind: str
    reps: tuple[SL2, ...]
    params: tuple[dict, ...]
    aux: tuple[int, ...] | None = field(default=None)

    def __len__(self):
        return len(self.reps)

    def __iter__(self):
        return iter(zip(self.reps, self.params))


def coset_reps_split(p: int) -> CosetReps:
    reps, params = [], []
    for b in range((p - 1) // 2 + 1):
        for c in range(p):
            reps.append(SL2(1, b, c, 1 + b * c, p))
            params.append({"b": b, "c": c})
    return CosetReps("split", tuple(reps), tuple(params))


def coset_reps_nonsplit(p: int, D: int) -> CosetReps:
    """Representatives of SL(2, F_p) / N_D, ordered by (a, c, w)."""
    if legendre(D, p) != -1:
        raise FieldError("D=%d is a square mod %d" % (D, p))
    w = SL2.weyl(p)
    reps, params = [], []
    if p % 4 == 3:
        if legendre(p - 1, p) != -1:
            raise FieldError("-1 should be a non-square for p = 3 mod 4")
        for a in range(1, (p - 1) // 2 + 1):
            for c in range(p):
                reps.append(SL2(a, 0, c, inv(a, p), p))
                params.append({"a": a, "c": c, "w": 0})
        return CosetReps("nonsplit", tuple(reps), tuple(params))
    S = build_S(p)
    for a in S:
        for c in range(p):
            low = SL2(a, 0, c, inv(a, p), p)
            for flag, g in ((0, low), (1, low @ w)):
                reps.append(g)
                params.append({"a": a, "c": c, "w": flag})
    return CosetReps("nonsplit", tuple(reps), tuple(params), tuple(S))
