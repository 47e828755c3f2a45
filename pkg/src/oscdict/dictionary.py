"""Split and non-split oscillator dictionaries.

The split part comes from closed formulas indexed by ``(x, y, z)``; the
non-split part diagonalizes the Weil operator of the canonical non-split
torus generator and pushes that eigenbasis through the coset representatives
of the torus normalizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .finite_field import (
    FieldError,
    check_prime,
    find_nonsquare,
    find_primitive_fp2,
    inv,
    legendre,
    primitive_root,
)
from .tori import SL2, build_gD, coset_reps_nonsplit, coset_reps_split
from .weil_rep import DFT, CharacterTable, Chirp, Composition, Scale, chi, rho, roots_of_unity

PHASE_EPS = 1e-12
RANK_ONE_MIN = 0.5
RANK_ZERO_MAX = 1e-6

ORDERING = {
    "split": "x outer (1..p-2), then y (0..p-1), then z (0..(p-1)/2)",
    "nonsplit": "rep (a, c, w) lexicographic outer, eigen index k inner",
}


class GenerationError(RuntimeError):
    """An internal consistency check failed while building a dictionary."""


@dataclass
class DictEntry:
    vector: np.ndarray
    kind: str
    char_index: int
    rep_params: dict


@dataclass
class Dictionary:
    p: int
    kind: str
    entries: list[DictEntry]
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def vectors(self) -> np.ndarray:
        if not self.entries:
            return np.zeros((0, self.p), dtype=np.complex128)
        return np.stack([e.vector for e in self.entries])

    def groups(self) -> dict[tuple, list[int]]:
        """Entry indices keyed by (kind, rep params); each group is one basis."""
        out: dict[tuple, list[int]] = {}
        for i, e in enumerate(self.entries):
            key = (e.kind,) + tuple(sorted(e.rep_params.items()))
            out.setdefault(key, []).append(i)
        return out


def split_size(p: int) -> int:
    return p * (p + 1) * (p - 2) // 2


def nonsplit_size(p: int) -> int:
    return p * p * (p - 1) // 2


def phase_normalize(v) -> np.ndarray:
    """Rotate so the first entry with modulus above 1e-12 is real positive.

    Works row-wise on a stack of vectors.
    """
    v = np.asarray(v, dtype=np.complex128)
    flat = v.reshape(-1, v.shape[-1])
    big = np.abs(flat) > PHASE_EPS
    if not big.any(axis=1).all():
        raise ValueError("cannot phase-normalize a zero vector")
    first = big.argmax(axis=1)
    lead = flat[np.arange(len(flat)), first]
    mod = np.abs(lead)
    # componentwise real division keeps the factor exactly 1 for real-positive leads
    rot = lead.real / mod - 1j * (lead.imag / mod)
    out = flat * rot[:, None]
    out[np.arange(len(flat)), first] = mod
    return out.reshape(v.shape)


# -- split ------------------------------------------------------------------


def split_basis(p: int, table: CharacterTable | None = None) -> list[np.ndarray]:
    """Eigenbasis ``(p-1)^-1/2 * psi_x``, x = 1..p-2, of the diagonal torus."""
    table = table or CharacterTable(p)
    s = (p - 1) ** -0.5
    return [s * table.psi_vector(x) for x in range(1, p - 1)]


def split_closed_form(p: int, x: int, y: int, z: int, table: CharacterTable | None = None) -> np.ndarray:
    if not (1 <= x <= p - 2 and 0 <= y <= p - 1 and 0 <= z <= (p - 1) // 2):
        raise ValueError("(x, y, z) = (%d, %d, %d) out of range for p=%d" % (x, y, z, p))
    table = table or CharacterTable(p)
    t = np.arange(p)
    quad = chi(y * t * t, p)
    if z == 0:
        return phase_normalize(quad * table.psi_vector(x) / np.sqrt(p - 1))
    j = np.arange(1, p)
    k = -inv(2 * z, p) * ((j[None, :] - t[:, None]) ** 2) % p
    total = chi(k, p) @ table.psi(x, j)
    return phase_normalize(quad * total / np.sqrt(p * (p - 1)))


def split_oracle(p: int, table: CharacterTable | None = None) -> dict[tuple[int, int, int], np.ndarray]:
    """rho(g) applied to each split basis vector, g over R_A.

    Keyed by ``(x, b, c)`` where g = [[1, b], [c, 1 + b*c]]. The closed form
    ``(x, y, z)`` corresponds to ``b = z`` and ``c = -2*y``.
    """
    table = table or CharacterTable(p)
    basis = np.stack(split_basis(p, table))
    out = {}
    for g, prm in coset_reps_split(p):
        vecs = rho(g)(basis)
        for x, v in enumerate(vecs, start=1):
            out[(x, prm["b"], prm["c"])] = v
    return out


def gen_split_dict(p: int) -> Dictionary:
    check_prime(p)
    table = CharacterTable(p)
    entries = [
        DictEntry(split_closed_form(p, x, y, z, table), "split", x, {"y": y, "z": z})
        for x in range(1, p - 1)
        for y in range(p)
        for z in range((p - 1) // 2 + 1)
    ]
    meta = base_meta(p, "split")
    meta["alpha"] = table.alpha
    return Dictionary(p, "split", entries, meta)


def split_rep(p: int, y: int, z: int) -> SL2:
    """Coset representative generating the split entry with params (y, z)."""
    return SL2(1, z, -2 * y, 1 - 2 * y * z, p)


# -- non-split --------------------------------------------------------------


@dataclass
class NonsplitBasis:
    """Eigenpairs of the Weil operator of g_D, sorted by eigen index k.

    ``eigenvalues[i] = mu * zeta**ks[i]`` with ``zeta = exp(2*pi*i/(p+1))``
    and ``mu`` the principal (p+1)-th root of ``c_scalar``, where
    ``U**(p+1) = c_scalar * Id``.
    """

    generator: SL2
    eigenvalues: np.ndarray
    vectors: np.ndarray
    ks: list[int]
    c_scalar: complex
    mu: complex
    excluded_k: int
    projection_norms: np.ndarray

    def pairs(self) -> list[tuple[complex, np.ndarray]]:
        return list(zip(self.eigenvalues, self.vectors))


def nonsplit_basis(p: int, D: int, s: int | None = None, t: int | None = None) -> NonsplitBasis:
    if legendre(D, p) != -1:
        raise FieldError("D=%d is not a non-square mod %d" % (D, p))
    if s is None or t is None:
        s, t = find_primitive_fp2(p, D)
    g = build_gD(p, D, s, t)
    U = rho(g).matrix
    n = p + 1

    powers = [np.eye(p, dtype=np.complex128)]
    for _ in range(n):
        powers.append(powers[-1] @ U)
    top = powers[n]
    c = complex(top[0, 0])
    if np.abs(np.diag(top) - c).max() > 1e-9 or np.abs(top - c * np.eye(p)).max() > 1e-9:
        raise GenerationError("U^(p+1) is not scalar")
    mu = np.exp(1j * np.angle(c) / n)
    zeta = roots_of_unity(n)
    scaled = np.stack(powers[:n]) / mu ** np.arange(n)[:, None, None]

    norms = np.empty(n)
    ks, vals, vecs, empty = [], [], [], []
    for k in range(n):
        P = np.tensordot(zeta[(-k * np.arange(n)) % n], scaled, axes=1) / n
        norms[k] = np.linalg.norm(P)
        if norms[k] < RANK_ZERO_MAX:
            empty.append(k)
            continue
        if norms[k] < RANK_ONE_MIN:
            raise GenerationError("projection %d has intermediate norm %.3g" % (k, norms[k]))
        col = P[:, np.linalg.norm(P, axis=0).argmax()]
        ks.append(k)
        vals.append(mu * zeta[k])
        vecs.append(phase_normalize(col / np.linalg.norm(col)))
    if len(ks) != p or len(empty) != 1:
        raise GenerationError("rank pattern %d ones / %d zeros, expected %d / 1" % (len(ks), len(empty), p))
    return NonsplitBasis(g, np.array(vals), np.stack(vecs), ks, c, complex(mu), empty[0], norms)


def nonsplit_rep_operator(p: int, a: int, c: int, w: int) -> Composition:
    ops = [Scale(a, p), Chirp(a * c, p)]
    if w:
        ops.append(DFT(p))
    return Composition(*ops)


def nonsplit_rep(p: int, a: int, c: int, w: int) -> SL2:
    g = SL2(a, 0, c, inv(a, p), p)
    return g @ SL2.weyl(p) if w else g


def gen_nonsplit_dict(p: int, D: int | None = None) -> Dictionary:
    check_prime(p)
    D = find_nonsquare(p) if D is None else D % p
    s, t = find_primitive_fp2(p, D)
    basis = nonsplit_basis(p, D, s, t)
    entries = []
    for _, prm in coset_reps_nonsplit(p, D):
        vecs = phase_normalize(nonsplit_rep_operator(p, prm["a"], prm["c"], prm["w"])(basis.vectors))
        entries.extend(DictEntry(v, "nonsplit", k, dict(prm)) for k, v in zip(basis.ks, vecs))
    meta = base_meta(p, "nonsplit")
    meta.update(
        D=D,
        s=s,
        t=t,
        c_scalar=[basis.c_scalar.real, basis.c_scalar.imag],
        excluded_k=basis.excluded_k,
    )
    return Dictionary(p, "nonsplit", entries, meta)


def base_meta(p: int, kind: str) -> dict:
    return {
        "p": p,
        "kind": kind,
        "D": None,
        "alpha": primitive_root(p),
        "s": None,
        "t": None,
        "c_scalar": None,
        "excluded_k": None,
        "version": __version__,
        "ordering": ORDERING[kind] if kind in ORDERING else "split block then nonsplit block",
    }


def gen_dictionary(p: int, kind: str = "both", D: int | None = None) -> Dictionary:
    if kind == "split":
        return gen_split_dict(p)
    if kind == "nonsplit":
        return gen_nonsplit_dict(p, D)
    if kind != "both":
        raise ValueError("kind must be split, nonsplit or both")
    sp, ns = gen_split_dict(p), gen_nonsplit_dict(p, D)
    meta = dict(ns.meta, kind="both", ordering=base_meta(p, "both")["ordering"])
    return Dictionary(p, "both", sp.entries + ns.entries, meta)


def entry_torus_generator(entry: DictEntry, meta: dict) -> SL2:
    """Generator of the torus whose eigenbasis contains ``entry``."""
    p = meta["p"]
    prm = entry.rep_params
    if entry.kind == "split":
        alpha = meta["alpha"]
        g = split_rep(p, prm["y"], prm["z"])
        gen = SL2(alpha, 0, 0, inv(alpha, p), p)
    else:
        g = nonsplit_rep(p, prm["a"], prm["c"], prm["w"])
        gen = build_gD(p, meta["D"], meta["s"], meta["t"])
    return g @ gen @ g.inv()
