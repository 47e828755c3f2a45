"""Ambiguity functions and certification of dictionary properties.

Every check returns a :class:`CheckResult`; violations are recorded in the
result rather than raised, so near misses and measured maxima are reported.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .dictionary import (
    PHASE_EPS,
    Dictionary,
    entry_torus_generator,
    nonsplit_size,
    split_size,
)
from .weil_rep import DFT, roots_of_unity, rho

DEFAULT_TOL = 1e-8
PEAK_TOL = 1e-10
GRAM_TOL = 1e-9
RESIDUAL_TOL = 1e-8
NORM_TOL = 1e-10
# overlap at or above this means two entries coincide up to phase
DISTINCT_MAX = 1 - 1e-6
DEFAULT_SAMPLE_LIMIT = 100_000
DEFAULT_SEED = 20100101
BATCH = 2048


@dataclass
class AmbiguitySurface:
    values: np.ndarray
    source: tuple = ()

    def __getitem__(self, idx):
        return self.values[idx]


@dataclass
class CheckResult:
    name: str
    status: str
    worst_value: float | None
    worst_location: dict | None
    tolerance: float
    count_checked: int
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class Report:
    config: dict
    dictionary_meta: dict
    checks: list[CheckResult]
    runtime_seconds: float | None = None

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self) -> dict:
        return _plain(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


# -- ambiguity ----------------------------------------------------------------


def ambiguity(phi, psi, tau: int, omega: int) -> complex:
    """``<phi, M_omega L_tau psi>``, conjugate-linear in the second slot."""
    phi, psi = np.asarray(phi), np.asarray(psi)
    p = len(phi)
    t = np.arange(p)
    shifted = roots_of_unity(p)[omega * t % p] * psi[(t + tau) % p]
    return complex(np.sum(phi * np.conj(shifted)))


@lru_cache(maxsize=None)
def _shift_index(p: int) -> np.ndarray:
    t = np.arange(p)
    return (t[None, :] + t[:, None]) % p


@lru_cache(maxsize=None)
def _conj_kernel(p: int) -> np.ndarray:
    t = np.arange(p)
    return np.conj(roots_of_unity(p)[np.outer(t, t) % p])


def ambiguity_surfaces(phis: np.ndarray, psis: np.ndarray) -> np.ndarray:
    """Batched surfaces, shape ``(n, p, p)`` indexed ``[pair, tau, omega]``.

    Row ``tau`` is the conjugated DFT of ``phi(t) * conj(psi(t + tau))``.
    """
    phis = np.atleast_2d(phis)
    psis = np.atleast_2d(psis)
    p = phis.shape[-1]
    u = phis[:, None, :] * np.conj(psis[:, _shift_index(p)])
    return u @ _conj_kernel(p)


def ambiguity_surface(phi, psi) -> AmbiguitySurface:
    return AmbiguitySurface(ambiguity_surfaces(np.asarray(phi), np.asarray(psi))[0])


# -- helpers --------------------------------------------------------------------


def _vectors(d) -> np.ndarray:
    if isinstance(d, Dictionary):
        return d.vectors
    return np.atleast_2d(np.asarray(d, dtype=np.complex128))


def _kinds(d, n: int) -> list[str]:
    if isinstance(d, Dictionary):
        return [e.kind for e in d.entries]
    return ["unknown"] * n


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- checks -----------------------------------------------------------------------


def check_autocorrelation(d, tol: float = DEFAULT_TOL, peak_tol: float = PEAK_TOL) -> CheckResult:
    X = _vectors(d)
    n, p = X.shape
    bound = 2 / np.sqrt(p)
    kinds = _kinds(d, n)
    per_entry = np.empty(n)
    where = np.empty((n, 2), dtype=np.int64)
    peak_dev = np.empty(n)
    for lo in range(0, n, BATCH):
        A = np.abs(ambiguity_surfaces(X[lo : lo + BATCH], X[lo : lo + BATCH]))
        peak_dev[lo : lo + len(A)] = np.abs(A[:, 0, 0] - 1)
        A[:, 0, 0] = -1
        flat = A.reshape(len(A), -1)
        k = flat.argmax(axis=1)
        per_entry[lo : lo + len(A)] = flat[np.arange(len(A)), k]
        where[lo : lo + len(A)] = np.column_stack(np.divmod(k, p))
    if n == 0:
        return CheckResult("autocorrelation", "fail", None, None, tol, 0, {"error": "empty"})
    i = int(per_entry.argmax())
    bad = np.flatnonzero(per_entry > bound + tol)
    bad_peak = np.flatnonzero(peak_dev > peak_tol)
    by_kind = {}
    for kind in sorted(set(kinds)):
        idx = [j for j, k in enumerate(kinds) if k == kind]
        by_kind[kind] = float(per_entry[idx].max())
    details = {
        "bound": bound,
        "violations": int(len(bad)),
        "violating_entries": bad[:50].tolist(),
        "peak_tolerance": peak_tol,
        "peak_max_deviation": float(peak_dev.max()),
        "peak_violations": bad_peak[:50].tolist(),
        "max_by_kind": by_kind,
    }
    if isinstance(d, Dictionary):
        half = (p - 1) // 2
        leg = [j for j, e in enumerate(d.entries) if e.kind == "split" and e.char_index == half]
        if leg:
            details["split_x_half_max"] = float(per_entry[leg].max())
    return CheckResult(
        "autocorrelation",
        _status(len(bad) == 0 and len(bad_peak) == 0),
        float(per_entry[i]),
        {"entry": i, "tau": int(where[i, 0]), "omega": int(where[i, 1])},
        tol,
        n,
        details,
    )


def sample_pairs(n: int, sample_limit: int, seed: int) -> tuple[np.ndarray, np.ndarray, str]:
    """Distinct index pairs: all ``i < j`` when they fit, else a seeded sample."""
    total = n * (n - 1) // 2
    if total <= sample_limit:
        i, j = np.triu_indices(n, k=1)
        return i, j, "exhaustive"
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, size=sample_limit)
    j = rng.integers(0, n - 1, size=sample_limit)
    j = j + (j >= i)
    return i, j, "sampled"


def check_crosscorrelation(
    d,
    sample_limit: int = DEFAULT_SAMPLE_LIMIT,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
) -> CheckResult:
    X = _vectors(d)
    n, p = X.shape
    bound = 4 / np.sqrt(p)
    I, J, mode = sample_pairs(n, sample_limit, seed)
    best, loc, over = -1.0, None, 0
    for lo in range(0, len(I), BATCH):
        i, j = I[lo : lo + BATCH], J[lo : lo + BATCH]
        A = np.abs(ambiguity_surfaces(X[i], X[j])).reshape(len(i), -1)
        m = A.max(axis=1)
        over += int((m > bound + tol).sum())
        k = int(m.argmax())
        if m[k] > best:
            best = float(m[k])
            tau, omega = divmod(int(A[k].argmax()), p)
            loc = {"entry": int(i[k]), "other": int(j[k]), "tau": tau, "omega": omega}
    return CheckResult(
        "crosscorrelation",
        _status(over == 0 and len(I) > 0),
        best if len(I) else None,
        loc,
        tol,
        int(len(I)),
        {"bound": bound, "mode": mode, "seed": seed, "sample_limit": sample_limit, "violations": over},
    )


def check_supremum(d, tol: float = DEFAULT_TOL) -> CheckResult:
    X = _vectors(d)
    n, p = X.shape
    bound = 2 / np.sqrt(p)
    mod = np.abs(X)
    per_entry = mod.max(axis=1)
    i = int(per_entry.argmax())
    bad = np.flatnonzero(per_entry > bound + tol)
    kinds = _kinds(d, n)
    by_kind = {k: float(per_entry[[j for j, kk in enumerate(kinds) if kk == k]].max()) for k in sorted(set(kinds))}
    return CheckResult(
        "supremum",
        _status(len(bad) == 0),
        float(per_entry[i]),
        {"entry": i, "t": int(mod[i].argmax())},
        tol,
        n,
        {"bound": bound, "violations": int(len(bad)), "violating_entries": bad[:50].tolist(), "max_by_kind": by_kind},
    )


def check_fourier_invariance(d, tol: float = DEFAULT_TOL) -> CheckResult:
    X = _vectors(d)
    n, p = X.shape
    M = np.abs(DFT(p)(X) @ X.conj().T)
    match = M.argmax(axis=1)
    score = M[np.arange(n), match]
    M[np.arange(n), match] = -1
    runner_up = M.max(axis=1) if n > 1 else np.zeros(n)
    unmatched = np.flatnonzero(score < 1 - tol)
    ties = np.flatnonzero(runner_up >= 1 - tol)
    bijective = len(set(match.tolist())) == n
    perm = match
    fourth = perm[perm[perm[perm]]]
    order_four = bool((fourth == np.arange(n)).all())
    i = int(score.argmin())
    ok = len(unmatched) == 0 and len(ties) == 0 and bijective and order_four
    return CheckResult(
        "fourier",
        _status(ok),
        float(score[i]),
        {"entry": i, "match": int(match[i])},
        tol,
        n,
        {
            "bijective": bijective,
            "order_four": order_four,
            "unmatched": unmatched[:50].tolist(),
            "ties": ties[:50].tolist(),
            "permutation": match.tolist(),
        },
    )


def _expected_size(kind: str, p: int) -> int | None:
    return {
        "split": split_size(p),
        "nonsplit": nonsplit_size(p),
        "both": split_size(p) + nonsplit_size(p),
    }.get(kind)


def check_structure(d, tol: float = DEFAULT_TOL) -> CheckResult:
    """Sizes, unit norms, canonical phase, per-basis orthonormality,
    torus eigenvector residuals and pairwise distinctness."""
    X = _vectors(d)
    n, p = X.shape
    failures: list[dict] = []
    details: dict = {}

    norms = np.linalg.norm(X, axis=1)
    for i in np.flatnonzero(np.abs(norms - 1) > NORM_TOL):
        failures.append({"invariant": "unit_norm", "entry": int(i), "value": float(norms[i])})
    details["max_norm_deviation"] = float(np.abs(norms - 1).max()) if n else None

    for i, v in enumerate(X):
        big = np.flatnonzero(np.abs(v) > PHASE_EPS)
        if len(big) and (abs(v[big[0]].imag) > PHASE_EPS or v[big[0]].real <= 0):
            failures.append({"invariant": "phase", "entry": i})

    if n > 1:
        worst_overlap, pair = 0.0, (0, 1)
        for lo in range(0, n, BATCH):
            G = np.abs(X[lo : lo + BATCH].conj() @ X.T)
            rows = np.arange(len(G))
            G[rows, rows + lo] = 0
            k = int(G.argmax())
            if G.flat[k] > worst_overlap:
                worst_overlap = float(G.flat[k])
                pair = (lo + k // n, k % n)
        details["max_overlap"] = worst_overlap
        details["max_overlap_pair"] = [int(pair[0]), int(pair[1])]
        details["max_overlap_below_1_minus_1_over_p"] = worst_overlap < 1 - 1 / p
        if worst_overlap >= DISTINCT_MAX:
            failures.append({"invariant": "distinct", "entry": int(pair[0]), "other": int(pair[1])})

    if not isinstance(d, Dictionary) or d.kind not in ("split", "nonsplit", "both"):
        details["provenance"] = "skipped: no entry metadata"
        return _structure_result(failures, details, 0.0, None, tol, n)

    expected = _expected_size(d.kind, p)
    details["size"] = n
    details["expected_size"] = expected
    if n != expected:
        failures.append({"invariant": "size", "value": n, "expected": expected})

    worst_gram, worst_group, worst_res = 0.0, None, 0.0
    groups = d.groups()
    details["groups"] = len(groups)
    for key, idx in groups.items():
        kind = key[0]
        want = p - 2 if kind == "split" else p
        if len(idx) != want:
            failures.append({"invariant": "group_size", "group": dict(key[1:]), "kind": kind, "value": len(idx)})
        V = X[idx]
        dev = float(np.abs(V.conj() @ V.T - np.eye(len(idx))).max())
        if dev > worst_gram:
            worst_gram, worst_group = dev, {"kind": kind, **dict(key[1:])}
        if dev > GRAM_TOL:
            failures.append({"invariant": "orthonormal", "group": dict(key[1:]), "kind": kind, "value": dev})
        U = rho(entry_torus_generator(d.entries[idx[0]], d.meta)).matrix
        W = V @ U.T
        lam = np.sum(W * V.conj(), axis=1)
        res = np.linalg.norm(W - lam[:, None] * V, axis=1)
        worst_res = max(worst_res, float(res.max()))
        for j in np.flatnonzero(res > RESIDUAL_TOL):
            failures.append({"invariant": "eigenvector", "entry": int(idx[j]), "value": float(res[j])})
    details["max_gram_deviation"] = worst_gram
    details["max_eigen_residual"] = worst_res
    return _structure_result(failures, details, worst_gram, worst_group, tol, n)


def _structure_result(failures, details, worst, where, tol, n) -> CheckResult:
    details["failed_invariants"] = sorted({f["invariant"] for f in failures})
    details["failures"] = failures[:50]
    return CheckResult("structure", _status(not failures), worst, where, tol, n, details)


CHECKS = {
    "structure": check_structure,
    "autocorrelation": check_autocorrelation,
    "crosscorrelation": check_crosscorrelation,
    "supremum": check_supremum,
    "fourier": check_fourier_invariance,
}


def run_checks(
    d: Dictionary,
    checks=None,
    tol: float = DEFAULT_TOL,
    sample_limit: int = DEFAULT_SAMPLE_LIMIT,
    seed: int = DEFAULT_SEED,
    timing: bool = False,
) -> Report:
    names = list(CHECKS) if checks is None else list(checks)
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise KeyError("unknown check(s): %s" % ", ".join(unknown))
    start = time.perf_counter()
    results = []
    for name in names:
        if name == "crosscorrelation":
            results.append(check_crosscorrelation(d, sample_limit, seed, tol))
        else:
            results.append(CHECKS[name](d, tol))
    config = {"checks": names, "tol": tol, "sample_limit": sample_limit, "seed": seed}
    runtime = time.perf_counter() - start if timing else None
    return Report(config, dict(d.meta), results, runtime)
