import cmath

import numpy as np
import pytest

from oscdict.finite_field import FieldError, primitive_root
from oscdict.tori import SL2, enumerate_sl2
from oscdict.weil_rep import (
    DFT,
    CharacterTable,
    Chirp,
    Composition,
    Modulation,
    Scale,
    TimeShift,
    as_matrix,
    chirp,
    dft,
    modulation,
    rho,
    scale,
    time_shift,
)

from conftest import random_unit


def e(x, p):
    return cmath.exp(2j * cmath.pi * x / p)


def delta(p, t):
    v = np.zeros(p, dtype=complex)
    v[t] = 1
    return v


class TestElementary:
    def test_time_shift(self, rng):
        p = 5
        assert np.array_equal(time_shift(1, delta(p, 0)), delta(p, 4))
        f = random_unit(rng, p)
        assert np.array_equal(time_shift(0, f), f)
        assert np.allclose(time_shift(2, time_shift(p - 2, f)), f, atol=0)

    def test_modulation(self, rng):
        p = 5
        f = random_unit(rng, p)
        assert np.array_equal(modulation(0, f), f)
        assert np.allclose(np.abs(modulation(3, f)), np.abs(f), atol=1e-15)
        expected = [e(t, p) for t in range(p)]
        assert np.allclose(modulation(1, np.ones(p)), expected, atol=1e-15)

    def test_scale(self, rng):
        p = 7
        f = random_unit(rng, p)
        assert np.array_equal(scale(1, f), f)
        out = scale(3, f)
        # 3^-1 = 5 mod 7 and 3 is a non-square
        assert np.array_equal(out, -f[[5 * t % 7 for t in range(7)]])
        assert out[0] == -f[0]
        with pytest.raises(FieldError):
            Scale(0, p)

    def test_chirp(self, rng):
        p = 7
        f = random_unit(rng, p)
        assert np.array_equal(chirp(0, f), f)
        assert chirp(3, f)[0] == f[0]
        assert np.allclose(chirp(2, chirp(4, f)), chirp(6, f), atol=1e-14)
        # -2^-1 * b * t^2 with 2^-1 = 4 mod 7
        b = 3
        expected = [e(-4 * b * t * t, p) * f[t] for t in range(p)]
        assert np.allclose(chirp(b, f), expected, atol=1e-14)

    @pytest.mark.parametrize("p", [5, 7])
    def test_dft(self, p, rng):
        assert np.allclose(dft(delta(p, 0)), np.full(p, p ** -0.5), atol=1e-15)
        f = random_unit(rng, p)
        direct = [sum(e(t * j, p) * f[t] for t in range(p)) / p ** 0.5 for j in range(p)]
        assert np.allclose(dft(f), direct, atol=1e-13)
        assert np.linalg.norm(dft(f)) == pytest.approx(1, abs=1e-12)
        assert np.allclose(dft(dft(dft(dft(f)))), f, atol=1e-12)
        # opposite sign to numpy's forward transform
        assert np.allclose(dft(f), np.fft.ifft(f) * p ** 0.5, atol=1e-13)

    def test_commutation(self):
        # L_tau M_omega f(t) = chi(omega*(t + tau)) f(t + tau)
        for p in (5, 7):
            for tau in range(p):
                for omega in range(p):
                    ML = (Modulation(omega, p) @ TimeShift(tau, p)).matrix
                    LM = (TimeShift(tau, p) @ Modulation(omega, p)).matrix
                    assert np.allclose(ML, e(-omega * tau, p) * LM, atol=1e-13)


class TestOperators:
    @pytest.mark.parametrize(
        "op", [TimeShift(2, 7), Modulation(3, 7), Scale(3, 7), Chirp(5, 7), DFT(7)], ids=repr
    )
    def test_unitary_and_matrix_agree(self, op, rng):
        V = random_unit(rng, 7, 20)
        W = op(V)
        assert np.allclose(np.linalg.norm(W, axis=1), 1, atol=1e-12)
        assert np.allclose(W, V @ as_matrix(op).T, atol=1e-12)
        M = op.matrix
        assert np.allclose(M.conj().T @ M, np.eye(7), atol=1e-12)
        assert op.matrix is M

    def test_matrix_forms(self):
        p = 5
        K = as_matrix(DFT(p))
        assert np.allclose(K, [[e(j * t, p) / p ** 0.5 for t in range(p)] for j in range(p)], atol=1e-15)
        C = as_matrix(Chirp(2, p))
        assert np.count_nonzero(C - np.diag(np.diag(C))) == 0
        A, B = Scale(2, p), Chirp(3, p)
        assert np.allclose(as_matrix(Composition(A, B)), A.matrix @ B.matrix, atol=1e-14)

    def test_composition_order(self, rng):
        f = random_unit(rng, 7)
        comp = Composition(Scale(3, 7), DFT(7))
        assert np.allclose(comp(f), scale(3, dft(f)), atol=1e-14)

    def test_length_checked(self):
        with pytest.raises(ValueError):
            DFT(7)(np.ones(5))


class TestRho:
    def test_identity_and_weyl(self):
        p = 5
        assert np.allclose(rho(SL2.identity(p)).matrix, np.eye(p), atol=0)
        assert np.allclose(rho(SL2.weyl(p)).matrix, DFT(p).matrix, atol=1e-15)

    def test_lower_unipotent_is_chirp(self):
        p = 7
        for b in range(p):
            assert np.allclose(rho(SL2(1, 0, b, 1, p)).matrix, Chirp(b, p).matrix, atol=0)

    def test_unitary_exhaustive_p5(self, rng):
        v = random_unit(rng, 5)
        for g in enumerate_sl2(5):
            assert np.linalg.norm(rho(g)(v)) == pytest.approx(1, abs=1e-12)

    def test_projective_p5(self):
        G = list(enumerate_sl2(5))
        mats = {g: rho(g).matrix for g in G}
        scalars = set()
        for g in G:
            for h in G:
                A, B = mats[g @ h], mats[g] @ mats[h]
                ratio = A[np.abs(B) > 1e-6] / B[np.abs(B) > 1e-6]
                assert np.abs(np.abs(ratio) - 1).max() < 1e-9
                assert np.abs(ratio - ratio[0]).max() < 1e-9
                scalars.add(complex(np.round(ratio[0], 9)))
        # measured: the Bruhat assembly is a representation up to sign
        assert scalars == {1, -1}


class TestCharacterTable:
    @pytest.mark.parametrize("p", [5, 7, 11])
    def test_characters(self, p):
        T = CharacterTable(p)
        assert T.alpha == primitive_root(p)
        for a in range(p):
            for b in range(p):
                assert T.chi(a + b) == pytest.approx(T.chi(a) * T.chi(b), abs=1e-14)
        assert T.chi(0) == 1
        for j in range(p - 1):
            for k in range(p - 1):
                assert T.psi(j, pow(T.alpha, k, p)) == pytest.approx(e(j * k, p - 1), abs=1e-14)
            assert T.psi(j, 0) == (1 if j == 0 else 0)
        assert T.sigma(p - 1) == (1 if p % 4 == 1 else -1)

    def test_rejects_non_generator(self):
        with pytest.raises(FieldError):
            CharacterTable(7, alpha=2)
