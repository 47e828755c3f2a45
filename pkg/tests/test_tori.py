import itertools

import pytest

from oscdict.finite_field import FieldError, find_nonsquare, find_primitive_fp2, legendre, sqrt_minus_one
from oscdict.tori import (
    SL2,
    build_S,
    build_gD,
    coset_reps_nonsplit,
    coset_reps_split,
    enumerate_sl2,
    enumerate_TD,
    in_normalizer_NA,
    in_normalizer_ND,
    nonsplit_torus,
)


def as_set(mats):
    return {g.entries() for g in mats}


def test_sl2_basics():
    p = 7
    g = SL2(2, 3, 1, 2, p)
    assert (g @ g.inv()).is_identity()
    assert (g ** 8) == g ** 4 @ g ** 4
    assert g ** -1 == g.inv()
    with pytest.raises(FieldError):
        SL2(1, 1, 1, 1, p)
    assert sum(1 for _ in enumerate_sl2(5)) == 120


class TestTD:
    def test_p5(self):
        got = [(g.a, g.b) for g in enumerate_TD(5, 2)]
        assert sorted(got) == got
        assert set(got) == {(1, 0), (4, 0), (2, 2), (3, 2), (2, 3), (3, 3)}

    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_shape_and_count(self, p):
        D = find_nonsquare(p)
        T = enumerate_TD(p, D)
        assert len(T) == p + 1
        assert SL2.identity(p) in T
        for g in T:
            assert g.c == D * g.b % p and g.a == g.d

    def test_square_D_rejected(self):
        with pytest.raises(FieldError):
            enumerate_TD(5, 4)

    @pytest.mark.parametrize("p", [5, 7, 11])
    def test_group(self, p):
        T = enumerate_TD(p, find_nonsquare(p))
        S = as_set(T)
        for g in T:
            assert g.inv().entries() in S
            for h in T:
                assert (g @ h).entries() in S
                if p <= 7:
                    assert g @ h == h @ g


class TestGenerator:
    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_order_and_membership(self, p):
        D = find_nonsquare(p)
        s, t = find_primitive_fp2(p, D)
        g = build_gD(p, D, s, t)
        assert (g.a * g.a - D * g.b * g.b) % p == 1
        assert g.c == D * g.b % p
        assert (g ** (p + 1)).is_identity()
        assert all(not (g ** k).is_identity() for k in range(1, p + 1))

    def test_generates_TD_p5(self):
        T = nonsplit_torus(5, 2)
        assert (T.s, T.t) == (2, 1)
        assert len(as_set(T.elements)) == 6
        assert as_set(T.elements) == as_set(enumerate_TD(5, 2))

    def test_non_primitive_rejected(self):
        # 1 + 0*sqrt(D) maps to the identity
        with pytest.raises(FieldError):
            build_gD(5, 2, 1, 0)


class TestNormalizer:
    @pytest.mark.parametrize("p", [5, 7])
    def test_exhaustive_count(self, p):
        D = find_nonsquare(p)
        members = [g for g in enumerate_sl2(p) if in_normalizer_ND(g, D)]
        assert len(members) == 2 * (p + 1)
        # brute-force oracle: g T g^-1 == T
        T = enumerate_TD(p, D)
        S = as_set(T)
        brute = [g for g in enumerate_sl2(p) if all((g @ h @ g.inv()).entries() in S for h in T)]
        assert as_set(brute) == as_set(members)

    def test_examples(self):
        assert all(in_normalizer_ND(g, 2) for g in enumerate_TD(5, 2))
        assert not in_normalizer_ND(SL2(1, 0, 1, 1, 5), 2)


class TestS:
    def test_p5(self):
        assert build_S(5) == [1]

    @pytest.mark.parametrize("p", [5, 13, 17, 29])
    def test_defining_conditions(self, p):
        S = build_S(p)
        assert len(S) == (p - 1) // 4
        i = sqrt_minus_one(p)
        for x in S:
            assert 1 <= x <= (p - 1) // 2
            assert i * x % p not in S and -i * x % p not in S

    def test_requires_1_mod_4(self):
        with pytest.raises(FieldError):
            build_S(7)


def inequivalent(reps, member):
    for g, h in itertools.combinations(reps, 2):
        if member(g.inv() @ h):
            return False
    return True


class TestCosetReps:
    @pytest.mark.parametrize("p", [5, 7, 11, 13])
    def test_sizes(self, p):
        split = coset_reps_split(p)
        ns = coset_reps_nonsplit(p, find_nonsquare(p))
        assert len(split) == p * (p + 1) // 2
        assert len(ns) == p * (p - 1) // 2
        assert split.reps[0].is_identity()
        if p % 4 == 1:
            assert list(ns.aux) == build_S(p)
        else:
            assert ns.aux is None and legendre(p - 1, p) == -1

    def test_nonsplit_p5(self):
        ns = coset_reps_nonsplit(5, 2)
        assert len(ns) == 10 and list(ns.aux) == [1]

    @pytest.mark.parametrize("p", [5, 7])
    def test_pairwise_inequivalent(self, p):
        D = find_nonsquare(p)
        assert inequivalent(coset_reps_split(p).reps, in_normalizer_NA)
        assert inequivalent(coset_reps_nonsplit(p, D).reps, lambda g: in_normalizer_ND(g, D))

    def test_conjugate_tori_distinct_p5(self):
        T = enumerate_TD(5, 2)
        conj = [frozenset((g @ h @ g.inv()).entries() for h in T) for g in coset_reps_nonsplit(5, 2).reps]
        assert len(set(conj)) == 10

    def test_nonsplit_reps_cover_group_p7(self):
        # every element lies in exactly one coset g N_D
        p, D = 7, 3
        reps = coset_reps_nonsplit(p, D).reps
        for x in enumerate_sl2(p):
            hits = sum(in_normalizer_ND(g.inv() @ x, D) for g in reps)
            assert hits == 1
