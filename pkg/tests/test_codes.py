import json

import numpy as np
import pytest

from piqec.codes import (
    build_aab_plus,
    build_bg,
    build_bgm,
    build_bgm_nullspace,
    build_code,
    build_pi7,
    build_pi11,
    code_from_dict,
    code_to_dict,
    constraint_matrix,
    is_even_odd,
    kl_check,
    lemma_S,
    lemma_sum,
    pauli_multiset_dicke_matrix,
)
from piqec.errors import ResourceLimitError

from oracles import kl_check_bruteforce, pauli_dicke_matrix_bruteforce

BGM_GRID = [(b, g, m) for b in range(2, 7) for g in range(1, 2 * b) for m in range(1, 5)]


def max_codeword_diff(c1, c2):
    return max(
        np.abs(c1.logical0.amplitudes - c2.logical0.amplitudes).max(),
        np.abs(c1.logical1.amplitudes - c2.logical1.amplitudes).max(),
    )


class TestPi7:
    def test_amplitudes(self):
        code = build_pi7()
        assert abs(code.logical0.amplitudes[0] - np.sqrt(3 / 10)) < 1e-15
        assert abs(code.logical0.amplitudes[5] - np.sqrt(7 / 10)) < 1e-15
        assert abs(code.logical1.amplitudes[2] - np.sqrt(7 / 10)) < 1e-15
        assert abs(code.logical1.amplitudes[7] + np.sqrt(3 / 10)) < 1e-15

    def test_orthogonal_disjoint_supports(self):
        code = build_pi7()
        assert code.logical0.overlap(code.logical1) == 0

    def test_zbar_xbar_is_logical_minus_i_y(self):
        code = build_pi7()
        signs = (-1.0) ** np.arange(8)
        zx0 = signs * code.logical0.amplitudes[::-1]
        zx1 = signs * code.logical1.amplitudes[::-1]
        assert np.abs(zx0 - code.logical1.amplitudes).max() < 1e-15
        assert np.abs(zx1 + code.logical0.amplitudes).max() < 1e-15

    def test_not_even_odd(self):
        assert not is_even_odd(build_pi7())


class TestBgFamily:
    def test_pi11_amplitudes(self):
        code = build_bg(4, 3)
        assert abs(code.logical0.amplitudes[0] - np.sqrt(5) / 4) < 1e-15
        assert abs(code.logical0.amplitudes[8] - np.sqrt(11) / 4) < 1e-15
        assert abs(code.logical1.amplitudes[3] - np.sqrt(11) / 4) < 1e-15
        assert abs(code.logical1.amplitudes[11] - np.sqrt(5) / 4) < 1e-15

    def test_small_case(self):
        code = build_bg(2, 1)
        assert code.n_qubits == 5
        assert abs(code.logical0.amplitudes[0] - np.sqrt(3 / 8)) < 1e-15
        assert abs(code.logical0.amplitudes[4] - np.sqrt(5 / 8)) < 1e-15

    def test_normalization_random_params(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            b = int(rng.integers(1, 12))
            g = int(rng.integers(1, 2 * b))
            code = build_bg(b, g)
            for state in (code.logical0, code.logical1):
                assert abs(np.vdot(state.amplitudes, state.amplitudes).real - 1) < 1e-14

    def test_even_odd_iff_g_odd(self):
        for b in range(2, 7):
            for g in range(1, 2 * b):
                assert is_even_odd(build_bg(b, g)) == (g % 2 == 1)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            build_bg(1, 2)  # 2b < g+1
        with pytest.raises(ValueError):
            build_bg(3, 0)


class TestBgmFamily:
    def test_m1_equals_bg(self):
        for b in range(2, 7):
            for g in range(1, 2 * b):
                assert max_codeword_diff(build_bgm(b, g, 1), build_bg(b, g)) < 1e-14

    def test_m2_closed_form(self):
        # displayed three-term form for (b,g) = (4,3)
        b, g = 4, 3
        code = build_bgm(b, g, 2)
        n = 2 * b * 2 + g
        expected0 = np.sqrt((2 * b - g) * (4 * b - g)) / (4 * b * np.sqrt(3))
        expected1 = np.sqrt((4 * b + g) * (4 * b - g)) / (2 * b * np.sqrt(6))
        expected2 = np.sqrt((2 * b + g) * (4 * b + g)) / (4 * b * np.sqrt(3))
        assert abs(code.logical0.amplitudes[0] - expected0) < 1e-14
        assert abs(code.logical0.amplitudes[2 * b] - expected1) < 1e-14
        assert abs(code.logical0.amplitudes[4 * b] - expected2) < 1e-14
        assert code.n_qubits == n

    @pytest.mark.parametrize("b,g,m", BGM_GRID)
    def test_grid_normalization_and_reversal(self, b, g, m):
        code = build_bgm(b, g, m)
        for state in (code.logical0, code.logical1):
            assert abs(np.vdot(state.amplitudes, state.amplitudes).real - 1) < 1e-12
        # logical one is the exact amplitude reversal (transversal X image)
        assert np.abs(code.logical1.amplitudes - code.logical0.amplitudes[::-1]).max() == 0.0
        assert set(code.logical0.support) & set(code.logical1.support) == set()

    def test_even_odd_for_odd_g(self):
        for b in range(2, 7):
            for m in (1, 2, 3):
                for g in range(1, 2 * b, 2):
                    assert is_even_odd(build_bgm(b, g, m))


class TestAabPlusFamily:
    def test_equals_pi11(self):
        assert max_codeword_diff(build_aab_plus(3, 1, 4), build_bg(4, 3)) < 1e-12

    def test_gamma_b0_closed_form(self):
        g, m, delta = 3, 1, 4
        n = 2 * g * m + delta + 1
        code = build_aab_plus(g, m, delta)
        assert abs(code.logical0.amplitudes[0] - np.sqrt((delta + 1) / (2 * (n - g)))) < 1e-14

    def test_bg_equivalence_grid(self):
        for b in range(2, 7):
            for g in range(1, 2 * b, 2):
                assert max_codeword_diff(build_aab_plus(g, 1, 2 * b - g - 1),
                                         build_bg(b, g)) < 1e-12

    def test_m2_normalization(self):
        for (g, m, delta) in [(5, 2, 4), (3, 2, 5), (1, 3, 2), (5, 2, 7)]:
            code = build_aab_plus(g, m, delta)
            for state in (code.logical0, code.logical1):
                assert abs(np.vdot(state.amplitudes, state.amplitudes).real - 1) < 1e-12

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            build_aab_plus(0, 1, 2)


class TestNullspaceConstruction:
    def test_pi11_by_hand(self):
        rows = constraint_matrix(4, 3, 1)
        assert rows == [[1, __import__("fractions").Fraction(-5, 11)]]
        code = build_bgm_nullspace(4, 3, 1)
        sq = np.abs(code.logical0.amplitudes) ** 2
        assert abs(sq[0] - 5 / 16) < 1e-14
        assert abs(sq[8] - 11 / 16) < 1e-14

    @pytest.mark.parametrize("b,g,t", [(4, 3, 1), (4, 3, 2), (5, 3, 2), (6, 5, 2), (5, 5, 2)])
    def test_matches_direct_construction(self, b, g, t):
        assert max_codeword_diff(build_bgm_nullspace(b, g, t), build_bgm(b, g, t)) < 1e-10

    def test_t0_degenerate(self):
        code = build_bgm_nullspace(4, 3, 0)
        assert code.n_qubits == 3
        assert list(code.logical0.support) == [0]
        assert list(code.logical1.support) == [3]


class TestKlCheck:
    def test_pi7_distance_three(self):
        report = kl_check(build_pi7(), 1)
        assert report.passed
        assert report.verdict == "distance >= 3"

    def test_pi11_distance_three(self):
        assert kl_check(build_pi11(), 1).passed

    def test_pi29_distance_five(self):
        # (6,5,2) satisfies g, 2b-g >= 5 and m >= 2
        report = kl_check(build_bgm(6, 5, 2), 2)
        assert report.passed
        assert report.verdict == "distance >= 5"

    def test_bg21_counterexample(self):
        report = kl_check(build_bg(2, 1), 1)
        assert not report.passed
        assert report.counterexample is not None

    def test_resource_guard(self):
        with pytest.raises(ResourceLimitError):
            kl_check(build_pi7(), 5)

    @pytest.mark.parametrize("builder,t", [
        (build_pi7, 1),
        (build_pi11, 1),
        (lambda: build_bg(2, 1), 1),
        (lambda: build_bg(3, 2), 1),
        (lambda: build_bgm(2, 1, 2), 2),
    ])
    def test_agrees_with_bruteforce(self, builder, t):
        code = builder()
        assert code.n_qubits <= 13
        report = kl_check(code, t)
        ok, orth, deform, _ = kl_check_bruteforce(code, t)
        assert report.passed == ok
        assert abs(report.orthogonality_residual - orth) < 1e-10
        assert abs(report.deformation_residual - deform) < 1e-10

    def test_canonical_matrix_vs_bruteforce(self):
        for (n, a, b, c) in [(6, 1, 0, 0), (6, 0, 2, 1), (8, 2, 1, 1), (9, 0, 0, 4)]:
            m1 = pauli_multiset_dicke_matrix(n, a, b, c)
            m2 = pauli_dicke_matrix_bruteforce(n, a, b, c)
            assert np.abs(m1 - m2).max() < 1e-12


class TestLemmaSum:
    def test_hand_case(self):
        assert lemma_S(4, 3, 1, 1) == 0

    def test_small_case(self):
        assert lemma_S(2, 1, 1, 1) == 0

    def test_full_grid_exact_zero(self):
        for b in range(2, 7):
            for g in range(1, 2 * b):
                for m in range(1, 5):
                    for x in range(1, m + 1):
                        assert lemma_S(b, g, m, x) == 0

    def test_hypothesis_sharpness(self):
        # x = m+1 falls outside the hypothesis; the sum is generically nonzero
        values = [lemma_sum(b, g, m, m + 1)
                  for b in range(2, 5) for g in range(1, 2 * b) for m in (1, 2)]
        assert any(v != 0 for v in values)

    def test_checked_entry_rejects_large_x(self):
        with pytest.raises(ValueError):
            lemma_S(4, 3, 1, 2)


class TestSerialization:
    @pytest.mark.parametrize("code", [build_pi7(), build_pi11(), build_bgm(4, 3, 2),
                                      build_aab_plus(5, 2, 4)])
    def test_roundtrip(self, code):
        doc = json.loads(json.dumps(code_to_dict(code)))
        restored = code_from_dict(doc)
        assert restored.n_qubits == code.n_qubits
        assert max_codeword_diff(restored, code) < 1e-15
        assert restored.family == code.family

    def test_build_code_dispatch(self):
        assert build_code("pi7").n_qubits == 7
        assert build_code("bgm", b=4, g=3, m=2).n_qubits == 19
        with pytest.raises(ValueError):
            build_code("nope")
