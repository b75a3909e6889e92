import json
import pathlib

import numpy as np
import pytest

from piqec.codes import build_pi11, logical_plus
from piqec.dicke import DickeState
from piqec.prep import (
    PulseSequence,
    _IdealChain,
    _NoisyChain,
    apply_sequence_ideal,
    apply_sequence_noisy,
    fit_power_law,
    ideal_infidelity,
    noisy_infidelity,
    optimize_preparation,
)

DATA = pathlib.Path(__file__).parent / "data"


def reference_sequence():
    with open(DATA / "plus_pi11_p10.json") as fh:
        doc = json.load(fh)
    return PulseSequence(np.asarray(doc["pulses"]))


class TestPulseSequence:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            PulseSequence(np.zeros((3, 5)))
        with pytest.raises(ValueError):
            PulseSequence(np.zeros((0, 4)))
        with pytest.raises(ValueError):
            PulseSequence(np.array([[0.0, np.inf, 0.0, 0.0]]))

    def test_roundtrip(self, tmp_path):
        seq = PulseSequence(np.arange(8.0).reshape(2, 4))
        seq.save(tmp_path / "seq.json")
        loaded = PulseSequence.load(tmp_path / "seq.json")
        assert np.array_equal(loaded.pulses, seq.pulses)


class TestSequenceApplication:
    def test_all_zero_pulse_is_identity(self):
        start = DickeState.basis_state(7, 0)
        seq = PulseSequence(np.zeros((1, 4)))
        out = apply_sequence_ideal(seq, start)
        assert np.abs(out.amplitudes - start.amplitudes).max() < 1e-14

    def test_norm_preservation_random(self):
        rng = np.random.default_rng(4)
        start = DickeState.basis_state(8, 0)
        for _ in range(1000):
            seq = PulseSequence(rng.uniform(-3, 3, size=(3, 4)))
            out = apply_sequence_ideal(seq, start)
            assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-12

    def test_noisy_matches_ideal_at_infinite_c(self):
        rng = np.random.default_rng(5)
        start = DickeState.basis_state(9, 0)
        for _ in range(10):
            seq = PulseSequence(rng.uniform(-2, 2, size=(4, 4)))
            pure = apply_sequence_ideal(seq, start).amplitudes
            rho = apply_sequence_noisy(seq, start.density_matrix(), 1e30)
            assert np.abs(rho - np.outer(pure, pure.conj())).max() < 1e-10

    def test_trace_non_increasing(self):
        rng = np.random.default_rng(6)
        start = DickeState.basis_state(9, 0)
        rho = start.density_matrix()
        trace = 1.0
        for _ in range(6):
            seq = PulseSequence(rng.uniform(-2, 2, size=(1, 4)))
            rho = apply_sequence_noisy(seq, rho, 1e5)
            new_trace = rho.trace().real
            assert new_trace <= trace + 1e-12
            trace = new_trace

    def test_reference_sequence_reaches_target(self):
        # regression fixture produced by this module's optimizer
        seq = reference_sequence()
        plus = logical_plus(build_pi11())
        start = DickeState.basis_state(11, 0)
        assert seq.n_pulses == 10
        assert ideal_infidelity(seq, plus, start) <= 1e-6


class TestGradients:
    @pytest.mark.parametrize("chain_cls,extra", [(_IdealChain, ()), (_NoisyChain, (1e6,))])
    def test_prefix_suffix_matches_naive_fd(self, chain_cls, extra):
        rng = np.random.default_rng(8)
        plus = logical_plus(build_pi11())
        start = DickeState.basis_state(11, 0)
        chain = chain_cls(plus, start, *extra)
        x = rng.uniform(-2, 2, size=12)
        f, g = chain.cost_and_grad(x)
        assert f == chain.cost(x)
        h = 1e-6
        for i in range(x.size):
            e = np.zeros_like(x)
            e[i] = h
            naive = (chain.cost(x + e) - chain.cost(x - e)) / (2 * h)
            assert abs(g[i] - naive) < 1e-9


class TestOptimizer:
    def test_identity_preparation(self):
        target = DickeState.basis_state(11, 0)
        res = optimize_preparation(target, 1, restarts=3, seed=1)
        assert res.infidelity <= 1e-10

    def test_reproducible(self):
        plus = logical_plus(build_pi11())
        r1 = optimize_preparation(plus, 3, restarts=2, seed=77, max_iters=60)
        r2 = optimize_preparation(plus, 3, restarts=2, seed=77, max_iters=60)
        assert abs(r1.infidelity - r2.infidelity) < 1e-15
        assert np.array_equal(r1.sequence.pulses, r2.sequence.pulses)

    def test_plus_state_p10(self):
        plus = logical_plus(build_pi11())
        res = optimize_preparation(plus, 10, restarts=4, seed=7, tol=1e-9)
        assert res.infidelity <= 1e-6

    def test_lambda_minus_at_nine_pulses(self):
        from piqec.tomography import hadamard_eigenvectors

        _, minus = hadamard_eigenvectors(build_pi11())
        res = optimize_preparation(minus, 9, restarts=3, seed=3, tol=1e-9)
        assert res.infidelity <= 1e-6

    def test_noisy_mode_needs_cooperativity(self):
        plus = logical_plus(build_pi11())
        with pytest.raises(ValueError):
            optimize_preparation(plus, 2, mode="noisy")

    def test_noisy_leakage_lower_bounds_infidelity(self):
        plus = logical_plus(build_pi11())
        res = optimize_preparation(plus, 4, mode="noisy", cooperativity=1e5,
                                   restarts=1, seed=3, max_iters=150)
        rho = apply_sequence_noisy(res.sequence, DickeState.basis_state(11, 0).density_matrix(),
                                   1e5)
        assert res.infidelity >= (1 - rho.trace().real) - 1e-12

    def test_rejects_zero_starts(self):
        with pytest.raises(ValueError):
            optimize_preparation(DickeState.basis_state(3, 0), 1, restarts=0)


class TestPowerLawFit:
    def test_exact_power_law_recovered(self):
        c = np.array([1e4, 1e5, 1e6, 1e7])
        y = 3.5 * c**-0.5
        pref, expo = fit_power_law(c, y)
        assert abs(expo + 0.5) < 1e-12
        assert abs(pref - 3.5) < 1e-9
