"""Acceptance criteria, one test per criterion (split into checkable clauses).

Each test prints one PASS/FAIL line (visible with pytest -s or -rA).  Two
clauses are known to be unattainable and are left red deliberately:

* criterion 2b: the (4,3,2) code cannot satisfy the t=2 Knill-Laflamme
  conditions.  The weight-3 bit-flip matrix element <1|XXX|0> is a sum of
  strictly positive terms (positive amplitudes times positive Dicke matrix
  elements), so it cannot vanish; the ((19,2,5)) label overstates the
  distance, which the sufficient condition g >= 2t+1 would require g = 5
  to reach.  The independent 2^N oracle confirms the counterexample.
* criterion 8d: the logical-Hadamard infidelity curve saturates at low
  cooperativity (the phase-gate fidelity alone is 0.80 at C = 1e4, and the
  minimum achievable pulse decay weight is ~3.2 rad), pinning the 1e4..1e8
  log-log slope near -0.43 for every admissible sequence; the same
  construction fits -0.49 on an unsaturated grid such as 1e6..1e10.
"""

import time
from math import gcd

import numpy as np
import pytest

from piqec.codes import (build_aab_plus, build_bg, build_bgm, build_pi7, build_pi11,
                         kl_check, lemma_S, logical_plus)
from piqec.dicke import DickeState

from oracles import kl_check_bruteforce


def report(criterion, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {criterion} {status}: {detail}")


class TestCriterion1CodeIdentities:
    def test_code_identities(self):
        t0 = time.time()
        bg = build_bg(4, 3)
        ok = (abs(bg.logical0.amplitudes[0] - np.sqrt(5) / 4) < 1e-14
              and abs(bg.logical0.amplitudes[8] - np.sqrt(11) / 4) < 1e-14)
        for other in (build_bgm(4, 3, 1), build_aab_plus(3, 1, 4)):
            for a, b in ((bg.logical0, other.logical0), (bg.logical1, other.logical1)):
                ok = ok and np.abs(a.amplitudes - b.amplitudes).max() <= 1e-12
        elapsed = time.time() - t0
        ok = ok and elapsed < 1.0
        report("C1", ok, f"bg(4,3) = bgm(4,3,1) = aab+(3,1,4), amplitudes "
                         f"(sqrt5/4, sqrt11/4); {elapsed:.3f} s")
        assert ok


class TestCriterion2DistanceCertification:
    def test_2a_distance_three_with_oracle(self):
        t0 = time.time()
        details = []
        ok = True
        for code, t in ((build_pi7(), 1), (build_pi11(), 1)):
            rep = kl_check(code, t)
            ok = ok and rep.passed
            if code.n_qubits <= 13:
                oracle_ok, orth, deform, _ = kl_check_bruteforce(code, t)
                ok = (ok and oracle_ok == rep.passed
                      and abs(rep.orthogonality_residual - orth) < 1e-10
                      and abs(rep.deformation_residual - deform) < 1e-10)
            details.append(f"{code.label}: {rep.verdict}")
        elapsed = time.time() - t0
        ok = ok and elapsed < 300
        report("C2a", ok, "; ".join(details) + f"; oracle agrees; {elapsed:.1f} s")
        assert ok

    def test_2b_distance_five_for_19_2_5(self):
        # known-impossible claim: a weight-3 counterexample exists (module docstring)
        rep = kl_check(build_bgm(4, 3, 2), 2)
        report("C2b", rep.passed, f"(4,3,2) at t=2: {rep.verdict}")
        assert rep.passed, ("the ((19,2,5)) distance claim is mathematically false; "
                            "see the module docstring")


class TestCriterion3LemmaGrid:
    def test_lemma_grid(self):
        t0 = time.time()
        count = 0
        ok = True
        for b in range(2, 7):
            for g in range(1, 2 * b):
                for m in range(1, 5):
                    for x in range(1, m + 1):
                        ok = ok and lemma_S(b, g, m, x) == 0
                        count += 1
        elapsed = time.time() - t0
        ok = ok and elapsed < 30
        report("C3", ok, f"{count} grid evaluations all exactly zero; {elapsed:.1f} s")
        assert ok


class TestCriterion4TransversalActions:
    def test_transversal_actions(self):
        from piqec.transversal import transversal_z_logical_action

        ok = True
        a = transversal_z_logical_action(build_pi11(), 3 * np.pi / 4)
        ok = ok and abs(a.equivalent_z_angle - np.pi / 4) < 1e-12
        a = transversal_z_logical_action(build_pi7(), 2 * np.pi / 5)
        ok = ok and abs(a.equivalent_z_angle - 4 * np.pi / 5) < 1e-12
        pairs = [(b, g) for b in range(2, 8) for g in range(1, 2 * b, 2)
                 if gcd(b, g) == 1 and b <= 7]
        for b, g in pairs:
            k = pow(g, -1, 2 * b)
            code = build_bg(b, g)
            for u in range(b):
                act = transversal_z_logical_action(code, u * k * np.pi / b)
                delta = abs(act.equivalent_z_angle - (np.pi * u / b) % (2 * np.pi))
                ok = ok and min(delta, abs(delta - 2 * np.pi)) < 1e-12
        report("C4", ok, f"pi11 -> Z(pi/4), pi7 -> Z(4pi/5), coprime ladder over "
                         f"{len(pairs)} (b,g) pairs with b <= 7")
        assert ok


class TestCriterion5CzIdentity:
    def test_cz_identity(self):
        from piqec.gpg import cz_three_pulse_phase, logical_cz, repetition_weight_model

        ok = all(abs(cz_three_pulse_phase(wa, wb) - (-1.0) ** (wa * wb)) < 1e-12
                 for wa in range(25) for wb in range(25))
        _, rec = logical_cz(repetition_weight_model(3), build_pi11())
        ok = ok and rec.residual <= 1e-12
        report("C5", ok, f"three-pulse phase exact on weights <= 24; logical CZ "
                         f"residual {rec.residual:.2e}")
        assert ok


class TestCriterion6NonlinearGpg:
    def test_nonlinear_gpg_and_cnots(self):
        from piqec.gpg import cnot_pi_control, cnot_stabilizer_control, nonlinear_gpg

        t0 = time.time()
        _, rec = nonlinear_gpg(7, np.pi, 0.0, np.pi / 4)
        ok = rec.closure_residual <= 1e-6 and rec.vacuum_fidelity_min >= 1 - 1e-8
        r1 = cnot_pi_control(build_pi7())
        r2 = cnot_stabilizer_control(None, build_pi7())
        ok = ok and r1.cnot_residual <= 1e-6 and r2.cnot_residual <= 1e-6
        ok = ok and r1.vacuum_fidelity_min >= 1 - 1e-8 and r2.vacuum_fidelity_min >= 1 - 1e-8
        elapsed = time.time() - t0
        ok = ok and elapsed < 120
        report("C6", ok, f"closure {rec.closure_residual:.1e}; CNOT residuals "
                         f"{r1.cnot_residual:.1e} / {r2.cnot_residual:.1e}; "
                         f"vacuum return >= 1-1e-8; {elapsed:.1f} s")
        assert ok


class TestCriterion7SuperGoldenGate:
    def test_super_golden_gate(self):
        from piqec.transversal import (phase_min_distance, search_super_golden_rational,
                                       tau60, tau60_tilde)

        t0 = time.time()
        dist = phase_min_distance(tau60_tilde(np.pi * 167 / 704), tau60())
        approx = search_super_golden_rational(1e-6)
        elapsed = time.time() - t0
        ok = (dist < 1e-6 and approx is not None and approx.distance < 1e-6
              and approx.denominator <= 704 and elapsed < 1.0)
        report("C7", ok, f"distance {dist:.3e} at pi*167/704; search found "
                         f"{approx.numerator}/{approx.denominator}; {elapsed:.3f} s")
        assert ok


@pytest.fixture(scope="module")
def fig2_data():
    """Both fidelity-scaling curves at 8 restarts per point (criterion 8)."""
    from piqec.prep import fit_power_law, scan_infidelity_vs_C
    from piqec.tomography import logical_hadamard_channel, optimized_hadamard_prep

    grid = [1e4, 1e5, 1e6, 1e7, 1e8]
    t0 = time.time()
    code = build_pi11()
    scan = scan_infidelity_vs_C(logical_plus(code), 10, grid, seed=42, restarts=8)
    hadamard = []
    warm = ()
    for i, c in enumerate(grid):
        prep = optimized_hadamard_prep(code, 10, c, seed=43, restarts=8,
                                       extra_starts=warm)
        warm = (prep.sequence.pulses,)
        _, rec = logical_hadamard_channel(code, prep.sequence, c)
        hadamard.append(rec.process_infidelity)
    h_pref, h_expo = fit_power_law(grid, hadamard)
    elapsed = time.time() - t0
    return {
        "grid": grid,
        "prep": scan.infidelities,
        "prep_exponent": scan.exponent,
        "hadamard": hadamard,
        "hadamard_exponent": h_expo,
        "elapsed": elapsed,
    }


class TestCriterion8FidelityScaling:
    def test_8a_prep_exponent(self, fig2_data):
        expo = fig2_data["prep_exponent"]
        ok = -0.55 <= expo <= -0.45
        report("C8a", ok, f"prep-infidelity exponent {expo:.4f} in [-0.55, -0.45]")
        assert ok

    def test_8b_prep_infidelity_at_1e8(self, fig2_data):
        val = fig2_data["prep"][-1]
        ok = val <= 1e-2
        report("C8b", ok, f"prep infidelity {val:.3e} <= 1e-2 at C = 1e8")
        assert ok

    def test_8c_hadamard_infidelity_at_1e8(self, fig2_data):
        val = fig2_data["hadamard"][-1]
        ok = val <= 3e-2
        report("C8c", ok, f"Hadamard process infidelity {val:.3e} <= 3e-2 at C = 1e8")
        assert ok

    def test_8d_hadamard_exponent(self, fig2_data):
        # known-unattainable band: saturation pins the slope near -0.43 (module docstring)
        expo = fig2_data["hadamard_exponent"]
        ok = -0.55 <= expo <= -0.45
        report("C8d", ok, f"Hadamard-infidelity exponent {expo:.4f} vs [-0.55, -0.45]; "
                          f"curve {[f'{v:.3e}' for v in fig2_data['hadamard']]}")
        assert ok, ("the Hadamard exponent band is unattainable on the 1e4..1e8 grid; "
                    "see the module docstring")

    def test_8e_runtime(self, fig2_data):
        ok = fig2_data["elapsed"] < 1800
        report("C8e", ok, f"both curves with 8 restarts per point in "
                          f"{fig2_data['elapsed']:.0f} s (< 1800 s)")
        assert ok


class TestCriterion9Table1:
    def test_table1(self):
        from piqec.switching import gate_cost_table, roundtrip_cost

        t0 = time.time()
        expected = [(112, 83), (384, 139), (752, 195), (1472, 251), (2224, 307)]
        rows = gate_cost_table()
        got = [(r.lower_bound, r.upper_bound) for r in rows]
        ok = got == expected and roundtrip_cost(11) == 167
        ok = ok and all(roundtrip_cost(n) == 14 * n + 13 for n in (11, 19, 27, 35, 43))
        elapsed = time.time() - t0
        ok = ok and elapsed < 1.0
        report("C9", ok, f"five (lower, upper) pairs match exactly; roundtrip "
                         f"14N+13 checked; {elapsed:.3f} s")
        assert ok


class TestCriterion10IdealSwitching:
    def test_ideal_switching(self):
        from piqec.switching import SwitchPlan, simulate_switch

        t0 = time.time()
        cases = [(build_pi7(), 2 * np.pi / 5), (build_pi11(), 3 * np.pi / 4),
                 (build_bg(2, 1), np.pi / 2), (build_bg(5, 3), np.pi / 5),
                 (build_bg(6, 1), np.pi / 6)]
        worst = 0.0
        for code, omega in cases:
            for circuit in ("swap", "cz"):
                plan = SwitchPlan(code, omega, circuit)
                for psi in ([1, 0], [0, 1], [1, 1j], [0.6, 0.8]):
                    out = simulate_switch(plan, psi)
                    worst = max(worst, out.logical_deviation,
                                abs(out.ancilla_return_fidelity - 1))
        elapsed = time.time() - t0
        ok = worst <= 1e-12 and elapsed < 10
        report("C10", ok, f"both circuits on pi7, pi11 and three (b,g) codes; worst "
                          f"residual {worst:.2e}; {elapsed:.1f} s")
        assert ok
