"""Logical-level simulation of both measurement-free code-switching circuits,
plus the gate-cost ledger comparing against stabilizer-to-stabilizer switching.

The stabilizer register A is a logical qubit (for ideal runs) or an even-odd
weight model (for noisy runs); the PI register B lives in its full Dicke
space.  Joint operators act on kron(A, B).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import PiCode, is_even_odd, logical_plus
from .dicke import DickeState, transversal_z_rotation
from .errors import PreconditionError
from .gpg import lgpg_damping_matrix, repetition_weight_model
from .tomography import exact_hadamard_unitary
from .transversal import transversal_z_logical_action

H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

CIRCUITS = ("swap", "cz")


@dataclass
class SwitchPlan:
    """One code-switching run: which circuit, which codes, which rotation angle."""

    pi_code: PiCode
    omega: float
    circuit: str = "swap"
    stabilizer_model: PiCode = field(default_factory=repetition_weight_model)
    omega_prime: float = field(init=False)

    def __post_init__(self):
        if self.circuit not in CIRCUITS:
            raise ValueError(f"circuit must be one of {CIRCUITS}")
        action = transversal_z_logical_action(self.pi_code, self.omega)
        self.omega_prime = action.equivalent_z_angle


def _code_projectors(code: PiCode):
    c0, c1 = code.logical0.amplitudes, code.logical1.amplitudes
    p0 = np.outer(c0, c0.conj())
    p1 = np.outer(c1, c1.conj())
    perp = np.eye(code.n_qubits + 1) - p0 - p1
    return c0, c1, p0, p1, perp


def _joint_gates(code: PiCode):
    """Ideal logical two-register gates on the 2 x (N+1) joint space."""
    c0, c1, p0, p1, perp = _code_projectors(code)
    dim = code.n_qubits + 1
    x_b = np.outer(c1, c0.conj()) + np.outer(c0, c1.conj()) + perp
    ket0 = np.diag([1.0, 0.0])
    ket1 = np.diag([0.0, 1.0])
    x_a = np.array([[0, 1], [1, 0]], dtype=complex)
    gates = {
        "cnot_ab": np.kron(ket0, np.eye(dim)) + np.kron(ket1, x_b),
        "cnot_ba": np.kron(np.eye(2), p0 + perp) + np.kron(x_a, p1),
        "cz": np.kron(np.eye(2), np.eye(dim)) - 2 * np.kron(ket1, p1),
        "hh": np.kron(H2, exact_hadamard_unitary(code)),
    }
    return gates


@dataclass
class SwitchOutcome:
    logical_out: np.ndarray
    expected: np.ndarray
    ancilla_return_fidelity: float
    logical_deviation: float

    @property
    def passed(self) -> bool:
        return self.logical_deviation <= 1e-12 and abs(self.ancilla_return_fidelity - 1) <= 1e-12


def simulate_switch(plan: SwitchPlan, input_logical) -> SwitchOutcome:
    """Run one ideal switching circuit on a logical input state.

    The swap variant sandwiches the transversal rotation between two CNOT
    pairs with the ancilla in the encoded zero; the cz variant uses four CZs
    and two Hadamard layers with the ancilla in the encoded plus.  Both end
    with the logical qubit rotated by omega_prime and the ancilla restored.
    """
    code = plan.pi_code
    psi = np.asarray(input_logical, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    gates = _joint_gates(code)
    rot = np.kron(np.eye(2), transversal_z_rotation(code.n_qubits, plan.omega).matrix)

    if plan.circuit == "swap":
        ancilla = code.logical0.amplitudes
        ops = [gates["cnot_ab"], gates["cnot_ba"], rot, gates["cnot_ba"], gates["cnot_ab"]]
    else:
        ancilla = logical_plus(code).amplitudes
        ops = [gates["cz"], gates["hh"], gates["cz"], rot,
               gates["cz"], gates["hh"], gates["cz"]]

    state = np.kron(psi, ancilla)
    for op in ops:
        state = op @ state
    out_matrix = state.reshape(2, code.n_qubits + 1)
    out_logical = out_matrix @ ancilla.conj()
    ancilla_fidelity = float(np.linalg.norm(out_logical) ** 2)

    expected = np.diag([1.0, np.exp(1j * plan.omega_prime)]) @ psi
    norm_out = out_logical / np.linalg.norm(out_logical)
    overlap = np.vdot(expected, norm_out)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    deviation = float(np.linalg.norm(norm_out - phase * expected))
    return SwitchOutcome(out_logical, expected, ancilla_fidelity, deviation)


# ---------------------------------------------------------------------------
# noisy end-to-end variant (cz circuit only)


def _apply_superop_on_b(rho: np.ndarray, superop: np.ndarray, dim_a: int, dim_b: int):
    rho4 = rho.reshape(dim_a, dim_b, dim_a, dim_b)
    perm = rho4.transpose(0, 2, 1, 3).reshape(dim_a * dim_a, dim_b * dim_b)
    out = perm @ superop.T
    return out.reshape(dim_a, dim_a, dim_b, dim_b).transpose(0, 2, 1, 3).reshape(
        dim_a * dim_b, dim_a * dim_b)


def _noisy_cz_multiplier(n_a: int, n_b: int, cooperativity: float) -> np.ndarray:
    """Coherence multipliers of the three-pulse CZ built from lossy linear GPGs.

    Pulse angles (-pi/2, +pi/2, +pi/2) on the joint, A, and B registers
    reproduce the CZ phase (-1)^(wA wB) exactly in the noiseless limit.
    """
    f_a = lgpg_damping_matrix(n_a, np.pi / 2, cooperativity)
    f_b = lgpg_damping_matrix(n_b, np.pi / 2, cooperativity)
    f_ab_full = lgpg_damping_matrix(n_a + n_b, -np.pi / 2, cooperativity)
    dim_a, dim_b = n_a + 1, n_b + 1
    wa = np.arange(dim_a)
    wb = np.arange(dim_b)
    # kron layout: joint index (a, b) -> a * dim_b + b
    joint_w = (wa[:, None] + wb[None, :]).reshape(-1)
    return f_ab_full[np.ix_(joint_w, joint_w)] * np.kron(f_a, f_b)


@dataclass
class NoisySwitchRecord:
    cooperativity: float
    process_fidelity: float
    ancilla_prep_infidelity: float
    hadamard_process_infidelity: float
    cz_gate_infidelity: float

    @property
    def process_infidelity(self) -> float:
        return 1.0 - self.process_fidelity


def simulate_switch_noisy(plan: SwitchPlan, cooperativity: float, n_pulses: int = 10,
                          seed: int = 0, restarts: int = 4) -> NoisySwitchRecord:
    """Noisy end-to-end cz-variant switch: lossy ancilla prep, lossy logical
    Hadamards on B, CZs from three lossy linear GPGs, noiseless transversal
    rotations, and the induced logical channel's process fidelity vs Z(omega').
    """
    from .gpg import lgpg_process_infidelity
    from .prep import apply_sequence_noisy, optimize_preparation
    from .tomography import (logical_hadamard_channel, optimized_hadamard_prep,
                             process_fidelity)

    if plan.circuit != "cz":
        raise PreconditionError("the noisy protocol is modeled for the cz circuit only")
    code = plan.pi_code
    model = plan.stabilizer_model
    if not is_even_odd(model) or not is_even_odd(code):
        raise PreconditionError("noisy switching requires even-odd codes on both sides")
    n_a, n_b = model.n_qubits, code.n_qubits
    dim_a, dim_b = n_a + 1, n_b + 1

    # lossy ancilla preparation |D_0> -> |+_B>
    prep = optimize_preparation(logical_plus(code), n_pulses, mode="noisy",
                                cooperativity=cooperativity, restarts=restarts,
                                seed=seed)
    rho_b = apply_sequence_noisy(prep.sequence, DickeState.basis_state(n_b, 0).density_matrix(),
                                 cooperativity)

    # lossy logical Hadamard superoperator on B
    h_prep = optimized_hadamard_prep(code, n_pulses, cooperativity, seed=seed,
                                     restarts=restarts)
    e_hb, h_record = logical_hadamard_channel(code, h_prep.sequence, cooperativity)

    cz_mult = _noisy_cz_multiplier(n_a, n_b, cooperativity)

    s0, s1 = model.logical0.amplitudes, model.logical1.amplitudes
    h_a = (np.outer(s0 + s1, s0.conj()) + np.outer(s0 - s1, s1.conj())) / np.sqrt(2)
    h_a += np.eye(dim_a) - np.outer(s0, s0.conj()) - np.outer(s1, s1.conj())
    h_a_joint = np.kron(h_a, np.eye(dim_b))
    rot = np.kron(np.eye(dim_a),
                  transversal_z_rotation(n_b, plan.omega).matrix)

    def run_channel(rho_a):
        rho = np.kron(rho_a, rho_b)
        def cz(r):
            return r * cz_mult
        def hadamards(r):
            r = h_a_joint @ r @ h_a_joint.conj().T
            return _apply_superop_on_b(r, e_hb, dim_a, dim_b)
        rho = cz(rho)
        rho = hadamards(rho)
        rho = cz(rho)
        rho = rot @ rho @ rot.conj().T
        rho = cz(rho)
        rho = hadamards(rho)
        rho = cz(rho)
        return rho

    basis = (s0, s1)
    e_logical = np.zeros((4, 4), dtype=complex)
    for x in (0, 1):
        for y in (0, 1):
            rho_out = run_channel(np.outer(basis[x], basis[y].conj()))
            traced = np.trace(rho_out.reshape(dim_a, dim_b, dim_a, dim_b),
                              axis1=1, axis2=3)
            for xp in (0, 1):
                for yp in (0, 1):
                    e_logical[2 * xp + yp, 2 * x + y] = basis[xp].conj() @ traced @ basis[yp]

    target = np.diag([1.0, np.exp(1j * plan.omega_prime)])
    f_pro = process_fidelity(e_logical, target)
    cz_gate = (lgpg_process_infidelity(n_a + n_b, np.pi / 2, cooperativity)
               + lgpg_process_infidelity(n_a, np.pi / 2, cooperativity)
               + lgpg_process_infidelity(n_b, np.pi / 2, cooperativity))
    return NoisySwitchRecord(
        cooperativity=cooperativity,
        process_fidelity=float(f_pro),
        ancilla_prep_infidelity=prep.infidelity,
        hadamard_process_infidelity=h_record.process_infidelity,
        cz_gate_infidelity=float(cz_gate),
    )


# ---------------------------------------------------------------------------
# gate-cost ledger


@dataclass
class CostRow:
    distance: int
    code_a: str
    code_b_stabilizer: str
    code_b_pi: str
    n_tri: int
    n_pi: int

    @property
    def lower_bound(self) -> int:
        return 8 * (self.n_tri - 1)

    @property
    def upper_bound(self) -> int:
        return 7 * self.n_pi + 6


_TABLE = [
    (3, "[[7,1,3]]", "[[15,1,3]]", "PI-(4,3,1) = ((11,2,3))", 15, 11),
    (5, "[[17,1,5]]", "[[49,1,5]]", "PI-(4,3,2) = ((19,2,5))", 49, 19),
    (7, "[[23,1,7]]", "[[95,1,7]]", "PI-(4,3,3) = ((27,2,7))", 95, 27),
    (9, "[[45,1,9]]", "[[185,1,9]]", "PI-(4,3,4) = ((35,2,9))", 185, 35),
    (11, "[[47,1,11]]", "[[279,1,11]]", "PI-(4,3,5) = ((43,2,11))", 279, 43),
]


def gate_cost_table() -> list[CostRow]:
    """Switching-cost comparison rows; every row satisfies 7 N_pi + 6 < 8 (N_tri - 1)."""
    rows = [CostRow(*entry) for entry in _TABLE]
    for row in rows:
        if not row.upper_bound < row.lower_bound:
            raise AssertionError(f"cost comparison violated in row d={row.distance}")
    return rows


def roundtrip_cost(n_b: int) -> int:
    """Gate count for switching into the PI code and back: 14 N_B + 13."""
    return 14 * n_b + 13
