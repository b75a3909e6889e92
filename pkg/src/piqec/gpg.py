"""Geometric phase gates: the noisy linear GPG channel, the three-pulse CZ,
truncated-Fock nonlinear GPGs, and the conditional CNOT constructions.

Two modeling conventions used throughout:

* The stabilizer-code register is represented by an even-odd weight model (a
  PiCode whose codewords are weight distributions, e.g. the 3-qubit
  repetition pattern or the Steane weight pattern).  Every gate simulated
  here is either a function of the Hamming-weight operator or acts
  transversally, so the weight distribution captures the logical action
  exactly.
* The coherent part of the noisy linear GPG multiplies the (n, m) coherence
  by exp(-i (n^2 - m^2) phi).  The ideal per-pulse entangling gate used by
  the preparation module is defined as the C -> infinity limit of this
  channel, diag(exp(-i phi w^2)), so the noisy and ideal paths agree exactly
  in the noiseless limit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, gcd

import numpy as np

from .codes import PiCode, is_even_odd
from .dicke import DickeOperator, DickeState, collective_operator, _expm_i_hermitian
from .errors import ClosureError, PreconditionError, TruncationError

DEFAULT_CUTOFF = 64
MAX_CUTOFF = 1024
TRUNCATION_TOL = 1e-8


# ---------------------------------------------------------------------------
# noisy linear GPG channel


def lgpg_damping_matrix(n_qubits: int, phi: float, cooperativity: float) -> np.ndarray:
    """Coherence multipliers f_{n,m}(phi) of the lossy linear GPG on N qubits.

    f carries a Gaussian decay in (m-n), an excitation-weighted decay in
    (m+n), and the coherent phase exp(-i (n^2 - m^2) phi).  |phi| enters the
    decay exponents because optimized pulse angles may be negative.
    """
    if cooperativity <= 0:
        raise ValueError("cooperativity must be positive")
    n = np.arange(n_qubits + 1, dtype=float)
    diff = n[:, None] - n[None, :]
    tot = n[:, None] + n[None, :]
    eps = 1.0 + 2.0 ** (-n_qubits)
    a = abs(phi) / 2 * np.sqrt(2 * eps / cooperativity)
    b = abs(phi) / 2 / np.sqrt(2 * cooperativity * eps)
    decay = np.exp(-a * diff**2 - b * tot)
    phase = np.exp(-1j * (n[:, None] ** 2 - n[None, :] ** 2) * phi)
    return decay * phase


def noisy_lgpg(rho: np.ndarray, phi: float, cooperativity: float) -> np.ndarray:
    """Apply the lossy linear GPG channel entrywise to a Dicke density matrix.

    Not trace preserving: excited-state decay is treated as leakage, so the
    trace can only decrease.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("rho must be a square matrix")
    if np.abs(rho - rho.conj().T).max() > 1e-9:
        raise ValueError("rho must be Hermitian")
    if rho.trace().real > 1 + 1e-9:
        raise ValueError("rho must have trace <= 1")
    return rho * lgpg_damping_matrix(rho.shape[0] - 1, phi, cooperativity)


def lgpg_unitary(n_qubits: int, phi: float) -> DickeOperator:
    """Ideal linear GPG diag(exp(-i phi w^2)): the noiseless limit of the channel."""
    w = np.arange(n_qubits + 1)
    return DickeOperator(n_qubits, np.diag(np.exp(-1j * phi * w**2)))


def lgpg_process_infidelity(n_qubits: int, phi: float, cooperativity: float) -> float:
    """Entanglement infidelity of one noisy linear GPG over the full qubit space.

    Weight multiplicities are binomial, so this equals
    1 - 4^-N sum_{n,m} C(N,n) C(N,m) |f_{n,m}|, which linearizes to
    pi N / (2 sqrt(2 (1 + 2^-N) C)) at phi = pi/2.
    """
    n = n_qubits
    damp = np.abs(lgpg_damping_matrix(n, phi, cooperativity))
    logc = np.array([np.log(comb(n, w)) for w in range(n + 1)])
    weights = np.exp(logc - n * np.log(2))
    return float(1 - weights @ damp @ weights)


# ---------------------------------------------------------------------------
# three-pulse CZ identity and the logical CZ on weight models


def cz_three_pulse_phase(w_a: int, w_b: int) -> complex:
    """Phase of exp(i pi/2 (wA+wB)^2) exp(-i pi/2 wA^2) exp(-i pi/2 wB^2).

    Exponent algebra gives exp(i pi wA wB) = (-1)^(wA wB).
    """
    if w_a < 0 or w_b < 0:
        raise ValueError("weights must be non-negative")
    exponent = (w_a + w_b) ** 2 - w_a**2 - w_b**2
    return complex(np.exp(1j * np.pi / 2 * exponent))


def repetition_weight_model(n_qubits: int = 3) -> PiCode:
    """Weight model of an odd-length repetition code: |0> at weight 0, |1> at n."""
    if n_qubits % 2 == 0:
        raise ValueError("repetition model must have odd length to be even-odd")
    return PiCode(n_qubits, DickeState.basis_state(n_qubits, 0),
                  DickeState.basis_state(n_qubits, n_qubits),
                  family="custom", params={"model": f"repetition-{n_qubits}"})


def steane_weight_model() -> PiCode:
    """Weight distribution of the Steane code: |0_L> on weights {0, 4}, |1_L> on {3, 7}."""
    l0 = DickeState.from_weights(7, {0: np.sqrt(1 / 8), 4: np.sqrt(7 / 8)})
    l1 = DickeState.from_weights(7, {3: np.sqrt(7 / 8), 7: np.sqrt(1 / 8)})
    return PiCode(7, l0, l1, family="custom", params={"model": "steane-weights"})


@dataclass
class CzVerification:
    residual: float
    n_a: int
    n_b: int

    @property
    def passed(self) -> bool:
        return self.residual <= 1e-12


def logical_cz(code_a: PiCode, code_b: PiCode) -> tuple[np.ndarray, CzVerification]:
    """Three-pulse CZ between two even-odd codes, as a joint diagonal operator.

    The operator acts on the kron(A, B) weight basis with phase
    (-1)^(wA wB); for even-odd codes this is the logical CZ exactly.
    """
    for name, code in (("A", code_a), ("B", code_b)):
        if not is_even_odd(code):
            raise PreconditionError(
                f"code {name} ({code.label}) is not an even-odd code")
    wa = np.arange(code_a.n_qubits + 1)
    wb = np.arange(code_b.n_qubits + 1)
    phases = np.array([[cz_three_pulse_phase(a, b) for b in wb] for a in wa])
    op = np.diag(phases.reshape(-1))
    residual = 0.0
    for x, state_a in enumerate((code_a.logical0, code_a.logical1)):
        for y, state_b in enumerate((code_b.logical0, code_b.logical1)):
            joint = np.kron(state_a.amplitudes, state_b.amplitudes)
            expected = (-1.0) ** (x * y) * joint
            residual = max(residual, np.abs(op @ joint - expected).max())
    return op, CzVerification(float(residual), code_a.n_qubits, code_b.n_qubits)


# ---------------------------------------------------------------------------
# truncated-Fock tools


def fock_lowering(cutoff: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, cutoff)), 1).astype(complex)


_DISPLACEMENT_CACHE: dict = {}


def displacement(cutoff: int, alpha: complex) -> np.ndarray:
    """Displacement operator exp(alpha a' - alpha* a), exact matrix elements.

    Uses the associated-Laguerre closed form per Fock diagonal, so each entry
    is the true infinite-dimensional matrix element; the truncated matrix is
    therefore not exactly unitary, and D(alpha) D(-alpha) deviates from the
    identity near the top levels.  That deviation is what the truncation
    health check measures.
    """
    from scipy.special import eval_genlaguerre, gammaln

    alpha = complex(alpha)
    key = (cutoff, alpha)
    cached = _DISPLACEMENT_CACHE.get(key)
    if cached is not None:
        return cached
    x = abs(alpha) ** 2
    arg = np.angle(alpha) if alpha != 0 else 0.0
    log_mag = np.log(abs(alpha)) if alpha != 0 else -np.inf
    d = np.zeros((cutoff, cutoff), dtype=complex)
    for k in range(cutoff):
        n = np.arange(cutoff - k)
        log_ratio = 0.5 * (gammaln(n + 1) - gammaln(n + k + 1)) - x / 2
        mag = np.exp(log_ratio + (k * log_mag if k else 0.0))
        lag = eval_genlaguerre(n, k, x)
        d[n + k, n] = mag * np.exp(1j * k * arg) * lag
        if k > 0:
            d[n, n + k] = mag * np.exp(-1j * k * (arg + np.pi)) * lag
    if len(_DISPLACEMENT_CACHE) > 256:
        _DISPLACEMENT_CACHE.clear()
    _DISPLACEMENT_CACHE[key] = d
    return d


def mode_rotation(cutoff: int, angle: float) -> np.ndarray:
    """Phase-space rotation exp(i angle n) as a diagonal vector."""
    return np.exp(1j * angle * np.arange(cutoff))


def displacement_truncation_defect(cutoff: int, alpha: complex,
                                   protected_fraction: float = 0.5) -> float:
    """Norm of D(alpha) D(-alpha) - 1 restricted to the protected bottom levels.

    A coherent excursion from level n spreads over ~ |alpha| sqrt(n) levels,
    so the top of the ladder can never be protected; the bottom half can.
    With the default fraction, alpha = sqrt(pi)/4 passes 1e-8 from cutoff 32
    up, and simulated trajectories are kept far inside the protected region
    by the tail-mass invariant.
    """
    if abs(alpha) ** 2 >= cutoff:
        return 1.0  # coherent excursion exceeds the ladder outright
    d = displacement(cutoff, alpha)
    dd = displacement(cutoff, -alpha)
    keep = int(np.ceil(protected_fraction * cutoff))
    block = (d @ dd - np.eye(cutoff))[:keep, :keep]
    return float(np.linalg.norm(block, ord=2))


def ensure_cutoff(alphas, cutoff: int = DEFAULT_CUTOFF) -> int:
    """Smallest power-of-two-scaled cutoff whose displacements pass the health check."""
    m = cutoff
    while m <= MAX_CUTOFF:
        if all(displacement_truncation_defect(m, a) <= TRUNCATION_TOL for a in alphas):
            return m
        m *= 2
    raise TruncationError(
        f"no cutoff <= {MAX_CUTOFF} passes the truncation health check for amplitudes {alphas}")


@dataclass
class JointState:
    """Spin-Dicke (x) truncated-Fock state, stored as an (N+1) x M tensor."""

    n_qubits: int
    cutoff: int
    tensor: np.ndarray

    def __post_init__(self):
        self.tensor = np.asarray(self.tensor, dtype=complex)
        if self.tensor.shape != (self.n_qubits + 1, self.cutoff):
            raise ValueError("tensor shape must be (N+1, cutoff)")
        if abs(self.norm() - 1) > 1e-10:
            raise ValueError(f"joint state not normalized: {self.norm()}")
        self.check_tail()

    def norm(self) -> float:
        return float(np.linalg.norm(self.tensor))

    def tail_mass(self) -> float:
        tail_start = self.cutoff - max(1, self.cutoff // 10)
        return float(np.sum(np.abs(self.tensor[:, tail_start:]) ** 2))

    def check_tail(self):
        if self.tail_mass() > TRUNCATION_TOL:
            raise TruncationError(
                f"tail mass {self.tail_mass():.3e} in the top 10% of Fock levels; "
                "increase the cutoff")

    def entanglement_entropy(self) -> float:
        svals = np.linalg.svd(self.tensor, compute_uv=False)
        p = svals**2
        p = p[p > 1e-300]
        p = p / p.sum()
        return float(-(p * np.log(p)).sum())


def conditional_rotation(n_qubits: int, theta: float, cutoff: int,
                         generator: str = "weight") -> np.ndarray:
    """Joint diagonal phases of exp(i theta g(w) a'a) as an (N+1, M) array.

    generator "weight" uses g(w) = w; "jz" uses g(w) = N/2 - w.
    """
    w = np.arange(n_qubits + 1, dtype=float)
    g = w if generator == "weight" else n_qubits / 2 - w
    n = np.arange(cutoff)
    return np.exp(1j * theta * g[:, None] * n[None, :])


# ---------------------------------------------------------------------------
# nonlinear GPG


@dataclass
class NlGpgRecord:
    cutoff: int
    closure_residual: float
    vacuum_fidelity_min: float
    entanglement_entropy: float
    target_phases: np.ndarray = field(repr=False)
    achieved_phases: np.ndarray = field(repr=False)


def _loop_phases(g_values, theta, alpha, beta, cutoff):
    """Per-sector mode amplitudes after the four-displacement loop, from vacuum."""
    d = {z: displacement(cutoff, z) for z in {alpha, beta, -alpha, -beta}}
    out = []
    for g in g_values:
        rot_p = mode_rotation(cutoff, theta * g)
        rot_m = mode_rotation(cutoff, -theta * g)
        v = np.zeros(cutoff, dtype=complex)
        v[0] = 1.0
        v = rot_m * v
        v = d[alpha] @ v
        v = rot_p * v
        v = d[beta] @ v
        v = rot_m * v
        v = d[-alpha] @ v
        v = rot_p * v
        v = d[-beta] @ v
        out.append(v)
    return out


def nonlinear_gpg(n_qubits: int, theta: float, phi: float, chi: float,
                  cutoff: int = DEFAULT_CUTOFF, generator: str = "weight",
                  adaptive: bool = True) -> tuple[DickeOperator, NlGpgRecord]:
    """Dispersive-loop geometric phase gate exp(-i 2 chi sin(theta g + phi)) on the spins.

    Composes displacements and spin-conditional mode rotations around a
    closed loop with alpha = sqrt(chi) e^{i phi}, beta = sqrt(chi); the mode
    starts and ends in the vacuum.  Returns the induced spin operator and a
    closure record against the closed-form target.
    """
    if chi < 0:
        raise ValueError("chi must be non-negative")
    alpha = np.sqrt(chi) * np.exp(1j * phi)
    beta = complex(np.sqrt(chi))
    if adaptive:
        cutoff = ensure_cutoff([alpha, beta, 2 * alpha, 2 * beta], cutoff)
    w = np.arange(n_qubits + 1, dtype=float)
    g = w if generator == "weight" else n_qubits / 2 - w
    vectors = _loop_phases(g, theta, alpha, beta, cutoff)

    achieved = np.array([v[0] for v in vectors])
    vac_fid = min(abs(v[0]) ** 2 for v in vectors)
    tensor = np.array(vectors) / np.linalg.norm(vectors)
    joint = JointState(n_qubits, cutoff, tensor)
    ent = joint.entanglement_entropy()
    if ent > 1e-8:
        raise ClosureError(
            f"mode left entangled with the spins (entropy {ent:.3e}) at cutoff {cutoff}")

    target = np.exp(-1j * 2 * chi * np.sin(theta * g + phi))
    residual = float(np.abs(achieved - target).max())
    op = DickeOperator(n_qubits, np.diag(achieved))
    record = NlGpgRecord(cutoff, residual, float(vac_fid), float(ent), target, achieved)
    return op, record


# ---------------------------------------------------------------------------
# conditional CNOT constructions


def weight_mod_structure(code: PiCode) -> tuple[int, int]:
    """(q, s) with logical-zero weights = 0 mod q and logical-one weights = s mod q."""
    s0 = [int(w) for w in code.logical0.support]
    s1 = [int(w) for w in code.logical1.support]
    q = 0
    for w in s0:
        q = gcd(q, w)
    for i in range(1, len(s1)):
        q = gcd(q, s1[i] - s1[0])
    if q <= 1:
        raise PreconditionError(
            f"code {code.label} has no modular weight structure (q = {q})")
    s = s1[0] % q
    if s == 0:
        raise PreconditionError(
            f"code {code.label}: logical-one weights are 0 mod {q}, no conditioning possible")
    return q, s


def _parity_representatives(stab_model: PiCode) -> tuple[int, int]:
    w_even = int(stab_model.logical0.support[0])
    w_odd = int(stab_model.logical1.support[0])
    if w_even % 2 != 0 or w_odd % 2 != 1:
        raise PreconditionError(f"{stab_model.label} is not an even-odd weight model")
    return w_even, w_odd


CNOT_4X4 = np.array([[1, 0, 0, 0],
                     [0, 1, 0, 0],
                     [0, 0, 0, 1],
                     [0, 0, 1, 0]], dtype=complex)  # control = first factor

H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


@dataclass
class CnotRecord:
    direction: str
    cutoff: int
    raw_logical: np.ndarray = field(repr=False)
    corrected_logical: np.ndarray = field(repr=False)
    correction: str
    control0_residual: float
    control1_residual: float
    cnot_residual: float
    vacuum_fidelity_min: float
    support_consistency: float

    @property
    def passed(self) -> bool:
        return self.cnot_residual <= 1e-6


def cnot_pi_control(code_b: PiCode, stab_model: PiCode | None = None,
                    cutoff: int = DEFAULT_CUTOFF) -> CnotRecord:
    """CNOT with the PI code as control, built from four conditional displacements.

    The conditioning angle on the control is 2 pi / q, so the branch with
    weights = 0 mod q sees no displacement at all; the branch with weights =
    s mod q turns each displacement D(z) into D(z (1 - e^{i xi})) with
    xi = 2 pi s / q.  (For the 7-qubit code, where s = 2, this equals the
    s pi / q angle of the original construction.)

    The raw composite applies, on the control-one branch, exp(i eta) times a
    logical X on the target, where eta = pi/2 + 2(|alpha|^2 + |beta|^2)
    sin(xi) collects the loop phase and the internal phases of the
    conditional displacements.  A logical Z rotation by -eta on the control
    makes the gate an exact CNOT; the transversal S-dagger on the target
    undoes the S-bar correction that the composite includes.
    """
    if stab_model is None:
        stab_model = steane_weight_model()
    q, s = weight_mod_structure(code_b)
    gamma = 2 * np.pi / q
    xi = 2 * np.pi * s / q
    alpha = np.sqrt(np.pi) / (4 * abs(np.sin(xi / 2)))
    beta = alpha
    cutoff = ensure_cutoff([alpha, 2 * alpha], cutoff)
    n_a = stab_model.n_qubits
    w_even, w_odd = _parity_representatives(stab_model)
    m_vals = (n_a / 2 - w_even, n_a / 2 - w_odd)

    d = {z: displacement(cutoff, z) for z in (alpha, -alpha)}

    def lam_b(v, z, w_b):
        rot = mode_rotation(cutoff, gamma * w_b)
        v = rot.conj() * v
        v = d[-z] @ v
        v = rot * v
        return d[z] @ v

    supports = [[int(w) for w in code_b.logical0.support],
                [int(w) for w in code_b.logical1.support]]
    phases = np.zeros((2, 2), dtype=complex)
    vac_min = 1.0
    consistency = 0.0
    for y in (0, 1):
        for p in (0, 1):
            rot_a = mode_rotation(cutoff, np.pi * m_vals[p])
            sector = []
            for w_b in supports[y]:
                v = np.zeros(cutoff, dtype=complex)
                v[0] = 1.0
                v = rot_a.conj() * v
                v = lam_b(v, alpha, w_b)
                v = rot_a * v
                v = lam_b(v, beta, w_b)
                v = rot_a.conj() * v
                v = lam_b(v, -alpha, w_b)
                v = rot_a * v
                v = lam_b(v, -beta, w_b)
                sector.append(v[0])
                vac_min = min(vac_min, abs(v[0]) ** 2)
            consistency = max(consistency, float(np.abs(np.array(sector) - sector[0]).max()))
            phases[y, p] = sector[0]

    mid = np.diag(phases.reshape(-1))  # ordering (B logical) x (A parity)
    h_a = np.kron(np.eye(2), H2)
    s_bar_a = np.kron(np.eye(2), np.diag([1.0, 1j]))
    raw = s_bar_a @ h_a @ mid @ h_a

    delta = 2 * (alpha**2 + beta**2) * np.sin(xi)
    phase_even = -np.pi / 2 * np.sin(np.pi * m_vals[0])
    eta = delta + phase_even
    correction = np.kron(np.diag([1.0, np.exp(-1j * eta)]), np.diag([1.0, -1j]))
    corrected = correction @ raw

    ctrl0 = float(np.abs(corrected[np.ix_([0, 1], [0, 1])] - np.eye(2)).max())
    ctrl1 = float(np.abs(corrected[np.ix_([2, 3], [2, 3])]
                         - np.array([[0, 1], [1, 0]])).max())
    cnot_res = float(np.abs(corrected - CNOT_4X4).max())
    return CnotRecord(
        direction="pi-control",
        cutoff=cutoff,
        raw_logical=raw,
        corrected_logical=corrected,
        correction=(f"logical Z(-eta) on control with eta = {eta:.12f} rad, "
                    "and S-dagger on target"),
        control0_residual=ctrl0,
        control1_residual=ctrl1,
        cnot_residual=cnot_res,
        vacuum_fidelity_min=float(vac_min),
        support_consistency=consistency,
    )


def cnot_stabilizer_control(stab_model: PiCode | None, code_b: PiCode,
                            cutoff: int = DEFAULT_CUTOFF) -> CnotRecord:
    """CNOT with the stabilizer code as control and the PI code as target.

    Composes conditional displacements on the control with x-conjugated
    dispersive rotations on the target, using the loop parameters theta = pi,
    phi = pi, chi = pi/4 (phi = pi is realized by beta = -alpha).  The
    control-one branch applies -i Ybar on the target; composing with a
    logical CZ and Zbar on the control yields the exact CNOT.
    """
    if stab_model is None:
        stab_model = steane_weight_model()
    _parity_representatives(stab_model)
    n_b = code_b.n_qubits
    dim_b = n_b + 1
    a_amp = np.sqrt(np.pi) / 4
    alpha, beta = a_amp, -a_amp  # phi = arg(alpha) - arg(beta) = pi
    cutoff = ensure_cutoff([2 * a_amp], cutoff)

    jx = collective_operator(n_b, "jx").matrix
    x_plus = _expm_i_hermitian(jx, np.pi / 2)
    x_minus = x_plus.conj().T
    rot_b = conditional_rotation(n_b, np.pi, cutoff, generator="jz")

    d2 = {z: displacement(cutoff, 2 * z) for z in (alpha, -alpha)}

    def evolve(y, p):
        """Apply the full sequence to |codeword y> (x) |vac> in parity sector p."""
        state = np.zeros((dim_b, cutoff), dtype=complex)
        cw = (code_b.logical0, code_b.logical1)[y]
        state[:, 0] = cw.amplitudes
        displaced = p == 1  # even parity: conditional displacements act trivially

        def lam_a(st, z):
            # D(z) R(pi w_A) D(-z) R(-pi w_A) on the mode; parity-even cancels exactly
            if not displaced:
                return st
            return np.einsum("nm,wm->wn", d2[z], st)

        def xrot(st, mat):
            return np.einsum("vw,wm->vm", mat, st)

        seq_rot = [rot_b.conj(), rot_b, rot_b.conj(), rot_b]
        seq_disp = [alpha, beta, -alpha, -beta]
        for r, z in zip(seq_rot, seq_disp):
            st2 = xrot(state, x_minus)
            st2 = r * st2
            st2 = xrot(st2, x_plus)
            state = lam_a(st2, z)
        return state

    raw = np.zeros((4, 4), dtype=complex)  # ordering (A parity) x (B logical)
    codewords = [code_b.logical0.amplitudes, code_b.logical1.amplitudes]
    vac_min = 1.0
    leak = 0.0
    for p in (0, 1):
        for y in (0, 1):
            out = evolve(y, p)
            vac_component = out[:, 0]
            vac_min = min(vac_min, float(np.linalg.norm(vac_component) ** 2))
            in_code = 0.0
            for yp in (0, 1):
                amp = np.vdot(codewords[yp], vac_component)
                raw[2 * p + yp, 2 * p + y] = amp
                in_code += abs(amp) ** 2
            mode_leak = float(np.linalg.norm(out) ** 2
                              - np.linalg.norm(vac_component) ** 2)
            code_leak = float(np.linalg.norm(vac_component) ** 2 - in_code)
            leak = max(leak, mode_leak, code_leak)

    cz = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
    z_a = np.kron(np.diag([1.0, -1.0]), np.eye(2))
    corrected = z_a @ cz @ raw

    ctrl0 = float(np.abs(raw[np.ix_([0, 1], [0, 1])] - np.eye(2)).max())
    minus_i_y = np.array([[0, -1], [1, 0]], dtype=complex)
    ctrl1 = float(np.abs(raw[np.ix_([2, 3], [2, 3])] - minus_i_y).max())
    cnot_res = float(np.abs(corrected - CNOT_4X4).max())
    return CnotRecord(
        direction="stab-control",
        cutoff=cutoff,
        raw_logical=raw,
        corrected_logical=corrected,
        correction="logical CZ then logical Z on the control "
                   "(equivalently S-bar on the control in the frame |1_B> -> i|1_B>)",
        control0_residual=ctrl0,
        control1_residual=ctrl1,
        cnot_residual=cnot_res,
        vacuum_fidelity_min=vac_min,
        support_consistency=leak,
    )


# ---------------------------------------------------------------------------
# fault-tolerance commutation checks


@dataclass
class CommutantRecord:
    theta: float
    x_residual: float
    y_residual: float

    @property
    def passed(self) -> bool:
        return max(self.x_residual, self.y_residual) <= 1e-14


def spin_ft_commutant(theta: float) -> CommutantRecord:
    """Single-qubit check that R(theta Jz) maps X and Y errors to local errors.

    Verifies R X = exp(i theta Z) X R and the Y analogue with R = exp(i theta Z / 2).
    """
    z = np.diag([1.0, -1.0]).astype(complex)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    r = np.diag(np.exp(1j * theta / 2 * np.diag(z)))
    phase = np.diag(np.exp(1j * theta * np.diag(z)))
    res_x = np.abs(r @ x - phase @ x @ r).max()
    res_y = np.abs(r @ y - phase @ y @ r).max()
    return CommutantRecord(theta, float(res_x), float(res_y))


@dataclass
class BoseCommutantRecord:
    theta: float
    lowering_residual: float
    raising_residual: float
    commutes_at_2pi: bool

    @property
    def passed(self) -> bool:
        return max(self.lowering_residual, self.raising_residual) <= 1e-10


def bose_ft_commutant(theta: float, n_qubits: int = 3, cutoff: int = 16) -> BoseCommutantRecord:
    """Check R(theta w) a = exp(-i theta w) a R(theta w) on a truncated joint space.

    Ladder errors on the mode propagate to the spins as the unitary
    exp(-+ i theta w); at theta = 2 pi k they commute outright.
    """
    w = np.arange(n_qubits + 1, dtype=float)
    r = np.diag(np.exp(1j * theta * np.repeat(w, cutoff) * np.tile(np.arange(cutoff), n_qubits + 1)))
    a = np.kron(np.eye(n_qubits + 1), fock_lowering(cutoff))
    spin_phase_m = np.kron(np.diag(np.exp(-1j * theta * w)), np.eye(cutoff))
    spin_phase_p = np.kron(np.diag(np.exp(1j * theta * w)), np.eye(cutoff))
    res_lower = np.abs(r @ a - spin_phase_m @ a @ r).max()
    ad = a.conj().T
    res_raise = np.abs(r @ ad - spin_phase_p @ ad @ r).max()
    commutes = bool(np.abs(r @ a - a @ r).max() <= 1e-10)
    return BoseCommutantRecord(theta, float(res_lower), float(res_raise), commutes)
