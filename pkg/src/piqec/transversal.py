"""Transversal logical gate actions on PI codes and the super-golden-gate approximation."""

from __future__ import annotations

from dataclasses import dataclass
from math import floor

import numpy as np

from .codes import PiCode
from .errors import NotLogicalGateError

PHASE_TOL = 1e-12


@dataclass
class LogicalAction:
    """Diagonal logical action induced by a transversal rotation."""

    phase_on_0: complex
    phase_on_1: complex
    is_diagonal: bool
    equivalent_z_angle: float

    def __post_init__(self):
        for p in (self.phase_on_0, self.phase_on_1):
            if abs(abs(p) - 1) > PHASE_TOL:
                raise ValueError("logical phases must be unit modulus")


def _support_phase(state, theta: float) -> complex:
    """Common phase exp(i theta w) over the state's weight support; error if not constant."""
    support = state.support
    phases = np.exp(1j * theta * support)
    ref = phases[0]
    spread = np.abs(phases - ref).max()
    if spread > PHASE_TOL:
        raise NotLogicalGateError(
            f"exp(i*theta*w) is not constant on weight support {list(support)} "
            f"for theta={theta} (spread {spread:.3e})")
    return complex(ref)


def transversal_z_logical_action(code: PiCode, theta: float) -> LogicalAction:
    """Logical action of Z(theta) applied to every physical qubit.

    Requires exp(i theta w) to be constant on each codeword's weight support;
    the induced gate is then diagonal with relative angle arg(phase1/phase0).
    """
    p0 = _support_phase(code.logical0, theta)
    p1 = _support_phase(code.logical1, theta)
    angle = float(np.angle(p1 / p0)) % (2 * np.pi)
    return LogicalAction(p0, p1, True, angle)


@dataclass
class XActionRecord:
    """How the transversal X (amplitude reversal) acts on a code's logical basis."""

    operator: str  # "X" or "ZX"
    swap_residual: float
    return_sign: float

    @property
    def is_logical(self) -> bool:
        return self.swap_residual <= 1e-12


def logical_x_action(code: PiCode) -> XActionRecord:
    """Check how the transversal X acts; falls back to Z X when X alone fails.

    The transversal X reverses the amplitude vector.  For reversal-symmetric
    families it swaps the codewords with sign +1.  For the 7-qubit code the
    logical bit flip is the composite Z X, which maps |0> -> |1> and
    |1> -> -|0> (a logical -iY).
    """
    rev0 = code.logical0.amplitudes[::-1]
    rev1 = code.logical1.amplitudes[::-1]
    res_x = max(np.abs(rev0 - code.logical1.amplitudes).max(),
                np.abs(rev1 - code.logical0.amplitudes).max())
    if res_x <= 1e-12:
        return XActionRecord("X", float(res_x), 1.0)
    signs = (-1.0) ** np.arange(code.n_qubits + 1)
    zx0 = signs * rev0
    zx1 = signs * rev1
    res_fwd = np.abs(zx0 - code.logical1.amplitudes).max()
    res_ret_minus = np.abs(zx1 + code.logical0.amplitudes).max()
    res_ret_plus = np.abs(zx1 - code.logical0.amplitudes).max()
    if res_ret_minus <= res_ret_plus:
        return XActionRecord("ZX", float(max(res_fwd, res_ret_minus)), -1.0)
    return XActionRecord("ZX", float(max(res_fwd, res_ret_plus)), 1.0)


# ---------------------------------------------------------------------------
# single-qubit gate table

GOLDEN_RATIO = (1 + np.sqrt(5)) / 2
_GOLDEN_STAR = (1 - np.sqrt(5)) / 2


def z_rotation(theta: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * theta)])


HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.diag([1.0, -1.0]).astype(complex)
S_GATE = z_rotation(np.pi / 2)
T_GATE = z_rotation(np.pi / 4)
F_GATE = HADAMARD @ z_rotation(-np.pi / 2)


def phi_gate() -> np.ndarray:
    zeta = GOLDEN_RATIO + 1j / GOLDEN_RATIO
    return np.array([[zeta, 1], [-1, np.conj(zeta)]]) / 2


def phi_star_gate() -> np.ndarray:
    zeta = _GOLDEN_STAR + 1j / _GOLDEN_STAR
    return np.array([[zeta, 1], [-1, np.conj(zeta)]]) / 2


def tau60() -> np.ndarray:
    """The order-two non-Clifford gate completing the binary-icosahedral gate set."""
    phi = GOLDEN_RATIO
    return np.array([[2 + phi, 1 - 1j], [1 + 1j, -(2 + phi)]]) / np.sqrt(5 * phi + 7)


def tau60_tilde(gamma: float) -> np.ndarray:
    """Rational-angle stand-in T F' Z(gamma) F Z T' for tau60 (primes are daggers)."""
    return (T_GATE @ F_GATE.conj().T @ z_rotation(gamma)
            @ F_GATE @ PAULI_Z @ T_GATE.conj().T)


def tau60_angle() -> float:
    """The exact rotation angle 2 arccos((2+phi)/sqrt(5 phi + 7)) in the Euler form."""
    phi = GOLDEN_RATIO
    return 2 * np.arccos((2 + phi) / np.sqrt(5 * phi + 7))


def phase_min_distance(u: np.ndarray, v: np.ndarray) -> float:
    """min over real lambda of the spectral norm of exp(i lambda) U - V.

    Closed form for 2x2 unitaries from the eigenphases mu1, mu2 of V'U:
    2 |sin(d/4)| with d the wrapped phase separation mu1 - mu2.
    """
    for name, m in (("U", u), ("V", v)):
        if np.abs(m.conj().T @ m - np.eye(2)).max() > 1e-10:
            raise ValueError(f"{name} is not unitary")
    w = v.conj().T @ u
    mu = np.angle(np.linalg.eigvals(w))
    d = (mu[0] - mu[1] + np.pi) % (2 * np.pi) - np.pi
    return float(2 * abs(np.sin(d / 4)))


@dataclass
class RationalApproximation:
    numerator: int
    denominator: int
    distance: float

    @property
    def gamma(self) -> float:
        return np.pi * self.numerator / self.denominator


def _continued_fraction_convergents(x: float, max_denominator: int):
    """Convergents p/q of x with q <= max_denominator."""
    p_prev, p = 1, floor(x)
    q_prev, q = 0, 1
    yield p, q
    y = x
    for _ in range(64):
        frac = y - floor(y)
        if frac < 1e-15:
            return
        y = 1 / frac
        a = floor(y)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        if q > max_denominator:
            return
        yield p, q


def convergents_with_distance(max_denominator: int = 10**4) -> list[RationalApproximation]:
    """All continued-fraction convergents of the tau60 angle over pi, with distances."""
    target = tau60()
    x = tau60_angle() / np.pi
    out = []
    for p, q in _continued_fraction_convergents(x, max_denominator):
        dist = phase_min_distance(tau60_tilde(np.pi * p / q), target)
        out.append(RationalApproximation(p, q, dist))
    return out


def search_super_golden_rational(epsilon: float,
                                 max_denominator: int = 10**4) -> RationalApproximation | None:
    """Smallest-denominator convergent g/b with dist(tilde(pi g/b), tau60) < epsilon.

    Returns None when no convergent within max_denominator reaches epsilon.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    for approx in convergents_with_distance(max_denominator):
        if approx.distance < epsilon:
            return approx
    return None
