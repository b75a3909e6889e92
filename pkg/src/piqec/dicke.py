"""Linear algebra in the symmetric (Dicke) subspace of N qubits.

The canonical basis everywhere in this package is weight-ordered: index w of a
length-(N+1) vector is the amplitude of the Dicke state with Hamming weight w,
for w = 0..N.  The collective Jz eigenvalue at index w is N/2 - w.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

NORM_TOL = 1e-12
UNITARY_TOL = 1e-10


def krawtchouk(n: int, k: int, z: int) -> int:
    """Binary Krawtchouk polynomial K^n_k(z), evaluated in exact integer arithmetic.

    K^n_k(z) is the coefficient of x^k in (1-x)^z (1+x)^(n-z), equivalently
    sum_j C(z,j) C(n-z,k-j) (-1)^j.
    """
    if not (0 <= k <= n and 0 <= z <= n):
        raise ValueError(f"krawtchouk indices out of range: n={n}, k={k}, z={z}")
    total = 0
    for j in range(0, min(z, k) + 1):
        if k - j <= n - z:
            total += (-1) ** j * comb(z, j) * comb(n - z, k - j)
    return total


def dicke_diagonal_overlap(n: int, w: int, k: int) -> Fraction:
    """Exact diagonal matrix element of Z on the first k qubits between weight-w Dicke states.

    Equals K^n_w(k) / C(n, w).
    """
    if not (0 <= w <= n and 0 <= k <= n):
        raise ValueError(f"overlap indices out of range: n={n}, w={w}, k={k}")
    return Fraction(krawtchouk(n, w, k), comb(n, w))


@dataclass
class DickeState:
    """A normalized state in the symmetric subspace, indexed by Hamming weight."""

    n_qubits: int
    amplitudes: np.ndarray
    _skip_checks: bool = field(default=False, repr=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        if self.amplitudes.shape != (self.n_qubits + 1,):
            raise ValueError(
                f"amplitude vector must have length {self.n_qubits + 1}, "
                f"got shape {self.amplitudes.shape}"
            )
        if not self._skip_checks:
            norm2 = float(np.vdot(self.amplitudes, self.amplitudes).real)
            if abs(norm2 - 1.0) > NORM_TOL:
                raise ValueError(f"state is not normalized: |psi|^2 = {norm2!r}")

    @classmethod
    def basis_state(cls, n_qubits: int, weight: int) -> "DickeState":
        """The Dicke basis state of the given Hamming weight."""
        if not (0 <= weight <= n_qubits):
            raise ValueError(f"weight {weight} out of range for {n_qubits} qubits")
        amps = np.zeros(n_qubits + 1, dtype=complex)
        amps[weight] = 1.0
        return cls(n_qubits, amps)

    @classmethod
    def from_weights(cls, n_qubits: int, weight_amplitudes: dict) -> "DickeState":
        """Build a state from a {weight: amplitude} mapping (must be normalized)."""
        amps = np.zeros(n_qubits + 1, dtype=complex)
        for w, a in weight_amplitudes.items():
            amps[int(w)] = a
        return cls(n_qubits, amps)

    def overlap(self, other: "DickeState") -> complex:
        """<self|other>."""
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit-count mismatch")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "DickeState") -> float:
        return abs(self.overlap(other)) ** 2

    @property
    def support(self) -> np.ndarray:
        """Weights with exactly nonzero amplitude."""
        return np.nonzero(self.amplitudes)[0]

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass
class DickeOperator:
    """An (N+1) x (N+1) operator on the Dicke space."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        dim = self.n_qubits + 1
        if self.matrix.shape != (dim, dim):
            raise ValueError(
                f"matrix must be {dim}x{dim}, got shape {self.matrix.shape}"
            )

    def __matmul__(self, other: "DickeOperator") -> "DickeOperator":
        if self.n_qubits != other.n_qubits:
            raise ValueError("qubit-count mismatch")
        return DickeOperator(self.n_qubits, self.matrix @ other.matrix)

    def apply(self, state: DickeState) -> DickeState:
        if self.n_qubits != state.n_qubits:
            raise ValueError("qubit-count mismatch")
        return DickeState(self.n_qubits, self.matrix @ state.amplitudes, _skip_checks=True)

    def dagger(self) -> "DickeOperator":
        return DickeOperator(self.n_qubits, self.matrix.conj().T)

    def unitarity_defect(self) -> float:
        dim = self.n_qubits + 1
        return float(
            np.linalg.norm(self.matrix.conj().T @ self.matrix - np.eye(dim), ord=2)
        )

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return self.unitarity_defect() <= tol


_COLLECTIVE_KINDS = ("jx", "jy", "jz", "jz2", "weight", "weight2")


def collective_operator(n_qubits: int, kind: str) -> DickeOperator:
    """Collective spin operator in the J = N/2 representation (weight-ordered basis).

    Supported kinds: jx, jy, jz, jz2, weight, weight2.  The identity
    weight = (N/2) I - jz holds exactly.
    """
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    kind = kind.lower()
    if kind not in _COLLECTIVE_KINDS:
        raise ValueError(f"unknown collective operator kind {kind!r}")
    n = n_qubits
    w = np.arange(n + 1, dtype=float)
    if kind == "jz":
        mat = np.diag(n / 2 - w).astype(complex)
    elif kind == "jz2":
        mat = np.diag((n / 2 - w) ** 2).astype(complex)
    elif kind == "weight":
        mat = np.diag(w).astype(complex)
    elif kind == "weight2":
        mat = np.diag(w**2).astype(complex)
    else:
        # J+ lowers the weight by one: <w-1|J+|w> = sqrt(w (n-w+1))
        jp = np.zeros((n + 1, n + 1), dtype=complex)
        for wi in range(1, n + 1):
            jp[wi - 1, wi] = np.sqrt(wi * (n - wi + 1))
        jm = jp.conj().T
        mat = (jp + jm) / 2 if kind == "jx" else (jp - jm) / (2j)
    return DickeOperator(n_qubits, mat)


def _expm_i_hermitian(h: np.ndarray, t: float = 1.0) -> np.ndarray:
    """exp(i t H) for Hermitian H by spectral decomposition."""
    vals, vecs = np.linalg.eigh(h)
    return (vecs * np.exp(1j * t * vals)) @ vecs.conj().T


def global_rotation(n_qubits: int, theta: float, xi: float, gamma: float) -> DickeOperator:
    """Composite global rotation Rz(theta) Ry(xi) Rz(gamma) with Rz(a) = exp(i a Jz).

    Sign convention: a positive angle multiplies the generator by +i.
    """
    for name, val in (("theta", theta), ("xi", xi), ("gamma", gamma)):
        if not np.isfinite(val):
            raise ValueError(f"rotation angle {name} must be finite")
    jz = np.real(np.diag(collective_operator(n_qubits, "jz").matrix))
    zmul_left = np.exp(1j * theta * jz)
    zmul_right = np.exp(1j * gamma * jz)
    jy = collective_operator(n_qubits, "jy").matrix
    ry = _expm_i_hermitian(jy, xi)
    mat = (zmul_left[:, None] * ry) * zmul_right[None, :]
    return DickeOperator(n_qubits, mat)


def transversal_z_rotation(n_qubits: int, theta: float) -> DickeOperator:
    """Z(theta) applied to every qubit: diagonal phase exp(i theta w) at weight w."""
    w = np.arange(n_qubits + 1)
    return DickeOperator(n_qubits, np.diag(np.exp(1j * theta * w)))
