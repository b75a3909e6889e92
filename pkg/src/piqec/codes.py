"""Construction and certification of permutation-invariant qubit codes.

All families encode one logical qubit as a pair of orthonormal Dicke-space
states with disjoint weight supports.  Squared amplitudes are computed in
exact rational arithmetic and converted to floats only when the state vector
is materialized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt

import numpy as np

from .dicke import DickeState
from .errors import ConstructionError, ResourceLimitError

KL_TOLERANCE = 1e-9


@dataclass
class PiCode:
    """A permutation-invariant code: a pair of orthonormal Dicke states."""

    n_qubits: int
    logical0: DickeState
    logical1: DickeState
    family: str = "custom"
    params: dict = field(default_factory=dict)
    claimed_distance: int | None = None

    def __post_init__(self):
        if self.logical0.n_qubits != self.n_qubits or self.logical1.n_qubits != self.n_qubits:
            raise ValueError("codeword size does not match n_qubits")
        s0 = set(self.logical0.support.tolist())
        s1 = set(self.logical1.support.tolist())
        if s0 & s1:
            raise ValueError(f"codeword weight supports overlap: {sorted(s0 & s1)}")

    @property
    def label(self) -> str:
        if self.params:
            args = ",".join(str(v) for v in self.params.values())
            return f"{self.family}({args})"
        return self.family

    def codewords(self) -> tuple[np.ndarray, np.ndarray]:
        return self.logical0.amplitudes, self.logical1.amplitudes

    def encode(self, logical: np.ndarray) -> DickeState:
        """Map a logical 2-vector to its encoded Dicke state."""
        logical = np.asarray(logical, dtype=complex)
        amps = logical[0] * self.logical0.amplitudes + logical[1] * self.logical1.amplitudes
        return DickeState(self.n_qubits, amps, _skip_checks=True)

    def projector(self) -> np.ndarray:
        return self.logical0.density_matrix() + self.logical1.density_matrix()


def _sqrt_fraction(q: Fraction) -> float:
    if q < 0:
        raise ValueError(f"cannot take square root of negative rational {q}")
    # exact when q is a perfect square of rationals, float sqrt otherwise
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return rn / rd
    return float(np.sqrt(float(q)))


def _state_from_squared(n_qubits, weights, squared, signs=None) -> DickeState:
    amps = np.zeros(n_qubits + 1, dtype=complex)
    total = sum(squared, Fraction(0))
    if total != 1:
        raise ConstructionError(f"squared amplitudes sum to {total}, not 1")
    for i, (w, q) in enumerate(zip(weights, squared)):
        sign = 1 if signs is None else signs[i]
        amps[w] = sign * _sqrt_fraction(q)
    return DickeState(n_qubits, amps, _skip_checks=True)


def build_pi7() -> PiCode:
    """The 7-qubit PI code with codewords on weights {0,5} and {2,7}.

    Not an even-odd code; admits the transversal non-Clifford Z(2pi/5)^x7.
    """
    logical0 = _state_from_squared(7, [0, 5], [Fraction(3, 10), Fraction(7, 10)])
    logical1 = _state_from_squared(7, [2, 7], [Fraction(7, 10), Fraction(3, 10)], signs=[1, -1])
    return PiCode(7, logical0, logical1, family="pi7", claimed_distance=3)


def build_bg(b: int, g: int) -> PiCode:
    """The (b,g) family on 2b+g qubits, codewords on weights {0,2b} and {g,2b+g}."""
    if g < 1 or 2 * b < g + 1:
        raise ValueError(f"require g >= 1 and 2b >= g+1, got b={b}, g={g}")
    n = 2 * b + g
    lo = Fraction(2 * b - g, 4 * b)
    hi = Fraction(2 * b + g, 4 * b)
    logical0 = _state_from_squared(n, [0, 2 * b], [lo, hi])
    logical1 = _state_from_squared(n, [n, g], [lo, hi])
    distance = 3 if (g >= 3 and 2 * b - g >= 3) else None
    return PiCode(n, logical0, logical1, family="bg", params={"b": b, "g": g},
                  claimed_distance=distance)


def build_pi11() -> PiCode:
    """The 11-qubit PI code supporting a transversal logical T; equals the (4,3) code."""
    code = build_bg(4, 3)
    code.family = "pi11"
    return code


def _double_factorial_odd(m: int) -> int:
    """(2m-1)!! = (2m)! / (2^m m!)."""
    out = 1
    for i in range(1, 2 * m, 2):
        out *= i
    return out


def _bgm_squared_amplitudes(b: int, g: int, m: int) -> list[Fraction]:
    """Squared weight-2kb amplitudes of the (b,g,m) logical zero, exactly."""
    norm = Fraction(1, 4**m * _double_factorial_odd(m))
    squared = []
    for k in range(m + 1):
        gamma2 = Fraction(1, b**m)
        for i in range(k + 1, m + 1):
            gamma2 *= 2 * i * b - g
        for j in range(m - k + 1, m + 1):
            gamma2 *= 2 * j * b + g
        squared.append(comb(m, k) * gamma2 * norm)
    return squared


def build_bgm(b: int, g: int, m: int) -> PiCode:
    """The (b,g,m) family on N = 2bm+g qubits.

    Logical zero is supported on weights 2kb for k = 0..m; logical one is its
    reversal (the transversal-X image).  Distance is 2t+1 when g and 2b-g are
    both >= 2t+1 and m >= t.
    """
    if m < 1 or g < 1 or 2 * b < g + 1:
        raise ValueError(f"require m >= 1, g >= 1 and 2b >= g+1, got b={b}, g={g}, m={m}")
    n = 2 * b * m + g
    squared = _bgm_squared_amplitudes(b, g, m)
    weights0 = [2 * k * b for k in range(m + 1)]
    logical0 = _state_from_squared(n, weights0, squared)
    logical1 = _state_from_squared(n, [n - w for w in weights0], squared)
    t = min(m, (g - 1) // 2, (2 * b - g - 1) // 2)
    return PiCode(n, logical0, logical1, family="bgm", params={"b": b, "g": g, "m": m},
                  claimed_distance=2 * t + 1 if t >= 1 else None)


def _gen_binom(q: Fraction, k: int) -> Fraction:
    """Generalized binomial coefficient C(q, k) for rational q."""
    out = Fraction(1)
    for i in range(k):
        out *= q - i
    for i in range(2, k + 1):
        out /= i
    return out


def build_aab_plus(g: int, m: int, delta: int) -> PiCode:
    """The three-parameter family on n = 2gm + delta + 1 qubits.

    Codeword weights are g*l (l even) and n - g*l (l odd) for logical zero, and
    the complementary pattern for logical one.  The coefficient formulas use
    generalized binomial coefficients, so n need not be divisible by g.
    Corrects t errors when g >= 2t+1, m >= t and delta >= 2t.
    """
    if g < 1 or m < 1 or delta < 0:
        raise ValueError(f"require g, m >= 1 and delta >= 0, got g={g}, m={m}, delta={delta}")
    n = 2 * g * m + delta + 1
    gamma2 = _gen_binom(Fraction(n, 2 * g), m) * Fraction(n - 2 * g * m, g * (m + 1))
    weights0, weights1, squared = [], [], []
    for l in range(m + 1):
        denom = _gen_binom(Fraction(n, g) - l, m + 1)
        if denom <= 0:
            raise ConstructionError(
                f"coefficient b_{l} undefined for (g,m,delta)=({g},{m},{delta})")
        squared.append(gamma2 * Fraction(comb(m, l)) / denom)
        if l % 2 == 0:
            weights0.append(g * l)
            weights1.append(n - g * l)
        else:
            weights0.append(n - g * l)
            weights1.append(g * l)
    logical0 = _state_from_squared(n, weights0, squared)
    logical1 = _state_from_squared(n, weights1, squared)
    t = min(m, (g - 1) // 2, delta // 2)
    return PiCode(n, logical0, logical1, family="aab+",
                  params={"g": g, "m": m, "delta": delta},
                  claimed_distance=2 * t + 1 if t >= 1 else None)


# ---------------------------------------------------------------------------
# nullspace construction


def constraint_matrix(b: int, g: int, t: int) -> list[list[Fraction]]:
    """The t x (t+1) matrix of odd-order non-deformation constraints.

    Row j (for odd j = 1, 3, ..., 2t-1) has entries K^N_{2bk}(j) / C(N, 2bk)
    for k = 0..t, with N = 2bt + g.
    """
    from .dicke import krawtchouk

    n = 2 * b * t + g
    rows = []
    for j in range(1, 2 * t, 2):
        rows.append([Fraction(krawtchouk(n, 2 * b * k, j), comb(n, 2 * b * k))
                     for k in range(t + 1)])
    return rows


def _rational_nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Nullspace basis of a small exact-rational matrix via Gaussian elimination."""
    mat = [row[:] for row in rows]
    nrows = len(mat)
    pivot_cols = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivot_cols):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis


def build_bgm_nullspace(b: int, g: int, t: int) -> PiCode:
    """Construct the (b,g,m=t) code by solving the odd-constraint nullspace exactly.

    Raises ConstructionError if the nullspace admits no non-negative vector;
    this is a reportable outcome, not silently patched.  The construction
    itself needs only g >= 1 and 2b >= g+1; the sufficient distance condition
    (g and 2b-g both >= 2t+1) is recorded in claimed_distance when it holds,
    and kl_check certifies the rest.
    """
    if t < 0 or g < 1 or 2 * b < g + 1:
        raise ValueError(f"require t >= 0, g >= 1 and 2b >= g+1, got b={b}, g={g}, t={t}")
    n = 2 * b * t + g
    if t == 0:
        # no constraints: single-weight codewords on g qubits
        logical0 = DickeState.basis_state(n, 0)
        logical1 = DickeState.basis_state(n, n)
        return PiCode(n, logical0, logical1, family="bgm",
                      params={"b": b, "g": g, "m": 0, "construction": "nullspace"})
    rows = constraint_matrix(b, g, t)
    basis = _rational_nullspace(rows, t + 1)
    if len(basis) != 1:
        raise ConstructionError(
            f"nullspace dimension {len(basis)} != 1 for (b,g,t)=({b},{g},{t})")
    y = basis[0]
    lead = next((x for x in y if x != 0), None)
    if lead is None:
        raise ConstructionError("nullspace vector is zero")
    if lead < 0:
        y = [-x for x in y]
    if any(x < 0 for x in y):
        raise ConstructionError(
            f"nullspace vector has negative entries for (b,g,t)=({b},{g},{t}): {y}")
    total = sum(y, Fraction(0))
    squared = [x / total for x in y]
    weights0 = [2 * k * b for k in range(t + 1)]
    logical0 = _state_from_squared(n, weights0, squared)
    logical1 = _state_from_squared(n, [n - w for w in weights0], squared)
    code = PiCode(n, logical0, logical1, family="bgm",
                  params={"b": b, "g": g, "m": t, "construction": "nullspace"})
    if g >= 2 * t + 1 and 2 * b - g >= 2 * t + 1:
        code.claimed_distance = 2 * t + 1
    return code


# ---------------------------------------------------------------------------
# Knill-Laflamme certification


@dataclass
class KlReport:
    """Result of a Knill-Laflamme check against all Paulis of weight <= 2t."""

    code_label: str
    n_qubits: int
    t: int
    tolerance: float
    orthogonality_residual: float
    deformation_residual: float
    passed: bool
    counterexample: str | None = None

    @property
    def verdict(self) -> str:
        if self.passed:
            return f"distance >= {2 * self.t + 1}"
        return f"counterexample {self.counterexample}"


def _dicke_vectors_small(r: int) -> np.ndarray:
    """Rows: Dicke states of 0..r qubits weight u as 2^r vectors."""
    vecs = np.zeros((r + 1, 2**r))
    for idx in range(2**r):
        u = bin(idx).count("1")
        vecs[u, idx] = 1.0
    for u in range(r + 1):
        vecs[u] /= np.sqrt(comb(r, u))
    return vecs


_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_multiset_dicke_matrix(n_qubits: int, n_x: int, n_y: int, n_z: int) -> np.ndarray:
    """Dicke-space matrix of the canonical placement X^a Y^b Z^c I^(rest).

    By permutation invariance of Dicke states this matrix element is placement
    independent, so the canonical placement represents the whole orbit.
    """
    r = n_x + n_y + n_z
    if r > n_qubits:
        raise ValueError("error weight exceeds qubit count")
    n = n_qubits
    if r == 0:
        return np.eye(n + 1, dtype=complex)
    small = np.eye(1, dtype=complex)
    for letter, count in (("X", n_x), ("Y", n_y), ("Z", n_z)):
        for _ in range(count):
            small = np.kron(small, _PAULI[letter])
    dvecs = _dicke_vectors_small(r)
    m_small = dvecs.conj() @ small @ dvecs.T  # (r+1) x (r+1)

    mat = np.zeros((n + 1, n + 1), dtype=complex)
    for w in range(n + 1):
        for u in range(max(0, w - (n - r)), min(r, w) + 1):
            cu = np.sqrt(comb(r, u) * comb(n - r, w - u) / comb(n, w))
            for up in range(r + 1):
                wp = w + (up - u)
                if 0 <= wp <= n and 0 <= wp - up <= n - r:
                    cup = np.sqrt(comb(r, up) * comb(n - r, wp - up) / comb(n, wp))
                    mat[wp, w] += cu * cup * m_small[up, u]
    return mat


def _error_multisets(max_weight: int):
    for r in range(1, max_weight + 1):
        for n_x in range(r + 1):
            for n_y in range(r - n_x + 1):
                yield n_x, n_y, r - n_x - n_y


def kl_check(code: PiCode, t: int, tolerance: float = KL_TOLERANCE) -> KlReport:
    """Check the Knill-Laflamme conditions for all Pauli errors of weight <= t.

    Equivalent to checking, for every Pauli P of weight <= 2t, that
    <0|P|1> = 0 and <0|P|0> = <1|P|1>.  Errors are enumerated up to qubit
    permutation (one canonical placement per Pauli-letter multiset).
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if 2 * t > code.n_qubits:
        raise ResourceLimitError(
            f"2t = {2 * t} exceeds the {code.n_qubits}-qubit code block")
    n_reps = sum(1 for _ in _error_multisets(2 * t))
    if n_reps * (code.n_qubits + 1) ** 2 > 5e7:
        raise ResourceLimitError(f"KL check budget exceeded (t={t}, N={code.n_qubits})")

    c0, c1 = code.codewords()
    max_orth = 0.0
    max_def = 0.0
    counterexample = None
    for n_x, n_y, n_z in _error_multisets(2 * t):
        mat = pauli_multiset_dicke_matrix(code.n_qubits, n_x, n_y, n_z)
        orth = abs(np.vdot(c0, mat @ c1))
        deform = abs(np.vdot(c0, mat @ c0) - np.vdot(c1, mat @ c1))
        if counterexample is None and max(orth, deform) > tolerance:
            kind = "orthogonality" if orth > tolerance else "non-deformation"
            counterexample = f"X^{n_x} Y^{n_y} Z^{n_z} ({kind}, residual {max(orth, deform):.3e})"
        max_orth = max(max_orth, float(orth))
        max_def = max(max_def, float(deform))
    passed = bool(max(max_orth, max_def) <= tolerance)
    return KlReport(code.label, code.n_qubits, t, tolerance, max_orth, max_def,
                    passed, counterexample)


# ---------------------------------------------------------------------------
# combinatorial zero-sum identity behind the distance proof


def _falling(q: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for i in range(j):
        out *= q - i
    return out


def lemma_sum(b: int, g: int, m: int, x: int) -> Fraction:
    """Raw evaluation of the odd-constraint sum, exact, for any x >= 1."""
    from .dicke import krawtchouk

    n = 2 * b * m + g
    alpha = Fraction(n, 2 * b) - Fraction(g, b)
    beta = Fraction(n, 2 * b)
    total = Fraction(0)
    for k in range(m + 1):
        total += (comb(m, k) * krawtchouk(n, 2 * x - 1, 2 * b * k)
                  * _falling(alpha, m - k) * _falling(beta, k))
    return total


def lemma_S(b: int, g: int, m: int, x: int) -> Fraction:
    """The constraint sum under the hypothesis 1 <= x <= m; always exactly zero."""
    if min(b, g, m, x) < 1:
        raise ValueError("all of b, g, m, x must be positive")
    if x > m:
        raise ValueError(f"x = {x} violates the hypothesis x <= m = {m}; "
                         "use lemma_sum for raw evaluation")
    return lemma_sum(b, g, m, x)


def logical_plus(code: PiCode) -> DickeState:
    """The encoded (|0_L> + |1_L>)/sqrt(2) state."""
    amps = (code.logical0.amplitudes + code.logical1.amplitudes) / np.sqrt(2)
    return DickeState(code.n_qubits, amps)


def is_even_odd(code: PiCode) -> bool:
    """True iff logical zero is supported on even weights only and logical one on odd."""
    even_ok = all(w % 2 == 0 for w in code.logical0.support)
    odd_ok = all(w % 2 == 1 for w in code.logical1.support)
    return even_ok and odd_ok


# ---------------------------------------------------------------------------
# serialization


def code_to_dict(code: PiCode) -> dict:
    def state_rows(state: DickeState):
        return [[int(w), float(state.amplitudes[w].real), float(state.amplitudes[w].imag)]
                for w in state.support]

    return {
        "family": code.family,
        "params": {k: v for k, v in code.params.items()},
        "n_qubits": code.n_qubits,
        "claimed_distance": code.claimed_distance,
        "logical0": state_rows(code.logical0),
        "logical1": state_rows(code.logical1),
    }


def code_from_dict(doc: dict) -> PiCode:
    n = int(doc["n_qubits"])

    def state(rows):
        amps = np.zeros(n + 1, dtype=complex)
        for w, re, im in rows:
            amps[int(w)] = re + 1j * im
        return DickeState(n, amps)

    return PiCode(n, state(doc["logical0"]), state(doc["logical1"]),
                  family=doc.get("family", "custom"),
                  params=dict(doc.get("params", {})),
                  claimed_distance=doc.get("claimed_distance"))


def build_code(family: str, **params) -> PiCode:
    """Dispatch a family name to its builder (CLI entry point)."""
    family = family.lower().replace("-", "").replace("_", "")
    if family == "pi7":
        return build_pi7()
    if family == "pi11":
        return build_pi11()
    if family == "bg":
        return build_bg(params["b"], params["g"])
    if family == "bgm":
        return build_bgm(params["b"], params["g"], params["m"])
    if family in ("aab", "aabplus", "aab+"):
        return build_aab_plus(params["g"], params["m"], params["delta"])
    raise ValueError(f"unknown code family {family!r}")
