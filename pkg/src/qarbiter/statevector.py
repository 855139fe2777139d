"""Dense statevector simulation for small registers.

Qubit 0 is the leftmost symbol of a ket and the most significant bit of the
amplitude index, so ``|1000>`` on four qubits lives at index 8. Every
operation returns a new :class:`StateVector`; inputs are never mutated.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import GateError, ParameterError, PreconditionError, QubitIndexError, SizeError

MAX_QUBITS = 16
UNITARY_TOL = 1e-10
NORM_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


class StateVector:
    """Amplitudes of an ``n_qubits`` register, length ``2**n_qubits``."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes: np.ndarray):
        _check_size(n_qubits)
        amps = np.array(amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != 2**n_qubits:
            raise SizeError(f"expected {2 ** n_qubits} amplitudes, got {amps.shape[0]}")
        if not np.all(np.isfinite(amps)):
            raise ParameterError("amplitudes must be finite")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ParameterError(f"state is not normalized (norm^2 = {norm!r})")
        amps.flags.writeable = False
        self.n_qubits = n_qubits
        self.amplitudes = amps

    @classmethod
    def from_bits(cls, bits: str) -> StateVector:
        """Computational basis state, e.g. ``StateVector.from_bits("1001")``."""
        _check_bitstring(bits)
        amps = np.zeros(2 ** len(bits), dtype=complex)
        amps[int(bits, 2)] = 1.0
        return cls(len(bits), amps)

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def amplitude(self, bits: str) -> complex:
        if len(bits) != self.n_qubits:
            raise SizeError(f"bitstring {bits!r} does not match {self.n_qubits} qubits")
        return complex(self.amplitudes[int(bits, 2)])

    def tensor(self, other: StateVector) -> StateVector:
        """``self ⊗ other``; ``other``'s qubits are appended on the right."""
        return StateVector(self.n_qubits + other.n_qubits, np.kron(self.amplitudes, other.amplitudes))

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits})"


def _check_size(n_qubits: int) -> None:
    if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= MAX_QUBITS:
        raise SizeError(f"n_qubits must be an integer in [1, {MAX_QUBITS}], got {n_qubits!r}")


def _check_bitstring(bits: str) -> None:
    if not bits or any(c not in "01" for c in bits):
        raise SizeError(f"not a bitstring: {bits!r}")


def _check_qubits(state: StateVector, qubits: Sequence[int]) -> list[int]:
    qubits = [int(q) for q in qubits]
    if not qubits:
        raise QubitIndexError("at least one qubit is required")
    for q in qubits:
        if not 0 <= q < state.n_qubits:
            raise SizeError(f"qubit index {q} out of range for {state.n_qubits} qubits")
    if len(set(qubits)) != len(qubits):
        raise QubitIndexError(f"duplicate qubit indices: {qubits}")
    return qubits


def check_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    """Return ``matrix`` as a complex array, raising :class:`GateError` unless unitary."""
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] & (m.shape[0] - 1):
        raise GateError(f"gate must be a square 2^k matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise GateError("gate has non-finite entries")
    err = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
    if err > tol:
        raise GateError(f"gate is not unitary (max |U†U - I| = {err:.3e})")
    return m


def new_state(n_qubits: int) -> StateVector:
    """``|0...0>`` on ``n_qubits`` qubits (1 to 16)."""
    _check_size(n_qubits)
    amps = np.zeros(2**n_qubits, dtype=complex)
    amps[0] = 1.0
    return StateVector(n_qubits, amps)


def _front(state: StateVector, qubits: list[int]) -> np.ndarray:
    """View with ``qubits`` as the leading axis of size ``2**len(qubits)``."""
    psi = state.amplitudes.reshape((2,) * state.n_qubits)
    psi = np.moveaxis(psi, qubits, range(len(qubits)))
    return psi.reshape(2 ** len(qubits), -1)


def _back(state: StateVector, qubits: list[int], block: np.ndarray) -> StateVector:
    n = state.n_qubits
    psi = block.reshape((2,) * n)
    psi = np.moveaxis(psi, range(len(qubits)), qubits)
    return StateVector(n, psi.reshape(-1))


def apply_unitary(state: StateVector, matrix: np.ndarray, qubits: Sequence[int]) -> StateVector:
    """Apply a ``2^k x 2^k`` unitary to ``qubits`` (first listed = most significant)."""
    qubits = _check_qubits(state, qubits)
    m = check_unitary(matrix)
    if m.shape[0] != 2 ** len(qubits):
        raise GateError(f"{m.shape[0]}x{m.shape[0]} gate does not act on {len(qubits)} qubit(s)")
    return _back(state, qubits, m @ _front(state, qubits))


def apply_single(state: StateVector, gate: np.ndarray, q: int) -> StateVector:
    m = check_unitary(gate)
    if m.shape != (2, 2):
        raise GateError(f"single-qubit gate must be 2x2, got {m.shape}")
    return apply_unitary(state, m, [q])


def apply_controlled_x(
    state: StateVector,
    controls: Sequence[int],
    target: int,
    control_bits: str | None = None,
) -> StateVector:
    """Flip ``target`` on the basis states where ``controls`` read ``control_bits``.

    ``control_bits`` defaults to all ones (an ordinary multi-controlled NOT).
    """
    controls = [int(c) for c in controls]
    _check_qubits(state, controls + [int(target)])
    if control_bits is None:
        control_bits = "1" * len(controls)
    if len(control_bits) != len(controls) or any(c not in "01" for c in control_bits):
        raise SizeError(f"control pattern {control_bits!r} does not match {len(controls)} controls")
    psi = state.amplitudes.reshape((2,) * state.n_qubits).copy()
    idx: list = [slice(None)] * state.n_qubits
    for c, bit in zip(controls, control_bits):
        idx[c] = int(bit)
    sub = psi[tuple(idx)]
    # remaining axes keep their relative order once the control axes are fixed
    target_axis = target - sum(1 for c in controls if c < target)
    psi[tuple(idx)] = np.flip(sub, axis=target_axis)
    return StateVector(state.n_qubits, psi.reshape(-1))


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    if control == target:
        raise QubitIndexError(f"control and target are both qubit {control}")
    return apply_controlled_x(state, [control], target)


def apply_permutation(state: StateVector, qubits: Sequence[int], perm: Sequence[int]) -> StateVector:
    """Send sub-register basis state ``|i>`` to ``|perm[i]>`` on ``qubits``."""
    qubits = _check_qubits(state, qubits)
    perm = np.asarray(perm, dtype=np.int64)
    dim = 2 ** len(qubits)
    if perm.shape != (dim,) or not np.array_equal(np.sort(perm), np.arange(dim)):
        raise GateError("basis map is not a permutation of the sub-register basis")
    block = _front(state, qubits)
    out = np.empty_like(block)
    out[perm] = block
    return _back(state, qubits, out)


def entangler_matrix(gamma: float) -> np.ndarray:
    """``cos(γ/2)·I + i·sin(γ/2)·(X⊗X)``, so ``|00> -> cos(γ/2)|00> + i sin(γ/2)|11>``."""
    if not 0.0 < gamma < np.pi:
        raise ParameterError(f"gamma must lie in (0, pi), got {gamma!r}")
    return np.cos(gamma / 2) * np.eye(4, dtype=complex) + 1j * np.sin(gamma / 2) * np.kron(X, X)


def apply_entangler_j(
    state: StateVector, q1: int, q2: int, gamma: float, adjoint: bool = False
) -> StateVector:
    j = entangler_matrix(gamma)
    if adjoint:
        j = j.conj().T
    return apply_unitary(state, j, [q1, q2])


def register_probability(state: StateVector, qubits: Sequence[int], bits: str) -> float:
    """Probability that ``qubits`` read ``bits``."""
    qubits = _check_qubits(state, qubits)
    if len(bits) != len(qubits):
        raise SizeError(f"pattern {bits!r} does not match {len(qubits)} qubits")
    return float(marginal(state, qubits)[int(bits, 2)])


def require_cleared(state: StateVector, qubits: Sequence[int], what: str = "register") -> None:
    """Raise :class:`PreconditionError` unless ``qubits`` are in ``|0...0>``."""
    p0 = register_probability(state, qubits, "0" * len(qubits))
    if abs(1.0 - p0) > NORM_TOL:
        raise PreconditionError(f"{what} on qubits {list(qubits)} is not cleared (P(0...0) = {p0:.6g})")


def marginal(state: StateVector, qubits: Sequence[int]) -> np.ndarray:
    """Born-rule marginal over ``qubits`` as an array indexed by the sub-register value."""
    qubits = _check_qubits(state, qubits)
    block = _front(state, qubits)
    return np.sum(np.abs(block) ** 2, axis=1)


def probabilities(state: StateVector, qubits: Sequence[int] | None = None) -> dict[str, float]:
    """Marginal distribution keyed by bitstring; every outcome is present, zeros included."""
    if qubits is None:
        qubits = range(state.n_qubits)
    qubits = list(qubits)
    p = marginal(state, qubits)
    k = len(qubits)
    return {format(i, f"0{k}b"): float(v) for i, v in enumerate(p)}


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2**64:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.default_rng(int(seed))


def sample_many(state: StateVector, qubits: Sequence[int], shots: int, seed) -> list[str]:
    """Draw ``shots`` independent measurement outcomes of ``qubits``."""
    qubits = list(qubits)
    p = marginal(state, qubits)
    p = p / p.sum()
    rng = make_rng(seed)
    draws = rng.choice(p.shape[0], size=shots, p=p)
    k = len(qubits)
    return [format(int(i), f"0{k}b") for i in draws]


def sample(state: StateVector, qubits: Sequence[int], seed) -> str:
    """One measurement of ``qubits``; a fixed integer seed gives a fixed answer."""
    return sample_many(state, qubits, 1, seed)[0]
