"""Brute-force state-vector / density-matrix backend.

Exact construction of graph states (a product of CZ gates on |+>^n),
projective measurement in arbitrary single-qubit bases, CPTP noise
channels, and Pauli expectation values.  This module is deliberately
unclever: it is the correctness oracle for the graph-rule engine and the
noisy backend for simulated experiments, so clarity beats speed.

Qubit 0 is the most significant bit of the computational-basis index
(the state ``|q0 q1 ... q_{n-1}>`` has index ``q0*2^{n-1} + ... + q_{n-1}``),
matching the left-to-right order of Pauli strings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ATOL = 1e-10

MAX_VECTOR_QUBITS = 20
MAX_DENSITY_QUBITS = 14

# Single-qubit constants
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)

PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}

# sqrt(X) and sqrt(Z) with the phase conventions used by the local
# complementation unitary: sqrt_x = exp(-i pi/4 X), sqrt_z = exp(+i pi/4 Z).
SQRT_X = np.array([[1, -1j], [-1j, 1]], dtype=complex) / np.sqrt(2)
SQRT_X_DAG = SQRT_X.conj().T
SQRT_Z = np.array([[np.exp(1j * np.pi / 4), 0], [0, np.exp(-1j * np.pi / 4)]], dtype=complex)
SQRT_Z_DAG = SQRT_Z.conj().T

CZ = np.diag([1, 1, 1, -1]).astype(complex)


def rz(theta: float) -> np.ndarray:
    """Z rotation diag(e^{-i theta/2}, e^{+i theta/2})."""
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]], dtype=complex)


def equatorial_basis(theta: float) -> np.ndarray:
    """Orthonormal pair {(|0> + e^{i theta}|1>)/sqrt2, (|0> - e^{i theta}|1>)/sqrt2}.

    Column s is the outcome-s basis vector.  theta = 0 is the X basis,
    theta = pi/2 the Y basis.
    """
    return np.array(
        [[1, 1], [np.exp(1j * theta), -np.exp(1j * theta)]], dtype=complex
    ) / np.sqrt(2)


BASIS_VECTORS = {
    "X": equatorial_basis(0.0),
    "Y": equatorial_basis(np.pi / 2),
    "Z": np.eye(2, dtype=complex),
}


class DenseSimError(ValueError):
    pass


@dataclass
class NoiseModel:
    """Gate-attached depolarizing noise plus classical readout confusion.

    ``p1``/``p2`` are depolarizing probabilities applied after every ideal
    single-/two-qubit gate on the gate's support.  ``readout`` is a list of
    per-qubit 2x2 row-stochastic confusion matrices (row = true bit,
    column = reported bit); an empty list means perfect readout.
    ``idle_dephasing`` is an optional phase-damping probability applied to
    every idle qubit per circuit step.

    Note: published hardware error rates around 4e-2 for the three CNOTs
    of a SWAP are ambiguous between per-CNOT and per-SWAP readings; here
    ``p2`` is always per two-qubit gate.
    """

    p1: float = 0.0
    p2: float = 0.0
    readout: list = field(default_factory=list)
    idle_dephasing: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "idle_dephasing"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DenseSimError(f"{name} must be in [0,1], got {v}")
        for q, mat in enumerate(self.readout):
            m = np.asarray(mat, dtype=float)
            if m.shape != (2, 2) or np.any(m < -ATOL) or not np.allclose(m.sum(axis=1), 1.0):
                raise DenseSimError(f"readout confusion for qubit {q} is not row-stochastic")

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0 and self.idle_dephasing == 0.0 and not self.readout


class DenseState:
    """An n-qubit pure state vector or density matrix.

    The representation starts as a vector and is promoted to a density
    matrix on demand (e.g. when a noise channel is applied).  All methods
    mutate the instance they are called on and return ``self`` so calls
    can be chained; use :meth:`copy` for value semantics.
    """

    def __init__(self, n: int, data: np.ndarray | None = None, density: bool = False):
        if density and n > MAX_DENSITY_QUBITS:
            raise DenseSimError(f"density matrices capped at {MAX_DENSITY_QUBITS} qubits, got {n}")
        if not density and n > MAX_VECTOR_QUBITS:
            raise DenseSimError(f"state vectors capped at {MAX_VECTOR_QUBITS} qubits, got {n}")
        self.n = n
        d = 2**n
        if data is None:
            if density:
                self.data = np.zeros((d, d), dtype=complex)
                self.data[0, 0] = 1.0
            else:
                self.data = np.zeros(d, dtype=complex)
                self.data[0] = 1.0
        else:
            self.data = np.asarray(data, dtype=complex).reshape((d, d) if density else (d,))
        self.density = density

    # -- constructors -------------------------------------------------

    @classmethod
    def plus_state(cls, n: int) -> "DenseState":
        d = 2**n
        return cls(n, np.full(d, 1 / np.sqrt(d), dtype=complex))

    @classmethod
    def from_vector(cls, vec: np.ndarray) -> "DenseState":
        vec = np.asarray(vec, dtype=complex).ravel()
        n = int(round(np.log2(vec.size)))
        if 2**n != vec.size:
            raise DenseSimError(f"vector length {vec.size} is not a power of two")
        return cls(n, vec)

    @classmethod
    def from_density(cls, rho: np.ndarray) -> "DenseState":
        rho = np.asarray(rho, dtype=complex)
        n = int(round(np.log2(rho.shape[0])))
        return cls(n, rho, density=True)

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.data.copy(), self.density)

    # -- representation management ------------------------------------

    def to_density(self) -> "DenseState":
        if not self.density:
            if self.n > MAX_DENSITY_QUBITS:
                raise DenseSimError(f"cannot promote {self.n}-qubit vector to density matrix")
            self.data = np.outer(self.data, self.data.conj())
            self.density = True
        return self

    def vector(self) -> np.ndarray:
        if self.density:
            raise DenseSimError("state is a density matrix, not a vector")
        return self.data

    def rho(self) -> np.ndarray:
        if self.density:
            return self.data
        return np.outer(self.data, self.data.conj())

    def norm(self) -> float:
        if self.density:
            return float(np.real(np.trace(self.data)))
        return float(np.vdot(self.data, self.data).real)

    def check(self):
        """Validate the representation invariants (norm/trace, hermiticity, PSD)."""
        if self.density:
            if not np.allclose(self.data, self.data.conj().T, atol=1e-8):
                raise DenseSimError("density matrix is not Hermitian")
            tr = np.trace(self.data).real
            if abs(tr - 1.0) > 1e-8:
                raise DenseSimError(f"density matrix trace {tr} != 1")
            evals = np.linalg.eigvalsh(self.data)
            if evals.min() < -1e-9:
                raise DenseSimError(f"density matrix has eigenvalue {evals.min()} < -1e-9")
        else:
            if abs(self.norm() - 1.0) > ATOL:
                raise DenseSimError(f"vector norm {self.norm()} != 1")
        return self

    # -- unitaries ----------------------------------------------------

    def apply_1q(self, u: np.ndarray, qubit: int) -> "DenseState":
        self._check_qubit(qubit)
        if self.density:
            self.data = _apply_op_rho(self.data, u, (qubit,), self.n)
        else:
            self.data = _apply_op_vec(self.data, u, (qubit,), self.n)
        return self

    def apply_2q(self, u: np.ndarray, q0: int, q1: int) -> "DenseState":
        self._check_qubit(q0)
        self._check_qubit(q1)
        if q0 == q1:
            raise DenseSimError("two-qubit gate needs distinct qubits")
        if self.density:
            self.data = _apply_op_rho(self.data, u, (q0, q1), self.n)
        else:
            self.data = _apply_op_vec(self.data, u, (q0, q1), self.n)
        return self

    def apply_cz(self, i: int, j: int) -> "DenseState":
        return self.apply_2q(CZ, i, j)

    def apply_pauli(self, pauli: str, qubit: int) -> "DenseState":
        for ch in pauli:
            if ch == "X":
                self.apply_1q(X, qubit)
            elif ch == "Z":
                self.apply_1q(Z, qubit)
            elif ch == "Y":
                self.apply_1q(Y, qubit)
            elif ch != "I":
                raise DenseSimError(f"unknown Pauli {pauli!r}")
        return self

    def _check_qubit(self, q: int):
        if not 0 <= q < self.n:
            raise DenseSimError(f"qubit {q} out of range for {self.n}-qubit state")


# -- tensor helpers -----------------------------------------------------


def _apply_op_vec(vec: np.ndarray, u: np.ndarray, qubits: tuple, n: int) -> np.ndarray:
    k = len(qubits)
    psi = vec.reshape((2,) * n)
    u = u.reshape((2,) * (2 * k))
    psi = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    # tensordot moved the acted-on axes to the front; put them back
    return np.moveaxis(psi, list(range(k)), list(qubits)).reshape(-1)


def _apply_op_rho(rho: np.ndarray, u: np.ndarray, qubits: tuple, n: int) -> np.ndarray:
    d = 2**n
    vec_form = rho.reshape(-1)  # rho as a vector over 2n axes
    m = vec_form.reshape((2,) * (2 * n))
    k = len(qubits)
    uk = u.reshape((2,) * (2 * k))
    # left multiply: axes 0..n-1
    m = np.tensordot(uk, m, axes=(list(range(k, 2 * k)), list(qubits)))
    m = np.moveaxis(m, list(range(k)), list(qubits))
    # right multiply by u^dagger: act on axes n..2n-1 with conj(u)
    conj_axes = [n + q for q in qubits]
    m = np.tensordot(uk.conj(), m, axes=(list(range(k, 2 * k)), conj_axes))
    m = np.moveaxis(m, list(range(k)), conj_axes)
    return m.reshape(d, d)


# -- public operations ---------------------------------------------------


def build_graph_state(edges, n: int) -> DenseState:
    """Product of CZ gates over `edges` applied to |+>^n.

    Edges must satisfy i < j < n and contain no duplicates (CZ is
    self-inverse, so a duplicate is almost certainly a bug upstream).
    """
    seen = set()
    for i, j in edges:
        if not (0 <= i < j < n):
            raise DenseSimError(f"edge ({i},{j}) invalid for n={n}: need 0 <= i < j < n")
        if (i, j) in seen:
            raise DenseSimError(f"duplicate edge ({i},{j})")
        seen.add((i, j))
    state = DenseState.plus_state(n)
    for i, j in seen:
        state.apply_cz(i, j)
    return state


def measure_basis(
    state: DenseState,
    qubit: int,
    basis,
    outcome: int,
    remove: bool = False,
) -> tuple:
    """Project `qubit` onto the requested basis outcome.

    `basis` is "X", "Y", "Z" or an equatorial angle theta (float), whose
    outcome-s vector is (|0> + (-1)^s e^{i theta} |1>)/sqrt2.  Returns
    ``(state, outcome, probability)`` where the state is renormalized and,
    when ``remove`` is true, the measured qubit is traced out of the
    register.  Requesting a zero-probability branch raises.
    """
    if outcome not in (0, 1):
        raise DenseSimError(f"outcome must be 0 or 1, got {outcome}")
    state._check_qubit(qubit)
    if isinstance(basis, str):
        try:
            bvecs = BASIS_VECTORS[basis]
        except KeyError:
            raise DenseSimError(f"unknown basis {basis!r}") from None
    else:
        bvecs = equatorial_basis(float(basis))
    ket = bvecs[:, outcome]

    if state.density:
        proj = np.outer(ket, ket.conj())
        new = _apply_op_rho(state.data, proj, (qubit,), state.n)
        prob = float(np.trace(new).real)
        if prob < ATOL:
            raise DenseSimError(f"zero-probability branch: qubit {qubit} outcome {outcome}")
        state.data = new / prob
        if remove:
            state.data = _trace_out(state.data, qubit, state.n)
            state.n -= 1
    else:
        psi = state.data.reshape((2,) * state.n)
        amp = np.tensordot(ket.conj(), psi, axes=([0], [qubit]))  # qubit axis removed
        prob = float(np.vdot(amp, amp).real)
        if prob < ATOL:
            raise DenseSimError(f"zero-probability branch: qubit {qubit} outcome {outcome}")
        amp = amp / np.sqrt(prob)
        if remove:
            state.data = amp.reshape(-1)
            state.n -= 1
        else:
            # reinsert the measured qubit in the post-measurement state |ket>
            full = np.tensordot(ket, amp, axes=0)  # ket axis at position 0
            state.data = np.moveaxis(full, 0, qubit).reshape(-1)
    return state, outcome, prob


def measure_probabilities(state: DenseState, qubit: int, basis) -> np.ndarray:
    """Born probabilities (p0, p1) without collapsing the state."""
    probs = np.empty(2)
    for s in (0, 1):
        try:
            _, _, p = measure_basis(state.copy(), qubit, basis, s)
        except DenseSimError:
            p = 0.0
        probs[s] = p
    return probs


def _trace_out(rho: np.ndarray, qubit: int, n: int) -> np.ndarray:
    m = rho.reshape((2,) * (2 * n))
    m = np.trace(m, axis1=qubit, axis2=n + qubit)
    return m.reshape(2 ** (n - 1), 2 ** (n - 1))


def partial_trace(state: DenseState, keep) -> np.ndarray:
    """Reduced density matrix on `keep` (in ascending qubit order)."""
    keep = sorted(keep)
    rho = state.rho()
    n = state.n
    for q in reversed(range(n)):
        if q not in keep:
            rho = _trace_out(rho, q, n)
            n -= 1
    return rho


# -- channels -------------------------------------------------------------


def depolarizing_kraus(p: float, k: int = 1):
    """Kraus operators of the k-qubit depolarizing channel.

    E(rho) = (1-p) rho + p I/2^k, written as the uniform Pauli twirl
    sqrt(1 - p(4^k-1)/4^k) I plus sqrt(p/4^k) times each non-identity
    Pauli product.
    """
    if not 0.0 <= p <= 1.0:
        raise DenseSimError(f"depolarizing probability {p} not in [0,1]")
    d2 = 4**k
    ops = []
    labels = ["I", "X", "Y", "Z"]
    import itertools

    for combo in itertools.product(labels, repeat=k):
        mat = np.array([[1.0]], dtype=complex)
        for ch in combo:
            mat = np.kron(mat, PAULIS[ch])
        if all(c == "I" for c in combo):
            ops.append(np.sqrt(1 - p * (d2 - 1) / d2) * mat)
        else:
            ops.append(np.sqrt(p / d2) * mat)
    return ops


def dephasing_kraus(p: float):
    """Phase damping: rho -> (1-p) rho + p Z rho Z."""
    return [np.sqrt(1 - p) * I2, np.sqrt(p) * Z]


def amplitude_damping_kraus(gamma: float):
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return [k0, k1]


def apply_channel(state: DenseState, kraus_ops, qubits) -> DenseState:
    """Apply a CPTP map given by Kraus operators to `qubits`.

    Vector states are auto-promoted to density matrices.  The Kraus set is
    checked for trace preservation up to 1e-10.
    """
    if isinstance(qubits, int):
        qubits = (qubits,)
    qubits = tuple(qubits)
    k = len(qubits)
    dk = 2**k
    total = sum(op.conj().T @ op for op in kraus_ops)
    if not np.allclose(total, np.eye(dk), atol=ATOL):
        raise DenseSimError("Kraus operators do not sum to identity (not trace preserving)")
    state.to_density()
    out = np.zeros_like(state.data)
    for op in kraus_ops:
        out += _apply_op_rho(state.data, op, qubits, state.n)
    state.data = out
    return state


def depolarize(state: DenseState, p: float, qubits) -> DenseState:
    if isinstance(qubits, int):
        qubits = (qubits,)
    return apply_channel(state, depolarizing_kraus(p, len(qubits)), qubits)


# -- expectation values ---------------------------------------------------


def expectation(state: DenseState, pauli_string: str) -> float:
    """<P> = Tr(P rho) for a Pauli string over {I,X,Y,Z}.

    An optional leading "+"/"-" sign is honoured.  The result is checked
    to be real within 1e-10 and returned as a float.
    """
    sign = 1.0
    s = pauli_string
    if s and s[0] in "+-":
        sign = -1.0 if s[0] == "-" else 1.0
        s = s[1:]
    if len(s) != state.n:
        raise DenseSimError(f"Pauli string length {len(s)} != qubit count {state.n}")
    if state.density:
        work = DenseState(state.n, state.data.copy(), density=True)
        for q, ch in enumerate(s):
            if ch != "I":
                work.data = _apply_op_rho_left(work.data, PAULIS[ch], q, work.n)
        val = np.trace(work.data)
    else:
        work = state.data.copy()
        psi = DenseState(state.n, work)
        for q, ch in enumerate(s):
            if ch != "I":
                psi.apply_1q(PAULIS[ch], q)
        val = np.vdot(state.data, psi.data)
    if abs(val.imag) > 1e-8:
        raise DenseSimError(f"expectation of {pauli_string} is not real: {val}")
    return sign * float(val.real)


def _apply_op_rho_left(rho: np.ndarray, u: np.ndarray, qubit: int, n: int) -> np.ndarray:
    d = 2**n
    m = rho.reshape((2,) * (2 * n))
    m = np.tensordot(u, m, axes=([1], [qubit]))
    m = np.moveaxis(m, 0, qubit)
    return m.reshape(d, d)


def states_equal(a: DenseState, b: DenseState, atol: float = 1e-9) -> bool:
    """Equality up to global phase: |<a|b>|^2 >= 1 - atol (pure states) or
    trace-distance-like Frobenius check for density matrices."""
    if a.n != b.n:
        return False
    if not a.density and not b.density:
        ov = abs(np.vdot(a.data, b.data)) ** 2
        na = a.norm()
        nb = b.norm()
        return ov >= (1 - atol) * na * nb
    return bool(np.linalg.norm(a.rho() - b.rho()) <= np.sqrt(atol))
