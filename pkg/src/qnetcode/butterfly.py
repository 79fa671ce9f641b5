"""Butterfly measurement-based network coding, end to end.

The six-qubit resource is the 2x3 grid graph state.  Qubits 0 and 4 are
the two source ports, 1 and 5 the destinations, and 2, 3 the central
bottleneck pair.  Measuring the central pair in the X basis redistributes
the entanglement into the two *cross* pairs (0,5), (4,1); measuring both
in Z yields the *straight* pairs (0,1), (4,5).  Either way each surviving
pair is a maximally entangled 2-qubit graph state up to a tracked Pauli,
over which input states are teleported.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import densesim as ds
from .densesim import DenseState, NoiseModel
from .graphstate import GraphState, GraphStateError, MeasureOutcome

BUTTERFLY_EDGES = ((0, 1), (4, 5), (0, 2), (2, 4), (2, 3), (1, 3), (3, 5))
CENTRAL = (2, 3)
CROSS_PAIRS = ((0, 5), (4, 1))
STRAIGHT_PAIRS = ((0, 1), (4, 5))

MODES = ("cross", "straight")


def butterfly_resource() -> GraphState:
    """Fresh six-qubit butterfly resource state.

    Seven edges; the central qubits 2 and 3 are mutually adjacent and
    each has degree 3.
    """
    g = GraphState(6, BUTTERFLY_EDGES)
    assert len(g.edges()) == 7
    assert g.adj[2, 3] and g.degree(2) == 3 and g.degree(3) == 3
    return g


@dataclass(frozen=True)
class InputState:
    """Pure qubit cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""

    theta: float
    phi: float

    def __post_init__(self):
        if not 0 <= self.theta <= np.pi + 1e-12:
            raise ValueError(f"theta must be in [0, pi], got {self.theta}")
        if not 0 <= self.phi < 2 * np.pi + 1e-12:
            raise ValueError(f"phi must be in [0, 2pi), got {self.phi}")

    def ket(self) -> np.ndarray:
        return np.array(
            [np.cos(self.theta / 2), np.exp(1j * self.phi) * np.sin(self.theta / 2)],
            dtype=complex,
        )

    def bloch(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi), np.cos(self.theta)])


@dataclass(frozen=True)
class PairConfig:
    """The two source-destination pairs produced by one MQNC run."""

    mode: str
    pairs: tuple
    frames: tuple  # per pair, (frame label on source side, on destination side)

    def __post_init__(self):
        expected = CROSS_PAIRS if self.mode == "cross" else STRAIGHT_PAIRS
        if self.pairs != expected:
            raise GraphStateError(f"{self.mode} mode must yield pairs {expected}")


def run_network_code(mode: str, outcomes: tuple = (0, 0)) -> tuple:
    """Measure the central pair of a fresh butterfly resource.

    cross: X measurements on both central qubits (rule T3); straight: Z
    measurements (rule T1).  Returns ``(PairConfig, GraphState)`` where
    the graph carries the outcome-dependent Pauli frame.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    s2, s3 = outcomes
    g = butterfly_resource()
    if mode == "cross":
        g.measure_x_pair(*CENTRAL, (s2, s3))
        pairs = CROSS_PAIRS
    else:
        g.measure_z(CENTRAL[0], s2)
        g.measure_z(CENTRAL[1], s3)
        pairs = STRAIGHT_PAIRS
    expected = {frozenset(p) for p in pairs}
    if {frozenset(e) for e in g.edges()} != expected:
        raise GraphStateError(f"network code produced {g.edges()}, expected {pairs}")
    frames = tuple((g.frame(p), g.frame(q)) for p, q in pairs)
    return PairConfig(mode, pairs, frames), g


@dataclass
class TeleportResult:
    state: DenseState  # final single-qubit state of the destination
    outcome: MeasureOutcome
    byproduct: str  # Pauli label on the destination before correction
    corrected: bool


def _pair_frame_bits(g: GraphState, p: int, q: int) -> tuple:
    """Effective byproduct on the destination qubit of an edge pair.

    On the edge graph state X_p ~ Z_q and Z_p ~ X_q (stabilizers X_p Z_q
    and Z_p X_q), so the whole pair frame folds into a single Pauli on q.
    """
    x = int(g.frame_x[q]) ^ int(g.frame_z[p])
    z = int(g.frame_z[q]) ^ int(g.frame_x[p])
    return x, z


def teleport_over_pair(
    g: GraphState,
    pair: tuple,
    input_state: InputState,
    outcomes: tuple = (0, 0),
    correct: bool = True,
) -> TeleportResult:
    """Teleport an input across one generated pair, densely.

    The input qubit is entangled with the source-side qubit ``pair[0]``
    via CZ, then both the input and the source qubit are measured in X
    with the given outcome bits (t0 on the input, t1 on the source).  The
    destination ends up carrying ``X^{t1} Z^{t0}`` times the pair's
    folded frame; with ``correct=True`` the inverse Pauli is applied so
    the noiseless output equals the input exactly.
    """
    p, q = pair
    for qubit in (p, q):
        if not (0 <= qubit < g.n) or not g.alive[qubit]:
            raise GraphStateError(f"pair qubit {qubit} is dead or out of range")
    if not g.adj[p, q]:
        raise GraphStateError(f"pair {pair} is not an edge of the current graph")
    t0, t1 = outcomes
    if t0 not in (0, 1) or t1 not in (0, 1):
        raise GraphStateError(f"teleport outcomes must be bits, got {outcomes}")

    fx, fz = _pair_frame_bits(g, p, q)
    # dense register: qubit 0 = input, 1 = source, 2 = destination
    state = DenseState(3)
    state.data = np.kron(input_state.ket(), ds.build_graph_state([(0, 1)], 2).vector())
    for reg, qubit in ((1, p), (2, q)):
        if g.frame_z[qubit]:
            state.apply_1q(ds.Z, reg)
        if g.frame_x[qubit]:
            state.apply_1q(ds.X, reg)
    state.apply_cz(0, 1)
    state, _, _ = ds.measure_basis(state, 0, "X", t0, remove=True)
    state, _, _ = ds.measure_basis(state, 0, "X", t1, remove=True)

    bx, bz = t1 ^ fx, t0 ^ fz
    label = "I" if not bx and not bz else "X" if bx and not bz else "Z" if not bx else "XZ"
    if correct:
        if bz:
            state.apply_1q(ds.Z, 0)
        if bx:
            state.apply_1q(ds.X, 0)
    record = MeasureOutcome((p,), "X", (t0, t1))
    return TeleportResult(state, record, label, correct)


@dataclass
class ExperimentResult:
    """Outcome of one full MQNC + teleportation experiment."""

    mode: str
    pair: tuple
    input: InputState
    policy: str
    fidelity: float
    retained_fraction: float
    state: DenseState
    shots: int | None = None
    branches: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "mode": self.mode,
            "pair": list(self.pair),
            "input": {"theta": self.input.theta, "phi": self.input.phi},
            "policy": self.policy,
            "fidelity": self.fidelity,
            "retained_fraction": self.retained_fraction,
            "shots": self.shots,
        }


def _prepare_input(state: DenseState, qubit: int, inp: InputState, noise: NoiseModel):
    """Rotate |0> to the input state: Ry(theta) then Rz(phi)."""
    theta, phi = inp.theta, inp.phi
    ry = np.array(
        [[np.cos(theta / 2), -np.sin(theta / 2)], [np.sin(theta / 2), np.cos(theta / 2)]],
        dtype=complex,
    )
    state.apply_1q(ry, qubit)
    state.apply_1q(np.diag([1, np.exp(1j * phi)]).astype(complex), qubit)
    if noise.p1 > 0:
        ds.depolarize(state, noise.p1, qubit)


def _replay_plan_dense(state: DenseState, steps, noise: NoiseModel):
    """Apply CZ/LC rewiring steps with gate-attached depolarizing noise."""
    tracker = GraphState(6)
    for step in steps:
        op = step[0]
        if op == "CZ":
            _, i, j = step
            state.apply_cz(i, j)
            tracker.toggle_edge(i, j)
            if noise.p2 > 0:
                ds.depolarize(state, noise.p2, (i, j))
        elif op == "LC":
            _, a = step
            nbrs = tracker.neighbors(a)
            state.apply_1q(ds.SQRT_X, a)
            if noise.p1 > 0:
                ds.depolarize(state, noise.p1, a)
            for b in nbrs:
                state.apply_1q(ds.SQRT_Z, b)
                if noise.p1 > 0:
                    ds.depolarize(state, noise.p1, b)
            tracker.local_complement(a)
        else:
            raise ValueError(f"unsupported prep step {op!r} in dense experiment")
    if {frozenset(e) for e in tracker.edges()} != {frozenset(e) for e in BUTTERFLY_EDGES}:
        raise GraphStateError("prep plan does not build the butterfly resource")


DEFAULT_PREP = tuple(("CZ", i, j) for i, j in BUTTERFLY_EDGES)


def run_full_experiment(
    mode: str,
    pair_index: int,
    input_state: InputState,
    noise: NoiseModel = NoiseModel(),
    policy: str = "postselect",
    prep_steps=DEFAULT_PREP,
    attach_first: bool = True,
) -> ExperimentResult:
    """Full butterfly experiment by exact branch enumeration.

    Builds the resource in the density-matrix backend (with gate-attached
    depolarizing noise), attaches the input, enumerates all 16 outcome
    branches of the MQNC and teleportation measurements, and combines
    them per policy: ``postselect`` keeps only identity-byproduct
    branches (a quarter of the probability mass in the noiseless case),
    ``feedforward`` Pauli-corrects every branch.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if pair_index not in (0, 1):
        raise ValueError(f"pair_index must be 0 or 1, got {pair_index}")
    if policy not in ("postselect", "feedforward"):
        raise ValueError(f"policy must be postselect or feedforward, got {policy!r}")
    pairs = CROSS_PAIRS if mode == "cross" else STRAIGHT_PAIRS
    src, dst = pairs[pair_index]
    inp_q = 6  # the input rides along as a seventh qubit

    base = DenseState.plus_state(6)
    base.data = np.kron(base.data, np.array([1, 0], dtype=complex))
    base.n = 7
    base.to_density()
    _replay_plan_dense(base, prep_steps, noise)
    _prepare_input(base, inp_q, input_state, noise)

    def attach(state):
        state.apply_cz(inp_q, src)
        if noise.p2 > 0:
            ds.depolarize(state, noise.p2, (inp_q, src))

    if attach_first:
        attach(base)

    psi = input_state.ket()
    branches = []
    total_kept = 0.0
    mixed = np.zeros((2, 2), dtype=complex)
    for s2 in (0, 1):
        for s3 in (0, 1):
            st = base.copy()
            if mode == "cross":
                st, _, p2m = ds.measure_basis(st, 2, "X", s2)
                st, _, p3m = ds.measure_basis(st, 3, "X", s3)
            else:
                st, _, p2m = ds.measure_basis(st, 2, "Z", s2)
                st, _, p3m = ds.measure_basis(st, 3, "Z", s3)
            if not attach_first:
                attach(st)
            # tracked frame for this MQNC branch
            _, gbranch = run_network_code(mode, (s2, s3))
            fx, fz = _pair_frame_bits(gbranch, src, dst)
            for t0 in (0, 1):
                for t1 in (0, 1):
                    stt = st.copy()
                    stt, _, pt0 = ds.measure_basis(stt, inp_q, "X", t0)
                    stt, _, pt1 = ds.measure_basis(stt, src, "X", t1)
                    prob = p2m * p3m * pt0 * pt1
                    rho = ds.partial_trace(stt, [dst])
                    bx, bz = t1 ^ fx, t0 ^ fz
                    branches.append({"outcomes": (s2, s3, t0, t1), "prob": prob, "byproduct": (bx, bz)})
                    if policy == "postselect":
                        if (bx, bz) == (0, 0):
                            mixed += prob * rho
                            total_kept += prob
                    else:
                        corr = np.eye(2, dtype=complex)
                        if bz:
                            corr = ds.Z @ corr
                        if bx:
                            corr = ds.X @ corr
                        mixed += prob * (corr @ rho @ corr.conj().T)
                        total_kept += prob

    if total_kept <= 0:
        raise GraphStateError("no branches retained: empty sample")
    rho_out = mixed / total_kept
    fidelity = float(np.real(psi.conj() @ rho_out @ psi))
    retained = total_kept if policy == "postselect" else 1.0
    out = DenseState.from_density(rho_out)
    return ExperimentResult(mode, (src, dst), input_state, policy, fidelity, retained, out, None, branches)


def bloch_grid(count: int) -> list:
    """Deterministic quasi-uniform grid of input states (Fibonacci sphere)."""
    pts = []
    golden = np.pi * (3 - np.sqrt(5))
    for k in range(count):
        z = 1 - 2 * (k + 0.5) / count
        theta = float(np.arccos(np.clip(z, -1, 1)))
        phi = float((k * golden) % (2 * np.pi))
        pts.append(InputState(theta, phi))
    return pts
