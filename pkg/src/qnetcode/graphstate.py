"""Exact graph-state engine with Pauli byproduct tracking.

A state is represented as ``(sign-free Pauli frame) x |G(adj)>`` where
``|G(adj)>`` is the graph state of the adjacency matrix over the alive
qubits.  Each operation below has exact dense semantics (a unitary and/or
projector on physical qubits); the adjacency and the per-qubit frame are
updated so the representation stays in sync with that dense action, up to
global phase.  The dense counterparts live in :mod:`qnetcode.densesim`
and the two are cross-checked exhaustively in the test suite.

Conventions, fixed once and validated against the dense oracle:

* frame entries are one of ``I, X, Z, XZ`` (the operator ``X^x Z^z``,
  global phase dropped);
* ``local_complement(a)`` applies ``exp(-i pi/4 X_a) prod_b exp(+i pi/4 Z_b)``
  over the neighbourhood, which maps ``|G>`` to the locally complemented
  graph state with no byproduct;
* ``measure_z(a, s)`` projects onto ``|s>``; outcome 1 leaves Z on every
  neighbour;
* ``measure_y(a, s)`` is local complementation at ``a`` followed by a Z
  measurement, i.e. a Y-basis measurement (outcome s = projection onto
  ``(|0> + (-1)^s i |1>)/sqrt2``) together with the deterministic
  ``sqrt(Z)`` feed-forward on the neighbourhood;
* ``measure_x_pair(a, b)`` projects both qubits onto X eigenstates; the
  byproduct is Z on every common neighbour, plus Z on N(a) keyed by b's
  outcome and Z on N(b) keyed by a's outcome.  Outcome (0,0) carries the
  identity byproduct.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

FRAME_LABELS = ("I", "X", "Z", "XZ")


class GraphStateError(ValueError):
    pass


class DeadQubitError(GraphStateError):
    """Raised when an operation touches a measured (dead) qubit."""

    def __init__(self, qubit: int):
        super().__init__(f"qubit {qubit} is dead (already measured)")
        self.qubit = qubit


class QubitRangeError(GraphStateError):
    def __init__(self, qubit: int, n: int):
        super().__init__(f"qubit {qubit} out of range for {n} qubits")
        self.qubit = qubit


class NotAdjacentError(GraphStateError):
    def __init__(self, a: int, b: int):
        super().__init__(f"qubits {a} and {b} are not adjacent (X-pair rule needs an edge)")
        self.pair = (a, b)


@dataclass(frozen=True)
class MeasureOutcome:
    """Record of a measurement: which qubits, which basis, which bits."""

    qubits: tuple
    basis: str
    outcomes: tuple

    def __post_init__(self):
        if any(s not in (0, 1) for s in self.outcomes):
            raise GraphStateError(f"outcome bits must be 0/1, got {self.outcomes}")


class GraphState:
    """Graph state on ``n`` qubits: adjacency over GF(2) plus Pauli frame.

    Operations mutate the instance in place and return ``self`` (or a
    :class:`MeasureOutcome`); use :meth:`copy` when value semantics are
    needed.  Instances share no global state, so independent copies are
    safe to use concurrently.
    """

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise GraphStateError(f"qubit count must be >= 0, got {n}")
        self.n = n
        self.adj = np.zeros((n, n), dtype=np.uint8)
        self.alive = np.ones(n, dtype=bool)
        self.frame_x = np.zeros(n, dtype=np.uint8)
        self.frame_z = np.zeros(n, dtype=np.uint8)
        for i, j in edges:
            self.toggle_edge(i, j)

    # -- bookkeeping ----------------------------------------------------

    def copy(self) -> "GraphState":
        g = GraphState(self.n)
        g.adj = self.adj.copy()
        g.alive = self.alive.copy()
        g.frame_x = self.frame_x.copy()
        g.frame_z = self.frame_z.copy()
        return g

    def _require_alive(self, q: int):
        if not 0 <= q < self.n:
            raise QubitRangeError(q, self.n)
        if not self.alive[q]:
            raise DeadQubitError(q)

    def neighbors(self, q: int) -> list:
        return [int(j) for j in np.flatnonzero(self.adj[q])]

    def edges(self) -> list:
        """Sorted edge list [(i, j), ...] with i < j."""
        out = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.adj[i, j]:
                    out.append((i, j))
        return out

    def degree(self, q: int) -> int:
        return int(self.adj[q].sum())

    def frame(self, q: int) -> str:
        x, z = self.frame_x[q], self.frame_z[q]
        return "I" if not x and not z else "X" if x and not z else "Z" if not x else "XZ"

    def frame_labels(self) -> list:
        return [self.frame(q) for q in range(self.n)]

    def frame_is_identity(self) -> bool:
        return not self.frame_x.any() and not self.frame_z.any()

    def clear_frame(self):
        self.frame_x[:] = 0
        self.frame_z[:] = 0
        return self

    def _kill(self, q: int):
        self.adj[q, :] = 0
        self.adj[:, q] = 0
        self.alive[q] = False
        self.frame_x[q] = 0
        self.frame_z[q] = 0

    def revive(self, q: int) -> "GraphState":
        """Re-initialize a dead qubit as a fresh |+> vertex (hardware reset)."""
        if not 0 <= q < self.n:
            raise QubitRangeError(q, self.n)
        if self.alive[q]:
            raise GraphStateError(f"qubit {q} is alive; revive is only for measured qubits")
        self.alive[q] = True
        return self

    # -- transformation rules -------------------------------------------

    def toggle_edge(self, i: int, j: int) -> "GraphState":
        """Apply CZ between i and j: flip the edge.

        Existing X-type frame entries pick up Z on the partner qubit,
        since CZ (X x I) CZ = X x Z.
        """
        self._require_alive(i)
        self._require_alive(j)
        if i == j:
            raise GraphStateError(f"cannot toggle a self-loop on qubit {i}")
        if self.frame_x[i]:
            self.frame_z[j] ^= 1
        if self.frame_x[j]:
            self.frame_z[i] ^= 1
        self.adj[i, j] ^= 1
        self.adj[j, i] ^= 1
        return self

    def _complement_within(self, verts):
        verts = list(verts)
        for idx, u in enumerate(verts):
            for v in verts[idx + 1 :]:
                self.adj[u, v] ^= 1
                self.adj[v, u] ^= 1

    def local_complement(self, a: int) -> "GraphState":
        """Rule T4: complement the subgraph induced by N(a).

        Physically applies sqrt(X) on a and sqrt(Z) on each neighbour, so
        the frame is conjugated: on a, Z <-> XZ; on each neighbour,
        X <-> XZ.
        """
        self._require_alive(a)
        nbrs = self.neighbors(a)
        self.frame_x[a] ^= self.frame_z[a]
        for b in nbrs:
            self.frame_z[b] ^= self.frame_x[b]
        self._complement_within(nbrs)
        return self

    def measure_z(self, a: int, outcome: int) -> tuple:
        """Rule T1: Z measurement removes the vertex and its edges.

        Outcome 1 (projection onto |1>) multiplies Z onto every
        neighbour's frame.  An X-type frame entry on ``a`` flips which
        physical outcome corresponds to which branch.
        """
        self._require_alive(a)
        if outcome not in (0, 1):
            raise GraphStateError(f"outcome must be 0 or 1, got {outcome}")
        eff = outcome ^ int(self.frame_x[a])
        nbrs = self.neighbors(a)
        self._kill(a)
        if eff:
            for b in nbrs:
                self.frame_z[b] ^= 1
        return self, MeasureOutcome((a,), "Z", (outcome,))

    def measure_y(self, a: int, outcome: int) -> tuple:
        """Rule T2: Y measurement complements N(a) and removes the vertex.

        Implemented as local complementation followed by a Z measurement,
        which equals a physical Y-basis measurement together with the
        deterministic sqrt(Z) corrections on the neighbourhood.
        """
        self._require_alive(a)
        if outcome not in (0, 1):
            raise GraphStateError(f"outcome must be 0 or 1, got {outcome}")
        self.local_complement(a)
        self.measure_z(a, outcome)
        return self, MeasureOutcome((a,), "Y", (outcome,))

    def measure_x_pair(self, a: int, b: int, outcomes: tuple) -> tuple:
        """Rule T3: X measurements on an adjacent pair.

        Removes both vertices and complements the bipartite subgraph
        between N(a)\\{b} and N(b)\\{a}, except that pairs of *common*
        neighbours are left alone (they are toggled twice).  Byproduct: Z
        on every common neighbour, Z on N(a)\\{b} when b's outcome is 1,
        and Z on N(b)\\{a} when a's outcome is 1.
        """
        sa, sb = outcomes
        self._require_alive(a)
        self._require_alive(b)
        if sa not in (0, 1) or sb not in (0, 1):
            raise GraphStateError(f"outcomes must be 0/1 bits, got {outcomes}")
        if not self.adj[a, b]:
            raise NotAdjacentError(a, b)
        # Z-type frame entries flip the effective X outcome
        sa_eff = sa ^ int(self.frame_z[a])
        sb_eff = sb ^ int(self.frame_z[b])
        na = set(self.neighbors(a)) - {b}
        nb = set(self.neighbors(b)) - {a}
        common = na & nb
        self._kill(a)
        self._kill(b)
        for u in sorted(na | nb):
            for v in sorted(na | nb):
                if v <= u:
                    continue
                qualifies = (u in na and v in nb) or (u in nb and v in na)
                if qualifies and not (u in common and v in common):
                    self.adj[u, v] ^= 1
                    self.adj[v, u] ^= 1
        for u in common:
            self.frame_z[u] ^= 1
        if sb_eff:
            for u in na:
                self.frame_z[u] ^= 1
        if sa_eff:
            for u in nb:
                self.frame_z[u] ^= 1
        return self, MeasureOutcome((a, b), "X", (sa, sb))

    # -- stabilizers and dense oracle -------------------------------------

    def stabilizer_generators(self) -> list:
        """Generators S_i = X_i prod_j Z_j^adj[i,j], sign-adjusted by the frame.

        Requires all qubits alive.  Each returned string stabilizes the
        dense construction of this state with eigenvalue +1; a leading
        '-' marks generators whose sign the frame flips.
        """
        if not self.alive.all():
            raise GraphStateError("stabilizers are defined for fully alive graphs")
        gens = []
        for i in range(self.n):
            chars = []
            flips = int(self.frame_z[i])  # X_i anticommutes with a Z-type frame
            for j in range(self.n):
                if j == i:
                    chars.append("X")
                elif self.adj[i, j]:
                    chars.append("Z")
                    flips ^= int(self.frame_x[j])
                else:
                    chars.append("I")
            gens.append(("-" if flips else "") + "".join(chars))
        return gens

    def to_dense(self):
        """Dense state over the alive qubits (ascending order), frame applied."""
        from . import densesim

        live = [q for q in range(self.n) if self.alive[q]]
        index = {q: k for k, q in enumerate(live)}
        edges = [(index[i], index[j]) for i, j in self.edges()]
        state = densesim.build_graph_state(edges, len(live))
        for q in live:
            if self.frame_z[q]:
                state.apply_1q(densesim.Z, index[q])
            if self.frame_x[q]:
                state.apply_1q(densesim.X, index[q])
        return state

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        d = {
            "n": self.n,
            "edges": [[i, j] for i, j in self.edges()],
            "frame": self.frame_labels(),
        }
        if not self.alive.all():
            d["alive"] = [bool(a) for a in self.alive]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d: dict) -> "GraphState":
        g = cls(int(d["n"]))
        for i, j in d.get("edges", []):
            g.toggle_edge(int(i), int(j))
        frame = d.get("frame")
        if frame is not None:
            if len(frame) != g.n:
                raise GraphStateError(f"frame length {len(frame)} != n={g.n}")
            for q, label in enumerate(frame):
                if label not in FRAME_LABELS:
                    raise GraphStateError(f"unknown frame label {label!r}")
                g.frame_x[q] = 1 if "X" in label else 0
                g.frame_z[q] = 1 if "Z" in label else 0
        for q, live in enumerate(d.get("alive", [True] * g.n)):
            if not live:
                g._kill(q)
        return g

    @classmethod
    def from_json(cls, text: str) -> "GraphState":
        return cls.from_json_dict(json.loads(text))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GraphState)
            and self.n == other.n
            and np.array_equal(self.adj, other.adj)
            and np.array_equal(self.alive, other.alive)
            and np.array_equal(self.frame_x, other.frame_x)
            and np.array_equal(self.frame_z, other.frame_z)
        )

    def __repr__(self) -> str:
        dead = [q for q in range(self.n) if not self.alive[q]]
        extra = f", dead={dead}" if dead else ""
        return f"GraphState(n={self.n}, edges={self.edges()}{extra})"
