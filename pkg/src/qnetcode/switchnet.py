"""Non-blocking k-port switch built from 2x2 network-coding blocks.

The switch is a planar arrangement of butterfly blocks in odd-even
transposition (bubble-sort) order: round t holds a block on every line
pair (r, r+1) with r = t mod 2, for k rounds, giving k(k-1)/2 blocks,
the smallest count a non-blocking planar network can have.  Each block
contributes eight fresh qubits (per line: a link qubit joining the
previous line end to the block, an input port, and an output port, plus
the two central qubits); together with the k source qubits the total is
4k(k-1) + k.  Destinations are the final output ports of each line, so
the count formula includes sources but not separate destination qubits.

Routing a permutation sets each block to cross or straight by bubble
sorting the destination labels; executing the measurement schedule
leaves a perfect matching between sources and destinations, up to the
tracked Pauli frame, with every intermediate qubit removed by Y
measurements (rule T2).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .graphstate import GraphState, GraphStateError


class SwitchError(ValueError):
    pass


@dataclass(frozen=True)
class SwitchBlock:
    """One 2x2 block: which lines it joins and its qubit roles."""

    index: int
    round: int
    row: int  # upper of the two lines (row, row+1)
    links: tuple
    inputs: tuple
    centers: tuple
    outputs: tuple

    def qubits(self) -> tuple:
        return self.links + self.inputs + self.centers + self.outputs


@dataclass
class SwitchNetwork:
    k: int
    switches: list
    graph: GraphState
    sources: list
    destinations: list

    @property
    def n_qubits(self) -> int:
        return self.graph.n

    def to_json_dict(self) -> dict:
        d = self.graph.to_json_dict()
        d["k"] = self.k
        d["sources"] = list(self.sources)
        d["destinations"] = list(self.destinations)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))


def switch_rounds(k: int) -> list:
    """Odd-even transposition rounds: list of lists of upper-row indices."""
    return [[r for r in range(t % 2, k - 1, 2)] for t in range(k)]


def build_switch(k: int) -> SwitchNetwork:
    """Construct the k-port switching graph state.

    The structural constants are asserted rather than assumed: block
    count k(k-1)/2, qubit count 4k(k-1)+k, vertex degree at most 4, and
    connectivity.  Any mismatch raises instead of renumbering silently.
    """
    if k < 2:
        raise SwitchError(f"switch needs at least 2 ports, got k={k}")

    edges = []
    switches = []
    sources = list(range(k))
    ends = list(range(k))  # current tail qubit of each line
    next_q = k

    def alloc(m):
        nonlocal next_q
        ids = tuple(range(next_q, next_q + m))
        next_q += m
        return ids

    for t, rows in enumerate(switch_rounds(k)):
        for r in rows:
            l_r, l_q, in_r, in_q, c0, c1, out_r, out_q = alloc(8)
            edges += [(ends[r], l_r), (l_r, in_r), (ends[r + 1], l_q), (l_q, in_q)]
            edges += [
                (in_r, out_r), (in_q, out_q),
                (in_r, c0), (c0, in_q), (c0, c1), (out_r, c1), (c1, out_q),
            ]
            switches.append(
                SwitchBlock(len(switches), t, r, (l_r, l_q), (in_r, in_q), (c0, c1), (out_r, out_q))
            )
            ends[r], ends[r + 1] = out_r, out_q

    graph = GraphState(next_q, edges)
    net = SwitchNetwork(k, switches, graph, sources, list(ends))

    expect_switches = k * (k - 1) // 2
    expect_qubits = 4 * k * (k - 1) + k
    if len(switches) != expect_switches:
        raise SwitchError(f"built {len(switches)} switches, formula says {expect_switches}")
    if next_q != expect_qubits:
        raise SwitchError(f"built {next_q} qubits, formula says {expect_qubits}")
    maxdeg = max(graph.degree(q) for q in range(next_q))
    if maxdeg > 4:
        raise SwitchError(f"vertex degree {maxdeg} exceeds 4")
    if not _connected(graph):
        raise SwitchError("switch graph is not connected")
    return net


def _connected(g: GraphState) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v in g.neighbors(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


@dataclass
class Schedule:
    """Measurement schedule: switch-setting rounds, then Y cleanup."""

    k: int
    perm: tuple
    settings: dict  # switch index -> "cross" | "straight"
    rounds: list = field(default_factory=list)  # [(qubits tuple, basis), ...] per round

    def to_json_dict(self) -> dict:
        return {
            "k": self.k,
            "perm": list(self.perm),
            "settings": {str(i): s for i, s in self.settings.items()},
            "rounds": [
                [{"qubits": list(q), "basis": b} for q, b in rnd] for rnd in self.rounds
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))


def route(network: SwitchNetwork, perm) -> Schedule:
    """Odd-even transposition routing of a permutation.

    Stream i (entering at source i) must exit at destination perm[i].  A
    block crosses exactly when its two transiting streams' destination
    labels are out of order, so after all rounds the labels are sorted
    and every stream sits on its target line.
    """
    perm = tuple(int(p) for p in perm)
    k = network.k
    if sorted(perm) != list(range(k)):
        raise SwitchError(f"{perm} is not a permutation of 0..{k - 1}")

    targets = list(perm)  # targets[row] = destination label of the stream on that row
    settings = {}
    setting_rounds = []
    by_pos = {(s.round, s.row): s for s in network.switches}
    for t, rows in enumerate(switch_rounds(k)):
        entries = []
        for r in rows:
            blk = by_pos[(t, r)]
            if targets[r] > targets[r + 1]:
                settings[blk.index] = "cross"
                targets[r], targets[r + 1] = targets[r + 1], targets[r]
                entries.append((blk.centers, "Xpair"))
            else:
                settings[blk.index] = "straight"
                entries.append(((blk.centers[0],), "Z"))
                entries.append(((blk.centers[1],), "Z"))
        setting_rounds.append(entries)
    if targets != sorted(targets):
        raise SwitchError(f"routing failed to sort targets for {perm}")

    # cleanup: every link/input/output qubit except the final destinations,
    # ordered left to right along the lines (round order, then row)
    dests = set(network.destinations)
    cleanup = []
    for blk in network.switches:
        for q in blk.links + blk.inputs + blk.outputs:
            if q not in dests:
                cleanup.append(((q,), "Y"))
    rounds = setting_rounds + [cleanup]

    sched = Schedule(k, perm, settings, rounds)
    _check_schedule(network, sched)
    return sched


def _check_schedule(network: SwitchNetwork, sched: Schedule):
    if set(sched.settings) != {s.index for s in network.switches}:
        raise SwitchError("schedule must set every switch exactly once")
    seen = set()
    y_started = False
    for rnd in sched.rounds:
        for qubits, basis in rnd:
            if basis == "Y":
                y_started = True
            elif y_started:
                raise SwitchError("switch-setting measurements after Y cleanup")
            for q in qubits:
                if q in seen:
                    raise SwitchError(f"qubit {q} measured twice")
                seen.add(q)


def execute_schedule(network: SwitchNetwork, sched: Schedule, outcomes=None) -> GraphState:
    """Run the schedule on a copy of the network graph.

    ``outcomes`` maps qubit id to a measurement bit (missing ids default
    to 0).  The result must be the perfect matching source_i to
    destination_{perm[i]}; anything else raises.
    """
    if sched.k != network.k:
        raise SwitchError(f"schedule for k={sched.k} cannot run on k={network.k} network")
    outcomes = outcomes or {}
    g = network.graph.copy()
    for rnd in sched.rounds:
        for qubits, basis in rnd:
            if basis == "Xpair":
                a, b = qubits
                g.measure_x_pair(a, b, (outcomes.get(a, 0), outcomes.get(b, 0)))
            elif basis == "Z":
                g.measure_z(qubits[0], outcomes.get(qubits[0], 0))
            elif basis == "Y":
                g.measure_y(qubits[0], outcomes.get(qubits[0], 0))
            else:
                raise SwitchError(f"unknown basis {basis!r}")
    expected = {
        frozenset((network.sources[i], network.destinations[p]))
        for i, p in enumerate(sched.perm)
    }
    got = {frozenset(e) for e in g.edges()}
    if got != expected:
        raise SwitchError(
            f"schedule for perm {sched.perm} produced edges {sorted(map(sorted, got))}, "
            f"expected {sorted(map(sorted, expected))}"
        )
    return g


def trace_streams(network: SwitchNetwork, sched: Schedule) -> list:
    """Independent routing check: push stream labels through the settings.

    Returns out[row] = index of the source whose stream exits on that
    row.  Used as the bubble-sort trace oracle in tests.
    """
    rows = list(range(network.k))  # rows[r] = source index currently on row r
    by_pos = {(s.round, s.row): s for s in network.switches}
    for t, upper_rows in enumerate(switch_rounds(network.k)):
        for r in upper_rows:
            blk = by_pos[(t, r)]
            if sched.settings[blk.index] == "cross":
                rows[r], rows[r + 1] = rows[r + 1], rows[r]
    return rows
