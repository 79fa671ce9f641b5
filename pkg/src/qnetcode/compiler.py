"""Topology-aware graph-state compilation.

Rewiring plans build a target graph state out of native operations:
CZ on a coupling edge, local complementation (a single-qubit layer), and
Y measurement of ancilla qubits (path contraction).  A plan is verified
by replaying it in the exact rule engine from the all-|+> register and
comparing the final adjacency with the target under the logical-to-
physical map.  Planners may fail; they never return an unverified plan.

An explicit RESET step re-initializes a measured qubit to |+> so one
coupling edge can serve two contraction paths in separate rounds, which
is how a degree-limited lattice hosts more graph edges per qubit than it
has couplings.
"""

from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass, field

from .graphstate import GraphState, GraphStateError
from .topology import Topology, TopologyError, ibm_falcon_27

SWAP_CZ_COST = 3  # a SWAP decomposes into three two-qubit gates


class CompileError(ValueError):
    pass


@dataclass(frozen=True)
class PlanStep:
    op: str  # "CZ" | "LC" | "Y" | "RESET"
    qubits: tuple

    def __post_init__(self):
        if self.op not in ("CZ", "LC", "Y", "RESET"):
            raise CompileError(f"unknown plan op {self.op!r}")
        if self.op == "CZ" and len(self.qubits) != 2:
            raise CompileError("CZ step needs two qubits")
        if self.op != "CZ" and len(self.qubits) != 1:
            raise CompileError(f"{self.op} step needs one qubit")


@dataclass
class RewirePlan:
    """Ordered native steps plus the target-vertex placement."""

    steps: list
    logical_map: dict  # target vertex -> physical qubit label
    topology_name: str = ""

    @property
    def cz_count(self) -> int:
        return sum(1 for s in self.steps if s.op == "CZ")

    def to_json_dict(self) -> dict:
        return {
            "topology": self.topology_name,
            "steps": [{"op": s.op, "qubits": list(s.qubits)} for s in self.steps],
            "logical_map": {str(k): v for k, v in self.logical_map.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d: dict) -> "RewirePlan":
        steps = [PlanStep(s["op"], tuple(s["qubits"])) for s in d["steps"]]
        lmap = {int(k): v for k, v in d["logical_map"].items()}
        return cls(steps, lmap, d.get("topology", ""))

    @classmethod
    def from_json(cls, text: str) -> "RewirePlan":
        return cls.from_json_dict(json.loads(text))


@dataclass
class PlanReport:
    ok: bool
    cz_count: int
    errors: list
    frame: dict = field(default_factory=dict)
    final_edges: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def replay_plan(plan: RewirePlan, topology: Topology) -> tuple:
    """Run the plan in the rule engine over the whole register.

    Returns ``(GraphState, errors)`` where errors is a list of
    ``(step_index, message)``.  Measurement steps take the outcome-0
    branch; outcome dependence is a Pauli frame, so adjacency checks are
    outcome independent.
    """
    g = GraphState(topology.n)
    errors = []
    for k, step in enumerate(plan.steps):
        try:
            if step.op == "CZ":
                a, b = step.qubits
                if not topology.has_edge(a, b):
                    errors.append((k, f"CZ on ({a},{b}) is not a coupling edge"))
                    continue
                g.toggle_edge(topology.index(a), topology.index(b))
            elif step.op == "LC":
                g.local_complement(topology.index(step.qubits[0]))
            elif step.op == "Y":
                g.measure_y(topology.index(step.qubits[0]), 0)
            elif step.op == "RESET":
                g.revive(topology.index(step.qubits[0]))
        except (GraphStateError, TopologyError) as exc:
            errors.append((k, str(exc)))
    return g, errors


def verify_plan(plan: RewirePlan, target: GraphState, topology: Topology) -> PlanReport:
    """Replay and compare against the target graph.

    The final register must carry exactly the target adjacency on the
    mapped qubits; every unmapped surviving qubit must be isolated.
    """
    missing = set(target_vertices(target)) - set(plan.logical_map)
    if missing:
        return PlanReport(False, plan.cz_count, [(-1, f"logical map misses vertices {sorted(missing)}")])
    g, errors = replay_plan(plan, topology)
    if errors:
        return PlanReport(False, plan.cz_count, errors)

    phys = {v: topology.index(p) for v, p in plan.logical_map.items()}
    mapped = set(phys.values())
    problems = []
    for v, p in phys.items():
        if not g.alive[p]:
            problems.append((-1, f"mapped qubit {plan.logical_map[v]} was measured"))
    for u, v in itertools.combinations(sorted(phys), 2):
        want = int(target.adj[u, v]) if (target.alive[u] and target.alive[v]) else 0
        if int(g.adj[phys[u], phys[v]]) != want:
            problems.append((-1, f"edge ({u},{v}) mismatch: plan={g.adj[phys[u], phys[v]]}, target={want}"))
    for q in range(g.n):
        if q in mapped or not g.alive[q]:
            continue
        deg = g.degree(q)
        if deg:
            problems.append((-1, f"stray qubit {topology.qubits[q]} has {deg} leftover edges"))
    frame = {v: g.frame(p) for v, p in phys.items()}
    edges = [(topology.qubits[i], topology.qubits[j]) for i, j in g.edges()]
    return PlanReport(not problems, plan.cz_count, problems, frame, edges)


def target_vertices(target: GraphState) -> list:
    return [v for v in range(target.n) if target.alive[v]]


# -- the hand-derived butterfly plan -----------------------------------


BUTTERFLY_FALCON_MAP = {0: 3, 1: 5, 2: 9, 3: 8, 4: 14, 5: 11}

_BUTTERFLY_LOGICAL_STEPS = (
    ("CZ", (1, 0)), ("CZ", (1, 3)), ("CZ", (2, 3)), ("LC", (1,)), ("LC", (0,)),
    ("LC", (3,)), ("LC", (2,)), ("CZ", (4, 5)), ("CZ", (3, 5)), ("LC", (5,)),
    ("LC", (4,)), ("LC", (3,)), ("CZ", (3, 5)), ("CZ", (1, 3)), ("LC", (5,)),
)


def butterfly_plan_falcon27() -> RewirePlan:
    """Fifteen-step local-complementation plan for the butterfly resource.

    Builds the six-qubit resource with seven CZ gates on the 27-qubit
    falcon layout, on the device qubits {3, 5, 8, 9, 11, 14}; a naive
    SWAP route for the same graph needs twelve or more two-qubit gates.
    """
    steps = [
        PlanStep(op, tuple(BUTTERFLY_FALCON_MAP[q] for q in qs))
        for op, qs in _BUTTERFLY_LOGICAL_STEPS
    ]
    return RewirePlan(steps, dict(BUTTERFLY_FALCON_MAP), "ibm-falcon-27")


# -- path contraction ---------------------------------------------------


def plan_linear_contraction(topology: Topology, a, b, avoid=()) -> RewirePlan:
    """Connect two qubits through an isolated path: CZ chain + Y interior.

    The path must not run through ``avoid`` (qubits reserved by other
    structures).  When every route is blocked the error lists the
    blocking qubits of the unrestricted shortest path.
    """
    if a == b:
        raise CompileError("endpoints must differ")
    path = topology.shortest_path(a, b, avoid=avoid)
    if path is None:
        free = topology.shortest_path(a, b)
        if free is None:
            raise CompileError(f"no path between {a} and {b} in {topology.name}")
        blockers = sorted(set(free[1:-1]) & set(avoid), key=topology.index)
        raise CompileError(f"no isolated path between {a} and {b}: blocked by {blockers}")
    steps = [PlanStep("CZ", (u, v)) for u, v in zip(path, path[1:])]
    steps += [PlanStep("Y", (q,)) for q in path[1:-1]]
    return RewirePlan(steps, {0: a, 1: b}, topology.name)


def plan_junction_contraction(topology: Topology, center, targets, avoid=()) -> RewirePlan:
    """Connect a hub qubit to several targets in separate Y rounds.

    Connections are formed one per round: each round entangles one path
    and immediately contracts it.  When the coupling graph forces a later
    path through a qubit consumed by an earlier round, that qubit is
    RESET and reused, which is what lets a qubit collect more graph
    edges than it has couplings.
    """
    targets = list(targets)
    if len(set(targets)) != len(targets) or center in targets:
        raise CompileError("targets must be distinct and different from the center")
    avoid = set(avoid)
    steps = []
    consumed = set()
    lmap = {0: center}
    for i, t in enumerate(targets):
        keep_clear = (avoid | set(targets[i + 1:])) - {t}
        path = topology.shortest_path(center, t, avoid=keep_clear - consumed)
        if path is None:
            raise CompileError(f"no route from {center} to {t} avoiding {sorted(keep_clear)}")
        for q in path[1:-1]:
            if q in consumed:
                steps.append(PlanStep("RESET", (q,)))
        steps += [PlanStep("CZ", (u, v)) for u, v in zip(path, path[1:])]
        steps += [PlanStep("Y", (q,)) for q in path[1:-1]]
        consumed.update(path[1:-1])
        lmap[i + 1] = t
    return RewirePlan(steps, lmap, topology.name)


# -- best-first target search --------------------------------------------


def plan_target_graph(
    topology: Topology,
    target: GraphState,
    logical_map: dict,
    ancillas=(),
    budget: int = 100_000,
) -> RewirePlan:
    """Search for a minimum-CZ plan reaching the target adjacency.

    Uniform-cost search over the joint (adjacency, ancilla-liveness)
    state restricted to the mapped qubits plus any declared ancillas.
    Moves: CZ on an induced coupling edge (cost 1), local complementation
    (cost 0), Y measurement of an ancilla (cost 0).  Exceeding the node
    budget raises; a returned plan always verifies.
    """
    verts = [logical_map[v] for v in sorted(logical_map)] + [q for q in ancillas if q not in logical_map.values()]
    m = len(verts)
    if m > 16:
        raise CompileError(f"search restricted to at most 16 qubits, got {m}")
    vidx = {q: i for i, q in enumerate(verts)}
    n_mapped = len(logical_map)
    pair_bit = {}
    for i, j in itertools.combinations(range(m), 2):
        pair_bit[(i, j)] = len(pair_bit)

    couplings = [
        (vidx[a], vidx[b])
        for a, b in itertools.combinations(verts, 2)
        if topology.has_edge(a, b)
    ]
    couplings = [tuple(sorted(e)) for e in couplings]

    goal_bits = 0
    logical_of = {vidx[phys]: v for v, phys in logical_map.items()}
    for i, j in itertools.combinations(range(n_mapped), 2):
        u, v = logical_of[i], logical_of[j]
        if target.alive[u] and target.alive[v] and target.adj[u, v]:
            goal_bits |= 1 << pair_bit[(i, j)]

    def is_goal(adj_bits, alive_bits):
        for i, j in itertools.combinations(range(n_mapped), 2):
            if ((adj_bits >> pair_bit[(i, j)]) & 1) != ((goal_bits >> pair_bit[(i, j)]) & 1):
                return False
        for anc in range(n_mapped, m):
            if (alive_bits >> anc) & 1:
                for other in range(m):
                    if other != anc and _bit(adj_bits, pair_bit, anc, other):
                        return False
        return True

    def neighbors_of(adj_bits, v, alive_bits):
        return [
            u for u in range(m)
            if u != v and (alive_bits >> u) & 1 and _bit(adj_bits, pair_bit, u, v)
        ]

    start = (0, (1 << m) - 1)
    dist = {start: (0, None, None)}  # state -> (cost, prev_state, move)
    heap = [(0, 0, start)]
    counter = itertools.count(1)
    expanded = 0
    goal_state = None
    while heap:
        cost, _, state = heapq.heappop(heap)
        if cost > dist[state][0]:
            continue
        adj_bits, alive_bits = state
        if is_goal(adj_bits, alive_bits):
            goal_state = state
            break
        expanded += 1
        if expanded > budget:
            raise CompileError(f"search budget of {budget} nodes exhausted")
        moves = []
        for i, j in couplings:
            if (alive_bits >> i) & 1 and (alive_bits >> j) & 1:
                moves.append((("CZ", i, j), 1, (_toggle(adj_bits, pair_bit, i, j), alive_bits)))
        for v in range(m):
            if not (alive_bits >> v) & 1:
                continue
            nbrs = neighbors_of(adj_bits, v, alive_bits)
            new_adj = adj_bits
            for x, y in itertools.combinations(nbrs, 2):
                new_adj = _toggle(new_adj, pair_bit, x, y)
            moves.append((("LC", v), 0, (new_adj, alive_bits)))
            if v >= n_mapped:
                y_adj = new_adj  # complement of the neighbourhood, then drop v
                for u in nbrs:
                    y_adj = _toggle(y_adj, pair_bit, u, v) if _bit(y_adj, pair_bit, u, v) else y_adj
                moves.append((("Y", v), 0, (y_adj, alive_bits & ~(1 << v))))
        for move, w, nxt in moves:
            nc = cost + w
            if nxt not in dist or nc < dist[nxt][0]:
                dist[nxt] = (nc, state, move)
                heapq.heappush(heap, (nc, next(counter), nxt))

    if goal_state is None:
        raise CompileError("target graph unreachable with the given qubits")

    moves = []
    cur = goal_state
    while dist[cur][1] is not None:
        _, prev, move = dist[cur]
        moves.append(move)
        cur = prev
    moves.reverse()
    steps = []
    for move in moves:
        if move[0] == "CZ":
            steps.append(PlanStep("CZ", (verts[move[1]], verts[move[2]])))
        else:
            steps.append(PlanStep(move[0], (verts[move[1]],)))
    plan = RewirePlan(steps, dict(logical_map), topology.name)
    report = verify_plan(plan, target, topology)
    if not report.ok:
        raise CompileError(f"planner produced an invalid plan: {report.errors}")
    return plan


def _bit(adj_bits, pair_bit, i, j):
    if i == j:
        return 0
    key = (i, j) if i < j else (j, i)
    return (adj_bits >> pair_bit[key]) & 1


def _toggle(adj_bits, pair_bit, i, j):
    key = (i, j) if i < j else (j, i)
    return adj_bits ^ (1 << pair_bit[key])


# -- SWAP baseline --------------------------------------------------------


@dataclass
class SwapBaseline:
    """Gate count of a naive SWAP route for the same target.

    Each target edge between non-adjacent placements costs one SWAP
    chain along the shortest path (three two-qubit gates per SWAP) plus
    the entangling CZ.  ``two_qubit_gates`` counts CZ-equivalents and
    ``cnot_equivalents`` counts CNOTs; a SWAP is three gates and a CZ is
    one gate under both readings, so the two totals coincide and are
    reported separately only to make the accounting explicit.
    """

    two_qubit_gates: int
    cnot_equivalents: int
    swap_count: int
    per_edge: dict


def swap_baseline_count(topology: Topology, target: GraphState, logical_map: dict) -> SwapBaseline:
    if not topology.is_connected():
        raise CompileError(f"topology {topology.name} is disconnected")
    per_edge = {}
    total = 0
    swaps = 0
    for u, v in target.edges():
        d = topology.distance(logical_map[u], logical_map[v])
        gates = 1 + SWAP_CZ_COST * (d - 1)
        per_edge[(u, v)] = gates
        swaps += d - 1
        total += gates
    return SwapBaseline(total, total, swaps, per_edge)


# -- switch embedding ------------------------------------------------------


def embed_switch_heavy_hex(k: int, topology: Topology) -> RewirePlan:
    """Place and wire the k-port switch on a heavy-hex lattice.

    Switch line r lives on lattice row 2r; the odd row between two lines
    is a corridor reserved for that pair's central qubits.  Round t
    occupies the 12-column band starting at column 12t, with the block's
    input column at 12t+4 (a bridge column for every even gap) so all
    vertical hops land on existing bridges.  Every target edge routes
    through a vertex-disjoint lattice path whose interior is contracted
    with one round of Y measurements; replaying the plan must reproduce
    the abstract switch graph exactly.
    """
    from .switchnet import build_switch

    if topology.kind != "heavy-hex" or "rows" not in topology.meta:
        raise CompileError("switch embedding needs a generated heavy-hex topology")
    rows = topology.meta["rows"]
    cols = topology.meta["cols"]
    bridges = topology.meta["bridges"]
    need_rows = 2 * k - 1
    need_cols = 12 * k
    if rows < need_rows or cols < need_cols:
        raise CompileError(
            f"heavy-hex patch {rows}x{cols} too small for k={k}: need at least {need_rows}x{need_cols}"
        )

    def row_q(r, c):
        if not (0 <= r < rows and 0 <= c < cols):
            raise CompileError(f"placement ({r},{c}) falls outside the patch")
        return r * cols + c

    def bridge_q(gap, c):
        try:
            return bridges[(gap, c)]
        except KeyError:
            raise CompileError(f"no bridge at gap {gap}, column {c}") from None

    net = build_switch(k)
    placement = {}
    paths = []  # (target edge, physical path)
    ends = {}  # line -> (abstract tail qubit, its column)
    for i, src in enumerate(net.sources):
        placement[src] = row_q(2 * i, 0)
        ends[i] = (src, 0)

    for blk in net.switches:
        r = blk.row
        up, mid, dn = 2 * r, 2 * r + 1, 2 * r + 2
        x1 = 12 * blk.round + 4  # = 0 mod 4: bridge column on every even gap
        x2 = x1 + 4
        l_r, l_q = blk.links
        in_r, in_q = blk.inputs
        c0, c1 = blk.centers
        out_r, out_q = blk.outputs
        placement[l_r] = row_q(up, x1 - 1)
        placement[in_r] = row_q(up, x1)
        placement[out_r] = row_q(up, x2)
        placement[l_q] = row_q(dn, x1 - 3)
        placement[in_q] = row_q(dn, x1 - 2)
        placement[out_q] = row_q(dn, x2 + 2)
        placement[c0] = row_q(mid, x1)
        placement[c1] = row_q(mid, x2)

        prev_r, col_r = ends[r]
        prev_q, col_q = ends[r + 1]
        paths.append(((prev_r, l_r), _row_walk(row_q, up, col_r, x1 - 1)))
        paths.append(((prev_q, l_q), _row_walk(row_q, dn, col_q, x1 - 3)))
        paths.append(((l_r, in_r), [placement[l_r], placement[in_r]]))
        paths.append(((l_q, in_q), [placement[l_q], placement[in_q]]))
        paths.append(((in_r, out_r), _row_walk(row_q, up, x1, x2)))
        paths.append(((in_q, out_q), _row_walk(row_q, dn, x1 - 2, x2 + 2)))
        paths.append(((in_r, c0), [placement[in_r], bridge_q(up, x1), placement[c0]]))
        paths.append(
            ((c0, in_q),
             [placement[c0], row_q(mid, x1 - 1), row_q(mid, x1 - 2),
              bridge_q(mid, x1 - 2), placement[in_q]])
        )
        paths.append(((c0, c1), _row_walk(row_q, mid, x1, x2)))
        paths.append(((out_r, c1), [placement[out_r], bridge_q(up, x2), placement[c1]]))
        paths.append(
            ((c1, out_q),
             [placement[c1], row_q(mid, x2 + 1), row_q(mid, x2 + 2),
              bridge_q(mid, x2 + 2), placement[out_q]])
        )
        ends[r] = (out_r, x2)
        ends[r + 1] = (out_q, x2 + 2)

    steps, _ = _paths_to_steps(paths, placement)
    plan = RewirePlan(steps, placement, topology.name)
    report = verify_plan(plan, net.graph, topology)
    if not report.ok:
        raise CompileError(f"switch embedding failed verification: {report.errors[:3]}")
    return plan


def _row_walk(row_q, r, c_from, c_to):
    cs = range(c_from, c_to + 1) if c_to >= c_from else range(c_from, c_to - 1, -1)
    return [row_q(r, c) for c in cs]


def _paths_to_steps(paths, placement) -> tuple:
    """Flatten edge paths into CZ steps plus one Y-cleanup round.

    Paths must be interior disjoint from each other and from every
    placed vertex; violations raise immediately.
    """
    placed = set(placement.values())
    used_interior = set()
    cz_steps = []
    y_steps = []
    for (edge, path) in paths:
        if len(path) < 2:
            raise CompileError(f"degenerate path for target edge {edge}")
        if path[0] != placement[edge[0]] or path[-1] != placement[edge[1]]:
            raise CompileError(f"path for {edge} does not join its endpoints")
        interior = path[1:-1]
        for q in interior:
            if q in placed:
                raise CompileError(f"path for {edge} runs through placed vertex {q}")
            if q in used_interior:
                raise CompileError(f"paths overlap on qubit {q}")
            used_interior.add(q)
        for u, v in zip(path, path[1:]):
            cz_steps.append(PlanStep("CZ", (u, v)))
        for q in interior:
            y_steps.append(PlanStep("Y", (q,)))
    return cz_steps + y_steps, used_interior
