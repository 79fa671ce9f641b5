"""Hardware coupling topologies: heavy-hex, square grid, custom.

A topology is an undirected simple graph of named qubits.  The heavy-hex
generator produces long rows of qubits joined by bridge qubits every
fourth column, with the bridge columns offset by two between successive
row gaps, so every vertex has degree at most three.  The 27-qubit falcon
arrangement used on IBM devices ships as the built-in "ibm-falcon-27".
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field


class TopologyError(ValueError):
    pass


FALCON_27_EDGES = (
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8), (6, 7), (7, 10),
    (8, 9), (8, 11), (10, 12), (11, 14), (12, 13), (12, 15), (13, 14), (14, 16),
    (15, 18), (16, 19), (17, 18), (18, 21), (19, 20), (19, 22), (21, 23),
    (22, 25), (23, 24), (24, 25), (25, 26),
)


@dataclass
class Topology:
    """Undirected coupling graph over qubit labels."""

    name: str
    qubits: list
    edges: list
    kind: str = "custom"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self._index = {q: i for i, q in enumerate(self.qubits)}
        if len(self._index) != len(self.qubits):
            raise TopologyError("duplicate qubit labels")
        self._adj = {q: set() for q in self.qubits}
        canon = []
        for a, b in self.edges:
            if a == b:
                raise TopologyError(f"self-loop on {a}")
            if a not in self._index or b not in self._index:
                raise TopologyError(f"edge ({a},{b}) references unknown qubit")
            if b in self._adj[a]:
                raise TopologyError(f"duplicate edge ({a},{b})")
            self._adj[a].add(b)
            self._adj[b].add(a)
            canon.append(tuple(sorted((self._index[a], self._index[b]))))
        self.edges = sorted((self.qubits[i], self.qubits[j]) for i, j in canon)
        limit = {"heavy-hex": 3, "square-grid": 4}.get(self.kind)
        if limit is not None:
            worst = max((len(v) for v in self._adj.values()), default=0)
            if worst > limit:
                raise TopologyError(f"{self.kind} topology has degree {worst} > {limit}")

    @property
    def n(self) -> int:
        return len(self.qubits)

    def index(self, qubit) -> int:
        try:
            return self._index[qubit]
        except KeyError:
            raise TopologyError(f"unknown qubit {qubit!r}") from None

    def has_edge(self, a, b) -> bool:
        return b in self._adj.get(a, ())

    def neighbors(self, q) -> list:
        return sorted(self._adj[q], key=self.index)

    def degree(self, q) -> int:
        return len(self._adj[q])

    def shortest_path(self, a, b, avoid=()) -> list | None:
        """BFS path from a to b whose interior avoids `avoid`.

        Ties break toward lower qubit index, so results are deterministic.
        Returns None when no such path exists.
        """
        avoid = set(avoid) - {a, b}
        if a == b:
            return [a]
        prev = {a: None}
        queue = deque([a])
        while queue:
            u = queue.popleft()
            for v in self.neighbors(u):
                if v in prev or v in avoid:
                    continue
                prev[v] = u
                if v == b:
                    path = [b]
                    while prev[path[-1]] is not None:
                        path.append(prev[path[-1]])
                    return path[::-1]
                queue.append(v)
        return None

    def distance(self, a, b) -> int:
        path = self.shortest_path(a, b)
        if path is None:
            raise TopologyError(f"no path between {a} and {b}: topology disconnected")
        return len(path) - 1

    def is_connected(self) -> bool:
        if not self.qubits:
            return True
        seen = {self.qubits[0]}
        stack = [self.qubits[0]]
        while stack:
            u = stack.pop()
            for v in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n

    # -- serialization --------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "qubits": list(self.qubits),
            "edges": [[a, b] for a, b in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_dict(cls, d: dict) -> "Topology":
        return cls(d.get("name", "custom"), list(d["qubits"]), [tuple(e) for e in d["edges"]])

    @classmethod
    def from_json(cls, text: str) -> "Topology":
        return cls.from_json_dict(json.loads(text))


def _bridge_offset(gap: int) -> int:
    return 0 if gap % 2 == 0 else 2


def heavy_hex(rows: int, cols: int, name: str | None = None) -> Topology:
    """Heavy-hex lattice: `rows` long rows of `cols` qubits plus bridges.

    Row qubits are numbered row-major; bridge qubits follow, ordered by
    (gap, column).  Bridges sit at columns congruent to 0 mod 4 below
    even rows and 2 mod 4 below odd rows.
    """
    if rows < 1 or cols < 1:
        raise TopologyError(f"heavy-hex needs positive dimensions, got {rows}x{cols}")
    qubits = list(range(rows * cols))
    edges = []
    for r in range(rows):
        for c in range(cols - 1):
            edges.append((r * cols + c, r * cols + c + 1))
    bridges = {}
    nxt = rows * cols
    for gap in range(rows - 1):
        for c in range(_bridge_offset(gap), cols, 4):
            bridges[(gap, c)] = nxt
            edges.append((gap * cols + c, nxt))
            edges.append((nxt, (gap + 1) * cols + c))
            qubits.append(nxt)
            nxt += 1
    meta = {"rows": rows, "cols": cols, "bridges": bridges}
    return Topology(name or f"heavy-hex-{rows}x{cols}", qubits, edges, "heavy-hex", meta)


def square_grid(width: int, height: int, name: str | None = None) -> Topology:
    if width < 1 or height < 1:
        raise TopologyError(f"square grid needs positive dimensions, got {width}x{height}")
    qubits = list(range(width * height))
    edges = []
    for r in range(height):
        for c in range(width):
            if c + 1 < width:
                edges.append((r * width + c, r * width + c + 1))
            if r + 1 < height:
                edges.append((r * width + c, (r + 1) * width + c))
    return Topology(name or f"square-grid-{width}x{height}", qubits, edges, "square-grid")


def ibm_falcon_27() -> Topology:
    """The 27-qubit falcon heavy-hex arrangement (e.g. ibm_cairo)."""
    return Topology("ibm-falcon-27", list(range(27)), list(FALCON_27_EDGES), "heavy-hex")


BUILTIN_TOPOLOGIES = {
    "ibm-falcon-27": ibm_falcon_27,
}


def load_topology(ref: str) -> Topology:
    """Resolve a built-in name, a generator spec, or a JSON file path.

    Generator specs look like ``heavy-hex:3x38`` or ``square-grid:5x4``.
    """
    if ref in BUILTIN_TOPOLOGIES:
        return BUILTIN_TOPOLOGIES[ref]()
    for prefix, gen in (("heavy-hex:", heavy_hex), ("square-grid:", square_grid)):
        if ref.startswith(prefix):
            dims = ref[len(prefix):]
            try:
                a, b = (int(x) for x in dims.split("x"))
            except ValueError:
                raise TopologyError(f"bad dimensions in {ref!r}; expected e.g. {prefix}3x20") from None
            return gen(a, b)
    try:
        with open(ref, encoding="utf-8") as fh:
            return Topology.from_json(fh.read())
    except OSError as exc:
        raise TopologyError(f"cannot load topology {ref!r}: {exc}") from exc
