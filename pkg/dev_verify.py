# Dev-only scratch: validate graph-rule conventions against the dense oracle.
# Not part of the deliverable.
import itertools
import numpy as np

from qnetcode.graphstate import GraphState
from qnetcode import densesim as ds


def dense_before(g):
    return g.to_dense()


def check_lc(g, a):
    """LC unitary applied densely must equal engine result."""
    before = g.to_dense()
    live = [q for q in range(g.n) if g.alive[q]]
    idx = {q: k for k, q in enumerate(live)}
    nbrs = g.neighbors(a)
    d = before.copy()
    d.apply_1q(ds.SQRT_X, idx[a])
    for b in nbrs:
        d.apply_1q(ds.SQRT_Z, idx[b])
    after = g.copy().local_complement(a).to_dense()
    return ds.states_equal(d, after)


def check_measure_z(g, a, s):
    live = [q for q in range(g.n) if g.alive[q]]
    idx = {q: k for k, q in enumerate(live)}
    d = g.to_dense()
    try:
        d, _, prob = ds.measure_basis(d, idx[a], "Z", s, remove=True)
    except ds.DenseSimError:
        return None  # zero-prob branch
    g2 = g.copy()
    g2.measure_z(a, s)
    after = g2.to_dense()
    return ds.states_equal(d, after), prob


def check_measure_y(g, a, s):
    live = [q for q in range(g.n) if g.alive[q]]
    idx = {q: k for k, q in enumerate(live)}
    nbrs = g.neighbors(a)
    d = g.to_dense()
    try:
        d, _, prob = ds.measure_basis(d, idx[a], "Y", s, remove=True)
    except ds.DenseSimError:
        return None
    # deterministic sqrt(Z) corrections on the (former) neighbours
    live_after = [q for q in live if q != a]
    idx2 = {q: k for k, q in enumerate(live_after)}
    for b in nbrs:
        d.apply_1q(ds.SQRT_Z, idx2[b])
    g2 = g.copy()
    g2.measure_y(a, s)
    after = g2.to_dense()
    return ds.states_equal(d, after), prob


def check_x_pair(g, a, b, sa, sb):
    live = [q for q in range(g.n) if g.alive[q]]
    idx = {q: k for k, q in enumerate(live)}
    d = g.to_dense()
    # measure the higher tensor index first so the lower one stays valid
    ia, ib = idx[a], idx[b]
    order = [(ia, sa), (ib, sb)]
    order.sort(key=lambda t: -t[0])
    try:
        d, _, p1 = ds.measure_basis(d, order[0][0], "X", order[0][1], remove=True)
        d, _, p2 = ds.measure_basis(d, order[1][0], "X", order[1][1], remove=True)
    except ds.DenseSimError:
        return None
    g2 = g.copy()
    g2.measure_x_pair(a, b, (sa, sb))
    after = g2.to_dense()
    return ds.states_equal(d, after), p1 * p2


def all_graphs(n):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in itertools.product([0, 1], repeat=len(pairs)):
        edges = [p for p, b in zip(pairs, bits) if b]
        yield GraphState(n, edges)


def random_frame(g, rng):
    for q in range(g.n):
        g.frame_x[q] = rng.integers(0, 2)
        g.frame_z[q] = rng.integers(0, 2)
    return g


fails = {"lc": 0, "z": 0, "y": 0, "x": 0}
total = {"lc": 0, "z": 0, "y": 0, "x": 0}
rng = np.random.default_rng(7)

for n in range(1, 5):
    for g0 in all_graphs(n):
        for with_frame in (False, True):
            g = g0.copy()
            if with_frame:
                random_frame(g, rng)
            for a in range(n):
                total["lc"] += 1
                if not check_lc(g, a):
                    fails["lc"] += 1
                for s in (0, 1):
                    r = check_measure_z(g, a, s)
                    if r:
                        total["z"] += 1
                        ok, prob = r
                        if not ok or abs(prob - 0.5) > 1e-9:
                            fails["z"] += 1
                    r = check_measure_y(g, a, s)
                    if r:
                        total["y"] += 1
                        ok, prob = r
                        if not ok or abs(prob - 0.5) > 1e-9:
                            fails["y"] += 1
            for a in range(n):
                for b in range(n):
                    if a != b and g.adj[a, b]:
                        for sa, sb in itertools.product((0, 1), repeat=2):
                            r = check_x_pair(g, a, b, sa, sb)
                            if r:
                                total["x"] += 1
                                ok, prob = r
                                if not ok or abs(prob - 0.25) > 1e-9:
                                    fails["x"] += 1

print("totals:", total)
print("fails:", fails)
