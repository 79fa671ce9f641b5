# Dev-only scratch: butterfly examples + stabilizer grouping count.
import itertools

from qnetcode.graphstate import GraphState

BUTTERFLY_EDGES = [(0, 1), (4, 5), (0, 2), (2, 4), (2, 3), (1, 3), (3, 5)]


def butterfly():
    return GraphState(6, BUTTERFLY_EDGES)


# cross / straight
g = butterfly()
g.measure_x_pair(2, 3, (0, 0))
print("cross edges:", g.edges(), "frames:", g.frame_labels())

g = butterfly()
g.measure_z(2, 0)
g.measure_z(3, 0)
print("straight edges:", g.edges(), "frames:", g.frame_labels())

# frames for nonzero outcomes
for sa, sb in itertools.product((0, 1), repeat=2):
    g = butterfly()
    g.measure_x_pair(2, 3, (sa, sb))
    print(f"cross outcomes ({sa},{sb}) frames:", g.frame_labels())

# path of 5, Y-measure interiors
g = GraphState(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
for q in (1, 2, 3):
    g.measure_y(q, 0)
print("path contraction:", g.edges(), g.frame_labels())

# star LC -> K4
g = GraphState(4, [(0, 1), (0, 2), (0, 3)])
g.local_complement(0)
print("star LC(0):", g.edges())

# ------- stabilizer product expansion and grouping -------------------


def pauli_mul(p1, s1, p2, s2):
    """Multiply sign*string pairs; strings over IXYZ."""
    TABLE = {
        ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
        ("X", "I"): (1, "X"), ("X", "X"): (1, "I"), ("X", "Y"): (1j, "Z"), ("X", "Z"): (-1j, "Y"),
        ("Y", "I"): (1, "Y"), ("Y", "X"): (-1j, "Z"), ("Y", "Y"): (1, "I"), ("Y", "Z"): (1j, "X"),
        ("Z", "I"): (1, "Z"), ("Z", "X"): (1j, "Y"), ("Z", "Y"): (-1j, "X"), ("Z", "Z"): (1, "I"),
    }
    sign = s1 * s2
    out = []
    for a, b in zip(p1, p2):
        ph, c = TABLE[(a, b)]
        sign *= ph
        out.append(c)
    return "".join(out), sign


def products(gens):
    n = len(gens)
    out = []
    for bits in itertools.product([0, 1], repeat=n):
        s = "I" * n
        sign = 1
        for i, b in enumerate(bits):
            if b:
                s, sign = pauli_mul(s, sign, gens[i], 1)
        out.append((sign, s))
    return out


gens = [s.lstrip("-") for s in butterfly().stabilizer_generators()]
prods = products(gens)
print("num products:", len(prods), "signs:", {s for s, _ in prods})

non_identity = [p for _, p in prods if set(p) != {"I"}]
print("non-identity:", len(non_identity))


def compatible(setting, p):
    return all(c == "I" or setting[i] is None or setting[i] == c for i, c in enumerate(p))


def first_fit(ps):
    settings = []
    for p in ps:
        placed = False
        for st in settings:
            if compatible(st, p):
                for i, c in enumerate(p):
                    if c != "I":
                        st[i] = c
                placed = True
                break
        if not placed:
            settings.append([c if c != "I" else None for c in p])
    return settings


ff = first_fit(non_identity)
print("first-fit natural order:", len(ff))

ff_sorted = first_fit(sorted(non_identity))
print("first-fit lexicographic:", len(ff_sorted))

ff_weight = first_fit(sorted(non_identity, key=lambda p: (-sum(c != 'I' for c in p), p)))
print("first-fit by support desc:", len(ff_weight))

# full-support products need their own setting each
full = [p for p in non_identity if "I" not in p]
print("full-support products:", len(full))

# greedy set cover over all 3^6 settings
all_settings = ["".join(t) for t in itertools.product("XYZ", repeat=6)]
uncovered = set(non_identity)
count = 0
while uncovered:
    best = max(all_settings, key=lambda s: (sum(1 for p in uncovered if all(c == "I" or c == s[i] for i, c in enumerate(p))), [-ord(ch) for ch in s]))
    cov = {p for p in uncovered if all(c == "I" or c == best[i] for i, c in enumerate(p))}
    uncovered -= cov
    count += 1
print("greedy set cover:", count)

# count distinct maximal patterns: products not subsumed by another product
def subsumed(p, q):
    # p's support contained in q's with agreement
    return p != q and all(c == "I" or c == q[i] for i, c in enumerate(p))

maximal = [p for p in non_identity if not any(subsumed(p, q) for q in non_identity)]
print("maximal products:", len(maximal))
