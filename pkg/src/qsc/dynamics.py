"""Synchronous majority dynamics on graphs with odd degrees.

X_v(t+1) = sign(sum_{w ~ v} X_w(t)).  With all degrees odd there are no
ties.  The energy

    L_t = 1/2 sum_{(u, v) ordered, u ~ v} (X_v(t+1) - X_u(t))^2
        = sum_{(u, v)} (1 - X_v(t+1) X_u(t))

is a nonnegative integer with L_t - L_{t-1} = -J_t, where
J_t = sum_v (X_v(t+1) - X_v(t-1)) sum_{w ~ v} X_w(t) >= 0.  So the
dynamics ends in a fixed point or a 2-cycle.
"""
import csv
import io
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from . import kernels
from .streams import chunk_rngs, mean_estimate, moments

MAX_VERTICES = 10 ** 6


class TheoremViolation(AssertionError):
    pass


@dataclass(frozen=True)
class OpinionGraph:
    """Simple undirected graph in CSR form; every degree must be odd."""
    indptr: np.ndarray
    indices: np.ndarray
    name: str = "graph"

    def __post_init__(self):
        nv = self.indptr.size - 1
        if nv > MAX_VERTICES:
            raise ValueError("vertex count exceeds the budget")
        deg = np.diff(self.indptr)
        if np.any(deg % 2 == 0):
            bad = int(np.flatnonzero(deg % 2 == 0)[0])
            raise ValueError(f"vertex {bad} has even degree {int(deg[bad])}")
        owner = np.repeat(np.arange(nv), deg)
        if np.any(owner == self.indices):
            raise ValueError("self-loops are not allowed")

    @property
    def num_vertices(self):
        return self.indptr.size - 1

    @property
    def degrees(self):
        return np.diff(self.indptr)

    def edges(self):
        owner = np.repeat(np.arange(self.num_vertices), self.degrees)
        keep = owner < self.indices
        return np.stack([owner[keep], self.indices[keep]], axis=1)


def from_edges(num_vertices, edges, name="graph"):
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if np.any(e[:, 0] == e[:, 1]):
        raise ValueError("self-loops are not allowed")
    key = np.minimum(e[:, 0], e[:, 1]) * num_vertices + np.maximum(e[:, 0], e[:, 1])
    if np.unique(key).size != key.size:
        raise ValueError("parallel edges are not allowed")
    both = np.concatenate([e, e[:, ::-1]])
    order = np.lexsort((both[:, 1], both[:, 0]))
    both = both[order]
    counts = np.bincount(both[:, 0], minlength=num_vertices)
    indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    return OpinionGraph(indptr, np.ascontiguousarray(both[:, 1], dtype=np.int64), name)


def from_networkx(g, name=None):
    g = nx.convert_node_labels_to_integers(g)
    return from_edges(g.number_of_nodes(), list(g.edges()), name or "networkx")


def random_regular(d, n, seed=0):
    return from_networkx(nx.random_regular_graph(d, n, seed=seed),
                         f"random_regular:d={d},n={n},seed={seed}")


def complete(n):
    return from_networkx(nx.complete_graph(n), f"complete:n={n}")


def complete_bipartite(a, b):
    return from_networkx(nx.complete_bipartite_graph(a, b), f"complete_bipartite:a={a},b={b}")


def torus_with_matching(rows=6, cols=6):
    """C_rows x C_cols plus the matching (i, j) ~ (i + rows/2, j): degree 5."""
    if rows % 2 or rows < 6 or cols < 3:
        raise ValueError("need an even row count >= 6 and at least 3 columns")
    edges = []
    vid = lambda i, j: (i % rows) * cols + (j % cols)
    for i in range(rows):
        for j in range(cols):
            edges.append((vid(i, j), vid(i + 1, j)))
            edges.append((vid(i, j), vid(i, j + 1)))
            if i < rows // 2:
                edges.append((vid(i, j), vid(i + rows // 2, j)))
    return from_edges(rows * cols, edges, f"torus:rows={rows},cols={cols}")


def _params(text):
    out = {}
    for part in filter(None, text.split(",")):
        key, val = part.split("=")
        out[key.strip()] = int(val)
    return out


def from_spec(spec):
    """Named generators: random_regular:d=3,n=100,seed=7 | complete:n=4 |
    complete_bipartite:a=3,b=3 | torus:rows=6,cols=6."""
    name, _, rest = spec.partition(":")
    p = _params(rest)
    if name == "random_regular":
        return random_regular(p.get("d", 3), p.get("n", 100), p.get("seed", 0))
    if name == "complete":
        return complete(p["n"])
    if name == "complete_bipartite":
        return complete_bipartite(p["a"], p["b"])
    if name == "torus":
        return torus_with_matching(p.get("rows", 6), p.get("cols", 6))
    raise ValueError(f"unknown graph spec {spec!r}")


def read_edge_list(path):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#")[0].strip()
            if line:
                u, v = line.split()[:2]
                rows.append((int(u), int(v)))
    nv = 1 + max(max(r) for r in rows) if rows else 0
    return from_edges(nv, rows, str(path))


def write_edge_list(graph, path):
    with open(path, "w") as fh:
        for u, v in graph.edges():
            fh.write(f"{u} {v}\n")


# ---------------------------------------------------------------- dynamics

def step(graph, state):
    return kernels.majority_step(graph.indptr, graph.indices,
                                 np.ascontiguousarray(state, dtype=np.int8))


def neighbour_sums(graph, state):
    return np.add.reduceat(np.asarray(state, dtype=np.int64)[graph.indices], graph.indptr[:-1])


def energy(graph, now, nxt):
    """L = sum over ordered adjacent pairs (u, v) of 1 - X_v(next) X_u(now)."""
    return int(np.dot(nxt.astype(np.int64), neighbour_sums(graph, now))
               * -1 + graph.indices.size)


def coupling(graph, prev, now, nxt):
    """J = sum_v (X_v(next) - X_v(prev)) sum_{w ~ v} X_w(now)."""
    diff = nxt.astype(np.int64) - prev.astype(np.int64)
    return int(np.dot(diff, neighbour_sums(graph, now)))


@dataclass
class DynamicsTrace:
    states: list
    energies: list          # L_t for t = 0 .. T-1
    couplings: list         # J_t for t = 1 .. T-1 (index 0 unused, None)
    period: int
    entry: int
    identity_ok: bool
    nonincreasing: bool
    hamming_to_final: list = field(default_factory=list)

    def rows(self):
        out = []
        for t, e in enumerate(self.energies):
            out.append({"t": t, "L_t": e, "J_t": self.couplings[t],
                        "hamming_to_final": self.hamming_to_final[t]})
        return out

    def to_csv(self):
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["t", "L_t", "J_t", "hamming_to_final"])
        w.writeheader()
        for r in self.rows():
            w.writerow({k: ("" if v is None else v) for k, v in r.items()})
        return buf.getvalue()

    def limit_state(self):
        """State at the first even time after the dynamics became periodic."""
        t = self.entry + (self.entry % 2)
        return self.states[t]


def run_to_period(graph, state, t_max=10_000):
    """Iterate until X(t + 2) = X(t); check the energy identity every step."""
    x = [np.asarray(state, dtype=np.int8).copy()]
    x.append(step(graph, x[0]))
    x.append(step(graph, x[1]))
    energies = [energy(graph, x[0], x[1])]
    couplings = [None]
    identity_ok = True
    seen = {x[0].tobytes(): 0}
    t = 0
    while not np.array_equal(x[t + 2], x[t]):
        t += 1
        if t > t_max:
            raise TheoremViolation(f"no period <= 2 within {t_max} steps on {graph.name}")
        # x[t + 1] exists; L_t uses X(t), X(t+1); J_t uses X(t-1), X(t), X(t+1)
        energies.append(energy(graph, x[t], x[t + 1]))
        couplings.append(coupling(graph, x[t - 1], x[t], x[t + 1]))
        identity_ok &= energies[t] - energies[t - 1] == -couplings[t]
        key = x[t].tobytes()
        if key in seen and t - seen[key] > 2:
            raise TheoremViolation(f"cycle of length {t - seen[key]} on {graph.name}: "
                                   f"{x[t].tolist()}")
        seen[key] = t
        x.append(step(graph, x[t + 1]))
    entry = t
    # one step inside the periodic regime, where J vanishes
    energies.append(energy(graph, x[t + 1], x[t + 2]))
    couplings.append(coupling(graph, x[t], x[t + 1], x[t + 2]))
    identity_ok &= energies[-1] - energies[-2] == -couplings[-1] and couplings[-1] == 0
    period = 1 if np.array_equal(x[entry + 1], x[entry]) else 2
    nonincreasing = all(b <= a for a, b in zip(energies, energies[1:]))
    final = x[entry + (entry % 2)]
    ham = [int(np.count_nonzero(s != final)) for s in x[:len(energies)]]
    return DynamicsTrace(x, energies, couplings, period, entry, bool(identity_ok),
                         bool(nonincreasing), ham)


# ---------------------------------------------------------------- retention

@dataclass(frozen=True)
class RetentionPoint:
    p: float
    estimate: float
    std_error: float
    samples: int


def retention_experiment(graph, ps, samples=200, seed=0):
    """P[majority of the limit state is +] from iid p-biased starts.

    The limit is read at an even time; a tied majority counts 1/2.
    """
    out = []
    for j, p in enumerate(ps):
        rngs = chunk_rngs([seed, j], samples)
        vals = []
        for rng in rngs:
            x0 = np.where(rng.random(graph.num_vertices) < p, 1, -1).astype(np.int8)
            tr = run_to_period(graph, x0)
            s = int(tr.limit_state().astype(np.int64).sum())
            vals.append(1.0 if s > 0 else (0.5 if s == 0 else 0.0))
        est = mean_estimate([moments(vals)])
        out.append(RetentionPoint(float(p), est.mean, est.std_error, est.samples))
    monotone = all(b.estimate >= a.estimate - 3 * (a.std_error + b.std_error)
                   for a, b in zip(out, out[1:]))
    return out, monotone


def exhaustive_periods(graph):
    """Periods and entry times from every start state (small graphs only)."""
    nv = graph.num_vertices
    if nv > 16:
        raise ValueError("exhaustive start enumeration limited to 16 vertices")
    res = []
    for code in range(1 << nv):
        x0 = np.array([1 if code >> v & 1 else -1 for v in range(nv)], dtype=np.int8)
        tr = run_to_period(graph, x0)
        res.append((tr.period, tr.entry, tr.identity_ok, tr.nonincreasing))
    return res
