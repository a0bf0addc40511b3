"""Communication graphs and consensus weight matrices."""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GenerationError, NumericError, ParameterError
from .linalg import hermitian_evd_oracle

MAX_REWIRE_ATTEMPTS = 32
STOCHASTIC_TOL = 1e-12


@dataclass(frozen=True)
class Topology:
    """Undirected simple connected graph on nodes ``0..node_count-1``."""

    node_count: int
    edges: frozenset

    def __post_init__(self):
        if self.node_count < 1:
            raise ParameterError("node_count must be positive")
        normed = set()
        for e in self.edges:
            i, j = (int(x) for x in e)
            if i == j:
                raise ParameterError(f"self-loop at node {i}")
            if not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise ParameterError(f"edge ({i}, {j}) out of range")
            normed.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normed))
        if not self.is_connected():
            raise ParameterError("topology is not connected")

    @classmethod
    def from_edges(cls, node_count, edges):
        return cls(node_count, frozenset(tuple(e) for e in edges))

    @cached_property
    def neighbors(self):
        nbrs = [[] for _ in range(self.node_count)]
        for i, j in sorted(self.edges):
            nbrs[i].append(j)
            nbrs[j].append(i)
        return tuple(tuple(sorted(n)) for n in nbrs)

    def adjacency(self):
        A = np.zeros((self.node_count, self.node_count))
        for i, j in self.edges:
            A[i, j] = A[j, i] = 1.0
        return A

    def degrees(self):
        return np.array([len(n) for n in self.neighbors])

    def is_connected(self):
        seen = {0}
        stack = [0]
        adj = {i: [] for i in range(self.node_count)}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        while stack:
            for j in adj[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        return len(seen) == self.node_count

    def to_edge_list(self):
        return "".join(f"{i} {j}\n" for i, j in sorted(self.edges))

    @classmethod
    def from_edge_list(cls, text, node_count=None):
        edges = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParameterError(f"bad edge line: {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
        if node_count is None:
            node_count = 1 + max((max(e) for e in edges), default=0)
        return cls.from_edges(node_count, edges)


def path_graph(n):
    return Topology.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return Topology.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def _watts_strogatz_edges(n, k, p, rng):
    adj = [set() for _ in range(n)]
    lattice = []
    for j in range(1, k // 2 + 1):
        for i in range(n):
            a, b = i, (i + j) % n
            adj[a].add(b)
            adj[b].add(a)
            lattice.append((a, b))
    for a, b in lattice:
        if rng.random() >= p:
            continue
        choices = [w for w in range(n) if w != a and w not in adj[a]]
        if not choices:
            continue
        w = choices[int(rng.integers(len(choices)))]
        adj[a].discard(b)
        adj[b].discard(a)
        adj[a].add(w)
        adj[w].add(a)
    return {(min(a, b), max(a, b)) for a in range(n) for b in adj[a]}


def generate_small_world(n, k, p, seed=0):
    """Watts-Strogatz graph: ring lattice of degree ``k`` with rewiring probability ``p``.

    A disconnected outcome is regenerated from a derived seed, up to
    ``MAX_REWIRE_ATTEMPTS`` times.
    """
    if n < 3 or k < 2 or k % 2 or k >= n:
        raise ParameterError(f"need n >= 3 and even 2 <= k < n, got n={n}, k={k}")
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"rewiring probability {p} outside [0, 1]")
    for attempt in range(MAX_REWIRE_ATTEMPTS):
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), attempt]))
        edges = _watts_strogatz_edges(n, k, p, rng)
        try:
            return Topology(n, frozenset(edges))
        except ParameterError:
            continue
    raise GenerationError(f"no connected small-world graph after {MAX_REWIRE_ATTEMPTS} attempts")


def laplacian(t: Topology):
    A = t.adjacency()
    return np.diag(A.sum(axis=1)) - A


@dataclass(frozen=True, eq=False)
class ConsensusWeights:
    """Symmetric doubly stochastic averaging matrix ``W`` for a topology."""

    matrix: np.ndarray
    topology: Topology = field(default=None, repr=False)

    @property
    def node_count(self):
        return self.matrix.shape[0]

    @property
    def edge_count(self):
        if self.topology is not None:
            return len(self.topology.edges)
        W = self.matrix
        return int(np.count_nonzero(np.triu(W, 1)))

    @cached_property
    def csr(self):
        """(indptr, indices, data) over the diagonal plus graph edges."""
        n = self.node_count
        W = self.matrix
        indptr = [0]
        indices = []
        data = []
        for i in range(n):
            if self.topology is not None:
                cols = sorted((i,) + self.topology.neighbors[i])
            else:
                cols = [j for j in range(n) if W[i, j] != 0 or j == i]
            indices.extend(cols)
            data.extend(W[i, c] for c in cols)
            indptr.append(len(indices))
        return (np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64),
                np.array(data, dtype=np.float64))

    def violations(self):
        """Names of the weight-matrix conditions this matrix fails."""
        W = self.matrix
        n = self.node_count
        bad = []
        if not np.allclose(W, W.T, rtol=0, atol=STOCHASTIC_TOL):
            bad.append("symmetric")
        if np.abs(W.sum(axis=1) - 1).max() > STOCHASTIC_TOL or np.abs(W.sum(axis=0) - 1).max() > STOCHASTIC_TOL:
            bad.append("doubly_stochastic")
        if self.topology is not None:
            mask = self.topology.adjacency() + np.eye(n)
            if np.any((mask == 0) & (W != 0)):
                bad.append("sparsity")
        if spectral_gap(self) >= 1.0:
            bad.append("spectral_gap")
        return bad

    def is_valid(self):
        return not self.violations()

    def validate(self):
        bad = self.violations()
        if bad:
            raise ParameterError(f"invalid consensus weights: {', '.join(bad)}")
        return self


def best_constant_weights(t: Topology) -> ConsensusWeights:
    """``W = I - c L`` with ``c = 2 / (lambda_max(L) + lambda_min_nonzero(L))``."""
    L = laplacian(t)
    n = t.node_count
    if n == 1:
        return ConsensusWeights(np.ones((1, 1)), t)
    lam = hermitian_evd_oracle(L).eigenvalues
    lam_max = lam[0]
    nonzero = lam[lam > 1e-9 * max(lam_max, 1.0)]
    denom = lam_max + (nonzero.min() if nonzero.size else 0.0)
    if not denom > 0:
        raise NumericError("degenerate Laplacian spectrum")
    W = np.eye(n) - (2.0 / denom) * L
    W = 0.5 * (W + W.T)
    return ConsensusWeights(W, t)


def spectral_gap(w: ConsensusWeights) -> float:
    """Largest eigenvalue modulus of ``W`` on the complement of the all-ones vector."""
    W = np.asarray(w.matrix, dtype=float)
    n = W.shape[0]
    if n == 1:
        return 0.0
    P = W - np.ones((n, n)) / n
    P = 0.5 * (P + P.T)
    return float(np.abs(hermitian_evd_oracle(P).eigenvalues).max())
