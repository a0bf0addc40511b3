"""Sequential and parallel distributed power EVD/SVD over gossip networks.

Node-local arithmetic is written row-wise: row ``i`` of every array below
is data held by node ``i`` and is only combined with results delivered to
that node by a consensus session or a cross-set relay. All network inner
products of one power iteration travel in a single batched session per
node set, so one session costs ``K`` shaking-hands whatever its width.
"""
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .centralized import GUARD_EPS, PowerConfig, initial_vectors
from .consensus import CommLedger, ac_estimate, exact_average, init_session, run_consensus
from .errors import NumericError, ParameterError
from .graph import ConsensusWeights, Topology, best_constant_weights
from .signal import SampleSet


@dataclass(frozen=True)
class Gossip:
    K: int

    def __post_init__(self):
        if int(self.K) < 1:
            raise ParameterError("gossip mode needs K >= 1 rounds")


@dataclass(frozen=True)
class Exact:
    pass


AveragingMode = Union[Gossip, Exact]


@dataclass(frozen=True)
class BridgeMap:
    """Gateway node in the other set for every node of each set."""

    s_to_r: tuple
    r_to_s: tuple

    @classmethod
    def round_robin(cls, n_s, n_r):
        return cls(tuple(i % n_r for i in range(n_s)), tuple(j % n_s for j in range(n_r)))

    def validate(self, n_s, n_r):
        if len(self.s_to_r) != n_s or len(self.r_to_s) != n_r:
            raise ParameterError(
                f"bridge covers {len(self.s_to_r)}/{len(self.r_to_s)} nodes, expected {n_s}/{n_r}")
        if any(not 0 <= g < n_r for g in self.s_to_r) or any(not 0 <= g < n_s for g in self.r_to_s):
            raise ParameterError("bridge gateway index out of range")
        return self


@dataclass
class Diagnostics:
    guard_activations: int = 0
    # largest |imag| among value estimates whose real part was used
    max_imag: float = 0.0
    nonpositive_norms: int = 0

    def as_dict(self):
        return {"guard_activations": self.guard_activations, "max_imag": self.max_imag,
                "nonpositive_norms": self.nonpositive_norms}


@dataclass
class NodeState:
    node_id: int
    set_tag: str
    local_samples: np.ndarray
    vec_entries: np.ndarray
    values: np.ndarray


@dataclass(eq=False)
class DistributedSVD:
    U: np.ndarray
    V: np.ndarray
    u_values: np.ndarray
    v_values: np.ndarray
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def nodes(self, samples: SampleSet):
        out = [NodeState(i, "S", samples.s_samples[i], self.U[i], self.u_values[i])
               for i in range(self.U.shape[0])]
        out += [NodeState(j, "R", samples.r_samples[j], self.V[j], self.v_values[j])
                for j in range(self.V.shape[0])]
        return out


@dataclass(eq=False)
class DistributedEVD:
    U: np.ndarray
    values: np.ndarray
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    @property
    def eigenvalues(self):
        """Per-node eigenvalue estimates (real part), node x component."""
        return self.values.real

    def nodes(self, x):
        return [NodeState(i, "S", x[i], self.U[i], self.values[i]) for i in range(self.U.shape[0])]


def _as_weights(t) -> ConsensusWeights:
    if isinstance(t, ConsensusWeights):
        return t
    if isinstance(t, Topology):
        return best_constant_weights(t)
    raise ParameterError(f"expected a Topology or ConsensusWeights, got {type(t).__name__}")


class _Network:
    """Consensus channel of one node set."""

    def __init__(self, topo, mode, ledger):
        self.weights = _as_weights(topo)
        self.topology = self.weights.topology
        self.mode = mode
        self.ledger = ledger
        self.n = self.weights.node_count
        if not isinstance(mode, (Gossip, Exact)):
            raise ParameterError(f"unknown averaging mode {mode!r}")

    def ac(self, payload):
        if isinstance(self.mode, Exact):
            avg = exact_average(payload)
        else:
            avg = run_consensus(init_session(self.weights, payload), self.mode.K, self.ledger)
        return ac_estimate(avg, self.n)

    def guard(self, est, entries, norms, diag):
        """Replace estimates at nodes whose normalised entry is below ``GUARD_EPS``.

        A flagged node takes the estimate of its neighbour holding the
        largest-magnitude entry.
        """
        mag = np.abs(entries) / np.sqrt(np.abs(norms))
        bad = ~(mag >= GUARD_EPS)
        if not bad.any():
            return est
        out = est.copy()
        for i, col in zip(*np.nonzero(bad)):
            nbrs = self.topology.neighbors[i] if self.topology is not None else tuple(
                j for j in range(self.n) if j != i)
            if not nbrs:
                continue
            best = max(nbrs, key=lambda j: mag[j, col])
            out[i, col] = est[best, col]
            diag.guard_activations += 1
        return out


def _modes(mode):
    if isinstance(mode, tuple):
        if len(mode) != 2:
            raise ParameterError("expected (mode_s, mode_r)")
        return mode
    return mode, mode


def cross_set_relay(values, gateways, ledger):
    """Deliver to each destination node the row held by its gateway in the source set."""
    gateways = np.asarray(gateways, dtype=np.int64)
    if gateways.size and (gateways.min() < 0 or gateways.max() >= values.shape[0]):
        raise ParameterError("gateway index out of range for the source set")
    if ledger is not None:
        ledger.cross_set_exchanges += 1
    return np.asarray(values)[gateways]


def _ratio(numer, entries):
    with np.errstate(divide="ignore", invalid="ignore"):
        return numer / entries


def _norms(ac_col, diag):
    x = np.asarray(ac_col).real
    if np.any(x <= 0):
        diag.nonpositive_norms += int(np.sum(x <= 0))
        x = np.abs(x)
    if np.any(x == 0):
        raise NumericError("consensus norm estimate is zero")
    return x


def _check_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NumericError("non-finite power iterate")


def _check_svd_inputs(samples, cfg, n_s, n_r):
    if samples.s_samples.shape[1] != samples.r_samples.shape[1]:
        raise ParameterError("s and r snapshot counts differ")
    if cfg.num_components > min(n_s, n_r):
        raise ParameterError(
            f"num_components={cfg.num_components} exceeds min(|S|, |R|)={min(n_s, n_r)}")


def _setup_svd(samples, topo_s, topo_r, bridge, cfg, mode, ledger):
    S = np.asarray(samples.s_samples, dtype=complex)
    R = np.asarray(samples.r_samples, dtype=complex)
    mode_s, mode_r = _modes(mode)
    net_s = _Network(topo_s, mode_s, ledger)
    net_r = _Network(topo_r, mode_r, ledger)
    if net_s.n != S.shape[0] or net_r.n != R.shape[0]:
        raise ParameterError("topology sizes do not match the sample sets")
    _check_svd_inputs(samples, cfg, net_s.n, net_r.n)
    bridge.validate(net_s.n, net_r.n)
    return S, R, net_s, net_r


def sequential_power_svd(samples: SampleSet, topo_s, topo_r, bridge: BridgeMap, cfg: PowerConfig,
                         mode, seed, ledger: CommLedger = None) -> DistributedSVD:
    """Components one at a time, each deflated by the final estimates of earlier ones.

    ``mode`` is one averaging mode for both sets or a ``(mode_s, mode_r)`` pair.
    """
    S, R, net_s, net_r = _setup_svd(samples, topo_s, topo_r, bridge, cfg, mode, ledger)
    n_s, T = S.shape
    n_r = R.shape[0]
    H, alpha = cfg.num_components, cfg.shift
    Sc, Rc = S.conj(), R.conj()
    diag = Diagnostics()
    U0, V0 = initial_vectors(seed, n_s, n_r, H)
    Uh = np.zeros((n_s, H), dtype=complex)
    Vh = np.zeros((n_r, H), dtype=complex)
    su = np.zeros((n_s, H), dtype=complex)
    sv = np.zeros((n_r, H), dtype=complex)

    for h in range(H):
        u = U0[:, h].copy()
        v = V0[:, h].copy()
        for _ in range(cfg.power_iters):
            # columns: T snapshot products, then h deflation products
            ac_s = net_s.ac(np.hstack([Sc * u[:, None], Uh[:, :h].conj() * u[:, None]]))
            ac_r = net_r.ac(np.hstack([Rc * v[:, None], Vh[:, :h].conj() * v[:, None]]))
            at_s = cross_set_relay(ac_r, bridge.s_to_r, ledger)
            at_r = cross_set_relay(ac_s, bridge.r_to_s, ledger)
            nu = (S * at_s[:, :T]).sum(axis=1) / T + alpha * u
            nv = (R * at_r[:, :T]).sum(axis=1) / T + alpha * v
            for m in range(h):
                nu -= su[:, m] * Uh[:, m] * at_s[:, T + m]
                nv -= sv[:, m] * Vh[:, m] * at_r[:, T + m]
            _check_finite(nu, nv)
            u, v = nu, nv
        _normalize_svd(S, R, Sc, Rc, u[:, None], v[:, None], net_s, net_r, bridge, ledger, diag,
                       Uh[:, h:h + 1], Vh[:, h:h + 1], su[:, h:h + 1], sv[:, h:h + 1])
    return DistributedSVD(Uh, Vh, su, sv, diag)


def _normalize_svd(S, R, Sc, Rc, u, v, net_s, net_r, bridge, ledger, diag,
                   U_out, V_out, su_out, sv_out):
    """Final normalisation session; also yields each node's singular value estimate."""
    T = S.shape[1]
    H = u.shape[1]
    ps = np.hstack([np.abs(u) ** 2, (Sc[:, :, None] * u[:, None, :]).reshape(len(u), T * H)])
    pr = np.hstack([np.abs(v) ** 2, (Rc[:, :, None] * v[:, None, :]).reshape(len(v), T * H)])
    ac_s = net_s.ac(ps)
    ac_r = net_r.ac(pr)
    at_s = cross_set_relay(ac_r, bridge.s_to_r, ledger)
    at_r = cross_set_relay(ac_s, bridge.r_to_s, ledger)
    uu_s, vv_s = _norms(ac_s[:, :H], diag), _norms(at_s[:, :H], diag)
    uu_r, vv_r = _norms(at_r[:, :H], diag), _norms(ac_r[:, :H], diag)
    U_out[:] = u / np.sqrt(uu_s)
    V_out[:] = v / np.sqrt(vv_r)
    Cv = np.einsum("it,ith->ih", S, at_s[:, H:].reshape(len(u), T, H)) / T
    Chu = np.einsum("jt,jth->jh", R, at_r[:, H:].reshape(len(v), T, H)) / T
    est_u = net_s.guard(_ratio(Cv, u), u, uu_s, diag) / np.sqrt(vv_s / uu_s)
    est_v = net_r.guard(_ratio(Chu, v), v, vv_r, diag) / np.sqrt(uu_r / vv_r)
    _check_finite(U_out, V_out, est_u, est_v)
    su_out[:] = est_u
    sv_out[:] = est_v


def _pairs(H):
    return [(m, h) for h in range(H) for m in range(h)]


def parallel_power_svd(samples: SampleSet, topo_s, topo_r, bridge: BridgeMap, cfg: PowerConfig,
                       mode, seed, ledger: CommLedger = None) -> DistributedSVD:
    """All components updated in every power iteration from the current, inexact iterates."""
    S, R, net_s, net_r = _setup_svd(samples, topo_s, topo_r, bridge, cfg, mode, ledger)
    n_s, T = S.shape
    n_r = R.shape[0]
    H, alpha = cfg.num_components, cfg.shift
    Sc, Rc = S.conj(), R.conj()
    diag = Diagnostics()
    U0, V0 = initial_vectors(seed, n_s, n_r, H)
    u = U0.copy()
    v = V0.copy()
    pairs = _pairs(H)
    pm = [m for m, _ in pairs]
    ph = [h for _, h in pairs]
    TH = T * H
    np_ = len(pairs)

    for _ in range(cfg.power_iters):
        # columns: T*H snapshot products, cross products (m < h), H squared norms
        ps = np.hstack([(Sc[:, :, None] * u[:, None, :]).reshape(n_s, TH),
                        u[:, pm].conj() * u[:, ph], np.abs(u) ** 2])
        pr = np.hstack([(Rc[:, :, None] * v[:, None, :]).reshape(n_r, TH),
                        v[:, pm].conj() * v[:, ph], np.abs(v) ** 2])
        ac_s = net_s.ac(ps)
        ac_r = net_r.ac(pr)
        at_s = cross_set_relay(ac_r, bridge.s_to_r, ledger)
        at_r = cross_set_relay(ac_s, bridge.r_to_s, ledger)
        Cv = np.einsum("it,ith->ih", S, at_s[:, :TH].reshape(n_s, T, H)) / T
        Chu = np.einsum("jt,jth->jh", R, at_r[:, :TH].reshape(n_r, T, H)) / T
        uu_s = _norms(ac_s[:, TH + np_:], diag)
        vv_s = _norms(at_s[:, TH + np_:], diag)
        uu_r = _norms(at_r[:, TH + np_:], diag)
        vv_r = _norms(ac_r[:, TH + np_:], diag)
        nu = Cv + alpha * u
        nv = Chu + alpha * v
        if H > 1:
            su = net_s.guard(_ratio(Cv, u), u, uu_s, diag) / np.sqrt(vv_s / uu_s)
            sv = net_r.guard(_ratio(Chu, v), v, vv_r, diag) / np.sqrt(uu_r / vv_r)
            for k, (m, h) in enumerate(pairs):
                scale = np.sqrt(uu_s[:, m] * vv_s[:, m])
                nu[:, h] -= su[:, m] * u[:, m] * at_s[:, TH + k] / scale
                scale = np.sqrt(uu_r[:, m] * vv_r[:, m])
                nv[:, h] -= sv[:, m] * v[:, m] * at_r[:, TH + k] / scale
        _check_finite(nu, nv)
        u, v = nu, nv

    Uh = np.zeros((n_s, H), dtype=complex)
    Vh = np.zeros((n_r, H), dtype=complex)
    su_f = np.zeros((n_s, H), dtype=complex)
    sv_f = np.zeros((n_r, H), dtype=complex)
    _normalize_svd(S, R, Sc, Rc, u, v, net_s, net_r, bridge, ledger, diag, Uh, Vh, su_f, sv_f)
    return DistributedSVD(Uh, Vh, su_f, sv_f, diag)


def _setup_evd(x, topo, cfg, mode, ledger):
    X = np.asarray(x, dtype=complex)
    if isinstance(mode, tuple):
        raise ParameterError("EVD runs on one node set and takes a single averaging mode")
    net = _Network(topo, mode, ledger)
    if net.n != X.shape[0]:
        raise ParameterError("topology size does not match the sample set")
    if cfg.num_components > net.n:
        raise ParameterError(f"num_components={cfg.num_components} exceeds node count {net.n}")
    return X, net


def _real_part(values, diag):
    if values.size:
        diag.max_imag = max(diag.max_imag, float(np.abs(values.imag).max()))
    return values.real


def _normalize_evd(X, Xc, u, net, diag):
    n, T = X.shape
    H = u.shape[1]
    ac = net.ac(np.hstack([np.abs(u) ** 2, (Xc[:, :, None] * u[:, None, :]).reshape(n, T * H)]))
    uu = _norms(ac[:, :H], diag)
    Cu = np.einsum("it,ith->ih", X, ac[:, H:].reshape(n, T, H)) / T
    lam = net.guard(_ratio(Cu, u), u, uu, diag)
    Uh = u / np.sqrt(uu)
    _check_finite(Uh, lam)
    return Uh, lam


def sequential_power_evd(x, topo, cfg: PowerConfig, mode: AveragingMode, seed,
                         ledger: CommLedger = None) -> DistributedEVD:
    X, net = _setup_evd(x, topo, cfg, mode, ledger)
    n, T = X.shape
    H, alpha = cfg.num_components, cfg.shift
    Xc = X.conj()
    diag = Diagnostics()
    U0, _ = initial_vectors(seed, n, 0, H)
    Uh = np.zeros((n, H), dtype=complex)
    lam = np.zeros((n, H), dtype=complex)
    for h in range(H):
        u = U0[:, h].copy()
        weights = _real_part(lam[:, :h], diag)
        for _ in range(cfg.power_iters):
            ac = net.ac(np.hstack([Xc * u[:, None], Uh[:, :h].conj() * u[:, None]]))
            nu = (X * ac[:, :T]).sum(axis=1) / T + alpha * u
            for m in range(h):
                nu -= weights[:, m] * Uh[:, m] * ac[:, T + m]
            _check_finite(nu)
            u = nu
        Uh[:, h:h + 1], lam[:, h:h + 1] = _normalize_evd(X, Xc, u[:, None], net, diag)
    return DistributedEVD(Uh, lam, diag)


def parallel_power_evd(x, topo, cfg: PowerConfig, mode: AveragingMode, seed,
                       ledger: CommLedger = None) -> DistributedEVD:
    X, net = _setup_evd(x, topo, cfg, mode, ledger)
    n, T = X.shape
    H, alpha = cfg.num_components, cfg.shift
    Xc = X.conj()
    diag = Diagnostics()
    U0, _ = initial_vectors(seed, n, 0, H)
    u = U0.copy()
    pairs = _pairs(H)
    pm = [m for m, _ in pairs]
    ph = [h for _, h in pairs]
    TH = T * H
    for _ in range(cfg.power_iters):
        ac = net.ac(np.hstack([(Xc[:, :, None] * u[:, None, :]).reshape(n, TH),
                               u[:, pm].conj() * u[:, ph], np.abs(u) ** 2]))
        Cu = np.einsum("it,ith->ih", X, ac[:, :TH].reshape(n, T, H)) / T
        uu = _norms(ac[:, TH + len(pairs):], diag)
        nu = Cu + alpha * u
        if H > 1:
            lam = _real_part(net.guard(_ratio(Cu, u), u, uu, diag), diag)
            for k, (m, h) in enumerate(pairs):
                nu[:, h] -= lam[:, m] * u[:, m] * ac[:, TH + k] / uu[:, m]
        _check_finite(nu)
        u = nu
    Uh, lam = _normalize_evd(X, Xc, u, net, diag)
    return DistributedEVD(Uh, lam, diag)
