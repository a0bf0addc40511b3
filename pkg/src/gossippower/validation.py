"""Quick invariant checks behind ``gossippower validate``."""
from dataclasses import replace

import numpy as np

from .centralized import PowerConfig, centralized_power_svd
from .consensus import CommLedger, init_session, run_consensus
from .distributed import BridgeMap, Exact, Gossip, parallel_power_evd, sequential_power_evd, sequential_power_svd
from .graph import best_constant_weights, generate_small_world, spectral_gap
from .harness import ExperimentConfig, run_trial
from .metrics import nmse_evd, nmse_svd, predicted_handshakes
from .signal import SignalModelConfig, complex_normal, generate_passive_radar


def _graphs_ok(seed):
    for k in range(8):
        t = generate_small_world(10, 4, 0.2, seed + k)
        w = best_constant_weights(t)
        if len(t.edges) != 20 or not w.is_valid() or spectral_gap(w) >= 1:
            return False
    return True


def _conservation_ok(seed):
    rng = np.random.default_rng(seed)
    w = best_constant_weights(generate_small_world(10, 4, 0.2, seed))
    Z = complex_normal(rng, (10, 7))
    out = run_consensus(init_session(w, Z), 50, CommLedger())
    return np.allclose(out.mean(axis=0), Z.mean(axis=0), rtol=1e-10, atol=1e-12)


def _ledger_ok(seed):
    x = generate_passive_radar(SignalModelConfig(snapshots=50, seed=seed)).s_samples
    topo = generate_small_world(10, 4, 0.2, seed)
    for H in (2, 3):
        cfg = PowerConfig(0.1, 5, H)
        for fn, name in ((sequential_power_evd, "sequential-evd"), (parallel_power_evd, "parallel-evd")):
            led = CommLedger()
            fn(x, topo, cfg, Gossip(10), seed, led)
            if led.gossip_rounds != predicted_handshakes(name, H, 10, 5):
                return False
    return True


def _exact_equivalence_ok(seed):
    ss = generate_passive_radar(SignalModelConfig(snapshots=100, seed=seed))
    ts = generate_small_world(10, 4, 0.2, seed)
    tr = generate_small_world(12, 6, 0.2, seed + 1)
    cfg = PowerConfig(0.1, 20, 2)
    c = centralized_power_svd(ss, cfg, seed)
    d = sequential_power_svd(ss, ts, tr, BridgeMap.round_robin(10, 12), cfg, Exact(), seed)
    return (np.linalg.norm(d.U - c.U) <= 1e-9 * np.linalg.norm(c.U)
            and np.linalg.norm(d.u_values - c.u_entry_values) <= 1e-9 * np.linalg.norm(c.u_entry_values))


def _metrics_ok(seed):
    rng = np.random.default_rng(seed)
    U = complex_normal(rng, (6, 2))
    V = complex_normal(rng, (7, 2))
    ph = np.exp(1j * rng.uniform(0, 2 * np.pi, 2))
    return nmse_evd([2.0, 1.0], [2.0, 0.0]) == 0.2 and nmse_svd(U, V, U * ph, V * ph) <= 1e-12


def _trial_ok(seed):
    cfg = ExperimentConfig(signal=SignalModelConfig(snapshots=100), power=PowerConfig(0.1, 10, 2),
                           gossip_k_s=20, trials=1, base_seed=seed)
    res = run_trial(replace(cfg, algorithm="parallel"), 0)
    return res.ledger["gossip_rounds"] == res.predicted_rounds and np.isfinite(res.nmse)


CHECKS = [
    ("graph-invariants", _graphs_ok),
    ("average-conservation", _conservation_ok),
    ("ledger-formula-identity", _ledger_ok),
    ("exact-average-equivalence", _exact_equivalence_ok),
    ("metric-sanity", _metrics_ok),
    ("trial-ledger", _trial_ok),
]


def run_validation(seed=0):
    """List of ``(name, passed, detail)``."""
    out = []
    for name, check in CHECKS:
        try:
            out.append((name, bool(check(seed)), ""))
        except Exception as exc:  # report, keep going
            out.append((name, False, f"{type(exc).__name__}: {exc}"))
    return out
