"""Trial and sweep orchestration."""
import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .centralized import PowerConfig, centralized_power_evd, centralized_power_svd
from .consensus import CommLedger
from .distributed import (BridgeMap, Exact, Gossip, parallel_power_evd, parallel_power_svd,
                          sequential_power_evd, sequential_power_svd)
from .errors import ParameterError
from .graph import generate_small_world
from .linalg import hermitian_evd_oracle, svd_oracle
from .metrics import nmse_evd, predicted_handshakes, svd_error_terms
from .signal import SignalModelConfig, generate_passive_radar, sample_covariance, sample_cross_correlation

PROBLEMS = ("evd", "svd")
ALGORITHMS = ("sequential", "parallel", "centralized")
AVERAGING = ("gossip", "exact")
SWEEP_AXES = ("K", "H", "ell")
CSV_HEADER = ["axis_value", "algorithm", "mean_nmse", "trials", "mean_gossip_rounds"]


@dataclass(frozen=True)
class GraphParams:
    k: int = 4
    p: float = 0.2


@dataclass(frozen=True)
class ExperimentConfig:
    signal: SignalModelConfig = field(default_factory=SignalModelConfig)
    power: PowerConfig = field(default_factory=PowerConfig)
    graph_s: GraphParams = field(default_factory=GraphParams)
    graph_r: GraphParams = field(default_factory=lambda: GraphParams(6, 0.2))
    gossip_k_s: int = 40
    # None means the same as gossip_k_s
    gossip_k_r: Optional[int] = None
    problem: str = "evd"
    algorithm: str = "sequential"
    averaging: str = "gossip"
    trials: int = 50
    base_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if self.problem not in PROBLEMS:
            raise ParameterError(f"problem must be one of {PROBLEMS}")
        if self.algorithm not in ALGORITHMS:
            raise ParameterError(f"algorithm must be one of {ALGORITHMS}")
        if self.averaging not in AVERAGING:
            raise ParameterError(f"averaging must be one of {AVERAGING}")
        if self.gossip_k_s < 1 or (self.gossip_k_r is not None and self.gossip_k_r < 1):
            raise ParameterError("gossip round counts must be >= 1")

    @property
    def k_r(self):
        return self.gossip_k_s if self.gossip_k_r is None else self.gossip_k_r

    @property
    def algorithm_label(self):
        return f"{self.algorithm}-{self.problem}"


@dataclass(eq=False)
class TrialResult:
    trial_index: int
    seed: int
    algorithm: str
    nmse: float
    per_node_nmse: list
    sigma_estimates: np.ndarray
    ledger: dict
    predicted_rounds: Optional[int]
    diagnostics: dict

    def to_json(self):
        return json.dumps({
            "trial_index": self.trial_index,
            "seed": self.seed,
            "algorithm": self.algorithm,
            "nmse": self.nmse,
            "per_node_nmse": list(self.per_node_nmse),
            "sigma_estimates": [[[z.real, z.imag] for z in row] for row in np.asarray(self.sigma_estimates)],
            "ledger": self.ledger,
            "predicted_rounds": self.predicted_rounds,
            "diagnostics": self.diagnostics,
        }, sort_keys=True)


@dataclass
class SweepRow:
    axis_value: int
    algorithm: str
    mean_nmse: float
    trials: int
    mean_gossip_rounds: float


@dataclass
class SweepResult:
    axis: str
    rows: list

    def mean(self, algorithm, axis_value):
        for r in self.rows:
            if r.algorithm == algorithm and r.axis_value == axis_value:
                return r.mean_nmse
        raise KeyError((algorithm, axis_value))


def derive_seed(seed, stream):
    return int(np.random.SeedSequence([int(seed), int(stream)]).generate_state(1)[0])


def trial_seed(cfg: ExperimentConfig, trial_index):
    return int(cfg.base_seed) ^ int(trial_index)


def _mode(cfg):
    if cfg.averaging == "exact":
        return Exact(), Exact()
    return Gossip(cfg.gossip_k_s), Gossip(cfg.k_r)


def run_trial(cfg: ExperimentConfig, trial_index: int) -> TrialResult:
    seed = trial_seed(cfg, trial_index)
    samples = generate_passive_radar(replace(cfg.signal, seed=derive_seed(seed, 0)))
    init_seed = derive_seed(seed, 3)
    ledger = CommLedger()
    diagnostics = {}
    H = cfg.power.num_components
    mode_s, mode_r = _mode(cfg)

    if cfg.problem == "evd":
        x = samples.s_samples
        truth = hermitian_evd_oracle(sample_covariance(x)).eigenvalues[:H]
        if cfg.algorithm == "centralized":
            res = centralized_power_evd(x, cfg.power, init_seed)
            est = res.entry_values
        else:
            topo = generate_small_world(x.shape[0], cfg.graph_s.k, cfg.graph_s.p, derive_seed(seed, 1))
            fn = sequential_power_evd if cfg.algorithm == "sequential" else parallel_power_evd
            res = fn(x, topo, cfg.power, mode_s, init_seed, ledger)
            est = res.values
            diagnostics = res.diagnostics.as_dict()
        per_node = [nmse_evd(truth, row.real) for row in est]
        nmse = float(np.mean(per_node))
        sigma = est
    else:
        s, r = samples.s_samples, samples.r_samples
        o = svd_oracle(sample_cross_correlation(s, r))
        Ut, Vt = o.U[:, :H], o.V[:, :H]
        if cfg.algorithm == "centralized":
            res = centralized_power_svd(samples, cfg.power, init_seed)
            U, V, sigma = res.U, res.V, np.vstack([res.u_entry_values, res.v_entry_values])
        else:
            ts = generate_small_world(s.shape[0], cfg.graph_s.k, cfg.graph_s.p, derive_seed(seed, 1))
            tr = generate_small_world(r.shape[0], cfg.graph_r.k, cfg.graph_r.p, derive_seed(seed, 2))
            bridge = BridgeMap.round_robin(s.shape[0], r.shape[0])
            fn = sequential_power_svd if cfg.algorithm == "sequential" else parallel_power_svd
            res = fn(samples, ts, tr, bridge, cfg.power, (mode_s, mode_r), init_seed, ledger)
            U, V, sigma = res.U, res.V, np.vstack([res.u_values, res.v_values])
            diagnostics = res.diagnostics.as_dict()
        eu, ev = svd_error_terms(Ut, Vt, U, V)
        per_node = list(eu) + list(ev)
        nmse = float(np.sum(per_node))

    predicted = None
    if cfg.algorithm != "centralized" and cfg.averaging == "gossip":
        K = cfg.gossip_k_s if cfg.problem == "evd" else (cfg.gossip_k_s, cfg.k_r)
        predicted = predicted_handshakes(cfg.algorithm_label, H, K, cfg.power.power_iters)
    return TrialResult(trial_index, seed, cfg.algorithm_label, nmse, [float(v) for v in per_node],
                       np.asarray(sigma), ledger.snapshot(), predicted, diagnostics)


def _trial_summary(args):
    cfg, idx = args
    res = run_trial(cfg, idx)
    return idx, res.nmse, res.ledger["gossip_rounds"]


def run_trials(cfg: ExperimentConfig, workers: int = 1):
    """(nmse, gossip_rounds) for trials ``0..cfg.trials-1``, ordered by trial index."""
    jobs = [(cfg, i) for i in range(cfg.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(_trial_summary, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        out = [_trial_summary(j) for j in jobs]
    out.sort(key=lambda t: t[0])
    return [(n, g) for _, n, g in out]


def with_axis(cfg: ExperimentConfig, axis: str, value) -> ExperimentConfig:
    if axis == "K":
        return replace(cfg, gossip_k_s=int(value), gossip_k_r=int(value))
    if axis == "H":
        return replace(cfg, power=replace(cfg.power, num_components=int(value)))
    if axis == "ell":
        return replace(cfg, power=replace(cfg.power, power_iters=int(value)))
    raise ParameterError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")


def run_sweep(cfg: ExperimentConfig, axis: str, values, algorithms=ALGORITHMS, workers: int = 1) -> SweepResult:
    values = list(values)
    if not values:
        raise ParameterError("sweep needs at least one axis value")
    rows = []
    for v in values:
        point = with_axis(cfg, axis, v)
        for algo in algorithms:
            results = run_trials(replace(point, algorithm=algo), workers)
            nmse = sum(n for n, _ in results) / len(results)
            rounds = sum(g for _, g in results) / len(results)
            rows.append(SweepRow(int(v), algo, float(nmse), len(results), float(rounds)))
    return SweepResult(axis, rows)


def emit_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.rows:
        w.writerow([r.axis_value, r.algorithm, repr(r.mean_nmse), r.trials, repr(r.mean_gossip_rounds)])
    return buf.getvalue()


def parse_csv(text: str, axis: str = "K") -> SweepResult:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header != CSV_HEADER:
        raise ParameterError(f"unexpected CSV header {header}")
    rows = [SweepRow(int(a), algo, float(m), int(t), float(g)) for a, algo, m, t, g in reader]
    return SweepResult(axis, rows)
