"""Synchronous average-consensus gossip over batched complex payloads.

One call to :func:`step_round` is one neighbour exchange ("shaking-hand")
no matter how many columns the payload carries.
"""
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import ParameterError
from .graph import ConsensusWeights


@dataclass
class CommLedger:
    gossip_rounds: int = 0
    scalars_transmitted: int = 0
    cross_set_exchanges: int = 0

    def record_rounds(self, rounds, edges, width):
        self.gossip_rounds += rounds
        self.scalars_transmitted += 2 * edges * width * rounds

    def merge(self, other: "CommLedger"):
        self.gossip_rounds += other.gossip_rounds
        self.scalars_transmitted += other.scalars_transmitted
        self.cross_set_exchanges += other.cross_set_exchanges
        return self

    def snapshot(self):
        return {
            "gossip_rounds": self.gossip_rounds,
            "scalars_transmitted": self.scalars_transmitted,
            "cross_set_exchanges": self.cross_set_exchanges,
        }


@dataclass(frozen=True, eq=False)
class GossipSession:
    weights: ConsensusWeights
    state: np.ndarray
    round: int = 0

    @property
    def payload_width(self):
        return self.state.shape[1]


def init_session(w: ConsensusWeights, initial_values) -> GossipSession:
    Z = np.array(initial_values, dtype=np.complex128)
    if Z.ndim == 1:
        Z = Z[:, None]
    if Z.ndim != 2 or Z.shape[0] != w.node_count:
        raise ParameterError(
            f"initial values have shape {Z.shape}, expected ({w.node_count}, P)")
    if Z.shape[1] < 1:
        raise ParameterError("payload width must be at least 1")
    return GossipSession(w, Z, 0)


def _advance(s: GossipSession, rounds: int, ledger: CommLedger) -> GossipSession:
    indptr, indices, data = s.weights.csr
    state = kernels.gossip_rounds(indptr, indices, data, s.state, rounds)
    if ledger is not None:
        ledger.record_rounds(rounds, s.weights.edge_count, s.payload_width)
    return replace(s, state=np.asarray(state), round=s.round + rounds)


def step_round(s: GossipSession, ledger: CommLedger) -> GossipSession:
    """One synchronous round ``Z <- W Z``."""
    return _advance(s, 1, ledger)


def run_consensus(s: GossipSession, K: int, ledger: CommLedger) -> np.ndarray:
    """State after exactly ``K`` further rounds."""
    if K < 0:
        raise ParameterError("number of rounds must be nonnegative")
    if K == 0:
        return s.state.copy()
    return _advance(s, K, ledger).state


def ac_estimate(values, n: int):
    """Each node's estimate of the full inner product: ``n`` times its consensus value."""
    return n * np.asarray(values)


def exact_average(initial_values):
    """Every row replaced by the exact column mean (the infinite-round limit)."""
    Z = np.asarray(initial_values, dtype=np.complex128)
    if Z.ndim == 1:
        Z = Z[:, None]
    return np.broadcast_to(Z.mean(axis=0), Z.shape).copy()
