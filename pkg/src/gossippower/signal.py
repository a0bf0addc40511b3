"""Synthetic passive-radar observations and their sample second moments."""
import struct
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class SignalModelConfig:
    s_nodes: int = 10
    r_nodes: int = 12
    s_sources: int = 10
    r_sources: int = 10
    source_power_s: float = 1.0
    source_power_r: float = 1.0
    snapshots: int = 500
    seed: int = 0
    # r observes the same source waveforms as s (needs s_sources == r_sources)
    shared_sources: bool = False
    noise_scale: float = 1.0

    def __post_init__(self):
        for name in ("s_nodes", "r_nodes", "s_sources", "r_sources", "snapshots"):
            if int(getattr(self, name)) < 1:
                raise ParameterError(f"{name} must be >= 1")
        if self.source_power_s < 0 or self.source_power_r < 0:
            raise ParameterError("source powers must be nonnegative")
        if self.noise_scale < 0:
            raise ParameterError("noise_scale must be nonnegative")
        if self.shared_sources and self.s_sources != self.r_sources:
            raise ParameterError("shared_sources requires s_sources == r_sources")


@dataclass(frozen=True, eq=False)
class SampleSet:
    s_samples: np.ndarray
    r_samples: np.ndarray
    H_s: Optional[np.ndarray] = None
    H_r: Optional[np.ndarray] = None

    @property
    def snapshots(self):
        return self.s_samples.shape[1]


def complex_normal(rng, shape):
    """Standard circular complex Gaussian draws, E|z|^2 = 1."""
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) / np.sqrt(2.0)


def generate_passive_radar(cfg: SignalModelConfig) -> SampleSet:
    rng = np.random.default_rng(cfg.seed)
    T = cfg.snapshots
    H_s = complex_normal(rng, (cfg.s_nodes, cfg.s_sources))
    H_r = complex_normal(rng, (cfg.r_nodes, cfg.r_sources))
    theta_s = np.sqrt(cfg.source_power_s) * complex_normal(rng, (cfg.s_sources, T))
    if cfg.shared_sources:
        theta_r = theta_s
    else:
        theta_r = np.sqrt(cfg.source_power_r) * complex_normal(rng, (cfg.r_sources, T))
    w_s = complex_normal(rng, (cfg.s_nodes, T))
    w_r = complex_normal(rng, (cfg.r_nodes, T))
    s = H_s @ theta_s + cfg.noise_scale * w_s
    r = H_r @ theta_r + cfg.noise_scale * w_r
    return SampleSet(s, r, H_s, H_r)


def sample_covariance(x):
    x = np.asarray(x, dtype=np.complex128)
    if x.ndim != 2 or x.shape[1] < 1:
        raise ParameterError("expected a node x snapshot matrix with T >= 1")
    C = x @ x.conj().T / x.shape[1]
    return 0.5 * (C + C.conj().T)


def sample_cross_correlation(s, r):
    s = np.asarray(s, dtype=np.complex128)
    r = np.asarray(r, dtype=np.complex128)
    if s.ndim != 2 or r.ndim != 2 or s.shape[1] != r.shape[1]:
        raise ParameterError(f"snapshot counts differ: {s.shape} vs {r.shape}")
    # real arithmetic and a fixed-order sum instead of BLAS, so that swapping
    # the arguments gives exactly the conjugate transpose
    sr, si = s.real[:, None, :], s.imag[:, None, :]
    rr, ri = r.real[None, :, :], r.imag[None, :, :]
    re = (sr * rr + si * ri).sum(axis=2)
    im = (si * rr - sr * ri).sum(axis=2)
    return (re + 1j * im) / s.shape[1]


# binary layout: int64 rows, int64 cols, then row-major (re, im) float64 pairs,
# all little-endian
_HEADER = struct.Struct("<qq")


def write_matrix(fh, m):
    m = np.ascontiguousarray(m, dtype=np.complex128)
    fh.write(_HEADER.pack(*m.shape))
    fh.write(m.astype("<c16").tobytes())


def read_matrix(fh):
    header = fh.read(_HEADER.size)
    if len(header) != _HEADER.size:
        raise ParameterError("truncated matrix header")
    rows, cols = _HEADER.unpack(header)
    nbytes = rows * cols * 16
    body = fh.read(nbytes)
    if len(body) != nbytes:
        raise ParameterError("truncated matrix body")
    return np.frombuffer(body, dtype="<c16").reshape(rows, cols).astype(np.complex128)


def dump_sampleset(path, samples: SampleSet):
    """Write ``s`` then ``r``, each as a header-prefixed matrix block."""
    with open(path, "wb") as fh:
        write_matrix(fh, samples.s_samples)
        write_matrix(fh, samples.r_samples)


def load_sampleset(path) -> SampleSet:
    with open(path, "rb") as fh:
        s = read_matrix(fh)
        r = read_matrix(fh)
    return SampleSet(s, r)
