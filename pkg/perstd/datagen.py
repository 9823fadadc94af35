#!/usr/bin/env python3
#
# Copyright (c) 2026 The perstd developers
# All rights reserved.
#
# SPDX-License-Identifier: BSD-2-Clause
# See LICENSE.md for the full license text.

'''
   Synthetic data and metrics
   --------------------------

   All draws come from numpy's counter-based Philox generator so that
   a seed reproduces the same data on every platform.

   SNR is defined per dataset on the realized energies::

	SNR = 10·log10(‖signal‖² / ‖noise‖²)

   and the noise is rescaled so the realized SNR is exact.
'''

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.ndimage

from .tensor_core import Tensor3, CpdFactors, cp_reconstruct
from .model import MeasurementModel, CoupledModel
from .cpd import generator, derive_seed, random_factors
from .internals.exceptions import PreconditionError, ShapeError

log = logging.getLogger(__name__)

CLOUD_THRESHOLD = 0.15
DEFAULT_CLOUD_REFLECTANCE = 0.7

__all__ = [
    "SynthConfig", "SyntheticInstance", "generate_synthetic", "blend_common",
    "CloudConfig", "generate_cloud_map", "apply_clouds", "cloud_metrics",
    "nrmse", "add_noise", "realized_snr_db", "spatial_decimation",
    "band_averaging", "synthetic_hri", "FusionInstance", "generate_fusion",
    "derive_seed",
]

#######################################################################

@dataclass(frozen=True)
class SynthConfig():
    ''' A synthetic personalized coupled model '''

    common_dims: tuple
    dataset_dims: tuple
    r: int
    l: tuple
    snr_db: float = float("inf")
    p_dist: str = "uniform01"
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "common_dims", tuple(self.common_dims))
        object.__setattr__(self, "dataset_dims", tuple(tuple(x) for x in self.dataset_dims))
        object.__setattr__(self, "l", tuple(self.l))
        if len(self.common_dims) != 3 or min(self.common_dims) < 1:
            raise PreconditionError("Common dims must be three positive integers")
        if not self.dataset_dims:
            raise PreconditionError("No datasets")
        if len(self.l) != len(self.dataset_dims):
            raise PreconditionError("%d distinct ranks for %d datasets" % (
                len(self.l), len(self.dataset_dims)
            ))
        for dims in self.dataset_dims:
            if len(dims) != 3 or min(dims) < 1:
                raise PreconditionError("Dataset dims must be three positive integers")
        if self.r < 1 or min(self.l) < 0:
            raise PreconditionError("Ranks must be R ≥ 1 and L_k ≥ 0")
        if self.p_dist not in ("uniform01", "gaussian"):
            raise PreconditionError("Unknown P distribution %s" % self.p_dist)
        if np.isnan(self.snr_db):
            raise PreconditionError("SNR cannot be NaN")

    @property
    def count(self):
        ''' K '''
        return len(self.dataset_dims)

@dataclass
class SyntheticInstance():
    '''
    Generated data

    commons[k] is the common tensor dataset k actually saw: c itself
    unless it was blended.
    '''

    c: Tensor3
    d: list
    y: list
    meas: MeasurementModel
    model: CoupledModel
    commons: list = field(default_factory=list)

    def __iter__(self):
        yield self.c
        yield self.d
        yield self.y
        yield self.meas

def add_noise(signal, snr_db, rng):
    ''' signal + white Gaussian noise at exactly snr_db '''
    if np.isinf(snr_db) and snr_db > 0:
        return signal
    noise = rng.standard_normal(signal.dims)
    energy = float(np.sum(signal.data ** 2))
    noise *= np.sqrt(energy / (10 ** (snr_db / 10)) / float(np.sum(noise ** 2)))
    return signal + noise

def realized_snr_db(signal, noisy):
    ''' 10·log10(‖signal‖² / ‖noisy − signal‖²), inf if noiseless '''
    noise = float(np.sum((noisy.data - signal.data) ** 2))
    if noise == 0.0:
        return float("inf")
    return 10 * np.log10(float(np.sum(signal.data ** 2)) / noise)

def _draw_p(rng, rows, cols, dist):
    if dist == "gaussian":
        return rng.standard_normal((rows, cols))
    return rng.uniform(0.0, 1.0, (rows, cols))

def generate_synthetic(cfg, alpha=0.0, blend_seed=None):
    '''
    Y_k = 𝒫_k(C_k) + D_k + N_k with Gaussian factors and P ~ cfg.p_dist

    C_k is C unless alpha > 0, see blend_common().
    '''
    rng = generator(cfg.seed)
    common = random_factors(cfg.common_dims, cfg.r, rng)
    p = []
    distinct = []
    for k, dims in enumerate(cfg.dataset_dims):
        p.append([_draw_p(rng, n, m, cfg.p_dist) for n, m in zip(dims, cfg.common_dims)])
        distinct.append(random_factors(dims, cfg.l[k], rng) if cfg.l[k] else None)
    meas = MeasurementModel(p, cfg.common_dims)
    model = CoupledModel(common, distinct)
    c = cp_reconstruct(common)
    if alpha:
        if blend_seed is None:
            blend_seed = derive_seed(cfg.seed, 1)
        commons = blend_common(c, alpha, blend_seed, cfg.count, cfg.r)
    else:
        commons = [c] * cfg.count

    d = []
    y = []
    for k, dims in enumerate(cfg.dataset_dims):
        dk = model.distinct_tensor(k, dims)
        signal = meas.apply(k, commons[k]) + dk
        d.append(dk)
        y.append(add_noise(signal, cfg.snr_db, rng))
    return SyntheticInstance(c, d, y, meas, model, commons)

def blend_common(c, alpha, seed, count, rank):
    '''
    C_k(α) = (1 − α)·C + α·E_k, E_k drawn like C (Gaussian rank-R
    factors) from a seed derived per dataset.
    '''
    if not 0.0 <= alpha <= 1.0:
        raise PreconditionError("alpha must be in [0, 1], got %g" % alpha)
    out = []
    for k in range(count):
        e_k = cp_reconstruct(random_factors(c.dims, rank, generator(derive_seed(seed, k))))
        out.append(Tensor3((1.0 - alpha) * c.data + alpha * e_k.data))
    return out

def nrmse(estimate, truth):
    ''' ‖estimate − truth‖_F / ‖truth‖_F '''
    if estimate.dims != truth.dims:
        raise ShapeError("Cannot compare %s with %s" % (estimate.dims, truth.dims))
    norm = truth.norm()
    if norm == 0.0:
        raise PreconditionError("NRMSE against an all-zero truth")
    return (estimate - truth).norm() / norm

#######################################################################
# Cloud contamination

@dataclass
class CloudConfig():
    '''
    Cloud spectrum g (per band) and cover maps S_1, S_2

    Maps in [0, 1] are either given or generated with
    generate_cloud_map() at the requested coverage.
    '''

    image_dims: tuple
    spectrum: np.ndarray = None
    maps: list = None
    coverage: float = 0.0
    smoothing: float = 3.0
    threshold: float = CLOUD_THRESHOLD
    seed: int = 0

    def __post_init__(self):
        self.image_dims = tuple(self.image_dims)
        if self.spectrum is None:
            self.spectrum = np.full(self.image_dims[2], DEFAULT_CLOUD_REFLECTANCE)
        self.spectrum = np.asarray(self.spectrum, dtype=np.float64)
        if self.spectrum.shape != (self.image_dims[2],):
            raise ShapeError("Cloud spectrum has %d bands, image has %d" % (
                self.spectrum.size, self.image_dims[2]
            ))
        if np.any(self.spectrum < 0):
            raise PreconditionError("Cloud spectrum must be nonnegative")

    def cover_maps(self, count=2):
        ''' The given maps, or generated ones '''
        if self.maps is not None:
            return [np.asarray(x, dtype=np.float64) for x in self.maps]
        return [
            generate_cloud_map(self.image_dims[:2], self.coverage, self.smoothing,
                               derive_seed(self.seed, k))
            for k in range(count)
        ]

def generate_cloud_map(shape, coverage, smoothing, seed):
    '''
    Cover map with mean value `coverage`

    Seeded white noise is smoothed with a Gaussian kernel of width
    `smoothing` pixels, standardized, and passed through the ramp
    clip(f − τ, 0, 1), τ found by bisection so the mean hits the
    target.  A simple generator of our own, not a physical model.
    '''
    if not 0.0 <= coverage < 1.0:
        raise PreconditionError("Coverage must be in [0, 1), got %g" % coverage)
    shape = tuple(shape)
    if coverage == 0.0:
        return np.zeros(shape)
    field_ = generator(seed).standard_normal(shape)
    if smoothing > 0:
        field_ = scipy.ndimage.gaussian_filter(field_, smoothing, mode="wrap")
    std = field_.std()
    if std > 0:
        field_ = (field_ - field_.mean()) / std

    def cover(tau):
        return np.clip(field_ - tau, 0.0, 1.0)

    low = float(field_.min()) - 1.0
    high = float(field_.max())
    for _i in range(100):
        mid = 0.5 * (low + high)
        if cover(mid).mean() > coverage:
            low = mid
        else:
            high = mid
    return cover(0.5 * (low + high))

def apply_clouds(c, cfg):
    '''
    X_k[x, y, λ] = C[x, y, λ]·(1 − S_k[x, y]) + g_λ·S_k[x, y]
    '''
    if c.dims != cfg.image_dims:
        raise ShapeError("Image %s does not match cloud config %s" % (c.dims, cfg.image_dims))
    out = []
    for s in cfg.cover_maps():
        if s.shape != c.dims[:2]:
            raise ShapeError("Cover map %s does not match image %s" % (s.shape, c.dims[:2]))
        if np.any(s < 0.0) or np.any(s > 1.0):
            raise PreconditionError("Cover map values must be in [0, 1]")
        cover = s[:, :, None]
        out.append(Tensor3(c.data * (1.0 - cover) + cfg.spectrum[None, None, :] * cover))
    return out

def cloud_metrics(s1, s2, threshold=CLOUD_THRESHOLD):
    '''
    (CC, CP): mean cover per pixel and fraction of pixels with cover
    above the threshold, both over the pixels of the two maps.
    '''
    both = np.concatenate([np.ravel(s1), np.ravel(s2)]).astype(np.float64)
    if np.any(both < 0.0) or np.any(both > 1.0):
        raise PreconditionError("Cover map values must be in [0, 1]")
    return float(both.mean()), float(np.mean(both > threshold))

#######################################################################
# Image fusion

def spatial_decimation(n, factor):
    ''' (n // factor) × n, averaging non-overlapping blocks of `factor` pixels '''
    if factor < 1 or factor > n:
        raise PreconditionError("Cannot decimate %d pixels by %d" % (n, factor))
    rows = n // factor
    out = np.zeros((rows, n))
    for i in range(rows):
        out[i, i * factor:(i + 1) * factor] = 1.0 / factor
    return out

def band_averaging(bands, groups):
    ''' groups × bands, each row averaging a contiguous range of bands '''
    if groups < 1 or groups > bands:
        raise PreconditionError("Cannot average %d bands into %d groups" % (bands, groups))
    out = np.zeros((groups, bands))
    for i, idx in enumerate(np.array_split(np.arange(bands), groups)):
        out[i, idx] = 1.0 / len(idx)
    return out

def synthetic_hri(dims, rank, seed):
    ''' Nonnegative rank-R image scaled to a peak value of 1 '''
    rng = generator(seed)
    factors = CpdFactors(*[rng.uniform(0.0, 1.0, (n, rank)) for n in dims])
    image = cp_reconstruct(factors)
    return image * (1.0 / float(image.data.max()))

@dataclass
class FusionInstance():
    '''
    An HSI (dataset 0) and an MSI (dataset 1) of a cloudy scene
    '''

    hri: Tensor3
    maps: list
    cloudy: list
    y: list
    meas: MeasurementModel

def generate_fusion(hri, cloud_cfg, decimation=4, msi_bands=4, snr_db=30.0, seed=0):
    '''
    Y_k = 𝒫_k(X_k) + N_k with X_k the cloudy images

    The HSI averages blocks of `decimation` pixels in both spatial
    modes, the MSI averages contiguous bands into `msi_bands` groups.
    '''
    n1, n2, n3 = hri.dims
    meas = MeasurementModel([
        [spatial_decimation(n1, decimation), spatial_decimation(n2, decimation), np.eye(n3)],
        [np.eye(n1), np.eye(n2), band_averaging(n3, msi_bands)],
    ], hri.dims)
    maps = cloud_cfg.cover_maps()
    cloudy = apply_clouds(hri, CloudConfig(
        cloud_cfg.image_dims, cloud_cfg.spectrum, maps, seed=cloud_cfg.seed
    ))
    rng = generator(seed)
    y = [add_noise(meas.apply(k, x), snr_db, rng) for k, x in enumerate(cloudy)]
    return FusionInstance(hri, maps, cloudy, y, meas)
