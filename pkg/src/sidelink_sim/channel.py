"""Rayleigh fading, complex AWGN, dB conversions and named deterministic RNG streams.

All draw functions take an explicit ``numpy.random.Generator`` so that every
result is reproducible and workers can own disjoint streams.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

_MASK64 = (1 << 64) - 1


def _key_part(part) -> int:
    """Map an arbitrary key part (int or str-able) to a stable 64-bit integer."""
    if isinstance(part, (int, np.integer)):
        return int(part) & _MASK64
    digest = hashlib.blake2b(str(part).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def stream(master_seed: int, *key) -> np.random.Generator:
    """Deterministic generator keyed by (master_seed, *key).

    Streams with distinct keys are statistically independent and the result
    does not depend on the order streams are created in, so parallel workers
    replay identically.
    """
    entropy = [_key_part(master_seed)] + [_key_part(p) for p in key]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derived_seed(master_seed: int, *key) -> int:
    """Collapse (master_seed, *key) into a single reportable 64-bit seed."""
    h = hashlib.blake2b(digest_size=8)
    for part in [master_seed, *key]:
        h.update(str(_key_part(part)).encode())
        h.update(b"/")
    return int.from_bytes(h.digest(), "little")


def db_to_linear(x_db):
    """10^(x/10) for scalars or arrays."""
    return np.power(10.0, np.asarray(x_db, dtype=float) / 10.0) if np.ndim(x_db) else 10.0 ** (float(x_db) / 10.0)


def linear_to_db(x):
    """10*log10(x); raises for non-positive input."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0.0):
        raise ParameterError(f"linear_to_db requires positive input, got {x}")
    out = 10.0 * np.log10(arr)
    return out if np.ndim(x) else float(out)


@dataclass
class NoiseParams:
    """Complex AWGN with total variance n0 (n0/2 per component)."""

    n0: float

    def __post_init__(self):
        if not (self.n0 > 0.0 and np.isfinite(self.n0)):
            raise ParameterError(f"noise variance must be positive and finite, got {self.n0}")


@dataclass
class LinkGain:
    """One Rayleigh channel realization together with its variance E[|h|^2]."""

    coefficient: complex | np.ndarray
    variance: float

    def __post_init__(self):
        if not (self.variance > 0.0 and np.isfinite(self.variance)):
            raise ParameterError(f"link variance must be positive and finite, got {self.variance}")
        c = np.asarray(self.coefficient)
        if not (np.all(np.isfinite(c.real)) and np.all(np.isfinite(c.imag))):
            raise ParameterError("link coefficient must be finite")

    @property
    def gain_sq(self):
        """Instantaneous channel gain |h|^2."""
        return np.abs(self.coefficient) ** 2


def rayleigh_coefficients(variance: float, rng: np.random.Generator, size=None) -> np.ndarray | complex:
    """Circularly-symmetric complex Gaussian taps with E[|h|^2] = variance."""
    if not (variance > 0.0 and np.isfinite(variance)):
        raise ParameterError(f"Rayleigh variance must be positive, got {variance}")
    scale = np.sqrt(variance / 2.0)
    h = scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
    return h if size is not None else complex(h)


def draw_rayleigh(variance: float, rng: np.random.Generator) -> LinkGain:
    """Draw a single Rayleigh-faded link realization."""
    return LinkGain(coefficient=rayleigh_coefficients(variance, rng), variance=variance)


def awgn_samples(n0: float, rng: np.random.Generator, size=None) -> np.ndarray | complex:
    """Zero-mean complex Gaussian noise with total variance n0."""
    if not (n0 > 0.0 and np.isfinite(n0)):
        raise ParameterError(f"noise variance must be positive, got {n0}")
    scale = np.sqrt(n0 / 2.0)
    n = scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
    return n if size is not None else complex(n)


def draw_awgn(n0: float, rng: np.random.Generator) -> complex:
    """Draw a single complex AWGN sample of total variance n0."""
    return awgn_samples(n0, rng)
