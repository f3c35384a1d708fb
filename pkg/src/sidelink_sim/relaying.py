"""Two-phase amplify-and-forward transmission: source broadcast, then device forwarding.

All operations accept scalar symbols or 1-D symbol arrays; device-indexed
quantities carry a leading device axis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import LinkGain, NoiseParams, awgn_samples
from .errors import ParameterError
from .topology import PowerAllocation


@dataclass
class LinkSet:
    """Channel realizations used in one transmission round.

    source_to_device coefficients have shape (N,) or (N, n_symbols); the
    optional end-device / eavesdropper links mirror the symbol shape.
    """

    source_to_device: LinkGain
    source_to_end: LinkGain | None = None
    source_to_eaves: LinkGain | None = None


@dataclass
class PhaseOneObservation:
    at_device: np.ndarray
    at_end_device: np.ndarray | complex | None
    at_eavesdropper: np.ndarray | complex | None
    gains: LinkSet


@dataclass
class RelayedObservation:
    at_end_device: np.ndarray
    at_eavesdropper: np.ndarray | None
    amplification: np.ndarray


def amplification_factor(p_device, p_source, gain_sd_sq, n0):
    """AF gain sqrt(P_D) / sqrt(P_S * |h_SD|^2 + N_0).

    Normalizes the device transmit power so the average forwarded power is
    p_device regardless of the first-hop realization.
    """
    if np.any(np.asarray(n0) <= 0.0):
        raise ParameterError(f"noise variance must be positive, got {n0}")
    if np.any(np.asarray(p_device) < 0.0):
        raise ParameterError(f"device power must be non-negative, got {p_device}")
    return np.sqrt(p_device) / np.sqrt(p_source * gain_sd_sq + n0)


def af_branch_snr(gamma_first, gamma_second):
    """End-to-end SNR of one AF branch from its per-hop SNRs."""
    g1 = np.asarray(gamma_first, dtype=float)
    g2 = np.asarray(gamma_second, dtype=float)
    out = g1 * g2 / (g1 + g2 + 1.0)
    return out if out.ndim else float(out)


def phase_one(symbol, alloc: PowerAllocation, gains: LinkSet, noise: NoiseParams,
              rng: np.random.Generator) -> PhaseOneObservation:
    """Broadcast the unit-energy symbol(s); every receiver gets fresh independent noise."""
    amp = np.sqrt(alloc.p_source)
    h_sd = np.asarray(gains.source_to_device.coefficient)
    at_device = amp * h_sd * symbol + awgn_samples(noise.n0, rng, h_sd.shape)

    at_end = None
    if gains.source_to_end is not None:
        h = gains.source_to_end.coefficient
        at_end = amp * h * symbol + awgn_samples(noise.n0, rng, np.shape(h))
    at_eaves = None
    if gains.source_to_eaves is not None:
        h = gains.source_to_eaves.coefficient
        at_eaves = amp * h * symbol + awgn_samples(noise.n0, rng, np.shape(h))
    return PhaseOneObservation(at_device=at_device, at_end_device=at_end,
                               at_eavesdropper=at_eaves, gains=gains)


def phase_two(phase1: PhaseOneObservation, alloc: PowerAllocation,
              gains_to_end: LinkGain, noise: NoiseParams, rng: np.random.Generator,
              gains_to_eaves: LinkGain | None = None) -> RelayedObservation:
    """Each device scales its noisy observation by its AF gain and forwards it.

    The eavesdropper, when present, hears the same amplified signals through
    its own links, with its own fresh noise.
    """
    h_sd = np.asarray(phase1.gains.source_to_device.coefficient)
    alpha = amplification_factor(alloc.p_device, alloc.p_source, np.abs(h_sd) ** 2, noise.n0)

    h_de = np.asarray(gains_to_end.coefficient)
    forwarded = alpha * phase1.at_device
    at_end = h_de * forwarded + awgn_samples(noise.n0, rng, h_de.shape)

    at_eaves = None
    if gains_to_eaves is not None:
        h_dE = np.asarray(gains_to_eaves.coefficient)
        at_eaves = h_dE * forwarded + awgn_samples(noise.n0, rng, h_dE.shape)
    return RelayedObservation(at_end_device=at_end, at_eavesdropper=at_eaves,
                              amplification=np.asarray(alpha))
