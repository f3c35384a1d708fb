"""Device selection: input threshold, ranking metrics, output-threshold MRC combiner.

Two ranking metrics are provided: a wiretap-aware capacity ratio (legitimate
relayed capacity over wiretap relayed capacity) and a wiretap-blind
half-harmonic-mean of the two hop gains.  The double-threshold schemes gate
devices on the source-to-device SNR first and prune weak branches at the
combiner afterwards.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import db_to_linear
from .errors import ParameterError


class Scheme(enum.Enum):
    DIRECT_ONLY = "direct"
    ODS_NO_THRESHOLD = "ods"
    PODS_A = "pods-a"
    PODS_P = "pods-p"

    @property
    def uses_devices(self) -> bool:
        return self is not Scheme.DIRECT_ONLY

    @property
    def uses_thresholds(self) -> bool:
        return self in (Scheme.PODS_A, Scheme.PODS_P)

    @property
    def has_direct_path(self) -> bool:
        # The no-threshold baseline and PODS-A are simulated without a direct
        # S->ED link; only the direct scheme and PODS-P use it.
        return self in (Scheme.DIRECT_ONLY, Scheme.PODS_P)


@dataclass(frozen=True)
class Thresholds:
    """Input (device admission) and output (combiner) thresholds, in dB."""

    input_db: float = 5.0
    output_db: float = 5.0

    def __post_init__(self):
        if not (np.isfinite(self.input_db) and np.isfinite(self.output_db)):
            raise ParameterError("thresholds must be finite")

    @property
    def input_linear(self) -> float:
        return db_to_linear(self.input_db)

    @property
    def output_linear(self) -> float:
        return db_to_linear(self.output_db)


@dataclass
class DeviceLinkState:
    """Per-device channel state for one selection decision."""

    index: int
    snr_sd: float = 0.0
    gain_sd_sq: float = 0.0
    gain_de_sq: float = 0.0
    gain_dE_sq: float = 0.0
    selected_input: bool = False
    survived_output: bool = False

    def __post_init__(self):
        if self.survived_output and not self.selected_input:
            raise ParameterError("a device cannot survive the combiner without passing the input threshold")


def instantaneous_snr_sd(p_source: float, gain_sd_sq, n0: float):
    """First-hop SNR P_S * |h_SD|^2 / N_0."""
    if n0 <= 0.0:
        raise ParameterError(f"noise variance must be positive, got {n0}")
    return p_source * gain_sd_sq / n0


def apply_input_threshold(state: DeviceLinkState, thresholds: Thresholds) -> DeviceLinkState:
    """Admit the device iff its first-hop SNR reaches the input threshold (boundary admits)."""
    return replace(state, selected_input=bool(state.snr_sd >= thresholds.input_linear))


def ods_a_metric(gain_sd_sq, gain_de_sq):
    """Wiretap-blind ranking metric: g1*g2/(g1+g2), with 0/0 -> 0."""
    g1 = np.asarray(gain_sd_sq, dtype=float)
    g2 = np.asarray(gain_de_sq, dtype=float)
    denom = g1 + g2
    out = np.divide(g1 * g2, denom, out=np.zeros_like(denom), where=denom > 0.0)
    return out if out.ndim else float(out)


def ods_p_metric(gain_sd_sq, gain_de_sq, gain_dE_sq, p_source: float, n0: float):
    """Wiretap-aware ranking metric.

    Ratio of (1 + legitimate relayed SNR proxy) over (1 + wiretap relayed SNR
    proxy), each proxy being P_S/(2 N_0) times the half-harmonic-mean of the
    hop gains.  Values above 1 mean the end device is favored over the
    eavesdropper.
    """
    if n0 <= 0.0:
        raise ParameterError(f"noise variance must be positive, got {n0}")
    scale = p_source / (2.0 * n0)
    num = 1.0 + scale * ods_a_metric(gain_sd_sq, gain_de_sq)
    den = 1.0 + scale * ods_a_metric(gain_sd_sq, gain_dE_sq)
    out = num / den
    return out if np.ndim(out) else float(out)


def select_best(states: list[DeviceLinkState], scheme: Scheme, p_source: float,
                n0: float, thresholds: Thresholds | None = None) -> list[int]:
    """Rank devices for the given scheme; ties go to the lowest index.

    The no-threshold baseline returns the single best device over the full
    set.  The double-threshold schemes filter on the input threshold first and
    return all admitted devices in metric order (possibly empty).
    """
    if scheme is Scheme.DIRECT_ONLY:
        return []
    if not states:
        raise ParameterError("device-using schemes need a non-empty state list")

    def metric(s: DeviceLinkState) -> float:
        if scheme is Scheme.PODS_P:
            return ods_p_metric(s.gain_sd_sq, s.gain_de_sq, s.gain_dE_sq, p_source, n0)
        return ods_a_metric(s.gain_sd_sq, s.gain_de_sq)

    if scheme is Scheme.ODS_NO_THRESHOLD:
        best = max(states, key=lambda s: (metric(s), -s.index))
        return [best.index]

    if thresholds is None:
        raise ParameterError("double-threshold schemes require thresholds")
    admitted = [apply_input_threshold(s, thresholds) for s in states]
    admitted = [s for s in admitted if s.selected_input]
    admitted.sort(key=lambda s: (-metric(s), s.index))
    return [s.index for s in admitted]


@dataclass
class CombinerReport:
    """Outcome of output-threshold MRC combining."""

    combined_snr: float
    direct_used: bool
    relays_used: list[int] = field(default_factory=list)
    outage: bool = False


def combine_output(direct_snr: float | None, relayed_snrs, thresholds: Thresholds) -> CombinerReport:
    """MRC over every branch whose SNR reaches the output threshold.

    The combined SNR is the sum of surviving branch SNRs; when nothing
    survives the report flags an outage with combined SNR zero.  Pass
    direct_snr=None when the scenario has no direct path.
    """
    gate = thresholds.output_linear
    relayed = np.asarray(relayed_snrs, dtype=float)
    if np.any(relayed < 0.0) or (direct_snr is not None and direct_snr < 0.0):
        raise ParameterError("branch SNRs must be non-negative")

    direct_used = direct_snr is not None and direct_snr >= gate
    relays_used = [i for i, snr in enumerate(relayed) if snr >= gate]
    combined = (direct_snr if direct_used else 0.0) + float(relayed[relays_used].sum())
    return CombinerReport(
        combined_snr=float(combined),
        direct_used=bool(direct_used),
        relays_used=relays_used,
        outage=not (direct_used or relays_used),
    )
