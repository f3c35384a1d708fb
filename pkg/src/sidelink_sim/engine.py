"""Monte Carlo experiment driver: BER sweeps and intercept-probability sweeps.

Simulation is symbol-level with independent fading per symbol, vectorized in
fixed-size blocks.  Every block derives its own RNG stream from the master
seed, the sweep-point tag and the block index, so results are bit-identical
regardless of evaluation order or worker count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import modem
from .channel import db_to_linear, derived_seed, rayleigh_coefficients, awgn_samples, stream
from .errors import ConfigurationError
from .relaying import af_branch_snr, amplification_factor
from .security import (InterceptEstimate, SecurityScenario, WiretapStats,
                       estimate_intercept_mc)
from .selection import Scheme, Thresholds, ods_a_metric, ods_p_metric
from .topology import CaseId, DistanceCase, PowerAllocation, allocate_power, case_variances

_BLOCK_SYMBOL_BUDGET = 2_000_000  # device-symbols per simulated block


@dataclass
class ExperimentConfig:
    scheme: Scheme = Scheme.PODS_P
    case: DistanceCase = field(default_factory=lambda: case_variances(CaseId.CASE_I))
    n_devices: int = 5
    modulation: int = 2
    thresholds: Thresholds = field(default_factory=Thresholds)
    snr_grid_db: tuple = tuple(range(0, 42, 2))
    n_bits: int = 100_000
    master_seed: int = 2024
    combine_all_passing: bool = True
    p_total: float = 1.0
    direct_link_variance: float = 1.0
    eaves_link_variance: float = 1.0

    def __post_init__(self):
        if self.n_devices < 1:
            raise ConfigurationError(f"need at least one device, got {self.n_devices}")
        k = modem.bits_per_symbol(self.modulation)
        if self.n_bits < 1 or self.n_bits % k != 0:
            raise ConfigurationError(
                f"n_bits={self.n_bits} must be positive and divisible by {k} for {self.modulation}-PSK")
        grid = np.asarray(self.snr_grid_db, dtype=float)
        if grid.size == 0 or np.any(np.diff(grid) <= 0.0):
            raise ConfigurationError("snr_grid_db must be non-empty and strictly increasing")
        if self.p_total <= 0.0 or self.direct_link_variance <= 0.0 or self.eaves_link_variance <= 0.0:
            raise ConfigurationError("powers and link variances must be positive")

    def allocation(self) -> PowerAllocation:
        if self.scheme is Scheme.DIRECT_ONLY:
            # no cooperation: the source spends the full budget
            return PowerAllocation(self.p_total, self.p_total, 0.0, 1)
        return allocate_power(self.case, self.p_total, self.n_devices)


@dataclass
class BerEstimate:
    snr_db: float
    bit_errors: int
    bits: int
    ber: float
    outage_fraction: float
    seed: int


def _simulate_block(cfg: ExperimentConfig, snr_db: float, n_symbols: int,
                    rng: np.random.Generator) -> tuple[int, int]:
    """Simulate n_symbols independent fading realizations; return (bit errors, outages)."""
    k = modem.bits_per_symbol(cfg.modulation)
    n0 = cfg.p_total / db_to_linear(snr_db)
    alloc = cfg.allocation()
    scheme = cfg.scheme

    bits = rng.integers(0, 2, n_symbols * k)
    x = modem.modulate(bits, cfg.modulation)

    if scheme is Scheme.DIRECT_ONLY:
        h = rayleigh_coefficients(cfg.direct_link_variance, rng, n_symbols)
        g = math.sqrt(alloc.p_source) * h
        y = g * x + awgn_samples(n0, rng, n_symbols)
        decision = np.conj(g) * y
        rx = modem.demodulate(decision, cfg.modulation)
        return modem.count_bit_errors(bits, rx), 0

    n = cfg.n_devices
    p_source = alloc.p_source
    # single-forwarder modes concentrate the whole relay budget on the one
    # transmitting device; multi-device forwarding keeps the per-device share
    single_forwarder = scheme is Scheme.ODS_NO_THRESHOLD or not cfg.combine_all_passing
    p_device = alloc.p_device * n if single_forwarder else alloc.p_device
    h_sd = rayleigh_coefficients(cfg.case.sigma_sd_sq, rng, (n, n_symbols))
    h_de = rayleigh_coefficients(cfg.case.sigma_de_sq, rng, (n, n_symbols))
    zeta_sd = np.abs(h_sd) ** 2
    zeta_de = np.abs(h_de) ** 2

    gamma_first = p_source * zeta_sd / n0
    gamma_second = p_device * zeta_de / n0
    gamma_branch = af_branch_snr(gamma_first, gamma_second)

    if scheme is Scheme.ODS_NO_THRESHOLD:
        chosen = np.argmax(ods_a_metric(zeta_sd, zeta_de), axis=0)
        forward = np.zeros((n, n_symbols), dtype=bool)
        forward[chosen, np.arange(n_symbols)] = True
        survive = forward
    else:
        admitted = gamma_first >= cfg.thresholds.input_linear
        if cfg.combine_all_passing:
            forward = admitted
        else:
            if scheme is Scheme.PODS_P:
                zeta_dE = rng.exponential(cfg.eaves_link_variance, (n, n_symbols))
                metric = ods_p_metric(zeta_sd, zeta_de, zeta_dE, p_source, n0)
            else:
                metric = ods_a_metric(zeta_sd, zeta_de)
            chosen = np.argmax(np.where(admitted, metric, -np.inf), axis=0)
            forward = np.zeros((n, n_symbols), dtype=bool)
            forward[chosen, np.arange(n_symbols)] = admitted.any(axis=0)
        survive = forward & (gamma_branch >= cfg.thresholds.output_linear)

    # Phase I at the forwarding devices, Phase II toward the end device
    noise_sd = awgn_samples(n0, rng, (n, n_symbols))
    y_sd = math.sqrt(p_source) * h_sd * x + noise_sd
    alpha = amplification_factor(p_device, p_source, zeta_sd, n0)
    noise_de = awgn_samples(n0, rng, (n, n_symbols))
    y_relay = alpha * h_de * y_sd + noise_de

    # matched-filter MRC weights; relayed branch noise is colored by the AF gain
    g_relay = alpha * h_de * math.sqrt(p_source) * h_sd
    branch_var = (alpha ** 2 * zeta_de + 1.0) * n0
    weights = np.conj(g_relay) / branch_var
    decision = np.sum(np.where(survive, weights * y_relay, 0.0), axis=0)
    any_branch = survive.any(axis=0)

    if scheme.has_direct_path:
        h_sed = rayleigh_coefficients(cfg.direct_link_variance, rng, n_symbols)
        g_direct = math.sqrt(p_source) * h_sed
        y_direct = g_direct * x + awgn_samples(n0, rng, n_symbols)
        gamma_direct = p_source * np.abs(h_sed) ** 2 / n0
        direct_ok = gamma_direct >= cfg.thresholds.output_linear
        decision = decision + np.where(direct_ok, np.conj(g_direct) / n0 * y_direct, 0.0)
        any_branch = any_branch | direct_ok

    outages = int(n_symbols - np.count_nonzero(any_branch))
    if outages:
        # nothing was combined: the detector sees noise only
        decision = np.where(any_branch, decision, awgn_samples(1.0, rng, n_symbols))

    rx = modem.demodulate(decision, cfg.modulation)
    return modem.count_bit_errors(bits, rx), outages


def _point_seed(cfg: ExperimentConfig, tag: str, x_value: float) -> int:
    return derived_seed(cfg.master_seed, tag, f"{x_value:.6f}")


def run_ber_point(cfg: ExperimentConfig, snr_db: float) -> BerEstimate:
    """Estimate BER at one SNR point; reproducible from (config, master_seed, snr_db)."""
    k = modem.bits_per_symbol(cfg.modulation)
    n_symbols = cfg.n_bits // k
    point_seed = _point_seed(cfg, "ber", snr_db)

    block = max(1, _BLOCK_SYMBOL_BUDGET // max(cfg.n_devices, 1))
    errors = 0
    outages = 0
    done = 0
    block_idx = 0
    while done < n_symbols:
        take = min(block, n_symbols - done)
        rng = stream(point_seed, "block", block_idx)
        e, o = _simulate_block(cfg, snr_db, take, rng)
        errors += e
        outages += o
        done += take
        block_idx += 1

    bits = n_symbols * k
    return BerEstimate(snr_db=float(snr_db), bit_errors=errors, bits=bits,
                       ber=errors / bits, outage_fraction=outages / n_symbols,
                       seed=point_seed)


def run_sweep(cfg: ExperimentConfig) -> list[BerEstimate]:
    """One BerEstimate per grid point, in grid order."""
    return [run_ber_point(cfg, snr_db) for snr_db in cfg.snr_grid_db]


def run_intercept_sweep(cfg: ExperimentConfig, lambda_grid_db, trials: int,
                        operating_snr_db: float = 10.0) -> list[InterceptEstimate]:
    """Intercept probability versus the main-to-eavesdropper average gain ratio.

    The legitimate device->ED links keep the distance-case variance; the
    eavesdropper link variance is scaled down by the swept ratio.
    """
    if trials < 1000:
        raise ConfigurationError(f"intercept sweeps need at least 1000 trials, got {trials}")
    alloc = cfg.allocation()
    results = []
    for lam_db in lambda_grid_db:
        rho_de = cfg.case.sigma_de_sq / db_to_linear(lam_db)
        stats = WiretapStats(
            rho_se_sq=rho_de,
            rho_sed_sq=cfg.direct_link_variance,
            rho_de_sq=rho_de,
            rho_ded_sq=cfg.case.sigma_de_sq,
            m_devices=alloc.n_devices,
        )
        scenario = SecurityScenario(
            stats=stats,
            alloc=alloc,
            thresholds=cfg.thresholds,
            snr_db=operating_snr_db,
            sigma_sd_sq=cfg.case.sigma_sd_sq,
        )
        rng = stream(_point_seed(cfg, "intercept", lam_db))
        est = estimate_intercept_mc(cfg.scheme, scenario, trials, rng)
        results.append(replace(est, x_value=float(lam_db)))
    return results
