"""Distance cases and the source/device power split under a total-power budget.

The three cases encode where the relay devices sit between the source and the
end device through the two hop variances; the source/device powers follow the
high-SNR optimal AF allocation for the asymmetric cases and an even split for
the symmetric one.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConfigurationError


class CaseId(enum.Enum):
    CASE_I = 1
    CASE_II = 2
    CASE_III = 3


@dataclass(frozen=True)
class DistanceCase:
    """Hop variances (sigma^2 of S->D and D->ED links) for one distance case."""

    case_id: CaseId
    sigma_sd_sq: float
    sigma_de_sq: float

    def __post_init__(self):
        if not (self.sigma_sd_sq > 0.0 and self.sigma_de_sq > 0.0):
            raise ConfigurationError("link variances must be positive")
        if self.case_id is CaseId.CASE_I and self.sigma_sd_sq != self.sigma_de_sq:
            raise ConfigurationError("Case I requires equal hop variances")
        if self.case_id is CaseId.CASE_II and not self.sigma_sd_sq < self.sigma_de_sq:
            raise ConfigurationError("Case II requires sigma_sd_sq < sigma_de_sq")
        if self.case_id is CaseId.CASE_III and not self.sigma_sd_sq > self.sigma_de_sq:
            raise ConfigurationError("Case III requires sigma_sd_sq > sigma_de_sq")


def case_variances(case_id: CaseId) -> DistanceCase:
    """Reference hop variances for each distance case."""
    if case_id is CaseId.CASE_I:
        return DistanceCase(case_id, 1.0, 1.0)
    if case_id is CaseId.CASE_II:
        return DistanceCase(case_id, 1.0, 10.0)
    if case_id is CaseId.CASE_III:
        return DistanceCase(case_id, 10.0, 1.0)
    raise ConfigurationError(f"unknown case {case_id!r}")


@dataclass(frozen=True)
class PowerAllocation:
    """Total power split between the source and N identical relay devices."""

    p_total: float
    p_source: float
    p_device: float
    n_devices: int

    def __post_init__(self):
        if self.p_total <= 0.0 or self.p_source <= 0.0 or self.p_device < 0.0:
            raise ConfigurationError("powers must be positive (device power may be zero)")
        if self.n_devices < 1:
            raise ConfigurationError("need at least one device slot")
        budget = self.p_source + self.n_devices * self.p_device
        if abs(budget - self.p_total) > 1e-9 * self.p_total:
            raise ConfigurationError(
                f"power budget violated: {budget} != {self.p_total}"
            )


def allocate_power(case: DistanceCase, p_total: float, n_devices: int) -> PowerAllocation:
    """Split p_total between the source and n_devices relays for the given case.

    Case I splits evenly (half to the source, half shared by the devices).  The
    asymmetric cases weight the source by the hop standard deviations: the
    weaker S->D hop receives more source power in Case II, and the mirrored
    expression applies in Case III.
    """
    if p_total <= 0.0:
        raise ConfigurationError(f"total power must be positive, got {p_total}")
    if n_devices < 1:
        raise ConfigurationError(f"need at least one device, got {n_devices}")

    if case.case_id is CaseId.CASE_I:
        p_source = 0.5 * p_total
        p_device = 0.5 * p_total / n_devices
    else:
        sd = math.sqrt(case.sigma_sd_sq)
        de = math.sqrt(case.sigma_de_sq)
        root = math.sqrt(sd * sd + 8.0 * de * de)
        denom = 3.0 * sd + root
        if case.case_id is CaseId.CASE_II:
            p_source = (sd + root) / denom * p_total
            p_device = (2.0 * sd) / denom * p_total / n_devices
        else:
            p_source = (2.0 * sd) / denom * p_total
            p_device = (sd + root) / denom * p_total / n_devices
    return PowerAllocation(p_total=p_total, p_source=p_source, p_device=p_device, n_devices=n_devices)
