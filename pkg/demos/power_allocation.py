"""Print the source/device power split for each distance case.

The symmetric case splits the budget evenly; the asymmetric cases weight the
source by the hop standard deviations.
"""
from sidelink_sim import CaseId, allocate_power, case_variances

N_DEVICES = 5
P_TOTAL = 1.0

print(f"{'case':>8} {'sigma_sd^2':>10} {'sigma_de^2':>10} "
      f"{'p_source':>10} {'p_device':>10} {'check':>8}")
for case_id in CaseId:
    case = case_variances(case_id)
    alloc = allocate_power(case, P_TOTAL, N_DEVICES)
    total = alloc.p_source + N_DEVICES * alloc.p_device
    print(f"{case_id.name:>8} {case.sigma_sd_sq:10.1f} {case.sigma_de_sq:10.1f} "
          f"{alloc.p_source:10.4f} {alloc.p_device:10.4f} {total:8.4f}")
