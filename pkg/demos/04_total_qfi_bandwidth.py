"""Splitting a fixed photon budget over M probes: one shot or broadband.

With total power T = M N_S fixed, the total QFI M I(T/M) is extremal at
M = 1 or M -> infinity.  At zero temperature the broadband squeezed vacuum
wins below a threshold K(eta); a bright bare background makes M = infinity
trivially divergent through the shadow term, while the constant-background
(normalized) model removes the shadow and is saturated by the broadband TMSV.

Run:  python demos/04_total_qfi_bandwidth.py
"""

import math

import lossfish as lf
from lossfish.optimize import FAMILY_COHERENT, FAMILY_IDLER_FREE, FAMILY_TMSV

print("== zero temperature: plan for the idler-free family ==")
print("total T   eta    M_opt     xi_opt    total QFI")
for total in (0.01, 1.0, 50.0):
    for eta in (0.5, 0.9):
        plan = lf.optimize_bandwidth(total, lf.ChannelParams(eta, 0.0))
        m_txt = "inf" if math.isinf(plan.m) else f"{plan.m:.0f}"
        print(f"{total:8.2f}  {eta:4.2f} {m_txt:>6s} {plan.xi_opt:10.5f} {plan.total_qfi:12.5f}")
print("broadband (M=inf) region: small budgets at high transmission, xi=1")

print()
print("== the TMSV total is bandwidth-free at N_B = 0 ==")
p = lf.ChannelParams(0.8, 0.0)
for m in (1.0, 10.0, 1000.0):
    print(f"  M = {m:6.0f}: {lf.total_qfi(2.0, m, p, FAMILY_TMSV):.10f}")
print(f"  limit 4 T/(1-eta^2) = {4 * 2 / (1 - 0.64):.10f}")

print()
print("== bare thermal background: every family diverges broadband ==")
p = lf.ChannelParams(0.5, 1.0)
for family in (FAMILY_COHERENT, FAMILY_IDLER_FREE, FAMILY_TMSV):
    plan = lf.optimize_bandwidth(1.0, p, family)
    print(f"  {family:11s}: divergent = {plan.divergent} (shadow term x M)")

print()
print("== normalized background: broadband TMSV saturates the bound ==")
p = lf.ChannelParams(0.5, 1.0, normalized=True)
bound = 4.0 / (1.0 + 1.0 - 0.25)
for m in (1.0, 100.0, 1e6):
    print(f"  M = {m:8.0f}: {lf.total_qfi(1.0, m, p, FAMILY_TMSV):.8f}")
print(f"  ultimate bound 4 T/(N_B+1-eta^2) = {bound:.8f}")
print("the advantage over the coherent family is at most a factor of two:")
coh = lf.total_qfi(1.0, 1.0, p, FAMILY_COHERENT)
print(f"  broadband TMSV / coherent = {bound / coh:.4f}")
