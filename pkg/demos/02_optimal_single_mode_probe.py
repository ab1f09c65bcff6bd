"""How the optimal single-mode probe trades displacement against squeezing.

Scans the optimal squeezed fraction xi over signal power and transmission.
Zero background: the squeezed vacuum wins below a power threshold N_bar(eta)
(nonzero only for eta > 1/sqrt(2)); at high power the optimum keeps only an
infinitesimal squeezing xi ~ eta / sqrt(4 N_S (1-eta^2)(1+2N_B)).  A bright
background adds an abrupt low-power flip between the coherent state and the
squeezed vacuum.

Run:  python demos/02_optimal_single_mode_probe.py
"""

import numpy as np

import lossfish as lf

print("== optimal xi over (N_S, eta), N_B = 0 ==")
etas = (0.3, 0.6, 0.75, 0.9)
print("N_S \\ eta |" + "".join(f" {e:7.2f}" for e in etas))
for ns in (0.01, 0.1, 1.0, 10.0, 1000.0):
    row = []
    for eta in etas:
        res = lf.optimize_xi(ns, lf.ChannelParams(eta, 0.0))
        row.append(f" {res.xi_opt:7.4f}")
    print(f"{ns:9.2f} |" + "".join(row))

print()
print("squeezed-vacuum optimality threshold N_bar(eta), zero at eta <= 1/sqrt(2):")
for eta in (0.7, 0.75, 0.8, 0.9, 0.95, 0.99):
    print(f"  eta = {eta:4.2f}: N_bar = {lf.xi_threshold_nbar(eta):.5g}")

c1 = lf.threshold_constant_large_ns()
print(f"large-power inverse: eta_bar ~ 1 - 1/({c1:.3f} N_S)")

print()
print("== high-power asymptotics, eta = 0.9 ==")
for nb in (0.0, 1.0):
    res = lf.optimize_xi(1e4, lf.ChannelParams(0.9, nb))
    asym = 0.9 / np.sqrt(4e4 * (1 - 0.81) * (1 + 2 * nb))
    print(f"  N_B = {nb}: xi_opt = {res.xi_opt:.6f}, asymptote {asym:.6f}")

print()
print("== abrupt low-power transition at N_B = 100 ==")
for eta in (0.98, 0.995, 0.9967, 0.998):
    res = lf.optimize_xi(1e-4, lf.ChannelParams(eta, 100.0))
    kind = {0.0: "coherent", 1.0: "squeezed"}.get(res.xi_opt, f"xi={res.xi_opt:.3g}")
    print(f"  eta = {eta}: {kind}")
print("the flip point sits where the low-power squeezing payoff g2 crosses")
print("the coherent slope 1/(1+2 N_B (1-eta^2)), near eta = 1 - 3/(2 N_B)")

print()
print("== homodyne detection against the quantum limit ==")
for eta, nb in ((0.01, 0.0), (0.5, 1000.0), (0.999, 0.0)):
    p = lf.ChannelParams(eta, nb)
    res = lf.optimize_xi(1.0, p)
    probe = lf.SingleModeProbe(1.0, res.xi_opt)
    ratio = lf.homodyne_fisher(probe.n_coh, probe.r, p) / res.qfi_opt
    print(f"  eta = {eta:5.3f}, N_B = {nb:6.1f}: H/I = {ratio:.4f}")
print("homodyne is ideal at strong loss, loses a factor two in bright noise,")
print("and misses the (1-eta^2)^-1 divergence near full transmission")
