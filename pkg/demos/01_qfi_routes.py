"""Three independent routes to the same quantum Fisher information.

The transmission eta of a thermal-loss channel can be estimated with Gaussian
probes; the QFI is computed here by (i) solving the symmetric-logarithmic-
derivative equation, (ii) the single-mode purity form, and (iii) a fidelity
finite difference.  Closed forms for each probe family tie the three routes
together.

Run:  python demos/01_qfi_routes.py
"""

import numpy as np

import lossfish as lf

ETA = 1 / np.sqrt(2)

print("probe                    eta    N_B   closed-form      SLD        fidelity-FD")
for label, state, closed in [
    ("coherent (N_S=1)",
     lf.build_single_mode(lf.SingleModeProbe(1.0, 0.0)),
     lambda p: lf.qfi_coherent(1.0, p)),
    ("squeezed vacuum (N_S=1)",
     lf.build_single_mode(lf.SingleModeProbe(1.0, 1.0)),
     lambda p: lf.qfi_squeezed_vacuum(1.0, p)),
    ("displaced squeezed",
     lf.build_single_mode(lf.SingleModeProbe(1.0, 0.5)),
     lambda p: lf.qfi_if_closed(0.5, 0.5, p).total),
    ("vacuum (shadow only)", lf.vacuum(), lambda p: lf.qfi_shadow(p)),
    ("TMSV (N_S=1)", lf.tmsv(1.0), lambda p: lf.qfi_tmsv(1.0, p)),
]:
    for nb in (0.0, 1.0):
        p = lf.ChannelParams(ETA, nb)
        sld = lf.qfi_sld(state, p)
        fd = lf.qfi_fidelity_fd(state, p)
        print(f"{label:24s} {ETA:.3f}  {nb:4.1f} {closed(p):12.8f} {sld:12.8f} {fd:12.8f}")

print()
print("The vacuum row shows the shadow effect: a thermal background makes even")
print("an empty probe informative about the loss.  At eta = 1/sqrt(2), N_B = 1")
print("it reaches 8/3 =", f"{8/3:.8f}")

# breakdown of a displaced squeezed probe into named contributions
p = lf.ChannelParams(0.8, 2.0)
parts = lf.qfi_if_closed(0.7, 0.3, p)
print()
print(f"breakdown at eta=0.8, N_B=2, (N_coh, N_sq)=(0.7, 0.3):")
print(f"  displacement {parts.term_displacement:.6f} + squeezing {parts.term_squeeze:.6f}"
      f" + shadow {parts.term_shadow:.6f} = {parts.total:.6f}")

# estimating the loss rate instead of the transmission
probe = lf.build_single_mode(lf.SingleModeProbe(1.0, 0.0))
print()
print("loss-rate reparametrization gamma -> eta = exp(-gamma t/2):")
for t in (0.5, 1.0, 2.0):
    val = lf.qfi_gamma(2 * np.log(2), t, probe, lf.ChannelParams(0.5, 0.0))
    print(f"  t = {t:3.1f}: I_gamma = {val:.6f}")
