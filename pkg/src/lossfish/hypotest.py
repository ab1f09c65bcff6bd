"""Error-probability bounds for discriminating two transmission values.

With M independent copies of a probe through the channel at ``eta_plus`` or
``eta_minus`` and equal priors, the optimal error probability obeys

    P_err <= (1/2) sqrt(F(rho_plus, rho_minus))^M
          ~= (1/2) exp(-M d_eta^2 I_eta / 8)        (d_eta^2 I_eta << 1)

and the local threshold strategy (estimate eta, decide against the midpoint)
achieves ``P_err ~= 1 - erf(sqrt(M d_eta^2 I_eta / 8))``, which matches the
exponential bound at leading order in the exponent.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from .channel import ChannelParams, apply_channel
from .fidelity import gaussian_fidelity
from .states import GaussianState


@dataclass(frozen=True)
class HypothesisSpec:
    """Binary discrimination setup: eta_plus vs eta_minus with M probe copies."""

    eta_plus: float
    eta_minus: float
    m: int
    probe: GaussianState
    channel_base: ChannelParams

    def __post_init__(self):
        if not 0.0 <= self.eta_minus < self.eta_plus <= 1.0:
            raise ValueError("require 0 <= eta_minus < eta_plus <= 1")
        if self.m < 1:
            raise ValueError("m must be at least 1")

    @property
    def d_eta(self) -> float:
        return self.eta_plus - self.eta_minus


def fidelity_error_bound(spec: HypothesisSpec) -> float:
    """Exact fidelity bound (1/2) F^{M/2} on the discrimination error."""
    out_plus = apply_channel(spec.probe, replace(spec.channel_base, eta=spec.eta_plus))
    out_minus = apply_channel(spec.probe, replace(spec.channel_base, eta=spec.eta_minus))
    fid = gaussian_fidelity(out_plus, out_minus)
    return 0.5 * fid ** (spec.m / 2.0)


def qfi_error_approx(d_eta: float, m: int, i_eta: float) -> float:
    """Small-separation form (1/2) exp(-M d_eta^2 I / 8) of the fidelity bound."""
    if d_eta < 0 or m < 1 or i_eta < 0:
        raise ValueError("d_eta and i_eta must be non-negative, m >= 1")
    if d_eta ** 2 * i_eta > 0.1:
        warnings.warn("d_eta^2 * I exceeds 0.1; the quadratic fidelity "
                      "expansion is inaccurate here", stacklevel=2)
    return 0.5 * math.exp(-m * d_eta ** 2 * i_eta / 8.0)


def threshold_strategy_error(d_eta: float, m: int, i_eta: float) -> float:
    """Error 1 - erf(sqrt(M d_eta^2 I / 8)) of the midpoint threshold strategy.

    Valid for ``M d_eta^2 I`` large, where the estimator is Gaussian; the decay
    rate matches :func:`qfi_error_approx` (the erfc prefactor differs).
    """
    if d_eta < 0 or m < 1 or i_eta < 0:
        raise ValueError("d_eta and i_eta must be non-negative, m >= 1")
    arg = m * d_eta ** 2 * i_eta / 8.0
    if arg < 1.0:
        warnings.warn("M d_eta^2 I / 8 below 1; the Gaussian threshold "
                      "approximation is unreliable here", stacklevel=2)
    # erfc keeps full precision in the deep tail where 1 - erf underflows
    return math.erfc(math.sqrt(arg))
