"""Quantum Fisher information of the lossy channel, by three independent routes.

Routes
------
``qfi_sld``
    Generic Gaussian-state QFI: solve the symmetric-logarithmic-derivative
    equation ``4 S L S + W L W = 2 dS`` for the quadratic SLD form ``L`` (with
    ``S`` the output covariance, ``W`` the symplectic form) and evaluate
    ``Tr[L dS] + dd^T S^+ dd``.
``qfi_single_mode_form``
    Purity form for one mode:
    ``Tr[(S^-1 dS)^2] / (2 (1 + mu^2)) + 2 mu'^2 / (1 - mu^4) + dd^T S^-1 dd``.
``qfi_fidelity_fd``
    Finite difference of ``8 (1 - sqrt(F(rho_eta1, rho_eta2))) / d_eta^2``,
    the defining limit of the QFI as a fidelity susceptibility.

Closed forms for the probe families (displaced squeezed, squeezed vacuum,
coherent, vacuum shadow term, TMSV, generic canonical two-mode) are provided
alongside, for both the bare channel and the constant-background normalized
model.  All routes must agree; the test suite enforces this on dense grids.

The engine guards ``eta <= 1 - 1e-7``: at ``eta -> 1`` the output state turns
pure, the SLD system degenerates and the purity form divides by ``1 - mu^4``.
Behaviour at ``eta = 1`` is only meaningful through asymptotic expansions.

A boundary caveat: at exactly ``eta = 0`` with ``N_B = 0`` every probe maps to
the vacuum and the pointwise QFI of a squeezed probe drops to its displacement
part, while the closed forms give the (discontinuous) ``eta -> 0+`` limit.
Grids in this library therefore start at ``eta > 0`` for that corner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .channel import (ChannelParams, additive_noise, additive_noise_derivative,
                      apply_channel, channel_derivative, gamma_to_eta)
from .errors import DegenerateDenominator, EtaTooClose, SingularSystem
from .fidelity import gaussian_fidelity
from .probes import TwoModeProbe, squeeze_parameter
from .states import GaussianState, symplectic_form

EPS_ETA = 1e-7
SLD_RESIDUAL_TOL = 1e-8

ROUTE_SLD = "sld"
ROUTE_SINGLE_MODE_FORM = "single_mode_form"
ROUTE_FIDELITY_FD = "fidelity_fd"
ROUTE_CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class QfiBreakdown:
    """QFI value with its named closed-form contributions.

    For the idler-free closed form, ``total`` is the sum of the displacement
    term, the squeezing term and the shadow term (the vacuum's metrological
    power in a thermal background).
    """

    total: float
    term_displacement: float
    term_squeeze: float
    term_shadow: float
    route: str = ROUTE_CLOSED_FORM


def _check_eta(p: ChannelParams):
    if p.eta > 1.0 - EPS_ETA:
        raise EtaTooClose(
            f"eta = {p.eta} is inside the guard band (eta <= {1.0 - EPS_ETA}); "
            "use the asymptotic expressions for the eta -> 1 behaviour")


def _sym_pairs(m: int):
    return [(i, j) for i in range(m) for j in range(i, m)]


def _pinv_psd(mat: np.ndarray) -> np.ndarray:
    """Spectral pseudoinverse, zeroing eigenvalues below 1e-12 of the largest."""
    vals, vecs = np.linalg.eigh(mat)
    cut = 1e-12 * np.max(np.abs(vals))
    inv = np.where(np.abs(vals) > cut, 1.0 / vals, 0.0)
    return (vecs * inv) @ vecs.T


def _sld_qfi_batch(st, dst, ddt, raise_on_bad=True):
    """QFI for a stack of channel outputs (st, dst, ddt); shape (G, m, m)/(G, m).

    Solves the SLD system over the basis of symmetric matrices; items whose
    batched solve fails or leaves a residual above tolerance are retried with
    a least-squares solve (minimum-norm solution for the singular-consistent
    cases, e.g. pure outputs with vanishing dS).  With ``raise_on_bad=False``
    returns ``(values, bad_mask)`` instead of raising, letting callers route
    ill-conditioned items to another evaluator.
    """
    grid, m, _ = st.shape
    pairs = _sym_pairs(m)
    k = len(pairs)
    rows = np.array([ij[0] for ij in pairs])
    cols = np.array([ij[1] for ij in pairs])
    weights = np.array([2.0 - (i == j) for (i, j) in pairs])
    omega = symplectic_form(m // 2)

    a_mat = np.empty((grid, k, k))
    for l, (i, j) in enumerate(pairs):
        basis = np.zeros((m, m))
        basis[i, j] = 1.0
        basis[j, i] = 1.0
        wbw = omega @ basis @ omega
        tb = 4.0 * (st @ basis @ st) + wbw
        a_mat[:, :, l] = tb[:, rows, cols]
    b_vec = 2.0 * dst[:, rows, cols]

    try:
        x = np.linalg.solve(a_mat, b_vec[..., None])[..., 0]
        for _ in range(2):  # iterative refinement for ill-conditioned corners
            gap = b_vec - np.einsum("gkl,gl->gk", a_mat, x)
            x = x + np.linalg.solve(a_mat, gap[..., None])[..., 0]
        resid = np.linalg.norm(np.einsum("gkl,gl->gk", a_mat, x) - b_vec, axis=1)
    except np.linalg.LinAlgError:
        x = np.empty((grid, k))
        resid = np.empty(grid)
        resid[:] = np.inf
    b_norm = np.linalg.norm(b_vec, axis=1)
    bad = resid > SLD_RESIDUAL_TOL * np.maximum(b_norm, 1e-300)
    bad |= (b_norm == 0.0) & (resid > SLD_RESIDUAL_TOL)
    bad |= ~np.isfinite(resid)
    still_bad = np.zeros(grid, dtype=bool)
    for g in np.nonzero(bad)[0]:
        xg, *_ = np.linalg.lstsq(a_mat[g], b_vec[g], rcond=None)
        for _ in range(2):
            corr, *_ = np.linalg.lstsq(a_mat[g], b_vec[g] - a_mat[g] @ xg,
                                       rcond=None)
            xg = xg + corr
        x[g] = xg
        res = np.linalg.norm(a_mat[g] @ xg - b_vec[g])
        rel = res / b_norm[g] if b_norm[g] > 0 else res
        if rel > SLD_RESIDUAL_TOL:
            if raise_on_bad:
                raise SingularSystem(
                    f"SLD solve residual {rel:.3e} exceeds {SLD_RESIDUAL_TOL}")
            still_bad[g] = True

    trace_term = np.sum(x * weights * dst[:, rows, cols], axis=1)
    disp = np.linalg.solve(st, ddt[..., None])[..., 0]
    disp_term = np.einsum("gi,gi->g", ddt, disp)
    values = trace_term + disp_term
    if raise_on_bad:
        return values
    return values, still_bad


def _output_moments(probe: GaussianState, p: ChannelParams):
    out = apply_channel(probe, p)
    d_dot, s_dot = channel_derivative(probe, p)
    return out.d, out.sigma, d_dot, s_dot


def qfi_sld(probe: GaussianState, p: ChannelParams) -> float:
    """QFI from the SLD linear system; works for 1- and 2-mode probes."""
    _check_eta(p)
    dt, st, ddt, dst = _output_moments(probe, p)
    m = st.shape[0]
    pairs = _sym_pairs(m)
    omega = symplectic_form(probe.modes)
    a_mat = np.empty((len(pairs), len(pairs)))
    for l, (i, j) in enumerate(pairs):
        basis = np.zeros((m, m))
        basis[i, j] = 1.0
        basis[j, i] = 1.0
        tb = 4.0 * st @ basis @ st + omega @ basis @ omega
        a_mat[:, l] = [tb[i2, j2] for (i2, j2) in pairs]
    b_vec = np.array([2.0 * dst[i, j] for (i, j) in pairs])
    x, *_ = np.linalg.lstsq(a_mat, b_vec, rcond=None)
    for _ in range(2):  # iterative refinement for ill-conditioned corners
        corr, *_ = np.linalg.lstsq(a_mat, b_vec - a_mat @ x, rcond=None)
        x = x + corr
    res = np.linalg.norm(a_mat @ x - b_vec)
    b_norm = np.linalg.norm(b_vec)
    rel = res / b_norm if b_norm > 0 else res
    if rel > SLD_RESIDUAL_TOL:
        raise SingularSystem(f"SLD solve residual {rel:.3e} exceeds {SLD_RESIDUAL_TOL}")
    trace_term = sum(x[l] * (2.0 - (i == j)) * dst[i, j]
                     for l, (i, j) in enumerate(pairs))
    disp_term = ddt @ _pinv_psd(st) @ ddt
    return float(trace_term + disp_term)


def qfi_single_mode_form(probe: GaussianState, p: ChannelParams) -> float:
    """Purity-form QFI, valid for single-mode probes only."""
    if probe.modes != 1:
        raise ValueError("the purity form applies to single-mode states")
    _check_eta(p)
    dt, st, ddt, dst = _output_moments(probe, p)
    st_inv = np.linalg.inv(st)
    ratio = st_inv @ dst
    mu = (4.0 * np.linalg.det(st)) ** -0.5
    dmu = -0.5 * mu * np.trace(ratio)
    term1 = np.trace(ratio @ ratio) / (2.0 * (1.0 + mu ** 2))
    term2 = 0.0 if dmu == 0.0 else 2.0 * dmu ** 2 / (1.0 - mu ** 4)
    term3 = ddt @ st_inv @ ddt
    return float(term1 + term2 + term3)


def qfi_fidelity_fd(probe: GaussianState, p: ChannelParams, deta: float = 1e-4) -> float:
    """QFI from the fidelity drop between outputs at nearby transmissions.

    Evaluates ``8 (1 - sqrt(F)) / deta^2`` on the pair ``eta -/+ deta/2``
    (centred, quadratic-order accurate); falls back to the one-sided pair
    ``(eta - deta, eta)`` when ``eta + deta/2`` would enter the guard band.
    """
    if not 1e-6 <= deta <= 1e-3:
        raise ValueError("deta must lie in [1e-6, 1e-3]")
    if p.eta - deta < 0:
        raise ValueError("eta - deta must be non-negative")
    _check_eta(p)
    hi = p.eta + 0.5 * deta
    lo = p.eta - 0.5 * deta
    if hi > 1.0 - EPS_ETA:
        hi, lo = p.eta, p.eta - deta
    out_lo = apply_channel(probe, replace(p, eta=lo))
    out_hi = apply_channel(probe, replace(p, eta=hi))
    fid = gaussian_fidelity(out_lo, out_hi)
    return float(8.0 * (1.0 - math.sqrt(fid)) / deta ** 2)


# ---------------------------------------------------------------------------
# closed forms, idler-free
# ---------------------------------------------------------------------------

def qfi_if_closed(n_coh: float, n_sq: float, p: ChannelParams) -> QfiBreakdown:
    """Idler-free QFI as displacement + squeezing + shadow terms.

    Bare channel:  with ``A = (1-e)[N_B(N_B+1) + N_sq eta^2(2N_B+1) - N_B^2 eta^2]``
    and ``e = eta^2``,

        I_disp   = 4 N_coh / [eta^2 r + (1-e)(2 N_B + 1)]
        I_sq     = (4 N_sq eta^2 (2N_B+1)/A) [ (N_sq+1)(2N_B+1)/(2A+1) - 1 ]
        I_shadow = 4 N_B^2 eta^2 / A

    At ``N_B = 0`` the squeezing term reduces exactly to
    ``4 N_sq [(1-e)^2 + e^2] / [(1-e)(2A+1)]``, which is used directly to stay
    finite when ``A -> 0``.  In the normalized model the background is
    constant, the shadow term vanishes, and the denominators carry
    ``B = N_B(N_B+1) + N_sq eta^2 (2N_B+1) - N_sq eta^4`` instead.
    """
    if n_coh < 0 or n_sq < 0:
        raise ValueError("photon numbers must be non-negative")
    _check_eta(p)
    e2 = p.eta ** 2
    one = 1.0 - e2
    nb = p.n_b
    r = squeeze_parameter(n_sq)
    if nb == 0.0:
        # bare and normalized models coincide
        i_disp = 4.0 * n_coh / (e2 * r + one)
        a_den = one * n_sq * e2
        i_sq = 4.0 * n_sq * (one ** 2 + e2 ** 2) / (one * (2.0 * a_den + 1.0))
        i_shadow = 0.0
    elif p.normalized:
        i_disp = 4.0 * n_coh / (r * e2 + 2.0 * nb + 1.0 - e2)
        b_den = nb * (nb + 1.0) + n_sq * e2 * (2.0 * nb + 1.0) - n_sq * e2 ** 2
        if b_den <= 0.0:
            raise DegenerateDenominator(f"B = {b_den} <= 0")
        i_sq = (4.0 * n_sq * e2 / b_den) * (
            (n_sq + 1.0) * (2.0 * nb + 1.0) ** 2 / (2.0 * b_den + 1.0) - 1.0)
        i_shadow = 0.0
    else:
        i_disp = 4.0 * n_coh / (e2 * r + one * (2.0 * nb + 1.0))
        a_den = one * (nb * (nb + 1.0) + n_sq * e2 * (2.0 * nb + 1.0) - nb ** 2 * e2)
        if a_den <= 0.0:
            raise DegenerateDenominator(f"A = {a_den} <= 0")
        i_sq = (4.0 * n_sq * e2 * (2.0 * nb + 1.0) / a_den) * (
            (n_sq + 1.0) * (2.0 * nb + 1.0) / (2.0 * a_den + 1.0) - 1.0)
        i_shadow = 4.0 * nb ** 2 * e2 / a_den
    return QfiBreakdown(total=float(i_disp + i_sq + i_shadow),
                        term_displacement=float(i_disp),
                        term_squeeze=float(i_sq),
                        term_shadow=float(i_shadow))


def qfi_coherent(n_s: float, p: ChannelParams) -> float:
    """QFI of a coherent probe with `n_s` photons (shadow + displacement terms)."""
    return qfi_if_closed(n_s, 0.0, p).total


def qfi_shadow(p: ChannelParams) -> float:
    """QFI of the vacuum probe: 4 eta^2 N_B / [(1-eta^2)(1 + N_B(1-eta^2))]."""
    return qfi_if_closed(0.0, 0.0, p).total


def qfi_squeezed_vacuum(n_s: float, p: ChannelParams) -> float:
    """QFI of a squeezed-vacuum probe with `n_s` photons."""
    return qfi_if_closed(0.0, n_s, p).total


def qfi_tmsv(n_s: float, p: ChannelParams) -> float:
    """QFI of the two-mode squeezed vacuum at `n_s` photons per signal mode.

    Bare channel (with ``g = N_S + N_B + 2 N_S N_B``):

        I = 4 [N_S(N_S+1)(1-eta^2) + eta^2 g] / {(1-eta^2)[1 + (1-eta^2) g]}

    which collapses to ``4 N_S / (1 - eta^2)`` at ``N_B = 0``.  The normalized
    model replaces the ``(1-eta^2)`` structure by ``N_B + 1 - eta^2``.
    """
    if n_s < 0:
        raise ValueError("n_s must be non-negative")
    e2 = p.eta ** 2
    nb = p.n_b
    if p.normalized and nb > 0.0:
        # regular up to eta -> 1 thanks to the constant background
        return float(4.0 * n_s * (nb + 1.0 + n_s * (nb + 1.0 - e2))
                     / ((nb + 1.0 - e2) * (nb + 1.0 + n_s * (2.0 * nb + 1.0 - e2))))
    _check_eta(p)
    one = 1.0 - e2
    g = n_s + nb + 2.0 * n_s * nb
    return float(4.0 * (n_s * (n_s + 1.0) * one + e2 * g) / (one * (1.0 + one * g)))


# ---------------------------------------------------------------------------
# closed form, generic canonical two-mode probe (bare channel)
# ---------------------------------------------------------------------------

def _two_mode_closed_raw(n_s, zeta, r, theta, eta, nb):
    """Canonical two-mode QFI; trusts its arguments, no domain checks.

    Direct transcription of the trace + displacement terms for the canonical
    probe.  Beware of catastrophic cancellation when
    ``(4a^2 + 1)/(eta^2 I)`` approaches 1/eps_machine, i.e. very small eta
    combined with large photon numbers; the SLD route is stable there.
    """
    e2 = eta ** 2
    one = 1.0 - e2
    x = n_s * zeta ** 2
    n_coh = n_s * (1.0 - zeta ** 2)
    a = (2.0 * x + 1.0) / (r + 1.0 / r)
    a2 = a * a
    trace_term = (4.0 * a2 + 1.0) / e2 + 2.0 * e2 / one ** 2
    pref = r / (e2 * (1.0 - nb * (nb + 1.0) * (4.0 * a2 - 1.0) * one ** 2))
    num1 = one * nb * (nb + 1.0) * (4.0 * a2 * one + e2 + 1.0) ** 2 \
        * (4.0 * a2 * (1.0 + 2.0 * nb) ** 2 - 1.0)
    den1 = 2.0 * a * e2 * (1.0 + r * r) * (1.0 + 2.0 * nb) \
        + r * (one * (4.0 * a2 * (1.0 + 2.0 * nb) ** 2 - 1.0) - 2.0 * e2)
    if num1 == 0.0 and den1 == 0.0:
        # the fraction carries a factor N_B(N_B+1) and vanishes identically;
        # its denominator hits zero too at a = 1/2, r = 1, N_B = 0
        den1 = 1.0
    num2 = (one * (4.0 * a2 + 1.0) * (2.0 * nb ** 2 + 2.0 * nb + 1.0)
            + 2.0 * e2 / one) ** 2 - 16.0 * a2 * e2 ** 2 * (2.0 * nb + 1.0) ** 2
    den2 = 2.0 * a * e2 * (1.0 + r * r) * (1.0 + 2.0 * nb) * one \
        + r * (one ** 2 * (4.0 * a2 + 1.0) * (2.0 * nb ** 2 + 2.0 * nb + 1.0) + 2.0 * e2)
    trace_term += pref * (num1 / den1 - num2 / den2)
    disp_term = 8.0 * n_coh * a * (
        np.cos(theta) ** 2 / (2.0 * a * one * (1.0 + 2.0 * nb) + r * e2)
        + np.sin(theta) ** 2 / (2.0 * a * one * (1.0 + 2.0 * nb) + e2 / r))
    return trace_term + disp_term


def qfi_two_mode_closed(probe: TwoModeProbe, p: ChannelParams) -> float:
    """Closed-form QFI of a canonical two-mode probe (bare channel, eta > 0).

    Independent of the probe's `phi`.  For the normalized model or eta = 0 use
    :func:`qfi_sld` on the built state.
    """
    if p.normalized and p.n_b > 0:
        raise ValueError("closed form covers the bare channel only; use qfi_sld")
    _check_eta(p)
    if p.eta == 0.0:
        raise ValueError("closed form is indeterminate at eta = 0; use qfi_sld")
    return float(_two_mode_closed_raw(probe.n_s, probe.zeta, probe.r,
                                      probe.theta, p.eta, p.n_b))


# ---------------------------------------------------------------------------
# homodyne detection and rate estimation
# ---------------------------------------------------------------------------

def homodyne_fisher(n_coh: float, r: float, p: ChannelParams) -> float:
    """Classical Fisher information of in-phase homodyne on a probe (n_coh, r).

    The measured quadrature is Gaussian with mean ``eta sqrt(2 n_coh)`` and
    variance ``eta^2 r/2 + y(eta)``, so
    ``H = (dm)^2 / V + (dV)^2 / (2 V^2)``.
    """
    if not 0.0 < r <= 1.0:
        raise ValueError("r must lie in (0, 1]")
    if n_coh < 0:
        raise ValueError("n_coh must be non-negative")
    var = 0.5 * p.eta ** 2 * r + additive_noise(p)
    dvar = p.eta * r + additive_noise_derivative(p)
    dmean_sq = 2.0 * n_coh
    return float(dmean_sq / var + 0.5 * dvar ** 2 / var ** 2)


def qfi_gamma(gamma: float, t: float, probe: GaussianState,
              p_base: ChannelParams) -> float:
    """QFI for estimating the loss rate gamma after interrogation time t.

    Chain rule on eta = exp(-gamma t / 2):
    ``I_gamma = (t^2/4) exp(-gamma t) I_eta(eta)``.  Returns 0 at t = 0, where
    the prefactor vanishes.
    """
    if t == 0.0:
        return 0.0
    eta = gamma_to_eta(gamma, t)
    i_eta = qfi_sld(probe, replace(p_base, eta=eta))
    return float(0.25 * t ** 2 * math.exp(-gamma * t) * i_eta)
