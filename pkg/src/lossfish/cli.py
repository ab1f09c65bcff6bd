"""Deterministic parameter-sweep command line.

Subcommands
-----------
qfi            single-point QFI by any route
sweep-xi       optimal squeezed fraction over an (N_S, eta) grid
sweep-twomode  two-mode QFI over the (zeta, r) plane, with argmax and markers
sweep-total    bandwidth-optimized total QFI over a (total N_S, eta) grid
advantage      TMSV / coherent QFI ratio over an (eta, N_S) grid
hypothesis     discrimination error bounds for an (eta_plus, eta_minus) pair

Numbers are printed with 12 significant digits, '.' decimal separator and
'\\n' line endings, header row first; identical invocations produce
byte-identical output.  JSON output mirrors the CSV column names as keys with
the same formatted values.  Grids are given as ``min:max:points`` (append
``:log`` for logarithmic spacing) or as a comma-separated list.

Exit codes: 0 success, 2 invalid arguments or parameters, 3 numerical failure.
The environment variable LOSSFISH_THREADS caps worker parallelism; this
implementation evaluates sweeps sequentially, which respects any cap.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from .channel import ChannelParams
from .errors import LossfishError, SingularSystem
from .hypotest import (HypothesisSpec, fidelity_error_bound, qfi_error_approx,
                       threshold_strategy_error)
from .optimize import (FAMILY_COHERENT, FAMILY_IDLER_FREE, FAMILY_TMSV,
                       _two_mode_grid_qfi, advantage_ratio, optimize_bandwidth,
                       optimize_xi, total_qfi)
from .probes import (SingleModeProbe, TwoModeProbe, build_single_mode,
                     build_two_mode, tmsv, two_mode_r_min)
from .qfi import qfi_fidelity_fd, qfi_if_closed, qfi_sld, qfi_tmsv, qfi_two_mode_closed


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    v = float(value)
    if math.isinf(v):
        return "inf"
    return format(v, ".12g")


def parse_grid(spec: str) -> np.ndarray:
    """Parse 'min:max:points[:log]', a comma list, or a single number."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"bad grid spec {spec!r}: want min:max:points[:log]")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 2:
            raise ValueError("grid needs at least 2 points")
        if not lo < hi:
            raise ValueError("grid needs min < max")
        if len(parts) == 4:
            if parts[3] != "log":
                raise ValueError(f"unknown grid scale {parts[3]!r}")
            if lo <= 0:
                raise ValueError("log scale requires min > 0")
            return np.geomspace(lo, hi, n)
        return np.linspace(lo, hi, n)
    if "," in spec:
        return np.array([float(x) for x in spec.split(",")])
    return np.array([float(spec)])


def _channel(args, eta=None) -> ChannelParams:
    return ChannelParams(eta=float(args.eta if eta is None else eta),
                         n_b=args.nb, normalized=args.normalized)


def _build_probe_state(args):
    kind = args.probe
    if kind == "coherent":
        return build_single_mode(SingleModeProbe(args.ns, 0.0, args.theta))
    if kind == "sq":
        return build_single_mode(SingleModeProbe(args.ns, 1.0))
    if kind == "dsq":
        if args.xi is None:
            raise ValueError("--xi is required for probe 'dsq'")
        return build_single_mode(SingleModeProbe(args.ns, args.xi, args.theta))
    if kind == "tmsv":
        return tmsv(args.ns)
    if kind == "twomode":
        if args.zeta is None or args.r is None:
            raise ValueError("--zeta and --r are required for probe 'twomode'")
        return build_two_mode(TwoModeProbe(args.ns, args.zeta, args.r,
                                           args.theta, args.phi))
    raise ValueError(f"unknown probe {kind!r}")


def _closed_form_qfi(args, p: ChannelParams) -> float:
    if args.probe == "coherent":
        return qfi_if_closed(args.ns, 0.0, p).total
    if args.probe == "sq":
        return qfi_if_closed(0.0, args.ns, p).total
    if args.probe == "dsq":
        if args.xi is None:
            raise ValueError("--xi is required for probe 'dsq'")
        return qfi_if_closed((1.0 - args.xi) * args.ns, args.xi * args.ns, p).total
    if args.probe == "tmsv":
        return qfi_tmsv(args.ns, p)
    if args.probe == "twomode":
        if args.zeta is None or args.r is None:
            raise ValueError("--zeta and --r are required for probe 'twomode'")
        return qfi_two_mode_closed(
            TwoModeProbe(args.ns, args.zeta, args.r, args.theta, args.phi), p)
    raise ValueError(f"unknown probe {args.probe!r}")


def _cmd_qfi(args):
    p = _channel(args)
    if args.route == "closed":
        value = _closed_form_qfi(args, p)
    elif args.route == "sld":
        value = qfi_sld(_build_probe_state(args), p)
    else:
        value = qfi_fidelity_fd(_build_probe_state(args), p)
    header = ["eta", "nb", "probe", "ns", "route", "qfi"]
    return header, [[p.eta, p.n_b, args.probe, args.ns, args.route, value]]


def _cmd_sweep_xi(args):
    header = ["ns", "eta", "xi_opt", "qfi_opt", "boundary"]
    rows = []
    for ns in parse_grid(args.ns_grid):
        for eta in parse_grid(args.eta_grid):
            res = optimize_xi(float(ns), _channel(args, eta))
            rows.append([ns, eta, res.xi_opt, res.qfi_opt, res.boundary])
    return header, rows


def _parse_2d_grid(spec: str):
    try:
        nz, nr = (int(x) for x in spec.lower().split("x"))
    except ValueError:
        raise ValueError(f"bad grid {spec!r}: want NxM, e.g. 64x64") from None
    return nz, nr


def _cmd_sweep_twomode(args):
    p = _channel(args)
    nz, nr = _parse_2d_grid(args.grid)
    if nz < 32 or nr < 32:
        raise ValueError("grid must be at least 32x32")
    zetas = np.linspace(0.0, 1.0, nz)
    r_grid = np.stack([np.geomspace(two_mode_r_min(args.ns, z), 1.0, nr)
                       for z in zetas])
    qfi = _two_mode_grid_qfi(args.ns, zetas, r_grid, p)
    header = ["zeta", "r", "qfi"]
    rows = []
    best = (-math.inf, 0.0, 0.0)
    for iz, z in enumerate(zetas):
        for ir in range(nr):
            q = qfi[iz, ir]
            rows.append([z, r_grid[iz, ir], q])
            if q >= best[0]:
                best = (q, z, r_grid[iz, ir])
    rows.append([best[1], best[2], best[0]])  # argmax summary
    # reference markers: coherent, squeezed vacuum, TMSV
    for z, r in ((0.0, 1.0), (1.0, two_mode_r_min(args.ns, 1.0)), (1.0, 1.0)):
        q = _two_mode_grid_qfi(args.ns, np.array([z]), np.array([[r]]), p)[0, 0]
        rows.append([z, r, q])
    return header, rows


def _cmd_sweep_total(args):
    if args.nb > 0 and not args.normalized:
        raise ValueError("total QFI diverges for the bare thermal channel; "
                         "use --nb 0 or --normalized")
    header = ["total_ns", "eta", "m_opt", "xi_opt", "total_qfi",
              "ratio_vs_coherent", "ratio_vs_tmsv"]
    rows = []
    for tns in parse_grid(args.total_ns_grid):
        for eta in parse_grid(args.eta_grid):
            p = _channel(args, eta)
            plan = optimize_bandwidth(float(tns), p, FAMILY_IDLER_FREE)
            coh = total_qfi(float(tns), 1.0, p, FAMILY_COHERENT)
            best_tmsv = optimize_bandwidth(float(tns), p, FAMILY_TMSV).total_qfi
            rows.append([tns, eta, plan.m, plan.xi_opt, plan.total_qfi,
                         plan.total_qfi / coh, plan.total_qfi / best_tmsv])
    return header, rows


def _cmd_advantage(args):
    header = ["eta", "ns", "ratio_tmsv_coh"]
    rows = []
    for eta in parse_grid(args.eta_grid):
        for ns in parse_grid(args.ns_grid):
            ratio = advantage_ratio(FAMILY_TMSV, FAMILY_COHERENT,
                                    _channel(args, eta), float(ns))
            rows.append([eta, ns, ratio])
    return header, rows


def _cmd_hypothesis(args):
    state = _build_probe_state(args)
    base = ChannelParams(eta=args.eta_plus, n_b=args.nb, normalized=args.normalized)
    spec = HypothesisSpec(eta_plus=args.eta_plus, eta_minus=args.eta_minus,
                          m=args.m, probe=state, channel_base=base)
    fid_bound = fidelity_error_bound(spec)
    mid = 0.5 * (args.eta_plus + args.eta_minus)
    i_mid = qfi_sld(state, ChannelParams(mid, args.nb, args.normalized))
    approx = qfi_error_approx(spec.d_eta, args.m, i_mid)
    thresh = threshold_strategy_error(spec.d_eta, args.m, i_mid)
    header = ["eta_plus", "eta_minus", "m", "fid_bound", "qfi_approx",
              "threshold_approx"]
    return header, [[args.eta_plus, args.eta_minus, float(args.m),
                     fid_bound, approx, thresh]]


def _render(header, rows, fmt: str) -> str:
    if fmt == "json":
        payload = [{k: _fmt(v) for k, v in zip(header, row)} for row in rows]
        return json.dumps(payload, indent=2) + "\n"
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _thread_cap() -> int:
    raw = os.environ.get("LOSSFISH_THREADS")
    if raw is None:
        return 1
    try:
        cap = max(1, int(raw))
    except ValueError:
        print(f"warning: ignoring non-integer LOSSFISH_THREADS={raw!r}",
              file=sys.stderr)
        return 1
    return cap


def _add_common(sub):
    sub.add_argument("--out", default=None, help="write output to this path")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--normalized", action="store_true",
                     help="hold the background at N_B/(1-eta^2)")


def _add_probe_flags(sub):
    sub.add_argument("--probe", required=True,
                     choices=("coherent", "sq", "dsq", "tmsv", "twomode"))
    sub.add_argument("--ns", type=float, required=True,
                     help="signal photons per mode")
    sub.add_argument("--xi", type=float, default=None)
    sub.add_argument("--zeta", type=float, default=None)
    sub.add_argument("--r", type=float, default=None)
    sub.add_argument("--theta", type=float, default=0.0)
    sub.add_argument("--phi", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lossfish",
        description="QFI of the thermal-loss channel with Gaussian probes")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("qfi", help="single-point QFI")
    s.add_argument("--eta", type=float, required=True)
    s.add_argument("--nb", type=float, default=0.0)
    _add_probe_flags(s)
    s.add_argument("--route", choices=("sld", "closed", "fidelity"),
                   default="closed")
    _add_common(s)
    s.set_defaults(handler=_cmd_qfi)

    s = subs.add_parser("sweep-xi", help="optimal xi over an (N_S, eta) grid")
    s.add_argument("--ns-grid", required=True)
    s.add_argument("--eta-grid", required=True)
    s.add_argument("--nb", type=float, default=0.0)
    _add_common(s)
    s.set_defaults(handler=_cmd_sweep_xi)

    s = subs.add_parser("sweep-twomode",
                        help="two-mode QFI over the (zeta, r) plane; grid rows, "
                             "then argmax, then coherent/squeezed/TMSV markers")
    s.add_argument("--ns", type=float, required=True)
    s.add_argument("--eta", type=float, required=True)
    s.add_argument("--nb", type=float, default=0.0)
    s.add_argument("--grid", default="64x64")
    _add_common(s)
    s.set_defaults(handler=_cmd_sweep_twomode)

    s = subs.add_parser("sweep-total",
                        help="bandwidth-optimized total QFI (N_B = 0 or normalized)")
    s.add_argument("--total-ns-grid", required=True)
    s.add_argument("--eta-grid", required=True)
    s.add_argument("--nb", type=float, default=0.0)
    _add_common(s)
    s.set_defaults(handler=_cmd_sweep_total)

    s = subs.add_parser("advantage", help="TMSV / coherent QFI ratio grid")
    s.add_argument("--eta-grid", required=True)
    s.add_argument("--ns-grid", required=True)
    s.add_argument("--nb", type=float, default=0.0)
    _add_common(s)
    s.set_defaults(handler=_cmd_advantage)

    s = subs.add_parser("hypothesis", help="discrimination error bounds")
    s.add_argument("--eta-plus", type=float, required=True)
    s.add_argument("--eta-minus", type=float, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--nb", type=float, default=0.0)
    _add_probe_flags(s)
    _add_common(s)
    s.set_defaults(handler=_cmd_hypothesis)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    _thread_cap()
    try:
        header, rows = args.handler(args)
    except SingularSystem as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (LossfishError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = _render(header, rows, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
