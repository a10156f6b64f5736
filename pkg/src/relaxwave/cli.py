"""Command-line surface: profile/rarefaction dumps, simulate, verify."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import RunConfig
from .profiles import build_shock_profile, rarefaction_exact, rarefaction_smooth
from .runner import run_simulate, run_verify


def _load_config(args) -> RunConfig:
    rc = RunConfig.load(args.config) if args.config else RunConfig()
    if getattr(args, "override", None):
        rc.apply_overrides(args.override)
    return rc


def _add_common(sub):
    sub.add_argument("--config", type=Path, default=None,
                     help="TOML run configuration (defaults are built in)")
    sub.add_argument("--out", type=Path, default=None,
                     help="output directory (default: [output].directory)")
    sub.add_argument("--override", action="append", default=[],
                     metavar="SECTION.KEY=VALUE",
                     help="config override, repeatable")


def cmd_profile(args) -> int:
    rc = _load_config(args)
    rc.validate()
    cfg = rc.wave_config()
    profile = build_shock_profile(cfg, rc.profile.n_table, rc.profile.u_clearance)
    out_dir = Path(args.out if args.out else rc.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "profile.csv"
    u_xi = profile.slope_of_u(profile.u)
    q = profile.q_of_u(profile.u)
    q_xi = profile.q_xi_of_u(profile.u)
    with open(path, "w") as fh:
        fh.write("xi,uS,uS_xi,qS,qS_xi\n")
        for row in zip(profile.xi, profile.u, u_xi, q, q_xi):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    print(f"wrote {path} ({profile.u.size} rows, "
          f"xi in [{profile.trunc_left:.3g}, {profile.trunc_right:.3g}])")
    return 0


def cmd_rarefaction(args) -> int:
    rc = _load_config(args)
    rc.validate()
    cfg = rc.wave_config()
    times = [float(t) for t in args.times.split(",")]
    out_dir = Path(args.out if args.out else rc.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "rarefaction.csv"
    lam_minus = 3.0 * cfg.u_m**2
    lam_plus = 3.0 * cfg.u_plus**2
    with open(path, "w") as fh:
        fh.write("t,x,uR,uR_x,u_fan\n")
        for t in times:
            x = np.linspace(lam_minus * t - 20.0, lam_plus * t + 20.0, args.n)
            ev = rarefaction_smooth(max(t, 0.0), x, cfg, derivs_up_to=1)
            fan = (rarefaction_exact(t, x, cfg) if t > 0
                   else np.full_like(x, np.nan))
            for row in zip(x, ev.u, ev.du_dx, fan):
                fh.write(f"{t:.17g}," + ",".join(f"{v:.17g}" for v in row) + "\n")
    print(f"wrote {path}")
    return 0


def cmd_simulate(args) -> int:
    rc = _load_config(args)
    try:
        summary = run_simulate(rc, out_dir=args.out)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    status = "ok" if summary["hard_pass"] else "FAILED"
    print(f"simulate: {status}")
    for name, chk in summary["checks"].items():
        if isinstance(chk, dict) and "passed" in chk:
            print(f"  {name}: {'pass' if chk['passed'] else 'FAIL'}")
    return 0 if summary["hard_pass"] else 1


def cmd_verify(args) -> int:
    rc = _load_config(args)
    try:
        report = run_verify(rc, out_dir=args.out or rc.output.directory,
                            jobs=args.jobs)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    for name, chk in report["checks"].items():
        status = chk.get("status", "")
        flag = "pass" if chk.get("passed") else "FAIL"
        print(f"  {name}: {flag}{' (' + status + ')' if status else ''}")
    print(f"verify: {'ok' if report['passed'] else 'FAILED'}")
    return 0 if report["passed"] else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="relaxwave",
        description="Composite-wave lab for the cubic conservation law "
                    "with Cattaneo heat flux")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("profile", help="dump the shock-profile table as CSV")
    _add_common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("rarefaction", help="dump smooth-rarefaction samples")
    _add_common(p)
    p.add_argument("--times", default="1,10,100", help="comma-separated times")
    p.add_argument("--n", type=int, default=1001, help="samples per time")
    p.set_defaults(func=cmd_rarefaction)

    p = sub.add_parser("simulate", help="run the configured scenario")
    _add_common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the simulation-free checks")
    _add_common(p)
    p.add_argument("--jobs", type=int, default=1,
                   help="run independent checks concurrently")
    p.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
