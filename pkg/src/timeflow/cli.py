"""Command-line front end.

Every experiment is a subcommand writing a CSV or JSON artifact and
printing a one-line summary.  Exit codes: 0 success, 1 validation error,
2 numerical-contract violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import bell, dilation, fock, phase, polarizer
from .errors import NumericsError, ValidationError

FLOAT_FMT = "{:.17g}"


def _fmt(x: float) -> str:
    return FLOAT_FMT.format(float(x))


def _jsonable(obj):
    """Round floats through 17 significant digits for stable artifacts."""
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(_fmt(obj))
    return obj


def _write_json(path: str, payload: dict):
    with open(path, "w") as fh:
        json.dump(_jsonable(payload), fh, indent=2)
        fh.write("\n")


def _write_csv(path: str, header: list[str], rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([c if isinstance(c, str) else _fmt(c) for c in row])


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; we reserve 2 for numerics
        raise ValidationError(message)


def _cmd_fock_check(args) -> str:
    basis = fock.FockBasis(args.dim)
    a, adag, _n = fock.ladder_operators(basis)
    H = fock.oscillator_hamiltonian(basis, args.omega)
    comm = fock.commutator(a, adag).matrix - np.eye(args.dim)
    edge_value = comm[args.dim - 1, args.dim - 1].real
    off_edge = comm.copy()
    off_edge[args.dim - 1, args.dim - 1] = 0.0
    ladder = fock.commutator(H, a).matrix + args.omega * a.matrix
    interior = slice(0, args.dim - 2)
    payload = {
        "dim": args.dim,
        "omega": args.omega,
        "commutation_defect_index": args.dim - 1,
        "commutation_defect_value": edge_value,
        "max_off_defect_error": float(np.max(np.abs(off_edge))),
        "max_ladder_commutator_error": float(np.max(np.abs(ladder[interior, interior]))),
    }
    _write_json(args.output, payload)
    return (
        f"fock-check dim={args.dim}: [a,a+]-I defect {edge_value:g} at level "
        f"{args.dim - 1}, off-defect error {payload['max_off_defect_error']:.3e}"
    )


def _cmd_phase_defect(args) -> str:
    basis = fock.FockBasis(args.dim)
    report = phase.isometry_defect(phase.sg_phase_operator(basis))
    dbasis = phase.DoubledBasis(args.dim)
    ext = phase.isometry_defect(phase.extended_phase_operator(dbasis))
    payload = {
        "dim": args.dim,
        "sg_defect_norm": report.norm,
        "sg_defect_rank": report.rank,
        "sg_defect_support": list(report.support),
        "extended_half_dim": args.dim,
        "extended_defect_norm": ext.norm,
    }
    _write_json(args.output, payload)
    return (
        f"phase-defect dim={args.dim}: rank {report.rank} at {list(report.support)}, "
        f"norm {report.norm:g}; extended defect {ext.norm:.3e}"
    )


def _cmd_phase_evolve(args) -> str:
    dbasis = phase.DoubledBasis(args.half_dim)
    psi0 = phase.coherent_like_state(dbasis, args.alpha, args.subspace)
    times = np.linspace(0.0, args.t_max, args.steps)
    traj = phase.phase_trajectory(dbasis, args.omega, psi0, times)
    rows = [(t, ph, traj.subspace_label) for t, ph in zip(traj.times, traj.phase_values)]
    _write_csv(args.output, ["t", "phase", "subspace"], rows)
    return (
        f"phase-evolve {traj.subspace_label} half_dim={args.half_dim}: "
        f"fitted slope {traj.fit_slope():.6g} (omega={args.omega})"
    )


def _cmd_dilation_trace(args) -> str:
    grid = dilation.SpatialGrid(args.n_points, args.extent, args.mass)
    packet = dilation.gaussian_packet(grid, args.q0, args.p0, args.sigma)
    times = np.linspace(0.0, args.t_max, args.steps)
    rec = dilation.trace_trajectory(packet, times, args.window)
    rows = [
        (t, r, h, q, p, label)
        for t, r, h, q, p, label in zip(
            rec.times, rec.r_values, rec.h_values, rec.q_values, rec.p_values, rec.labels
        )
    ]
    _write_csv(args.output, ["t", "r", "h", "q", "p", "label"], rows)
    return (
        f"dilation-trace: <R> {rec.r_values[0]:.6g} -> {rec.r_values[-1]:.6g}, "
        f"labels {rec.labels[0]} -> {rec.labels[-1]}"
    )


def _parse_coeffs(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"bad coefficient list {text!r}") from exc


def _profile_from_args(args) -> polarizer.TransmissionProfile:
    if args.coeffs is not None:
        return polarizer.TransmissionProfile.from_fourier(_parse_coeffs(args.coeffs), args.grid_size)
    return polarizer.belinfante_profile(args.grid_size)


def _cmd_polarizer_curve(args) -> str:
    profile = _profile_from_args(args)
    alphas = polarizer.default_alpha_grid(args.alpha_count)
    report = polarizer.curve_report(profile, args.epsilon, alphas)
    rows = zip(report.alphas, report.m_values, report.malus_values, report.residuals)
    _write_csv(args.output, ["alpha", "m", "malus", "residual"], rows)
    return (
        f"polarizer-curve epsilon={args.epsilon}: max |malus - m| "
        f"{np.max(np.abs(report.residuals)):.6g} over {args.alpha_count} angles"
    )


def _cmd_polarizer_fit(args) -> str:
    result = polarizer.fit_profile(
        args.epsilon, args.modes, grid_size=args.grid_size,
        max_iter=args.max_iter, tol=args.tol,
    )
    payload = {
        "epsilon": args.epsilon,
        "n_modes": args.modes,
        "grid_size": args.grid_size,
        "coefficients": list(result.coefficients),
        "rms_residual": result.rms_residual,
        "max_residual": result.max_residual,
        "iterations": result.iterations,
        "converged": result.converged,
        "profile_min": float(np.min(result.profile.samples)),
        "profile_max": float(np.max(result.profile.samples)),
        "objective_history": list(result.objective_history),
    }
    _write_json(args.output, payload)
    report = polarizer.curve_report(result.profile, args.epsilon)
    rows = zip(report.alphas, report.m_values, report.malus_values, report.residuals)
    _write_csv(args.curve_output, ["alpha", "m", "malus", "residual"], rows)
    return (
        f"polarizer-fit epsilon={args.epsilon} modes={args.modes}: rms "
        f"{result.rms_residual:.6g} after {result.iterations} iterations "
        f"(converged={result.converged})"
    )


def _cmd_bell_chsh(args) -> str:
    setting = bell.ChshSetting(*_parse_coeffs(args.angles)) if args.angles else bell.CANONICAL_SETTING
    if args.model == "qm":
        correlation = bell.qm_correlation
    else:
        profile = _profile_from_args(args)
        if args.mc_events:
            def correlation(x, y, _c=[0]):
                _c[0] += 1
                return bell.mc_simulate(profile, x, y, args.mc_events, args.seed + _c[0])
        else:
            def correlation(x, y):
                return bell.hv_correlation(profile, x, y)
    pairs = {
        "ab": correlation(setting.a, setting.b),
        "ab_prime": correlation(setting.a, setting.b_prime),
        "a_prime_b": correlation(setting.a_prime, setting.b),
        "a_prime_b_prime": correlation(setting.a_prime, setting.b_prime),
    }
    s = bell.chsh(pairs["ab"], pairs["ab_prime"], pairs["a_prime_b"], pairs["a_prime_b_prime"])
    payload = {
        "model": args.model,
        "angles": {
            "a": setting.a, "a_prime": setting.a_prime,
            "b": setting.b, "b_prime": setting.b_prime,
        },
        "correlations": {
            key: {"value": est.value, "std_error": est.std_error, "n_events": est.n_events}
            for key, est in pairs.items()
        },
        "s": s,
        "seed": args.seed if args.mc_events else None,
    }
    _write_json(args.output, payload)
    return f"bell-chsh model={args.model}: S = {s:.7f}"


def _cmd_bell_sweep(args) -> str:
    result = bell.local_bound_sweep(args.profiles, args.modes, args.seed)
    payload = {
        "n_profiles": result.n_profiles,
        "n_modes": result.n_modes,
        "seed": result.seed,
        "max_abs_s": result.max_abs_s,
        "local_bound": 2.0,
    }
    _write_json(args.output, payload)
    return (
        f"bell-sweep {args.profiles} profiles: max |S| = {result.max_abs_s:.6f} "
        f"(bound 2)"
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="timeflow", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fock-check", help="truncated ladder-operator identities")
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--output", default="fock-check.json")
    p.set_defaults(func=_cmd_fock_check)

    p = sub.add_parser("phase-defect", help="isometry defect of the phase operator")
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--output", default="phase-defect.json")
    p.set_defaults(func=_cmd_phase_defect)

    p = sub.add_parser("phase-evolve", help="phase trajectory on the doubled space")
    p.add_argument("--half-dim", type=int, default=48)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--subspace", choices=["plus", "minus"], default="plus")
    p.add_argument("--t-max", type=float, default=2.0 * np.pi)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--output", default="phase-evolve.csv")
    p.set_defaults(func=_cmd_phase_evolve)

    p = sub.add_parser("dilation-trace", help="free wavepacket <R> trajectory")
    p.add_argument("--n-points", type=int, default=4096)
    p.add_argument("--extent", type=float, default=100.0)
    p.add_argument("--mass", type=float, default=1.0)
    p.add_argument("--q0", type=float, default=-20.0)
    p.add_argument("--p0", type=float, default=2.0)
    p.add_argument("--sigma", type=float, default=2.0)
    p.add_argument("--t-max", type=float, default=25.0)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--window", type=float, default=5.0)
    p.add_argument("--output", default="dilation-trace.csv")
    p.set_defaults(func=_cmd_dilation_trace)

    p = sub.add_parser("polarizer-curve", help="pair transmission versus Malus")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--grid-size", type=int, default=polarizer.DEFAULT_GRID_SIZE)
    p.add_argument("--coeffs", default=None, help="profile cosine coefficients, comma separated")
    p.add_argument("--alpha-count", type=int, default=polarizer.DEFAULT_ALPHA_COUNT)
    p.add_argument("--output", default="polarizer-curve.csv")
    p.set_defaults(func=_cmd_polarizer_curve)

    p = sub.add_parser("polarizer-fit", help="box-constrained Malus profile fit")
    p.add_argument("--epsilon", type=float, default=0.02)
    p.add_argument("--modes", type=int, default=6)
    p.add_argument("--grid-size", type=int, default=polarizer.DEFAULT_GRID_SIZE)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--output", default="polarizer-fit.json")
    p.add_argument("--curve-output", default="polarizer-fit-curve.csv")
    p.set_defaults(func=_cmd_polarizer_fit)

    p = sub.add_parser("bell-chsh", help="CHSH value for a model")
    p.add_argument("--model", choices=["qm", "hv"], default="qm")
    p.add_argument("--coeffs", default=None, help="hv profile cosine coefficients")
    p.add_argument("--grid-size", type=int, default=polarizer.DEFAULT_GRID_SIZE)
    p.add_argument("--angles", default=None, help="a,a',b,b' in radians")
    p.add_argument("--mc-events", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="bell-chsh.json")
    p.set_defaults(func=_cmd_bell_chsh)

    p = sub.add_parser("bell-sweep", help="max |S| over random admissible profiles")
    p.add_argument("--profiles", type=int, default=1000)
    p.add_argument("--modes", type=int, default=8)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--output", default="bell-sweep.json")
    p.set_defaults(func=_cmd_bell_sweep)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        summary = args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return 2
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
