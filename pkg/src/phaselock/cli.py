"""Command-line front end: run scans and write CSV / JSON artifacts.

Exit codes: 0 success, 2 invalid arguments, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from fractions import Fraction

import numpy as np

from . import arith, dynamics, entangle, galois, locking, qphase
from .table import ScanResult

log = logging.getLogger("phaselock")


class UsageError(ValueError):
    pass


def _fraction_list(text: str) -> list[Fraction]:
    try:
        return [Fraction(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


# -- subcommands -------------------------------------------------------------


def cmd_spectrum(args) -> ScanResult:
    cfg = locking.FilterConfig(args.f0, args.fc)
    basins = locking.spectrum_scan(cfg, args.qmax, (args.lo, args.hi))
    out = ScanResult(locking.BASIN_COLUMNS, meta={"f0": args.f0, "fc": args.fc, "qmax": args.qmax})
    for b in basins:
        out.add(*b.csv_row())
    return out


def cmd_adler(args) -> ScanResult:
    p = dynamics.AdlerParams(args.omega_lf, args.K, args.phi0)
    ts, rate = dynamics.adler_integrate(p, args.t_end, args.dt)
    beat = dynamics.beat_frequency(args.omega_lf, args.K)
    out = ScanResult(("t", "value"), meta={
        "mean_rate": rate,
        "beat_frequency": beat.rate,
        "locked": beat.locked,
        "final_phase_wrapped": dynamics.wrap_phase(float(ts.samples[-1])),
        "steady_state": math.asin(args.omega_lf / args.K) if beat.locked else None,
    })
    for t, v in zip(ts.times[:: args.every], ts.samples[:: args.every]):
        out.add(float(t), float(v))
    return out


def cmd_vdp(args) -> ScanResult:
    p = dynamics.VdpParams(args.g, args.beta_prime, args.omega, args.omega0, args.V0)
    ts = dynamics.vanderpol_integrate(p, args.t_end, args.dt)
    tail = ts.samples[len(ts) // 2 :]
    meta = {"dominant_frequency": dynamics.dominant_frequency(ts), "amplitude": float(np.max(np.abs(tail)))}
    if args.g > 0 and args.beta_prime > 0:
        meta["limit_cycle_amplitude"] = 2 * math.sqrt(args.g / (3 * args.beta_prime))
    out = ScanResult(("t", "value"), meta=meta)
    for t, v in zip(ts.times[:: args.every], ts.samples[:: args.every]):
        out.add(float(t), float(v))
    return out


def cmd_arnold(args) -> ScanResult:
    grid = np.linspace(args.omega_min, args.omega_max, args.n)
    scan = dynamics.staircase_scan(args.c, grid, args.plateaus, n_iter=args.n_iter)
    plateaus = {str(r): (None if e is None else list(e)) for r, e in scan.plateaus.items()}
    out = ScanResult(("Omega", "winding"), meta={"c": args.c, "plateaus": plateaus})
    for om, w in scan.rows():
        out.add(om, w)
    return out


def cmd_allan(args) -> ScanResult:
    ts = dynamics.synth_one_over_f(args.n, args.seed, args.exponent)
    n_max = len(ts) // (args.min_pairs + 1)
    taus = np.unique(np.round(np.logspace(0, math.log10(n_max), args.points)))
    curve = dynamics.allan_deviation(ts, taus, min_pairs=args.min_pairs)
    out = ScanResult(("tau", "sigma"), meta={
        "seed": args.seed,
        "exponent": args.exponent,
        "n": args.n,
        "loglog_slope": dynamics.loglog_slope(curve.taus, curve.sigmas),
    })
    for tau, sigma in zip(curve.taus, curve.sigmas):
        out.add(float(tau), float(sigma))
    return out


def cmd_arith_table(args) -> ScanResult:
    M = arith.mertens_table(args.nmax)
    out = ScanResult(("n", "phi", "mu", "mangoldt", "b", "mertens"))
    for n in range(1, args.nmax + 1):
        out.add(n, arith.euler_phi(n), arith.moebius(n), arith.mangoldt(n), arith.mangoldt_dual_b(n), int(M[n]))
    return out


def cmd_fig2(args) -> ScanResult:
    out = ScanResult(("q", "beta", "expec_direct", "expec_closed", "mangoldt_norm"), meta={"beta": args.beta})
    for q in range(2, args.qmax + 1):
        out.add(
            q,
            args.beta,
            qphase.lock_expectation_direct(q, args.beta),
            qphase.lock_expectation_closed(q, args.beta),
            qphase.mangoldt_norm(q),
        )
    return out


def cmd_kms(args) -> ScanResult:
    if args.beta0 <= 1:
        raise UsageError("--beta0 must exceed 1")
    eps = args.beta0 - 1.0
    out = ScanResult(("q", "beta0", "kms", "mu_over_phi", "neg_lambda_eps_over_q"))
    for q in range(1, args.qmax + 1):
        low, slope = qphase.kms_limits(q)
        out.add(q, args.beta0, qphase.kms_value(q, args.beta0), low, slope * eps)
    return out


def cmd_mub(args) -> ScanResult:
    F = galois.field_create(args.p, args.m)
    report = galois.mub_verify(F)
    summary = report.as_dict()
    out = ScanResult(tuple(summary), meta={"field": F.metadata(), "report": summary})
    out.add(*summary.values())
    return out


def cmd_gauss(args) -> ScanResult:
    psi = galois.CharacterSpec("multiplicative", args.psi_k)
    if args.table == "T":
        out = ScanResult(("p", "k", "re_T", "im_T", "abs_T", "bound"), meta={"a": args.a, "psi_k": args.psi_k})
        for k in range(-(args.p - 1), args.p):
            r = galois.gauss_T(args.p, args.a, psi, k)
            out.add(args.p, k, r.value.real, r.value.imag, abs(r.value), r.bound)
        return out
    out = ScanResult(("p", "a", "b", "psi_k", "beta", "S_direct", "S_decomp"))
    for beta in np.linspace(0.0, 2 * math.pi, args.n_beta, endpoint=False):
        direct, decomp = galois.phase_prob(args.p, args.a, psi, float(beta))
        for b in range(args.p):
            out.add(args.p, args.a, b, args.psi_k, float(beta), float(direct[b]), float(decomp[b]))
    return out


def cmd_bell(args) -> ScanResult:
    if args.family == "fourier":
        report = entangle.verify_entangled_bases(args.q, "fourier")
    else:
        report = entangle.verify_entangled_bases(galois.field_create(args.p, args.m), "galois")
    out = ScanResult(entangle.ENTANGLE_COLUMNS, meta=report.summary())
    for row in report.rows:
        out.add(*row)
    return out


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default="-", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = argparse.ArgumentParser(prog="phaselock", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("spectrum", cmd_spectrum, "locking basins of a mixer + low-pass receiver")
    sp.add_argument("--f0", type=float, default=1e7)
    sp.add_argument("--fc", type=float, default=3e5)
    sp.add_argument("--qmax", type=_positive_int, default=10)
    sp.add_argument("--lo", type=Fraction, default=Fraction(0))
    sp.add_argument("--hi", type=Fraction, default=Fraction(1))

    sp = add("adler", cmd_adler, "integrate the Adler phase equation")
    sp.add_argument("--omega-lf", type=float, default=2.0)
    sp.add_argument("--K", type=float, default=1.0)
    sp.add_argument("--phi0", type=float, default=0.0)
    sp.add_argument("--t-end", type=float, default=200.0)
    sp.add_argument("--dt", type=float, default=0.01)
    sp.add_argument("--every", type=_positive_int, default=10, help="keep every n-th sample")

    sp = add("vdp", cmd_vdp, "integrate the driven Van der Pol oscillator")
    sp.add_argument("--g", type=float, default=0.1)
    sp.add_argument("--beta-prime", type=float, default=0.1)
    sp.add_argument("--omega", type=float, default=1.0)
    sp.add_argument("--omega0", type=float, default=1.02)
    sp.add_argument("--V0", type=float, default=0.1)
    sp.add_argument("--t-end", type=float, default=1000.0)
    sp.add_argument("--dt", type=float, default=0.05)
    sp.add_argument("--every", type=_positive_int, default=10)

    sp = add("arnold", cmd_arnold, "devil's staircase of the circle map")
    sp.add_argument("--c", type=float, default=0.9)
    sp.add_argument("--omega-min", type=float, default=0.0)
    sp.add_argument("--omega-max", type=float, default=1.0)
    sp.add_argument("--n", type=_positive_int, default=501)
    sp.add_argument("--n-iter", type=_positive_int, default=5000)
    sp.add_argument("--plateaus", type=_fraction_list, default=[Fraction(1, 2)])

    sp = add("allan", cmd_allan, "Allan deviation of seeded power-law noise")
    sp.add_argument("--n", type=_positive_int, default=2**16)
    sp.add_argument("--exponent", type=float, default=1.0)
    sp.add_argument("--points", type=_positive_int, default=20)
    sp.add_argument("--min-pairs", type=_positive_int, default=10)

    sp = add("arith-table", cmd_arith_table, "table of arithmetic functions")
    sp.add_argument("--nmax", type=_positive_int, default=100)

    sp = add("fig2", cmd_fig2, "phase-locking expectation values vs q")
    sp.add_argument("--qmax", type=_positive_int, default=50)
    sp.add_argument("--beta", type=float, default=1.0)

    sp = add("kms", cmd_kms, "Bost-Connes KMS phase values vs q")
    sp.add_argument("--qmax", type=_positive_int, default=50)
    sp.add_argument("--beta0", type=float, default=3.0)

    sp = add("mub", cmd_mub, "verify the Galois mutually unbiased bases")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--m", type=_positive_int, default=1)

    sp = add("gauss", cmd_gauss, "incomplete Gauss sums T(k) or phase probabilities S(b)")
    sp.add_argument("--p", type=int, default=7)
    sp.add_argument("--a", type=int, default=1)
    sp.add_argument("--psi-k", type=int, default=1)
    sp.add_argument("--table", choices=("T", "S"), default="T")
    sp.add_argument("--n-beta", type=_positive_int, default=8)

    sp = add("bell", cmd_bell, "verify maximally entangled bases")
    sp.add_argument("--family", choices=("fourier", "galois"), default="fourier")
    sp.add_argument("--q", type=_positive_int, default=3)
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--m", type=_positive_int, default=1)
    return parser


def _write(text: str, path: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        result = args.func(args)
    except (ValueError, TypeError) as exc:
        parser.print_usage(sys.stderr)
        print(f"phaselock {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        log.error("%s failed: %s", args.command, exc)
        return 1
    _write(result.to_csv() if args.format == "csv" else result.to_json(), args.out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
