"""Command-line front end.

Subcommands evaluate the attack bounds over distance or visibility
sweeps and write reproducible CSV/JSON (full configuration in ``#``
comment lines, no timestamps, byte-stable for a fixed seed), or run the
verification suite of analytic-vs-numeric cross checks.

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 optimizer non-convergence.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__, bsa, cow_attacks as cow, dps_attacks as dps
from .channel import COW, COWM1, COWM2, DPS, ChannelModel, effective_channel, transmission
from .optimize import OptConfig
from .variants import (
    BOB_CHOOSES,
    COWM1_STYLE,
    ORIGINAL_COW,
    RANDOM_TRAIN_A_POSTERIORI,
    VariantSpec,
    Z_CHANNEL,
    variant_sifting_rate,
    z_channel_optimal_q,
    z_channel_rate,
)

NATURAL_ATTACK = {COW: "2pa", COWM1: "2pa", COWM2: "1pa", DPS: "2pa"}

USAGE_ERROR, VERIFY_ERROR, NON_CONVERGED = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def parse_range(text: str) -> list:
    """'lo:step:hi' inclusive of hi up to half a step."""
    try:
        lo, step, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise ValueError(f"expected lo:step:hi, got {text!r}")
    if step <= 0 or hi < lo:
        raise ValueError(f"empty or descending range {text!r}")
    n = int(math.floor((hi - lo) / step + 0.5)) + 1
    return [lo + i * step for i in range(n)]


def max_workers() -> int:
    env = os.environ.get("DPR_BOUNDS_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def parallel_map(fn, items):
    items = list(items)
    if len(items) <= 1 or max_workers() == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        return list(pool.map(fn, items))


def _clean(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def _fmt(value) -> str:
    value = _clean(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_output(path, command, config: dict, columns, rows,
                 notes=(), metadata=(), fmt="csv"):
    """Write rows with a reproducible comment header; '-' means stdout."""
    if fmt == "json":
        payload = {
            "command": command,
            "config": {k: _clean(v) for k, v in config.items()},
            "notes": list(notes),
            "metadata": [{k: _clean(v) for k, v in m.items()} for m in metadata],
            "rows": [{k: _clean(v) for k, v in r.items()} for r in rows],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [f"# dpr-bounds {command} v{__version__}"]
        for key in sorted(config):
            lines.append(f"# config: {key}={_fmt(config[key])}")
        for note in notes:
            lines.append(f"# note: {note}")
        for meta in metadata:
            pairs = " ".join(f"{k}={_fmt(v)}" for k, v in meta.items())
            lines.append(f"# asymptote: {pairs}")
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in columns))
        text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# attack dispatch
# ---------------------------------------------------------------------------

def attack_point(protocol: str, attack: str, Q: float, V: float,
                 opt_config: OptConfig, scalar_tol: float = 1e-4) -> dict:
    """Intensity-optimized long-distance bound for one parameter point."""
    if protocol == COW and attack == "2pa":
        mu, r0, chi, n_evals = cow.cow2pa_mu_optimized(Q, V, tol=scalar_tol)
        return dict(protocol=protocol, attack=attack, Q=Q, V=V, mu_opt=mu,
                    r0_raw=r0, chi_AE=chi, chi_BE=chi,
                    feasible=cow.cow2pa_feasible(mu, V), converged=True,
                    n_evals=n_evals)
    if protocol == COWM2 and attack == "1pa":
        mu, r0, chi, n_evals = cow.cowm2_mu_optimized(Q, V, tol=scalar_tol)
        return dict(protocol=protocol, attack=attack, Q=Q, V=V, mu_opt=mu,
                    r0_raw=r0, chi_AE=chi, chi_BE=chi,
                    feasible=cow.cowm2_feasible(mu, V), converged=True,
                    n_evals=n_evals)
    if protocol == COWM1 and attack == "2pa":
        mu, res = cow.cowm1_mu_optimized(Q, V, opt_config, scalar_tol=scalar_tol)
        return dict(protocol=protocol, attack=attack, Q=Q, V=V, mu_opt=mu,
                    r0_raw=res.r0, chi_AE=res.chi, chi_BE=res.chi,
                    feasible=res.r0 > 0, converged=res.opt.converged,
                    n_evals=res.opt.n_evals)
    if protocol == DPS and attack == "1pa":
        mu, res = dps.dps1pa_mu_optimized(V, opt_config, scalar_tol=scalar_tol)
        return dict(protocol=protocol, attack=attack, Q=(1 - V) / 2, V=V,
                    mu_opt=mu, r0_raw=res.r0, chi_AE=res.chi_AE,
                    chi_BE=res.chi_BE, feasible=res.r0 > 0,
                    converged=res.opt_full.converged,
                    n_evals=res.opt_full.n_evals + res.opt_reduced.n_evals)
    if protocol == DPS and attack == "2pa":
        mu, res = dps.dps2pa_mu_optimized(V, opt_config, scalar_tol=scalar_tol)
        return dict(protocol=protocol, attack=attack, Q=(1 - V) / 2, V=V,
                    mu_opt=mu, r0_raw=res.r0, chi_AE=res.chi_pair.chi_AE,
                    chi_BE=res.chi_pair.chi_BE, feasible=res.r0 > 0,
                    converged=res.opt.converged, n_evals=res.opt.n_evals)
    raise ValueError(f"unsupported protocol/attack pair {protocol}/{attack}")


def _resolve_attacks(protocols, attack):
    pairs = []
    for proto in protocols:
        att = attack or NATURAL_ATTACK[proto]
        if proto in (COW, COWM1) and att != "2pa":
            raise ValueError(f"{proto} supports only the two-pulse attack")
        if proto == COWM2 and att != "1pa":
            raise ValueError(f"{proto} supports only the one-pulse attack")
        if proto == DPS and att not in ("1pa", "2pa"):
            raise ValueError(f"{proto} supports 1pa or 2pa, not {att!r}")
        pairs.append((proto, att))
    return pairs


def _opt_config(args, protocol=None) -> OptConfig:
    n_starts = args.n_starts
    if n_starts is None:
        n_starts = 3 if protocol == DPS else 4
    kwargs = dict(n_starts=n_starts, seed=args.seed)
    if args.max_evals:
        kwargs["max_evals"] = args.max_evals
    return OptConfig(**kwargs)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def run_bsa_scan(args) -> int:
    protocols = args.protocol or [COW, DPS]
    for proto in protocols:
        if proto not in (COW, DPS):
            raise ValueError("bsa-scan supports 'cow' and 'dps' only")
    model = ChannelModel(loss_db_per_km=args.loss_db_km, eta=args.eta,
                         trusted_device=not args.untrusted_device)
    distances = parse_range(args.d_range)
    asym = {proto: bsa.asymptotic_optimum(proto) for proto in protocols}

    def point(item):
        proto, d = item
        t_eff, eta_eff = effective_channel(transmission(d, model), model)
        pt = bsa.optimize_bsa(proto, t_eff, eta_eff)
        mu_asym, r0_asym = asym[proto]
        return dict(distance_km=d, t=t_eff, protocol=proto, mu_opt=pt.mu,
                    rate=pt.rate, chi=pt.chi, saturated=pt.saturated,
                    mu_asym=mu_asym, rate_asym=r0_asym * t_eff * eta_eff)

    rows = parallel_map(point, [(p, d) for p in protocols for d in distances])
    rows.sort(key=lambda r: (r["protocol"], r["distance_km"]))
    config = dict(protocols="+".join(protocols), d_range=args.d_range,
                  eta=args.eta, loss_db_per_km=args.loss_db_km,
                  trusted_device=not args.untrusted_device, seed=args.seed)
    metadata = [dict(protocol=p, mu_opt=asym[p][0], r0=asym[p][1])
                for p in protocols]
    write_output(args.out, "bsa-scan", config,
                 ["distance_km", "t", "protocol", "mu_opt", "rate", "chi",
                  "saturated", "mu_asym", "rate_asym"],
                 rows, metadata=metadata, fmt=args.format)
    return 0


def run_attack_scan(args) -> int:
    protocols = args.protocol or [COW, COWM1, COWM2, DPS]
    pairs = _resolve_attacks(protocols, args.attack)
    if args.V_range:
        vs = parse_range(args.V_range)
    elif args.V is not None:
        vs = [args.V]
    else:
        vs = parse_range("0.80:0.005:1.00")
    # default error-rate grid mirrors the usual published panels
    qs = args.Q if args.Q is not None else [0.0, 0.01, 0.03, 0.05]

    jobs = []
    for proto, att in pairs:
        q_list = [None] if proto == DPS else qs
        jobs.extend((proto, att, q, v) for q in q_list for v in vs)

    def point(job):
        proto, att, q, v = job
        cfg = _opt_config(args, proto)
        return attack_point(proto, att, 0.0 if q is None else q, v, cfg,
                            scalar_tol=args.scalar_tol)

    rows = parallel_map(point, jobs)
    for row in rows:
        row["r0"] = max(row["r0_raw"], 0.0)
    rows.sort(key=lambda r: (r["protocol"], r["attack"], r["Q"], r["V"]))
    config = dict(protocols="+".join(p for p, _ in pairs),
                  attacks="+".join(a for _, a in pairs),
                  Q="+".join(repr(q) for q in qs), V_grid=args.V_range or
                  (repr(args.V) if args.V is not None else "0.80:0.005:1.00"),
                  seed=args.seed, n_starts=args.n_starts or "auto",
                  scalar_tol=args.scalar_tol)
    columns = ["protocol", "attack", "Q", "V", "mu_opt", "r0_raw", "r0",
               "chi_AE", "chi_BE", "feasible", "converged", "n_evals"]
    write_output(args.out, "attack-scan", config, columns, rows,
                 notes=["long-distance limit: r = r0 * t * eta"],
                 fmt=args.format)
    return 0 if all(r["converged"] for r in rows) else NON_CONVERGED


def run_rate_vs_distance(args) -> int:
    protocols = args.protocol or [COW, COWM1, COWM2, DPS]
    pairs = _resolve_attacks(protocols, args.attack)
    model = ChannelModel(loss_db_per_km=args.loss_db_km, eta=args.eta,
                         trusted_device=not args.untrusted_device)
    distances = parse_range(args.d_range)
    V, Q = args.V, args.Q[0] if args.Q else 0.0

    def bound(pair):
        proto, att = pair
        return attack_point(proto, att, Q, V, _opt_config(args, proto),
                            scalar_tol=args.scalar_tol)

    bounds = parallel_map(bound, pairs)

    rows = []
    for d in distances:
        t_eff, eta_eff = effective_channel(transmission(d, model), model)
        for b in bounds:
            raw = b["r0_raw"] * t_eff * eta_eff
            rows.append(dict(distance_km=d, t=t_eff, protocol=b["protocol"],
                             attack=b["attack"], mu=b["mu_opt"],
                             r0=b["r0_raw"], rate_raw=raw,
                             rate=max(raw, 0.0)))
    bsa_protos = {"cow": [COW], "dps": [DPS], "both": [COW, DPS],
                  "none": []}[args.bsa_reference]

    def bsa_point(item):
        proto, d = item
        t_eff, eta_eff = effective_channel(transmission(d, model), model)
        pt = bsa.optimize_bsa(proto, t_eff, eta_eff)
        return dict(distance_km=d, t=t_eff, protocol=proto, attack="bsa",
                    mu=pt.mu, r0=pt.rate / (t_eff * eta_eff),
                    rate_raw=pt.rate, rate=pt.rate)

    rows.extend(parallel_map(bsa_point,
                             [(p, d) for p in bsa_protos for d in distances]))
    rows.sort(key=lambda r: (r["protocol"], r["attack"], r["distance_km"]))

    # data integrity: the attack bounds are linear in t by construction
    for b in bounds:
        vals = [r["rate_raw"] / (r["t"] * (1.0 if args.untrusted_device
                                           else args.eta))
                for r in rows
                if r["attack"] == b["attack"] and r["protocol"] == b["protocol"]]
        if vals and max(vals) - min(vals) > 1e-12:
            raise AssertionError("attack rate column is not linear in t")

    config = dict(protocols="+".join(p for p, _ in pairs),
                  attacks="+".join(a for _, a in pairs), Q=Q, V=V,
                  d_range=args.d_range, eta=args.eta,
                  loss_db_per_km=args.loss_db_km,
                  trusted_device=not args.untrusted_device, seed=args.seed,
                  bsa_reference=args.bsa_reference,
                  scalar_tol=args.scalar_tol)
    write_output(args.out, "rate-vs-distance", config,
                 ["distance_km", "t", "protocol", "attack", "mu", "r0",
                  "rate_raw", "rate"],
                 rows,
                 notes=["attack columns valid only in the limit of large distances"],
                 fmt=args.format)
    return 0 if all(b["converged"] for b in bounds) else NON_CONVERGED


def run_variants(args) -> int:
    model = ChannelModel(loss_db_per_km=args.loss_db_km, eta=args.eta,
                         trusted_device=not args.untrusted_device)
    t_eff, eta_eff = effective_channel(transmission(args.distance, model), model)
    mu = args.mu
    q = math.exp(-1.0)
    rows = []
    for vid in (Z_CHANNEL, ORIGINAL_COW, COWM1_STYLE,
                RANDOM_TRAIN_A_POSTERIORI, BOB_CHOOSES):
        spec = VariantSpec(vid, q=q if vid == Z_CHANNEL else None)
        r_sift = variant_sifting_rate(spec, mu, t_eff, eta_eff)
        if vid == Z_CHANNEL:
            i_ab, rate = z_channel_rate(q, mu, t_eff, eta_eff)
        else:
            i_ab, rate = 1.0, r_sift
        rows.append(dict(variant=vid, q=q if vid == Z_CHANNEL else "",
                         sifting_rate=r_sift, I_AB=i_ab, ideal_rate=rate))
    q_opt, _ = z_channel_optimal_q(mu, t_eff, eta_eff)
    config = dict(mu=mu, distance_km=args.distance, eta=args.eta,
                  loss_db_per_km=args.loss_db_km,
                  trusted_device=not args.untrusted_device)
    write_output(args.out, "variants", config,
                 ["variant", "q", "sifting_rate", "I_AB", "ideal_rate"], rows,
                 notes=[f"ideal eavesdropper-free estimates; "
                        f"z-channel optimal q={q_opt!r}"],
                 fmt=args.format)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _feasible_grid_cow2pa(n):
    mus = np.linspace(0.05, 1.0, n)
    vs = np.linspace(0.55, 1.0, n)
    return [(mu, v) for mu in mus for v in vs if cow.cow2pa_feasible(mu, v)]

def _feasible_grid_cowm2(n):
    mus = np.linspace(0.05, 1.5, n)
    vs = np.linspace(0.82, 1.0, n)
    return [(mu, v) for mu in mus for v in vs if cow.cowm2_feasible(mu, v)]


def verify_checks(thorough: bool = False, seed: int = 0):
    """Analytic-vs-numeric cross checks; yields dicts with discrepancies."""
    from .optimize import oracle_min_overlap_cow2pa, oracle_min_overlap_cowm2

    n = 20 if thorough else 8
    checks = []

    disc = max(abs(oracle_min_overlap_cow2pa(mu, v) - cow.cow2pa_min_overlap(mu, v))
               for mu, v in _feasible_grid_cow2pa(n))
    checks.append(dict(name="cow_two_pulse_overlap_oracle",
                       discrepancy=disc, tolerance=1e-6))

    disc = max(abs(oracle_min_overlap_cowm2(mu, v) - cow.cowm2_min_overlap(mu, v))
               for mu, v in _feasible_grid_cowm2(n))
    checks.append(dict(name="cowm2_overlap_oracle", discrepancy=disc,
                       tolerance=1e-6))

    disc = 0.0
    for mu, v in ((1.5, 0.8), (0.5, 0.55), (0.2, 0.4), (3.0, 0.9)):
        angles = cow.cow2pa_full_information_angles(mu, v)
        disc = max(disc, abs(cow.cow2pa_overlap(mu, v, *angles)))
    for mu, v in ((1.5, 0.7), (0.7, 0.4), (2.5, 0.9)):
        th, ph = cow.cowm2_full_information_angles(mu, v)
        disc = max(disc, abs(cow.cowm2_overlap(mu, v, th, ph)))
    checks.append(dict(name="full_information_thresholds", discrepancy=disc,
                       tolerance=1e-9))

    mu_c, r0_c = bsa.asymptotic_optimum(COW)
    mu_d, r0_d = bsa.asymptotic_optimum(DPS)
    disc = max(abs(mu_c - 0.4583), abs(r0_c - 0.0714) / 0.0714 * 1e-3,
               abs(mu_d - 0.2808), abs(r0_d - 0.1182) / 0.1182 * 1e-3)
    checks.append(dict(name="bsa_asymptotes", discrepancy=disc,
                       tolerance=1e-3))

    disc = 0.0
    for mu, v in ((0.2, 0.9), (0.35, 0.95), (0.5, 0.99)):
        v_mm, p10, p01 = cow.cow2pa_decoy_completion(mu, v)
        disc = max(disc, abs(p01.inner(p10).real - v))
    checks.append(dict(name="decoy_completion_constraints", discrepancy=disc,
                       tolerance=1e-10))

    rng = np.random.default_rng(seed)
    disc = 0.0
    for _ in range(10 if not thorough else 50):
        params = rng.uniform(0, 2 * math.pi, 3)
        atk = cow.cowm1_build_states(0.4, 0.93, *params)
        rho0, rho1 = cow.cowm1_case2_mixtures(atk)
        disc = max(disc, abs(rho0.weight - 1.0), abs(rho1.weight - 1.0))
    checks.append(dict(name="cowm1_mixture_traces", discrepancy=disc,
                       tolerance=1e-8))

    disc = 0.0
    for _ in range(5 if not thorough else 25):
        params = tuple(rng.uniform(-math.pi, math.pi, 6))
        cond = dps.dps1pa_conditioned_states(0.25, 0.9, params)
        for key in (("A", 0), ("A", 1), ("B", 0), ("B", 1)):
            disc = max(disc, abs(cond[key].weight - 1.0))
        atk = dps.dps2pa_build(0.25, 0.9, rng.standard_normal(48))
        for rho in dps.dps2pa_conditioned_states(0.25, 0.9, atk).values():
            disc = max(disc, abs(rho.weight - 1.0))
    checks.append(dict(name="dps_trace_normalization", discrepancy=disc,
                       tolerance=1e-8))

    x = 1e-4
    _, rate = z_channel_rate(math.exp(-1.0), 1.0, x, 1.0)
    checks.append(dict(name="z_channel_asymptote",
                       discrepancy=abs(rate / x - 0.5307),
                       tolerance=1e-2))
    return checks


def run_verify(args) -> int:
    checks = verify_checks(thorough=args.thorough, seed=args.seed)
    all_pass = True
    for c in checks:
        c["passed"] = bool(c["discrepancy"] <= c["tolerance"])
        all_pass &= c["passed"]
        status = "ok  " if c["passed"] else "FAIL"
        print(f"[{status}] {c['name']}: discrepancy {c['discrepancy']:.3e} "
              f"(tolerance {c['tolerance']:.0e})")
    if args.out and args.out != "-":
        with open(args.out, "w") as fh:
            json.dump({"passed": all_pass, "checks": checks}, fh, indent=2)
            fh.write("\n")
    print("verification " + ("passed" if all_pass else "FAILED"))
    return 0 if all_pass else VERIFY_ERROR


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sp, with_channel=True):
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default="-", help="output path, '-' for stdout")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    if with_channel:
        sp.add_argument("--eta", type=float, default=0.1)
        sp.add_argument("--loss-db-km", dest="loss_db_km", type=float,
                        default=0.25)
        sp.add_argument("--untrusted-device", action="store_true")


def _add_budget(sp):
    sp.add_argument("--n-starts", dest="n_starts", type=int, default=None)
    sp.add_argument("--max-evals", dest="max_evals", type=int, default=None)
    sp.add_argument("--scalar-tol", dest="scalar_tol", type=float,
                    default=1e-4)


def build_parser() -> _Parser:
    p = _Parser(prog="dpr-bounds",
                description="Secret-key-rate upper bounds for COW and DPS "
                            "under collective attacks")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bsa-scan", help="beam-splitting attack vs distance",
                        parents=[], add_help=True)
    sp.add_argument("--protocol", action="append",
                    choices=[COW, DPS])
    sp.add_argument("--d-range", dest="d_range", default="0:2:150")
    _add_common(sp)
    sp.set_defaults(func=run_bsa_scan)

    sp = sub.add_parser("attack-scan",
                        help="intensity-optimized r0 vs visibility")
    sp.add_argument("--protocol", action="append",
                    choices=[COW, COWM1, COWM2, DPS])
    sp.add_argument("--attack", choices=["1pa", "2pa"], default=None)
    sp.add_argument("--Q", action="append", type=float)
    sp.add_argument("--V", type=float, default=None)
    sp.add_argument("--V-range", dest="V_range", default=None)
    _add_budget(sp)
    _add_common(sp, with_channel=False)
    sp.set_defaults(func=run_attack_scan)

    sp = sub.add_parser("rate-vs-distance",
                        help="long-distance bounds against the full "
                             "beam-splitting rate")
    sp.add_argument("--protocol", action="append",
                    choices=[COW, COWM1, COWM2, DPS])
    sp.add_argument("--attack", choices=["1pa", "2pa"], default=None)
    sp.add_argument("--Q", action="append", type=float)
    sp.add_argument("--V", type=float, default=0.98)
    sp.add_argument("--d-range", dest="d_range", default="0:2:150")
    sp.add_argument("--bsa-reference", dest="bsa_reference",
                    choices=["cow", "dps", "both", "none"], default="dps")
    _add_budget(sp)
    _add_common(sp)
    sp.set_defaults(func=run_rate_vs_distance)

    sp = sub.add_parser("verify",
                        help="analytic-vs-numeric oracle cross checks")
    sp.add_argument("--thorough", action="store_true",
                    help="full 20x20 oracle grids and larger random suites")
    _add_common(sp, with_channel=False)
    sp.set_defaults(func=run_verify)

    sp = sub.add_parser("variants",
                        help="idealized sifting rates for coding variants")
    sp.add_argument("--mu", type=float, default=0.3)
    sp.add_argument("--distance", type=float, default=50.0)
    _add_common(sp)
    sp.set_defaults(func=run_variants)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"dpr-bounds: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
