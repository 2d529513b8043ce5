"""Command-line front end.

    eofkit compute STATE.json [--config FILE] [--restarts N] [--seed S] [--cardinality M] [--emit-witness]
    eofkit check STATE.json
    eofkit demo {singlet,maxent-d,werner-sweep,tiles,subadditivity,convexity} [--d K] [--grid N] [--seed S]
    eofkit export {singlet,maxent-d,werner,tiles,mixed,random} OUT.json

Reports go to stdout as JSON; logs go to stderr. Exit codes: 0 success,
2 invalid input, 3 invalid config, 4 unknown demo.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from dataclasses import replace

import numpy as np

from . import __version__
from .eof import (
    ConfigError,
    EofConfig,
    cnt_entropy,
    convexity_terms,
    eof_estimate,
    spectral_upper_bound,
    subadditivity_terms,
)
from .fileio import config_to_dict, ensemble_to_dict, read_config, read_state, write_state
from .oracle import brute_force_eof, werner_state, wootters_eof
from .qstate import (
    DensityMatrix,
    StateError,
    maximally_entangled,
    maximally_mixed,
    singlet,
)
from .separability import (
    OverlapConfig,
    max_product_overlap,
    ppt_check,
    random_density,
    tiles_projector,
    tiles_upb,
    tiles_upb_state,
)

log = logging.getLogger("eofkit")

EXIT_OK, EXIT_INPUT, EXIT_CONFIG, EXIT_DEMO = 0, 2, 3, 4
DEMOS = ("singlet", "maxent-d", "werner-sweep", "tiles", "subadditivity", "convexity")
TILES_OVERLAP_MARGIN = 0.01
TILES_EOF_FLOOR = 0.05
DEFAULT_BUDGET = 2000


def build_report(
    rho: DensityMatrix,
    descriptor: str,
    cfg: EofConfig,
    emit_witness: bool = False,
    oracle_budget: int = DEFAULT_BUDGET,
    extras: dict | None = None,
) -> dict:
    start = time.perf_counter()
    result = eof_estimate(rho, cfg)
    report = {
        "schema": 1,
        "toolkit_version": __version__,
        "input": descriptor,
        "dims": [rho.d1, rho.d2],
        "config": config_to_dict(cfg),
        "eof_value": float(result.value),
        "converged": bool(result.converged),
        "witness_size": len(result.witness),
        "spectral_upper_bound": float(spectral_upper_bound(rho)),
        "cnt_entropy": float(cnt_entropy(rho, result=result)),
        "separability": ppt_check(rho).to_dict(),
        "oracle": None,
    }
    if rho.dims.as_tuple() == (2, 2):
        report["oracle"] = {
            "wootters_eof": wootters_eof(rho),
            "brute_force_eof": brute_force_eof(rho, oracle_budget, cfg.seed),
            "brute_force_budget": oracle_budget,
        }
    if emit_witness:
        report["witness"] = ensemble_to_dict(result.witness)
    if extras:
        report["extras"] = extras
    _check_report(report, rho)
    report["wall_time"] = time.perf_counter() - start
    return report


def _check_report(report: dict, rho: DensityMatrix) -> None:
    e = report["eof_value"]
    if e > report["spectral_upper_bound"] + 1e-8 or not 0 <= e <= math.log(rho.d1) + 1e-9:
        raise AssertionError(f"report violates EoF bounds: {report}")


def _demo_singlet(args, cfg):
    return [build_report(singlet().projector(), "demo:singlet", cfg, args.emit_witness, args.budget)]


def _demo_maxent(args, cfg):
    d = args.d or 3
    return [build_report(maximally_entangled(d).projector(), f"demo:maxent-d:d={d}", cfg, args.emit_witness, args.budget)]


def _demo_werner(args, cfg):
    grid = args.grid or 10
    if args.cardinality is None:
        cfg = replace(cfg, cardinality=4)
    reports = []
    for k in range(grid + 1):
        p = k / grid
        log.info("werner p=%.4f", p)
        rep = build_report(werner_state(p), f"demo:werner-sweep:p={p!r}", cfg, args.emit_witness, args.budget)
        rep["extras"] = {
            "p": p,
            "estimate_minus_wootters": rep["eof_value"] - rep["oracle"]["wootters_eof"],
            "brute_force_minus_wootters": rep["oracle"]["brute_force_eof"] - rep["oracle"]["wootters_eof"],
        }
        reports.append(rep)
    return reports


def _demo_tiles(args, cfg):
    rho = tiles_upb_state()
    overlap = max_product_overlap(tiles_projector(), (3, 3), OverlapConfig(seed=cfg.seed))
    upb_weight = max(float(np.vdot(v, rho.matrix @ v).real) for v in tiles_upb())
    extras = {
        "trace_projector": 4,
        "rank": rho.rank(),
        "max_upb_expectation": upb_weight,
        "max_product_overlap": overlap,
        "overlap_margin_required": TILES_OVERLAP_MARGIN,
        "eof_floor": TILES_EOF_FLOOR,
    }
    return [build_report(rho, "demo:tiles", cfg, args.emit_witness, args.budget, extras)]


def _demo_subadditivity(args, cfg):
    rho = random_density((2, 2), 2, [cfg.seed, 18])
    terms = subadditivity_terms(rho, cfg)
    extras = {
        "doubled_eof": terms.double,
        "twice_single_eof": 2 * terms.single,
        "excess": terms.excess,
    }
    return [build_report(rho, f"demo:subadditivity:seed={cfg.seed}", cfg, args.emit_witness, args.budget, extras)]


def _demo_convexity(args, cfg):
    rng = np.random.default_rng([cfg.seed, 17])
    reports = []
    for k in range(args.grid or 5):
        rho1 = random_density((2, 2), int(rng.integers(1, 5)), [cfg.seed, 17, k, 1])
        rho2 = random_density((2, 2), int(rng.integers(1, 5)), [cfg.seed, 17, k, 2])
        lam = float(rng.uniform())
        terms = convexity_terms(rho1, rho2, lam, cfg)
        mix = DensityMatrix(rho1.dims, lam * rho1.matrix + (1 - lam) * rho2.matrix)
        extras = {"lambda": lam, "e1": terms.e1, "e2": terms.e2, "e_mix": terms.e_mix, "gap": terms.gap}
        reports.append(build_report(mix, f"demo:convexity:pair={k}", cfg, args.emit_witness, args.budget, extras))
    return reports


DEMO_RUNNERS = {
    "singlet": _demo_singlet,
    "maxent-d": _demo_maxent,
    "werner-sweep": _demo_werner,
    "tiles": _demo_tiles,
    "subadditivity": _demo_subadditivity,
    "convexity": _demo_convexity,
}


def named_state(name: str, d: int = 3, p: float = 0.5, seed: int = 0) -> DensityMatrix:
    if name == "singlet":
        return singlet().projector()
    if name == "maxent-d":
        return maximally_entangled(d).projector()
    if name == "werner":
        return werner_state(p)
    if name == "tiles":
        return tiles_upb_state()
    if name == "mixed":
        return maximally_mixed((d, d))
    if name == "random":
        return random_density((2, 2), 4, seed)
    raise KeyError(name)


def _config_from_args(args) -> EofConfig:
    values = read_config(args.config) if getattr(args, "config", None) else {}
    for key in ("restarts", "seed", "cardinality", "max_iterations", "objective_tolerance"):
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return EofConfig(**values)


def _add_search_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value file with EofConfig fields")
    p.add_argument("--restarts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--cardinality", type=int)
    p.add_argument("--max-iterations", dest="max_iterations", type=int)
    p.add_argument("--tolerance", dest="objective_tolerance", type=float)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="brute-force oracle budget (2x2 only)")
    p.add_argument("--emit-witness", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eofkit", description="Entanglement of formation toolkit")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="estimate EoF of a state file")
    p.add_argument("state")
    _add_search_flags(p)

    p = sub.add_parser("check", help="PPT verdict for a state file")
    p.add_argument("state")

    p = sub.add_parser("demo", help="run a named example")
    p.add_argument("name")
    p.add_argument("--d", type=int)
    p.add_argument("--grid", type=int)
    _add_search_flags(p)

    p = sub.add_parser("export", help="write a named state to a JSON state file")
    p.add_argument("name", choices=["singlet", "maxent-d", "werner", "tiles", "mixed", "random"])
    p.add_argument("out")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=1) + "\n")


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    try:
        return _run(args)
    finally:
        log.removeHandler(handler)


def _run(args) -> int:
    try:
        if args.command == "export":
            write_state(named_state(args.name, args.d, args.p, args.seed), args.out)
            return EXIT_OK
        if args.command == "demo" and args.name not in DEMO_RUNNERS:
            log.error("unknown demo %r; choose from %s", args.name, ", ".join(DEMOS))
            return EXIT_DEMO
        try:
            cfg = _config_from_args(args) if args.command != "check" else None
        except ConfigError as exc:
            log.error("ConfigError: %s", exc)
            return EXIT_CONFIG
        if args.command == "check":
            _emit(ppt_check(read_state(args.state)).to_dict())
        elif args.command == "compute":
            rho = read_state(args.state)
            _emit(build_report(rho, args.state, cfg, args.emit_witness, args.budget))
        else:
            _emit(DEMO_RUNNERS[args.name](args, cfg))
    except ConfigError as exc:
        log.error("ConfigError: %s", exc)
        return EXIT_CONFIG
    except (StateError, OSError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
