"""Batch command-line front end.

Subcommands map one-to-one onto module operations and emit CSV/JSON
artifacts. Exit codes are machine-distinguishable: 0 success, 1 validation
error (JSON error body on stderr), 2 failed verification (for example an
inner-bound/constraint-system mismatch or a failed regime check).

Identical (input, seed) pairs produce byte-identical artifacts: every
computation is seeded and runs in one deterministic pass. The CIFC_THREADS
environment variable caps the worker count; the current implementation
computes sequentially (a one-worker schedule), so the cap only validates.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np
import jsonschema

from . import dmc_regions, dpc, gaussian
from .info_theory import DmcChannel, sample_input_dist
from .polytope import Frontier2D

_NUMBER = {"type": "number"}
_POWER = {"type": "number", "minimum": 0}

GAUSSIAN_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "properties": {
                "class": {"const": "multi_primary"},
                "b": {"type": "array", "items": _NUMBER, "minItems": 1},
                "a": _NUMBER,
                "P1": _POWER,
                "P2": _POWER,
            },
            "required": ["class", "b", "a", "P1", "P2"],
            "additionalProperties": False,
        },
        {
            "type": "object",
            "properties": {
                "class": {"const": "multi_secondary"},
                "b": _NUMBER,
                "a": {"type": "array", "items": _NUMBER, "minItems": 1},
                "P1": _POWER,
                "P2": _POWER,
            },
            "required": ["class", "b", "a", "P1", "P2"],
            "additionalProperties": False,
        },
    ]
}

DMC_SCHEMA = {
    "type": "object",
    "properties": {
        "axes": {
            "type": "array",
            "minItems": 4,
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "prefixItems": [{"type": "string"}, {"type": "integer", "minimum": 1}],
            },
        },
        "probs": {"type": "array", "items": _NUMBER, "minItems": 1},
    },
    "required": ["axes", "probs"],
    "additionalProperties": False,
}

DPC_SCHEMA = {
    "type": "object",
    "properties": {
        "P1": _POWER,
        "P2": _POWER,
        "a1": _NUMBER,
        "a2": _NUMBER,
        "b": _NUMBER,
        "eta": {"type": "number", "minimum": 0, "maximum": 1},
        "rho": {"type": "number", "minimum": -1, "maximum": 1},
        "x": _POWER,
        "md_variant": {"enum": ["sqrt", "linear"]},
    },
    "required": ["P1", "P2", "a1", "a2", "b"],
    "additionalProperties": False,
}


class CliValidationError(ValueError):
    pass


def _worker_cap() -> int:
    raw = os.environ.get("CIFC_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError:
        raise CliValidationError(f"CIFC_THREADS must be an integer, got {raw!r}")
    if cap < 1:
        raise CliValidationError(f"CIFC_THREADS must be >= 1, got {cap}")
    return cap


def _load_json(path: str, schema: dict) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliValidationError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliValidationError(f"{path} is not valid JSON: {exc}")
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise CliValidationError(f"{path} failed schema validation: {exc.message}")
    return doc


def _parse_partition(raw: str | None, names: tuple[str, ...]):
    """Parse "1,2|3" into (strong, weak) receiver-name tuples (1-based)."""
    if raw is None:
        return None
    try:
        strong_raw, weak_raw = raw.split("|")
        strong = tuple(int(t) for t in strong_raw.split(",") if t.strip())
        weak = tuple(int(t) for t in weak_raw.split(",") if t.strip())
    except ValueError:
        raise CliValidationError(
            f"--partition must look like '1,2|3' (strong|weak), got {raw!r}"
        )
    for i in strong + weak:
        if not 1 <= i <= len(names):
            raise CliValidationError(f"partition index {i} outside 1..{len(names)}")
    return (tuple(names[i - 1] for i in strong), tuple(names[i - 1] for i in weak))


def _emit(doc: dict) -> None:
    sys.stdout.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def _write_frontier(frontier: Frontier2D, path: str) -> None:
    Path(path).write_text(frontier.to_csv_text())


def _cmd_classify(args) -> int:
    doc = _load_json(args.infile, GAUSSIAN_SCHEMA)
    chan = gaussian.channel_from_json_dict(doc)
    partition = None
    if args.partition is not None:
        if not isinstance(chan, gaussian.GaussianMultiPrimary):
            raise CliValidationError("--partition applies to multi_primary channels")
        names = tuple(str(j + 1) for j in range(chan.n_primary))
        strong, weak = _parse_partition(args.partition, names)
        partition = (tuple(int(s) - 1 for s in strong), tuple(int(w) - 1 for w in weak))
    regime = gaussian.classify_gaussian(chan, partition)
    _emit({"regime": regime})
    return 0


def _cmd_region(args) -> int:
    doc = _load_json(args.infile, GAUSSIAN_SCHEMA)
    chan = gaussian.channel_from_json_dict(doc)
    grid = args.grid or 201
    if isinstance(chan, gaussian.GaussianMultiPrimary):
        partition = None
        if args.partition is not None:
            names = tuple(str(j + 1) for j in range(chan.n_primary))
            strong, weak = _parse_partition(args.partition, names)
            partition = (tuple(int(s) - 1 for s in strong),
                         tuple(int(w) - 1 for w in weak))
        regime = gaussian.classify_gaussian(chan, partition)
        wanted = args.regime or regime
        if wanted != regime:
            raise CliValidationError(
                f"channel classifies as {regime!r}, not {wanted!r}"
            )
        if regime == "VSI":
            frontier = gaussian.region_mp_vsi(chan, rho_grid=grid)
        elif regime == "WI":
            frontier = gaussian.region_mp_wi(chan, eta_grid=grid, rho_grid=grid)
        elif regime == "mixed":
            frontier = gaussian.region_mp_mixed(chan, partition, eta_grid=grid,
                                                rho_grid=grid)
        else:
            raise CliValidationError("channel is outside every covered regime")
    else:
        regime = gaussian.classify_gaussian(chan)
        wanted = args.regime or regime
        if wanted != regime:
            raise CliValidationError(
                f"channel classifies as {regime!r}, not {wanted!r}"
            )
        if regime != "VSI":
            raise CliValidationError(
                "only the very-strong regime region is available for "
                "multi_secondary channels"
            )
        frontier = gaussian.region_ms_vsi(chan, eta_grid=grid)
    _write_frontier(frontier, args.out)
    _emit({"regime": regime, "points": len(frontier.points), "out": args.out})
    return 0


def _cmd_dpc_compare(args) -> int:
    doc = _load_json(args.infile, DPC_SCHEMA)
    cfg = dpc.DpcConfig.from_json_dict(doc)
    rows = dpc.comparison_sweep(cfg, eta_grid=args.grid or 101, out_path=args.out)
    strict = max(r["R2_md"] - r["R2_cd"] for r in rows)
    _emit({
        "rows": len(rows),
        "out": args.out,
        "max_md_minus_cd": strict,
        "all_below_outer": bool(all(
            r["R2_md"] <= r["R2_outer"] + 1e-9 and r["R2_cd"] <= r["R2_outer"] + 1e-9
            for r in rows
        )),
    })
    return 0


def _cmd_verify_fme(args) -> int:
    samples = args.samples if args.samples is not None else 100
    if samples < 1:
        raise CliValidationError("--samples must be >= 1")
    rng = np.random.default_rng(args.seed)
    failures = []
    for idx in range(samples):
        aux = dmc_regions.AuxAssignment(sample_input_dist(
            [("Q1", 2), ("Q", 2), ("U", 2), ("V", 2), ("X1", 2), ("X2", 2)], rng
        ))
        probs = rng.dirichlet(np.ones(4), size=(2, 2)).reshape(2, 2, 2, 2)
        chan = DmcChannel(2, 2, (("Y1", 2), ("Z1", 2)), probs)
        if not dmc_regions.verify_fme_inner_bound(aux, chan):
            failures.append(idx)
    report = {
        "instances": samples,
        "passes": samples - len(failures),
        "failures": failures,
        "seed": args.seed,
    }
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=1) + "\n")
    _emit(report)
    return 0 if not failures else 2


def _cmd_dmc_capacity(args) -> int:
    doc = _load_json(args.infile, DMC_SCHEMA)
    chan = DmcChannel.from_json_dict(doc)
    if chan.n_secondary == 1 and chan.n_primary >= 1:
        klass = dmc_regions.MULTI_PRIMARY
    elif chan.n_primary == 1:
        klass = dmc_regions.MULTI_SECONDARY
    else:
        raise CliValidationError(
            "channel must have exactly one Z (multi-primary) or one Y "
            "(multi-secondary) output"
        )
    if args.regime is None:
        raise CliValidationError("--regime is required (VSI, VWI or mixed)")
    names = chan.y_names if klass == dmc_regions.MULTI_PRIMARY else chan.z_names
    partition = _parse_partition(args.partition, names)
    samples = args.samples or 200
    report = dmc_regions.check_regime(
        chan, klass, args.regime, samples=samples, seed=args.seed,
        partition=partition,
    )
    if not report.passed:
        _emit({"report": report.to_json_dict()})
        return 2
    search = dmc_regions.SearchConfig(
        samples=args.budget if args.budget is not None else samples,
        seed=args.seed,
    )
    frontier = dmc_regions.dmc_capacity_region(
        chan, klass, args.regime, search, partition=partition, report=report,
    )
    _write_frontier(frontier, args.out)
    _emit({
        "report": report.to_json_dict(),
        "search": search.to_json_dict(),
        "points": len(frontier.points),
        "out": args.out,
    })
    return 0


def _cmd_counterexample(args) -> int:
    budget = args.budget if args.budget is not None else 1000
    cfg = dmc_regions.CxSearchConfig(budget=budget, seed=args.seed)
    witness = dmc_regions.vsi_vwi_counterexample_search(cfg)
    if witness is None:
        _emit({"found": False, "config": cfg.to_json_dict()})
        return 0
    doc = witness.to_json_dict()
    if args.out:
        Path(args.out).write_text(json.dumps(doc, indent=1) + "\n")
    _emit({
        "found": True,
        "receiver": witness.receiver,
        "margin": witness.margin,
        "channel_index": witness.seed_used,
        "out": args.out,
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcifc",
        description="Rate-region computations for the multicast cognitive "
                    "interference channel",
    )
    sub = parser.add_subparsers(dest="command")

    def common(p, needs_in=False, needs_out=False):
        if needs_in:
            p.add_argument("--in", dest="infile", required=True, metavar="PATH")
        if needs_out:
            p.add_argument("--out", required=True, metavar="PATH")
        else:
            p.add_argument("--out", metavar="PATH")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int)
        p.add_argument("--grid", type=int)
        p.add_argument("--budget", type=int)
        p.add_argument("--regime", choices=["VSI", "WI", "VWI", "mixed"])
        p.add_argument("--partition", metavar="'1,2|3'")

    common(sub.add_parser("classify", help="classify a Gaussian channel"),
           needs_in=True)
    common(sub.add_parser("region", help="Gaussian capacity-region frontier CSV"),
           needs_in=True, needs_out=True)
    common(sub.add_parser("dpc-compare", help="DPC bound-comparison sweep CSV"),
           needs_in=True, needs_out=True)
    common(sub.add_parser("verify-fme", help="cross-verify the inner bound "
                          "against its constraint system"))
    common(sub.add_parser("dmc-capacity", help="discrete channel capacity "
                          "region CSV"), needs_in=True, needs_out=True)
    common(sub.add_parser("counterexample", help="search for a very-strong "
                          "channel violating the weak condition"))
    return parser


_HANDLERS = {
    "classify": _cmd_classify,
    "region": _cmd_region,
    "dpc-compare": _cmd_dpc_compare,
    "verify-fme": _cmd_verify_fme,
    "dmc-capacity": _cmd_dmc_capacity,
    "counterexample": _cmd_counterexample,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        _worker_cap()
        return _HANDLERS[args.command](args)
    except CliValidationError as exc:
        sys.stderr.write(json.dumps({"error": str(exc)}) + "\n")
        return 1
    except (ValueError, ArithmeticError) as exc:
        sys.stderr.write(json.dumps(
            {"error": f"{type(exc).__name__}: {exc}"}) + "\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
