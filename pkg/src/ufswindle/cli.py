"""Command-line entry point: ``ufswindle <pipeline> [options]``."""

from __future__ import annotations

import argparse
import json
import sys

from .chains import ChainFormatError
from .harness import PIPELINES, Report, Scenario, ScenarioError, run

EXIT_FAIL = 1
EXIT_CHAIN_FILE = 4

DEFAULT_FACTORS = {
    "tails": 1,
    "fundclass": 1,
    "reduce1": 2,
    "reduce2": 3,
    "cube-solve": 2,
    "witness": 2,
}


def _defaults(pipeline: str, n_factors: int, fixed_z: bool) -> tuple[int, int]:
    """(radius, margin) when the user gives neither."""
    if pipeline == "reduce1":
        return 8, 6
    if pipeline == "reduce2" or fixed_z:
        return 9, 8
    if n_factors == 3:
        return 5, 2
    return 8, 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ufswindle", description="Tail-swindle certificates on products of trees.")
    sub = ap.add_subparsers(dest="pipeline", required=True)
    for name in PIPELINES:
        sp = sub.add_parser(name)
        sp.add_argument("--x", default=None, help="factor descriptor: tree:q, tree:q1,q2,..., line, finite:<json>")
        sp.add_argument("--y", default=None)
        sp.add_argument("--z", default=None)
        sp.add_argument("--radius", type=int, default=None)
        sp.add_argument("--margin", type=int, default=None)
        sp.add_argument("--coeff", choices=("int", "rat"), default="int")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--norm-bound", type=int, default=None, help="N for random-boundary inputs")
        sp.add_argument("--depth-bound", type=int, default=None, help="random inputs live within this depth")
        sp.add_argument("--in", dest="input_path", default=None, help="chain file (line-JSON)")
        sp.add_argument("--out", default=None, help="write the JSON report here")
        if name == "witness":
            sp.add_argument("--geodesic", action="append", default=[], help='e.g. "0|1" or "0.2@0|1"')
            sp.add_argument("--fixed-z", action="store_true", help="geodesic x geodesic x root, fed to reduce2")
        if name == "tails":
            sp.add_argument("--table", default=None, help="write the {edge: count} multiplicity table here")
    return ap


def scenario_from_args(ns: argparse.Namespace) -> Scenario:
    fixed_z = getattr(ns, "fixed_z", False)
    given = [d for d in (ns.x, ns.y, ns.z) if d is not None]
    n = max(DEFAULT_FACTORS[ns.pipeline], len(given), 3 if fixed_z else 0)
    if ns.pipeline in ("tails", "fundclass"):
        n = 1
    if ns.pipeline in ("reduce1",):
        n = 2
    if ns.pipeline == "reduce2":
        n = 3
    factors = [d if d is not None else "tree:3" for d in (ns.x, ns.y, ns.z)[:n]]
    radius, margin = _defaults(ns.pipeline, n, fixed_z)
    if ns.radius is not None:
        radius = ns.radius
    if ns.margin is not None:
        margin = ns.margin
    norm = ns.norm_bound if ns.norm_bound is not None else (2 if n == 3 else 3)
    return Scenario(
        pipeline=ns.pipeline,
        factors=factors,
        radius=radius,
        margin=margin,
        coeff=ns.coeff,
        seed=ns.seed,
        norm_bound=norm,
        depth_bound=ns.depth_bound,
        input_path=ns.input_path,
        geodesics=list(getattr(ns, "geodesic", []) or []),
        fixed_z=fixed_z,
    )


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        sc = scenario_from_args(ns)
        report = run(sc)
        if getattr(ns, "table", None):
            _write_table(sc, ns.table)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ChainFormatError as exc:
        print(f"error: chain file: {exc}", file=sys.stderr)
        return EXIT_CHAIN_FILE
    if ns.out:
        report.write(ns.out)
        print(f"{sc.pipeline}: verdict {report.verdict} ({report.wall_time:.2f}s) -> {ns.out}")
    else:
        sys.stdout.write(report.dumps())
    return 0 if report.verdict == "OK" else EXIT_FAIL


def _write_table(sc: Scenario, path: str):
    from .tails import naive_line_tails, tree_tail_scheme

    x = sc.build_product().factors[0]
    scheme = naive_line_tails(x) if x.kind == "line" else tree_tail_scheme(x)
    with open(path, "w") as fh:
        json.dump(scheme.multiplicity_json(sc.window), fh, indent=1, sort_keys=True)


if __name__ == "__main__":
    sys.exit(main())
