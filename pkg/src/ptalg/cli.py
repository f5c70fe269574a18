"""Command-line front end: ``python3 -m ptalg verify ...``, ``primes``, ``export``.

Every numeric flag may also be set through an environment variable named
``PTA_<FLAG>`` (``PTA_RADIUS``, ``PTA_BOUND``, ...).  Explicit flags win.

Exit status: 0 when every check passes, 1 when a check fails or is
inconclusive (the first such check is named on stderr), 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import cuntz_embedding, extensions
from .operators import OperatorExpr, default_environment, truncate
from .spaces import GappedSet, build_window, space_from_name

ENV_PREFIX = "PTA_"
DEFAULTS = {
    "radius": None,  # per-command, see RADIUS_DEFAULTS
    "bound": 10_000,
    "rank": 2,
    "words": 4,
    "seed": 0,
    "max_gap": 20,
    "max_n": 20,
    "jobs": 1,
}
RADIUS_DEFAULTS = {"toeplitz": 10, "punctured": 10, "cuntz": 6, "embedding": 6, "window": 6, "matrix": 6}
SUITES = ("toeplitz", "punctured", "gapped", "cuntz", "embedding")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    target: str | None
    radius: int | None
    bound: int
    rank: int
    words: int
    seed: int
    max_gap: int
    max_n: int
    jobs: int
    out: str | None
    csv: str | None
    timing: bool
    space: str | None = None
    expr: str | None = None
    fmt: str | None = None
    mode: str = "pointwise"
    set_name: str = "squares"

    def validate(self) -> None:
        for name in ("bound", "rank", "words", "max_gap", "max_n", "jobs"):
            if getattr(self, name) < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        if self.radius is not None and self.radius < 0:
            raise UsageError("--radius must be non-negative")
        if self.target == "embedding" and self.radius < cuntz_embedding.MIN_RADIUS:
            raise UsageError(
                f"--radius {self.radius} is smaller than {cuntz_embedding.MIN_RADIUS}, "
                "the propagation of the table endings"
            )
        if self.target == "cuntz" and (self.rank < 2 or self.radius < 3):
            raise UsageError("verify cuntz needs --rank >= 2 and --radius >= 3")
        if self.target == "toeplitz" and self.radius < 3:
            raise UsageError("verify toeplitz needs --radius >= 3")
        if self.target == "punctured" and self.radius < 5:
            raise UsageError("verify punctured needs --radius >= 5")
        if self.command == "primes" and self.bound < 10:
            raise UsageError("primes needs --bound >= 10")
        if self.target == "gapped" and self.set_name != "squares":
            raise UsageError("only --set squares is built in")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radius", "-R", type=int)
    common.add_argument("--bound", "-N", type=int)
    common.add_argument("--rank", type=int)
    common.add_argument("--words", "-L", type=int, help="word budget for the embedding suite")
    common.add_argument("--seed", type=int)
    common.add_argument("--max-gap", type=int)
    common.add_argument("--max-n", type=int, help="largest shift checked on a gapped set")
    common.add_argument("--jobs", type=int, help="worker processes for 'verify all'")
    common.add_argument("--out", "-o", help="write the report here instead of stdout")
    common.add_argument("--csv", help="also write the gap table as CSV")
    common.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")

    p = argparse.ArgumentParser(prog="ptalg", description="Exact checks for partial translation algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("target", choices=SUITES + ("all",))
    v.add_argument("--set", dest="set_name", default="squares", help="gapped set (squares)")

    sub.add_parser("primes", parents=[common], help="prime-gap table and the t_1 projection")

    e = sub.add_parser("export", parents=[common], help="write a window or a truncated operator")
    e.add_argument("target", choices=("window", "matrix"))
    e.add_argument("--space", default="augmented", help="integers, naturals, punctured, primes, squares, free, positive, augmented")
    e.add_argument("--expr", help="operator expression, e.g. 'a a^* + b b^*'")
    e.add_argument("--format", dest="fmt", choices=("json", "dot", "mm"))
    e.add_argument("--mode", choices=("pointwise", "product"), default="pointwise")
    return p


def _resolve(args: argparse.Namespace) -> RunConfig:
    vals = {}
    for name, default in DEFAULTS.items():
        flag = getattr(args, name, None)
        if flag is None:
            env = os.environ.get(ENV_PREFIX + name.upper())
            if env is not None:
                try:
                    flag = int(env)
                except ValueError:
                    raise UsageError(f"{ENV_PREFIX}{name.upper()}={env!r} is not an integer") from None
        vals[name] = default if flag is None else flag
    target = getattr(args, "target", None)
    if vals["radius"] is None:
        vals["radius"] = RADIUS_DEFAULTS.get(target, 6)
    return RunConfig(
        command=args.command,
        target=target,
        out=args.out,
        csv=args.csv,
        timing=args.timing,
        space=getattr(args, "space", None),
        expr=getattr(args, "expr", None),
        fmt=getattr(args, "fmt", None),
        mode=getattr(args, "mode", "pointwise"),
        set_name=getattr(args, "set_name", "squares"),
        **vals,
    )


def run_suite(target: str, cfg: RunConfig):
    if target == "toeplitz":
        return extensions.verify_toeplitz(cfg.radius, cfg.seed)
    if target == "punctured":
        return extensions.verify_punctured(cfg.radius, cfg.seed)
    if target == "gapped":
        return extensions.verify_gapped(GappedSet.squares(cfg.bound), cfg.bound, cfg.max_n, cfg.seed)
    if target == "cuntz":
        return extensions.verify_cuntz(cfg.rank, cfg.radius, cfg.seed)
    if target == "embedding":
        return cuntz_embedding.verify_embedding(cfg.radius, cfg.words, cfg.seed)
    raise UsageError(f"unknown suite {target!r}")


def _suite_defaults(target: str, cfg: RunConfig) -> RunConfig:
    # 'verify all' runs each suite at its own default radius
    from dataclasses import replace

    return replace(cfg, target=target, radius=RADIUS_DEFAULTS.get(target, cfg.radius))


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _finish(reports, cfg: RunConfig) -> int:
    if len(reports) == 1:
        payload = reports[0].to_json(timing=cfg.timing)
    else:
        payload = {"reports": [r.to_json(timing=cfg.timing) for r in reports]}
    _emit(json.dumps(payload, sort_keys=True, indent=2) + "\n", cfg.out)
    for r in reports:
        bad = r.first_failure()
        if bad is not None:
            print(f"{bad.status.upper()}: {r.case}/{bad.name} ({bad.anchor})", file=sys.stderr)
            return 1
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.target != "all":
        return _finish([run_suite(cfg.target, cfg)], cfg)
    cfgs = [_suite_defaults(t, cfg) for t in SUITES]
    for c in cfgs:
        c.validate()
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            reports = list(pool.map(run_suite, SUITES, cfgs))
    else:
        reports = [run_suite(t, c) for t, c in zip(SUITES, cfgs)]
    return _finish(reports, cfg)


def cmd_primes(cfg: RunConfig) -> int:
    rep = extensions.verify_primes(cfg.bound, cfg.max_gap, cfg.seed)
    if cfg.csv:
        with open(cfg.csv, "w") as fh:
            fh.write(extensions.polignac_csv(rep.tables["polignac"]))
    return _finish([rep], cfg)


def cmd_export(cfg: RunConfig) -> int:
    space = space_from_name(cfg.space, cfg.rank, cfg.bound)
    w = build_window(space, cfg.radius)
    if cfg.target == "window":
        fmt = cfg.fmt or "json"
        if fmt == "dot":
            if space != cuntz_embedding.Y2:
                raise UsageError("DOT export draws t_a edges and needs --space augmented --rank 2")
            _emit(cuntz_embedding.window_dot(w), cfg.out)
        elif fmt == "json":
            _emit(json.dumps(w.to_json(), indent=2) + "\n", cfg.out)
        else:
            raise UsageError("windows export as json or dot")
        return 0
    if not cfg.expr:
        raise UsageError("export matrix needs --expr")
    m = truncate(OperatorExpr.parse(cfg.expr), w, default_environment(space), cfg.mode)
    fmt = cfg.fmt or "mm"
    if fmt == "mm":
        _emit(m.to_matrix_market(), cfg.out)
    elif fmt == "json":
        _emit(json.dumps(m.to_json(), indent=2) + "\n", cfg.out)
    else:
        raise UsageError("matrices export as mm or json")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits 2 on malformed flags
    try:
        cfg = _resolve(args)
        cfg.validate()
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "primes":
            return cmd_primes(cfg)
        return cmd_export(cfg)
    except (UsageError, ValueError, KeyError) as exc:
        parser.print_usage(sys.stderr)
        print(f"ptalg: error: {exc}", file=sys.stderr)
        return 2
