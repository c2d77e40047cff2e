"""Command-line experiment runner.

Modes:

* ``stats``  - node counts of the original and transformed trees, one CSV row
* ``solve``  - CFR/CFR+ on the transformed tree, exploitability series CSV
* ``oracle`` - team-maxmin-with-correlation value of the original game
* ``verify`` - solve, run the oracle and compare (exit 1 on failure)

Exit status: 0 on success, 1 when a check fails, 2 on bad arguments.

The ``seconds`` column of the solve series holds solver time only (tree
construction is timed separately and printed to stdout). Because wall-clock
numbers differ between runs, it is written as ``nan`` unless
``--timing wall`` is given; the default output is byte-identical for
repeated runs of the same configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

import numpy as np

from .efg import GameTree, count_nodes, expected_value, random_profile, write_dump
from .games import InstanceError, generate, parse_instance
from .oracle import OracleError, map_profile, solve_tmecor, verify_equivalence
from .refine import merge_infosets, transform
from .solve import ExploitabilityPoint, profile_value, solve
from .transform import TransformError, mpta

SERIES_HEADER = ("iter", "seconds", "exploitability")
STATS_HEADER = ("instance", "orig_total", "trans_total", "team_nodes", "adversary_nodes",
                "build_seconds")
DEFAULT_SECONDS = 300.0


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    game: str
    mode: str
    iters: int = 10_000
    seconds: float = DEFAULT_SECONDS
    tol: float | None = None
    no_prune: bool = False
    dump: Path | None = None
    transform: bool = False
    solver: str = "cfrplus"
    seed: int = 0
    out: Path | None = None
    timing: str = "none"
    samples: int = 20

    def check(self) -> "RunConfig":
        if self.mode not in ("stats", "solve", "oracle", "verify"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.iters < 1:
            raise ConfigError("--iters must be positive")
        if not self.seconds > 0:
            raise ConfigError("--seconds must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("--tol must be positive")
        if self.solver not in ("cfr", "cfrplus"):
            raise ConfigError(f"unknown solver {self.solver!r}")
        if self.timing not in ("none", "wall"):
            raise ConfigError(f"unknown timing {self.timing!r}")
        parse_instance(self.game)
        return self


def emit_series(points: Iterable[ExploitabilityPoint], out: TextIO | str | Path,
                *, timing: bool = True) -> None:
    """Write ``iter,seconds,exploitability`` rows; an empty run gives the header only."""
    if isinstance(out, (str, Path)):
        with open(out, "w", newline="") as fh:
            emit_series(points, fh, timing=timing)
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(SERIES_HEADER)
    for p in points:
        sec = f"{p.seconds:.6f}" if timing else "nan"
        w.writerow((p.iteration, sec, repr(float(p.exploitability))))


def build_transformed(original: GameTree, prune: bool) -> GameTree:
    return transform(original) if prune else merge_infosets(mpta(original))


class Runner:
    def __init__(self, cfg: RunConfig, stdout: TextIO = sys.stdout):
        self.cfg = cfg
        self.stdout = stdout
        self._original: GameTree | None = None
        self._transformed: GameTree | None = None
        self.gen_seconds = 0.0
        self.trans_seconds = 0.0

    def say(self, line: str) -> None:
        print(line, file=self.stdout)

    @property
    def original(self) -> GameTree:
        if self._original is None:
            t0 = time.perf_counter()
            self._original = generate(self.cfg.game)
            self.gen_seconds = time.perf_counter() - t0
        return self._original

    @property
    def transformed(self) -> GameTree:
        if self._transformed is None:
            g = self.original
            t0 = time.perf_counter()
            self._transformed = build_transformed(g, not self.cfg.no_prune)
            self.trans_seconds = time.perf_counter() - t0
        return self._transformed

    def run(self) -> int:
        status = getattr(self, "mode_" + self.cfg.mode)()
        if self.cfg.dump is not None:
            tree = self.transformed if self.cfg.transform else self.original
            write_dump(tree, self.cfg.dump)
        return status

    def _write(self, text: str) -> None:
        if self.cfg.out is not None:
            Path(self.cfg.out).write_text(text)
        else:
            self.stdout.write(text)

    def mode_stats(self) -> int:
        g = self.original
        t = self.transformed
        c = count_nodes(t)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(STATS_HEADER)
        w.writerow((g.name, len(g), c.total, c.team_nodes, c.adversary_nodes,
                    f"{self.gen_seconds + self.trans_seconds:.3f}"))
        self._write(buf.getvalue())
        return 0

    def mode_solve(self) -> int:
        t = self.transformed
        res = solve(t, self.cfg.iters, variant=self.cfg.solver, seconds=self.cfg.seconds,
                    target=self.cfg.tol)
        buf = io.StringIO()
        emit_series(res.points, buf, timing=self.cfg.timing == "wall")
        if self.cfg.out is not None:
            Path(self.cfg.out).write_text(buf.getvalue())
        else:
            self.stdout.write(buf.getvalue())
        last = res.points[-1]
        self.say(f"# seconds: solver time only; trees built in "
                 f"{self.gen_seconds + self.trans_seconds:.3f}s")
        self.say(f"# final iter={last.iteration} solve_seconds={res.seconds:.3f} "
                 f"exploitability={last.exploitability:.6g} "
                 f"team_value={profile_value(t, res.state.average_table()):.9g}")
        return 0

    def mode_oracle(self) -> int:
        tol = self.cfg.tol if self.cfg.tol is not None else 1e-9
        try:
            sol = solve_tmecor(self.original, tol=tol, seed=self.cfg.seed)
        except OracleError as exc:
            self.say(f"oracle failed: {exc}")
            return 1
        self.say(f"instance: {self.original.name}")
        self.say(f"value: {sol.value:.12g}")
        self.say(f"gap: {sol.gap:.3g}")
        self.say(f"team_support: {len(sol.team.support)}")
        self.say(f"adversary_support: {len(sol.adversary.support)}")
        self.say(f"rounds: {sol.rounds}")
        if self.cfg.out is not None:
            with open(self.cfg.out, "a") as fh:
                fh.write(f"{self.original.name} {sol.value!r} {sol.gap:.3g} {self.cfg.seed}\n")
        return 0 if sol.gap < max(tol, 1e-6) else 1

    def mode_verify(self) -> int:
        tol = self.cfg.tol if self.cfg.tol is not None else 1e-3
        g, t = self.original, self.transformed
        # payoff equivalence on random profiles
        rng = np.random.default_rng(self.cfg.seed)
        worst = 0.0
        for _ in range(self.cfg.samples):
            s = random_profile(g, rng)
            worst = max(worst, abs(expected_value(g, s)[0]
                                   - expected_value(t, map_profile(g, t, s))[0]))
        res = solve(t, self.cfg.iters, variant=self.cfg.solver, seconds=self.cfg.seconds,
                    target=tol / 10)
        rep = verify_equivalence(g, t, res.state.average_profile(), tol)
        self.say(f"instance: {g.name}")
        self.say(f"payoff_equivalence_max_diff: {worst:.3g} over {self.cfg.samples} profiles")
        self.say(f"iterations: {res.points[-1].iteration}")
        for line in rep.lines():
            self.say(line)
        ok = rep.passed and worst < 1e-9
        return 0 if ok else 1


def parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bench", description="Team-game tree statistics, "
                                "solving and oracle checks.")
    p.add_argument("--game", required=True, help="instance name, e.g. 21K3 or 21L33")
    p.add_argument("--mode", default="stats", choices=("stats", "solve", "oracle", "verify"))
    p.add_argument("--iters", type=int, default=10_000, help="iteration budget")
    p.add_argument("--seconds", type=float, default=DEFAULT_SECONDS,
                   help="solver time budget (default %(default)s)")
    p.add_argument("--tol", type=float, default=None,
                   help="solve: stop below this exploitability; verify: pass threshold "
                   "(default 1e-3); oracle: gap (default 1e-9)")
    p.add_argument("--no-prune", action="store_true",
                   help="keep every temporary chance branch in the transformed tree")
    p.add_argument("--dump", type=Path, default=None, help="write a tree dump here")
    p.add_argument("--transform", action="store_true",
                   help="with --dump, dump the transformed tree instead of the original")
    p.add_argument("--solver", default="cfrplus", choices=("cfr", "cfrplus"))
    p.add_argument("--seed", type=int, default=0,
                   help="seed for sampled profiles (verify) and the oracle's starting point")
    p.add_argument("--out", type=Path, default=None, help="CSV / fixture output path")
    p.add_argument("--timing", default="none", choices=("none", "wall"),
                   help="fill the seconds column of the solve series")
    return p


def main(argv: Sequence[str] | None = None, stdout: TextIO = sys.stdout) -> int:
    args = parser().parse_args(argv)
    try:
        cfg = RunConfig(args.game, args.mode, args.iters, args.seconds, args.tol,
                        args.no_prune, args.dump, args.transform, args.solver, args.seed,
                        args.out, args.timing).check()
    except (ConfigError, InstanceError) as exc:
        print(f"bench: error: {exc}", file=sys.stderr)
        return 2
    try:
        return Runner(cfg, stdout).run()
    except (TransformError, OracleError) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 1


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
