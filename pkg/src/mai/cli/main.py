"""Command-line entry point: ``mai homology|persistence|episode|experiment|ablate``."""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from src.mai.chaincore import betti, load_complex
from src.mai.config import EPISODE_STEPS, JITTER, MAX_SIMPLEX_DIM, SHAPES, VR_MAX_SCALE
from src.mai.engine import write_reports
from src.mai.eval import (
    TaskSpec,
    Verdict,
    evaluate,
    make_episode,
    run_ablation,
    run_experiment,
    verdict_table,
    verdicts_to_json,
)
from src.mai.memory import load_library, save_library
from src.mai.persistence import build_vr, diagram_to_csv, reduce
from src.mai.tasks import read_points, write_episode
from src.mai.types import ConfigError, EmptyInput, MAIError, UnknownAblation

from .settings import RunConfig, load_run_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_HYPOTHESIS = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def cmd_homology(args: argparse.Namespace) -> int:
    complex_ = load_complex(Path(args.file))
    ranks = [betti(complex_, k) for k in range(min(complex_.max_dim, MAX_SIMPLEX_DIM) + 1)]
    print(" ".join(f"β{k}={b}" for k, b in enumerate(ranks) if k < 2 or b > 0))
    return EXIT_OK


def cmd_persistence(args: argparse.Namespace) -> int:
    points = read_points(Path(args.file))
    if points.size == 0:
        raise EmptyInput(f"{args.file} holds no points")
    diagram = reduce(build_vr(points, args.max_dim, args.max_scale))
    text = diagram_to_csv(diagram, representatives=args.representatives)
    _emit(text, args.out)
    return EXIT_OK


def cmd_episode(args: argparse.Namespace) -> int:
    task = TaskSpec(
        task=args.task, shapes=(args.shape,), steps=args.steps, jitter=args.jitter, closed=not args.open
    )
    ep = make_episode(task, args.shape, args.seed, args.index, agent=args.agent if args.task == "T3" else "")
    out = Path(args.out)
    write_episode(ep, out)
    print(f"wrote {out} ({ep.steps} steps, {ep.obs_dim} channels, {ep.loop_class})")
    return EXIT_OK


def _config(args: argparse.Namespace) -> RunConfig:
    cfg = load_run_config(args.config)
    return cfg.with_overrides(
        seed=args.seed,
        out_dir=Path(args.out) if args.out else None,
        library_path=Path(args.library) if args.library else None,
        tau=args.tau,
    )


def _finish(verdicts: Sequence[Verdict], out_dir: Path) -> int:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "verdicts.json").write_text(verdicts_to_json(verdicts))
    print(verdict_table(verdicts), end="")
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_HYPOTHESIS


def cmd_experiment(args: argparse.Namespace) -> int:
    cfg = _config(args)
    if cfg.ablation is not None:
        return _ablate(cfg, cfg.ablation)
    library = None
    if cfg.library_path is not None and cfg.library_path.exists():
        library = load_library(cfg.library_path)
        logger.debug(f"Loaded {len(library)} records from {cfg.library_path}")
    result = run_experiment(cfg.engine, cfg.task, cfg.seed, library)
    write_reports(result.log.reports, cfg.out_dir)
    for agent, peer in result.peers.items():
        write_reports(peer.log.reports, cfg.out_dir, stem=f"episodes_{agent}")
    if cfg.library_path is not None:
        save_library(result.state.library, cfg.library_path)
        logger.debug(f"Saved library snapshot to {cfg.library_path}")
    return _finish(evaluate(result, cfg.checks), cfg.out_dir)


def _ablate(cfg: RunConfig, ablation: str) -> int:
    outcome = run_ablation(ablation, cfg.engine, cfg.task, cfg.seed)
    write_reports(outcome.baseline.log.reports, cfg.out_dir, stem="baseline")
    write_reports(outcome.arm.log.reports, cfg.out_dir, stem=f"arm_{ablation}")
    return _finish([outcome.verdict], cfg.out_dir)


def cmd_ablate(args: argparse.Namespace) -> int:
    return _ablate(_config(args), args.id)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="Run configuration JSON")
    p.add_argument("--seed", type=int, help="Override the configured seed")
    p.add_argument("--out", help="Output directory")
    p.add_argument("--library", help="Library snapshot to start from if present; the final one is saved here")
    p.add_argument("--tau", type=float, help="Override the persistence threshold")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mai", description="Memory-amortized inference experiments")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homology", help="Betti numbers of a complex in the text format")
    p.add_argument("file")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("persistence", help="Vietoris-Rips persistence diagram of a point CSV")
    p.add_argument("file")
    p.add_argument("--max-scale", type=float, default=VR_MAX_SCALE)
    p.add_argument("--max-dim", type=int, default=MAX_SIMPLEX_DIM)
    p.add_argument("--representatives", action="store_true", help="Include representative cycles")
    p.add_argument("--out", help="Write the diagram CSV here instead of standard output")
    p.set_defaults(func=cmd_persistence)

    p = sub.add_parser("episode", help="Write one generated episode as CSV plus a JSON header")
    p.add_argument("--task", choices=["T1", "T2", "T3"], default="T1")
    p.add_argument("--shape", choices=SHAPES, default="circle")
    p.add_argument("--steps", type=int, default=EPISODE_STEPS)
    p.add_argument("--jitter", type=float, default=JITTER)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--index", type=int, default=0, help="Episode index; T2 uses it to pick the modality")
    p.add_argument("--agent", choices=["mentor", "learner"], default="mentor")
    p.add_argument("--open", action="store_true", help="Traverse only part of the loop")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_episode)

    p = sub.add_parser("experiment", help="Train on a configured stream and check the hypotheses")
    _run_options(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("ablate", help="Run a baseline and one ablation arm")
    p.add_argument("id", help="Ablation id, A1 to A5")
    _run_options(p)
    p.set_defaults(func=cmd_ablate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        return int(args.func(args))
    except (ConfigError, UnknownAblation) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except (MAIError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
