"""Batch entry point: run verification suites and searches, emit
machine-readable reports.

Exit codes: 0 all claims verified / searches exhaustive, 1 on any
refutation, 2 on budget or inconclusive outcomes, 64 on usage errors.
Long sweeps checkpoint per work unit and can resume with --resume.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import bounds, suites
from .report import (
    VerificationReport,
    encode_value,
    exit_code,
    reports_to_csv,
    reports_to_json,
)
from .search import SearchBudget, SearchResult, max_uniform_product, max_weight_product
from .seq import verify_seq_theorem
from .setfam import BudgetExceeded, family_to_text

USAGE_ERROR = 64

VERIFY_SUITES = (
    "bounds-all",
    "case2-finite",
    "walk-oracle",
    "measure-oracle",
    "stability",
    "graphs",
    "search-uniform",
    "search-weight",
    "search-seq",
)
SEARCH_KINDS = ("uniform", "weight", "seq")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


@dataclass
class RunConfig:
    suite: str
    t: Optional[int] = None
    t_max: int = 100
    n: Optional[int] = None
    k: Optional[int] = None
    p: Optional[Fraction] = None
    m: Optional[int] = None
    eta: Optional[Fraction] = None
    workers: int = 1
    out: Optional[str] = None
    fmt: str = "json"
    resume: bool = False
    shifted: bool = False
    seed: int = 0

    def validate(self) -> None:
        if self.suite not in VERIFY_SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {VERIFY_SUITES}")
        if self.fmt not in ("json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.fmt!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        required = {
            "case2-finite": (),
            "search-uniform": ("n", "k", "t"),
            "search-weight": ("n", "t", "p"),
            "search-seq": ("n", "m", "t"),
        }.get(self.suite, ())
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"suite {self.suite} requires {', '.join('--' + m for m in missing)}")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def load_config_file(path: str) -> dict:
    """Flat key = value lines; [section] headers are allowed and ignored."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith(";"):
            continue
        if line.startswith("[") and line.endswith("]"):
            continue
        for sep in ("=", ":"):
            if sep in line:
                key, val = line.split(sep, 1)
                values[key.strip().replace("-", "_")] = val.strip()
                break
        else:
            raise ValueError(f"bad config line: {raw!r}")
    return values


def build_parser() -> _Parser:
    parser = _Parser(prog="ekrcross", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--t", type=int)
        p.add_argument("--t-max", type=int, default=100)
        p.add_argument("--n", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--p", type=parse_rational)
        p.add_argument("--m", type=int)
        p.add_argument("--eta", type=parse_rational)
        p.add_argument("--workers", type=int,
                       default=int(os.environ.get("EKR_WORKERS", "1")))
        p.add_argument("--out")
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        p.add_argument("--resume", action="store_true")
        p.add_argument("--shifted", action="store_true",
                       help="restrict the search to shifted families")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--config", help="flat key=value config file; flags override")

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=VERIFY_SUITES)
    add_common(pv)

    ps = sub.add_parser("search", help="run an extremal search")
    ps.add_argument("kind", choices=SEARCH_KINDS)
    add_common(ps)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    suite = args.suite if args.command == "verify" else f"search-{args.kind}"
    cfg = RunConfig(suite=suite)
    file_values = load_config_file(args.config) if args.config else {}
    for key, val in file_values.items():
        if key == "suite":
            cfg.suite = val
        elif key in ("t", "t_max", "n", "k", "m", "workers", "seed"):
            setattr(cfg, key, int(val))
        elif key in ("p", "eta"):
            setattr(cfg, key, Fraction(val))
        elif key in ("out",):
            cfg.out = val
        elif key == "format":
            cfg.fmt = val
        elif key in ("resume", "shifted"):
            setattr(cfg, key, val.lower() in ("1", "true", "yes"))
        else:
            raise ValueError(f"unknown config key {key!r}")
    for key in ("t", "n", "k", "p", "m", "eta", "out"):
        val = getattr(args, key)
        if val is not None:
            setattr(cfg, key, val)
    cfg.t_max = args.t_max
    cfg.workers = args.workers
    if args.fmt != "json":
        cfg.fmt = args.fmt
    cfg.resume = cfg.resume or args.resume
    cfg.shifted = cfg.shifted or args.shifted
    cfg.seed = args.seed
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# the finite sweep with worker partitioning and checkpointing
# ---------------------------------------------------------------------------


def _checkpoint_path(cfg: RunConfig) -> Optional[Path]:
    return Path(cfg.out + ".ckpt") if cfg.out else None


def _load_checkpoint(path: Optional[Path]) -> dict:
    if path is None or not path.exists():
        return {}
    return json.loads(path.read_text())


def _store_checkpoint(path: Optional[Path], data: dict) -> None:
    if path is not None:
        path.write_text(json.dumps(data))


def run_finite_suite(cfg: RunConfig) -> list[VerificationReport]:
    ts = [cfg.t] if cfg.t is not None else list(bounds.FINITE_T_RANGE)
    ckpt_path = _checkpoint_path(cfg)
    ckpt = _load_checkpoint(ckpt_path) if cfg.resume else {}
    reports: list[VerificationReport] = []
    for t in ts:
        reports.append(bounds.verify_threshold_floor(t))
        started = time.perf_counter()
        done: dict[str, dict] = ckpt.get(str(t), {})
        ks = [k for k in bounds.finite_sweep_ks(t) if str(k) not in done]
        if ks:
            if cfg.workers > 1:
                with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                    for k, chunk in zip(
                        ks, pool.map(bounds.finite_sweep_chunk, [t] * len(ks), [[k] for k in ks])
                    ):
                        done[str(k)] = chunk
            else:
                for k in ks:
                    done[str(k)] = bounds.finite_sweep_chunk(t, [k])
            ckpt[str(t)] = done
            _store_checkpoint(ckpt_path, ckpt)
        merged = bounds.merge_finite_chunks(
            [done[key] for key in sorted(done, key=int)]
        )
        ok = not merged["failures"]
        ratio = Fraction(merged["max_num"], merged["max_den"]) if merged["max_den"] else None
        reports.append(
            VerificationReport(
                f"finite-sweep[t={t}]",
                "verified" if ok else "refuted",
                lhs=ratio,
                rhs=Fraction(1),
                witness={
                    "cells": merged["cells"],
                    "argmax": list(merged["argmax"]) if merged["argmax"] else None,
                    "resumed": bool(cfg.resume),
                    "failures": merged["failures"][:10],
                },
                elapsed_ms=(time.perf_counter() - started) * 1000,
            )
        )
    return reports


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def run_verify(cfg: RunConfig) -> tuple[int, str]:
    if cfg.suite.startswith("search-"):
        return run_search(cfg)
    if cfg.suite == "bounds-all":
        reports = bounds.run_bounds_suite(cfg.t_max)
    elif cfg.suite == "case2-finite":
        reports = run_finite_suite(cfg)
    elif cfg.suite == "walk-oracle":
        reports = suites.run_walk_oracle()
    elif cfg.suite == "measure-oracle":
        reports = suites.run_measure_oracle()
    elif cfg.suite == "stability":
        t = cfg.t if cfg.t is not None else 14
        n = cfg.n if cfg.n is not None else (t + 1) * (t + 1)
        k = cfg.k if cfg.k is not None else t + 1
        reports = bounds.verify_stability(t, n, k)
    elif cfg.suite == "graphs":
        reports = suites.run_graphs(seed=cfg.seed)
    else:  # pragma: no cover - guarded by validate()
        raise ValueError(cfg.suite)
    payload = reports_to_json(reports) if cfg.fmt == "json" else reports_to_csv(reports)
    return exit_code(reports), payload


def search_result_to_obj(cfg: RunConfig, result: SearchResult) -> dict:
    params = {
        "suite": cfg.suite,
        "n": cfg.n,
        "k": cfg.k,
        "t": cfg.t,
        "p": encode_value(cfg.p),
        "m": cfg.m,
        "shifted": cfg.shifted,
    }
    if cfg.suite == "search-seq":
        from .seq import seq_family_to_text

        families = [
            [seq_family_to_text(a), seq_family_to_text(b)] for a, b in result.witnesses[:8]
        ]
    else:
        families = [
            [family_to_text(a), family_to_text(b)] for a, b in result.witnesses[:8]
        ]
    return {
        "params": {k: v for k, v in params.items() if v is not None},
        "max_product": str(result.max_product),
        "witness_families": families,
        "witness_count": result.witness_count,
        "witness_classes": list(result.witness_classes),
        "matched_construction": result.matched_construction,
        "exhaustive": result.exhaustive,
        "elapsed_ms": round(result.elapsed_ms, 3),
        "notes": encode_value(result.notes),
    }


def run_search(cfg: RunConfig) -> tuple[int, str]:
    budget = SearchBudget(restrict_shifted=cfg.shifted)
    if cfg.suite == "search-uniform":
        result = max_uniform_product(cfg.n, cfg.k, cfg.t, budget)
    elif cfg.suite == "search-weight":
        result = max_weight_product(cfg.n, cfg.t, cfg.p, budget)
    else:
        result = verify_seq_theorem(cfg.n, cfg.m, cfg.t, budget)
    payload = json.dumps(search_result_to_obj(cfg, result), indent=2)
    return (0 if result.exhaustive else 2), payload


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        cfg = config_from_args(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        code, payload = run_verify(cfg)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    if cfg.out:
        Path(cfg.out).write_text(payload + "\n")
    else:
        print(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
