"""Verification suites: oracle comparisons and graph facts.

Each suite returns a list of VerificationReport rows, which the CLI
serializes.  Oracles here are deliberately independent of the closed
forms they check: walk counts come from explicit enumeration of steps,
measure values from sweeping the whole power set.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import graphs as gr
from .measure import WeightParams, hit_probability_exact, hit_probability_limit, mu, mu_threshold_closed
from .report import REFUTED, VERIFIED, VerificationReport
from .setfam import Family, make_weight_counterexample
from .walks import count_hit, count_miss, enumerate_walks, hits_line

DEFAULT_PS = (Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(1, 15))


def _mk(claim_id, ok, lhs=None, rhs=None, witness=None, started=0.0):
    status = VERIFIED if ok else REFUTED
    if status == REFUTED and witness is None:
        witness = {"lhs": lhs, "rhs": rhs}
    elapsed = (time.perf_counter() - started) * 1000 if started else 0.0
    return VerificationReport(claim_id, status, lhs=lhs, rhs=rhs, witness=witness,
                              elapsed_ms=elapsed)


# ---------------------------------------------------------------------------
# walk-count oracle
# ---------------------------------------------------------------------------


def run_walk_oracle(max_steps: int = 12) -> list[VerificationReport]:
    """Closed-form hit/miss counts against step-by-step enumeration for
    every admissible endpoint/line combination within the step budget."""
    started = time.perf_counter()
    cells = 0
    mismatches = []
    for total in range(2, max_steps + 1):
        for y0 in range(1, total):
            x0 = total - y0
            for c in range(1, y0):
                if not y0 < x0 + c:
                    continue
                hit = enumerate_walks(x0, y0, lambda f, c=c: hits_line(f, c))
                miss = enumerate_walks(x0, y0, lambda f, c=c: not hits_line(f, c))
                if hit != count_hit(x0, y0, c) or miss != count_miss(x0, y0, c):
                    mismatches.append((x0, y0, c))
                cells += 1
    return [
        _mk(
            "walk-count-oracle",
            not mismatches,
            witness={"cells": cells, "max_steps": max_steps, "mismatches": mismatches[:10]},
            started=started,
        )
    ]


# ---------------------------------------------------------------------------
# measure oracle
# ---------------------------------------------------------------------------


def _size_counts(n: int, member_test) -> list[int]:
    counts = [0] * (n + 1)
    for m in range(1 << n):
        if member_test(m):
            counts[m.bit_count()] += 1
    return counts


def _weigh(counts: Sequence[int], n: int, p: Fraction) -> Fraction:
    q = 1 - p
    return sum((c * p**s * q ** (n - s) for s, c in enumerate(counts) if c), Fraction(0))


def run_measure_oracle(
    n_max: int = 12,
    t_max: int = 4,
    i_max: int = 2,
    ps: Sequence[Fraction] = DEFAULT_PS,
) -> list[VerificationReport]:
    started = time.perf_counter()
    combos = 0
    bad = []
    for t in range(1, t_max + 1):
        for i in range(0, i_max + 1):
            w = t + 2 * i
            for n in range(w, n_max + 1):
                window = (1 << w) - 1
                counts = _size_counts(n, lambda m: (m & window).bit_count() >= t + i)
                for p in ps:
                    combos += 1
                    if _weigh(counts, n, p) != mu_threshold_closed(n, t, i, p):
                        bad.append({"n": n, "t": t, "i": i, "p": p})
    reports = [
        _mk("measure-threshold-oracle", not bad,
            witness={"combos": combos, "bad": bad[:5]}, started=started)
    ]

    started = time.perf_counter()
    bad = []
    combos = 0
    for t in range(1, t_max + 1):
        for n in range(t + 1, n_max + 1):
            head = (1 << t) - 1
            step_mask = (1 << (t + 1)) - 1
            counts = _size_counts(
                n,
                lambda m: (m & step_mask).bit_count() == t and (m & head) != head,
            )
            for p in ps:
                combos += 1
                q = 1 - p
                if _weigh(counts, n, p) != t * p**t * q:
                    bad.append({"n": n, "t": t, "p": p})
    reports.append(
        _mk("measure-point-events", not bad,
            witness={"combos": combos, "bad": bad[:5]}, started=started)
    )

    started = time.perf_counter()
    bad = []
    combos = 0
    for t in range(1, t_max + 1):
        for n in range(t + 2, n_max + 1):
            fam = make_weight_counterexample(n, t)
            for p in ps:
                combos += 1
                params = WeightParams(n, p)
                q = 1 - p
                closed = p**t - p**t * q ** (n - t) + t * p ** (n - 1) * q
                if mu(fam, params) != closed:
                    bad.append({"n": n, "t": t, "p": p})
    reports.append(
        _mk("measure-counterexample", not bad,
            witness={"combos": combos, "bad": bad[:5]}, started=started)
    )

    started = time.perf_counter()
    mono_ok = True
    detail = None
    for t, p in ((2, Fraction(1, 4)), (3, Fraction(1, 5))):
        limit = hit_probability_limit(t, p)
        prev = Fraction(0)
        for n in range(t, t + 21):
            cur = hit_probability_exact(n, t, p)
            if cur < prev or cur > limit:
                mono_ok, detail = False, {"t": t, "p": p, "n": n}
                break
            prev = cur
        if not mono_ok:
            break
    reports.append(_mk("hit-limit-monotone", mono_ok, witness=detail, started=started))
    return reports


# ---------------------------------------------------------------------------
# graph facts
# ---------------------------------------------------------------------------


def _random_connected_graph(rng: random.Random, size: int, extra: int) -> gr.Graph:
    edges = set()
    order = list(range(size))
    rng.shuffle(order)
    for idx in range(1, size):
        a = order[idx]
        b = order[rng.randrange(idx)]
        edges.add((min(a, b), max(a, b)))
    for _ in range(extra):
        a, b = rng.sample(range(size), 2)
        edges.add((min(a, b), max(a, b)))
    return gr.Graph(size, tuple(sorted(edges)))


def run_graphs(n_max: int = 9, seed: int = 0, pairs: int = 20) -> list[VerificationReport]:
    started = time.perf_counter()
    bad = []
    checked = 0
    for k in range(1, n_max // 2 + 1):
        for n in range(2 * k + 1, n_max + 1):
            g = gr.kneser_graph(n, k)
            checked += 1
            if not gr.is_connected(g) or gr.is_bipartite(g):
                bad.append({"n": n, "k": k})
    reports = [
        _mk("graph-kneser", not bad, witness={"instances": checked, "bad": bad},
            started=started)
    ]

    started = time.perf_counter()
    cyc = gr.kneser_spread_cycle(3)
    ok = (
        len(cyc) == 7
        and len(set(cyc)) == 7
        and all(not cyc[i] & cyc[(i + 1) % 7] for i in range(7))
    )
    reports.append(_mk("graph-kneser[odd-cycle-k3]", ok,
                       witness={"length": len(cyc)}, started=started))

    started = time.perf_counter()
    rng = random.Random(seed)
    bad = []
    for _ in range(pairs):
        g = _random_connected_graph(rng, rng.randint(3, 7), rng.randint(0, 5))
        h = _random_connected_graph(rng, rng.randint(3, 7), rng.randint(0, 5))
        product_connected = gr.is_connected(gr.direct_product(g, h))
        criterion = not gr.is_bipartite(g) or not gr.is_bipartite(h)
        if product_connected != criterion:
            bad.append({"g": g.edges, "h": h.edges})
    c3c5 = gr.direct_product(gr.cycle_graph(3), gr.cycle_graph(5))
    c4c4 = gr.direct_product(gr.cycle_graph(4), gr.cycle_graph(4))
    fixed_ok = (
        gr.is_connected(c3c5)
        and not gr.is_bipartite(c3c5)
        and not gr.is_connected(c4c4)
    )
    reports.append(
        _mk("graph-product", not bad and fixed_ok,
            witness={"random_pairs": pairs, "bad": bad[:3], "fixed_cases": fixed_ok},
            started=started)
    )
    return reports
