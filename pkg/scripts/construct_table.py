"""Tabulate malnormal constructions over a grid of avoid-sets and target ranks.

    python scripts/construct_table.py
    python scripts/construct_table.py --random 200 --seed 3   # random avoid-sets, both policies
"""

from __future__ import annotations

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from vfbc import construct as cn
from vfbc import stallings as st
from vfbc.oracles import brute_exits_everywhere, random_subgroup
from vfbc.words import parse_word_list

DEFAULT_AVOID = ("a", "b", "a;b", "a,baB", "ab;aab", "aa,abaBa")


@dataclass
class TableConfig:
    rank: int = 2
    ranks: tuple[int, ...] = (1, 2, 3)
    seed: int = 0
    random: int = 0


def parse_avoid(text: str, rank: int) -> list[st.Subgroup]:
    """``;`` separates subgroups, ``,`` separates generators."""
    return [st.subgroup_graph(parse_word_list(part, rank), rank) for part in text.split(";")]


def table(cfg: TableConfig) -> None:
    print(f"{'avoid':<12} {'n':>2} {'f':<10} {'p':>2} {'q':>2}  {'max gen len':>11}  checks")
    for text in DEFAULT_AVOID:
        avoid = parse_avoid(text, cfg.rank)
        for n in cfg.ranks:
            cert = cn.construct_malnormal(cn.AvoidanceProblem(cfg.rank, n, tuple(avoid), cfg.seed))
            longest = max(len(w) for w in cert.generators)
            status = "ok" if cert.valid else "FAILED " + ",".join(k for k, v in cert.checks.items() if not v)
            print(f"{text:<12} {n:>2} {str(cert.f_word):<10} {cert.p:>2} {cert.q:>2}  {longest:>11}  {status}")


def policy_sweep(cfg: TableConfig) -> None:
    """Compare the fixed-target and nearest-exit policies on random avoid-sets."""
    rng = random.Random(cfg.seed)
    steps = {"fixed": Counter(), "nearest": Counter()}
    lengths = {"fixed": 0, "nearest": 0}
    done = 0
    while done < cfg.random:
        rank = rng.choice([2, 3])
        avoid = [random_subgroup(rng, rank, max_vertices=6) for _ in range(rng.randint(1, 3))]
        if any(st.index(F) != st.INFINITE for F in avoid):
            continue
        for policy in steps:
            trace: list = []
            f = cn.incompletable_word(avoid, rank, policy=policy, trace=trace)
            assert all(brute_exits_everywhere(f, F) for F in avoid)
            steps[policy].update(step for _, _, step in trace)
            lengths[policy] += len(f)
        done += 1
    for policy, counts in steps.items():
        print(f"{policy:>8}: mean |f| {lengths[policy] / max(done, 1):.2f}, steps {dict(sorted(counts.items()))}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rank", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--random", type=int, default=0, help="also sweep this many random avoid-sets")
    args = parser.parse_args()
    cfg = TableConfig(rank=args.rank, seed=args.seed, random=args.random)
    t = time.perf_counter()
    table(cfg)
    if cfg.random:
        policy_sweep(cfg)
    print(f"({time.perf_counter() - t:.1f} s)")


if __name__ == "__main__":
    main()
