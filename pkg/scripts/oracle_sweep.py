"""Cross-check fiber-product intersections and malnormality against brute force.

    python scripts/oracle_sweep.py --cases 200 --seed 1
"""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass

from vfbc import stallings as st
from vfbc.oracles import (MAX_CONJUGATOR, MAX_WITNESS, brute_intersection_witnesses,
                          brute_is_malnormal, landing_pair, random_subgroup)


@dataclass
class SweepConfig:
    cases: int = 200
    seed: int = 1
    rank: int = 2
    max_vertices: int = 6
    max_conj: int = MAX_CONJUGATOR
    max_witness: int = MAX_WITNESS


def intersection_sweep(cfg: SweepConfig) -> dict:
    rng = random.Random(cfg.seed)
    stats = {"pairs": 0, "classes": 0, "mismatches": []}
    for _ in range(cfg.cases):
        H = random_subgroup(rng, cfg.rank, cfg.max_vertices)
        K = random_subgroup(rng, cfg.rank, cfg.max_vertices)
        comps = st.pullback(H, K)
        where = {v: k for k, c in enumerate(comps) for v in c.vertices}
        found = brute_intersection_witnesses(H, K, cfg.max_conj, cfg.max_witness)
        brute = {where[landing_pair(H, K, g, w)] for g, w in found}
        graph = {k for k, c in enumerate(comps) if c.non_contractible}
        stats["pairs"] += 1
        stats["classes"] += len(graph)
        if brute != graph:
            stats["mismatches"].append((str(H), str(K), sorted(brute), sorted(graph)))
    return stats


def malnormal_sweep(cfg: SweepConfig) -> dict:
    rng = random.Random(cfg.seed + 1)
    stats = {"subgroups": 0, "malnormal": 0, "mismatches": []}
    for _ in range(cfg.cases):
        H = random_subgroup(rng, cfg.rank, cfg.max_vertices)
        verdict = st.is_malnormal(H)
        stats["subgroups"] += 1
        stats["malnormal"] += verdict
        if verdict != brute_is_malnormal(H, cfg.max_conj, cfg.max_witness):
            stats["mismatches"].append(str(H))
    return stats


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(SweepConfig()).items():
        parser.add_argument(f"--{name.replace('_', '-')}", type=int, default=default)
    cfg = SweepConfig(**vars(parser.parse_args()))

    t = time.perf_counter()
    inter = intersection_sweep(cfg)
    print(f"intersections: {inter['pairs']} pairs, {inter['classes']} conjugacy classes, "
          f"{len(inter['mismatches'])} mismatches ({time.perf_counter() - t:.1f} s)")
    for row in inter["mismatches"]:
        print("  ", row)

    t = time.perf_counter()
    mal = malnormal_sweep(cfg)
    print(f"malnormality: {mal['subgroups']} subgroups, {mal['malnormal']} malnormal, "
          f"{len(mal['mismatches'])} mismatches ({time.perf_counter() - t:.1f} s)")
    for row in mal["mismatches"]:
        print("  ", row)


if __name__ == "__main__":
    main()
