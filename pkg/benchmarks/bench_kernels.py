#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Two layers:
  * micro: the four-cell MI kernel and the top-2 affinity ranking loop,
    called the way the decoder calls them (many small candidate arrays);
  * end-to-end: train + evaluate the PERTINENT strategy on a planted
    corpus, once per backend (subprocess, so the import-time backend
    selection is exercised for real).

Usage: python benchmarks/bench_kernels.py [--end-to-end]
"""

import argparse
import os
import random
import subprocess
import sys
import time
from array import array

from semdec._kernels import pykernels

try:
    from semdec._kernels import _cykernels
except ImportError:
    _cykernels = None


def bench_mi(kern, tables, repeats):
    t0 = time.perf_counter()
    acc = 0.0
    for _ in range(repeats):
        for n11, nt, nc, total in tables:
            acc += kern.mi_avg_counts(n11, nt, nc, total, 0.5)
    return time.perf_counter() - t0, acc


def bench_rank(kern, problems, repeats):
    t0 = time.perf_counter()
    acc = 0
    for _ in range(repeats):
        for joint, marg, n_target, total in problems:
            best, _, _, _ = kern.rank_top2_counts(joint, marg, n_target, total, 0.5)
            acc += best
    return time.perf_counter() - t0, acc


def run_micro():
    rng = random.Random(0)
    tables = []
    for _ in range(2000):
        n11 = rng.randint(0, 40)
        n10 = rng.randint(0, 40)
        n01 = rng.randint(0, 40)
        n00 = rng.randint(1, 400)
        tables.append((float(n11), float(n11 + n10), float(n11 + n01),
                       float(n11 + n10 + n01 + n00)))
    problems = []
    for _ in range(500):
        n = rng.randint(2, 12)  # typical decode-time prefix length
        joint = array("d", (rng.randint(0, 30) for _ in range(n)))
        marg = array("d", (j + rng.randint(0, 50) for j in joint))
        problems.append((joint, marg, float(rng.randint(1, 60)), 500.0))

    backends = [("python", pykernels)]
    if _cykernels is not None:
        backends.append(("cython", _cykernels))

    print(f"{'kernel':<22} {'backend':<8} {'calls/s':>12}")
    results = {}
    for name, kern in backends:
        secs, _ = bench_mi(kern, tables, repeats=50)
        rate = 50 * len(tables) / secs
        results[("mi", name)] = rate
        print(f"{'mi_avg_counts':<22} {name:<8} {rate:>12.0f}")
    for name, kern in backends:
        secs, _ = bench_rank(kern, problems, repeats=50)
        rate = 50 * len(problems) / secs
        results[("rank", name)] = rate
        print(f"{'rank_top2_counts':<22} {name:<8} {rate:>12.0f}")
    if _cykernels is not None:
        print(f"\nspeedup: mi_avg x{results[('mi', 'cython')] / results[('mi', 'python')]:.1f}, "
              f"rank_top2 x{results[('rank', 'cython')] / results[('rank', 'python')]:.1f}")
    else:
        print("\ncompiled extension not built; only the fallback was timed")


_E2E_SNIPPET = """
import time
import semdec
from semdec.evaluation import (default_planted_spec, generate_synthetic_corpus,
                               train_strategy, evaluate)
from semdec.model import TrainConfig
spec = default_planted_spec()
corpus = generate_synthetic_corpus(spec, 800, 0)
lex, cat = spec.build_lexicon(), spec.catalogs()
cfg = TrainConfig(field=spec.field)
t0 = time.perf_counter()
for _ in range(3):
    variant = train_strategy("PERTINENT", corpus, cat, cfg, lex)
    evaluate(variant, corpus, lex)
print(f"{semdec.KERNEL_BACKEND} {time.perf_counter() - t0:.3f}")
"""


def run_end_to_end():
    print("\ntrain+evaluate PERTINENT, 800 utterances, 3 rounds:")
    for force_pure in (False, True):
        env = dict(os.environ)
        if force_pure:
            env["SEMDEC_PURE_PYTHON"] = "1"
        else:
            env.pop("SEMDEC_PURE_PYTHON", None)
        out = subprocess.run([sys.executable, "-c", _E2E_SNIPPET],
                             capture_output=True, text=True, env=env, check=True)
        backend, secs = out.stdout.split()
        print(f"  backend={backend:<8} {secs}s")


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--end-to-end", action="store_true",
                        help="also run the subprocess train/evaluate benchmark")
    args = parser.parse_args()
    run_micro()
    if args.end_to_end:
        run_end_to_end()


if __name__ == "__main__":
    main()
