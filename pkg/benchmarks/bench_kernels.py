"""Timing comparison of the batch-classifier backends.

Builds one classification plan from the bundled example action, runs
classify_batch from every importable backend over shared batches of random
integer covectors, checks the outputs agree bit-for-bit, and prints the
best-of-N wall time and throughput for each backend.

Two plan variants are timed: "mass" marks the rotation block as carrying
base-point mass (equality branch), "free" leaves it unconstrained (norm
branch), so both inner code paths appear in the numbers.

Usage:
    python benchmarks/bench_kernels.py [--sizes 1000,10000,100000]
                                       [--repeats 5] [--seed 0]
"""

import argparse
import time

import numpy as np

from stratakit import groups, ratlin, subgroups
from stratakit.kernels import available_backends


def load_example():
    import importlib.resources as res

    text = (res.files("stratakit") / "specs" / "example.json").read_text("utf-8")
    return groups.load_spec(text)


def build_plan(spec, mass):
    H = subgroups.stabilizer(spec, (1, 0, 0))
    n = spec.n
    intAs, dens = [], []
    for f in H.finite_part:
        flat = [x for row in spec.elements[f] for x in row]
        ints, d = ratlin.clear_denominators(flat)
        intAs.append(np.array(ints, dtype=np.int64).reshape(n, n))
        dens.append(d)
    in_block = {i for b in spec.blocks for i in b}
    nonblock = [i for i in range(n) if i not in in_block]
    return (
        np.array(intAs, dtype=np.int64),
        np.array(dens, dtype=np.int64),
        np.array(spec.blocks, dtype=np.int64).reshape(-1, 2),
        np.array(nonblock, dtype=np.int64),
        np.array([mass] * len(spec.blocks), dtype=np.uint8),
    )


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    spec = load_example()
    backends = available_backends()
    print("backends:", ", ".join(b.BACKEND for b in backends))
    if len(backends) < 2:
        print("note: compiled extension not built, timing the fallback only")
    print("workload: %d finite elements, n=%d" % (len(spec.elements), spec.n))
    print()

    rng = np.random.default_rng(args.seed)
    header = "%-9s %-5s" % ("batch", "plan")
    for b in backends:
        header += "  %22s" % b.BACKEND
    if len(backends) == 2:
        header += "  %8s" % "speedup"
    print(header)

    for size in sizes:
        P = rng.integers(-5, 6, size=(size, spec.n)).astype(np.int64)
        for label, mass in (("mass", 1), ("free", 0)):
            intAs, dens, blocks, nonblock, m_active = build_plan(spec, mass)
            times, outs = [], []
            for b in backends:
                call = lambda: b.classify_batch(intAs, dens, P, blocks, nonblock, m_active)
                times.append(best_time(call, args.repeats))
                outs.append(call())
            for fin, slow in outs[1:]:
                if not ((fin == outs[0][0]).all() and (slow == outs[0][1]).all()):
                    raise SystemExit("backend outputs disagree; benchmark aborted")
            row = "%-9d %-5s" % (size, label)
            for t in times:
                row += "  %8.3f ms (%4.1f M/s)" % (t * 1e3, size / t / 1e6)
            if len(times) == 2:
                row += "  %7.1fx" % (times[0] / times[1])
            print(row)


if __name__ == "__main__":
    main()
