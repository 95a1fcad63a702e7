"""Compare the compiled difference kernels against the numpy fallback.

Run from the repository root after an editable install:

    python3 benchmarks/bench_kernels.py [--reps 5]

Each workload is timed under both backends by reloading the backend module
with DTMOD_BACKEND forced, so one process covers both columns.  Workloads
mirror the hot paths: bulk evaluation of catalog expressions and k-th
symmetric differences over the sup-norm sample grid.
"""

import argparse
import importlib
import os
import time

import numpy as np


def _load(backend):
    os.environ["DTMOD_BACKEND"] = backend
    import dtmod._backend as b

    importlib.reload(b)
    if backend == "compiled" and b.impl.__name__.endswith("_py"):
        return None
    return b.impl


def _workloads():
    import dtmod

    x = np.linspace(-0.999, 0.999, 200_001)
    fns = {
        "poly6": dtmod.catalog_lookup("poly", [0.3, -1.0, 0.0, 2.0, 0.0, 0.5, -0.25]),
        "exp": dtmod.catalog_lookup("exp", [1.0]),
        "abspow3.5": dtmod.catalog_lookup("abspow", [0.0, 3.5]),
    }
    jobs = []
    for name, f in fns.items():
        tab = f._table()
        jobs.append((f"eval {name}", lambda impl, tab=tab: impl.eval_table(*tab, x)))
        for k in (2, 3):
            jobs.append((
                f"diff k={k} {name}",
                lambda impl, tab=tab, k=k: impl.diff_table(
                    *tab, k, 0.05, x[::4].copy(), True),
            ))
    return jobs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    jobs = _workloads()
    results = {}
    for backend in ("python", "compiled"):
        impl = _load(backend)
        if impl is None:
            print("compiled backend unavailable; run pip install -e . with "
                  "Cython present")
            return
        for name, job in jobs:
            job(impl)  # warm up / allocate
            best = min(
                (lambda t0=time.perf_counter(): (job(impl), time.perf_counter() - t0)[1])()
                for _ in range(args.reps)
            )
            results.setdefault(name, {})[backend] = best

    width = max(len(n) for n in results)
    print(f"{'workload':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, row in results.items():
        sp = row["python"] / row["compiled"]
        print(f"{name:<{width}}  {row['python'] * 1e3:>8.2f}ms  "
              f"{row['compiled'] * 1e3:>8.2f}ms  {sp:>7.1f}x")


if __name__ == "__main__":
    main()
