"""Benchmark the posting-list kernels: numba backend vs. pure-numpy fallback.

Times the four hot kernels on synthetic posting data and one end-to-end query
mix on a generated index. The numba path is warmed up once before timing so
JIT compilation is excluded.

Run:

    python benchmarks/bench_kernels.py [--rows 2000000] [--repeats 5]
"""

import argparse
import statistics
import time

import numpy as np

from contextsearch import kernels
from contextsearch.contexts import make_context
from contextsearch.index import build_index, intersect, sort_postings
from contextsearch.ontology import Ontology


def make_kernel_inputs(rows, rng):
    values = rng.integers(0, rows // 4, size=rows).astype(np.int64)
    sorted_set = np.unique(rng.integers(0, rows // 4, size=rows // 50).astype(np.int64))
    keys = rng.integers(0, rows // 100 + 1, size=rows).astype(np.int64)
    weights = np.ones(rows, dtype=np.int64)
    cids = np.sort(rng.integers(0, rows // 8 + 1, size=rows).astype(np.int64))
    iids = rng.integers(0, 1000, size=rows).astype(np.int64)
    pos = rng.integers(1, 30, size=rows).astype(np.int64)
    cl = sort_postings(cids, iids, weights.copy(), pos)
    a = np.unique(rng.integers(0, rows, size=rows // 4).astype(np.int64))
    b = np.unique(rng.integers(0, rows, size=rows // 4).astype(np.int64))
    return {
        "membership_mask": (values, sorted_set),
        "aggregate_scores": (keys, weights),
        "dedup_mask": (cl.cids, cl.iids, cl.positions),
        "intersect_sorted": (a, b),
    }


def time_call(fn, args, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), statistics.mean(times)


def bench_kernels(rows, repeats):
    rng = np.random.default_rng(0)
    inputs = make_kernel_inputs(rows, rng)
    results = {}
    for backend in ("numpy", "numba"):
        kernels.set_backend(backend)
        for name, args in inputs.items():
            getattr(kernels, name)(*args)    # warm-up (JIT compile on numba)
            best, mean = time_call(getattr(kernels, name), args, repeats)
            results.setdefault(name, {})[backend] = (best, mean)
    kernels.set_backend("auto")
    return results


def bench_end_to_end(n_contexts, repeats):
    rng = np.random.default_rng(1)
    words = [f"w{i:04d}" for i in range(1200)]
    onto = Ontology()
    onto.class_names = ["Entity"]
    onto.class_ids = {"Entity": 0}
    onto.root = 0
    onto.parents = [set()]
    onto.children = [set()]
    onto.entity_names = [f"E{i:03d}" for i in range(300)]
    onto.entity_ids = {n: i for i, n in enumerate(onto.entity_names)}
    onto.entity_classes = [{0} for _ in onto.entity_names]
    onto.direct_members = [set(range(300))]

    contexts = []
    widx = rng.integers(0, len(words), size=n_contexts * 10)
    eidx = rng.integers(0, 300, size=n_contexts * 2)
    for cid in range(n_contexts):
        items = [words[i] for i in widx[cid * 10:(cid + 1) * 10]]
        items.append(int(eidx[cid * 2]))
        items.append(int(eidx[cid * 2 + 1]))
        contexts.append(make_context(cid, 0, cid, items))
    index = build_index(contexts, onto)

    pairs = [(words[int(i)], words[int(j)])
             for i, j in zip(rng.integers(0, len(words), 40),
                             rng.integers(0, len(words), 40))]

    def run_queries():
        for w1, w2 in pairs:
            cl = intersect([index.fetch_block(w1), index.fetch_block(w2[:4] + "*")])
            from contextsearch.index import entities_in_contexts
            entities_in_contexts(cl)

    results = {}
    for backend in ("numpy", "numba"):
        kernels.set_backend(backend)
        run_queries()
        best, mean = time_call(run_queries, (), repeats)
        results[backend] = (best, mean)
    kernels.set_backend("auto")
    return results


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rows", type=int, default=2_000_000)
    ap.add_argument("--contexts", type=int, default=50_000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    print(f"kernel micro-benchmarks ({args.rows} rows, best of {args.repeats})")
    header = f"{'kernel':20s} {'numpy (ms)':>12s} {'numba (ms)':>12s} {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for name, res in bench_kernels(args.rows, args.repeats).items():
        np_ms = res["numpy"][0] * 1000
        nb_ms = res["numba"][0] * 1000
        print(f"{name:20s} {np_ms:12.2f} {nb_ms:12.2f} {np_ms / nb_ms:8.2f}x")

    print(f"\nend-to-end query mix ({args.contexts} contexts, 40 queries, "
          f"best of {args.repeats})")
    res = bench_end_to_end(args.contexts, args.repeats)
    np_ms = res["numpy"][0] * 1000
    nb_ms = res["numba"][0] * 1000
    print(f"{'numpy':20s} {np_ms:12.2f} ms")
    print(f"{'numba':20s} {nb_ms:12.2f} ms   ({np_ms / nb_ms:.2f}x)")


if __name__ == "__main__":
    main()
