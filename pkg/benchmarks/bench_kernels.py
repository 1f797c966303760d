"""Compiled vs pure-Python kernels: wall time per call and output equality.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import time

import numpy as np

from lprips import _backend
from lprips.complexes import build_tuple_complex
from lprips.metric import INF, LeftInterval, NormDescriptor, from_points


def cases(quick: bool):
    rng = np.random.default_rng(0)
    D = from_points(rng.random((12, 2))).dist
    n = 2000 if quick else 20000
    T = rng.integers(0, 12, size=(n, 6))
    S = np.sort(np.array([rng.choice(12, size=6, replace=False) for _ in range(n // 20)]), axis=1)
    mats = np.stack([from_points(rng.random((3, 2))).dist for _ in range(n)])
    X = from_points(rng.random((7 if quick else 9, 2)))
    C = build_tuple_complex(X, NormDescriptor(2.0), LeftInterval.le(0.6), 3)
    indptr, idx, data = C.boundary(3)
    yield "tuple_weights p=2 (6-tuples)", lambda k: k.tuple_weights(D, T, 2.0, False), n
    yield "tuple_weights p=1 cyclic", lambda k: k.tuple_weights(D, T, 1.0, True), n
    yield "subset_weights p=2 (6-subsets)", lambda k: k.subset_weights(D, S, 2.0, False), len(S)
    yield "stacked_weights sym p=3", lambda k: k.stacked_weights(mats, 3.0, False, True), n
    yield f"reduce_columns Z/2 ({C.size(3)} cols)", lambda k: k.reduce_columns(indptr, idx, data, 2, None, True), C.size(3)
    yield f"reduce_columns Z/3 ({C.size(3)} cols)", lambda k: k.reduce_columns(indptr, idx, data, 3, None, True), C.size(3)


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def timed(fn, kernels, repeat):
    best, out = INF, None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(kernels)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    ap.add_argument("--json", help="also write results here")
    args = ap.parse_args(argv)
    if _backend.compiled_kernels is None:
        print("compiled kernels are not built; run `python setup.py build_ext --inplace`")
        return 1
    py, cy = _backend.get("python"), _backend.get("cython")
    rows = []
    print(f"{'kernel':38s} {'items':>7s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}  equal")
    for name, fn, items in cases(args.quick):
        tp, op = timed(fn, py, args.repeat)
        tc, oc = timed(fn, cy, args.repeat)
        eq = same(op, oc)
        rows.append({"kernel": name, "items": items, "python_s": tp, "cython_s": tc, "speedup": tp / tc, "equal": eq})
        print(f"{name:38s} {items:7d} {tp:10.4f} {tc:10.4f} {tp / tc:7.1f}x  {eq}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0 if all(r["equal"] for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
