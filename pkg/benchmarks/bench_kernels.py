#!/usr/bin/env python3
"""
Compare the numba and pure-numpy coefficient kernels.

Part 1 times the truncated convolution and the unit inverse directly.
Part 2 runs one end-to-end state-sum limit in two subprocesses, one with
SPINDEX_NO_JIT=1, and checks that both print the same series.

    python3 benchmarks/bench_kernels.py [--sizes 64 256 1024] [--repeat 20]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from spindex import _kernels as K


def _time(fn, repeat):
    fn()  # warm-up (jit compile on first call)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def bench_conv(sizes, repeat):
    rng = np.random.default_rng(7)
    print(f"{'n':>6} {'numba ms':>10} {'numpy ms':>10} {'python ms':>10}")
    for n in sizes:
        a = rng.integers(-1000, 1000, n).astype(np.int64)
        b = rng.integers(-1000, 1000, n).astype(np.int64)
        ref = K._conv_trunc_numpy(a, b, n)
        row = [n]
        if K.USE_JIT:
            assert np.array_equal(K._conv_trunc_jit(a, b, n), ref)
            row.append(_time(lambda: K._conv_trunc_jit(a, b, n), repeat) * 1e3)
        else:
            row.append(float("nan"))
        row.append(_time(lambda: K._conv_trunc_numpy(a, b, n), repeat) * 1e3)
        la, lb = a.tolist(), b.tolist()
        row.append(_time(lambda: K._conv_trunc_py(la, lb, n), max(1, repeat // 10)) * 1e3)
        print(f"{row[0]:>6} {row[1]:>10.3f} {row[2]:>10.3f} {row[3]:>10.3f}")


def bench_end_to_end(prec):
    # kernels are warmed first so the timing excludes numba import and cache load
    code = (
        "import time;from spindex import statesum,triangulation as T,_kernels as K;"
        "K.conv_trunc(list(range(1,20)),list(range(1,20)),19);K.unit_inverse([1]*40,40);"
        f"t=time.perf_counter();r=statesum.fkb_limit(T.fixture('fig8-2tet'),{prec},n_max={prec + 30});"
        "print(r.I_fkb);print(r.I0);print(r.twoI1);"
        "import sys;print(f'{time.perf_counter()-t:.3f}',file=sys.stderr)"
    )
    outs = {}
    for label, flag in (("numba", ""), ("numpy", "1")):
        env = dict(os.environ, SPINDEX_NO_JIT=flag)
        p = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        outs[label] = p.stdout
        print(f"fkb fig8-2tet prec2={prec}  {label:6s} {p.stderr.strip()} s")
    same = outs["numba"] == outs["numpy"]
    print("identical output:", same)
    return same


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024, 4096])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--prec", type=int, default=61)
    args = ap.parse_args()
    print("jit enabled in this process:", K.USE_JIT)
    bench_conv(args.sizes, args.repeat)
    ok = bench_end_to_end(args.prec)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
