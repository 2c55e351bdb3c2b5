"""Compare the compiled and pure-Python kernels on workloads from the engine.

    python benchmarks/bench_kernels.py [--r 3] [--repeat 3]

Each workload is run with both backends; results are checked equal before
the timings are reported.
"""
from __future__ import annotations

import argparse
import time

from nstqft._kernels import _pyimpl
from nstqft.hopf import small_qsl2
from nstqft.matrix import _to_int_rows
from nstqft.rep import braiding, standard_modules

try:
    from nstqft._kernels import _cimpl
except ImportError:
    _cimpl = None


def workloads(r: int):
    from nstqft.mcg import coend_operators, nested_copairing

    H = small_qsl2(r)
    f = H.field
    d, terms = f.degree, f.phi_terms
    reg = standard_modules(H)["regular"]
    c, _ = _to_int_rows(braiding(reg, reg).matrix.rows)
    yield "spmm c_{H,H} c_{H,H}", "spmm", (c, c, d, terms)
    # monodromy of the coend on the first two legs of R^(2)
    ops = coend_operators(H)
    R2 = nested_copairing(H, 2).matrix
    cols, _ = _to_int_rows({0: {i: v for i, _, v in R2.entries}})
    At, _ = _to_int_rows(ops.Omega.matrix.T.rows)
    Acols = {m: sorted(row.items()) for m, row in At.items()}
    n = H.dim
    yield "apply_local Omega on R^(2)", "apply_local", ([cols[0]], n * n, n * n, Acols, n * n, d, terms)
    vecs = [{k: v} for k, v in list(cols[0].items())[:400]]
    yield "spmv_many c_{H,H} on 400 vectors", "spmv_many", (c, vecs, d, terms)


def bench(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--r", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args(argv)
    if _cimpl is None:
        print("compiled kernels not built; only the Python timings are shown")
    print(f"{'workload':<40} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, kernel, args in workloads(a.r):
        tp, rp = bench(getattr(_pyimpl, kernel), args, a.repeat)
        if _cimpl is None:
            print(f"{name:<40} {tp:>10.4f} {'-':>10} {'-':>8}")
            continue
        tc, rc = bench(getattr(_cimpl, kernel), args, a.repeat)
        if rp != rc:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<40} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
