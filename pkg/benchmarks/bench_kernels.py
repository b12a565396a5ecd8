"""Time the compiled kernels against the pure-numpy fallback.

Runs each kernel on both lanes in one process by calling the lane
functions directly, so the numbers are comparable without subprocess
noise. Under HECKECHAIN_PURE_NUMPY=1 (or without numba installed) only
the numpy lane exists and the script reports it alone.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from heckechain import _kernels
from heckechain.arith import crt_pair, legendre, primes_up_to
from heckechain.modsym import P1List, merel_matrices


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_rref(repeats):
    rng = np.random.default_rng(2)
    rows = []
    for n in (128, 256, 512):
        a = rng.integers(0, 10007, size=(n, n)).astype(np.int64)
        lanes = {"numpy": lambda: _kernels._rref_mod_numpy(a.copy(), 10007)}
        if _kernels.USING_NUMBA:
            lanes["numba"] = lambda: _kernels._rref_mod_numba(a.copy(), 10007)
            lanes["numba"]()  # compile before timing
        rows.append((f"rref_mod {n}x{n}", {k: best_of(f, repeats) for k, f in lanes.items()}))
    return rows


def bench_hecke(repeats):
    N, k, ell, q = 97, 4, 13, 31
    p1 = P1List(N)
    mats = np.array(merel_matrices(q), dtype=np.int64)
    n = len(p1) * (k - 1)
    C = _kernels._binomial_table(k, ell)

    def numpy_lane():
        acc = np.zeros((n, n), dtype=np.int64)
        _kernels._hecke_accum_numpy(acc, mats, p1.table, p1.reps, k, N, ell)

    lanes = {"numpy": numpy_lane}
    if _kernels.USING_NUMBA:

        def numba_lane():
            acc = np.zeros((n, n), dtype=np.int64)
            _kernels._hecke_accum_numba(acc, mats, p1.table, p1.reps, k, N, ell, C)

        lanes["numba"] = numba_lane
        lanes["numba"]()
    label = f"hecke_accum N={N} k={k} q={q} ({mats.shape[0]} mats)"
    return [(label, {k_: best_of(f, repeats) for k_, f in lanes.items()})]


def bench_sieve(repeats):
    p = 109
    ells = [l for l in primes_up_to(101) if l != 2]
    qr_off, qr_flat = [], []
    for l in ells:
        qr_off.append(len(qr_flat))
        qr_flat.extend(1 if r and legendre(r, l) == 1 else 0 for r in range(l))
    ells_a = np.array(ells, dtype=np.int64)
    flat_a = np.array(qr_flat, dtype=np.int64)
    off_a = np.array(qr_off, dtype=np.int64)
    x0, step = crt_pair(1, 8, p - 1, p)
    count = 1 << 17

    lanes = {
        "numpy": lambda: _kernels._sieve_scan_numpy(
            x0, step, 0, count, ells_a, flat_a, off_a
        )
    }
    if _kernels.USING_NUMBA:
        lanes["numba"] = lambda: _kernels._sieve_scan_numba(
            np.int64(x0), np.int64(step), np.int64(0), np.int64(count),
            ells_a, flat_a, off_a,
        )
        lanes["numba"]()
    label = f"sieve_scan window={count} primes<=101"
    return [(label, {k: best_of(f, repeats) for k, f in lanes.items()})]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args(argv)

    print(f"kernel path: {_kernels.KERNEL_PATH}")
    rows = []
    rows += bench_rref(args.repeats)
    rows += bench_hecke(args.repeats)
    rows += bench_sieve(args.repeats)

    width = max(len(label) for label, _ in rows)
    for label, t in rows:
        parts = [f"{lane} {t[lane] * 1e3:9.2f} ms" for lane in sorted(t)]
        if "numba" in t and "numpy" in t:
            parts.append(f"speedup {t['numpy'] / t['numba']:6.1f}x")
        print(f"{label:<{width}}  " + "  ".join(parts))


if __name__ == "__main__":
    main()
