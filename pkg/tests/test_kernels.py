import json
import os
import subprocess
import sys
import textwrap

import numpy as np
import pytest

from heckechain import _kernels
from heckechain._kernels import rref_mod, sieve_scan


def reference_rref(a, p):
    """Naive row reduction over F_p, independent of the kernel code."""
    a = [[int(x) % p for x in row] for row in a]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, r, pivots


def test_kernel_path_flag_is_consistent():
    assert _kernels.KERNEL_PATH in ("numba", "numpy")
    assert (_kernels.KERNEL_PATH == "numba") == _kernels.USING_NUMBA


def test_rref_matches_reference():
    rng = np.random.default_rng(5077)
    for p in (2, 5, 101, 10007):
        for shape in ((1, 1), (3, 5), (5, 3), (8, 8), (12, 4)):
            a = rng.integers(0, p, size=shape).astype(np.int64)
            want, want_rank, want_piv = reference_rref(a.tolist(), p)
            got = a.copy()
            rank, piv = rref_mod(got, p)
            assert rank == want_rank
            assert piv.tolist() == want_piv
            assert got.tolist() == want


def test_rref_lanes_agree_in_process():
    rng = np.random.default_rng(11)
    for _ in range(20):
        p = int(rng.choice([5, 97, 997]))
        a = rng.integers(0, p, size=(10, 7)).astype(np.int64)
        via_numpy = a.copy()
        rank_np, piv_np = _kernels._rref_mod_numpy(via_numpy, p)
        via_public = a.copy()
        rank, piv = rref_mod(via_public, p)
        assert rank == rank_np
        assert piv.tolist() == piv_np[:rank_np].tolist()
        assert np.array_equal(via_public, via_numpy)


def test_rref_edge_cases():
    rank, piv = rref_mod(np.empty((0, 4), dtype=np.int64), 7)
    assert rank == 0 and piv.size == 0
    with pytest.raises(TypeError, match="int64"):
        rref_mod(np.zeros((2, 2), dtype=np.int32), 7)
    with pytest.raises(OverflowError, match="int64"):
        rref_mod(np.zeros((2, 2), dtype=np.int64), 2**33)


def sieve_inputs(ells_allowed):
    """Pack {ell: allowed residues} into the flat lookup the kernel expects."""
    ells = np.array(sorted(ells_allowed), dtype=np.int64)
    offs = []
    flat = []
    pos = 0
    for l in ells:
        offs.append(pos)
        row = [0] * int(l)
        for r in ells_allowed[int(l)]:
            row[r] = 1
        flat.extend(row)
        pos += int(l)
    return ells, np.array(flat, dtype=np.int64), np.array(offs, dtype=np.int64)


def test_sieve_scan_matches_brute_force():
    allowed = {5: {1, 4}, 7: {1, 2, 4}, 11: {3, 5}}
    ells, qr_flat, qr_off = sieve_inputs(allowed)
    x0, step, t_start, count = 3, 4, 0, 4000
    got = sieve_scan(x0, step, t_start, count, ells, qr_flat, qr_off)
    want = []
    for t in range(t_start, t_start + count):
        n = x0 + t * step
        if all(n % l in allowed[l] for l in allowed):
            want.append(n)
            if len(want) == 64:
                break
    assert got == want
    assert len(got) == 64

    via_numpy = _kernels._sieve_scan_numpy(x0, step, t_start, count, ells, qr_flat, qr_off)
    assert [int(h) for h in via_numpy] == want


def test_sieve_scan_empty_window():
    allowed = {5: {1}}
    ells, qr_flat, qr_off = sieve_inputs(allowed)
    assert sieve_scan(0, 5, 1, 100, ells, qr_flat, qr_off) == []


PROBE = textwrap.dedent("""
    import json
    import numpy as np
    from heckechain import _kernels
    from heckechain.modsym import symbol_space
    from heckechain.mlt import find_good_dihedral

    rng = np.random.default_rng(5077)
    a = rng.integers(0, 10007, size=(12, 9)).astype(np.int64)
    rank, piv = _kernels.rref_mod(a, 10007)
    pair = find_good_dihedral(10)
    print(json.dumps({
        "path": _kernels.KERNEL_PATH,
        "rank": rank,
        "piv": piv.tolist(),
        "rref": a.tolist(),
        "hecke_23_4_13_T2": symbol_space(23, 4, 13).hecke_matrix(2).tolist(),
        "hecke_11_2_7_T3": symbol_space(11, 2, 7).hecke_matrix(3).tolist(),
        "gd10": [pair.p, pair.q],
    }))
""")


def run_probe(pure: bool) -> dict:
    env = dict(os.environ)
    if pure:
        env["HECKECHAIN_PURE_NUMPY"] = "1"
    else:
        env.pop("HECKECHAIN_PURE_NUMPY", None)
    out = subprocess.run(
        [sys.executable, "-c", PROBE],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(out.stdout)


@pytest.mark.slow
def test_pure_numpy_lane_matches_default_lane():
    pure = run_probe(pure=True)
    default = run_probe(pure=False)
    assert pure["path"] == "numpy"
    for key in ("rank", "piv", "rref", "hecke_23_4_13_T2", "hecke_11_2_7_T3", "gd10"):
        assert pure[key] == default[key], f"lane mismatch on {key}"
