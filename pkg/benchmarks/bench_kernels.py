"""Time the integer kernels with numba and with the numpy fallback.

Each backend runs in its own interpreter because the choice is made at import
time.  Outputs are hashed so the two backends can be checked for agreement.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import subprocess
import sys
import time

import numpy as np

P = 2147483629


def _cases(rng):
    rref = rng.integers(0, P, size=(300, 400), dtype=np.int64)
    a = rng.integers(0, P, size=(200, 200), dtype=np.int64)
    b = rng.integers(0, P, size=(200, 200), dtype=np.int64)
    return rref, a, b


def _random_matchings(rng, n, count):
    """Random non-crossing diagrams on n strands as partner arrays."""
    from tlfusion.tl import enumerate_basis

    basis = enumerate_basis(n)
    picks = rng.integers(0, len(basis), size=count)
    return np.array([basis[k].partner for k in picks], dtype=np.int64)


def worker(repeat: int) -> dict:
    from tlfusion import _accel

    rng = np.random.default_rng(0)
    rref, a, b = _cases(rng)
    n = 10
    tops, bottoms = _random_matchings(rng, n, 20000), _random_matchings(rng, n, 20000)
    # warm-up triggers compilation
    _accel.rref_modp(rref[:5, :5].copy(), P)
    _accel.matmul_modp(a[:3, :3], b[:3, :3], P)
    _accel.compose_tl_batch(tops[:3], bottoms[:3], n)

    def timed(fn):
        best, out = float("inf"), None
        for _ in range(repeat):
            t = time.perf_counter()
            out = fn()
            best = min(best, time.perf_counter() - t)
        return best, out

    results = {"numba": _accel.NUMBA_ENABLED}
    t, _ = timed(lambda: _accel.rref_modp(rref.copy(), P))
    red = rref.copy()
    _accel.rref_modp(red, P)
    results["rref_modp 300x400"] = [t, hashlib.sha256(red.tobytes()).hexdigest()[:16]]
    t, prod = timed(lambda: _accel.matmul_modp(a, b, P))
    results["matmul_modp 200x200"] = [t, hashlib.sha256(prod.tobytes()).hexdigest()[:16]]
    t, (comp, loops) = timed(lambda: _accel.compose_tl_batch(tops, bottoms, n))
    results["compose_tl_batch 20000 x N=10"] = [t, hashlib.sha256(comp.tobytes() + loops.tobytes()).hexdigest()[:16]]
    return results


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        print(json.dumps(worker(args.repeat)))
        return 0
    runs = {}
    for label, disable in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, TLFUSION_DISABLE_NUMBA=disable)
        out = subprocess.run([sys.executable, __file__, "--worker", "--repeat", str(args.repeat)],
                             env=env, capture_output=True, text=True, check=True)
        runs[label] = json.loads(out.stdout.strip().splitlines()[-1])
    print(f"{'kernel':32s} {'numba (s)':>11s} {'numpy (s)':>11s} {'speed-up':>9s}  agree")
    agree_all = True
    for key in runs["numba"]:
        if key == "numba":
            continue
        (tn, hn), (tp, hp) = runs["numba"][key], runs["numpy"][key]
        agree_all &= hn == hp
        print(f"{key:32s} {tn:11.4f} {tp:11.4f} {tp / tn:9.1f}  {'yes' if hn == hp else 'NO'}")
    if not runs["numba"]["numba"]:
        print("numba was not importable; both columns used the fallback")
    return 0 if agree_all else 1


if __name__ == "__main__":
    sys.exit(main())
