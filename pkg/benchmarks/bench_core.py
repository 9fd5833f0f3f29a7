#!/usr/bin/env python3
"""Benchmark: compiled core vs pure-Python core on the hot loops.

Run from the repository root after building the extension in place:

    python setup.py build_ext --inplace
    PYTHONPATH=src python benchmarks/bench_core.py

Both backends produce identical outputs (the equivalence suite enforces
this); the only question here is speed.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from mirrorlab import _core  # noqa: E402
from mirrorlab._core import _pycore  # noqa: E402
from mirrorlab.engine import GameConfig  # noqa: E402
from mirrorlab.streamrec import select_prime  # noqa: E402


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return time.perf_counter() - t0, out


def bench_batch(label, cfg, alice, bob, trials_fast, trials_py):
    tf, rf = timed(_core.play_batch, cfg, alice, bob, 1, 0, trials_fast)
    tp, rp = timed(_core.play_batch, cfg, alice, bob, 1, 0, trials_py,
                   force_python=True)
    per_fast = tf / trials_fast * 1e6
    per_py = tp / trials_py * 1e6
    print(f"{label:<42} {per_fast:>10.1f} {per_py:>12.1f} {per_py / per_fast:>8.0f}x")


def bench_sums():
    f = select_prime(10_000)
    xs = list(range(1, 9_937))
    tf, rf = timed(_core.power_sums, xs, 64, f.q)
    tp, rp = timed(_pycore.power_sums, xs, 64, f.q)
    assert rf == rp
    print(f"{'power_sums n=1e4 k=64':<42} {tf * 1e3:>9.1f}ms {tp * 1e3:>11.1f}ms "
          f"{tp / tf:>8.0f}x")
    e = rf
    tf, rf2 = timed(_core.poly_root_scan, e, 10_000, f.q)
    tp, rp2 = timed(_pycore.poly_root_scan, e, 10_000, f.q)
    assert rf2 == rp2
    print(f"{'poly_root_scan n=1e4 k=64':<42} {tf * 1e3:>9.1f}ms {tp * 1e3:>11.1f}ms "
          f"{tp / tf:>8.0f}x")


def main():
    if not _core.HAVE_FAST:
        print("compiled core not available; nothing to compare")
        return
    print(f"{'game batches':<42} {'fast/game':>10} {'python/game':>12} {'speedup':>8}")
    print(f"{'(microseconds per game)':<42}")
    bench_batch("rand-log vs smallest-unsaid, n=100",
                GameConfig(100), "rand-log", "smallest-unsaid", 200_000, 2_000)
    bench_batch("rand-sqrt vs random-unsaid, n=400",
                GameConfig(400), "rand-sqrt", "random-unsaid", 2_000, 40)
    bench_batch("random-unsaid vs mirror, n=1000",
                GameConfig(1000), "random-unsaid", "mirror", 10_000, 200)
    print()
    bench_sums()


if __name__ == "__main__":
    main()
