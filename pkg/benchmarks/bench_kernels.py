"""Compare the compiled and pure-Python kernels on representative inputs.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import itertools
import random
import timeit

from semicanonical import _purekernels

try:
    from semicanonical import _ckernels
except ImportError:
    _ckernels = None


def box_case(d=4, width=7):
    rng = random.Random(1)
    A = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(6)]
    c = [rng.randint(0, 10) for _ in A]
    return A, c, [-width] * d, [width] * d


def mask_case(d=3, k=6):
    facets = [[2, 1, 1], [2, 1, 2], [2, 2, 1], [1, 0, 0]]
    cands = [p for p in itertools.product(range(k), repeat=d)
             if any(p) and all(sum(a * b for a, b in zip(f, p)) >= 0 for f in facets)]
    return cands, facets


def run(repeat):
    cases = {
        "box_points": (box_case(), lambda mod, args: mod.box_points(*args)),
        "irreducible_mask": (mask_case(), lambda mod, args: mod.irreducible_mask(*args)),
    }
    print(f"{'kernel':<18}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, (args, call) in cases.items():
        tp = min(timeit.repeat(lambda: call(_purekernels, args), number=1, repeat=repeat)) * 1e3
        if _ckernels is None:
            print(f"{name:<18}{tp:>14.2f}{'n/a':>14}{'':>10}")
            continue
        assert call(_ckernels, args) == call(_purekernels, args), name
        tc = min(timeit.repeat(lambda: call(_ckernels, args), number=1, repeat=repeat)) * 1e3
        print(f"{name:<18}{tp:>14.2f}{tc:>14.2f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    run(ap.parse_args().repeat)
