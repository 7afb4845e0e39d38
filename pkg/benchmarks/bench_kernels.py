"""Compare the compiled and pure-Python kernels on representative inputs.

Run: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from grpring import _pykernels, orders
from grpring.abgroups import FinAbGroup, hom_group
from grpring.starkdec import stark_context

try:
    from grpring import _ckernels
except ImportError:
    _ckernels = None


def scan_case(group_inv):
    ring = orders.group_ring(orders.int_order(), FinAbGroup(group_inv))
    d = stark_context(ring).d
    hg = hom_group(d.tgt, d.src)
    return f"Z[{group_inv}] |Hom|={hg.order}", (d.matrix, d.src.invariants, d.tgt.invariants, hg.steps, hg.sizes)


def mul_case(group_inv, count=200, seed=0):
    ring = orders.group_ring(orders.int_order(), FinAbGroup(group_inv))
    rng = random.Random(seed)
    pairs = [([rng.randint(-99, 99) for _ in range(ring.rank)], [rng.randint(-99, 99) for _ in range(ring.rank)])
             for _ in range(count)]
    return f"Z[{group_inv}] rank {ring.rank}, {count} products", ring, pairs


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'kernel':10} {'case':36} " + " ".join(f"{n:>10}" for n, _ in impls) + "   speedup")
    rows = []
    for inv in [(2, 2), (2, 4), (2, 2, 2)]:
        label, sargs = scan_case(inv)
        for kname in ["id0_scan", "unit_scan"]:
            times = [best(lambda m=m: getattr(m, kname)(*sargs), args.repeat) for _, m in impls]
            rows.append((kname, label, times))
    for inv in [(6,), (2, 2, 2), (4, 4)]:
        label, ring, pairs = mul_case(inv)
        times = [best(lambda m=m: [m.order_mul(ring._table, ring.rank, x, y) for x, y in pairs], args.repeat)
                 for _, m in impls]
        rows.append(("order_mul", label, times))
    for kname, label, times in rows:
        speed = f"{times[0] / times[1]:8.1f}x" if len(times) > 1 else "       n/a"
        print(f"{kname:10} {label:36} " + " ".join(f"{t * 1000:8.2f}ms" for t in times) + " " + speed)


if __name__ == "__main__":
    main()
