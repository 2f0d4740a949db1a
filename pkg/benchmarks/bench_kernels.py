"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each workload runs through both backends on identical inputs; results must
agree, and the table reports the best-of-N wall time per backend.
"""

import argparse
import random
import sys
import timeit
from itertools import combinations

from ramseyforge import _pykernels
from ramseyforge.core import Signature, Structure
from ramseyforge.gallery import gen_products, gen_tournaments

try:
    from ramseyforge import _ckernels
except ImportError:
    _ckernels = None


def chain(n):
    return Structure.build(Signature.of("l", lt=2), n, {"lt": combinations(range(n), 2)})


def shuffled(s, rng):
    perm = list(range(s.size))
    rng.shuffle(perm)
    return Structure(s.sig, s.size, tuple(frozenset(tuple(perm[x] for x in t) for t in ts) for ts in s.tuples))


def workloads():
    rng = random.Random(1)
    products = [shuffled(s, rng) for s in gen_products(5)[:200]]
    tours = gen_tournaments(6)
    cyc = next(s for s in gen_tournaments(3) if len(s.relation("arrow")) == 3 and all(sum(1 for u, _ in s.relation("arrow") if u == x) == 1 for x in range(3)))
    c7 = chain(7)
    masks = []
    pairs = list(combinations(range(6), 2))
    for tri in combinations(range(6), 3):
        m = 0
        for p in combinations(tri, 2):
            m |= 1 << (14 - pairs.index(p))
        masks.append(m)

    def canon(k):
        return [k.canon_search(s.size, s.sig.arities, s.dense) for s in products]

    def embed(k):
        return [k.embed_search(3, t.size, t.sig.arities, cyc.dense, t.dense, [-1] * 3, False) for t in tours]

    def embed_chain(k):
        return k.embed_search(4, 7, c7.sig.arities, chain(4).dense, c7.dense, [-1] * 4, False)

    def defeat(k):
        return k.defeat_search(15, masks)

    return [
        ("canon_search: 200 products on 5 points", canon),
        ("embed_search: 3-cycle into all 56 6-tournaments", embed),
        ("embed_search: 4-chain into 7-chain", embed_chain),
        ("defeat_search: 2^15 colourings of K6 triangles", defeat),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; only the fallback is available", file=sys.stderr)
        return 1
    print(f"{'workload':52} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for name, fn in workloads():
        if fn(_ckernels) != fn(_pykernels):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        print(f"{name:52} {tc:10.4f} {tp:10.4f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
