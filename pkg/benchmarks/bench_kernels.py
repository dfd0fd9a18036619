"""Compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times colour refinement, leaf certificates and the normalizer scan on
Haar graphs, then a whole automorphism search in a subprocess per backend.
"""

import argparse
import os
import subprocess
import sys
import timeit

from haariso import _kernels_py
from haariso.graph import haar
from haariso.groups import make_abelian

try:
    from haariso import _kernels
except ImportError:
    _kernels = None

CASES = [((15,), (0, 1, 5, 14)), ((4, 4), (0, 1, 4, 6, 9)), ((32,), (0, 1, 3, 7, 12, 20))]

SEARCH_SNIPPET = """
from haariso.groups import make_abelian
from haariso.graph import haar, automorphisms
from haariso.kernels import BACKEND
import time
total = 0.0
for factors, S in {cases!r}:
    X = haar(make_abelian(list(factors)), S)
    t = time.perf_counter()
    automorphisms(X, enumerate_elements=False)
    total += time.perf_counter() - t
print(BACKEND, total)
"""


def bench_module(mod, repeat):
    rows = {}
    for factors, S in CASES:
        X = haar(make_abelian(list(factors)), S)
        prep = mod.prepare(X.n, [sorted(s) for s in X.out], [sorted(s) for s in X.inn])
        start = [0] * X.n
        start[0] = 1
        order = list(range(X.n))
        t_ref = min(timeit.repeat(lambda: mod.refine(prep, start), number=20, repeat=repeat)) / 20
        t_cert = min(timeit.repeat(lambda: mod.certificate(prep, order), number=50, repeat=repeat)) / 50
        rows[f"Z{'xZ'.join(map(str, factors))}"] = (t_ref, t_cert)
    G = make_abelian([4])
    elems = [tuple(G.table[g][x] for x in range(4)) + tuple(4 + G.table[g][x] for x in range(4)) for g in range(4)]
    t_scan = min(timeit.repeat(lambda: mod.normalizing_permutations(8, elems, [elems[1]]), number=1, repeat=repeat))
    return rows, t_scan


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = [("python", _kernels_py)] + ([("compiled", _kernels)] if _kernels else [])
    results = {name: bench_module(mod, args.repeat) for name, mod in backends}
    print(f"{'graph':10} {'backend':9} {'refine ms':>10} {'cert us':>9}")
    for graph in results["python"][0]:
        for name, _ in backends:
            ref, cert = results[name][0][graph]
            print(f"{graph:10} {name:9} {ref * 1e3:10.3f} {cert * 1e6:9.1f}")
    for name, _ in backends:
        print(f"normalizer scan of S_8 ({name}): {results[name][1] * 1e3:.1f} ms")

    for pure in ("1", "0"):
        env = dict(os.environ, HAARISO_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", SEARCH_SNIPPET.format(cases=CASES)],
                             env=env, capture_output=True, text=True, check=True).stdout.split()
        print(f"automorphism search, all cases ({out[0]}): {float(out[1]) * 1e3:.1f} ms")


if __name__ == "__main__":
    main()
