"""The compiled kernels and the pure-Python fallback must agree bit for bit."""

import os
import random
import subprocess
import sys

import pytest

from haariso import _kernels_py, kernels
from haariso.graph import Digraph, haar
from haariso.groups import make_abelian

from oracles import left_regular, normalizer_by_scan, product_table

compiled = pytest.importorskip("haariso._kernels")


def prepared_pair(g):
    out = [sorted(s) for s in g.out]
    inn = [sorted(s) for s in g.inn]
    return compiled.prepare(g.n, out, inn), _kernels_py.prepare(g.n, out, inn)


def sample_graphs():
    rng = random.Random(7)
    yield haar(make_abelian([15]), (0, 1, 5, 14))
    yield haar(make_abelian([2, 4]), (0, 1, 2, 3))
    for n in (1, 5, 12, 20):
        yield Digraph.from_arcs(n, [(u, v) for u in range(n) for v in range(n) if rng.random() < 0.3])


def test_backend_selected():
    assert kernels.BACKEND in ("compiled", "python")


@pytest.mark.parametrize("index", range(6))
def test_refine_and_certificate_parity(index):
    g = list(sample_graphs())[index]
    fast, slow = prepared_pair(g)
    rng = random.Random(index)
    for _ in range(5):
        k = rng.randint(1, 3)
        colors = [rng.randrange(k) for _ in range(g.n)]
        ranks = {c: i for i, c in enumerate(sorted(set(colors)))}
        colors = [ranks[c] for c in colors]
        assert compiled.refine(fast, colors) == _kernels_py.refine(slow, colors)
        order = list(range(g.n))
        rng.shuffle(order)
        assert compiled.certificate(fast, order) == _kernels_py.certificate(slow, order)


def test_refinement_is_equitable():
    g = haar(make_abelian([3, 3]), (0, 1, 4))
    prep = _kernels_py.prepare(g.n, [sorted(s) for s in g.out], [sorted(s) for s in g.inn])
    assert _kernels_py.refine(prep, [0] * g.n)[1] == 1  # regular, so nothing splits
    colors, k, _ = _kernels_py.refine(prep, [1] + [0] * (g.n - 1))
    assert k > 2
    for v in range(g.n):
        for w in range(g.n):
            if colors[v] == colors[w]:
                assert sorted(colors[u] for u in g.out[v]) == sorted(colors[u] for u in g.out[w])


@pytest.mark.parametrize("orders", [(3,), (4,), (2, 2)])
def test_normalizer_scan_parity(orders):
    table = product_table(*orders)
    elems = left_regular(table)
    n = 2 * len(table)
    fast = compiled.normalizing_permutations(n, elems, elems[1:])
    slow = _kernels_py.normalizing_permutations(n, elems, elems[1:])
    assert sorted(fast) == sorted(slow) == sorted(normalizer_by_scan(table))


def test_pure_python_switch():
    env = dict(os.environ, HAARISO_PURE_PYTHON="1")
    code = (
        "from haariso.kernels import BACKEND;"
        "from haariso.graph import haar, automorphisms;"
        "from haariso.groups import make_abelian;"
        "print(BACKEND, automorphisms(haar(make_abelian([7]), (0, 1, 3)), enumerate_elements=False).order)"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "336"]
