import os
import subprocess
import sys

import numpy as np
import pytest

from lprips import _backend
from lprips.complexes import build_tuple_complex, build_vr_filtration
from lprips.metric import INF, LeftInterval, NormDescriptor, from_points

compiled = pytest.mark.skipif(_backend.compiled_kernels is None, reason="compiled kernels not built")

PY = _backend.get("python")


def _cy():
    return _backend.get("cython")


@compiled
@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, INF])
@pytest.mark.parametrize("cyclic", [False, True])
def test_tuple_weights_bit_identical(p, cyclic, rng):
    D = from_points(rng.random((9, 2))).dist
    for k in range(1, 8):
        T = rng.integers(0, 9, size=(50, k))
        a = PY.tuple_weights(D, T, p, cyclic)
        b = _cy().tuple_weights(D, T, p, cyclic)
        assert a.tobytes() == b.tobytes()


@compiled
@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
@pytest.mark.parametrize("cyclic", [False, True])
def test_subset_weights_bit_identical(p, cyclic, rng):
    D = from_points(rng.random((9, 2))).dist
    for k in range(1, 7):
        S = np.sort(np.array([rng.choice(9, size=k, replace=False) for _ in range(20)]), axis=1)
        wa, oa = PY.subset_weights(D, S, p, cyclic)
        wb, ob = _cy().subset_weights(D, S, p, cyclic)
        assert wa.tobytes() == wb.tobytes()
        assert np.array_equal(oa, ob)


@compiled
@pytest.mark.parametrize("symmetric", [False, True])
def test_stacked_weights_bit_identical(symmetric, rng):
    mats = np.stack([from_points(rng.random((3, 2))).dist for _ in range(40)])
    for p in (1.0, 2.0, INF):
        for cyclic in (False, True):
            a = PY.stacked_weights(mats, p, cyclic, symmetric)
            b = _cy().stacked_weights(mats, p, cyclic, symmetric)
            assert a.tobytes() == b.tobytes()


@compiled
@pytest.mark.parametrize("field", [2, 3, 5])
def test_reduction_identical(field, rng):
    X = from_points(rng.random((6, 2)))
    complexes = [
        build_tuple_complex(X, NormDescriptor(2.0), LeftInterval.le(0.8), 3),
        build_vr_filtration(X, NormDescriptor(INF, symmetric=True), 3),
    ]
    for C in complexes:
        for n in range(1, C.max_deg + 1):
            indptr, idx, data = C.boundary(n)
            clear = rng.random(C.size(n)) < 0.2
            for track in (False, True):
                for cl in (None, clear):
                    ra = PY.reduce_columns(indptr, idx, data, field, cl, track)
                    rb = _cy().reduce_columns(indptr, idx, data, field, cl, track)
                    assert np.array_equal(ra[0], rb[0])
                    for x, y in zip(ra[1:], rb[1:]):
                        for u, v in zip(x, y):
                            assert np.array_equal(u, v)


def test_python_backend_selected_by_environment():
    code = "import lprips._backend as b; print(b.BACKEND)"
    env = dict(os.environ, LPRIPS_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend_name():
    with pytest.raises(ValueError):
        _backend.get("fortran")
