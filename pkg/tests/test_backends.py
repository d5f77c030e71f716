"""Equivalence of the compiled and pure-Python kernel paths."""

import numpy as np
import pytest

from symsim import enumerate_monomials, set_backend
from symsim._backend import (
    NUMBA_N_LIMIT,
    _state,
    active_backend,
    f_block,
    f_block_python,
    pair_product,
    pair_product_python,
)


@pytest.fixture(autouse=True)
def restore_backend():
    yield
    set_backend("auto")


def _random_monomials(n, rng, count, max_weight=None):
    mons = enumerate_monomials(n)
    if max_weight is not None:
        mons = [m for m in mons if n - m[0] <= max_weight]
    return [tuple(mons[int(p)]) for p in rng.integers(0, len(mons), count)]


@pytest.mark.parametrize("n", [3, 7, 12, 26])
def test_pair_products_agree(n):
    # the left factor is few-body, as in a regular-representation build;
    # dense-weight pairs at large n cost O(n^6) per entry by design
    rng = np.random.default_rng(100 + n)
    set_backend("numba")
    assert active_backend() == "numba"
    for _ in range(15):
        (i,) = _random_monomials(n, rng, 1, max_weight=min(n, 4))
        (j,) = _random_monomials(n, rng, 1)
        compiled = pair_product(i, j)
        exact = pair_product_python(i, j)
        scale = max(1.0, max(abs(v) for v in exact.values()))
        keys = set(compiled) | set(exact)
        gap = max(abs(compiled.get(k, 0j) - exact.get(k, 0j)) for k in keys)
        assert gap <= 1e-12 * scale


@pytest.mark.parametrize("n", [3, 7, 12, 26])
def test_f_blocks_agree(n):
    rng = np.random.default_rng(200 + n)
    set_backend("numba")
    for _ in range(8):
        (i,) = _random_monomials(n, rng, 1, max_weight=min(n, 4))
        lam1 = int(rng.integers(0, n // 2 + 1))
        compiled = f_block(n, lam1, i)
        exact = f_block_python(n, lam1, i)
        scale = max(1.0, float(np.max(np.abs(exact))))
        assert np.max(np.abs(compiled - exact)) <= 1e-12 * scale


def test_exact_path_is_integer_exact_at_small_n():
    # every coefficient of a product at n <= 8 is a Gaussian integer
    rng = np.random.default_rng(31)
    for _ in range(20):
        i, j = _random_monomials(8, rng, 2)
        for v in pair_product_python(i, j).values():
            assert v.real == int(v.real) and v.imag == int(v.imag)


def test_dispatch_falls_back_beyond_float_limit():
    n = NUMBA_N_LIMIT + 10
    set_backend("numba")
    i = (n - 2, 2, 0, 0)
    lam1 = n // 2 - 1   # tiny Dicke register, cheap exact evaluation
    block = f_block(n, lam1, i)
    assert np.array_equal(block, f_block_python(n, lam1, i))


def test_set_backend_python():
    set_backend("python")
    assert active_backend() == "python"
    i = (1, 1, 0, 0)
    assert pair_product(i, i) == pair_product_python(i, i)


def test_env_flag_selects_backend(monkeypatch):
    monkeypatch.setenv("SYMSIM_BACKEND", "python")
    _state["requested"] = None   # re-read the environment
    assert active_backend() == "python"
    monkeypatch.setenv("SYMSIM_BACKEND", "nonsense")
    from symsim import ValidationError

    with pytest.raises(ValidationError):
        active_backend()
    monkeypatch.delenv("SYMSIM_BACKEND")
    set_backend("auto")


def test_unknown_backend_rejected():
    from symsim import ValidationError

    with pytest.raises(ValidationError):
        set_backend("fortran")
