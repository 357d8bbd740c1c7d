"""Agreement between the jitted kernels and the pure-numpy fallbacks."""

import numpy as np
import pytest

from conftest import rel_err
from spinperm import SpinOperator, evaluate, permanent_ryser, random_matrix
from spinperm import _kernels, bits


requires_numba = pytest.mark.skipif(
    not _kernels.HAVE_NUMBA, reason="numba not installed"
)


def test_kernel_env_selection(monkeypatch):
    monkeypatch.setenv(_kernels.KERNEL_ENV, "numpy")
    assert _kernels.kernel_name() == "numpy"
    monkeypatch.setenv(_kernels.KERNEL_ENV, "auto")
    assert _kernels.kernel_name() in ("numba", "numpy")
    monkeypatch.setenv(_kernels.KERNEL_ENV, "bogus")
    with pytest.raises(ValueError):
        _kernels.kernel_name()


@requires_numba
@pytest.mark.parametrize("n,h", [(4, 0), (4, 2), (6, 3), (8, 5)])
def test_level_codes_agree(n, h):
    assert np.array_equal(
        _kernels.level_codes(n, h, "numba"), _kernels.level_codes(n, h, "numpy")
    )


@requires_numba
@pytest.mark.parametrize("fermionic", [False, True])
@pytest.mark.parametrize("n,h", [(3, 0), (3, 1), (6, 2), (8, 4)])
def test_apply_level_kernels_agree(n, h, fermionic):
    rng = np.random.default_rng(5)
    src = bits.level_codes(n, h)
    dst = bits.level_codes(n, h + 1)
    amps = rng.standard_normal(len(src)) + 1j * rng.standard_normal(len(src))
    wbits = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a = _kernels.apply_level(src, dst, amps, wbits, fermionic, "numba")
    b = _kernels.apply_level(src, dst, amps, wbits, fermionic, "numpy")
    assert np.max(np.abs(a - b)) < 1e-12 * max(np.max(np.abs(a)), 1.0)


@requires_numba
@pytest.mark.parametrize("fermionic", [False, True])
def test_closing_kernels_agree(fermionic):
    n = 7
    rng = np.random.default_rng(6)
    src = bits.level_codes(n, n - 1)
    amps = rng.standard_normal(len(src)) + 1j * rng.standard_normal(len(src))
    wbits = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    full = (1 << n) - 1
    a = _kernels.apply_closing(src, amps, wbits, fermionic, full, "numba")
    b = _kernels.apply_closing(src, amps, wbits, fermionic, full, "numpy")
    assert rel_err(a, b) < 1e-13


@requires_numba
@pytest.mark.parametrize("n", [1, 2, 5, 9])
def test_ryser_kernels_agree(n):
    m = random_matrix(n, n, "complex_gaussian")
    a = _kernels.ryser_sum(m.entries, "numba")
    b = _kernels.ryser_sum(m.entries, "numpy")
    assert rel_err(a, b) < 1e-11


@requires_numba
def test_evaluate_same_under_both_kernels(monkeypatch):
    m = random_matrix(8, 21, "complex_gaussian")
    op = SpinOperator(m, "breve", "fermionic")
    monkeypatch.setenv(_kernels.KERNEL_ENV, "numpy")
    v_np, c_np = evaluate(op)
    monkeypatch.setenv(_kernels.KERNEL_ENV, "numba")
    v_nb, c_nb = evaluate(op)
    assert rel_err(v_np, v_nb) < 1e-12
    assert c_np.total == c_nb.total == 8 * 2**8


def test_numpy_fallback_full_pipeline(monkeypatch):
    monkeypatch.setenv(_kernels.KERNEL_ENV, "numpy")
    m = random_matrix(6, 2, "complex_gaussian")
    value, count = evaluate(SpinOperator(m, "breve", "bosonic"))
    assert rel_err(value, permanent_ryser(m)) < 1e-11
    assert count.total == 6 * 2**6
