import itertools
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from specgeom import ball_spectrum as bs
from specgeom.bessel import nth_zero
from specgeom.errors import DomainError, ResourceError


def _harmonic_dimension_by_rank(m, l):
    """Dimension of degree-l harmonic polynomials in m variables: kernel of the Laplacian on monomials."""
    src = [e for e in itertools.product(range(l + 1), repeat=m) if sum(e) == l]
    dst = [e for e in itertools.product(range(l + 1), repeat=m) if sum(e) == l - 2]
    index = {e: i for i, e in enumerate(dst)}
    A = np.zeros((len(dst), len(src)))
    for j, e in enumerate(src):
        for i in range(m):
            if e[i] >= 2:
                t = list(e)
                t[i] -= 2
                A[index[tuple(t)], j] += e[i] * (e[i] - 1)
    rank = np.linalg.matrix_rank(A) if len(dst) else 0
    return len(src) - rank


def test_multiplicity_small_cases():
    assert bs.harmonic_multiplicity(3, 2) == 5
    assert bs.harmonic_multiplicity(2, 5) == 2
    assert bs.harmonic_multiplicity(7, 0) == 1
    assert bs.harmonic_multiplicity(7, 1) == 7


def test_multiplicity_matches_laplacian_kernel():
    # the closed form gives N(6,3) = 50; brute-force rank agrees
    assert _harmonic_dimension_by_rank(6, 3) == 50
    assert bs.harmonic_multiplicity(6, 3) == 50
    for m, l in [(3, 4), (4, 3), (5, 2), (4, 5)]:
        assert bs.harmonic_multiplicity(m, l) == _harmonic_dimension_by_rank(m, l)


def test_multiplicity_factorial_form():
    for m in range(3, 40):
        for l in range(1, 12):
            closed = (2 * l + m - 2) * math.factorial(l + m - 3) // (math.factorial(l) * math.factorial(m - 2))
            assert bs.harmonic_multiplicity(m, l) == closed


def test_three_ball():
    spec = bs.ball_eigenvalues(3, 2)
    assert_allclose(spec.values, [math.pi**2, 4.493409457909064**2], rtol=1e-10)
    assert_allclose(spec[1], 20.1907, atol=1e-4)


def test_disk_ground_state():
    assert_allclose(bs.ball_eigenvalues(2, 1)[0], 5.783185962946784, rtol=1e-10)


def test_four_ball_degeneracy():
    spec = bs.ball_eigenvalues(4, 5)
    assert [d for _, d, _ in spec.eigenvalues] == [0, 1, 1, 1, 1]
    assert_allclose(spec.values[1:], nth_zero(2, 1).value ** 2, rtol=1e-12)


@pytest.mark.parametrize("m", range(2, 31))
def test_first_excited_level_has_multiplicity_m(m):
    vals = bs.ball_eigenvalues(m, m + 2).values
    assert_allclose(vals[1 : m + 1], bs.lambda_2(m), rtol=1e-9)
    assert vals[m + 1] > vals[m] * (1 + 1e-9)
    assert vals[0] < vals[1]


def test_weyl_growth_in_the_plane():
    vals = bs.ball_eigenvalues(2, 200).values
    assert np.all(np.diff(vals) >= 0)
    assert abs(vals[-1] / (4 * 200) - 1) < 0.15


@pytest.mark.parametrize("m,count", [(2, 120), (3, 80), (5, 60)])
def test_heap_enumeration_matches_large_grid(m, count):
    spec = bs.ball_eigenvalues(m, count)
    assert_allclose(spec.values, bs.grid_eigenvalues(m, count, l_max=40, n_max=20), rtol=1e-13)


def test_error_propagation_and_budget():
    spec = bs.ball_eigenvalues(3, 10)
    assert all(0 <= e <= 2 * math.sqrt(v) * 1e-10 + 1e-15 for v, e in zip(spec.values, spec.abs_err))
    with pytest.raises(ResourceError):
        bs.ball_eigenvalues(2, 500, budget=10)
    with pytest.raises(DomainError):
        bs.ball_eigenvalues(1, 3)


def test_lambda_k_shortcut():
    assert bs.lambda_k(6, 7) == bs.lambda_2(6)
    assert_allclose(bs.lambda_k(3, 5), bs.ball_eigenvalues(3, 5)[4])
