"""Linear-algebra kernels against closed forms and brute-force oracles."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from avekit.errors import SingularSystem
from avekit.linalg import (
    TridiagonalMatrix,
    inverse,
    is_irreducible,
    lu_factor,
    null_space_left,
    solve,
    spectral_norm,
    spectral_radius_nonneg,
    tridiag_solve,
)


def cramer2(m, rhs):
    """Independent 2x2 closed-form solve."""
    (a, b), (c, d) = m
    det = a * d - b * c
    return np.array([(d * rhs[0] - b * rhs[1]) / det, (a * rhs[1] - c * rhs[0]) / det])


def random_with_condition(rng, n, sigma_lo, sigma_hi):
    """Random matrix with singular values drawn in [sigma_lo, sigma_hi]."""
    q1, _ = np.linalg.qr(rng.normal(size=(n, n)))
    q2, _ = np.linalg.qr(rng.normal(size=(n, n)))
    sigmas = rng.uniform(sigma_lo, sigma_hi, size=n)
    return q1 @ np.diag(sigmas) @ q2.T


# ---------------------------------------------------------------- lu_factor


def test_lu_identity():
    f = lu_factor(np.eye(3))
    assert not f.singular
    assert_allclose(f.lower, np.eye(3))
    assert_allclose(f.upper, np.eye(3))
    assert f.perm.tolist() == [0, 1, 2]


def test_lu_flags_rank_one_matrix():
    assert lu_factor([[2.0, -2.0], [-2.0, 2.0]]).singular


def test_lu_solve_triangular_case():
    m = [[0.5, -1.25], [0.0, 0.5]]
    f = lu_factor(m)
    assert not f.singular
    x = solve(f, np.array([4.0, 16.0]))
    assert_allclose(x, [88.0, 32.0], atol=1e-12)
    assert_allclose(x, cramer2(m, [4.0, 16.0]))


def test_lu_permutation_reconstructs_input():
    rng = np.random.default_rng(5)
    for n in (2, 5, 17):
        a = rng.normal(size=(n, n))
        f = lu_factor(a)
        assert sorted(f.perm.tolist()) == list(range(n))
        scale = np.abs(a).max()
        assert np.abs(a[f.perm] - f.lower @ f.upper).max() <= 1e-10 * scale


# -------------------------------------------------------------------- solve


def test_solve_identity():
    b = np.array([3.0, -1.0, 0.5])
    assert_allclose(solve(lu_factor(np.eye(3)), b), b)


@pytest.mark.parametrize(
    "m, rhs, expected",
    [
        ([[2.0, -1.0], [-4.0, 4.0]], [-5.0, -4.0], [-6.0, -7.0]),
        ([[4.0, -1.0], [-4.0, 4.0]], [-5.0, -4.0], [-2.0, -3.0]),
    ],
)
def test_solve_2x2_closed_form(m, rhs, expected):
    x = solve(lu_factor(m), np.array(rhs))
    assert_allclose(x, cramer2(m, rhs), atol=1e-14)
    assert_allclose(x, expected, atol=1e-12)


def test_solve_refuses_singular():
    f = lu_factor([[2.0, -2.0], [-2.0, 2.0]])
    with pytest.raises(SingularSystem):
        solve(f, np.array([1.0, 1.0]))


def test_solve_residual_contract_on_conditioned_systems():
    rng = np.random.default_rng(42)
    for _ in range(25):
        n = int(rng.integers(2, 51))
        a = random_with_condition(rng, n, 1e-3, 1e3)  # condition <= 1e6
        b = rng.normal(size=n)
        x = solve(lu_factor(a), b)
        assert np.linalg.norm(a @ x - b) / np.linalg.norm(b) < 1e-8


# ------------------------------------------------------------------ inverse


def test_inverse_scaled_identity():
    assert_allclose(inverse(2.0 * np.eye(3)), 0.5 * np.eye(3))


def test_inverse_triangular_nonnegative():
    inv = inverse([[0.5, -1.25], [0.0, 0.5]])
    assert_allclose(inv, [[2.0, 5.0], [0.0, 2.0]], atol=1e-12)
    assert inv.min() >= 0.0


def test_inverse_can_have_negative_entries():
    inv = inverse([[1.0, -0.01], [0.01, 1.0]])
    assert inv.min() < 0.0


def test_inverse_raises_on_singular():
    with pytest.raises(SingularSystem):
        inverse([[2.0, -2.0], [-2.0, 2.0]])


def test_inverse_contract():
    rng = np.random.default_rng(9)
    for _ in range(10):
        n = int(rng.integers(2, 20))
        a = random_with_condition(rng, n, 0.1, 10.0)
        err = np.abs(a @ inverse(a) - np.eye(n)).max()
        assert err <= 1e-9


# ------------------------------------------------------------ tridiagonal


def test_tridiag_scalar():
    t = TridiagonalMatrix([], [7.0], [])
    assert_allclose(tridiag_solve(t, [14.0]), [2.0])


def test_tridiag_2x2():
    t = TridiagonalMatrix([-2.0], [7.0, 7.0], [-2.0])
    x = tridiag_solve(t, np.array([5.0, 5.0]))
    assert_allclose(x, cramer2([[7.0, -2.0], [-2.0, 7.0]], [5.0, 5.0]))
    assert_allclose(x, [1.0, 1.0], atol=1e-14)


def test_tridiag_zero_pivot():
    with pytest.raises(SingularSystem):
        tridiag_solve(TridiagonalMatrix([], [0.0], []), [1.0])


def test_tridiag_agrees_with_dense_solver():
    rng = np.random.default_rng(21)
    for _ in range(20):
        n = 50
        sub = rng.normal(size=n - 1)
        sup = rng.normal(size=n - 1)
        main = rng.normal(size=n) + 6.0 * np.sign(rng.normal(size=n))  # dominant
        t = TridiagonalMatrix(sub, main, sup)
        b = rng.normal(size=n)
        x_fast = tridiag_solve(t, b)
        x_dense = solve(lu_factor(t.to_dense()), b)
        denom = max(np.abs(x_dense).max(), 1.0)
        assert np.abs(x_fast - x_dense).max() / denom < 1e-10


def test_tridiag_matvec_matches_dense():
    rng = np.random.default_rng(2)
    t = TridiagonalMatrix(rng.normal(size=9), rng.normal(size=10), rng.normal(size=9))
    x = rng.normal(size=10)
    assert_allclose(t.matvec(x), t.to_dense() @ x)


# ------------------------------------------------------------- spectral


def test_spectral_norm_identity():
    r = spectral_norm(np.eye(4))
    assert r.converged
    assert r.value == pytest.approx(1.0, abs=1e-10)


def test_spectral_norm_reference_inverses():
    # the two reference matrices whose inverse norms are 1.6095 and 1.1708
    inv3 = inverse([[1.5, -3.0], [0.0, 1.5]])
    assert spectral_norm(inv3).value == pytest.approx(1.6095, abs=1e-3)
    inv5 = inverse([[3.0, -1.0], [-4.0, 3.0]])
    assert spectral_norm(inv5).value == pytest.approx(1.1708, abs=1e-3)


def test_spectral_norm_matches_svd():
    rng = np.random.default_rng(77)
    for _ in range(20):
        a = rng.normal(size=(int(rng.integers(2, 12)),) * 2)
        want = np.linalg.svd(a, compute_uv=False)[0]
        got = spectral_norm(a).value
        assert got == pytest.approx(want, rel=1e-6)


def test_spectral_norm_transpose_and_scaling():
    rng = np.random.default_rng(13)
    a = rng.normal(size=(6, 6))
    na = spectral_norm(a).value
    assert spectral_norm(a.T).value == pytest.approx(na, rel=1e-8)
    assert spectral_norm(-2.5 * a).value == pytest.approx(2.5 * na, rel=1e-8)


def test_spectral_radius_reference_cases():
    # triangular case: eigenvalues sit on the diagonal, radius is 2/3; the
    # defective (Jordan) structure converges slowly, hence the loose bound
    r = spectral_radius_nonneg([[2.0 / 3.0, 5.0 / 9.0], [0.0, 2.0 / 3.0]])
    assert r.value == pytest.approx(2.0 / 3.0, abs=1e-3)
    assert spectral_radius_nonneg(np.eye(3)).value == pytest.approx(1.0, abs=1e-10)
    assert spectral_radius_nonneg([[0.0, 1.0], [1.0, 0.0]]).value == pytest.approx(
        1.0, abs=1e-10
    )


def test_spectral_radius_rejects_negative_entries():
    with pytest.raises(ValueError):
        spectral_radius_nonneg([[1.0, -0.1], [0.0, 1.0]])


def test_spectral_radius_matches_eigvals():
    rng = np.random.default_rng(31)
    for _ in range(20):
        n = int(rng.integers(2, 10))
        a = rng.uniform(0.0, 1.0, size=(n, n))
        want = float(np.abs(np.linalg.eigvals(a)).max())
        assert spectral_radius_nonneg(a).value == pytest.approx(want, rel=1e-7)


def test_spectral_radius_below_norm():
    rng = np.random.default_rng(4)
    for _ in range(20):
        a = rng.uniform(0.0, 1.0, size=(5, 5))
        assert spectral_radius_nonneg(a).value <= spectral_norm(a).value * (1 + 1e-8)


# --------------------------------------------------------------- kernels


def test_null_space_symmetric_rank_one_deficient():
    ns = null_space_left([[2.0, -2.0], [-2.0, 2.0]])
    assert ns.dimension == 1
    assert_allclose(ns.basis_vector, [1.0, 1.0], atol=1e-12)


def test_null_space_nonsymmetric_case():
    # left kernel of [[2,-1],[-4,2]] is spanned by (2, 1)
    ns = null_space_left([[2.0, -1.0], [-4.0, 2.0]])
    assert ns.dimension == 1
    v = ns.basis_vector
    assert_allclose(v / v[0], [1.0, 0.5], atol=1e-12)
    assert np.abs(v @ np.array([[2.0, -1.0], [-4.0, 2.0]])).max() <= 1e-12


def test_null_space_nonsingular_matrix():
    ns = null_space_left([[3.0, -1.0], [0.0, 2.0]])
    assert ns.dimension == 0
    assert ns.basis_vector is None


def test_null_space_dimension_matches_lu_singularity():
    rng = np.random.default_rng(17)
    for _ in range(40):
        n = int(rng.integers(2, 8))
        a = rng.normal(size=(n, n))
        if rng.uniform() < 0.5:
            a[:, -1] = a[:, :-1] @ rng.normal(size=n - 1)  # force rank deficiency
        ns = null_space_left(a)
        assert (ns.dimension == 0) == (not lu_factor(a.T).singular)


def test_null_space_residual_bound():
    ns = null_space_left([[2.0, -1.0], [-4.0, 2.0]])
    m = np.array([[2.0, -1.0], [-4.0, 2.0]])
    assert np.linalg.norm(ns.basis_vector @ m) <= ns.rank_tolerance * np.linalg.norm(m)


# ---------------------------------------------------------- irreducibility


def test_irreducible_cases():
    assert is_irreducible([[2.0, -2.0], [-2.0, 2.0]])
    assert not is_irreducible(np.diag([1.0, 2.0]))
    assert not is_irreducible([[1.0, 1.0, 0.0], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]])
    assert is_irreducible([[5.0]])


def test_irreducible_cycle_graph():
    # a single directed cycle is strongly connected
    a = np.zeros((4, 4))
    for i in range(4):
        a[i, (i + 1) % 4] = -1.0
    assert is_irreducible(a)
    a[0, 1] = 0.0  # break the cycle
    assert not is_irreducible(a)
