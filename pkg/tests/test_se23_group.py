import math

import numpy as np
import pytest

from se23control.se23_group import (
    C_MATRIX,
    XI_P,
    XI_R,
    XI_V,
    GroupElement,
    ad_small,
    adjoint,
    c_commutator,
    compose,
    exp_se23,
    inverse,
    jl_inv_se23,
    jr_inv_se23,
    left_error,
    log_se23,
    vee9,
    wedge,
)
from se23control.so3_core import exp_so3, hat, s_l
from se23control.verification import ad_series_jacobian, se23_exp_series, _fit_order

from conftest import random_xi


def random_group(rng, r_max=2.5):
    return exp_se23(random_xi(rng, r_max=r_max))


def test_wedge_zero():
    assert np.array_equal(wedge(np.zeros(9)), np.zeros((5, 5)))


def test_wedge_layout(rng):
    xi = random_xi(rng)
    M = wedge(xi)
    np.testing.assert_array_equal(M[0:3, 0:3], hat(xi[XI_R]))
    np.testing.assert_array_equal(M[0:3, 3], xi[XI_V])
    np.testing.assert_array_equal(M[0:3, 4], xi[XI_P])
    assert np.array_equal(M[3:5, :], np.zeros((2, 5)))


def test_wedge_vee_roundtrip(rng):
    for _ in range(20):
        xi = rng.normal(size=9)
        np.testing.assert_array_equal(vee9(wedge(xi)), xi)


def test_wedge_linear(rng):
    xi, zeta = rng.normal(size=9), rng.normal(size=9)
    np.testing.assert_allclose(
        wedge(2.0 * xi - 3.0 * zeta), 2.0 * wedge(xi) - 3.0 * wedge(zeta), atol=0
    )


def test_vee9_rejects_malformed():
    M = np.zeros((5, 5))
    M[4, 0] = 1.0
    with pytest.raises(ValueError, match="bottom rows"):
        vee9(M)
    M = np.zeros((5, 5))
    M[0, 0] = 1.0
    with pytest.raises(ValueError, match="skew"):
        vee9(M)


def test_compose_identity(rng):
    X = random_group(rng)
    e = GroupElement.identity()
    for Y in (compose(e, X), compose(X, e)):
        np.testing.assert_allclose(Y.as_matrix(), X.as_matrix(), atol=0)


def test_compose_inverse(rng):
    for _ in range(20):
        X = random_group(rng)
        np.testing.assert_allclose(
            compose(X, inverse(X)).as_matrix(), np.eye(5), atol=1e-10
        )


def test_compose_matches_embedding(rng):
    for _ in range(50):
        A, B = random_group(rng), random_group(rng)
        np.testing.assert_allclose(
            compose(A, B).as_matrix(), A.as_matrix() @ B.as_matrix(), atol=1e-12
        )


def test_inverse_matches_embedding(rng):
    for _ in range(20):
        X = random_group(rng)
        np.testing.assert_allclose(
            inverse(X).as_matrix(), np.linalg.inv(X.as_matrix()), atol=1e-12
        )
    e = GroupElement.identity()
    np.testing.assert_array_equal(inverse(e).as_matrix(), np.eye(5))
    X = random_group(rng)
    np.testing.assert_allclose(inverse(inverse(X)).as_matrix(), X.as_matrix(), atol=1e-13)


def test_group_element_validation():
    with pytest.raises(ValueError, match="orthonormal"):
        GroupElement(np.eye(3) + 1e-6, np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError, match="det"):
        GroupElement(np.diag([1.0, 1.0, -1.0]), np.zeros(3), np.zeros(3))


def test_exp_zero():
    np.testing.assert_array_equal(exp_se23(np.zeros(9)).as_matrix(), np.eye(5))


def test_exp_pure_translation(rng):
    p, v = rng.normal(size=3), rng.normal(size=3)
    X = exp_se23(np.concatenate([p, v, np.zeros(3)]))
    np.testing.assert_array_equal(X.R, np.eye(3))
    np.testing.assert_array_equal(X.v, v)
    np.testing.assert_array_equal(X.p, p)


def test_exp_matches_dense_series(rng):
    for _ in range(50):
        xi = random_xi(rng, r_max=math.pi - 0.1)
        np.testing.assert_allclose(exp_se23(xi).as_matrix(), se23_exp_series(xi), atol=1e-12)


def test_log_identity():
    np.testing.assert_array_equal(log_se23(GroupElement.identity()), np.zeros(9))


def test_log_pure_translation(rng):
    p, v = rng.normal(size=3), rng.normal(size=3)
    xi = log_se23(GroupElement(np.eye(3), v, p))
    np.testing.assert_array_equal(xi, np.concatenate([p, v, np.zeros(3)]))


def test_exp_log_roundtrip(rng):
    for _ in range(200):
        xi = random_xi(rng, r_max=math.pi - 0.1)
        assert np.linalg.norm(log_se23(exp_se23(xi)) - xi) < 1e-9


def test_left_error_identity(rng):
    X = random_group(rng)
    np.testing.assert_allclose(left_error(X, X).as_matrix(), np.eye(5), atol=1e-14)


def test_left_error_components(rng):
    Xb, X = random_group(rng), random_group(rng)
    eta = left_error(Xb, X)
    np.testing.assert_allclose(eta.p, Xb.R.T @ (X.p - Xb.p), atol=1e-12)
    np.testing.assert_allclose(eta.v, Xb.R.T @ (X.v - Xb.v), atol=1e-12)
    np.testing.assert_allclose(eta.R, Xb.R.T @ X.R, atol=1e-12)
    np.testing.assert_allclose(
        eta.as_matrix(), compose(inverse(Xb), X).as_matrix(), atol=0
    )


def test_left_error_invariance(rng):
    for _ in range(20):
        Xb, X, G = random_group(rng), random_group(rng), random_group(rng)
        np.testing.assert_allclose(
            left_error(compose(G, Xb), compose(G, X)).as_matrix(),
            left_error(Xb, X).as_matrix(),
            atol=1e-11,
        )


def test_adjoint_identity():
    np.testing.assert_array_equal(adjoint(GroupElement.identity()), np.eye(9))


def test_adjoint_conjugation(rng):
    for _ in range(200):
        X = random_group(rng)
        xi = rng.normal(size=9)
        M = np.linalg.inv(X.as_matrix()) @ wedge(xi) @ X.as_matrix()
        np.testing.assert_allclose(adjoint(X) @ xi, vee9(M), atol=1e-10)


def test_adjoint_homomorphism(rng):
    X = random_group(rng)
    np.testing.assert_allclose(adjoint(X) @ adjoint(inverse(X)), np.eye(9), atol=1e-12)


def test_ad_zero():
    assert np.array_equal(ad_small(np.zeros(9)), np.zeros((9, 9)))


def test_ad_is_bracket(rng):
    for _ in range(50):
        xi, zeta = rng.normal(size=9), rng.normal(size=9)
        bracket = wedge(xi) @ wedge(zeta) - wedge(zeta) @ wedge(xi)
        np.testing.assert_allclose(ad_small(xi) @ zeta, vee9(bracket), atol=1e-13)


def test_ad_antisymmetry(rng):
    xi, zeta = rng.normal(size=9), rng.normal(size=9)
    np.testing.assert_allclose(ad_small(xi) @ zeta, -(ad_small(zeta) @ xi), atol=1e-13)


def test_ad_jacobi_identity(rng):
    for _ in range(20):
        a, b, c = rng.normal(size=9), rng.normal(size=9), rng.normal(size=9)
        total = (
            ad_small(ad_small(a) @ b) @ c
            + ad_small(ad_small(b) @ c) @ a
            + ad_small(ad_small(c) @ a) @ b
        )
        np.testing.assert_allclose(total, np.zeros(9), atol=1e-10)


def test_neg_ad_nbar_block_structure(rng):
    T_bar, e_T, omega_bar = 9.81, np.array([0.0, 0, 1]), rng.normal(size=3)
    nbar = np.concatenate([np.zeros(3), T_bar * e_T, omega_bar])
    A = -ad_small(nbar)
    W = hat(omega_bar)
    np.testing.assert_allclose(A[XI_P, XI_P], -W, atol=0)
    np.testing.assert_allclose(A[XI_V, XI_V], -W, atol=0)
    np.testing.assert_allclose(A[XI_R, XI_R], -W, atol=0)
    np.testing.assert_allclose(A[XI_V, XI_R], -hat(T_bar * e_T), atol=0)
    np.testing.assert_array_equal(A[XI_P, XI_V], np.zeros((3, 3)))


def test_c_matrix_properties():
    assert np.array_equal(C_MATRIX @ C_MATRIX, np.zeros((5, 5)))
    assert C_MATRIX[3, 4] == 1.0 and np.count_nonzero(C_MATRIX) == 1


def test_c_commutator(rng):
    assert np.array_equal(c_commutator(np.zeros(9)), np.zeros(9))
    xi = rng.normal(size=9)
    expected = np.zeros(9)
    expected[XI_P] = xi[XI_V]
    np.testing.assert_array_equal(c_commutator(xi), expected)
    dense = wedge(xi) @ C_MATRIX - C_MATRIX @ wedge(xi)
    np.testing.assert_array_equal(c_commutator(xi), vee9(dense))


def test_jl_inv_zero():
    np.testing.assert_array_equal(jl_inv_se23(np.zeros(9)), np.eye(9))
    np.testing.assert_array_equal(jr_inv_se23(np.zeros(9)), np.eye(9))


def test_jl_inv_vs_series(rng):
    for _ in range(500):
        xi = random_xi(rng)
        np.testing.assert_allclose(
            jl_inv_se23(xi) @ ad_series_jacobian(xi, +1.0), np.eye(9), atol=1e-8
        )


def test_jr_inv_vs_series(rng):
    for _ in range(200):
        xi = random_xi(rng)
        np.testing.assert_allclose(
            jr_inv_se23(xi) @ ad_series_jacobian(xi, -1.0), np.eye(9), atol=1e-8
        )


def test_jr_inv_mirror_exact(rng):
    for _ in range(50):
        xi = random_xi(rng)
        np.testing.assert_array_equal(jr_inv_se23(xi), jl_inv_se23(-xi))


def test_jl_inv_pure_rotation_blocks(rng):
    w = rng.normal(size=3)
    xi = np.concatenate([np.zeros(3), np.zeros(3), w])
    M = jl_inv_se23(xi)
    S = s_l(w)
    for blk in (XI_P, XI_V, XI_R):
        np.testing.assert_allclose(M[blk, blk], S, atol=0)
    # pure rotation: no translation data, so every off-diagonal block vanishes
    np.testing.assert_array_equal(M[XI_P, XI_R], np.zeros((3, 3)))
    np.testing.assert_array_equal(M[XI_V, XI_R], np.zeros((3, 3)))
    np.testing.assert_array_equal(M[XI_P, XI_V], np.zeros((3, 3)))


def test_bch_first_order_convention(rng):
    """log(exp(xi) exp(eps zeta)) = xi + eps Jr_inv(xi) zeta + O(eps^2)."""
    for _ in range(5):
        xi = random_xi(rng, r_max=1.0, t_max=1.0)
        zeta = rng.normal(size=9)
        X = exp_se23(xi)
        eps_list = [1e-2, 1e-3, 1e-4, 1e-5]
        errs = [
            float(
                np.linalg.norm(
                    log_se23(compose(X, exp_se23(eps * zeta)))
                    - xi
                    - eps * (jr_inv_se23(xi) @ zeta)
                )
            )
            for eps in eps_list
        ]
        assert _fit_order(eps_list, errs) >= 1.9
