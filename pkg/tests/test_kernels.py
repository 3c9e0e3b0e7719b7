"""Kernel spec assembly and truncated expansion evaluation."""

import math
import warnings

import numpy as np
import pytest

from spdkernels import (
    CoefficientScheme,
    KernelSpec,
    NotApplicableError,
    SpaceDescriptor,
    SupportSet1D,
    SupportSet2D,
    circle_poly,
    circle_space,
    circle_sphere_space,
    circle_tph_space,
    constant_scheme,
    eval_kernel,
    eval_marginal,
    geometric_scheme,
    kernel_values,
    marginal_matrix,
    one,
    prog,
    ratio_at,
    sphere_space,
    support_of,
    truncated_parity_sum,
)

FULL_2D = SupportSet2D(((prog(0, 1), prog(0, 1)),))


def product_spec(support=FULL_2D, scheme=None, trunc=(30, 30), m=2):
    return KernelSpec(
        circle_sphere_space(m),
        support,
        scheme or geometric_scheme(),
        trunc,
    )


# --- spaces -------------------------------------------------------------------

def test_space_validation():
    assert circle_space().kind == "circle"
    assert sphere_space(5).m == 5
    with pytest.raises(ValueError):
        sphere_space(1)
    with pytest.raises(ValueError):
        SpaceDescriptor("circle", m=3)


def test_tph_dimension_rules():
    assert circle_tph_space("real_proj", 2).beta == -0.5
    assert circle_tph_space("complex_proj", 4).beta == 0.0
    assert circle_tph_space("quat_proj", 8).beta == 1.0
    assert circle_tph_space("cayley", 16).beta == 3.0
    with pytest.raises(ValueError):
        circle_tph_space("complex_proj", 5)  # must be even
    with pytest.raises(ValueError):
        circle_tph_space("quat_proj", 6)  # must be a multiple of 4
    with pytest.raises(ValueError):
        circle_tph_space("cayley", 8)  # fixed dimension
    with pytest.raises(ValueError):
        circle_tph_space("real_proj", 1)
    assert circle_tph_space("real_proj", 3).alpha == pytest.approx(0.5)


# --- coefficient schemes --------------------------------------------------------

def test_scheme_values():
    c = constant_scheme(2.0)
    assert c.coefficient(4, 9) == 2.0
    g = geometric_scheme(r_k=0.5, r_l=0.25, scale=3.0)
    assert g.coefficient(2, 1) == pytest.approx(3.0 * 0.25 * 0.25)
    with pytest.raises(ValueError):
        CoefficientScheme("geometric", r_k=1.5)
    with pytest.raises(ValueError):
        constant_scheme(-1.0)


def test_coefficient_matrix_union_not_double_counted():
    # the same (k, l) cell reachable through two terms still gets one coefficient
    support = SupportSet2D(((prog(0, 2), prog(0, 2)), (prog(0, 4), prog(0, 4))))
    spec = product_spec(support, constant_scheme(1.0), trunc=(8, 8))
    mat = spec.coefficient_matrix
    assert mat[0, 0] == 1.0
    assert mat[4, 4] == 1.0
    assert mat[1, 1] == 0.0


def test_coefficient_matrix_rates():
    spec = product_spec(FULL_2D, geometric_scheme(r_k=0.5, r_l=0.5), trunc=(4, 4))
    assert spec.coefficient_matrix[2, 3] == pytest.approx(0.5**5)


# --- evaluation -----------------------------------------------------------------

def test_eval_single_cell():
    # a_{1,1} = 1 gives f(t, s) = 2 t s on the circle x S^2 product
    support = SupportSet2D(((one(1), one(1)),))
    spec = product_spec(support, constant_scheme(1.0), trunc=(4, 4))
    assert eval_kernel(spec, 0.5, 0.5) == pytest.approx(0.5)
    assert eval_kernel(spec, 0.25, -1.0) == pytest.approx(-0.5)


def test_eval_matches_direct_sum():
    spec = product_spec(trunc=(12, 12))
    rng = np.random.default_rng(5)
    for t, s in rng.uniform(-1, 1, size=(10, 2)):
        direct = 0.0
        for k in range(13):
            for l in range(13):
                a = spec.coefficient_matrix[k, l]
                if a:
                    direct += a * circle_poly(k, float(t)) * ratio_at(l, 2, float(s))
        assert eval_kernel(spec, float(t), float(s)) == pytest.approx(direct, abs=1e-10)


def test_kernel_values_vectorized_matches_scalar():
    spec = product_spec(trunc=(15, 15))
    t = np.linspace(-1, 1, 9)
    s = np.linspace(-1, 1, 9)
    vals = kernel_values(spec, t, s)
    for j in range(9):
        assert vals[j] == pytest.approx(eval_kernel(spec, float(t[j]), float(s[j])))


def test_eval_circle_only():
    spec = KernelSpec(circle_space(), SupportSet1D.of(prog(0, 1)), geometric_scheme(), (20, 0))
    val = eval_kernel(spec, 1.0)
    # sum of (2/k) 0.9^k for k >= 1 plus 1
    expect = 1.0 + sum((2.0 / k) * 0.9**k for k in range(1, 21))
    assert val == pytest.approx(expect)
    with pytest.raises(ValueError):
        eval_kernel(spec, 0.5, 0.5)


def test_value_at_one_is_coefficient_mass():
    spec = product_spec(trunc=(10, 10))
    # circle endpoint values are 2/k past degree zero; S^2 factors are all 1
    circ_norms = np.array([1.0] + [2.0 / k for k in range(1, 11)])
    expect = float((spec.coefficient_matrix * circ_norms[:, None]).sum())
    assert spec.value_at_one == pytest.approx(expect)
    assert eval_kernel(spec, 1.0, 1.0) == pytest.approx(spec.value_at_one)


def test_tph_value_at_one_uses_jacobi_norms():
    space = circle_tph_space("quat_proj", 8)
    support = SupportSet2D(((one(0), one(2)),))
    spec = KernelSpec(space, support, constant_scheme(1.0), (4, 4))
    from spdkernels import jacobi_norm_at_one

    assert spec.value_at_one == pytest.approx(jacobi_norm_at_one(2, space.alpha))


# --- marginals and parity sums ----------------------------------------------------

def test_marginal_definition():
    spec = product_spec(trunc=(8, 8))
    t = 0.3
    for l in (0, 3, 8):
        expect = sum(
            spec.coefficient_matrix[k, l] * circle_poly(k, t) for k in range(9)
        )
        assert eval_marginal(spec, l, t) == pytest.approx(expect)


def test_marginal_matrix_shape_and_rows():
    spec = product_spec(trunc=(6, 9))
    t = np.linspace(-1, 1, 5)
    mat = marginal_matrix(spec, t)
    assert mat.shape == (10, 5)
    for j in range(5):
        assert mat[4, j] == pytest.approx(eval_marginal(spec, 4, float(t[j])))


def test_parity_sums_reconstruct_slice():
    # on circle x S^2 every sphere factor at s = 1 equals 1, so the two
    # parity sums at gamma = 0 add up to the kernel value at (t, 1)
    spec = product_spec(trunc=(14, 14))
    for t in (-0.7, 0.0, 0.42, 1.0):
        total = truncated_parity_sum(spec, 0, "even", t) + truncated_parity_sum(
            spec, 0, "odd", t
        )
        assert total == pytest.approx(eval_kernel(spec, t, 1.0), abs=1e-10)


def test_parity_sum_gamma_start():
    spec = product_spec(trunc=(6, 6))
    # gamma = 3 odd starts at l = 3; gamma = 3 even starts at l = 4
    odd = truncated_parity_sum(spec, 3, "odd", 0.5)
    expect_odd = sum(eval_marginal(spec, l, 0.5) for l in (3, 5))
    assert odd == pytest.approx(expect_odd)
    even = truncated_parity_sum(spec, 3, "even", 0.5)
    expect_even = sum(eval_marginal(spec, l, 0.5) for l in (4, 6))
    assert even == pytest.approx(expect_even)


def test_marginals_require_product_space():
    spec = KernelSpec(circle_space(), SupportSet1D.of(prog(0, 1)), geometric_scheme(), (10, 0))
    with pytest.raises(NotApplicableError):
        eval_marginal(spec, 0, 0.5)
    with pytest.raises(NotApplicableError):
        truncated_parity_sum(spec, 0, "even", 0.5)


# --- support reflection --------------------------------------------------------------

def test_support_of_truncated():
    support = SupportSet2D(((prog(0, 3), one(1)),))
    spec = product_spec(support, constant_scheme(1.0), trunc=(7, 7))
    trunc = support_of(spec, truncated=True)
    cells = {(kt.base, lt.base) for kt, lt in trunc.terms}
    assert cells == {(0, 1), (3, 1), (6, 1)}
    assert support_of(spec) is support


def test_empty_effective_support_warns():
    support = SupportSet2D(((one(50), one(50)),))
    spec = product_spec(support, constant_scheme(1.0), trunc=(10, 10))
    assert spec.is_effectively_empty
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        val = eval_kernel(spec, 0.5, 0.5)
    assert val == 0.0
    assert any("degenerate" in str(w.message) for w in caught)


# --- nonnegative coefficients force positive semidefinite evaluations ----------

def _pairwise_inputs(rng, space, n):
    """Random point configuration, returned as (t, s) argument matrices."""
    if space.kind in ("circle", "circle_sphere", "circle_tph"):
        thetas = rng.uniform(0.0, 2.0 * math.pi, size=n)
        t = np.cos(thetas[:, None] - thetas[None, :])
    else:
        t = None
    if space.kind == "circle":
        return t, None
    dim = space.m + 1 if space.kind in ("sphere", "circle_sphere") else space.d + 1
    vecs = rng.standard_normal((n, dim))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    s = np.clip(vecs @ vecs.T, -1.0, 1.0)
    if space.kind == "sphere":
        return s, None
    return t, s


def test_gram_of_random_specs_is_near_psd():
    from conftest import battery_1d, battery_2d

    rng = np.random.default_rng(20240811)
    spaces = [
        circle_space(),
        sphere_space(2),
        sphere_space(3),
        circle_sphere_space(2),
        circle_sphere_space(5),
        circle_tph_space("complex_proj", 4),
    ]
    supports_1d = battery_1d(seed=77, count=6)
    supports_2d = battery_2d(seed=78, count=6)
    for i, space in enumerate(spaces):
        support = supports_2d[i % 6] if space.is_product else supports_1d[i % 6]
        scheme = geometric_scheme(0.8, 0.7) if i % 2 else constant_scheme(0.5)
        spec = KernelSpec(space, support, scheme, truncation=(25, 25))
        if spec.is_effectively_empty:
            continue
        n = int(rng.integers(5, 31))
        t, s = _pairwise_inputs(rng, space, n)
        if s is not None:
            gram = kernel_values(spec, t.ravel(), s.ravel()).reshape(n, n)
        else:
            gram = kernel_values(spec, t.ravel()).reshape(n, n)
        lam = float(np.linalg.eigvalsh(gram)[0])
        assert lam >= -1e-10 * spec.value_at_one, f"{space.kind}: {lam}"


def test_marginal_grams_are_near_psd():
    spec = product_spec(
        SupportSet2D(((prog(0, 2), prog(0, 1)), (one(3), prog(1, 2)))),
        scheme=geometric_scheme(0.85, 0.9),
        trunc=(20, 12),
    )
    rng = np.random.default_rng(5)
    p = 8
    thetas = rng.uniform(0.0, 2.0 * math.pi, size=p)
    t = np.cos(thetas[:, None] - thetas[None, :])
    values = marginal_matrix(spec, t.ravel())
    at_one = marginal_matrix(spec, np.array([1.0]))[:, 0]
    for l in range(spec.lmax + 1):
        gram = values[l].reshape(p, p)
        lam = float(np.linalg.eigvalsh(gram)[0])
        assert lam >= -1e-10 * max(at_one[l], 1e-30), f"l={l}: {lam}"


def test_parity_split_sums_to_marginal_total():
    spec = product_spec(
        SupportSet2D(((prog(1, 3), prog(0, 1)), (prog(0, 4), one(5)))),
        scheme=geometric_scheme(0.9, 0.8),
        trunc=(18, 14),
    )
    for t in (-0.9, -0.3, 0.0, 0.4, 1.0):
        total = sum(eval_marginal(spec, l, t) for l in range(spec.lmax + 1))
        split = truncated_parity_sum(spec, 0, "even", t) + truncated_parity_sum(
            spec, 0, "odd", t
        )
        assert abs(split - total) <= 1e-12 * max(1.0, abs(total))
