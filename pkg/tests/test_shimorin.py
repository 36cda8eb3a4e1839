"""Analytic-model construction tests: Cauchy dual, coefficients, kernel,
multiplier semigroup, Wold splitting."""

import math

import numpy as np
import pytest

from shiftmodels.config import DEFAULT_TOL
from shiftmodels.errors import OutsideDisc, UnsupportedRegime
from shiftmodels.numkit import ComplexMatrix
from shiftmodels.operators import (
    Dense,
    DirectSum,
    EventuallyConstantWeights,
    FiniteSupportVector,
    Shift,
    adjoint_apply,
    apply,
    dirichlet_shift,
    isometric_shift,
)
from shiftmodels.series import PowerSeries, series_mul
from shiftmodels.shimorin import (
    build_model,
    cauchy_dual,
    coefficients,
    defect_projection,
    kernel_eval,
    left_inverse_apply,
    model_norm_sq,
    semigroup_multiplier,
    verify_intertwining,
    verify_reproducing,
    verify_semigroup_model,
    wold_decompose,
)


def _random_vector(rng: np.random.Generator, max_index: int = 15) -> FiniteSupportVector:
    support = rng.choice(max_index + 1, size=min(5, max_index + 1), replace=False)
    entries = {
        int(k): complex(rng.standard_normal(), rng.standard_normal()) for k in support
    }
    return FiniteSupportVector.from_dict(entries)


def test_cauchy_dual_pinned_values():
    assert cauchy_dual(isometric_shift()).weights.weight(3) == pytest.approx(1.0)

    dual = cauchy_dual(dirichlet_shift())
    for k in range(6):
        assert dual.weights.weight(k) == pytest.approx(math.sqrt((k + 1) / (k + 2)), abs=1e-15)

    dense_dual = cauchy_dual(Dense(ComplexMatrix.diagonal([2.0])))
    assert dense_dual.matrix.array[0, 0] == pytest.approx(0.5, abs=1e-14)


def test_build_model_pinned_structure():
    model = build_model(isometric_shift())
    assert model.dim_defect == 1
    assert model.radius == pytest.approx(1.0)
    assert model.defect_basis[0].as_dict() == {0: 1.0 + 0.0j}

    dir_model = build_model(dirichlet_shift())
    assert dir_model.dim_defect == 1
    # ||L|| = sup 1/w_k = 1/inf w_k; Dirichlet weights decrease to 1 so radius 1...
    # inf w_k is the tail limit 1, giving evaluation radius 1
    assert dir_model.radius == pytest.approx(1.0)

    pair = build_model(DirectSum((isometric_shift(), isometric_shift())))
    assert pair.dim_defect == 2


def test_build_model_rejects_dense():
    with pytest.raises(UnsupportedRegime):
        build_model(Dense(ComplexMatrix.diagonal([0.5, 0.25])))


def test_model_projection_identities():
    rng = np.random.default_rng(71)
    for T in (isometric_shift(), dirichlet_shift(), Shift(EventuallyConstantWeights((1.4,), 0.9))):
        model = build_model(T)
        for _ in range(10):
            x = _random_vector(rng)
            # L T = Id
            assert left_inverse_apply(model, apply(T, x)).sub(x).norm() <= 1e-13
            # P annihilates the range of T
            assert defect_projection(model, apply(T, x)).norm() <= 1e-13
            # P idempotent
            p = defect_projection(model, x)
            assert defect_projection(model, p).sub(p).norm() <= 1e-13


def test_coefficients_pinned_values():
    iso = build_model(isometric_shift())
    c = coefficients(iso, FiniteSupportVector.basis(3), 8).coeffs
    mags = [float(np.abs(row).max()) for row in c]
    assert mags[3] == pytest.approx(1.0, abs=1e-14)
    assert sum(mags) == pytest.approx(1.0, abs=1e-13)

    dirichlet = build_model(dirichlet_shift())
    c = coefficients(dirichlet, FiniteSupportVector.basis(2), 8).coeffs
    assert np.abs(c[2][0]) == pytest.approx(1.0 / math.sqrt(3.0), abs=1e-14)
    assert sum(float(np.abs(row).max()) for row in c) == pytest.approx(
        1.0 / math.sqrt(3.0), abs=1e-13
    )


def test_coefficients_of_defect_vector():
    model = build_model(dirichlet_shift())
    e = model.defect_basis[0]
    c = coefficients(model, e, 6).coeffs
    assert np.abs(c[0][0]) == pytest.approx(1.0, abs=1e-14)
    assert max(float(np.abs(row).max()) for row in c[1:]) <= 1e-14


def test_weighted_parseval_identity():
    rng = np.random.default_rng(72)
    for T in (isometric_shift(), dirichlet_shift()):
        model = build_model(T)
        for _ in range(10):
            x = _random_vector(rng)
            c = coefficients(model, x, x.max_index + 1)
            assert model_norm_sq(model, c) == pytest.approx(x.norm() ** 2, rel=1e-12)


def test_partial_expansion_telescopes_with_remainder():
    # x = sum_{k<n} T^k P L^k x + T^n L^n x exactly
    rng = np.random.default_rng(73)
    T = dirichlet_shift()
    model = build_model(T)
    for _ in range(5):
        x = _random_vector(rng)
        for n in (1, 3, 7):
            total = FiniteSupportVector.zero()
            y = x
            for k in range(n):
                term = defect_projection(model, y)
                for _ in range(k):
                    term = apply(T, term)
                total = total.add(term)
                y = left_inverse_apply(model, y)
            remainder = y  # equals L^n x
            for _ in range(n):
                remainder = apply(T, remainder)
            assert total.add(remainder).sub(x).norm() <= 1e-12 * max(1.0, x.norm())


def test_kernel_pinned_values():
    iso = build_model(isometric_shift())
    assert kernel_eval(iso, 0.5, 0.5)[0, 0] == pytest.approx(4.0 / 3.0, abs=1e-10)

    dirichlet = build_model(dirichlet_shift())
    expected = -math.log(0.85) / 0.15
    assert kernel_eval(dirichlet, 0.3, 0.5)[0, 0] == pytest.approx(expected, abs=1e-10)


def test_kernel_at_zero_is_identity():
    for T in (isometric_shift(), dirichlet_shift()):
        model = build_model(T)
        for z in (0.0, 0.4, -0.3 + 0.5j):
            np.testing.assert_allclose(kernel_eval(model, 0.0, z), np.eye(1), atol=1e-12)


def test_kernel_hermitian_symmetry():
    model = build_model(dirichlet_shift())
    pairs = ((0.3, 0.5), (0.2 + 0.4j, -0.5j), (0.6, -0.1 - 0.3j))
    for lam, z in pairs:
        k1 = kernel_eval(model, lam, z)
        k2 = kernel_eval(model, z, lam)
        assert np.max(np.abs(k1 - k2.conj().T)) <= DEFAULT_TOL.tail_tol * 10


def test_kernel_rejects_outside_disc():
    model = build_model(isometric_shift())
    with pytest.raises(OutsideDisc):
        kernel_eval(model, 0.5, 1.0)


def test_intertwining_examples():
    iso = build_model(isometric_shift())
    rep = verify_intertwining(iso, FiniteSupportVector.basis(0), N=12)
    assert rep.passed and rep.max_residual == 0.0

    rng = np.random.default_rng(74)
    dirichlet = build_model(dirichlet_shift())
    for _ in range(10):
        rep = verify_intertwining(dirichlet, _random_vector(rng), N=25)
        assert rep.passed
        assert rep.max_residual <= 1e-12


def test_reproducing_examples():
    iso = build_model(isometric_shift())
    e = np.array([1.0 + 0.0j])

    rep = verify_reproducing(iso, FiniteSupportVector.basis(2), 0.0, e, DEFAULT_TOL)
    assert rep.passed and rep.residual <= 1e-14

    # (U e2)(lambda) = lambda^2, so the pairing at 0.5 is 0.25
    c = coefficients(iso, FiniteSupportVector.basis(2), 4).coeffs
    lhs = sum((0.5.__pow__(n)) * c[n][0] for n in range(len(c)))
    assert lhs == pytest.approx(0.25, abs=1e-14)
    rep = verify_reproducing(iso, FiniteSupportVector.basis(2), 0.5, e, DEFAULT_TOL)
    assert rep.passed

    rng = np.random.default_rng(75)
    dirichlet = build_model(dirichlet_shift())
    for _ in range(5):
        rep = verify_reproducing(dirichlet, _random_vector(rng), 0.4, e, DEFAULT_TOL)
        assert rep.passed
        assert rep.residual <= 1e-8


def test_multiplier_pinned_values():
    flat = semigroup_multiplier(0.0, 6)
    np.testing.assert_allclose(flat.coeffs, [1.0] + [0.0] * 6, atol=0.0)

    assert semigroup_multiplier(1.0, 10).coeffs[0] == pytest.approx(math.exp(-1.0), abs=1e-14)


def test_multiplier_semigroup_law():
    N = 64
    for t, s in ((0.3, 0.7), (0.25, 0.25), (1.0, 0.5)):
        product = series_mul(semigroup_multiplier(t, N), semigroup_multiplier(s, N), N=N)
        target = semigroup_multiplier(t + s, N)
        half = N // 2
        assert np.max(np.abs(product.coeffs[: half + 1] - target.coeffs[: half + 1])) <= 1e-10


def test_multiplier_derivative_is_symbol_multiplication():
    # (d/dt) e_t = e_t * (z+1)/(z-1); central difference vs series product
    N = 48
    t0, h = 1.0, 1e-5
    upper = semigroup_multiplier(t0 + h, N).coeffs
    lower = semigroup_multiplier(t0 - h, N).coeffs if t0 - h >= 0 else None
    derivative = (upper - lower) / (2.0 * h)
    symbol = PowerSeries(np.concatenate(([-1.0], -2.0 * np.ones(N))))
    target = series_mul(semigroup_multiplier(t0, N), symbol, N=N).coeffs
    assert np.max(np.abs(derivative - target)) <= 1e-5


def test_verify_semigroup_model_report():
    model = build_model(isometric_shift())
    rep = verify_semigroup_model(model, 0.7, N=64)
    assert rep.passed
    assert rep.generator_residual <= 1e-6
    assert rep.commutation_residual <= 1e-12
    assert rep.constant_term_residual <= 1e-12
    assert any("e^{-t}" in note or "exp" in note for note in rep.notes)


def test_wold_decompose_pinned_cases():
    rng = np.random.default_rng(76)
    raw = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    q, r = np.linalg.qr(raw)
    unitary = Dense(ComplexMatrix(q * (np.diag(r) / np.abs(np.diag(r)))))
    rep = wold_decompose(unitary)
    assert rep.dim_unitary == 4 and rep.dim_wandering_dense == 0
    assert rep.unitary_residual <= 1e-12

    jordan = Dense(
        ComplexMatrix.from_rows([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    )
    rep = wold_decompose(jordan)
    assert rep.dim_unitary == 0 and rep.dim_wandering_dense == 3
    assert rep.wandering_span_dim == 3 and rep.wandering_span_ok

    mixed = DirectSum(
        (
            Dense(ComplexMatrix.diagonal([1.0j])),
            Dense(ComplexMatrix.from_rows([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])),
        )
    )
    rep = wold_decompose(mixed)
    assert rep.dim_unitary == 1 and rep.dim_wandering_dense == 3
    assert rep.unitary_residual <= 1e-12
    assert rep.wandering_span_ok


def test_wold_shift_blocks_reported_as_pure():
    rep = wold_decompose(DirectSum((Dense(ComplexMatrix.diagonal([1.0j])), isometric_shift())))
    assert rep.dim_unitary == 1
    assert rep.wandering_infinite
