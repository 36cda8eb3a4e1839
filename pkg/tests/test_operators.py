"""Structured operator tests: shifts, dense blocks, direct sums, JSON formats."""

import math

import numpy as np
import pytest

from shiftmodels.errors import AmbientMismatch, NotBoundedBelow
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
    gram_apply_inverse,
    isometric_shift,
    operator_from_json,
    operator_to_json,
    spectral_radius_estimate,
    to_dense_matrix,
    vector_from_json,
    vector_to_json,
)
from shiftmodels.shimorin import cauchy_dual

SQRT2 = math.sqrt(2.0)


def _random_vector(
    rng: np.random.Generator, max_index: int = 12, ambient: int | None = None
) -> FiniteSupportVector:
    size = min(int(rng.integers(1, 6)), max_index + 1)
    support = rng.choice(max_index + 1, size=size, replace=False)
    entries = {
        int(k): complex(rng.standard_normal(), rng.standard_normal()) for k in support
    }
    return FiniteSupportVector.from_dict(entries, ambient=ambient)


def test_apply_pinned_values():
    e0 = FiniteSupportVector.basis(0)
    assert apply(isometric_shift(), e0).as_dict() == {1: 1.0 + 0.0j}

    v = FiniteSupportVector.from_dict({0: 2.0, 1: -1.0j}, ambient=2)
    eye = Dense(ComplexMatrix.identity(2))
    assert apply(eye, v).as_dict() == v.as_dict()

    image = apply(dirichlet_shift(), e0)
    assert set(image.as_dict()) == {1}
    assert image.amplitude(1) == pytest.approx(SQRT2, abs=1e-15)


def test_adjoint_apply_pinned_values():
    S = isometric_shift()
    assert adjoint_apply(S, FiniteSupportVector.basis(0)).as_dict() == {}
    assert adjoint_apply(S, FiniteSupportVector.basis(1)).as_dict() == {0: 1.0 + 0.0j}

    back = adjoint_apply(dirichlet_shift(), FiniteSupportVector.basis(1))
    assert set(back.as_dict()) == {0}
    assert back.amplitude(0) == pytest.approx(SQRT2, abs=1e-15)


def test_gram_apply_inverse_pinned_values():
    x = FiniteSupportVector.from_dict({0: 1.0, 3: 2.0j})
    assert gram_apply_inverse(isometric_shift(), x).as_dict() == x.as_dict()

    half = gram_apply_inverse(dirichlet_shift(), FiniteSupportVector.basis(0))
    assert half.amplitude(0) == pytest.approx(0.5, abs=1e-15)

    quarter = gram_apply_inverse(
        Dense(ComplexMatrix.diagonal([2.0])), FiniteSupportVector.basis(0, ambient=1)
    )
    assert quarter.amplitude(0) == pytest.approx(0.25, abs=1e-14)


def test_gram_apply_inverse_rejects_singular_dense():
    T = Dense(ComplexMatrix.from_rows([[1.0, 0.0], [0.0, 0.0]]))
    with pytest.raises(NotBoundedBelow):
        gram_apply_inverse(T, FiniteSupportVector.basis(0, ambient=2))


def test_spectral_radius_estimates():
    assert spectral_radius_estimate(isometric_shift()) == pytest.approx(1.0, abs=1e-15)
    assert spectral_radius_estimate(Dense(ComplexMatrix.diagonal([3.0, -5.0]))) == pytest.approx(
        5.0, abs=1e-8
    )
    # Cauchy dual of the Dirichlet shift: weights sqrt((k+1)/(k+2)), tail limit 1.
    assert spectral_radius_estimate(dirichlet_shift(dual=True)) == pytest.approx(1.0, abs=1e-15)


def test_adjoint_pairing():
    rng = np.random.default_rng(21)
    shift = Shift(EventuallyConstantWeights((1.3, 0.7), 1.1))
    for _ in range(25):
        x = _random_vector(rng)
        y = _random_vector(rng)
        lhs = apply(shift, x).inner(y)
        rhs = x.inner(adjoint_apply(shift, y))
        assert lhs == pytest.approx(rhs, abs=1e-14)

    dense = Dense(ComplexMatrix(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))))
    for _ in range(25):
        x = _random_vector(rng, max_index=4, ambient=5)
        y = _random_vector(rng, max_index=4, ambient=5)
        lhs = apply(dense, x).inner(y)
        rhs = x.inner(adjoint_apply(dense, y))
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_cauchy_dual_left_inverse_identity():
    # adjoint of the Cauchy dual is a left inverse of T on finite supports.
    rng = np.random.default_rng(22)
    for T in (isometric_shift(), dirichlet_shift(), Shift(EventuallyConstantWeights((2.0,), 1.0))):
        for _ in range(10):
            x = _random_vector(rng)
            back = adjoint_apply(cauchy_dual(T), apply(T, x))
            diff = back.sub(x)
            assert diff.norm() <= 1e-14 * max(1.0, x.norm())


def test_direct_sum_acts_blockwise():
    dense = Dense(ComplexMatrix.from_rows([[0.0, 1.0], [0.0, 0.0]]))
    V = DirectSum((dense, Dense(ComplexMatrix.diagonal([1.0j]))))
    # contiguous layout: block 0 owns indices 0..1, block 1 owns index 2
    x = FiniteSupportVector.from_dict({1: 1.0, 2: 2.0}, ambient=3)
    image = apply(V, x)
    assert image.amplitude(0) == pytest.approx(1.0)
    assert image.amplitude(1) == pytest.approx(0.0)
    assert image.amplitude(2) == pytest.approx(2.0j)


def test_direct_sum_round_robin_for_infinite_parts():
    V = DirectSum((isometric_shift(), isometric_shift()))
    # round-robin layout: part r, local index q sit at flat index 2q + r
    image = apply(V, FiniteSupportVector.basis(0))
    assert image.as_dict() == {2: 1.0 + 0.0j}
    image = apply(V, FiniteSupportVector.basis(1))
    assert image.as_dict() == {3: 1.0 + 0.0j}


def test_ambient_mismatch_raised():
    eye = Dense(ComplexMatrix.identity(2))
    with pytest.raises(AmbientMismatch):
        apply(eye, FiniteSupportVector.basis(5))


def test_vector_algebra_and_inner_convention():
    x = FiniteSupportVector.from_dict({0: 1.0 + 1.0j})
    y = FiniteSupportVector.from_dict({0: 2.0})
    # inner is linear in the first slot, conjugate-linear in the second
    assert x.scale(3.0).inner(y) == pytest.approx(3.0 * x.inner(y))
    assert x.inner(y.scale(1.0j)) == pytest.approx(-1.0j * x.inner(y))
    assert x.add(y).amplitude(0) == pytest.approx(3.0 + 1.0j)
    assert x.sub(y).amplitude(0) == pytest.approx(-1.0 + 1.0j)
    assert x.norm() == pytest.approx(SQRT2, abs=1e-15)


def test_operator_json_round_trip():
    ops = (
        dirichlet_shift(),
        Shift(EventuallyConstantWeights((1.5, 0.5), 1.0)),
        Dense(ComplexMatrix.from_rows([[0.0, 1.0], [-1.0, 0.0]])),
        DirectSum((Dense(ComplexMatrix.diagonal([1.0j])), Dense(ComplexMatrix.identity(2)))),
    )
    rng = np.random.default_rng(23)
    for T in ops:
        again = operator_from_json(operator_to_json(T))
        ambient = to_dense_matrix(T).n if isinstance(T, (Dense, DirectSum)) else None
        for _ in range(5):
            max_index = ambient - 1 if ambient is not None else 2
            x = _random_vector(rng, max_index=max_index, ambient=ambient)
            assert apply(again, x).sub(apply(T, x)).norm() <= 1e-15


def test_vector_json_round_trip():
    x = FiniteSupportVector.from_dict({0: 1.0 - 2.0j, 7: 0.25})
    again = vector_from_json(vector_to_json(x))
    assert again.as_dict() == x.as_dict()
