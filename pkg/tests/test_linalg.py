import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ket, random_state
from oracles import gram_det
from ubkit import (
    PureState,
    ShapeMismatchError,
    StateSet,
    SystemShape,
    UBKitError,
    inner_product,
    is_product_state,
    lower_bound_N,
    numeric_rank,
    orthocomplement,
    schmidt_values,
    tensor_product,
)
from ubkit.linalg import product_factors

R2 = 1 / math.sqrt(2)
zero = ket((2,), 1, 0)
one = ket((2,), 0, 1)
plus = ket((2,), 1, 1)
minus = ket((2,), 1, -1)
i_plus = ket((2,), 1, 1j)


def bell(*amps):
    return ket((2, 2), *amps)


def basis_set(*digits):
    return StateSet.of([PureState.basis((2, 2), d) for d in digits])


def test_shape_validation():
    assert SystemShape((2, 3)).total == 6
    assert SystemShape((1,)).total == 1
    with pytest.raises(UBKitError):
        SystemShape((2, 1))
    with pytest.raises(UBKitError):
        SystemShape(())


def test_state_rejects_bad_norm_and_length():
    with pytest.raises(UBKitError):
        PureState(SystemShape((2,)), np.array([1.0, 1.0]))
    with pytest.raises(ShapeMismatchError):
        PureState(SystemShape((2, 2)), np.array([1.0, 0.0]))


def test_stateset_requires_unique_labels_and_one_shape():
    with pytest.raises(UBKitError):
        StateSet(SystemShape((2,)), (zero.relabel("a"), one.relabel("a")))
    with pytest.raises(ShapeMismatchError):
        StateSet.of([zero, PureState.basis((2, 2), (0, 0))])


def test_tensor_product_examples():
    assert np.allclose(tensor_product([zero, zero]).amplitudes, [1, 0, 0, 0])
    assert np.allclose(tensor_product([plus, plus]).amplitudes, [0.5] * 4)
    s = tensor_product([one, zero, one], shape=(2, 2, 2))
    assert np.flatnonzero(s.amplitudes).tolist() == [5]


def test_tensor_product_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        tensor_product([zero, zero], shape=(2, 3))
    with pytest.raises(ShapeMismatchError):
        tensor_product([PureState.basis((2, 2), (0, 0))])


def test_inner_product_examples():
    assert inner_product(zero, plus) == pytest.approx(R2)
    assert inner_product(bell(0, 1, 1, 0), bell(0, 1, -1, 0)) == pytest.approx(0)
    assert inner_product(i_plus, zero) == pytest.approx(R2)
    # conjugate-linear in the first slot
    assert inner_product(i_plus, one) == pytest.approx(-1j * R2)
    with pytest.raises(ShapeMismatchError):
        inner_product(zero, PureState.basis((2, 2), (0, 0)))


def test_numeric_rank_examples():
    assert numeric_rank(StateSet.of([zero, one])) == 2
    assert numeric_rank(StateSet.of([zero, plus, one])) == 2
    ex1 = StateSet.of([tensor_product([zero, zero]), tensor_product([plus, plus]), tensor_product([one, one])])
    # Gram matrix [[1,.5,0],[.5,1,.5],[0,.5,1]] has determinant 1/2
    assert gram_det(ex1.matrix()) == pytest.approx(0.5)
    assert numeric_rank(ex1) == 3


def test_orthocomplement_examples():
    comp = orthocomplement(basis_set((0, 0), (0, 1), (1, 0)))
    assert comp.dim == 1
    assert np.allclose(comp.vectors[0], [0, 0, 0, 1])

    ex1 = StateSet.of([tensor_product([zero, zero]), tensor_product([plus, plus]), tensor_product([one, one])])
    comp = orthocomplement(ex1)
    # v00 = v11 = 0 and v01 + v10 = 0 by hand
    assert comp.dim == 1
    assert abs(np.vdot(comp.vectors[0], [0, R2, -R2, 0])) == pytest.approx(1, abs=1e-12)

    full = basis_set((0, 0), (0, 1), (1, 0), (1, 1))
    assert orthocomplement(full).dim == 0


def test_orthocomplement_complex_members():
    rng = np.random.default_rng(3)
    S = StateSet.of([random_state(rng, (3, 3)) for _ in range(4)])
    comp = orthocomplement(S)
    assert comp.dim == 5
    assert np.abs(S.matrix().conj() @ comp.vectors.T).max() < 1e-12


def test_orthocomplement_is_deterministic_and_phase_fixed():
    S = basis_set((0, 0), (1, 1))
    a, b = orthocomplement(S).vectors, orthocomplement(S).vectors
    assert np.array_equal(a, b)
    for v in a:
        j = np.argmax(np.abs(v))
        assert v[j].real > 0 and v[j].imag == 0


def test_schmidt_values_examples():
    assert np.allclose(schmidt_values(PureState.basis((2, 2), (0, 0)), 0), [1, 0])
    assert np.allclose(schmidt_values(bell(1, 0, 0, 1), 0), [R2, R2])
    assert np.allclose(schmidt_values(bell(0, 1, -1, 0), 1), [R2, R2])
    with pytest.raises(UBKitError):
        schmidt_values(bell(1, 0, 0, 1), 2)


def test_is_product_state_examples():
    assert is_product_state(tensor_product([plus, plus]))
    assert not is_product_state(bell(1, 0, 0, 1))
    # |0> (x) Bell: product across party 1, entangled across parties 2|3
    s = PureState.from_amplitudes((2, 2, 2), np.kron([1, 0], [1, 0, 0, 1]))
    assert not is_product_state(s)
    assert schmidt_values(s, 0)[1] < 1e-12


def test_product_factors_reassemble():
    rng = np.random.default_rng(0)
    factors = [random_state(rng, (d,)) for d in (2, 3, 2)]
    s = tensor_product(factors)
    back = tensor_product(product_factors(s))
    assert np.allclose(back.amplitudes, s.amplitudes, atol=1e-12)
    with pytest.raises(UBKitError):
        product_factors(bell(1, 0, 0, 1))


@pytest.mark.parametrize("shape, N", [((2, 2), 3), ((3,), 3), ((7,), 7), ((3, 3), 5), ((2, 2, 2), 4)])
def test_lower_bound_N(shape, N):
    assert lower_bound_N(shape) == N


# ---- properties

shapes = st.lists(st.integers(2, 4), min_size=1, max_size=3).filter(lambda s: np.prod(s) <= 36)


@st.composite
def state_sets(draw):
    shape = tuple(draw(shapes))
    d = int(np.prod(shape))
    m = draw(st.integers(1, d))
    rng = np.random.default_rng(draw(st.integers(0, 2 ** 32 - 1)))
    return StateSet.of([random_state(rng, shape) for _ in range(m)])


@settings(max_examples=40, deadline=None)
@given(state_sets())
def test_rank_plus_complement_dimension(S):
    comp = orthocomplement(S)
    assert numeric_rank(S) + comp.dim == S.shape.total
    if comp.dim:
        assert np.abs(S.matrix().conj() @ comp.vectors.T).max() < 1e-10


@settings(max_examples=40, deadline=None)
@given(shapes, st.integers(0, 2 ** 32 - 1))
def test_tensor_products_are_product_and_normalized(shape, seed):
    rng = np.random.default_rng(seed)
    s = tensor_product([random_state(rng, (d,)) for d in shape])
    assert abs(np.linalg.norm(s.amplitudes) - 1) < 1e-12
    assert is_product_state(s, 1e-7)


@settings(max_examples=40, deadline=None)
@given(shapes, st.integers(0, 2 ** 32 - 1))
def test_schmidt_squares_sum_to_one_and_inner_product_hermitian(shape, seed):
    rng = np.random.default_rng(seed)
    a, b = random_state(rng, shape), random_state(rng, shape)
    for k in range(len(shape)):
        assert np.sum(schmidt_values(a, k) ** 2) == pytest.approx(1, abs=1e-10)
    assert inner_product(a, b) == pytest.approx(inner_product(b, a).conjugate(), abs=1e-14)
