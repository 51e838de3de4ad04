"""Tensor-product linear algebra for pure multipartite states.

Amplitudes are stored row-major with party 1 as the most significant
digit: the computational basis index of ``|j_1 ... j_K>`` is
``sum_k j_k * (d_{k+1} * ... * d_K)``, i.e. ``np.ravel_multi_index`` order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import ShapeMismatchError, UBKitError

RANK_TOL = 1e-8
PRODUCT_TOL = 1e-7
NORM_TOL = 1e-12


@dataclass(frozen=True)
class SystemShape:
    """Local dimensions ``(d_1, ..., d_K)`` of a K-party system."""

    dims: tuple[int, ...]

    def __init__(self, dims: Iterable[int]):
        dims = tuple(int(d) for d in dims)
        if not dims:
            raise UBKitError("a system needs at least one party")
        if len(dims) == 1:
            if dims[0] < 1:
                raise UBKitError(f"local dimension must be >= 1, got {dims[0]}")
        elif any(d < 2 for d in dims):
            raise UBKitError(f"every local dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def K(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return math.prod(self.dims)

    def __iter__(self):
        return iter(self.dims)

    def __str__(self):
        return "x".join(str(d) for d in self.dims)


def as_shape(shape) -> SystemShape:
    if isinstance(shape, SystemShape):
        return shape
    if isinstance(shape, int):
        return SystemShape((shape,))
    return SystemShape(shape)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    """A unit vector of ``shape.total`` complex amplitudes.

    Use :meth:`from_amplitudes` to build one from an unnormalized vector.
    """

    shape: SystemShape
    amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        shape = as_shape(self.shape)
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size != shape.total:
            raise ShapeMismatchError(
                f"{amps.size} amplitudes do not fit shape {shape} (dimension {shape.total})")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise UBKitError(f"state {self.label!r} has norm {norm!r}, expected 1")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, shape, amplitudes, label: str = "") -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0 or not np.isfinite(norm):
            raise UBKitError(f"cannot normalize state {label!r} with norm {norm}")
        return cls(as_shape(shape), amps / norm, label)

    @classmethod
    def basis(cls, shape, digits: Sequence[int], label: str = "") -> "PureState":
        """Computational basis state ``|j_1 ... j_K>``."""
        shape = as_shape(shape)
        amps = np.zeros(shape.total, dtype=complex)
        amps[np.ravel_multi_index(tuple(digits), shape.dims)] = 1.0
        return cls(shape, amps, label)

    @property
    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape.dims)

    def relabel(self, label: str) -> "PureState":
        return PureState(self.shape, self.amplitudes, label)

    def __repr__(self):
        return f"PureState({self.label!r}, shape={self.shape}, amplitudes={np.round(self.amplitudes, 6)})"


@dataclass(frozen=True, eq=False)
class StateSet:
    """Ordered collection of states on one shape."""

    shape: SystemShape
    members: tuple[PureState, ...] = field(default_factory=tuple)

    def __post_init__(self):
        shape = as_shape(self.shape)
        members = tuple(self.members)
        for s in members:
            if s.shape != shape:
                raise ShapeMismatchError(f"member {s.label!r} has shape {s.shape}, set has {shape}")
        labels = [s.label for s in members]
        if len(set(labels)) != len(labels):
            raise UBKitError(f"member labels must be unique, got {labels}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, states: Sequence[PureState], shape=None) -> "StateSet":
        """Build a set, relabelling anonymous or duplicate members by position."""
        states = list(states)
        if shape is None:
            if not states:
                raise UBKitError("cannot infer the shape of an empty set")
            shape = states[0].shape
        seen = set()
        fixed = []
        for i, s in enumerate(states):
            label = s.label or f"#{i + 1}"
            if label in seen:
                label = f"{label}#{i + 1}"
            seen.add(label)
            fixed.append(s if label == s.label else s.relabel(label))
        return cls(as_shape(shape), tuple(fixed))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    @property
    def labels(self) -> list[str]:
        return [s.label for s in self.members]

    def matrix(self) -> np.ndarray:
        """Members as rows of an ``m x d`` array."""
        if not self.members:
            return np.zeros((0, self.shape.total), dtype=complex)
        return np.array([s.amplitudes for s in self.members])

    def subset(self, indices: Iterable[int]) -> "StateSet":
        return StateSet(self.shape, tuple(self.members[i] for i in indices))

    def without(self, k: int) -> "StateSet":
        return self.subset(i for i in range(len(self)) if i != k)


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Orthonormal rows spanning a subspace of the full space."""

    shape: SystemShape
    vectors: np.ndarray

    def __post_init__(self):
        shape = as_shape(self.shape)
        vecs = _frozen(np.reshape(self.vectors, (-1, shape.total)))
        gram = vecs.conj() @ vecs.T
        if not np.allclose(gram, np.eye(len(vecs)), atol=1e-10, rtol=0):
            raise UBKitError("subspace vectors are not orthonormal")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "vectors", vecs)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def projector(self) -> np.ndarray:
        return self.vectors.T @ self.vectors.conj()

    def states(self, prefix: str = "v") -> StateSet:
        return StateSet(self.shape, tuple(
            PureState(self.shape, v, f"{prefix}{i + 1}") for i, v in enumerate(self.vectors)))


def _check_same_shape(a: PureState, b: PureState):
    if a.shape != b.shape:
        raise ShapeMismatchError(f"shapes differ: {a.shape} vs {b.shape}")


def tensor_product(factors: Sequence[PureState], shape=None, label: str = "") -> PureState:
    """Kronecker product of one single-party state per party, party 1 first.

    If ``shape`` is given, factor ``k`` must have dimension ``d_k``.
    """
    if not factors:
        raise ShapeMismatchError("need at least one factor")
    for f in factors:
        if f.shape.K != 1:
            raise ShapeMismatchError(f"factor {f.label!r} is not a single-party state")
    dims = tuple(f.shape.total for f in factors)
    if shape is not None and as_shape(shape).dims != dims:
        raise ShapeMismatchError(f"factor dimensions {dims} do not match shape {as_shape(shape)}")
    amps = reduce(np.kron, (f.amplitudes for f in factors))
    shape = SystemShape(dims)
    return PureState.from_amplitudes(shape, amps, label)


def inner_product(a: PureState, b: PureState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _check_same_shape(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def _as_matrix(vectors) -> np.ndarray:
    if isinstance(vectors, StateSet):
        return vectors.matrix()
    if isinstance(vectors, SubspaceBasis):
        return np.asarray(vectors.vectors)
    return np.atleast_2d(np.asarray([getattr(v, "amplitudes", v) for v in vectors], dtype=complex))


def numeric_rank(vectors, tol: float = RANK_TOL) -> int:
    """Number of singular values above ``tol`` times the largest one."""
    mat = _as_matrix(vectors)
    if mat.size == 0:
        return 0
    s = scipy.linalg.svdvals(mat)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def gram_condition_number(vectors) -> float:
    """2-norm condition number of the Gram matrix of the given vectors."""
    mat = _as_matrix(vectors)
    return float(np.linalg.cond(mat.conj() @ mat.T))


def _fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its first largest-magnitude entry is real positive."""
    mag = np.abs(v)
    j = int(np.argmax(mag > mag.max() - 1e-12))
    out = v * (np.conj(v[j]) / mag[j])
    out[j] = mag[j]
    return out


def _canonical_basis(proj: np.ndarray, dim: int) -> np.ndarray:
    # Pivoted QR on the projector picks computational-basis directions in order
    # of how much of them survives projection, so the output does not depend on
    # the arbitrary rotation inside an SVD null space.
    if dim == 0:
        return np.zeros((0, proj.shape[0]), dtype=complex)
    q, _, _ = scipy.linalg.qr(proj, pivoting=True)
    return np.array([_fix_phase(v) for v in q[:, :dim].T])


def span_basis(vectors, shape=None, tol: float = RANK_TOL) -> SubspaceBasis:
    """Orthonormal basis of the span of ``vectors``."""
    mat = _as_matrix(vectors)
    if shape is None:
        shape = vectors.shape
    shape = as_shape(shape)
    if mat.size == 0:
        return SubspaceBasis(shape, np.zeros((0, shape.total)))
    u, s, vh = scipy.linalg.svd(mat.T, full_matrices=False)
    r = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    basis = u[:, :r]
    return SubspaceBasis(shape, _canonical_basis(basis @ basis.conj().T, r))


def orthocomplement(S, tol: float = RANK_TOL) -> SubspaceBasis:
    """Orthonormal basis of the vectors orthogonal to every member of ``S``."""
    shape = S.shape
    mat = _as_matrix(S)
    d = shape.total
    if mat.size == 0:
        return SubspaceBasis(shape, np.eye(d, dtype=complex))
    # rows of vh past the rank satisfy mat @ conj(v) = 0, i.e. <psi_j|v> = 0
    _, s, vh = scipy.linalg.svd(mat, full_matrices=True)
    r = int(np.sum(s > tol * s[0])) if s[0] > 0 else 0
    null = vh[r:].T
    return SubspaceBasis(shape, _canonical_basis(null @ null.conj().T, d - r))


def unfolding(state: PureState, party: int) -> np.ndarray:
    """``d_k x (d / d_k)`` matrix of the cut {party | rest}; ``party`` is 0-based."""
    K = state.shape.K
    if not 0 <= party < K:
        raise UBKitError(f"party index {party} out of range for {K} parties")
    t = np.moveaxis(state.tensor, party, 0)
    return t.reshape(state.shape.dims[party], -1)


def schmidt_values(state: PureState, party: int) -> np.ndarray:
    """Singular values across the cut {party | rest}, descending.

    ``party`` is 0-based.
    """
    return scipy.linalg.svdvals(unfolding(state, party))


def second_schmidt_value(state: PureState, party: int) -> float:
    s = schmidt_values(state, party)
    return float(s[1]) if len(s) > 1 else 0.0


def is_product_state(state: PureState, tol: float = PRODUCT_TOL) -> bool:
    """True when every single-party cut has second Schmidt value below ``tol``."""
    return all(second_schmidt_value(state, k) < tol for k in range(state.shape.K))


def product_factors(state: PureState, tol: float = PRODUCT_TOL) -> list[PureState]:
    """Split a product state into single-party factors.

    The global phase is absorbed into the first factor, so
    ``tensor_product(product_factors(s))`` reproduces ``s``.
    """
    if not is_product_state(state, tol):
        raise UBKitError(f"state {state.label!r} is not a product state")
    factors = []
    for k, d in enumerate(state.shape.dims):
        u, _, _ = np.linalg.svd(unfolding(state, k), full_matrices=False)
        factors.append(u[:, 0])
    phase = np.vdot(reduce(np.kron, factors), state.amplitudes)
    factors[0] = factors[0] * phase / abs(phase)
    return [PureState.from_amplitudes((d,), f, f"{state.label}[{k + 1}]")
            for k, (d, f) in enumerate(zip(state.shape.dims, factors))]


def lower_bound_N(shape) -> int:
    """Minimum size ``sum_k (d_k - 1) + 1`` of an unextendible set."""
    shape = as_shape(shape)
    return sum(d - 1 for d in shape.dims) + 1
