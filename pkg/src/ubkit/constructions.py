"""Explicit state families: Vandermonde product states, minimal unextendible
product bases, the tight product basis, maximally entangled sets and a few
small named examples.
"""

from __future__ import annotations

import cmath
import itertools
import math
from typing import Sequence, Union

import numpy as np

from .errors import PreconditionError, UBKitError
from .linalg import (
    PureState,
    StateSet,
    SystemShape,
    as_shape,
    lower_bound_N,
    numeric_rank,
    tensor_product,
)


class _Infinity:
    """The point at infinity of the extended complex plane."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

ExtendedComplex = Union[complex, _Infinity]


def extended(x) -> ExtendedComplex:
    """Coerce ``x`` to an extended complex value.

    ``INF``, ``"inf"`` and a real infinity all map to :data:`INF`.
    """
    if x is INF:
        return INF
    if isinstance(x, str):
        text = x.strip().lower()
        if text in ("inf", "infinity", "oo", "+inf"):
            return INF
        return complex(text.replace("i", "j") if "j" not in text else text)
    z = complex(x)
    if cmath.isinf(z):
        return INF
    if cmath.isnan(z):
        raise UBKitError("NaN is not a valid parameter")
    return z


def format_extended(x: ExtendedComplex) -> str:
    if x is INF:
        return "inf"
    x = complex(x)
    if x.imag == 0:
        return f"{x.real:g}"
    return f"{x.real:g}{x.imag:+g}i"


def _powers(x: complex, n: int) -> np.ndarray:
    """``(1, x, ..., x^(n-1))`` up to a positive scale, safe for large ``|x|``."""
    j = np.arange(n)
    r = abs(x)
    if r <= 1:
        return np.asarray(x, dtype=complex) ** j
    # x^j = |x|^(n-1) * (x/|x|)^j * |x|^(j-n+1); the dropped factor is positive
    return (x / r) ** j * r ** (j - (n - 1.0))


def vandermonde_local(d: int, x, label: str = "") -> PureState:
    """Normalized ``sum_j x^j |j>`` on a ``d``-dimensional space; ``|d-1>`` at infinity."""
    if d < 1:
        raise UBKitError(f"dimension must be >= 1, got {d}")
    x = extended(x)
    if x is INF:
        return PureState.basis((d,), (d - 1,), label)
    return PureState.from_amplitudes((d,), _powers(x, d), label)


def _label(prefix: str, params) -> str:
    return f"{prefix}({','.join(format_extended(p) for p in params)})"


def vandermonde_product(shape, lam: Sequence, label: str | None = None) -> PureState:
    """Tensor product of :func:`vandermonde_local` states, one parameter per party."""
    shape = as_shape(shape)
    lam = [extended(x) for x in lam]
    if len(lam) != shape.K:
        raise UBKitError(f"index tuple has {len(lam)} entries, shape has {shape.K} parties")
    factors = [vandermonde_local(d, x) for d, x in zip(shape.dims, lam)]
    return tensor_product(factors, shape, _label("psi", lam) if label is None else label)


def check_entrywise_distinct(index_set: Sequence[Sequence]) -> None:
    """Raise unless, for every party, all tuples carry pairwise different values."""
    tuples = [[extended(x) for x in lam] for lam in index_set]
    K = len(tuples[0]) if tuples else 0
    for m, n in itertools.combinations(range(len(tuples)), 2):
        for k in range(K):
            a, b = tuples[m][k], tuples[n][k]
            if a is b or (a is not INF and b is not INF and a == b):
                raise PreconditionError(
                    f"index tuples must be entrywise distinct: party {k + 1} repeats value "
                    f"{format_extended(a)} in tuples {m + 1} and {n + 1}")


def minimal_gupb(shape, index_set: Sequence[Sequence] | None = None) -> StateSet:
    """The ``N`` product states ``psi(lambda)`` for an entrywise-distinct index set.

    With ``index_set=None`` the diagonal set of :func:`default_index_set` is used.
    """
    shape = as_shape(shape)
    if index_set is None:
        index_set = default_index_set(shape)
    N = lower_bound_N(shape)
    if len(index_set) != N:
        raise PreconditionError(f"a minimal set on {shape} needs exactly N={N} index tuples, got {len(index_set)}")
    for lam in index_set:
        if len(lam) != shape.K:
            raise PreconditionError(f"index tuple {lam} does not have {shape.K} entries")
    check_entrywise_distinct(index_set)
    return StateSet(shape, tuple(vandermonde_product(shape, lam) for lam in index_set))


def default_index_set(shape) -> list[tuple]:
    """Diagonal tuples ``(j, ..., j)`` for ``j = 0..N-2`` followed by ``(inf, ..., inf)``."""
    shape = as_shape(shape)
    N = lower_bound_N(shape)
    tuples = [tuple(complex(j) for _ in range(shape.K)) for j in range(N - 1)]
    tuples.append(tuple(INF for _ in range(shape.K)))
    return tuples


def _suffix_products(shape: SystemShape) -> list[int]:
    # exponent for party k is d_{k+1} * ... * d_K
    return [math.prod(shape.dims[k + 1:]) for k in range(shape.K)]


def global_vandermonde_state(shape, x, label: str | None = None) -> PureState:
    """Normalized ``sum_{j<d} x^j |j>`` over the whole space.

    Coincides with the product state whose party-``k`` parameter is
    ``x ** (d_{k+1} ... d_K)``.
    """
    shape = as_shape(shape)
    x = extended(x)
    if x is INF:
        raise UBKitError("the global Vandermonde state needs a finite parameter")
    if label is None:
        label = f"Psi({format_extended(x)})"
    return PureState.from_amplitudes(shape, _powers(x, shape.total), label)


def global_vandermonde_product_form(shape, x) -> PureState:
    """Same state as :func:`global_vandermonde_state`, built factor by factor."""
    shape = as_shape(shape)
    x = complex(x)
    return vandermonde_product(shape, [x ** p for p in _suffix_products(shape)])


def _collides(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def theorem2_basis(shape, points: Sequence | None = None, collision_tol: float = 1e-12) -> StateSet:
    """Product basis of ``d`` global Vandermonde states.

    Every party's induced parameters ``x_m ** (d_{k+1}...d_K)`` must be
    pairwise distinct; then every ``N``-subset is genuinely unextendible and
    no larger subset is.
    """
    shape = as_shape(shape)
    if points is None:
        points = default_theorem2_points(shape)
    points = [extended(x) for x in points]
    d = shape.total
    if len(points) != d:
        raise PreconditionError(f"need exactly d={d} points, got {len(points)}")
    if any(x is INF for x in points):
        raise PreconditionError("points must be finite complex numbers")
    for k, p in enumerate(_suffix_products(shape)):
        powered = [x ** p for x in points]
        for m, n in itertools.combinations(range(d), 2):
            if _collides(powered[m], powered[n], collision_tol):
                raise PreconditionError(
                    f"points must have pairwise distinct powers x^{p} for party {k + 1}: "
                    f"x_{m + 1}={format_extended(points[m])} and x_{n + 1}={format_extended(points[n])} collide")
    S = StateSet(shape, tuple(global_vandermonde_state(shape, x) for x in points))
    rank = numeric_rank(S)
    if rank < d:
        raise PreconditionError(
            f"points give a numerically singular Vandermonde basis (numeric rank {rank} < {d}); "
            "real points spread over a wide range are ill-conditioned, try spread_theorem2_points")
    return S


def default_theorem2_points(shape) -> list[complex]:
    """The positive reals ``1, ..., d``; powers of distinct positive reals never collide.

    The resulting basis is badly conditioned beyond ``d`` of about 6 (numeric
    rank drops below ``d`` at ``d = 8``); see :func:`spread_theorem2_points`.
    """
    return [complex(j) for j in range(1, as_shape(shape).total + 1)]


def spread_theorem2_points(shape) -> list[complex]:
    """Well-conditioned points ``(0.7 + 0.6 m/d) exp(2 pi i m g)``, ``g`` the golden ratio conjugate.

    The moduli are pairwise distinct, so ``|x_m|^p != |x_n|^p`` and no power
    map can collide. Golden-angle phases keep both the global Vandermonde
    matrix and every party's induced local parameters well separated.
    """
    d = as_shape(shape).total
    g = (math.sqrt(5) - 1) / 2
    return [(0.7 + 0.6 * m / d) * cmath.exp(2j * math.pi * m * g) for m in range(d)]


def max_entangled_state(d: int, m: int, n: int) -> PureState:
    """``Phi_{m,n} = d^{-1/2} sum_k w^{kn} |k>|k+m mod d>`` with ``w = exp(2 pi i / d)``."""
    if d < 2:
        raise UBKitError(f"d must be >= 2, got {d}")
    if not (0 <= m < d and 0 <= n < d):
        raise UBKitError(f"need 0 <= m, n <= {d - 1}, got m={m}, n={n}")
    amps = np.zeros(d * d, dtype=complex)
    for k in range(d):
        amps[k * d + (k + m) % d] = cmath.exp(2j * math.pi * k * n / d) / math.sqrt(d)
    return PureState.from_amplitudes((d, d), amps, f"Phi({m},{n})")


def cross_set(d: int) -> StateSet:
    """The ``2d - 1`` states ``Phi_{m,n}`` with ``m * n = 0``.

    Order: ``(m, 0)`` for ``m = 0..d-1``, then ``(0, n)`` for ``n = 1..d-1``.
    """
    pairs = [(m, 0) for m in range(d)] + [(0, n) for n in range(1, d)]
    return StateSet(SystemShape((d, d)), tuple(max_entangled_state(d, m, n) for m, n in pairs))


def fourier_state(d: int, m: int) -> PureState:
    w = np.exp(2j * np.pi * np.arange(d) * m / d)
    return PureState.from_amplitudes((d,), w, f"F{m}")


def fourier_pair_set(d: int) -> StateSet:
    """``|m>|m>`` for all ``m``, then ``|F_m> (x) conj(|F_m>)`` for the Fourier states ``|F_m>``.

    The conjugate on the second party puts every member in the span of the
    cross set; for ``d = 2`` the Fourier states are real and the pairs are
    ``|++>, |-->``.
    """
    if d < 2:
        raise UBKitError(f"d must be >= 2, got {d}")
    shape = SystemShape((d, d))
    states = [PureState.basis(shape, (m, m), f"|{m}{m}>") for m in range(d)]
    for m in range(d):
        f = fourier_state(d, m)
        fc = PureState.from_amplitudes((d,), f.amplitudes.conj())
        states.append(tensor_product([f, fc], shape, f"|F{m}F{m}*>"))
    return StateSet(shape, tuple(states))


def ghz_triple(K: int, x: str) -> StateSet:
    """``{|x>, GHZ+, GHZ-}`` on ``K`` qubits; ``x`` is a bitstring, party 1 first."""
    if K < 2:
        raise PreconditionError(f"need K >= 2 qubits, got {K}")
    x = str(x)
    if len(x) != K or set(x) - {"0", "1"}:
        raise PreconditionError(f"x must be a {K}-bit string, got {x!r}")
    if x in ("0" * K, "1" * K):
        raise PreconditionError(f"x must differ from 0^K and 1^K (x != {'0' * K}, {'1' * K}), got {x}")
    shape = SystemShape((2,) * K)
    amps = np.zeros(2 ** K, dtype=complex)
    amps[0] = amps[-1] = 1.0
    plus = PureState.from_amplitudes(shape, amps, "GHZ+")
    amps[-1] = -1.0
    minus = PureState.from_amplitudes(shape, amps, "GHZ-")
    return StateSet(shape, (PureState.basis(shape, [int(c) for c in x], f"|{x}>"), plus, minus))


def example2_basis() -> StateSet:
    """``{|00>, |11>, |++>, |i+>|i->}`` with ``|i+-> = (|0> +- i|1>)/sqrt2``."""
    shape = SystemShape((2, 2))
    plus = PureState.from_amplitudes((2,), [1, 1])
    i_plus = PureState.from_amplitudes((2,), [1, 1j])
    i_minus = PureState.from_amplitudes((2,), [1, -1j])
    return StateSet(shape, (
        PureState.basis(shape, (0, 0), "|00>"),
        PureState.basis(shape, (1, 1), "|11>"),
        tensor_product([plus, plus], shape, "|++>"),
        tensor_product([i_plus, i_minus], shape, "|i+i->"),
    ))


def computational_basis(shape) -> StateSet:
    shape = as_shape(shape)
    return StateSet(shape, tuple(
        PureState.basis(shape, digits, "|" + "".join(map(str, digits)) + ">")
        for digits in itertools.product(*(range(d) for d in shape.dims))))
