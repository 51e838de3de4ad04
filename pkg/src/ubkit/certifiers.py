"""Extendibility, genuine unextendibility and unambiguous LOCC certification.

Positive answers always carry an explicit product state that is re-checked
with plain inner products. Negative answers come from a seeded seesaw
search and are heuristic: absence of a product state in a subspace has no
cheap general certificate.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import asdict, dataclass, field, replace
from functools import reduce
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import DependentMembersError, UBKitError
from .linalg import (
    PRODUCT_TOL,
    PureState,
    StateSet,
    SubspaceBasis,
    as_shape,
    is_product_state,
    numeric_rank,
    orthocomplement,
    product_factors,
    span_basis,
)

log = logging.getLogger(__name__)

DEFAULT_SEED = 0


@dataclass(frozen=True)
class SeesawOptions:
    restarts: int = 64
    max_iterations: int = 500
    convergence_delta: float = 1e-12
    overlap_bias: float = 1e-3
    seed: int = DEFAULT_SEED
    membership_tol: float = 1e-8
    overlap_threshold: float = 1e-6

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise UBKitError("restarts and max_iterations must be >= 1")
        for name in ("convergence_delta", "membership_tol", "overlap_threshold"):
            if getattr(self, name) <= 0:
                raise UBKitError(f"{name} must be positive")
        if self.overlap_bias < 0:
            raise UBKitError("overlap_bias must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class SearchResult:
    """Best product state found by :func:`seesaw_product_search`.

    ``value`` is the full objective, ``membership`` the squared norm of the
    projection onto the target subspace and ``overlap`` is ``|<bias|state>|``.
    """

    state: PureState
    value: float
    membership: float
    overlap: float
    restarts_used: int
    iterations: int
    # best overlap among restarts whose candidate landed in the subspace
    best_member_overlap: float = 0.0
    member_candidate: Optional[PureState] = None


# ---------------------------------------------------------------- seesaw


def _contract_except(tensors: np.ndarray, factors: list[np.ndarray], k: int) -> np.ndarray:
    """Contract every party but ``k`` of ``tensors`` (shape ``(r, d_1..d_K)``) with
    the conjugated factors; the result ``u`` satisfies ``<t_i|phi> = u_i^H phi_k``."""
    t = tensors
    for l in reversed(range(len(factors))):
        if l != k:
            t = np.tensordot(t, factors[l].conj(), axes=([l + 1], [0]))
    return t


def _induced_form(tensors, factors, k) -> np.ndarray:
    u = _contract_except(tensors, factors, k)
    return u.T @ u.conj()


def _expectation(tensors, factors) -> float:
    phi = reduce(np.kron, factors)
    flat = tensors.reshape(len(tensors), -1)
    return float(np.sum(np.abs(flat.conj() @ phi) ** 2))


def _outer_all(vectors) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for v in vectors:
        out = np.outer(out, v).ravel()
    return out


def _ascend(tensors, factors, max_iterations, delta):
    """Cyclic top-eigenvector updates of the quadratic form given by ``tensors``."""
    r = len(tensors)
    K = len(factors)
    dims = tensors.shape[1:]
    # party k's axis moved next to the row axis; the rest keep their order
    unfolded = [np.moveaxis(tensors, k + 1, 1).reshape(r * dims[k], -1) for k in range(K)]
    value = _expectation(tensors, factors)
    it = 0
    for it in range(1, max_iterations + 1):
        for k in range(K):
            rest = _outer_all(factors[l].conj() for l in range(K) if l != k)
            u = (unfolded[k] @ rest).reshape(r, dims[k])
            w, vecs = np.linalg.eigh(u.T @ u.conj())
            factors[k] = vecs[:, -1]
        # after the last update the objective is the top eigenvalue just found
        new = float(w[-1])
        if new - value < delta:
            value = max(value, new)
            break
        value = new
    return factors, value, it


def _polish(tensors, factors, max_iterations=100):
    """Gauss-Newton on the multilinear equations ``<t_i|phi_1 x ... x phi_K> = 0``.

    Minimum-norm steps keep the point close to where the ascent left it, so a
    detector found under the overlap bias keeps its overlap. Returns the
    factors and the squared residual norm.
    """
    def residual(fs):
        return tensors.reshape(len(tensors), -1).conj() @ reduce(np.kron, fs)

    g = residual(factors)
    h = float(np.vdot(g, g).real)
    for _ in range(max_iterations):
        if h < 1e-32:
            break
        # d<t_i|phi>/d(phi_k) = conj(u_i) with u from the partial contraction.
        # Steps are restricted to directions orthogonal to each factor: the
        # equations are homogeneous, so shrinking a factor would fake progress.
        tangents = [scipy.linalg.null_space(f.conj()[None, :]) for f in factors]
        J = np.hstack([_contract_except(tensors, factors, k).conj() @ tangents[k]
                       for k in range(len(factors))])
        step = np.linalg.lstsq(J, -g, rcond=None)[0]
        trial, pos = [], 0
        for f, B in zip(factors, tangents):
            v = f + B @ step[pos:pos + B.shape[1]]
            pos += B.shape[1]
            trial.append(v / np.linalg.norm(v))
        g_new = residual(trial)
        h_new = float(np.vdot(g_new, g_new).real)
        if not h_new < h:
            break
        factors, g, h = trial, g_new, h_new
    return factors, h


def _restart_rng(seed: int, restart: int) -> np.random.Generator:
    # counter-based substream: restart i always sees the same numbers
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(restart,)))


def _random_factors(rng, dims) -> list[np.ndarray]:
    out = []
    for d in dims:
        z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        out.append(z / np.linalg.norm(z))
    return out


def seesaw_product_search(target: SubspaceBasis, bias: PureState | None = None,
                          opts: SeesawOptions = SeesawOptions(),
                          polish_threshold: float = 1e-4) -> SearchResult:
    """Maximize ``||P phi||^2 + eps |<bias|phi>|^2`` over product states ``phi``.

    ``P`` projects onto ``target`` and ``eps = opts.overlap_bias`` (0 without a
    bias). Each restart draws Gaussian random local factors and sweeps the
    parties, replacing one factor at a time with the top eigenvector of the
    induced single-party form, until a sweep gains less than
    ``opts.convergence_delta``.

    A restart that ends within ``polish_threshold`` of the subspace is then
    polished with the bias switched off, by minimizing the squared projection
    onto the orthocomplement of ``target``; this removes the small pull of the
    bias term and lands exactly on a product state of the subspace when one is
    nearby.

    The result is the best restart by objective value; ties keep the
    earliest. Results depend only on ``opts.seed``.
    """
    shape = target.shape
    dims = shape.dims
    if target.dim == 0:
        raise UBKitError("target subspace is empty")
    eps = opts.overlap_bias if bias is not None else 0.0
    rows = [np.asarray(target.vectors)]
    if eps > 0:
        rows.append(np.sqrt(eps) * bias.amplitudes[None, :])
    ascent = np.concatenate(rows).reshape((-1,) + dims)
    complement = orthocomplement(target)
    descent = np.asarray(complement.vectors).reshape((-1,) + dims)
    chi = bias.amplitudes if bias is not None else None

    best = None
    best_member_overlap = 0.0
    member_candidate = None
    total_iterations = 0
    for r in range(opts.restarts):
        factors = _random_factors(_restart_rng(opts.seed, r), dims)
        factors, _, it = _ascend(ascent, factors, opts.max_iterations, opts.convergence_delta)
        total_iterations += it
        residual = _expectation(descent, factors) if complement.dim else 0.0
        if complement.dim and residual <= polish_threshold:
            factors, residual = _polish(descent, factors)
        phi = reduce(np.kron, factors)
        membership = 1.0 - residual
        overlap = float(abs(np.vdot(chi, phi))) if chi is not None else 0.0
        value = membership + eps * overlap ** 2
        if best is None or value > best[0]:
            best = (value, membership, overlap, phi)
        if residual <= opts.membership_tol ** 2 and (member_candidate is None or overlap > best_member_overlap):
            best_member_overlap = overlap
            member_candidate = phi
    value, membership, overlap, phi = best
    as_state = lambda v: PureState.from_amplitudes(shape, v, "product")
    return SearchResult(
        state=as_state(phi), value=value, membership=membership, overlap=overlap,
        restarts_used=opts.restarts, iterations=total_iterations,
        best_member_overlap=best_member_overlap,
        member_candidate=None if member_candidate is None else as_state(member_candidate))


# ---------------------------------------------------------------- verdicts


@dataclass(frozen=True)
class ExtendibleWith:
    witness: PureState
    residual: float

    extendible = True


@dataclass(frozen=True)
class NoProductFound:
    """No product state found in the orthocomplement. Heuristic, not a proof."""

    best_value: float
    restarts_used: int

    extendible = False


def max_residual(S: StateSet, state: PureState) -> float:
    """``max_j |<S_j|state>|``, 0 for an empty set."""
    if len(S) == 0:
        return 0.0
    return float(np.max(np.abs(S.matrix().conj() @ state.amplitudes)))


def is_extendible(S: StateSet, opts: SeesawOptions = SeesawOptions()):
    """Search the orthocomplement of ``S`` for a product state.

    Returns :class:`ExtendibleWith` holding an exactly verified witness, or
    :class:`NoProductFound`.
    """
    complement = orthocomplement(S)
    if complement.dim == 0:
        return NoProductFound(best_value=0.0, restarts_used=0)
    res = seesaw_product_search(complement, None, opts)
    if res.membership >= 1 - opts.membership_tol:
        witness = res.state.relabel("witness")
        residual = max_residual(S, witness)
        if residual <= opts.membership_tol and is_product_state(witness):
            return ExtendibleWith(witness, residual)
        log.debug("seesaw candidate failed re-verification: residual %g", residual)
    return NoProductFound(best_value=res.membership, restarts_used=res.restarts_used)


@dataclass(frozen=True)
class GUB:
    kind = "GUB"


@dataclass(frozen=True)
class UBnotGUB:
    """Unextendible, with the unextendible proper subset ``culprit`` (member indices)."""

    culprit: tuple[int, ...]
    kind = "UBnotGUB"


@dataclass(frozen=True)
class Extendible:
    witness: PureState
    residual: float
    kind = "Extendible"


def _require_independent(S: StateSet):
    r = numeric_rank(S)
    if r != len(S):
        raise DependentMembersError(
            f"members must be linearly independent (rank {r} < {len(S)} members); "
            "detecting-state and unextendibility questions are posed for independent sets")


def is_genuinely_unextendible(S: StateSet, opts: SeesawOptions = SeesawOptions()):
    """Classify ``S`` as :class:`Extendible`, :class:`UBnotGUB` or :class:`GUB`.

    A product state orthogonal to a set is orthogonal to all its subsets, so
    every proper subset is extendible iff every leave-one-out subset is; only
    those ``|S|`` subsets are searched.
    """
    _require_independent(S)
    top = is_extendible(S, opts)
    if top.extendible:
        return Extendible(top.witness, top.residual)
    for k in range(len(S)):
        keep = tuple(i for i in range(len(S)) if i != k)
        if not is_extendible(S.subset(keep), opts).extendible:
            return UBnotGUB(keep)
    return GUB()


# ---------------------------------------------------------------- detecting states


@dataclass(frozen=True)
class DetectingCertificate:
    """Product state orthogonal to every member except ``index``."""

    index: int
    state: PureState
    residual: float
    overlap: float


@dataclass(frozen=True)
class MemberOutcome:
    index: int
    label: str
    certificate: Optional[DetectingCertificate]
    best_value: float
    best_membership: float
    # largest |<member|phi>| over searched product states phi lying in the
    # complement of the other members (0 when none was found)
    best_verified_overlap: float
    restarts_used: int

    @property
    def certified(self) -> bool:
        return self.certificate is not None


@dataclass(frozen=True)
class CertificateReport:
    states: StateSet
    outcomes: tuple[MemberOutcome, ...]

    @property
    def distinguishable(self) -> bool:
        return all(o.certified for o in self.outcomes)

    @property
    def failing(self) -> list[int]:
        return [o.index for o in self.outcomes if not o.certified]

    @property
    def verdict(self) -> str:
        return "UnambiguouslyLoccDistinguishable" if self.distinguishable else "NotCertified"


def verify_detecting_certificate(S: StateSet, k: int, state: PureState,
                                 membership_tol: float = 1e-8,
                                 overlap_threshold: float = 1e-6,
                                 product_tol: float = PRODUCT_TOL) -> bool:
    """Check that ``state`` is a product detecting state for member ``k`` of ``S``."""
    if state.shape != S.shape or not 0 <= k < len(S):
        return False
    if not is_product_state(state, product_tol):
        return False
    overlaps = np.abs(S.matrix().conj() @ state.amplitudes)
    others = np.delete(overlaps, k)
    if others.size and others.max() > membership_tol:
        return False
    return bool(overlaps[k] >= overlap_threshold)


def _make_certificate(S, k, state) -> DetectingCertificate:
    return DetectingCertificate(
        index=k, state=state.relabel(f"detector[{S[k].label}]"),
        residual=max_residual(S.without(k), state),
        overlap=float(abs(np.vdot(S[k].amplitudes, state.amplitudes))))


def search_detecting_state(S: StateSet, k: int, opts: SeesawOptions = SeesawOptions()) -> MemberOutcome:
    """Like :func:`find_detecting_state` but also reports search statistics."""
    if not 0 <= k < len(S):
        raise IndexError(f"member index {k} out of range for {len(S)} members")
    others = S.without(k)
    target = orthocomplement(others)
    res = seesaw_product_search(target, S[k], opts)
    cert = None
    for cand in (res.member_candidate, res.state):
        if cand is not None and verify_detecting_certificate(
                S, k, cand, opts.membership_tol, opts.overlap_threshold):
            cert = _make_certificate(S, k, cand)
            break
    verified = res.best_member_overlap if res.member_candidate is not None else 0.0
    if cert is not None:
        verified = max(verified, cert.overlap)
    return MemberOutcome(
        index=k, label=S[k].label, certificate=cert, best_value=res.value,
        best_membership=res.membership, best_verified_overlap=verified,
        restarts_used=res.restarts_used)


def find_detecting_state(S: StateSet, k: int, opts: SeesawOptions = SeesawOptions()) -> Optional[DetectingCertificate]:
    """Search for a product state orthogonal to all members but ``k`` with
    nonzero overlap on member ``k``; ``None`` if the search finds none."""
    _require_independent(S)
    return search_detecting_state(S, k, opts).certificate


def certify_unambiguous_locc(S: StateSet, opts: SeesawOptions = SeesawOptions()) -> CertificateReport:
    """Look for a product detecting state for every member of ``S``.

    The set is reported distinguishable only when every member has an
    exactly verified certificate. A ``NotCertified`` result means the search
    failed for some member, not that a detector provably does not exist.
    """
    _require_independent(S)
    return CertificateReport(S, tuple(search_detecting_state(S, k, opts) for k in range(len(S))))


# ---------------------------------------------------------------- exact checks


def lemma2_counting_check(S: StateSet, tol: float = 1e-8) -> bool:
    """Exhaustive local spanning test for a set of product states.

    True iff for every party ``k`` any ``d_k`` of the members' party-``k``
    factors are linearly independent, which makes the set genuinely
    unextendible.
    """
    shape = S.shape
    if len(S) < max(shape.dims):
        raise UBKitError(f"need at least max(d_k)={max(shape.dims)} members, got {len(S)}")
    factors = []
    for s in S:
        if not is_product_state(s):
            raise UBKitError(f"member {s.label!r} is not a product state")
        factors.append(product_factors(s))
    for k, d in enumerate(shape.dims):
        local = [f[k].amplitudes for f in factors]
        for combo in itertools.combinations(local, d):
            if numeric_rank(np.array(combo), tol) < d:
                return False
    return True


def _bloch_grid(resolution: int) -> np.ndarray:
    theta = np.linspace(0.0, np.pi, resolution)
    phi = np.linspace(0.0, 2 * np.pi, resolution, endpoint=False)
    t, p = np.meshgrid(theta, phi, indexing="ij")
    return np.stack([np.cos(t / 2), np.exp(1j * p) * np.sin(t / 2)], axis=-1).reshape(-1, 2)


def brute_force_product_search(S: StateSet, resolution: int = 32) -> Optional[PureState]:
    """Grid search for a product state in the orthocomplement of ``S``.

    Each qubit ranges over a ``resolution x resolution`` grid of Bloch angles.
    For three qubits the first two are gridded and the third is maximized in
    closed form (top eigenvector of a 2x2 matrix). Returns the best product
    state if its squared projection reaches ``1 - 10 / resolution**2``.
    """
    dims = S.shape.dims
    if dims not in ((2, 2), (2, 2, 2)):
        raise UBKitError(f"brute force search supports shapes (2,2) and (2,2,2), got {dims}")
    if not 1 < resolution <= 64:
        raise UBKitError("resolution must be in 2..64")
    comp = orthocomplement(S)
    if comp.dim == 0:
        return None
    grid = _bloch_grid(resolution)
    V = np.asarray(comp.vectors).conj()
    if len(dims) == 2:
        V = V.reshape(-1, 2, 2)
        # amp[i, a, b] = <v_i | g_a (x) g_b>
        amp = np.einsum("ipq,ap,bq->iab", V, grid, grid)
        score = np.sum(np.abs(amp) ** 2, axis=0)
        a, b = np.unravel_index(np.argmax(score), score.shape)
        best, vec = score[a, b], np.kron(grid[a], grid[b])
    else:
        V = V.reshape(-1, 2, 2, 2)
        best, vec = -1.0, None
        for a, ga in enumerate(grid):
            # <v_i | g_a g_b c> = u[b, i, :] . c
            u = np.einsum("ipqr,p,bq->bir", V, ga, grid)
            M = np.einsum("bir,bis->brs", u.conj(), u)
            tr = (M[:, 0, 0] + M[:, 1, 1]).real
            gap = np.sqrt(((M[:, 0, 0] - M[:, 1, 1]).real) ** 2 + 4 * np.abs(M[:, 0, 1]) ** 2)
            top = (tr + gap) / 2
            b = int(np.argmax(top))
            if top[b] > best:
                _, vecs = np.linalg.eigh(M[b])
                best, vec = top[b], np.kron(np.kron(ga, grid[b]), vecs[:, -1])
    if best >= 1 - 10 / resolution ** 2:
        return PureState.from_amplitudes(S.shape, vec, "grid product")
    return None
