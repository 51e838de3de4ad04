"""Reciprocal (biorthogonal) bases and the product/entangled duality.

For a basis ``S = {Psi_k}`` the reciprocal state ``~Psi_k`` is orthogonal to
every ``Psi_j`` with ``j != k``. A product detecting state for ``Psi_k`` must
lie on the line of ``~Psi_k``, so ``S`` admits unambiguous LOCC
discrimination exactly when every reciprocal state is a product state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .certifiers import (
    CertificateReport,
    DetectingCertificate,
    MemberOutcome,
    SeesawOptions,
    max_residual,
    verify_detecting_certificate,
)
from .errors import NotABasisError
from .linalg import PRODUCT_TOL, PureState, StateSet, is_product_state, numeric_rank

# a set passing the rank check (relative tolerance 1e-8) has condition number
# below 1e8, so this is a backstop should the rank tolerance ever be loosened
MAX_CONDITION = 1e10


def reciprocal_basis(S: StateSet) -> StateSet:
    """Unit-norm dual basis with ``<~Psi_k|Psi_k>`` real and positive."""
    d = S.shape.total
    if len(S) != d:
        raise NotABasisError(f"a basis of this space needs {d} members, got {len(S)}")
    rank = numeric_rank(S)
    if rank < d:
        raise NotABasisError(f"members do not form a basis: numeric rank {rank} < {d}")
    M = S.matrix()
    cond = np.linalg.cond(M)
    if cond > MAX_CONDITION:
        raise NotABasisError(f"member matrix condition number {cond:.3g} exceeds {MAX_CONDITION:g}")
    # rows R of inv(M^T) satisfy R @ M^T = I, i.e. R_k . Psi_j = delta_kj,
    # so ~Psi_k = conj(R_k) up to normalization; the overlap is then 1/|R_k| > 0
    R = np.linalg.inv(M.T)
    return StateSet(S.shape, tuple(
        PureState.from_amplitudes(S.shape, R[k].conj(), f"~{S[k].label}") for k in range(d)))


def involution_check(S: StateSet, tol: float = 1e-8) -> bool:
    """True if the reciprocal of the reciprocal basis returns ``S`` up to phases."""
    back = reciprocal_basis(reciprocal_basis(S))
    fid = np.abs(np.sum(back.matrix().conj() * S.matrix(), axis=1))
    return bool(np.all(fid >= 1 - tol))


@dataclass(frozen=True)
class BasisClassification:
    product_flags: tuple[bool, ...]

    @property
    def product_count(self) -> int:
        return sum(self.product_flags)

    @property
    def entangled_count(self) -> int:
        return len(self.product_flags) - self.product_count

    @property
    def is_product_basis(self) -> bool:
        return all(self.product_flags)

    @property
    def tag(self) -> str:
        return "ProductBasis" if self.is_product_basis else f"EntangledBasis({self.entangled_count})"

    @property
    def entangled_members(self) -> list[int]:
        return [i for i, p in enumerate(self.product_flags) if not p]


def classify_basis(S: StateSet, tol: float = PRODUCT_TOL) -> BasisClassification:
    return BasisClassification(tuple(is_product_state(s, tol) for s in S))


@dataclass(frozen=True)
class DualityReport:
    """Outcome of :func:`theorem3_analysis`.

    ``pairing`` is ``"DEB"`` for an entangled basis that is LOCC
    distinguishable, ``"IPB"`` for a product basis that is not, else ``None``.
    """

    states: StateSet
    dual: StateSet
    classification: BasisClassification
    dual_classification: BasisClassification
    distinguishable: bool
    certificates: Optional[CertificateReport]
    entangled_dual_members: tuple[int, ...]
    pairing: Optional[str]


def theorem3_analysis(S: StateSet, opts: SeesawOptions = SeesawOptions()) -> DualityReport:
    """Decide unambiguous LOCC distinguishability of a basis through its dual.

    The verdict is exact: when the dual is a product basis its members are
    the detecting states; otherwise the entangled dual members have no
    product detector.
    """
    dual = reciprocal_basis(S)
    cls_s = classify_basis(S)
    cls_dual = classify_basis(dual)
    report = None
    if cls_dual.is_product_basis:
        outcomes = []
        for k, psi in enumerate(dual):
            ok = verify_detecting_certificate(S, k, psi, opts.membership_tol, opts.overlap_threshold)
            overlap = float(abs(np.vdot(S[k].amplitudes, psi.amplitudes)))
            cert = DetectingCertificate(k, psi, max_residual(S.without(k), psi), overlap) if ok else None
            outcomes.append(MemberOutcome(
                index=k, label=S[k].label, certificate=cert, best_value=1.0, best_membership=1.0,
                best_verified_overlap=overlap, restarts_used=0))
        report = CertificateReport(S, tuple(outcomes))
    distinguishable = report is not None and report.distinguishable
    pairing = None
    if distinguishable and not cls_s.is_product_basis:
        pairing = "DEB"
    elif not distinguishable and cls_s.is_product_basis:
        pairing = "IPB"
    return DualityReport(
        states=S, dual=dual, classification=cls_s, dual_classification=cls_dual,
        distinguishable=distinguishable, certificates=report,
        entangled_dual_members=tuple(cls_dual.entangled_members), pairing=pairing)
