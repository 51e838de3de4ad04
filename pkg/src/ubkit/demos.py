"""End-to-end reproductions of the worked examples, each a list of checked claims."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import constructions as cons
from .certifiers import (
    SeesawOptions,
    certify_unambiguous_locc,
    is_genuinely_unextendible,
    lemma2_counting_check,
    seesaw_product_search,
    verify_detecting_certificate,
)
from .documents import certificate_report_to_dict, stateset_to_dict
from .linalg import (
    PureState,
    StateSet,
    as_shape,
    gram_condition_number,
    lower_bound_N,
    numeric_rank,
    orthocomplement,
    schmidt_values,
    span_basis,
)
from .reciprocal import classify_basis, involution_check, reciprocal_basis, theorem3_analysis

SQ2 = math.sqrt(2)


@dataclass
class Claim:
    text: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"claim": self.text, "passed": bool(self.passed), "detail": self.detail}


@dataclass
class DemoResult:
    name: str
    claims: list[Claim] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def check(self, text: str, passed, detail: str = "") -> bool:
        self.claims.append(Claim(text, bool(passed), detail))
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def to_dict(self) -> dict:
        return {"demo": self.name, "passed": self.passed,
                "claims": [c.to_dict() for c in self.claims], **self.data}


def fidelity(a, b) -> float:
    a = getattr(a, "amplitudes", a)
    b = getattr(b, "amplitudes", b)
    return float(abs(np.vdot(a, b)))


def _certificates_sound(S: StateSet, report, opts: SeesawOptions, min_overlap: float = 0.0) -> bool:
    for o in report.outcomes:
        c = o.certificate
        if c is None:
            continue
        if not verify_detecting_certificate(S, o.index, c.state, opts.membership_tol, opts.overlap_threshold):
            return False
        if c.residual > opts.membership_tol or c.overlap < min_overlap:
            return False
    return True


def _subsets(n: int, size: int, limit: int | None, seed: int) -> list[tuple[int, ...]]:
    combos = list(itertools.combinations(range(n), size))
    if limit is not None and len(combos) > limit:
        rng = np.random.default_rng(seed)
        pick = sorted(rng.choice(len(combos), size=limit, replace=False))
        combos = [combos[i] for i in pick]
    return combos


def demo_example1(opts: SeesawOptions = SeesawOptions()) -> DemoResult:
    res = DemoResult("example1")
    shape = as_shape((2, 2))
    S = cons.minimal_gupb(shape)
    res.data["states"] = stateset_to_dict(S)
    plus = PureState.from_amplitudes((2, 2), [0.5, 0.5, 0.5, 0.5])
    expected = [PureState.basis(shape, (0, 0)), plus, PureState.basis(shape, (1, 1))]
    fids = [fidelity(a, b) for a, b in zip(S, expected)]
    res.check("default index set gives {|00>, |++>, |11>}", min(fids) >= 1 - 1e-12, f"fidelities {fids}")
    res.check("N = 3 members on 2x2", len(S) == lower_bound_N(shape) == 3)
    res.check("local factors: any 2 of each party span C^2", lemma2_counting_check(S))
    verdict = is_genuinely_unextendible(S, opts)
    res.check("genuinely unextendible (GUB)", verdict.kind == "GUB", verdict.kind)
    report = certify_unambiguous_locc(S, opts)
    res.data["certification"] = certificate_report_to_dict(report)
    res.check("every member has a product detecting state", report.distinguishable, report.verdict)
    res.check("certificates re-verify (residual <= 1e-8, overlap >= 0.25)",
              report.distinguishable and _certificates_sound(S, report, opts, 0.25))
    comp = orthocomplement(S)
    singlet = comp.states()[0] if comp.dim else None
    second = float(schmidt_values(singlet, 0)[1]) if singlet is not None else 0.0
    res.check("orthocomplement is one-dimensional", comp.dim == 1, f"dim {comp.dim}")
    res.check("complement is maximally entangled (second Schmidt value 1/sqrt2)",
              abs(second - 1 / SQ2) <= 1e-9 and second >= 0.70, f"{second!r}")
    best = seesaw_product_search(comp, None, opts)
    res.data["complement_best_membership"] = best.membership
    res.check("no product state in the complement (best membership <= 0.51)",
              best.membership <= 0.51, f"{best.membership!r} over {best.restarts_used} restarts")
    return res


def example2_reciprocal_golden() -> list[np.ndarray]:
    """The four reciprocal states written out in the computational basis."""
    phi_p = np.array([0, 1, 1, 0]) / SQ2
    phi_m = np.array([0, 1, -1, 0]) / SQ2
    e00 = np.array([1, 0, 0, 0])
    e11 = np.array([0, 0, 0, 1])
    return [
        e00 / SQ2 - phi_p / 2 + 0.5j * phi_m,
        e11 / SQ2 - phi_p / 2 + 0.5j * phi_m,
        phi_p,
        phi_m,
    ]


def demo_example2(opts: SeesawOptions = SeesawOptions()) -> DemoResult:
    res = DemoResult("example2")
    S = cons.example2_basis()
    res.data["states"] = stateset_to_dict(S)
    res.check("member 4 = (1/2)(1, -i, i, 1)",
              np.allclose(S[3].amplitudes, np.array([1, -1j, 1j, 1]) / 2, atol=1e-15, rtol=0))
    res.check("the four states form a basis", numeric_rank(S) == 4)
    cls = classify_basis(S)
    res.check("S is a product basis", cls.tag == "ProductBasis", cls.tag)
    dual = reciprocal_basis(S)
    res.data["reciprocal"] = stateset_to_dict(dual)
    fids = [fidelity(a, g) for a, g in zip(dual, example2_reciprocal_golden())]
    res.data["golden_fidelities"] = fids
    res.check("reciprocal basis matches the listed states up to phase", min(fids) >= 1 - 1e-9, f"{fids}")
    dcls = classify_basis(dual)
    res.check("reciprocal basis is entangled in all four members", dcls.tag == "EntangledBasis(4)", dcls.tag)
    res.check("reciprocal of the reciprocal is S up to phases", involution_check(S, 1e-8))
    a_s = theorem3_analysis(S, opts)
    res.check("S is not LOCC-unambiguous: indistinguishable product basis (IPB)",
              not a_s.distinguishable and a_s.pairing == "IPB", str(a_s.pairing))
    a_d = theorem3_analysis(dual, opts)
    res.check("reciprocal basis is LOCC-unambiguous: distinguishable entangled basis (DEB)",
              a_d.distinguishable and a_d.pairing == "DEB", str(a_d.pairing))
    cert_fids = []
    if a_d.certificates is not None:
        cert_fids = [fidelity(o.certificate.state, S[o.index]) if o.certificate else 0.0
                     for o in a_d.certificates.outcomes]
        res.data["dual_certification"] = certificate_report_to_dict(a_d.certificates)
    res.check("dual certificates are the original product states",
              len(cert_fids) == 4 and min(cert_fids) >= 1 - 1e-9, f"{cert_fids}")
    search = certify_unambiguous_locc(dual, opts)
    res.data["search_certification"] = certificate_report_to_dict(search)
    found = [fidelity(o.certificate.state, S[o.index]) if o.certificate else 0.0 for o in search.outcomes]
    res.check("seesaw search finds the same detectors for the reciprocal basis",
              search.distinguishable and min(found) >= 1 - 1e-9, f"{found}")
    return res


def demo_theorem2(shape=(2, 2), points=None, opts: SeesawOptions = SeesawOptions(),
                  max_subsets: int | None = 50) -> DemoResult:
    shape = as_shape(shape)
    res = DemoResult("theorem2")
    S = cons.theorem2_basis(shape, points)
    d, N = shape.total, lower_bound_N(shape)
    res.data.update(shape=list(shape.dims), N=N, states=stateset_to_dict(S),
                    gram_condition_number=gram_condition_number(S))
    res.check(f"{d} states form a basis", numeric_rank(S) == d)
    res.check("every member is a product state", classify_basis(S).is_product_basis)
    n_subsets = []
    for idx in _subsets(d, N, max_subsets, opts.seed):
        sub = S.subset(idx)
        report = certify_unambiguous_locc(sub, opts)
        ok = lemma2_counting_check(sub) and report.distinguishable and _certificates_sound(sub, report, opts)
        n_subsets.append({"members": [i + 1 for i in idx], "distinguishable": report.distinguishable, "ok": ok})
    res.data["N_subsets"] = n_subsets
    res.check(f"every {N}-subset is LOCC-unambiguous ({len(n_subsets)} checked)",
              all(e["ok"] for e in n_subsets))
    bigger = []
    for idx in _subsets(d, N + 1, max_subsets, opts.seed):
        sub = S.subset(idx)
        verdict = is_genuinely_unextendible(sub, opts)
        report = certify_unambiguous_locc(sub, opts)
        bigger.append({"members": [i + 1 for i in idx], "verdict": verdict.kind,
                       "distinguishable": report.distinguishable})
    res.data["N_plus_1_subsets"] = bigger
    res.check(f"every {N + 1}-subset is unextendible but not genuinely so, and not certified",
              all(e["verdict"] == "UBnotGUB" and not e["distinguishable"] for e in bigger))
    full = certify_unambiguous_locc(S, opts)
    res.data["full_set"] = certificate_report_to_dict(full)
    low = min(o.best_verified_overlap for o in full.outcomes)
    res.check("the full basis is not certified; some member's best overlap <= 1e-6",
              not full.distinguishable and low <= 1e-6, f"{full.verdict}, min best overlap {low!r}")
    t3 = theorem3_analysis(S, opts)
    res.check("the basis is an IPB (its reciprocal has entangled members)",
              t3.pairing == "IPB" and len(t3.entangled_dual_members) > 0,
              f"entangled reciprocal members {[i + 1 for i in t3.entangled_dual_members]}")
    return res


def demo_ghz(K: int = 2, x: str = "01", opts: SeesawOptions = SeesawOptions()) -> DemoResult:
    res = DemoResult("ghz")
    S = cons.ghz_triple(K, x)
    res.data.update(K=K, x=x, states=stateset_to_dict(S))
    gram = S.matrix().conj() @ S.matrix().T
    res.check("the three states are orthonormal", np.allclose(gram, np.eye(3), atol=1e-12))
    report = certify_unambiguous_locc(S, opts)
    res.data["certification"] = certificate_report_to_dict(report)
    o1, o2, o3 = report.outcomes
    res.check(f"member 1 (|{x}>) has a verified detecting state",
              o1.certified and _certificates_sound(S, report, opts))
    for o in (o2, o3):
        res.check(f"member {o.index + 1} ({o.label}) has no product detecting state (overlap <= 1e-6)",
                  not o.certified and o.best_verified_overlap <= 1e-6,
                  f"best verified overlap {o.best_verified_overlap!r}")
    return res


def demo_maxent(d: int = 2, opts: SeesawOptions = SeesawOptions()) -> DemoResult:
    res = DemoResult("maxent")
    C = cons.cross_set(d)
    F = cons.fourier_pair_set(d)
    res.data.update(d=d, states=stateset_to_dict(C))
    res.check(f"cross set has rank 2d-1 = {2 * d - 1}", numeric_rank(C) == 2 * d - 1)
    schmidt = max(float(np.max(np.abs(schmidt_values(s, 0) - 1 / math.sqrt(d)))) for s in C)
    res.check("every cross-set member is maximally entangled", schmidt <= 1e-10, f"{schmidt!r}")
    P = span_basis(C).projector()
    worst, lemma2 = 0.0, True
    for idx in itertools.combinations(range(2 * d), 2 * d - 1):
        sub = F.subset(idx)
        worst = max(worst, float(np.max(np.abs(span_basis(sub).projector() - P))))
        lemma2 = lemma2 and lemma2_counting_check(sub)
    res.data["projector_max_deviation"] = worst
    res.check("span(cross set) = span of any 2d-1 Fourier product pairs", worst <= 1e-9, f"{worst!r}")
    res.check("any 2d-1 Fourier product pairs satisfy the local spanning test", lemma2)
    report = certify_unambiguous_locc(C, opts)
    res.data["certification"] = certificate_report_to_dict(report)
    res.check("the cross set is LOCC-unambiguous",
              report.distinguishable and _certificates_sound(C, report, opts), report.verdict)
    return res


DEMOS = {
    "example1": demo_example1,
    "example2": demo_example2,
    "theorem2": demo_theorem2,
    "ghz": demo_ghz,
    "maxent": demo_maxent,
}
