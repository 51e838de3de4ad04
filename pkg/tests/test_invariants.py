"""Cross-cutting properties of the certifiers on constructed families."""

import itertools

import numpy as np
import pytest

from conftest import random_state
from ubkit import (
    INF,
    SeesawOptions,
    StateSet,
    brute_force_product_search,
    certify_unambiguous_locc,
    is_extendible,
    is_genuinely_unextendible,
    minimal_gupb,
    theorem2_basis,
    verify_detecting_certificate,
)
from ubkit.certifiers import max_residual

FAST = SeesawOptions(restarts=8, seed=5)


def _random_index_set(rng, shape):
    """Entrywise-distinct tuples: per party, a random injection into a value pool with inf."""
    N = sum(d - 1 for d in shape) + 1
    columns = []
    for _ in shape:
        pool = [INF] + [complex(*rng.normal(size=2)) for _ in range(N + 2)]
        order = rng.permutation(len(pool))[:N]
        columns.append([pool[j] for j in order])
    return list(zip(*columns))


@pytest.mark.parametrize("shape", [(2, 2), (2, 3), (2, 2, 2)])
def test_minimal_sets_are_gub_and_locc_unambiguous(shape):
    rng = np.random.default_rng(len(shape) * 10 + shape[-1])
    for _ in range(20):
        S = minimal_gupb(shape, _random_index_set(rng, shape))
        assert is_genuinely_unextendible(S, FAST).kind == "GUB"
        report = certify_unambiguous_locc(S, FAST)
        assert report.distinguishable
        for o in report.outcomes:
            # soundness: every returned certificate re-verifies
            assert verify_detecting_certificate(S, o.index, o.certificate.state)


def test_theorem2_full_basis_is_ub_not_gub_and_not_certified():
    S = theorem2_basis((2, 2), [1, 2, 3, 4])
    assert is_genuinely_unextendible(S, FAST).kind == "UBnotGUB"
    report = certify_unambiguous_locc(S, FAST)
    assert not report.distinguishable


def test_witness_is_accepted_by_every_subset():
    rng = np.random.default_rng(8)
    S = StateSet.of([random_state(rng, (2, 3)) for _ in range(3)])
    res = is_extendible(S, FAST)
    assert res.extendible
    for r in (1, 2):
        for idx in itertools.combinations(range(3), r):
            assert max_residual(S.subset(idx), res.witness) <= 1e-8


def test_extendible_witness_agrees_with_brute_force_three_qubits():
    rng = np.random.default_rng(13)
    for _ in range(5):
        S = StateSet.of([random_state(rng, (2, 2, 2)) for _ in range(3)])
        res = is_extendible(S, FAST)
        # product states form a 3-dim projective variety in P^7, so a generic
        # 5-dim complement meets it (and a generic 4-dim one does not)
        assert res.extendible and res.residual <= 1e-8
        assert brute_force_product_search(S, 32) is not None
    generic = StateSet.of([random_state(rng, (2, 2, 2)) for _ in range(4)])
    assert not is_extendible(generic, FAST).extendible


def test_reports_are_a_function_of_the_seed():
    S = minimal_gupb((2, 3))
    a = certify_unambiguous_locc(S, SeesawOptions(restarts=4, seed=21))
    b = certify_unambiguous_locc(S, SeesawOptions(restarts=4, seed=21))
    for x, y in zip(a.outcomes, b.outcomes):
        assert np.array_equal(x.certificate.state.amplitudes, y.certificate.state.amplitudes)
        assert x.best_value == y.best_value
