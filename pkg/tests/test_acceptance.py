"""Acceptance suite: one test per criterion, printing one PASS/FAIL line each.

Run with  pytest tests/test_acceptance.py -v -s  to see the per-criterion
lines.  Criteria 3, 4, and 7 pin the polygon gap at delta = 1/8 (and biased
curves built from it).  Those values correspond to protocols restricted to
the measurement pair {M0, M1}; the exact optimizer, allowed every extremal
measurement as these criteria require, finds strictly better asymmetric
openings (pentagon success (7 + g)/8 with g the golden-ratio conjugate,
confirmed by independent Monte-Carlo simulation in the main test suite).
The three criteria are implemented faithfully as stated and therefore fail.
"""

import itertools
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

import nwe
from nwe.catalog import biased, load, load_measurement, search_perfect_separable, uniform
from nwe.composition import check_complete
from nwe.discrimination import SearchConfig, confusion_matrix, optimal_local
from nwe.quantum import qt_delta_closed, qt_optimize
from nwe.signaling import Channel, classical_vertices, gpt_channel, in_classical_polytope
from nwe.systems import find_pair_discriminator, make_polygon, prob

from _oracles import brute_force_optimal, likelihood_tables, random_instance


@contextmanager
def criterion(number, text):
    try:
        yield
    except BaseException:
        print(f"criterion {number:2d}: FAIL - {text}")
        raise
    print(f"criterion {number:2d}: PASS - {text}")


def test_criterion_01_construction_suite():
    with criterion(1, "polygon construction invariants for n in {4,5,6,7}"):
        start = time.perf_counter()
        for n in (4, 5, 6, 7):
            poly = make_polygon(n)
            np.testing.assert_allclose(poly.pure_states @ poly.unit_effect, 1.0, atol=1e-12)
            for k in range(2 * n):
                vals = poly.pure_states @ poly.effect(k)
                assert vals.min() >= -1e-12 and vals.max() <= 1.0 + 1e-12
            np.testing.assert_allclose(
                poly.ray_extremal_effects + poly.complement_effects,
                np.tile(poly.unit_effect, (n, 1)),
                atol=1e-12,
            )
            if n % 2 == 1:
                for i in range(n):
                    assert prob(poly.effect(i), poly.pure_state(i)) == pytest.approx(1.0, abs=1e-12)
        assert time.perf_counter() - start < 1.0


def test_criterion_02_catalog_measurements_discriminate():
    with criterion(2, "catalog confusion identities and completeness"):
        start = time.perf_counter()
        for cid in ("s5", "s6", "s7"):
            ens = load(cid)
            M = load_measurement(cid)
            conf = confusion_matrix(M, ens)
            assert np.abs(conf - np.eye(8)).max() <= 1e-9
            assert check_complete(ens.composite, M, tol=1e-12)
        assert time.perf_counter() - start < 1.0


def test_criterion_03_pentagon_gap():
    with criterion(3, "pentagon optimum 7/8 over all five extremal measurements"):
        start = time.perf_counter()
        ens = load("s5")
        report = optimal_local(ens, SearchConfig.for_ensemble(ens, adaptive=True))
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0
        assert report.success == pytest.approx(7.0 / 8.0, abs=1e-9), (
            f"exact optimum is {report.success!r}; the asymmetric opening beats 7/8"
        )
        assert report.delta == pytest.approx(1.0 / 8.0, abs=1e-9)


def test_criterion_04_hexagon_heptagon_gap():
    with criterion(4, "hexagon and heptagon gap 1/8"):
        for cid in ("s6", "s7"):
            ens = load(cid)
            report = optimal_local(ens, SearchConfig.for_ensemble(ens))
            assert report.delta == pytest.approx(1.0 / 8.0, abs=1e-9), (
                f"{cid} exact gap is {report.delta!r}"
            )


def test_criterion_05_squit_leader_asymmetry():
    with criterion(5, "squit set perfect Alice-first, imperfect Bob-first"):
        ens = load("s4")
        cfg = SearchConfig.for_ensemble(ens)
        alice = optimal_local(ens, cfg, leader=0)
        bob = optimal_local(ens, cfg, leader=1)
        assert alice.success == pytest.approx(1.0, abs=1e-12)
        assert bob.success < 1.0 - 1e-6
        # regression constant, first computed by this engine and confirmed
        # by exhaustive two-party enumeration
        assert bob.success == pytest.approx(0.75, abs=1e-9)


def test_criterion_06_quantum_bound():
    with criterion(6, "one-way circle protocol optimum (4 - sqrt(10))/8"):
        theta, delta_value = qt_optimize(uniform(), 0)
        assert abs(theta - math.atan(1.0 / 3.0)) <= 1e-7
        assert delta_value == pytest.approx((4.0 - math.sqrt(10.0)) / 8.0, abs=1e-9)
        assert delta_value == pytest.approx(0.1047153, abs=1e-6)
        assert delta_value < 1.0 / 8.0 - 1e-3


def test_criterion_07_biased_curves():
    with criterion(7, "biased-prior curves over 49 bias values"):
        start = time.perf_counter()
        failures = []
        for p in np.linspace(0.01, 0.49, 49):
            p = float(p)
            family = biased(p)
            ens = load("s5", family)
            cfg = SearchConfig.for_ensemble(ens)
            poly_a = 1.0 - optimal_local(ens, cfg, leader=0).success
            poly_b = min(1.0 - optimal_local(ens, cfg, leader=l).success for l in (1, 2))
            qt_a = qt_optimize(family, 0)[1]
            qt_b = qt_optimize(family, 1)[1]
            assert qt_a == pytest.approx(qt_delta_closed(p, "a"), abs=1e-9)
            assert qt_b == pytest.approx(qt_delta_closed(p, "b"), abs=1e-9)
            if abs(poly_a - p) > 1e-9 or abs(poly_b - (1.0 - 2.0 * p) / 6.0) > 1e-9:
                failures.append((p, poly_a, poly_b))
            if not min(qt_a, qt_b) < min(poly_a, poly_b):
                failures.append(("envelope", p, min(qt_a, qt_b), min(poly_a, poly_b)))
        # polygon sides must cross at p = 1/8
        ens = load("s5", biased(0.125))
        cfg = SearchConfig.for_ensemble(ens)
        a = 1.0 - optimal_local(ens, cfg, leader=0).success
        b = min(1.0 - optimal_local(ens, cfg, leader=l).success for l in (1, 2))
        assert a == pytest.approx(b, abs=1e-9)
        assert time.perf_counter() - start < 300.0
        assert not failures, (
            f"{len(failures)} grid checks missed the pinned values; the exact "
            f"optimizer gives smaller polygon deltas, e.g. {failures[0]!r}"
        )


def test_criterion_08_pair_discrimination():
    with criterion(8, "squit pairs discriminable, pentagon neighbors not"):
        sq = make_polygon(4)
        for a, b in itertools.combinations(range(4), 2):
            assert find_pair_discriminator(sq, sq.pure_state(a), sq.pure_state(b)) is not None
        penta = make_polygon(5)
        for i in range(5):
            for j in ((i + 1) % 5, (i - 1) % 5):
                assert find_pair_discriminator(penta, penta.pure_state(i), penta.pure_state(j)) is None


def test_criterion_09_oracle_equivalence():
    with criterion(9, "optimizer equals brute-force tree enumeration on 100 instances"):
        rng = np.random.default_rng(2718)
        for _ in range(100):
            ens, cfg = random_instance(rng)
            engine = optimal_local(ens, cfg).success
            oracle = brute_force_optimal(ens.priors, likelihood_tables(ens, cfg))
            assert engine == pytest.approx(oracle, abs=1e-12)


def test_criterion_10_measurement_search_oracle():
    with criterion(10, "brute-force search recovers the pentagon measurement"):
        ens = load("s5")
        found = search_perfect_separable(ens)
        assert found is not None
        conf = confusion_matrix(found, ens)
        assert np.abs(conf - np.eye(8)).max() <= 1e-9
        catalog_labels = frozenset(e.labels for e in load_measurement("s5").effects)
        assert frozenset(e.labels for e in found.effects) == catalog_labels


def test_criterion_11_bounded_signaling_certification():
    with criterion(11, "pentagon channels inside the two-symbol polytope; 3x3 identity outside"):
        start = time.perf_counter()
        penta = make_polygon(5)
        for m in (1, 2, 3, 4):
            verts = classical_vertices(m, 2, 2)
            seen = set()
            for encoding in itertools.product(range(5), repeat=m):
                states = [penta.pure_state(i) for i in encoding]
                for mi in range(5):
                    ch = gpt_channel(penta, states, penta.measurement(mi))
                    key = np.round(ch.rows, 12).tobytes()
                    if key in seen:
                        continue
                    seen.add(key)
                    result = in_classical_polytope(ch, 2, verts)
                    assert result.inside
                    recomposed = sum(w * v.rows for w, v in zip(result.weights, verts))
                    assert np.abs(recomposed - ch.rows).max() <= 1e-7
        rejected = in_classical_polytope(Channel(np.eye(3)), 2)
        assert not rejected.inside
        h, c = rejected.witness
        assert float((h * np.eye(3)).sum()) > c + 1e-9
        assert time.perf_counter() - start < 60.0
