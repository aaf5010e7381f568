"""Cataloged ensembles, prior families, and the measurement search oracle."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import nwe
from nwe.catalog import (
    Q3_ANGLES,
    SearchSpaceTooLarge,
    biased,
    load,
    load_measurement,
    search_perfect_separable,
    uniform,
)
from nwe.composition import CompositeSystem, ProductState, check_complete
from nwe.discrimination import confusion_matrix
from nwe.systems import make_polygon


def test_uniform_weights():
    assert_allclose(uniform().weights(8), np.full(8, 0.125), atol=0)
    assert_allclose(uniform().weights(4), np.full(4, 0.25), atol=0)


def test_biased_weight_placement():
    w = biased(0.2).weights(8)
    rest = (1.0 - 0.4) / 6.0
    assert_allclose(w, [rest, rest, 0.2, 0.2, rest, rest, rest, rest], atol=1e-15)
    assert w.sum() == pytest.approx(1.0, abs=1e-12)


def test_bias_one_eighth_equals_uniform():
    assert_allclose(biased(0.125).weights(8), uniform().weights(8), atol=1e-15)


@pytest.mark.parametrize("p", [0.0, 0.5, -0.1, 0.7])
def test_invalid_bias_rejected(p):
    with pytest.raises(ValueError):
        biased(p)


def test_biased_needs_eight_states():
    with pytest.raises(ValueError):
        biased(0.1).weights(4)


def test_s4_states_match_catalog_table():
    ens = load("s4")
    sq = make_polygon(4)
    expected = [(0, 0), (0, 3), (1, 0), (2, 1)]
    assert ens.size == 4 and ens.arity == 2
    assert_allclose(ens.priors, 0.25, atol=0)
    for phi, (i, j) in zip(ens.states, expected):
        assert_allclose(phi.factors[0], sq.pure_state(i), atol=0)
        assert_allclose(phi.factors[1], sq.pure_state(j), atol=0)


def test_s5_states_resolve_pentagon_vertices():
    ens = load("s5")
    penta = make_polygon(5)
    expected = [(0, 0, 0), (2, 2, 2), (1, 0, 2), (4, 0, 2), (0, 2, 1), (0, 2, 4), (2, 1, 0), (2, 4, 0)]
    assert ens.size == 8
    for phi, triple in zip(ens.states, expected):
        for factor, i in zip(phi.factors, triple):
            assert_allclose(factor, penta.pure_state(i), atol=0)


def test_q3_grouping_angles():
    first_party = [angles[0] for angles in Q3_ANGLES]
    g1 = [first_party[i] for i in (0, 2, 4, 5)]
    g2 = [first_party[i] for i in (1, 3, 6, 7)]
    assert g1 == [0.0, 0.5 * math.pi, 0.0, 0.0]
    assert g2 == [math.pi, 1.5 * math.pi, math.pi, math.pi]
    ens = load("q3")
    circ = ens.composite.parts[0]
    for phi, angles in zip(ens.states, Q3_ANGLES):
        for factor, a in zip(phi.factors, angles):
            assert_allclose(factor, circ.state_at(a), atol=0)


def test_unknown_id_rejected():
    with pytest.raises(KeyError):
        load("s9")


def test_s5_measurement_labels():
    M = load_measurement("s5")
    expected = [
        ("e0", "e0", "e0"),
        ("eb0", "eb0", "eb0"),
        ("e1", "e0", "eb0"),
        ("eb1", "e0", "eb0"),
        ("e0", "eb0", "e1"),
        ("e0", "eb0", "eb1"),
        ("eb0", "e1", "e0"),
        ("eb0", "eb1", "e0"),
    ]
    assert [e.labels for e in M.effects] == expected


def test_s7_measurement_head_rows():
    M = load_measurement("s7")
    assert M.effects[0].labels == ("e0", "e0", "e0")
    assert M.effects[1].labels == ("eb0", "eb0", "eb0")


def test_s6_measurement_uses_ray_extremal_indices():
    M = load_measurement("s6")
    assert M.effects[0].labels == ("e0", "e0", "e0")
    assert M.effects[1].labels == ("e3", "e3", "e3")
    assert M.effects[3].labels == ("e4", "e0", "e3")


@pytest.mark.parametrize("cid", ["s5", "s6", "s7"])
def test_catalog_measurement_discriminates_perfectly(cid):
    ens = load(cid)
    M = load_measurement(cid)
    conf = confusion_matrix(M, ens)
    assert np.abs(conf - np.eye(8)).max() <= 1e-9
    assert check_complete(ens.composite, M)


@pytest.mark.parametrize("cid", ["s4", "q3"])
def test_ids_without_cataloged_measurement(cid):
    with pytest.raises(ValueError):
        load_measurement(cid)


def test_search_recovers_pentagon_catalog_up_to_relabeling():
    ens = load("s5")
    found = search_perfect_separable(ens)
    assert found is not None
    conf = confusion_matrix(found, ens)
    assert np.abs(conf - np.eye(8)).max() <= 1e-9
    assert check_complete(ens.composite, found)
    catalog_labels = frozenset(e.labels for e in load_measurement("s5").effects)
    assert frozenset(e.labels for e in found.effects) == catalog_labels


@pytest.mark.parametrize("cid", ["s6", "s7"])
def test_search_recovers_other_catalogs(cid):
    ens = load(cid)
    found = search_perfect_separable(ens)
    assert found is not None
    assert frozenset(e.labels for e in found.effects) == frozenset(
        e.labels for e in load_measurement(cid).effects
    )


def test_search_finds_squit_pair_measurement():
    ens = load("s4")
    found = search_perfect_separable(ens)
    assert found is not None
    conf = confusion_matrix(found, ens)
    assert np.abs(conf - np.eye(4)).max() <= 1e-9
    assert frozenset(e.labels for e in found.effects) == frozenset(
        [("e3", "e0"), ("e3", "e2"), ("e1", "e3"), ("e1", "e1")]
    )


def test_search_single_state_returns_unit_measurement():
    penta = make_polygon(5)
    ens = nwe.NamedEnsemble(
        "single",
        CompositeSystem((penta, penta)),
        (ProductState((penta.pure_state(0), penta.pure_state(1))),),
        np.array([1.0]),
    )
    found = search_perfect_separable(ens)
    assert found is not None and len(found) == 1
    assert_allclose(found.effects[0].vec(), ens.composite.unit(), atol=0)


def test_search_node_budget_enforced():
    with pytest.raises(SearchSpaceTooLarge):
        search_perfect_separable(load("s5"), node_budget=2)


def test_search_rejects_non_polygon_parties():
    with pytest.raises(ValueError):
        search_perfect_separable(load("q3"))


def test_search_returns_none_for_indistinguishable_states():
    penta = make_polygon(5)
    phi = ProductState((penta.pure_state(0), penta.pure_state(0)))
    ens = nwe.NamedEnsemble(
        "twins",
        CompositeSystem((penta, penta)),
        (phi, ProductState((penta.pure_state(0), penta.pure_state(0)))),
        np.array([0.5, 0.5]),
    )
    assert search_perfect_separable(ens) is None
