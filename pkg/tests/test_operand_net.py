import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hfgt import OperandNetError, build_operand_net, enabled, fire, incidence
from hfgt.operand_net import net_from_incidence
from support import random_net


@pytest.fixture
def line_net():
    return build_operand_net(0, ["raw", "treated"], ["treat"], [("raw", "treat", 1), ("treat", "treated", 1)])


@pytest.fixture
def water_net(fig5):
    return fig5.operand_nets[fig5.operand_id("water")]


def test_line_net_matrices(line_net):
    m_pos, m_neg, m = incidence(line_net)
    np.testing.assert_array_equal(m_neg, [[1], [0]])
    np.testing.assert_array_equal(m_pos, [[0], [1]])
    np.testing.assert_array_equal(m, [[-1], [1]])


def test_empty_net():
    net = build_operand_net(0, [], [], [])
    for mat in incidence(net):
        assert mat.shape == (0, 0)
    assert enabled(net, []) == frozenset()


def test_isolated_transition_rejected():
    with pytest.raises(OperandNetError, match="isolated transition"):
        build_operand_net(0, ["a"], ["t"], [])


@pytest.mark.parametrize(
    "arcs",
    [
        [("a", "missing")],
        [("a", "b")],  # place -> place
        [("a", "t", 0)],
        [("a", "t", -1)],
    ],
)
def test_bad_arcs_rejected(arcs):
    with pytest.raises(OperandNetError):
        build_operand_net(0, ["a", "b"], ["t"], arcs)


def test_duplicate_names_rejected():
    with pytest.raises(OperandNetError):
        build_operand_net(0, ["a", "a"], ["t"], [("a", "t")])
    with pytest.raises(OperandNetError):
        build_operand_net(0, ["a"], ["a"], [("a", "a")])


def test_fixture_water_net(water_net):
    _, _, m = incidence(water_net)
    assert m.shape == (3, 2)
    np.testing.assert_array_equal(m.sum(axis=0), [0, 0])
    assert enabled(water_net, [1, 0, 0]) == {water_net.transitions.index("treat")}
    after = fire(water_net, fire(water_net, [1, 0, 0], "treat"), "pipe")
    np.testing.assert_array_equal(after, [0, 0, 1])


def test_enabled_line_net(line_net):
    assert enabled(line_net, [1, 0]) == {0}
    assert enabled(line_net, [0, 1]) == frozenset()


def test_fire_line_net(line_net):
    np.testing.assert_array_equal(fire(line_net, [1, 0], "treat"), [0, 1])
    with pytest.raises(OperandNetError, match="not enabled"):
        fire(line_net, [0, 1], 0)


def test_marking_length_mismatch(line_net):
    with pytest.raises(OperandNetError):
        enabled(line_net, [1, 0, 0])
    with pytest.raises(OperandNetError):
        fire(line_net, [1], 0)


def test_weights_accumulate_and_gate_enabling():
    net = build_operand_net(0, ["a", "b"], ["t"], [("a", "t", 1), ("a", "t", 1), ("t", "b", 3)])
    assert net.m_neg[0, 0] == 2
    assert enabled(net, [1, 0]) == frozenset()
    np.testing.assert_array_equal(fire(net, [2, 0], "t"), [0, 3])


def test_nets_are_immutable(line_net):
    with pytest.raises(ValueError):
        line_net.m_pos[0, 0] = 5


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.lists(st.integers(0, 3), min_size=6, max_size=6))
def test_conservation_and_nonnegativity(seed, tokens):
    net = random_net(np.random.default_rng(seed))
    marking = np.array(tokens[: len(net.places)])
    _, _, m = incidence(net)
    for e in range(len(net.transitions)):
        if e in enabled(net, marking):
            after = fire(net, marking, e)
            np.testing.assert_array_equal(after - marking, m[:, e])
            assert (after >= 0).all()
            assert after.sum() - marking.sum() == m[:, e].sum()
        else:
            with pytest.raises(OperandNetError):
                fire(net, marking, e)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_through_incidence(seed):
    net = random_net(np.random.default_rng(seed))
    m_pos, m_neg, _ = incidence(net)
    rebuilt = net_from_incidence(net.operand_id, net.places, net.transitions, m_pos, m_neg)
    assert rebuilt == net
    again = build_operand_net(net.operand_id, net.places, net.transitions, net.arcs())
    assert again == net
    bound = int(max(m_neg.max(initial=0), 1))
    for tokens in itertools.product(range(bound + 1), repeat=len(net.places)):
        assert enabled(rebuilt, tokens) == enabled(net, tokens)
