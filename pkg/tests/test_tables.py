import numpy as np
import pytest

from bellsel.errors import ConditioningError
from bellsel.tables import JointTable


@pytest.fixture
def xor_table():
    # z = x xor y with fair independent x, y
    probs = np.zeros((2, 2, 2))
    for x in range(2):
        for y in range(2):
            probs[x, y, x ^ y] = 0.25
    return JointTable(("x", "y", "z"), {"x": (0, 1), "y": (0, 1), "z": (0, 1)}, probs)


def test_rejects_unnormalized():
    with pytest.raises(ValueError):
        JointTable(("x",), {"x": (0, 1)}, [0.5, 0.6])


def test_marginal_and_prob(xor_table):
    m = xor_table.marginal(("z", "x"))
    assert m.variables == ("z", "x")
    assert m.prob(z=1, x=0) == pytest.approx(0.25)


def test_condition_and_independence(xor_table):
    assert xor_table.independence_gap("x", "y") < 1e-15
    assert xor_table.independence_gap("x", "y", ["z"]) == pytest.approx(0.25)
    cond, mass = xor_table.condition({"z": 1})
    assert mass == pytest.approx(0.5)
    assert cond.correlation("x", "y") == pytest.approx(-1.0)


def test_zero_mass_condition_raises():
    t = JointTable(("x",), {"x": (0, 1)}, [1.0, 0.0])
    with pytest.raises(ConditioningError):
        t.condition({"x": 1})


def test_mutual_information(xor_table):
    assert xor_table.mutual_information("x", "y") == pytest.approx(0.0, abs=1e-15)
    assert xor_table.mutual_information(("x", "y"), "z") == pytest.approx(np.log(2))


def test_json_round_trip(xor_table):
    again = JointTable.from_json(xor_table.to_json())
    assert again.max_abs_diff(xor_table) == 0.0


def test_max_abs_diff_aligns_axes(xor_table):
    assert xor_table.marginal(("y", "x")).max_abs_diff(xor_table.marginal(("x", "y"))) == 0.0
