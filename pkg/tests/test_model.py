from fractions import Fraction

import pytest

from dofnet.model import MESSAGE_ORDER, AntennaConfig, DofTuple, MessageIndex, parse_fraction

W = MessageIndex


def test_nine_distinct_messages_in_canonical_order():
    assert [m.label for m in MESSAGE_ORDER] == [
        "d11", "d21", "d12", "d22", "d1", "d2", "d01", "d02", "d0"]
    assert len(set(MESSAGE_ORDER)) == 9


@pytest.mark.parametrize("tag,tx,rx", [
    ("11", {1}, {1}), ("21", {1}, {2}), ("12", {2}, {1}), ("22", {2}, {2}),
    ("1", {1}, {1, 2}), ("2", {2}, {1, 2}),
    ("01", {1, 2}, {1}), ("02", {1, 2}, {2}), ("0", {1, 2}, {1, 2}),
])
def test_tx_rx_sets(tag, tx, rx):
    m = W(tag)
    assert m.tx_set == frozenset(tx)
    assert m.rx_set == frozenset(rx)


@pytest.mark.parametrize("text", ["d01", "W01", "01", " 01 "])
def test_parse_message_spellings(text):
    assert MessageIndex.parse(text) is W.W01


def test_parse_unknown_message():
    with pytest.raises(ValueError):
        MessageIndex.parse("d33")


def test_antenna_config_parse_and_validation():
    cfg = AntennaConfig.parse("2,3,4,1")
    assert cfg.as_tuple() == (2, 3, 4, 1)
    assert cfg.M(2) == 3 and cfg.N(1) == 4
    assert str(cfg) == "2,3,4,1"
    for bad in ("1,1,1", "0,1,1,1", "a,1,1,1"):
        with pytest.raises(ValueError):
            AntennaConfig.parse(bad)
    with pytest.raises(TypeError):
        AntennaConfig(1.0, 1, 1, 1)


def test_parse_fraction_is_exact():
    assert parse_fraction("2/6") == Fraction(1, 3)
    assert parse_fraction(3) == Fraction(3)
    with pytest.raises(TypeError):
        parse_fraction(0.5)
    with pytest.raises(ValueError):
        parse_fraction("x")


def test_dof_tuple_basics():
    d = DofTuple.from_mapping({"11": "1/3", "d0": 2})
    assert d["11"] == Fraction(1, 3) and d[W.W0] == 2 and d["22"] == 0
    assert d.support == {W.W11, W.W0}
    assert d.total == Fraction(7, 3)
    assert d.denominator == 3 and not d.is_integer
    assert d.scaled(3).is_integer
    assert d.with_value("11", 0).support == {W.W0}
    assert str(d) == "(d11=1/3, d0=2)"


def test_dof_tuple_rejects_negative_and_wrong_length():
    with pytest.raises(ValueError):
        DofTuple.from_mapping({"11": -1})
    with pytest.raises(ValueError):
        DofTuple((0, 0))
    with pytest.raises(ValueError):
        DofTuple.from_values([W.W11, W.W22], [1])
