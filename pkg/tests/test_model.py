import io
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pagen.errors import TableError
from pagen.model import (
    NOT_POWER_LAW,
    Regime,
    ThreeParamSpec,
    WeightTable,
    buckley_osthus_constants,
    model_constants,
    preset,
    read_table_csv,
    table_csv_string,
    three_param_to_table,
    validate_table,
)


def close(table: WeightTable, expected: dict):
    got = table.as_dict()
    assert set(got) == set(expected)
    for key, w in expected.items():
        assert got[key] == pytest.approx(w, abs=1e-15)


def test_valid_point_mass():
    t = validate_table(WeightTable(2, ((1, 2, 1.0),)))
    assert t.support == ((1, 2),)


@pytest.mark.parametrize(
    "m,entries,msg",
    [
        (2, ((2, 2, 1.0),), "k=2"),
        (3, ((1, 1, 1.0),), "l=1"),
        (2, ((0, 0, 0.5), (0, 0, 0.5)), "duplicate"),
        (2, ((0, 0, 0.5),), "sum"),
        (2, ((0, 0, 1.5), (0, 1, -0.5)), "non-negative"),
        (2, (), "empty"),
    ],
)
def test_invalid_tables(m, entries, msg):
    with pytest.raises(TableError, match=msg):
        validate_table(WeightTable(m, entries))


def test_renormalizes_within_tolerance():
    t = validate_table(WeightTable(2, ((0, 0, 0.5), (0, 2, 0.5 + 5e-13))))
    assert math.fsum(w for _, _, w in t.entries) == 1.0


def test_three_param_alpha_only():
    close(three_param_to_table(ThreeParamSpec(2, 0.2, 0.0)), {(0, 2): 0.2, (1, 2): 0.0, (0, 0): 0.8})


def test_three_param_beta_only():
    close(three_param_to_table(ThreeParamSpec(2, 0.0, 0.4)), {(0, 2): 0.0, (1, 2): 0.4, (0, 0): 0.6})


def test_three_param_binomial_m4():
    t = three_param_to_table(ThreeParamSpec(4, 0.5, 0.5, 0.0))
    positive = {k: w for k, w in t.as_dict().items() if w > 0}
    assert positive == pytest.approx({(0, 4): 0.25, (1, 4): 0.5, (2, 4): 0.25})


def test_three_param_rejects_odd_m_and_bad_sums():
    with pytest.raises(TableError):
        ThreeParamSpec(3, 0.2, 0.2)
    with pytest.raises(TableError):
        ThreeParamSpec(2, 0.7, 0.7)
    with pytest.raises(TableError):
        ThreeParamSpec(2, 0.2, 0.2, 0.2)


@given(
    p=st.integers(1, 4),
    alpha=st.floats(0, 1),
    frac=st.floats(0, 1),
)
def test_three_param_constants_closed_form(p, alpha, frac):
    beta = (1 - alpha) * frac
    spec = ThreeParamSpec(2 * p, alpha, beta)
    c = model_constants(three_param_to_table(spec))
    assert c.A == pytest.approx(alpha + beta / 2, abs=1e-12)
    assert c.D == pytest.approx(p * beta, abs=1e-12)
    assert c.B == pytest.approx(2 * p * (spec.delta - alpha), abs=1e-12)


def test_constants_alpha_config():
    c = model_constants(three_param_to_table(ThreeParamSpec(2, 0.2, 0.0)))
    assert c.A == pytest.approx(0.2)
    assert c.B == pytest.approx(1.2)
    assert c.D == 0
    assert c.gamma == pytest.approx(1 + 1 / 0.2)
    assert c.regime is Regime.SUBCRITICAL
    assert c.p2_coefficient == pytest.approx(11.0)
    assert c.clustering_limit == 0


def test_constants_beta_config():
    c = model_constants(three_param_to_table(ThreeParamSpec(2, 0.0, 0.4)))
    assert c.A == pytest.approx(0.2)
    assert c.D == pytest.approx(0.4)
    assert c.clustering_limit == pytest.approx(6 / 55)


@pytest.mark.parametrize("m", [1, 2, 5])
def test_uniform_table_constants(m):
    c = model_constants(preset("uniform", m))
    assert (c.A, c.B, c.D) == (0, m, 0)
    assert c.gamma is None
    assert c.gamma_label == NOT_POWER_LAW
    assert c.as_json()["gamma"] == NOT_POWER_LAW


def test_lcd_approx_m2():
    t = preset("lcd-approx", 2)
    close(t, {(0, 0): 0.25, (0, 1): 0.5, (0, 2): 0.25})
    c = model_constants(t)
    assert c.A == pytest.approx(0.5)
    assert c.B == pytest.approx(0.0, abs=1e-15)
    assert c.regime is Regime.CRITICAL
    assert c.clustering_limit is None


def test_lcd_approx_m1():
    t = preset("lcd-approx", 1)
    close(t, {(0, 0): 0.5, (0, 1): 0.5})
    assert model_constants(t).A == pytest.approx(0.5)


def test_unknown_preset():
    with pytest.raises(TableError, match="unknown preset"):
        preset("nope", 2)


def test_supercritical_has_no_constants():
    c = model_constants(three_param_to_table(ThreeParamSpec(2, 0.8, 0.0)))
    assert c.regime is Regime.SUPERCRITICAL
    assert c.B == pytest.approx(-1.2)
    assert c.p2_coefficient is None and c.clustering_limit is None


@pytest.mark.parametrize(
    "beta,A,B",
    [(0.0, 0.5, 0.0), (1.0, 1 / 3, 2 / 3), (2.0, 0.25, 1.0)],
)
def test_buckley_osthus(beta, A, B):
    a, b = buckley_osthus_constants(2, beta)
    assert (a, b) == pytest.approx((A, B))
    assert 2 * 2 * a + b == pytest.approx(2)


@given(st.lists(st.floats(0.01, 1), min_size=1, max_size=6), st.integers(1, 5))
def test_any_table_has_valid_constants(raw, m):
    keys = [(k, l) for k in range(m // 2 + 1) for l in range(2 * k, m + 1)]
    weights = raw[: len(keys)]
    total = sum(weights)
    t = WeightTable.from_mapping(m, {k: w / total for k, w in zip(keys, weights)})
    c = model_constants(t)
    assert 0 <= c.A <= 1 + 1e-12
    assert 2 * m * c.A + c.B == pytest.approx(m)
    assert (c.clustering_limit is not None) == (c.regime is Regime.SUBCRITICAL)


def test_csv_round_trip():
    t = three_param_to_table(ThreeParamSpec(4, 0.3, 0.3))
    back = read_table_csv(io.StringIO(table_csv_string(t)), 4)
    assert back.as_dict() == pytest.approx(t.as_dict())


def test_csv_requires_header():
    with pytest.raises(TableError):
        read_table_csv(io.StringIO("0,0,1\n"), 2)
