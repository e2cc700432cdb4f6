"""Weight-function grammar: parsing, evaluation, round trips."""

import numpy as np
import pytest

from biaswave.weights import (
    WeightEvalError,
    WeightSyntaxError,
    parse_weight,
    weight_from_callable,
    weight_from_spec,
)


def test_application_weight():
    spec = parse_weight("0.1 + 0.9*x")
    assert float(spec(0.5)) == pytest.approx(0.55, abs=1e-15)


def test_product_of_negative_powers():
    spec = parse_weight("x^-2 * (1-x)^-2")
    assert float(spec(0.5)) == pytest.approx(16.0, abs=1e-12)


def test_syntax_error_offset():
    with pytest.raises(WeightSyntaxError) as exc:
        parse_weight("1 +")
    assert exc.value.offset == 3


def test_empty_spec():
    with pytest.raises(WeightSyntaxError):
        parse_weight("   ")


def test_division_by_zero_reports_x():
    spec = parse_weight("1 / x")
    with pytest.raises(WeightEvalError, match="x = 0"):
        spec(np.array([0.5, 0.0]))


def test_zero_to_negative_power_reports_x():
    spec = parse_weight("x^-1")
    with pytest.raises(WeightEvalError, match="x = 0"):
        spec(np.array([0.0]))


def test_precedence():
    assert float(parse_weight("1 + 2*x^2")(3.0)) == pytest.approx(19.0, abs=1e-15)
    assert float(parse_weight("(1 + 2*x)^2")(3.0)) == pytest.approx(49.0, abs=1e-15)
    assert float(parse_weight("2 - 1 - 1")(0.0)) == pytest.approx(0.0, abs=1e-15)
    assert float(parse_weight("8 / 4 / 2")(0.0)) == pytest.approx(1.0, abs=1e-15)


def test_named_families():
    assert float(parse_weight("identity")(0.3)) == pytest.approx(0.3)
    assert float(parse_weight("linear(0.1, 0.9)")(0.5)) == pytest.approx(0.55)
    assert float(parse_weight("quad(0.1, 2.0)")(0.5)) == pytest.approx(0.6)
    # betainv(b1, b2) = x^-(b1-1) (1-x)^-(b2-1)
    assert float(parse_weight("betainv(3, 3)")(0.5)) == pytest.approx(16.0, abs=1e-12)


def test_family_arity_errors():
    with pytest.raises(WeightSyntaxError):
        parse_weight("linear(1)")
    with pytest.raises(WeightSyntaxError):
        parse_weight("identity(2, 3)")


ROUND_TRIP_CORPUS = [
    "1", "x", "0.5", "2.25e-3", "x + 1", "1 + x", "x - 1", "1 - x",
    "x * x", "x / 2", "2 / x", "x^2", "x^-2", "x^0.5", "x^-0.5",
    "(x)", "((x))", "(1 + x)^2", "(1 - x)^-2", "x^-2 * (1-x)^-2",
    "0.1 + 0.9*x", "0.1 + 2*x^2", "1 + 2*x + 3*x^2", "x*x*x",
    "x + x + x", "x - x - x", "x / x", "1/(1+x)", "(1+x)/(1-x)",
    "2^2", "3.5^-1", "x^3 - x^2 + x - 1", "(0.5 - x)^2",
    "identity", "linear(0.1, 0.9)", "linear(0, 1)", "linear(-1, 2)",
    "quad(0.1, 2)", "quad(1, -1)", "betainv(3, 3)", "betainv(0.5, 0.5)",
    "betainv(2.5, 2.5)", "1e2 * x", "x * 1e-2", ".5 + x", "x^.5",
    "(x + 1) * (x + 2)", "((x+1)*(x+2))^-1", "1 + (2 + (3 + x))",
    "0.25*x^4",
]


@pytest.mark.parametrize("source", ROUND_TRIP_CORPUS)
def test_parse_print_parse_round_trip(source):
    """Unparsing and reparsing gives an identical tree and identical values."""
    spec = parse_weight(source)
    printed = spec.unparse()
    respec = parse_weight(printed)
    assert respec.tree == spec.tree
    xs = np.linspace(0.05, 0.95, 19)
    try:
        np.testing.assert_allclose(spec(xs), respec(xs), rtol=0, atol=1e-15)
    except WeightEvalError:
        pass  # corpus entries undefined on the grid are fine for the tree check


def test_round_trip_corpus_size():
    assert len(ROUND_TRIP_CORPUS) >= 50


def test_weight_function_wrappers():
    w = weight_from_spec("0.1 + 0.9*x")
    assert w(0.5) == pytest.approx(0.55)
    np.testing.assert_allclose(w(np.array([0.0, 1.0])), [0.1, 1.0], atol=1e-15)
    w2 = weight_from_callable(lambda y: y + 1.0)
    assert w2(0.5) == pytest.approx(1.5)
    w3 = weight_from_spec("1")
    np.testing.assert_allclose(w3(np.array([0.2, 0.8])), [1.0, 1.0], atol=0)


def test_evaluation_matches_direct_recursion():
    spec = parse_weight("0.1 + 2*x^2 - x/(x + 4)")
    xs = np.linspace(0.0, 1.0, 11)
    direct = 0.1 + 2 * xs**2 - xs / (xs + 4)
    np.testing.assert_allclose(spec(xs), direct, atol=1e-15)
