import pytest

from liftgeo.expr import FuncSymbol, SymbolTable, parse
from liftgeo.geometry import Chart, Metric
from liftgeo.gks import abstract_spec, build_gks, example_pair, hatted_abstract_spec


def full_symbols() -> SymbolTable:
    """Coordinates of the base and tangent charts plus the abstract scale
    functions and their hatted partners."""
    table = SymbolTable(coords=("t", "r", "theta", "phi", "u1", "u2", "u3", "u4"))
    table.declare_func(FuncSymbol("X", "t"))
    table.declare_func(FuncSymbol("Y", "t"))
    table.declare_func(FuncSymbol("f", "theta"))
    table.declare_func(FuncSymbol("Xh", "t"))
    table.declare_func(FuncSymbol("Yh", "t"))
    table.declare_func(FuncSymbol("fh", "theta"))
    return table


def ref(text: str):
    return parse(text, full_symbols())


@pytest.fixture(scope="session")
def symbols():
    return full_symbols()


@pytest.fixture(scope="session")
def gks_metric():
    return build_gks(abstract_spec())


@pytest.fixture(scope="session")
def gks_hat_metric():
    return build_gks(hatted_abstract_spec())


@pytest.fixture(scope="session")
def example_metrics():
    g_spec, hat_spec = example_pair()
    return build_gks(g_spec), build_gks(hat_spec)


@pytest.fixture(scope="session")
def sphere_metric():
    chart = Chart(("theta", "phi"))
    return Metric.from_entries(chart, {
        (0, 0): ref("1"),
        (1, 1): ref("sin(theta)^2"),
    })


@pytest.fixture(scope="session")
def flat4_metric():
    chart = Chart(("t", "r", "theta", "phi"))
    return Metric.from_entries(chart, {(i, i): ref("1") for i in range(4)})
