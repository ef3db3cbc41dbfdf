import pytest

from maxsurf.families import build_family, lattice


@pytest.fixture(scope="session")
def families():
    return {name: build_family(name) for name in ("scherk", "riemann", "doubly")}


@pytest.fixture(scope="session")
def lattices(families):
    return {name: lattice(spec) for name, spec in families.items()}
