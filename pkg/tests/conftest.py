import pytest

from tropical_pseudostable.dualgraph.graph_utils import DualGraph
from tropical_pseudostable.plmap.plmap_utils import hassett_moduli, tropical_moduli


@pytest.fixture(scope="session")
def moduli12():
    return tropical_moduli(1, 2)


@pytest.fixture(scope="session")
def moduli13():
    return tropical_moduli(1, 3)


@pytest.fixture(scope="session")
def hassett12():
    return hassett_moduli(1, 2)


@pytest.fixture(scope="session")
def stable12(moduli12):
    return moduli12.stable


@pytest.fixture(scope="session")
def ps12(moduli12):
    return moduli12.pseudostable


@pytest.fixture
def loop_and_tail():
    '''genus-0 vertex with a loop, attached to a genus-0 vertex with both legs'''
    return DualGraph((0, 0), ((0, 0), (0, 1)), (1, 1))


@pytest.fixture
def elliptic_tail():
    return DualGraph((1, 0), ((0, 1),), (1, 1))


@pytest.fixture
def banana():
    return DualGraph((0, 0), ((0, 1), (0, 1)), (0, 1))
