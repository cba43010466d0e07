import pytest

from lpdual.period import QuadratureConfig


@pytest.fixture(scope="session")
def raw_cfg():
    """Pure quadrature: no closed-form shortcut, no reflection, no series."""
    return QuadratureConfig(exact_special=False, reduce_by_duality=False, near_one_switch=0.0)
