import math

import pytest

from chargekin.design import ZOE_DESIGN, DesignParams


@pytest.fixture
def zoe():
    return ZOE_DESIGN


@pytest.fixture
def zoe_beta():
    """Prototype sizes with the insertion actuator at 30 degrees."""
    return ZOE_DESIGN.replace(theta=math.pi / 6)


def make_design(**kw) -> DesignParams:
    base = dict(
        L=532.0, L2=1300.0, L3=160.0,
        rho1_min=0.0, rho1_max=500.0, rho2_min=0.0, rho2_max=500.0,
        theta=math.pi / 6, rho3_min=0.0, rho3_max=200.0,
    )
    base.update(kw)
    return DesignParams(**base)
