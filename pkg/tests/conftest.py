"""Shared reference scenario used across the test modules.

The reference case (gamma=2, alpha=0, beta=-1, c_minus=1, u_minus=2,
length=0.35) is supersonic-choking with a maximal duct length just above
0.36, so the duct fits with a little margin.
"""

from __future__ import annotations

import pytest

from fannoflow import GasParams, UpstreamState

REF_GAMMA = 2.0
REF_ALPHA = 0.0
REF_BETA = -1.0
REF_C_MINUS = 1.0
REF_U_MINUS = 2.0
REF_LENGTH = 0.35
REF_PERIOD = 1.0

REF_CONFIG = """\
gas.gamma = 2.0
gas.alpha = 0.0
gas.beta = -1.0
upstream.c_minus = 1.0
upstream.u_minus = 2.0
duct.length = 0.35
boundary.period = 1.0
boundary.epsilon = 1e-3
sim.t_end = 6.0
"""


def reference_config(**overrides) -> str:
    """REF_CONFIG with individual keys replaced or appended."""
    lines = []
    seen = set()
    for line in REF_CONFIG.splitlines():
        key = line.split("=")[0].strip()
        if key in overrides:
            value = overrides[key]
            if value is None:
                seen.add(key)
                continue
            line = f"{key} = {value}"
            seen.add(key)
        lines.append(line)
    for key, value in overrides.items():
        if key not in seen and value is not None:
            lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


@pytest.fixture
def ref_params() -> GasParams:
    return GasParams(REF_GAMMA, REF_ALPHA, REF_BETA)


@pytest.fixture
def ref_upstream() -> UpstreamState:
    return UpstreamState(REF_C_MINUS, REF_U_MINUS)
