import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from relzeta import model as cd
from relzeta.expansions import RelativeModel
from relzeta.spectral import resolved_coefficients

settings.register_profile("relzeta", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("relzeta")


@pytest.fixture(scope="session")
def cd10():
    """Coulomb+delta at gamma=1, alpha=0 (has a bound state; continuum only)."""
    return cd.coulomb_delta_model(cd.ModelParams(1.0, 0.0), allow_bound_state=True)


@pytest.fixture(scope="session")
def cd10_coeffs(cd10):
    return resolved_coefficients(cd10)


@pytest.fixture(scope="session")
def cd01():
    return cd.coulomb_delta_model(cd.ModelParams(0.0, 1.0))


@pytest.fixture(scope="session")
def cd_mid():
    return cd.coulomb_delta_model(cd.ModelParams(0.5, 0.2))


def _zero_trace(k):
    return np.zeros_like(np.asarray(k, dtype=complex))


@pytest.fixture(scope="session")
def zero_model():
    return RelativeModel(trace=_zero_trace, name="zero")


@pytest.fixture(scope="session")
def box_model():
    return RelativeModel(trace=_zero_trace, density=lambda v: np.where(v <= 1.0, v, 0.0), name="box")
