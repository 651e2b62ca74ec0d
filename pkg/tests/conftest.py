import numpy as np
import pytest

from ctxseg import ContextSchedule, generate_harmonics

APPENDIX_RATES = (2, 40, 20, 10, 40, 6, 20)


@pytest.fixture(scope="session")
def harmonics_signal():
    return generate_harmonics()


@pytest.fixture(scope="session")
def appendix_schedule():
    return ContextSchedule.from_pairs((r, 5.0) for r in APPENDIX_RATES)


@pytest.fixture()
def rng():
    return np.random.default_rng(12345)
