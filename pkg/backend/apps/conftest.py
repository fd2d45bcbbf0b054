import factory.random
import numpy as np
import pytest

from apps.mos.tests.factories import build_training_set
from apps.mos.training import TrainingSet


@pytest.fixture(autouse=True)
def _reseed_factories():
    factory.random.reseed_random("recal")


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20150601)


@pytest.fixture()
def training_set() -> TrainingSet:
    return build_training_set(20)


@pytest.fixture()
def _output_dir(settings, tmp_path):
    settings.RECAL_OUTPUT_DIR = str(tmp_path)
