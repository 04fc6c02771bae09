import numpy as np
import pytest

from HigherSpin.harness import RunConfig


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture
def exact_config(tmp_path) -> RunConfig:
    return RunConfig(pairs=((3, 1),), out=str(tmp_path / 'report.jsonl'))
