import numpy as np
import pytest

from src.config import TEST_PRESET
from src.data import generate_synthetic_dataset
from src.model import ArchConfig
from src.training import TrainConfig


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_arch():
    return ArchConfig(**TEST_PRESET)


@pytest.fixture
def tiny_train_config():
    """Пресет для быстрых тестов обучения: маленькая сеть, патчи 16x16"""
    return TrainConfig(**TEST_PRESET, patch_size=16, batch_size=2, steps=6,
                       checkpoint_every=3, log_every=2, seed=7)


@pytest.fixture(scope="session")
def synth_dataset(tmp_path_factory):
    """Четыре пары 32x32 с ядрами 5..9"""
    root = tmp_path_factory.mktemp("synth")
    generate_synthetic_dataset(root, count=4, seed=11, size=(32, 32))
    return root
