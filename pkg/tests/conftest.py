from pathlib import Path

import pytest

from symchain import load_model

MODELS_DIR = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture(scope="session")
def models_dir() -> Path:
    return MODELS_DIR


@pytest.fixture(scope="session")
def example2():
    return load_model(MODELS_DIR / "example2.model")


@pytest.fixture(scope="session")
def free_particle():
    return load_model(MODELS_DIR / "free_particle.model")
