from __future__ import annotations

import numpy as np
import pytest

from shapedil.config import MetricConfig
from shapedil.mask import save_mask_pgm
from shapedil.synth import toy_corpus, toy_retrieval_corpus


@pytest.fixture(scope="session")
def default_config():
    return MetricConfig()


@pytest.fixture(scope="session")
def corpus():
    return toy_corpus()


@pytest.fixture(scope="session")
def retrieval_corpus():
    return toy_retrieval_corpus()


@pytest.fixture()
def corpus_dir(tmp_path, corpus):
    """Toy corpus written to disk, one class per subdirectory."""
    for sid, label, mask in corpus:
        d = tmp_path / label
        d.mkdir(exist_ok=True)
        save_mask_pgm(mask, d / f"{sid}.pgm")
    return tmp_path


@pytest.fixture()
def retrieval_dir(tmp_path, retrieval_corpus):
    for sid, label, mask in retrieval_corpus:
        d = tmp_path / label
        d.mkdir(exist_ok=True)
        save_mask_pgm(mask, d / f"{sid}.pgm")
    return tmp_path


def random_mask(rng: np.random.Generator, size: int, density: float = 0.4):
    """Random blobby mask with at least one foreground pixel."""
    px = rng.random((size, size)) < density
    if not px.any():
        px[size // 2, size // 2] = True
    return px
