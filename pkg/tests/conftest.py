from pathlib import Path

import numpy as np
import pytest

from tintforge.colorspace import pairwise_distance_matrix
from tintforge.embedding import EmbeddingStore
from tintforge.vocab import BASIC_COLOR_NAMES, Vocabulary, load_vocab

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def vocab() -> Vocabulary:
    return load_vocab()


@pytest.fixture(scope="session")
def conformance_pairs() -> list[tuple[tuple[float, float, float], tuple[float, float, float], float]]:
    rows = []
    for line in (DATA_DIR / "ciede2000_pairs.csv").read_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        vals = [float(v) for v in line.split(",")]
        rows.append((tuple(vals[0:3]), tuple(vals[3:6]), vals[6]))
    return rows


def make_random_store(names: list[str], dim: int, seed: int) -> EmbeddingStore:
    rng = np.random.default_rng(seed)
    return EmbeddingStore(dim, {n: rng.normal(size=dim).astype(np.float32) for n in names})


def make_lab_aligned_store(vocab: Vocabulary, dim: int = 16) -> EmbeddingStore:
    """Synthetic store whose pairwise Euclidean embedding distances are a
    strictly increasing function of the perceptual distances between the 11
    basic anchors: classical multidimensional scaling on the perceptual
    matrix, with an additive constant to make it Euclidean-embeddable."""
    names = list(BASIC_COLOR_NAMES)
    labs = [vocab.basic(n).lab for n in names]
    base = pairwise_distance_matrix("lab", labs)
    n = len(names)
    off_diag = 1.0 - np.eye(n)
    centering = np.eye(n) - np.ones((n, n)) / n
    for shift in [0.0, 1.0, 4.0, 16.0, 64.0, 256.0, 1024.0]:
        dist = base + shift * off_diag
        gram = -0.5 * centering @ (dist ** 2) @ centering
        eigvals, eigvecs = np.linalg.eigh(gram)
        if eigvals.min() >= -1e-8 * max(eigvals.max(), 1.0):
            break
    else:
        raise AssertionError("no additive constant made the matrix embeddable")
    coords = eigvecs @ np.diag(np.sqrt(np.clip(eigvals, 0.0, None)))
    if coords.shape[1] > dim:
        order = np.argsort(eigvals)[::-1]
        coords = coords[:, order[:dim]]
    padded = np.zeros((n, dim))
    padded[:, : coords.shape[1]] = coords
    store = EmbeddingStore(dim, {name: padded[i] for i, name in enumerate(names)})

    # the construction only counts if ranks match the perceptual matrix
    got = np.array([
        [np.linalg.norm(store.get(a).astype(float) - store.get(b).astype(float))
         for b in names] for a in names
    ])
    iu = np.triu_indices(n, 1)
    assert np.array_equal(np.argsort(got[iu]), np.argsort(base[iu]))
    return store


@pytest.fixture(scope="session")
def lab_aligned_store(vocab) -> EmbeddingStore:
    return make_lab_aligned_store(vocab)


@pytest.fixture()
def basics_store() -> EmbeddingStore:
    return make_random_store(list(BASIC_COLOR_NAMES), dim=12, seed=7)
