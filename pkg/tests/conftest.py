import numpy as np
import pytest

from statjpeg.corpus import scan_corpus
from statjpeg.synth import generate_corpus


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def mini_corpus(tmp_path_factory):
    """4 classes x 8 small images, the CLI-scale fixture."""
    root = tmp_path_factory.mktemp("mini") / "corpus"
    generate_corpus(root, images_per_class=8, size=(48, 48))
    return root


@pytest.fixture(scope="session")
def bundled_corpus(tmp_path_factory):
    """4 classes x 16 images (>= 50 total), the acceptance-scale corpus."""
    root = tmp_path_factory.mktemp("bundled") / "corpus"
    generate_corpus(root, images_per_class=16, size=(96, 96))
    return root


@pytest.fixture(scope="session")
def bundled_manifest(bundled_corpus):
    return scan_corpus(bundled_corpus)


def random_quantized_blocks(rng, n, density, max_mag=1023):
    """Valid quantized blocks with a controllable fraction of nonzeros."""
    blocks = np.zeros((n, 64), dtype=np.int64)
    mask = rng.random((n, 64)) < density
    values = rng.integers(-max_mag, max_mag + 1, size=(n, 64))
    blocks[mask] = values[mask]
    return blocks
