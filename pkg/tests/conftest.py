import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from jpm.core import Alphabet, EncodedText


def make_text(rng: np.random.Generator, n: int, sigma: int) -> EncodedText:
    alphabet = Alphabet(tuple(chr(ord("a") + i) for i in range(sigma)))
    return EncodedText(alphabet, rng.integers(0, sigma, size=n, dtype=np.int64))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0xC0FFEE)
