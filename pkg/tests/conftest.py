import numpy as np
import pytest

from coverstego import (
    SequenceKey,
    assemble_index,
    scramble_permutation,
    synthetic_detector,
)


@pytest.fixture
def index_with_sequence():
    """Factory: an index whose single scrambled sequence equals given bits.

    Works backwards through the scrambling permutation so worked examples
    can pin the sequence the matcher actually sees.
    """

    def make(bits, factor_value: int = 0, image_ids=("img_a",)):
        target = np.asarray(bits, dtype=np.uint8)
        t = target.size
        perm = scramble_permutation(factor_value, t)
        source = np.empty(t, dtype=np.uint8)
        source[perm] = target
        key = SequenceKey(bits=source)
        index = assemble_index(key, {factor_value: list(image_ids)})
        got = index.entries[0].sequence.bits
        assert got.tolist() == target.tolist()
        return index

    return make


@pytest.fixture(scope="session")
def small_corpus():
    return synthetic_detector(7, 60, [f"class{i:02d}" for i in range(12)])
