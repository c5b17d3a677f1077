import numpy as np
import pytest

from bellsel import rng


def test_safe_cdf_never_selects_trailing_zero():
    cdf = rng.safe_cdf(np.array([0.3, 0.7, 0.0]))
    u = np.array([0.0, 0.2999, 0.3, 0.999999999, np.nextafter(1.0, 0)])
    idx = rng.inverse_cdf(np.broadcast_to(cdf, (len(u), 3)), u)
    assert idx.tolist() == [0, 0, 1, 1, 1]


def test_chunks_independent_of_workers():
    draw = lambda gen, size: gen.random(size)
    one = np.concatenate(rng.map_chunks(draw, 5, 300_000, workers=1))
    many = np.concatenate(rng.map_chunks(draw, 5, 300_000, workers=4))
    assert np.array_equal(one, many)
    assert len(one) == 300_000


@pytest.mark.parametrize("bad", [-1, 2 ** 64])
def test_seed_range(bad):
    with pytest.raises(ValueError):
        rng.check_seed(bad)
