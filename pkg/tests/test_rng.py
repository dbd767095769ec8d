import numpy as np
import pytest

from lossgeom.rng import RngStream, gaussian_matrix, substream


def test_same_seed_and_label_reproduce_exactly():
    a = RngStream(7, "alpha").gaussians(256)
    b = RngStream(7, "alpha").gaussians(256)
    assert np.array_equal(a, b)


def test_distinct_labels_give_distinct_streams():
    a = RngStream(7, "alpha").gaussians(256)
    b = RngStream(7, "beta").gaussians(256)
    assert not np.array_equal(a, b)


def test_distinct_seeds_give_distinct_streams():
    a = RngStream(7, "alpha").gaussians(256)
    b = RngStream(8, "alpha").gaussians(256)
    assert not np.array_equal(a, b)


def test_substream_matches_direct_construction():
    a = substream(3, "weights").uniforms(64)
    b = RngStream(3, "weights").uniforms(64)
    assert np.array_equal(a, b)


def test_uniforms_live_in_half_open_unit_interval():
    u = RngStream(0, "u").uniforms(10_000)
    assert u.min() >= 0.0
    assert u.max() < 1.0


def test_gaussian_moments_at_one_million_draws():
    z = RngStream(0, "moments").gaussians(1_000_000)
    n = z.size
    mean = z.mean()
    var = z.var()
    kurtosis = ((z - mean) ** 4).mean() / var**2 - 3.0
    assert abs(mean) <= 4.0 / np.sqrt(n)
    assert abs(var - 1.0) <= 0.01
    # Excess kurtosis of a unit Gaussian is 0 with standard error sqrt(24/n).
    assert abs(kurtosis) <= 3.0 * np.sqrt(24.0 / n)


def test_gaussians_odd_count():
    z = RngStream(1, "odd").gaussians(7)
    assert z.shape == (7,)
    assert np.isfinite(z).all()


def test_permutation_is_a_permutation_and_deterministic():
    p = RngStream(2, "perm").permutation(500)
    q = RngStream(2, "perm").permutation(500)
    assert np.array_equal(p, q)
    assert np.array_equal(np.sort(p), np.arange(500))


def test_permutations_vary_with_seed():
    p = RngStream(2, "perm").permutation(500)
    r = RngStream(3, "perm").permutation(500)
    assert not np.array_equal(p, r)


def test_integers_respect_bound_and_determinism():
    a = RngStream(4, "ints").integers(13, 2_000)
    b = RngStream(4, "ints").integers(13, 2_000)
    assert np.array_equal(a, b)
    assert a.min() >= 0
    assert a.max() < 13
    # Every residue should appear in a draw this long.
    assert np.unique(a).size == 13


def test_integers_reject_nonpositive_bound():
    with pytest.raises(ValueError):
        RngStream(0, "ints").integers(0, 4)


def test_gaussian_matrix_shape_and_scale():
    stream = RngStream(5, "matrix")
    m = gaussian_matrix(stream, 200, 300, 2.0)
    assert m.shape == (200, 300)
    assert abs(m.std() - 2.0) < 0.05


def test_gaussian_matrix_zero_sigma_is_zero_but_advances_stream():
    stream_a = RngStream(6, "zero")
    zeros = gaussian_matrix(stream_a, 10, 10, 0.0)
    after_zero = stream_a.gaussians(16)

    stream_b = RngStream(6, "zero")
    gaussian_matrix(stream_b, 10, 10, 1.0)
    after_draw = stream_b.gaussians(16)

    assert not zeros.any()
    assert np.array_equal(after_zero, after_draw)


def test_gaussian_matrix_rejects_negative_sigma():
    with pytest.raises(ValueError):
        gaussian_matrix(RngStream(0, "neg"), 2, 2, -1.0)


def test_stream_rejects_bad_arguments():
    with pytest.raises(ValueError):
        RngStream(-1, "x")
    with pytest.raises(ValueError):
        RngStream(0, "")
    with pytest.raises(ValueError):
        RngStream(0, "x").gaussians(-1)
