"""Pure-numpy implementations of the hot counting kernels."""
import numpy as np


def joint_counts(idx, n_bins):
    """Per-row histogram of composite tuple indices.

    idx : (C, n) int array of values in [0, n_bins); returns (C, n_bins) int64.
    """
    idx = np.ascontiguousarray(idx, dtype=np.int64)
    c, n = idx.shape
    offsets = np.arange(c, dtype=np.int64)[:, None] * n_bins
    flat = (idx + offsets).ravel()
    counts = np.bincount(flat, minlength=c * n_bins)
    return counts.reshape(c, n_bins)


def typical_mask(idx, ref, eps):
    """Strong joint typicality test for a batch of candidate rows.

    idx : (C, n) composite tuple indices; ref : (K,) reference probabilities.
    A row passes iff every tuple with ref[k] > 0 has |count/n - ref[k]| <=
    eps*ref[k], and every tuple with ref[k] == 0 never occurs.
    """
    idx = np.atleast_2d(idx)
    n = idx.shape[1]
    counts = joint_counts(idx, ref.shape[0])
    freq = counts / float(n)
    pos = ref > 0.0
    ok_pos = np.all(np.abs(freq[:, pos] - ref[pos]) <= eps * ref[pos], axis=1)
    ok_zero = np.all(counts[:, ~pos] == 0, axis=1)
    return ok_pos & ok_zero
