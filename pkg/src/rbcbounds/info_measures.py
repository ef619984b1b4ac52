"""Exact entropies and mutual informations over finite-alphabet joint laws.

All quantities are in bits (log base 2). Probabilities below ZERO_MASS are
treated as exact zeros so that 0*log 0 never produces -inf at simplex
boundaries visited by grid search.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import InputError, NumericalConsistencyError

ZERO_MASS = 1e-15
SUM_TOL = 1e-12
NEG_MI_TOL = 1e-10


class FiniteDist:
    """Joint probability tensor over a tuple of named finite alphabets.

    axes  : ordered list of (axis-name, alphabet-size)
    probs : dense nonnegative tensor summing to 1, one dimension per axis
    """

    __slots__ = ("axes", "probs", "_index")

    def __init__(self, axes, probs, _validate=True):
        axes = tuple((str(name), int(size)) for name, size in axes)
        probs = np.asarray(probs, dtype=np.float64)
        if probs.shape != tuple(size for _, size in axes):
            raise InputError(
                f"probs shape {probs.shape} does not match axes {axes}")
        names = [name for name, _ in axes]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate axis names in {names}")
        if _validate:
            if np.any(probs < -SUM_TOL):
                raise InputError("negative probability entry")
            total = float(probs.sum())
            if abs(total - 1.0) > SUM_TOL:
                raise InputError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("FiniteDist is immutable")

    @property
    def axis_names(self):
        return tuple(name for name, _ in self.axes)

    def axis_size(self, name):
        return self.axes[self._axis(name)][1]

    def _axis(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise InputError(f"unknown axis {name!r}; have {self.axis_names}")

    def _axis_set(self, group):
        if isinstance(group, str):
            group = (group,)
        return tuple(self._axis(name) for name in group)

    def marginal(self, group):
        """Marginal FiniteDist on the named axes (kept in declared order)."""
        keep = sorted(set(self._axis_set(group)))
        drop = tuple(i for i in range(len(self.axes)) if i not in keep)
        probs = self.probs.sum(axis=drop) if drop else self.probs
        return FiniteDist([self.axes[i] for i in keep], probs, _validate=False)


def _entropy_of_tensor(p):
    p = p[p > ZERO_MASS]
    return float(-np.sum(p * np.log2(p)))


def entropy(dist, group):
    """H of the marginal of `dist` on the axis group, in bits."""
    if isinstance(group, str):
        group = (group,)
    if not group:
        return 0.0
    return _entropy_of_tensor(dist.marginal(group).probs)


def cond_mutual_info(dist, a, b, c=()):
    """I(A;B|C) in bits; c may be empty for plain mutual information.

    Tiny negative values (rounding) clamp to 0; anything below -NEG_MI_TOL
    raises, since that indicates a bug rather than roundoff.
    """
    a = (a,) if isinstance(a, str) else tuple(a)
    b = (b,) if isinstance(b, str) else tuple(b)
    c = (c,) if isinstance(c, str) else tuple(c)
    sets = [set(a), set(b), set(c)]
    if sets[0] & sets[1] or sets[0] & sets[2] or sets[1] & sets[2]:
        raise InputError(f"axis sets overlap: a={a}, b={b}, c={c}")
    value = (entropy(dist, a + c) + entropy(dist, b + c)
             - entropy(dist, a + b + c) - (entropy(dist, c) if c else 0.0))
    if value < -NEG_MI_TOL:
        raise NumericalConsistencyError(
            f"I({a};{b}|{c}) = {value} below -{NEG_MI_TOL}")
    return max(value, 0.0)


def binary_entropy(p):
    """h(p) = -p log2 p - (1-p) log2(1-p); h(0) = h(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise InputError(f"binary_entropy needs p in [0,1], got {p}")
    if p < ZERO_MASS or 1.0 - p < ZERO_MASS:
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def gaussian_cap(snr):
    """Capacity 0.5*log2(1+snr) of a unit-bandwidth Gaussian channel."""
    if snr < 0:
        raise InputError(f"snr must be >= 0, got {snr}")
    return 0.5 * math.log2(1.0 + snr)


def compose(factors, axes):
    """Multiply conditional factors into a joint FiniteDist.

    factors : list of (array, axis-names) where each array holds a conditional
        law whose LAST axes are the outcome(s) and earlier axes the context;
        axis-names lists all of the array's axes in order. Every context axis
        must appear as an outcome of an earlier factor.
    axes    : ordered (name, size) list of the resulting joint.
    """
    names = [name for name, _ in axes]
    joint = np.ones([1] * len(names))
    for arr, fnames in factors:
        arr = np.asarray(arr, dtype=np.float64)
        shape = [1] * len(names)
        src = []
        for ax, fname in enumerate(fnames):
            pos = names.index(fname)
            shape[pos] = arr.shape[ax]
            src.append(pos)
        order = np.argsort(src)
        joint = joint * np.transpose(arr, order).reshape(shape)
    return FiniteDist(axes, joint)
