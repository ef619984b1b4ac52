"""Point-cloud geometry for sampled rate regions."""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..errors import InputError

PARETO_TOL = 1e-12


class RateTriple(NamedTuple):
    r0: float
    r1: float
    r2: float

    def validated(self):
        if min(self) < 0 or not np.all(np.isfinite(self)):
            raise InputError(f"rate triple must be finite and >= 0: {self}")
        return self


class RegionCloud:
    """A set of rate triples with provenance metadata.

    points     : (N, 3) float array
    meta       : dict provenance tag (evaluator, seed, budget, ...)
    sample_ids : (N,) int array mapping each point to the sample it came from
    """

    def __init__(self, points, meta=None, sample_ids=None):
        points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
        if points.size and (np.any(points < -PARETO_TOL)
                            or not np.all(np.isfinite(points))):
            raise InputError("cloud points must be finite and >= 0")
        self.points = np.maximum(points, 0.0)
        self.meta = dict(meta or {})
        if sample_ids is None:
            sample_ids = np.zeros(len(self.points), dtype=np.int64)
        self.sample_ids = np.asarray(sample_ids, dtype=np.int64).reshape(-1)
        if len(self.sample_ids) != len(self.points):
            raise InputError("sample_ids length mismatch")

    def __len__(self):
        return len(self.points)

    def support(self, direction):
        """max over points of direction . p (-inf when empty)."""
        if not len(self):
            return -np.inf
        return float(np.max(self.points @ np.asarray(direction, dtype=float)))


def pareto_filter(cloud, tol=PARETO_TOL):
    """Points not dominated (>= everywhere, > somewhere, at tol) by another.

    Exact duplicates (within tol) keep their first occurrence; output order
    is the input order of the survivors.
    """
    pts = cloud.points
    n = len(pts)
    if n == 0:
        return RegionCloud(pts.copy(), cloud.meta, cloud.sample_ids.copy())
    order = np.argsort(-pts.sum(axis=1), kind="stable")
    keep_mask = np.zeros(n, dtype=bool)
    kept = np.empty((0, 3))
    kept_src = []
    for idx in order:
        p = pts[idx]
        if kept.size:
            geq = np.all(kept >= p - tol, axis=1)
            gt = np.any(kept > p + tol, axis=1)
            if np.any(geq & gt):
                continue
            dup = np.all(np.abs(kept - p) <= tol, axis=1)
            if np.any(dup):
                # keep the earliest occurrence of a duplicate
                j = int(np.argmax(dup))
                if kept_src[j] > idx:
                    keep_mask[kept_src[j]] = False
                    keep_mask[idx] = True
                    kept_src[j] = idx
                continue
        kept = np.vstack([kept, p]) if kept.size else p.reshape(1, 3)
        kept_src.append(idx)
        keep_mask[idx] = True
    out = RegionCloud(pts[keep_mask], cloud.meta,
                      cloud.sample_ids[keep_mask])
    out.meta["pareto_filtered"] = True
    return out


def minkowski_sum(a, b):
    """Pairwise coordinate sums of two clouds, Pareto-filtered."""
    a = pareto_filter(a)
    b = pareto_filter(b)
    if not len(a) or not len(b):
        return RegionCloud(np.zeros((0, 3)),
                           {"source": "minkowski_sum"})
    sums = (a.points[:, None, :] + b.points[None, :, :]).reshape(-1, 3)
    ids = np.repeat(a.sample_ids, len(b))
    cloud = RegionCloud(sums, {"source": "minkowski_sum",
                               "left": a.meta.get("source"),
                               "right": b.meta.get("source")}, ids)
    return pareto_filter(cloud)


def cloud_dominates(outer, inner, tol):
    """True iff every inner point is coordinate-dominated by an outer point.

    Returns (ok, worst_gap, witness): worst_gap is the largest over inner
    points of the smallest coordinate shortfall against any outer point
    (negative when strictly inside), witness the inner point attaining it.
    """
    if not len(inner):
        return True, -np.inf, None
    if not len(outer):
        return False, np.inf, RateTriple(*inner.points[0])
    worst = -np.inf
    witness = None
    chunk = max(1, int(2e6 // max(len(outer), 1)))
    for start in range(0, len(inner), chunk):
        block = inner.points[start:start + chunk]
        short = (block[:, None, :] - outer.points[None, :, :]).max(axis=2)
        gaps = short.min(axis=1)
        i = int(np.argmax(gaps))
        if gaps[i] > worst:
            worst = float(gaps[i])
            witness = RateTriple(*block[i])
    return worst <= tol, worst, witness
