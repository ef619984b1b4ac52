"""Numeric instantiation of symbolic systems and low-dimensional vertex work.

A NumericPolytope is the closed region {r >= 0} ∩ {A r <= b} ∩ {r <= Bmax},
with nonnegativity and the bounding box kept implicit until enumeration.
Bmax = (sum of positive atom values) + 1, which bounds every region produced
by the inequality templates here, so enumeration is always total.
"""
from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction

import numpy as np

from ..errors import (InfeasibleRelationsError, InputError,
                      UnsupportedDimensionError)
from ..channel_model import write_text_atomic
from .symbolic import SymbolicIneqSystem, _to_fraction

VERTEX_TOL = 1e-9


class NumericPolytope:
    """Closed bounded region over named nonnegative rate variables."""

    def __init__(self, var_names, a, b, bmax):
        self.var_names = tuple(var_names)
        self.a = np.asarray(a, dtype=np.float64).reshape(-1, len(self.var_names))
        self.b = np.asarray(b, dtype=np.float64).reshape(-1)
        if self.a.shape[0] != self.b.shape[0]:
            raise InputError("inequality matrix/bound length mismatch")
        self.bmax = float(bmax)

    @property
    def dim(self):
        return len(self.var_names)

    def full_constraints(self):
        """Explicit rows plus nonnegativity and bounding box."""
        d = self.dim
        eye = np.eye(d)
        a = np.vstack([self.a, -eye, eye])
        b = np.concatenate([self.b, np.zeros(d), np.full(d, self.bmax)])
        return a, b

    def contains(self, points, tol=VERTEX_TOL):
        a, b = self.full_constraints()
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return np.all(pts @ a.T <= b + tol, axis=1)

    def max_rate(self, objective):
        """Maximum of objective . r over the region (via vertex enumeration)."""
        verts = vertices(self)
        if verts.size == 0:
            return -math.inf
        return float(np.max(verts @ np.asarray(objective, dtype=float)))


def instantiate(system, atom_values):
    """Numeric polytope of a symbolic system at the given atom values."""
    values = []
    for name in system.atoms:
        if name not in atom_values:
            raise InputError(f"missing atom value for {name!r}")
        v = float(atom_values[name])
        if not math.isfinite(v) or v < 0:
            raise InputError(f"atom {name!r} must be finite and >= 0, got {v}")
        values.append(v)
    values = np.array(values)
    a = np.array([[float(c) for c in ineq.rates]
                  for ineq in system.inequalities], dtype=np.float64)
    if a.size == 0:
        a = np.zeros((0, len(system.rate_vars)))
    catoms = np.array([[float(c) for c in ineq.atoms]
                       for ineq in system.inequalities], dtype=np.float64)
    b = catoms @ values if catoms.size else np.zeros(0)
    bmax = float(np.sum(values[values > 0])) + 1.0
    return NumericPolytope(system.rate_vars, a, b, bmax)


_COMBO_CACHE = {}


def _combinations(m, d):
    key = (m, d)
    if key not in _COMBO_CACHE:
        _COMBO_CACHE[key] = np.array(
            list(itertools.combinations(range(m), d)))
    return _COMBO_CACHE[key]


def vertices(poly, tol=VERTEX_TOL):
    """All vertices of the bounded polytope, deduplicated and lex-sorted."""
    d = poly.dim
    if d > 3:
        raise UnsupportedDimensionError(
            f"vertex enumeration supports dim <= 3, got {d}")
    a, b = poly.full_constraints()
    m = a.shape[0]
    combos = _combinations(m, d)
    mats = a[combos]                      # (k, d, d)
    rhs = b[combos]                       # (k, d)
    dets = np.linalg.det(mats)
    scale = np.prod(np.maximum(np.linalg.norm(mats, axis=2), 1e-30), axis=1)
    ok = np.abs(dets) > 1e-12 * np.maximum(scale, 1e-30)
    if not np.any(ok):
        return np.zeros((0, d))
    sols = np.linalg.solve(mats[ok], rhs[ok][..., None])[..., 0]
    feas = np.all(sols @ a.T <= b + tol, axis=1)
    pts = sols[feas]
    if pts.shape[0] == 0:
        return np.zeros((0, d))
    return dedup_points(pts, tol)


def dedup_points(pts, tol=VERTEX_TOL):
    """Greedy tolerance dedup, then lexicographic sort."""
    order = np.lexsort(pts.T[::-1])
    pts = pts[order]
    kept = [pts[0]]
    for p in pts[1:]:
        if np.max(np.abs(p - kept[-1])) > tol:
            kept.append(p)
    out = np.array(kept)
    # a second pass catches near-duplicates separated in sort order
    uniq = []
    for p in out:
        if not any(np.max(np.abs(p - q)) <= tol for q in uniq):
            uniq.append(p)
    out = np.array(uniq)
    return out[np.lexsort(out.T[::-1])]


def vertex_sets_match(va, vb, tol=VERTEX_TOL):
    """Mutual coverage of two deduplicated vertex arrays at tolerance tol."""
    if va.shape[0] == 0 and vb.shape[0] == 0:
        return True, None
    if va.shape[0] == 0 or vb.shape[0] == 0:
        return False, (va[0] if va.shape[0] else vb[0])
    diff = np.abs(va[:, None, :] - vb[None, :, :]).max(axis=2)
    for i in range(va.shape[0]):
        if diff[i].min() > tol:
            return False, va[i]
    for j in range(vb.shape[0]):
        if diff[:, j].min() > tol:
            return False, vb[j]
    return True, None


class AtomRelation:
    """Linear condition sum(coeffs . atoms) <= rhs with exact rationals."""

    def __init__(self, coeffs, rhs=0):
        self.coeffs = tuple(_to_fraction(c) for c in coeffs)
        self.rhs = _to_fraction(rhs)

    def satisfied(self, values, tol=0.0):
        total = sum(float(c) * v for c, v in zip(self.coeffs, values))
        return total <= float(self.rhs) + tol

    def to_jsonable(self):
        return {"coeffs": [str(c) for c in self.coeffs], "rhs": str(self.rhs)}


def save_relations(atoms, relations, path):
    doc = {"atoms": list(atoms),
           "relations": [r.to_jsonable() for r in relations]}
    write_text_atomic(path, json.dumps(doc, indent=1) + "\n")


def load_relations(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        atoms = tuple(doc["atoms"])
        rels = [AtomRelation(r["coeffs"], r.get("rhs", 0))
                for r in doc["relations"]]
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"malformed relations file {path}: {exc}")
    return atoms, rels


def sample_atom_values(atoms, relations, rng, max_rejects=10000):
    """One uniform draw over [0, 4]^n accepted by all relations."""
    for _ in range(max_rejects):
        values = rng.uniform(0.0, 4.0, size=len(atoms))
        if all(rel.satisfied(values) for rel in relations):
            return values
    raise InfeasibleRelationsError(
        f"no atom draw satisfied the relations in {max_rejects} attempts")


def equivalent_under(sys_a, sys_b, atom_relations, trials, seed=0,
                     tol=VERTEX_TOL):
    """Numeric region-equivalence certificate under atom-value relations.

    Draws `trials` atom assignments satisfying the relations, instantiates
    both systems, and compares vertex sets at `tol`. Returns (True, None) or
    (False, witness) where witness holds the first mismatching assignment.
    """
    if set(sys_a.rate_vars) != set(sys_b.rate_vars):
        raise InputError("systems must share rate variables")
    if set(sys_a.atoms) != set(sys_b.atoms):
        raise InputError("systems must share atoms")
    if sys_b.rate_vars != sys_a.rate_vars or sys_b.atoms != sys_a.atoms:
        # align column order by name
        sys_b = SymbolicIneqSystem(
            sys_a.rate_vars, sys_a.atoms,
            [([ineq.rates[sys_b.rate_vars.index(v)] for v in sys_a.rate_vars],
              [ineq.atoms[sys_b.atoms.index(a)] for a in sys_a.atoms])
             for ineq in sys_b.inequalities])
    for rel in atom_relations:
        if len(rel.coeffs) != len(sys_a.atoms):
            raise InputError("relation coefficient length mismatch")
    streams = np.random.SeedSequence(seed).spawn(trials)
    for t in range(trials):
        rng = np.random.default_rng(streams[t])
        values = sample_atom_values(sys_a.atoms, atom_relations, rng)
        assignment = dict(zip(sys_a.atoms, values))
        va = vertices(instantiate(sys_a, assignment), tol)
        vb = vertices(instantiate(sys_b, assignment), tol)
        match, bad_vertex = vertex_sets_match(va, vb, tol)
        if not match:
            return False, {"trial": t, "atom_values": assignment,
                           "vertex": bad_vertex}
    return True, None
