"""Per-theorem rate-region evaluators, closed forms, and frontier search.

Each TheoremId owns a fixed inequality template whose right-hand sides are
named mutual-information/entropy atoms, an auxiliary-distribution family
(a list of conditional factors), and a composer that turns channel + factors
into the joint law(s) the atoms are evaluated on. Evaluating a region at a
fixed auxiliary therefore means: compose, evaluate atoms, instantiate the
template into a NumericPolytope.

min{.,.} bounds are expanded into separate inequalities. Regions over fewer
than three rate variables embed into rate triples with the missing
coordinates at zero.
"""
from __future__ import annotations

import enum
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .channel_model import (BlackwellParams, GaussianOrthogonalParams,
                            OrthogonalRbcChannel, ParallelRbcChannel,
                            RbcChannel, check_structure)
from .errors import InputError, PreconditionError
from .info_measures import (FiniteDist, compose, cond_mutual_info, entropy,
                            gaussian_cap)
from .rate_polytope import (NumericPolytope, RateTriple, RegionCloud,
                            SymbolicIneqSystem, instantiate, pareto_filter,
                            vertices)

FACTOR_TOL = 1e-12


class TheoremId(enum.Enum):
    """Region templates, one per closed-form statement implemented here."""
    R1_PRIME = "r1-prime"
    R1 = "r1"
    R2 = "r2"
    R3 = "r3"
    OUTER = "outer"
    BC_INNER = "bc-inner"
    BC_OUTER = "bc-outer"
    DM_BOUNDS = "dm-bounds"
    SEMIDET = "semidet"
    DET = "det"
    DET_PRIVATE = "det-private"
    ORTHOGONAL = "orthogonal"
    PARALLEL_INNER = "parallel-inner"
    PARALLEL_OUTER = "parallel-outer"
    PARALLEL_DM = "parallel-dm"
    PARALLEL_PRIVATE = "parallel-private"


OUTER_IDS = {TheoremId.OUTER, TheoremId.BC_OUTER, TheoremId.PARALLEL_OUTER}

PARALLEL_IDS = {TheoremId.PARALLEL_INNER, TheoremId.PARALLEL_OUTER,
                TheoremId.PARALLEL_DM, TheoremId.PARALLEL_PRIVATE}


class Atom(NamedTuple):
    """One named information quantity evaluated on a composed joint."""
    dist: str          # which composed dist ("main", "a", "b")
    kind: str          # "I" or "H"
    a: tuple           # first axis group (or entropy group)
    b: tuple = ()      # second axis group (MI only)
    c: tuple = ()      # conditioning axes

    @property
    def name(self):
        suffix = f"|{','.join(self.c)}" if self.c else ""
        if self.kind == "H":
            return f"H({','.join(self.a)}{suffix})"
        return f"I({','.join(self.a)};{','.join(self.b)}{suffix})"

    def evaluate(self, dists, cache=None):
        def ent(group):
            if not group:
                return 0.0
            if cache is None:
                return entropy(dists[self.dist], group)
            key = (self.dist, frozenset(group))
            if key not in cache:
                cache[key] = entropy(dists[self.dist], group)
            return cache[key]

        if self.kind == "H":
            return max(ent(self.a + self.c) - ent(self.c), 0.0)
        value = (ent(self.a + self.c) + ent(self.b + self.c)
                 - ent(self.a + self.b + self.c) - ent(self.c))
        return max(value, 0.0)


def I(a, b, c=(), dist="main"):  # noqa: E743 - matches the formulas' notation
    return Atom(dist, "I", tuple(a), tuple(b), tuple(c))


def H(a, c=(), dist="main"):
    return Atom(dist, "H", tuple(a), (), tuple(c))


class FactorSpec(NamedTuple):
    """Shape of one conditional factor p(out | ctx) in an auxiliary family."""
    name: str
    ctx_shape: tuple
    out_shape: tuple

    @property
    def n_ctx(self):
        return int(np.prod(self.ctx_shape)) if self.ctx_shape else 1

    @property
    def n_out(self):
        return int(np.prod(self.out_shape))

    @property
    def shape(self):
        return self.ctx_shape + self.out_shape


def _validate_factor(arr, spec):
    arr = np.asarray(arr, dtype=np.float64)
    if arr.shape != spec.shape:
        raise InputError(
            f"factor {spec.name} has shape {arr.shape}, expected {spec.shape}")
    if np.any(arr < -FACTOR_TOL):
        raise InputError(f"factor {spec.name} has negative entries")
    rows = arr.reshape(spec.n_ctx, spec.n_out)
    if np.any(np.abs(rows.sum(axis=1) - 1.0) > 1e-9):
        raise InputError(f"factor {spec.name} rows do not sum to 1")
    return np.maximum(arr, 0.0)


@dataclass(frozen=True)
class AuxJoint:
    """Auxiliary factors p(x1) p(t|x1) p(u1,u2|t,x1) p(x|t,u1,u2,x1)."""
    p_x1: np.ndarray
    p_t: np.ndarray        # [x1, t]
    p_u: np.ndarray        # [x1, t, u1, u2]
    p_x: np.ndarray        # [x1, t, u1, u2, x]

    @property
    def factors(self):
        return (self.p_x1, self.p_t, self.p_u, self.p_x)


@dataclass(frozen=True)
class OuterJoint:
    """Outer-bound factors p(x, x1) and p(t, u | x, x1, y1)."""
    p_xx1: np.ndarray      # [x, x1]
    p_tu: np.ndarray       # [x, x1, y1, t, u]

    @property
    def factors(self):
        return (self.p_xx1, self.p_tu)


# --------------------------------------------------------------------------
# family definitions: factor shapes + composers
# --------------------------------------------------------------------------

def _need_rbc(channel):
    if not isinstance(channel, RbcChannel):
        raise InputError("this region template needs an RbcChannel")
    return channel


def _need_bc(channel):
    ch = _need_rbc(channel)
    if ch.cards["x1"] != 1:
        raise InputError(
            "broadcast-channel templates need |X1| = 1; "
            "use restrict_to_null_relay first")
    return ch


def _family_full(channel, cards):
    ch = _need_rbc(channel)
    nx, nx1 = ch.cards["x"], ch.cards["x1"]
    nt, nu1, nu2 = cards.get("t", 2), cards.get("u1", 2), cards.get("u2", 2)
    return [
        FactorSpec("p(x1)", (), (nx1,)),
        FactorSpec("p(t|x1)", (nx1,), (nt,)),
        FactorSpec("p(u1,u2|x1,t)", (nx1, nt), (nu1, nu2)),
        FactorSpec("p(x|x1,t,u1,u2)", (nx1, nt, nu1, nu2), (nx,)),
    ]


def _compose_full(channel, factors):
    p_x1, p_t, p_u, p_x = factors
    nt, nu1, nu2 = p_t.shape[1], p_u.shape[2], p_u.shape[3]
    ch = channel
    axes = [("X1", ch.cards["x1"]), ("T", nt), ("U1", nu1), ("U2", nu2),
            ("X", ch.cards["x"]), ("Y1", ch.cards["y1"]),
            ("Y2", ch.cards["y2"])]
    dist = compose([
        (p_x1, ["X1"]),
        (p_t, ["X1", "T"]),
        (p_u, ["X1", "T", "U1", "U2"]),
        (p_x, ["X1", "T", "U1", "U2", "X"]),
        (channel.law.transpose(1, 0, 2, 3), ["X1", "X", "Y1", "Y2"]),
    ], axes)
    return {"main": dist}


def _family_outer(channel, cards):
    ch = _need_rbc(channel)
    nt, nu = cards.get("t", 2), cards.get("u", 2)
    return [
        FactorSpec("p(x,x1)", (), (ch.cards["x"], ch.cards["x1"])),
        FactorSpec("p(t,u|x,x1,y1)",
                   (ch.cards["x"], ch.cards["x1"], ch.cards["y1"]), (nt, nu)),
    ]


def _compose_outer(channel, factors):
    p_xx1, p_tu = factors
    nt, nu = p_tu.shape[3], p_tu.shape[4]
    ch = channel
    axes = [("T", nt), ("U", nu), ("X1", ch.cards["x1"]),
            ("X", ch.cards["x"]), ("Y1", ch.cards["y1"]),
            ("Y2", ch.cards["y2"])]
    dist = compose([
        (p_xx1, ["X", "X1"]),
        (channel.law, ["X", "X1", "Y1", "Y2"]),
        (p_tu, ["X", "X1", "Y1", "T", "U"]),
    ], axes)
    return {"main": dist}


def _family_bc_inner(channel, cards):
    ch = _need_bc(channel)
    nt, nu1, nu2 = cards.get("t", 2), cards.get("u1", 2), cards.get("u2", 2)
    return [
        FactorSpec("p(t)", (), (nt,)),
        FactorSpec("p(u1,u2|t)", (nt,), (nu1, nu2)),
        FactorSpec("p(x|t,u1,u2)", (nt, nu1, nu2), (ch.cards["x"],)),
    ]


def _compose_bc_inner(channel, factors):
    p_t, p_u, p_x = factors
    nt, nu1, nu2 = p_t.shape[0], p_u.shape[1], p_u.shape[2]
    ch = channel
    axes = [("T", nt), ("U1", nu1), ("U2", nu2), ("X", ch.cards["x"]),
            ("Y1", ch.cards["y1"]), ("Y2", ch.cards["y2"])]
    dist = compose([
        (p_t, ["T"]),
        (p_u, ["T", "U1", "U2"]),
        (p_x, ["T", "U1", "U2", "X"]),
        (channel.law[:, 0], ["X", "Y1", "Y2"]),
    ], axes)
    return {"main": dist}


def _family_bc_outer(channel, cards):
    ch = _need_bc(channel)
    nt, nu, nv = cards.get("t", 2), cards.get("u", 2), cards.get("v", 2)
    return [
        FactorSpec("p(t,u,v)", (), (nt, nu, nv)),
        FactorSpec("p(x|t,u,v)", (nt, nu, nv), (ch.cards["x"],)),
    ]


def _compose_bc_outer(channel, factors):
    p_tuv, p_x = factors
    nt, nu, nv = p_tuv.shape
    ch = channel
    axes = [("T", nt), ("U", nu), ("V", nv), ("X", ch.cards["x"]),
            ("Y1", ch.cards["y1"]), ("Y2", ch.cards["y2"])]
    dist = compose([
        (p_tuv, ["T", "U", "V"]),
        (p_x, ["T", "U", "V", "X"]),
        (channel.law[:, 0], ["X", "Y1", "Y2"]),
    ], axes)
    return {"main": dist}


def _family_txx1(channel, cards):
    ch = _need_rbc(channel)
    nt = cards.get("t", 2)
    return [
        FactorSpec("p(x1)", (), (ch.cards["x1"],)),
        FactorSpec("p(t|x1)", (ch.cards["x1"],), (nt,)),
        FactorSpec("p(x|x1,t)", (ch.cards["x1"], nt), (ch.cards["x"],)),
    ]


def _compose_txx1(channel, factors):
    p_x1, p_t, p_x = factors
    nt = p_t.shape[1]
    ch = channel
    axes = [("X1", ch.cards["x1"]), ("T", nt), ("X", ch.cards["x"]),
            ("Y1", ch.cards["y1"]), ("Y2", ch.cards["y2"])]
    dist = compose([
        (p_x1, ["X1"]),
        (p_t, ["X1", "T"]),
        (p_x, ["X1", "T", "X"]),
        (channel.law.transpose(1, 0, 2, 3), ["X1", "X", "Y1", "Y2"]),
    ], axes)
    return {"main": dist}


def _family_dm_outer(channel, cards):
    ch = _need_rbc(channel)
    nt = cards.get("t", 2)
    return [
        FactorSpec("p(x,x1)", (), (ch.cards["x"], ch.cards["x1"])),
        FactorSpec("p(t|x,x1,y1)",
                   (ch.cards["x"], ch.cards["x1"], ch.cards["y1"]), (nt,)),
    ]


def _compose_dm_outer(channel, factors):
    p_xx1, p_t = factors
    nt = p_t.shape[3]
    ch = channel
    axes = [("T", nt), ("X1", ch.cards["x1"]), ("X", ch.cards["x"]),
            ("Y1", ch.cards["y1"]), ("Y2", ch.cards["y2"])]
    dist = compose([
        (p_xx1, ["X", "X1"]),
        (channel.law, ["X", "X1", "Y1", "Y2"]),
        (p_t, ["X", "X1", "Y1", "T"]),
    ], axes)
    return {"main": dist}


def _family_semidet(channel, cards):
    ch = _need_rbc(channel)
    nt, nu = cards.get("t", 2), cards.get("u", 2)
    return [
        FactorSpec("p(x1)", (), (ch.cards["x1"],)),
        FactorSpec("p(t|x1)", (ch.cards["x1"],), (nt,)),
        FactorSpec("p(u|x1,t)", (ch.cards["x1"], nt), (nu,)),
        FactorSpec("p(x|x1,t,u)", (ch.cards["x1"], nt, nu), (ch.cards["x"],)),
    ]


def _compose_semidet(channel, factors):
    p_x1, p_t, p_u, p_x = factors
    nt, nu = p_t.shape[1], p_u.shape[2]
    ch = channel
    axes = [("X1", ch.cards["x1"]), ("T", nt), ("U", nu),
            ("X", ch.cards["x"]), ("Y1", ch.cards["y1"]),
            ("Y2", ch.cards["y2"])]
    dist = compose([
        (p_x1, ["X1"]),
        (p_t, ["X1", "T"]),
        (p_u, ["X1", "T", "U"]),
        (p_x, ["X1", "T", "U", "X"]),
        (channel.law.transpose(1, 0, 2, 3), ["X1", "X", "Y1", "Y2"]),
    ], axes)
    return {"main": dist}


def _family_det_private(channel, cards):
    ch = _need_rbc(channel)
    return [
        FactorSpec("p(x1)", (), (ch.cards["x1"],)),
        FactorSpec("p(x|x1)", (ch.cards["x1"],), (ch.cards["x"],)),
    ]


def _compose_det_private(channel, factors):
    p_x1, p_x = factors
    ch = channel
    axes = [("X1", ch.cards["x1"]), ("X", ch.cards["x"]),
            ("Y1", ch.cards["y1"]), ("Y2", ch.cards["y2"])]
    dist = compose([
        (p_x1, ["X1"]),
        (p_x, ["X1", "X"]),
        (channel.law.transpose(1, 0, 2, 3), ["X1", "X", "Y1", "Y2"]),
    ], axes)
    return {"main": dist}


def _family_orthogonal(channel, cards):
    if not isinstance(channel, OrthogonalRbcChannel):
        raise InputError("orthogonal template needs an OrthogonalRbcChannel")
    c = channel.cards
    return [
        FactorSpec("p(x1)", (), (c["x1"],)),
        FactorSpec("p(xR|x1)", (c["x1"],), (c["xr"],)),
        FactorSpec("p(xD|x1)", (c["x1"],), (c["xd"],)),
    ]


def _compose_orthogonal(channel, factors):
    p_x1, p_xr, p_xd = factors
    c = channel.cards
    axes = [("X1", c["x1"]), ("XR", c["xr"]), ("XD", c["xd"]),
            ("Y1", c["y1"]), ("Y2", c["y2"])]
    dist = compose([
        (p_x1, ["X1"]),
        (p_xr, ["X1", "XR"]),
        (p_xd, ["X1", "XD"]),
        (channel.law1.transpose(1, 0, 2), ["X1", "XR", "Y1"]),
        (channel.law2.transpose(1, 0, 2), ["X1", "XD", "Y2"]),
    ], axes)
    return {"main": dist}


def _sub_specs(sub, suffix, with_t, nt):
    c = sub.cards
    specs = []
    if with_t:
        specs.append(FactorSpec(f"p(t{suffix})", (), (nt,)))
        specs.append(FactorSpec(f"p(x{suffix},x1{suffix}|t{suffix})",
                                (nt,), (c["x"], c["x1"])))
    else:
        specs.append(FactorSpec(f"p(x{suffix},x1{suffix})", (),
                                (c["x"], c["x1"])))
    return specs


def _compose_sub(sub, suffix, factors, with_t, nt):
    c = sub.cards
    t_ax = f"T{suffix}"
    names = [f"X{suffix}", f"X1{suffix}", f"Y1{suffix}", f"Y2{suffix}"]
    if with_t:
        p_t, p_xx1 = factors
        axes = [(t_ax, nt), (names[0], c["x"]), (names[1], c["x1"]),
                (names[2], c["y1"]), (names[3], c["y2"])]
        return compose([
            (p_t, [t_ax]),
            (p_xx1, [t_ax, names[0], names[1]]),
            (sub.law, names),
        ], axes)
    p_xx1, = factors
    axes = [(names[0], c["x"]), (names[1], c["x1"]),
            (names[2], c["y1"]), (names[3], c["y2"])]
    return compose([(p_xx1, [names[0], names[1]]), (sub.law, names)], axes)


def _parallel_family(with_ta, with_tb):
    def family(channel, cards):
        if not isinstance(channel, ParallelRbcChannel):
            raise InputError("parallel templates need a ParallelRbcChannel")
        nt = cards.get("t", 2)
        return (_sub_specs(channel.sub_a, "a", with_ta, nt)
                + _sub_specs(channel.sub_b, "b", with_tb, nt))
    return family


def _parallel_composer(with_ta, with_tb):
    def composer(channel, factors):
        nt_a = factors[0].shape[0] if with_ta else 0
        n_a = 2 if with_ta else 1
        fa, fb = factors[:n_a], factors[n_a:]
        nt_b = fb[0].shape[0] if with_tb else 0
        return {
            "a": _compose_sub(channel.sub_a, "a", fa, with_ta, nt_a),
            "b": _compose_sub(channel.sub_b, "b", fb, with_tb, nt_b),
        }
    return composer


# --------------------------------------------------------------------------
# templates: (rate coefficient dict, [(coeff, Atom), ...]) rows
# --------------------------------------------------------------------------

def _r_family_atoms():
    a1 = I(("U1",), ("Y1",), ("T", "X1"))
    a2 = I(("T", "U1"), ("Y1",), ("X1",))
    a3 = I(("U2",), ("Y2",), ("T", "X1"))
    a4 = I(("T", "X1", "U2"), ("Y2",))
    a5 = I(("U1",), ("U2",), ("T", "X1"))
    return a1, a2, a3, a4, a5


def _template_r1_prime():
    a1, a2, a3, a4, a5 = _r_family_atoms()
    return ("R0", "R1", "R2", "R1p", "R2p"), [
        ({"R1": 1, "R1p": 1}, [(1, a1)]),
        ({"R0": 1, "R1": 1, "R1p": 1}, [(1, a2)]),
        ({"R2": 1, "R2p": 1}, [(1, a3)]),
        ({"R0": 1, "R2": 1, "R2p": 1}, [(1, a4)]),
        ({"R1p": -1, "R2p": -1}, [(-1, a5)]),
    ]


def _template_r1():
    a1, a2, a3, a4, a5 = _r_family_atoms()
    return ("R0", "R1", "R2"), [
        ({"R1": 1}, [(1, a1)]),
        ({"R0": 1, "R1": 1}, [(1, a2)]),
        ({"R2": 1}, [(1, a3)]),
        ({"R0": 1, "R2": 1}, [(1, a4)]),
        ({"R1": 1, "R2": 1}, [(1, a1), (1, a3), (-1, a5)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, a2), (1, a3), (-1, a5)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, a1), (1, a4), (-1, a5)]),
        ({"R0": 2, "R1": 1, "R2": 1}, [(1, a2), (1, a4), (-1, a5)]),
    ]


def _template_r2():
    a1, a2, a3, a4, a5 = _r_family_atoms()
    return ("R0", "R1", "R2"), [
        ({"R0": 1, "R1": 1}, [(1, a2)]),
        ({"R0": 1, "R2": 1}, [(1, a4)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, a2), (1, a3), (-1, a5)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, a1), (1, a4), (-1, a5)]),
        ({"R0": 2, "R1": 1, "R2": 1}, [(1, a2), (1, a4), (-1, a5)]),
    ]


def _template_r3():
    a1, a2, a3, a4, a5 = _r_family_atoms()
    t1 = I(("T",), ("Y1",), ("X1",))
    t2 = I(("T", "X1"), ("Y2",))
    return ("R0", "R1", "R2"), [
        ({"R0": 1}, [(1, t1)]),
        ({"R0": 1}, [(1, t2)]),
        ({"R0": 1, "R1": 1}, [(1, a2)]),
        ({"R0": 1, "R2": 1}, [(1, a4)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, a2), (1, a3), (-1, a5)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, a1), (1, a4), (-1, a5)]),
    ]


def _template_outer():
    t1 = I(("T",), ("Y1",), ("X1",))
    t2 = I(("T", "X1"), ("Y2",))
    direct1 = I(("X",), ("Y1",), ("X1",))
    tu2 = I(("T", "U", "X1"), ("Y2",))
    direct2 = I(("X", "X1"), ("Y2",))
    resid = I(("X",), ("Y1",), ("T", "U", "X1"))
    u2 = I(("U",), ("Y2",), ("T", "X1"))
    both = I(("X",), ("Y1", "Y2"), ("X1",))
    return ("R0", "R1", "R2"), [
        ({"R0": 1}, [(1, t1)]),
        ({"R0": 1}, [(1, t2)]),
        ({"R0": 1, "R1": 1}, [(1, direct1)]),
        ({"R0": 1, "R2": 1}, [(1, tu2)]),
        ({"R0": 1, "R2": 1}, [(1, direct2)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, t1), (1, resid), (1, u2)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, resid), (1, tu2)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, both)]),
    ]


def _template_bc_inner():
    a1 = I(("U1",), ("Y1",), ("T",))
    a2 = I(("T", "U1"), ("Y1",))
    a3 = I(("U2",), ("Y2",), ("T",))
    a4 = I(("T", "U2"), ("Y2",))
    a5 = I(("U1",), ("U2",), ("T",))
    return ("R0", "R1", "R2"), [
        ({"R0": 1, "R1": 1}, [(1, a2)]),
        ({"R0": 1, "R2": 1}, [(1, a4)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, a2), (1, a3), (-1, a5)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, a1), (1, a4), (-1, a5)]),
        ({"R0": 2, "R1": 1, "R2": 1}, [(1, a2), (1, a4), (-1, a5)]),
    ]


def _template_bc_outer():
    ty1 = I(("T",), ("Y1",))
    ty2 = I(("T",), ("Y2",))
    xy1 = I(("X",), ("Y1",))
    tu_y2 = I(("T", "U"), ("Y2",))
    x_res_tu = I(("X",), ("Y1",), ("T", "U"))
    u_y2 = I(("U",), ("Y2",), ("T",))
    tv_y1 = I(("T", "V"), ("Y1",))
    xy2 = I(("X",), ("Y2",))
    x_res_tv = I(("X",), ("Y2",), ("T", "V"))
    v_y1 = I(("V",), ("Y1",), ("T",))
    return ("R0", "R1", "R2"), [
        ({"R0": 1}, [(1, ty1)]),
        ({"R0": 1}, [(1, ty2)]),
        ({"R0": 1, "R1": 1}, [(1, xy1)]),
        ({"R0": 1, "R2": 1}, [(1, tu_y2)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, ty1), (1, x_res_tu), (1, u_y2)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, tu_y2), (1, x_res_tu)]),
        ({"R0": 1, "R1": 1}, [(1, tv_y1)]),
        ({"R0": 1, "R2": 1}, [(1, xy2)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, tv_y1), (1, x_res_tv)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, ty2), (1, v_y1), (1, x_res_tv)]),
    ]


def _template_dm():
    t2 = I(("T", "X1"), ("Y2",))
    direct1 = I(("X",), ("Y1",), ("X1",))
    resid = I(("X",), ("Y1",), ("T", "X1"))
    return ("R0", "R1"), [
        ({"R0": 1}, [(1, t2)]),
        ({"R0": 1, "R1": 1}, [(1, direct1)]),
        ({"R0": 1, "R1": 1}, [(1, resid), (1, t2)]),
    ]


def _template_semidet():
    t1 = I(("T",), ("Y1",), ("X1",))
    t2 = I(("T", "X1"), ("Y2",))
    h1 = H(("Y1",), ("X1",))
    tu2 = I(("T", "U", "X1"), ("Y2",))
    h_res = H(("Y1",), ("T", "U", "X1"))
    u2 = I(("U",), ("Y2",), ("T", "X1"))
    return ("R0", "R1", "R2"), [
        ({"R0": 1}, [(1, t1)]),
        ({"R0": 1}, [(1, t2)]),
        ({"R0": 1, "R1": 1}, [(1, h1)]),
        ({"R0": 1, "R2": 1}, [(1, tu2)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, t1), (1, h_res), (1, u2)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, h_res), (1, tu2)]),
    ]


def _template_det():
    t1 = I(("T",), ("Y1",), ("X1",))
    t2 = I(("T", "X1"), ("Y2",))
    h1 = H(("Y1",), ("X1",))
    h2 = H(("Y2",))
    h12 = H(("Y1", "Y2"), ("T", "X1"))
    return ("R0", "R1", "R2"), [
        ({"R0": 1}, [(1, t1)]),
        ({"R0": 1}, [(1, t2)]),
        ({"R0": 1, "R1": 1}, [(1, h1)]),
        ({"R0": 1, "R2": 1}, [(1, h2)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, t1), (1, h12)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, t2), (1, h12)]),
    ]


def _template_det_private():
    return ("R1", "R2"), [
        ({"R1": 1}, [(1, H(("Y1",), ("X1",)))]),
        ({"R2": 1}, [(1, H(("Y2",)))]),
        ({"R1": 1, "R2": 1}, [(1, H(("Y1", "Y2"), ("X1",)))]),
    ]


def _template_orthogonal():
    relay_link = I(("XR",), ("Y1",), ("X1",))
    coop = I(("XD", "X1"), ("Y2",))
    direct = I(("XD",), ("Y2",), ("X1",))
    return ("R0", "R1", "R2"), [
        ({"R0": 1, "R1": 1}, [(1, relay_link)]),
        ({"R0": 1, "R2": 1}, [(1, coop)]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, relay_link), (1, direct)]),
    ]


def _parallel_atoms():
    return {
        "ta_y1a": I(("Ta",), ("Y1a",), ("X1a",), dist="a"),
        "ta_y2a": I(("Ta", "X1a"), ("Y2a",), dist="a"),
        "xa_y1a": I(("Xa",), ("Y1a",), ("X1a",), dist="a"),
        "xa_res": I(("Xa",), ("Y1a",), ("Ta", "X1a"), dist="a"),
        "xa_y2a": I(("Xa", "X1a"), ("Y2a",), dist="a"),
        "tb_y1b": I(("Tb",), ("Y1b",), ("X1b",), dist="b"),
        "tb_y2b": I(("Tb", "X1b"), ("Y2b",), dist="b"),
        "xb_y1b": I(("Xb",), ("Y1b",), ("X1b",), dist="b"),
        "xb_res": I(("Xb",), ("Y2b",), ("Tb", "X1b"), dist="b"),
        "xb_y2b": I(("Xb", "X1b"), ("Y2b",), dist="b"),
        "xb_dir": I(("Xb",), ("Y2b",), ("X1b",), dist="b"),
    }


def _template_parallel_inner():
    a = _parallel_atoms()
    return ("R0", "R1", "R2"), [
        ({"R0": 1}, [(1, a["ta_y1a"]), (1, a["tb_y1b"])]),
        ({"R0": 1}, [(1, a["ta_y2a"]), (1, a["tb_y2b"])]),
        ({"R0": 1, "R1": 1}, [(1, a["xa_y1a"]), (1, a["tb_y1b"])]),
        ({"R0": 1, "R2": 1}, [(1, a["ta_y2a"]), (1, a["xb_y2b"])]),
        ({"R0": 1, "R1": 1, "R2": 1},
         [(1, a["xa_y1a"]), (1, a["tb_y1b"]), (1, a["xb_res"])]),
        ({"R0": 1, "R1": 1, "R2": 1},
         [(1, a["xa_res"]), (1, a["ta_y2a"]), (1, a["xb_y2b"])]),
    ]


def _template_parallel_outer():
    a = _parallel_atoms()
    return ("R0", "R1", "R2"), [
        ({"R0": 1, "R1": 1}, [(1, a["xa_y1a"]), (1, a["xb_y1b"])]),
        ({"R0": 1, "R2": 1}, [(1, a["xa_y2a"]), (1, a["xb_y2b"])]),
        ({"R0": 1, "R1": 1, "R2": 1}, [(1, a["xa_y1a"]), (1, a["xb_dir"])]),
    ]


def _template_parallel_dm():
    a = _parallel_atoms()
    return ("R0", "R1"), [
        ({"R0": 1}, [(1, a["ta_y2a"]), (1, a["xb_y2b"])]),
        ({"R0": 1, "R1": 1}, [(1, a["xa_y1a"]), (1, a["xb_y1b"])]),
        ({"R0": 1, "R1": 1},
         [(1, a["xa_res"]), (1, a["ta_y2a"]), (1, a["xb_y2b"])]),
    ]


def _template_parallel_private():
    a = _parallel_atoms()
    return ("R1", "R2"), [
        ({"R1": 1}, [(1, a["xa_y1a"]), (1, a["tb_y1b"])]),
        ({"R2": 1}, [(1, a["ta_y2a"]), (1, a["xb_y2b"])]),
        ({"R1": 1, "R2": 1},
         [(1, a["xa_y1a"]), (1, a["tb_y1b"]), (1, a["xb_res"])]),
        ({"R1": 1, "R2": 1},
         [(1, a["xa_res"]), (1, a["ta_y2a"]), (1, a["xb_y2b"])]),
    ]


@dataclass(frozen=True)
class _TemplateInfo:
    rate_vars: tuple
    rows: tuple
    family: Callable
    composer: Callable


def _info(template_fn, family, composer):
    rate_vars, rows = template_fn()
    return _TemplateInfo(tuple(rate_vars), tuple(rows), family, composer)


TEMPLATES = {
    TheoremId.R1_PRIME: _info(_template_r1_prime, _family_full, _compose_full),
    TheoremId.R1: _info(_template_r1, _family_full, _compose_full),
    TheoremId.R2: _info(_template_r2, _family_full, _compose_full),
    TheoremId.R3: _info(_template_r3, _family_full, _compose_full),
    TheoremId.OUTER: _info(_template_outer, _family_outer, _compose_outer),
    TheoremId.BC_INNER: _info(_template_bc_inner, _family_bc_inner,
                              _compose_bc_inner),
    TheoremId.BC_OUTER: _info(_template_bc_outer, _family_bc_outer,
                              _compose_bc_outer),
    TheoremId.DM_BOUNDS: _info(_template_dm, _family_txx1, _compose_txx1),
    TheoremId.SEMIDET: _info(_template_semidet, _family_semidet,
                             _compose_semidet),
    TheoremId.DET: _info(_template_det, _family_txx1, _compose_txx1),
    TheoremId.DET_PRIVATE: _info(_template_det_private, _family_det_private,
                                 _compose_det_private),
    TheoremId.ORTHOGONAL: _info(_template_orthogonal, _family_orthogonal,
                                _compose_orthogonal),
    TheoremId.PARALLEL_INNER: _info(_template_parallel_inner,
                                    _parallel_family(True, True),
                                    _parallel_composer(True, True)),
    TheoremId.PARALLEL_OUTER: _info(_template_parallel_outer,
                                    _parallel_family(False, False),
                                    _parallel_composer(False, False)),
    TheoremId.PARALLEL_DM: _info(_template_parallel_dm,
                                 _parallel_family(True, False),
                                 _parallel_composer(True, False)),
    TheoremId.PARALLEL_PRIVATE: _info(_template_parallel_private,
                                      _parallel_family(True, True),
                                      _parallel_composer(True, True)),
}


_SYSTEM_CACHE = {}


def _template_system(info):
    cached = _SYSTEM_CACHE.get(id(info))
    if cached is not None:
        return cached
    atoms = []
    for _, terms in info.rows:
        for _, atom in terms:
            if atom not in atoms:
                atoms.append(atom)
    atom_names = [a.name for a in atoms]
    rows = []
    for rate_coeffs, terms in info.rows:
        rates = [rate_coeffs.get(v, 0) for v in info.rate_vars]
        acoef = [0] * len(atoms)
        for coeff, atom in terms:
            acoef[atoms.index(atom)] += coeff
        rows.append((rates, acoef))
    result = SymbolicIneqSystem(info.rate_vars, atom_names, rows), tuple(atoms)
    _SYSTEM_CACHE[id(info)] = result
    return result


def normalize_aux(theorem, channel, aux, cards=None):
    """Validate aux factors against the theorem's family; returns arrays."""
    info = TEMPLATES[theorem]
    if isinstance(aux, (AuxJoint, OuterJoint)):
        factors = aux.factors
    elif isinstance(aux, dict) and "sub_a" in aux:
        factors = tuple(aux["sub_a"]) + tuple(aux["sub_b"])
    else:
        factors = tuple(aux)
    cards = dict(cards or {})
    if not cards:
        cards = _infer_cards(theorem, factors)
    specs = info.family(channel, cards)
    if len(factors) != len(specs):
        raise InputError(
            f"{theorem.value} expects {len(specs)} factors "
            f"({[s.name for s in specs]}), got {len(factors)}")
    return tuple(_validate_factor(f, s) for f, s in zip(factors, specs))


def _infer_cards(theorem, factors):
    """Pull auxiliary cardinalities from the supplied factor shapes."""
    cards = {}
    try:
        if theorem in (TheoremId.R1_PRIME, TheoremId.R1, TheoremId.R2,
                       TheoremId.R3):
            cards = {"t": factors[1].shape[1], "u1": factors[2].shape[2],
                     "u2": factors[2].shape[3]}
        elif theorem == TheoremId.OUTER:
            cards = {"t": factors[1].shape[3], "u": factors[1].shape[4]}
        elif theorem == TheoremId.BC_INNER:
            cards = {"t": factors[0].shape[0], "u1": factors[1].shape[1],
                     "u2": factors[1].shape[2]}
        elif theorem == TheoremId.BC_OUTER:
            cards = {"t": factors[0].shape[0], "u": factors[0].shape[1],
                     "v": factors[0].shape[2]}
        elif theorem in (TheoremId.DM_BOUNDS, TheoremId.DET):
            cards = {"t": factors[1].shape[1]}
        elif theorem == TheoremId.SEMIDET:
            cards = {"t": factors[1].shape[1], "u": factors[2].shape[2]}
        elif theorem in (TheoremId.PARALLEL_INNER, TheoremId.PARALLEL_DM,
                         TheoremId.PARALLEL_PRIVATE):
            cards = {"t": factors[0].shape[0]}
    except (IndexError, AttributeError):
        raise InputError(f"factor shapes do not fit {theorem.value}")
    return cards


def eval_region(theorem, channel, aux, cards=None):
    """NumericPolytope of the theorem's template at a fixed auxiliary."""
    if theorem == TheoremId.DM_BOUNDS and _looks_like_dm_outer(aux):
        return _eval_dm_outer(channel, aux)
    info = TEMPLATES[theorem]
    factors = normalize_aux(theorem, channel, aux, cards)
    dists = info.composer(channel, factors)
    system, atoms = _template_system(info)
    cache = {}
    values = {a.name: a.evaluate(dists, cache) for a in atoms}
    return instantiate(system, values)


def _looks_like_dm_outer(aux):
    if isinstance(aux, OuterJoint):
        return True
    if isinstance(aux, (tuple, list)) and len(aux) == 2:
        first = np.asarray(aux[0])
        second = np.asarray(aux[1])
        return first.ndim == 2 and second.ndim == 4
    return False


def _eval_dm_outer(channel, aux):
    """Degraded-message-set template under the outer-bound joint family."""
    factors = (aux.factors if isinstance(aux, OuterJoint) else tuple(aux))
    specs = _family_dm_outer(channel, {"t": np.asarray(factors[1]).shape[3]})
    factors = tuple(_validate_factor(f, s) for f, s in zip(factors, specs))
    dists = _compose_dm_outer(channel, factors)
    info = TEMPLATES[TheoremId.DM_BOUNDS]
    system, atoms = _template_system(info)
    cache = {}
    values = {a.name: a.evaluate(dists, cache) for a in atoms}
    return instantiate(system, values)


def region_system(theorem):
    """The theorem's symbolic template (for serialization and inspection)."""
    system, _ = _template_system(TEMPLATES[theorem])
    return system


def restrict_to_null_relay(channel, tol=1e-9):
    """Drop a relay input that provably never matters (law constant in x1)."""
    ch = _need_rbc(channel)
    spread = np.abs(ch.law - ch.law[:, :1]).max()
    if spread > tol:
        raise InputError(
            f"law varies with x1 (max deviation {spread:.3e}); "
            "cannot reduce to a broadcast channel")
    return RbcChannel(ch.law[:, :1])


def bc_channel(p_y1y2_given_x):
    """Wrap a broadcast law p(y1,y2|x) as an RbcChannel with |X1| = 1."""
    law = np.asarray(p_y1y2_given_x, dtype=np.float64)
    return RbcChannel(law[:, None, :, :])


# --------------------------------------------------------------------------
# scalar evaluators and closed forms
# --------------------------------------------------------------------------

def eval_relay_pdf_rate(channel, aux, cards=None):
    """Partial decode-forward private rate at a fixed p(t, x1, x).

    Value: min of the cooperative bound I(X1,X;Y2) and the two-hop bound
    I(T;Y1|X1) + I(X;Y2|T,X1); the max over auxiliaries is a search problem.
    """
    factors = normalize_aux(TheoremId.DM_BOUNDS, channel, aux, cards)
    dist = _compose_txx1(channel, factors)["main"]
    coop = cond_mutual_info(dist, ["X1", "X"], ["Y2"])
    twohop = (cond_mutual_info(dist, ["T"], ["Y1"], ["X1"])
              + cond_mutual_info(dist, ["X"], ["Y2"], ["T", "X1"]))
    return min(coop, twohop)


def _ternary_entropy(alpha, beta):
    total = 0.0
    for p in (alpha, beta, 1.0 - alpha - beta):
        if p > 1e-15:
            total -= p * math.log2(p)
    return total


def blackwell_region(params):
    """(R1, R2) region of the Blackwell channel with an r-bit relay pipe."""
    if not isinstance(params, BlackwellParams):
        params = BlackwellParams(*params)
    from .info_measures import binary_entropy
    b1 = binary_entropy(min(params.beta, 1.0))
    b2 = params.r + binary_entropy(min(params.alpha, 1.0))
    b12 = _ternary_entropy(params.alpha, params.beta)
    bmax = b1 + b2 + b12 + 1.0
    return NumericPolytope(("R1", "R2"),
                           [[1, 0], [0, 1], [1, 1]], [b1, b2, b12], bmax)


def gaussian_orthogonal_region(params, alpha, beta):
    """Power-split (alpha, beta) slice of the Gaussian orthogonal region."""
    if not isinstance(params, GaussianOrthogonalParams):
        params = GaussianOrthogonalParams(*params)
    if not 0.0 <= alpha <= 1.0 or not 0.0 <= beta <= 1.0:
        raise InputError("alpha and beta must lie in [0, 1]")
    abar = 1.0 - alpha
    b1 = gaussian_cap(alpha * params.p / params.n1)
    b2 = gaussian_cap((params.p1 + abar * params.p
                       + 2.0 * math.sqrt(beta * abar * params.p * params.p1))
                      / params.n2)
    b3 = b1 + gaussian_cap(beta * abar * params.p / params.n2)
    bmax = b1 + b2 + b3 + 1.0
    return NumericPolytope(("R0", "R1", "R2"),
                           [[1, 1, 0], [1, 0, 1], [1, 1, 1]],
                           [b1, b2, b3], bmax)


def _simplex_grid(n_cells, denominator):
    """All distributions with masses that are multiples of 1/denominator."""
    out = []
    for comp in itertools.combinations_with_replacement(
            range(n_cells), denominator):
        counts = np.bincount(comp, minlength=n_cells)
        out.append(counts / denominator)
    return np.array(out)


def _sub_mi_terms(sub, p_joint):
    """I(X,X1;Y2), I(X;Y1|X1), I(X;Y2|X1) of one subchannel at p(x,x1)."""
    joint = np.einsum("ak,akyz->akyz", p_joint, sub.law)
    d = FiniteDist([("X", sub.cards["x"]), ("X1", sub.cards["x1"]),
                    ("Y1", sub.cards["y1"]), ("Y2", sub.cards["y2"])], joint)
    return (cond_mutual_info(d, ["X", "X1"], ["Y2"]),
            cond_mutual_info(d, ["X"], ["Y1"], ["X1"]),
            cond_mutual_info(d, ["X"], ["Y2"], ["X1"]))


class ParallelCapacity(NamedTuple):
    value: float
    law_a: np.ndarray
    law_b: np.ndarray


class SubchannelCapacities(NamedTuple):
    ca: float
    cb: float
    total: float


def parallel_relay_capacity(channel, grid):
    """Grid-maximized private-message capacity of a parallel relay channel."""
    if not isinstance(channel, ParallelRbcChannel):
        raise InputError("parallel_relay_capacity needs a ParallelRbcChannel")
    if grid < 2:
        raise InputError("grid must be >= 2")
    ca = channel.sub_a.cards
    cb = channel.sub_b.cards
    grids_a = _simplex_grid(ca["x"] * ca["x1"], grid)
    grids_b = _simplex_grid(cb["x"] * cb["x1"], grid)
    fa = np.array([_sub_mi_terms(channel.sub_a,
                                 g.reshape(ca["x"], ca["x1"]))
                   for g in grids_a])
    fb = np.array([_sub_mi_terms(channel.sub_b,
                                 g.reshape(cb["x"], cb["x1"]))
                   for g in grids_b])
    # min{ I(Xa,X1a;Y2a)+I(Xb,X1b;Y2b), I(Xa;Y1a|X1a)+I(Xb;Y2b|X1b) }
    coop = fa[:, 0][:, None] + fb[:, 0][None, :]
    hop = fa[:, 1][:, None] + fb[:, 2][None, :]
    value = np.minimum(coop, hop)
    ia, ib = np.unravel_index(np.argmax(value), value.shape)
    return ParallelCapacity(float(value[ia, ib]),
                            grids_a[ia].reshape(ca["x"], ca["x1"]),
                            grids_b[ib].reshape(cb["x"], cb["x1"]))


def subchannel_capacities(channel, grid):
    """Stand-alone capacities of the two degraded relay subchannels."""
    if not isinstance(channel, ParallelRbcChannel):
        raise InputError("subchannel_capacities needs a ParallelRbcChannel")
    if grid < 2:
        raise InputError("grid must be >= 2")
    report = check_structure(channel)
    if not report.sub_a.degraded_forward:
        raise PreconditionError(
            "sub_a fails the forward degradedness check "
            f"(residual {report.sub_a.residual_forward:.3e})")
    if not report.sub_b.degraded_reverse:
        raise PreconditionError(
            "sub_b fails the reverse degradedness check "
            f"(residual {report.sub_b.residual_reverse:.3e})")
    ca_cards = channel.sub_a.cards
    cb_cards = channel.sub_b.cards
    ca = 0.0
    for g in _simplex_grid(ca_cards["x"] * ca_cards["x1"], grid):
        coop, relay_hop, _ = _sub_mi_terms(
            channel.sub_a, g.reshape(ca_cards["x"], ca_cards["x1"]))
        ca = max(ca, min(coop, relay_hop))
    cb = 0.0
    for g in _simplex_grid(cb_cards["x"] * cb_cards["x1"], grid):
        _, _, direct = _sub_mi_terms(
            channel.sub_b, g.reshape(cb_cards["x"], cb_cards["x1"]))
        cb = max(cb, direct)
    return SubchannelCapacities(ca, cb, ca + cb)


def lemma1_transfer(point, d1, d2):
    """Move common rate onto the private rates: (r0-d1-d2, r1+d1, r2+d2)."""
    point = RateTriple(*point)
    if d1 < 0 or d2 < 0:
        raise InputError("transfer amounts must be >= 0")
    if d1 + d2 > point.r0 + 1e-12:
        raise InputError(
            f"transfer d1+d2 = {d1 + d2} exceeds common rate {point.r0}")
    return RateTriple(point.r0 - d1 - d2, point.r1 + d1, point.r2 + d2)


class CornerPoints(NamedTuple):
    point_a: RateTriple
    point_b: RateTriple
    case: int


def corner_points_r3(channel, aux, cards=None):
    """Corner points of the partial decode-forward region at a fixed aux.

    With m = min(I(T;Y1|X1), I(T,X1;Y2)) and s the active sum bound, the two
    candidate corners are A = (m, b01-m, s-b01) and B = (m, s-b02, b02-m)
    where b01, b02 are the R0+R1 and R0+R2 bounds. Case convention (the
    five shapes, classified from the four bound values):
      1: s >= b01 + b02         (sum bound never active)
      2: b02 <= s <  b01        (only corner B survives; A folds onto a face)
      3: b01 <= s <  b02        (only corner A survives)
      4: s <  min(b01, b02)     (both corners fold)
      5: max(b01, b02) <= s < b01 + b02   (both corners exist)
    Negative corner components are clamped to 0.
    """
    info = TEMPLATES[TheoremId.R3]
    factors = normalize_aux(TheoremId.R3, channel, aux, cards)
    dists = info.composer(channel, factors)
    a1, a2, a3, a4, a5 = (atom.evaluate(dists) for atom in _r_family_atoms())
    t1 = cond_mutual_info(dists["main"], ["T"], ["Y1"], ["X1"])
    t2 = cond_mutual_info(dists["main"], ["T", "X1"], ["Y2"])
    m = min(t1, t2)
    b01, b02 = a2, a4
    s = min(a2 + a3 - a5, a1 + a4 - a5)
    tol = 1e-12
    if s >= b01 + b02 - tol:
        case = 1
    elif s >= b01 - tol and s >= b02 - tol:
        case = 5
    elif s >= b02 - tol:
        case = 2
    elif s >= b01 - tol:
        case = 3
    else:
        case = 4
    clamp = lambda v: max(v, 0.0)
    point_a = RateTriple(clamp(m), clamp(b01 - m), clamp(s - b01))
    point_b = RateTriple(clamp(m), clamp(s - b02), clamp(b02 - m))
    return CornerPoints(point_a, point_b, case)


# --------------------------------------------------------------------------
# frontier search over auxiliary distributions
# --------------------------------------------------------------------------

CORNER_CAP = 256
GRID_DENOMS = (1, 2, 3)


def _det_factor(spec, choices):
    arr = np.zeros((spec.n_ctx, spec.n_out))
    arr[np.arange(spec.n_ctx), choices] = 1.0
    return arr.reshape(spec.shape)


def _enumerate_det_corners(specs, cap):
    counts = [s.n_out ** s.n_ctx for s in specs]
    total = 1
    for c in counts:
        total *= c
        if total > cap:
            return None
    combos = []
    per_factor = []
    for spec in specs:
        rows = list(itertools.product(range(spec.n_out), repeat=spec.n_ctx))
        per_factor.append([_det_factor(spec, np.array(r)) for r in rows])
    for combo in itertools.product(*per_factor):
        combos.append(tuple(combo))
    return combos


def _random_det_tuple(specs, rng):
    return tuple(_det_factor(s, rng.integers(0, s.n_out, size=s.n_ctx))
                 for s in specs)


def _grid_tuple(specs, rng):
    # denominator 1 rows are point masses, so the grid stream also yields
    # tuples mixing deterministic factors with coarse interior ones
    factors = []
    for spec in specs:
        denom = int(rng.choice(GRID_DENOMS))
        rows = rng.multinomial(denom, np.full(spec.n_out, 1.0 / spec.n_out),
                               size=spec.n_ctx) / denom
        factors.append(rows.reshape(spec.shape))
    return tuple(factors)


def _dirichlet_tuple(specs, rng):
    factors = []
    for spec in specs:
        rows = rng.dirichlet(np.ones(spec.n_out), size=spec.n_ctx)
        factors.append(rows.reshape(spec.shape))
    return tuple(factors)


def _uniform_tuple(specs):
    return tuple(np.full(s.shape, 1.0 / s.n_out) for s in specs)


def iter_aux_samples(specs, budget, seed):
    """Deterministic sample stream: uniform + corners + grid + Dirichlet.

    The Dirichlet and grid streams are prefix-stable in the budget, so
    enlarging the budget with the same seed extends rather than reshuffles
    the sample set.
    """
    ss = np.random.SeedSequence(seed).spawn(3)
    samples = [("uniform", _uniform_tuple(specs))]
    corners = _enumerate_det_corners(specs, CORNER_CAP)
    if corners is None:
        rng = np.random.default_rng(ss[0])
        corners = [_random_det_tuple(specs, rng) for _ in range(CORNER_CAP)]
    samples.extend(("corner", c) for c in corners)
    n_grid = min(budget // 4, 128) if budget >= 8 else 0
    rng_grid = np.random.default_rng(ss[1])
    samples.extend(("grid", _grid_tuple(specs, rng_grid))
                   for _ in range(n_grid))
    rng_dir = np.random.default_rng(ss[2])
    samples.extend(("dirichlet", _dirichlet_tuple(specs, rng_dir))
                   for _ in range(budget))
    return samples


def _embed_vertices(rate_vars, verts):
    """Map polytope vertices into (r0, r1, r2) coordinates."""
    if verts.shape[0] == 0:
        return np.zeros((0, 3))
    out = np.zeros((verts.shape[0], 3))
    slots = {"R0": 0, "R1": 1, "R2": 2}
    for j, name in enumerate(rate_vars):
        out[:, slots[name]] = verts[:, j]
    return out


def convex_closure(cloud, seed=0, mixtures=2000):
    """Augment a cloud with random convex combinations of its Pareto points.

    Time sharing only convexifies; sampled mixtures realize that closure in
    point-cloud form without an explicit time-sharing axis.
    """
    base = pareto_filter(cloud)
    n = len(base)
    if n < 2:
        return base
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, size=mixtures)
    j = rng.integers(0, n, size=mixtures)
    lam = rng.uniform(0.0, 1.0, size=mixtures)[:, None]
    mixed = lam * base.points[i] + (1 - lam) * base.points[j]
    merged = RegionCloud(np.vstack([base.points, mixed]), base.meta,
                         np.concatenate([base.sample_ids,
                                         base.sample_ids[i]]))
    return pareto_filter(merged)


def search_frontier(theorem, channel, cards=None, budget=200, weights=None,
                    seed=0, threads=1):
    """Pareto frontier of the union of per-sample regions.

    Samples auxiliary factor tuples (a uniform tuple, deterministic corner
    factors, a coarse simplex-grid subset, and `budget` Dirichlet(1) draws),
    evaluates the theorem template on each, and unions the vertex sets.
    Deterministic given the seed. Outer-bound templates additionally get a
    sampled convex closure (time sharing).
    """
    if budget < 1:
        raise InputError("budget must be >= 1")
    cards = dict(cards or {})
    info = TEMPLATES[theorem]
    specs = info.family(channel, cards)
    samples = iter_aux_samples(specs, budget, seed)

    def eval_one(item):
        _, factors = item
        poly = eval_region(theorem, channel, factors, cards)
        return _embed_vertices(poly.var_names, vertices(poly))

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vertex_sets = list(pool.map(eval_one, samples))
    else:
        vertex_sets = [eval_one(s) for s in samples]
    points = np.vstack([v for v in vertex_sets if v.size]) \
        if any(v.size for v in vertex_sets) else np.zeros((0, 3))
    ids = np.concatenate([np.full(len(v), i, dtype=np.int64)
                          for i, v in enumerate(vertex_sets) if v.size]) \
        if points.size else np.zeros(0, dtype=np.int64)
    meta = {
        "source": f"search_frontier:{theorem.value}",
        "theorem": theorem.value,
        "seed": seed,
        "budget": budget,
        "cards": dict(sorted(cards.items())) or "default",
        "kind": "outer-approx" if theorem in OUTER_IDS else "inner",
        "n_samples": len(samples),
    }
    cloud = pareto_filter(RegionCloud(points, meta, ids))
    if theorem in OUTER_IDS:
        cloud = convex_closure(cloud, seed=seed + 1)
        cloud.meta.update(meta)
        cloud.meta["convex_closure"] = "sampled-mixtures"
    if weights:
        cloud.meta["supports"] = {
            ",".join(f"{w:g}" for w in direction): cloud.support(direction)
            for direction in weights}
    return cloud


def blackwell_frontier(r, grid):
    """Frontier curve of the union of Blackwell regions over an input grid.

    Sweeps (alpha, beta) over the simplex grid {i/grid, j/grid : i+j <= grid}
    and reports, for each R1 = k/grid on [0, 1], the largest R2 any grid
    region allows. Points are (0, R1, R2) triples; sample ids index the
    maximizing grid point (row-major). Evaluating at fixed R1 coordinates
    makes frontiers for different r directly comparable point by point.
    """
    if grid < 2:
        raise InputError("grid must be >= 2")
    if r < 0:
        raise InputError("r must be >= 0")
    from .info_measures import binary_entropy
    h_alpha, h_beta, tern, ids = [], [], [], []
    for i in range(grid + 1):
        for j in range(grid + 1 - i):
            alpha, beta = i / grid, j / grid
            h_alpha.append(binary_entropy(alpha))
            h_beta.append(binary_entropy(beta))
            tern.append(_ternary_entropy(alpha, beta))
            ids.append(i * (grid + 1) + j)
    h_alpha = np.array(h_alpha)
    h_beta = np.array(h_beta)
    tern = np.array(tern)
    ids = np.array(ids, dtype=np.int64)
    pts, srcs = [], []
    for k in range(grid + 1):
        r1 = k / grid
        feasible = h_beta >= r1 - 1e-12
        if not np.any(feasible):
            continue
        r2 = np.minimum(r + h_alpha[feasible], tern[feasible] - r1)
        best = int(np.argmax(r2))
        pts.append((0.0, r1, max(float(r2[best]), 0.0)))
        srcs.append(ids[feasible][best])
    cloud = RegionCloud(np.array(pts), {"source": "blackwell_frontier",
                                        "r": r, "grid": grid},
                        np.array(srcs, dtype=np.int64))
    return pareto_filter(cloud)


def gaussian_frontier(params, grid):
    """Union of Gaussian orthogonal regions over an (alpha, beta) grid."""
    if grid < 2:
        raise InputError("grid must be >= 2")
    pts, ids = [], []
    sample = 0
    for i in range(grid + 1):
        for j in range(grid + 1):
            poly = gaussian_orthogonal_region(params, i / grid, j / grid)
            verts = vertices(poly)
            if verts.size:
                pts.append(verts)
                ids.append(np.full(len(verts), sample, dtype=np.int64))
            sample += 1
    cloud = RegionCloud(np.vstack(pts), {"source": "gaussian_frontier",
                                         "grid": grid},
                        np.concatenate(ids))
    return pareto_filter(cloud)


def subchannel_private_regions(channel, cards=None, budget=200, seed=0):
    """Sampled private-rate capacity regions of the two subchannels.

    Subchannel I is a degraded relay broadcast channel (its region needs the
    relay-decoded auxiliary); subchannel II is reversely degraded (direct
    decoding only). Returned as (R1, R2) clouds embedded in rate triples.
    """
    if not isinstance(channel, ParallelRbcChannel):
        raise InputError("needs a ParallelRbcChannel")
    nt = (cards or {}).get("t", 2)
    rows_a = [
        ({"R1": 1}, [(1, I(("X",), ("Y1",), ("T", "X1")))]),
        ({"R2": 1}, [(1, I(("T", "X1"), ("Y2",)))]),
        ({"R2": 1}, [(1, I(("T",), ("Y1",), ("X1",)))]),
    ]
    rows_b = [
        ({"R1": 1}, [(1, I(("T",), ("Y1",), ("X1",)))]),
        ({"R2": 1}, [(1, I(("X",), ("Y2",), ("T", "X1")))]),
    ]
    clouds = []
    for sub, rows in ((channel.sub_a, rows_a), (channel.sub_b, rows_b)):
        info = _TemplateInfo(("R1", "R2"), tuple(rows), _family_txx1,
                             _compose_txx1)
        specs = info.family(sub, {"t": nt})
        system, atoms = _template_system(info)
        pts = []
        ids = []
        for i, (_, factors) in enumerate(
                iter_aux_samples(specs, budget, seed)):
            valid = tuple(_validate_factor(f, s)
                          for f, s in zip(factors, specs))
            dists = info.composer(sub, valid)
            cache = {}
            values = {a.name: a.evaluate(dists, cache) for a in atoms}
            verts = vertices(instantiate(system, values))
            if verts.size:
                pts.append(_embed_vertices(("R1", "R2"), verts))
                ids.append(np.full(len(verts), i, dtype=np.int64))
        cloud = RegionCloud(np.vstack(pts) if pts else np.zeros((0, 3)),
                            {"source": "subchannel_private_region"},
                            np.concatenate(ids) if ids else None)
        clouds.append(pareto_filter(cloud))
    return clouds[0], clouds[1]
