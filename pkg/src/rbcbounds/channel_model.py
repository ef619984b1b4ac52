"""Channel representations, builders, loaders, and structural checkers.

The base object is the relay broadcast channel law p(y1, y2 | x, x1) where x
is the source input, x1 the relay input (relaying destination 1's signal to
destination 2), and y1/y2 the outputs at destinations 1 and 2. Orthogonal and
parallel specializations factor that law.
"""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError

SLICE_TOL = 1e-12
STRUCT_TOL = 1e-9


def _parse_prob(value, where):
    if isinstance(value, (int, float)):
        out = float(value)
    elif isinstance(value, str):
        try:
            out = float(Fraction(value)) if "/" in value else float(value)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad probability {value!r} at {where}")
    else:
        raise InputError(f"bad probability {value!r} at {where}")
    if out < 0:
        raise InputError(f"negative probability {out} at {where}")
    return out


def _parse_tensor(nested, shape, where):
    arr = np.empty(shape, dtype=np.float64)
    def fill(node, idx):
        depth = len(idx)
        if depth == len(shape):
            arr[idx] = _parse_prob(node, f"{where}{list(idx)}")
            return
        if not isinstance(node, list) or len(node) != shape[depth]:
            raise InputError(
                f"{where}{list(idx)} should be a list of length "
                f"{shape[depth]} (cards mismatch)")
        for i, sub in enumerate(node):
            fill(sub, idx + (i,))
    fill(nested, ())
    return arr


def _check_stochastic(law, cond_axes, what):
    """Every conditional slice over the trailing axes must sum to 1."""
    sums = law.sum(axis=tuple(range(len(cond_axes), law.ndim)))
    bad = np.argwhere(np.abs(sums - 1.0) > SLICE_TOL)
    if bad.size:
        idx = tuple(int(i) for i in bad[0])
        ctx = ", ".join(f"{n}={v}" for n, v in zip(cond_axes, idx))
        raise InputError(
            f"{what} slice ({ctx}) sums to {sums[idx]!r}, expected 1")


class RbcChannel:
    """General relay broadcast channel p(y1, y2 | x, x1).

    law is indexed [x, x1, y1, y2]; every (x, x1) slice is a distribution.
    """

    kind = "rbc"

    def __init__(self, law):
        law = np.asarray(law, dtype=np.float64)
        if law.ndim != 4:
            raise InputError(f"rbc law must be 4-dimensional, got {law.shape}")
        if np.any(law < 0):
            raise InputError("rbc law has a negative entry")
        _check_stochastic(law, ("x", "x1"), "rbc law")
        self.law = law
        self.law.setflags(write=False)

    @property
    def cards(self):
        return {"x": self.law.shape[0], "x1": self.law.shape[1],
                "y1": self.law.shape[2], "y2": self.law.shape[3]}

    def to_jsonable(self):
        return {"kind": "rbc", "cards": self.cards,
                "law": _tensor_to_strings(self.law)}


class OrthogonalRbcChannel:
    """Orthogonal RBC: p(y1,y2|xR,xD,x1) = p(y1|xR,x1) p(y2|xD,x1)."""

    kind = "orthogonal"

    def __init__(self, law1, law2):
        law1 = np.asarray(law1, dtype=np.float64)
        law2 = np.asarray(law2, dtype=np.float64)
        if law1.ndim != 3 or law2.ndim != 3:
            raise InputError("orthogonal laws must be 3-dimensional")
        if np.any(law1 < 0) or np.any(law2 < 0):
            raise InputError("orthogonal law has a negative entry")
        if law1.shape[1] != law2.shape[1]:
            raise InputError(
                f"x1 cards disagree: law1 {law1.shape[1]}, law2 {law2.shape[1]}")
        _check_stochastic(law1, ("xr", "x1"), "law1")
        _check_stochastic(law2, ("xd", "x1"), "law2")
        self.law1 = law1   # [xR, x1, y1]
        self.law2 = law2   # [xD, x1, y2]
        self.law1.setflags(write=False)
        self.law2.setflags(write=False)

    @property
    def cards(self):
        return {"xr": self.law1.shape[0], "xd": self.law2.shape[0],
                "x1": self.law1.shape[1], "y1": self.law1.shape[2],
                "y2": self.law2.shape[2]}

    def joint_law(self):
        """Induced p(y1, y2 | xR, xD, x1) as a 5-d tensor [xR, xD, x1, y1, y2]."""
        return np.einsum("rky,dkz->rdkyz", self.law1, self.law2)

    def to_jsonable(self):
        return {"kind": "orthogonal", "cards": self.cards,
                "law1": _tensor_to_strings(self.law1),
                "law2": _tensor_to_strings(self.law2)}


class ParallelRbcChannel:
    """Two orthogonal RBC subchannels, unmatched degraded per the usual pattern.

    sub_a must be degraded toward destination 2 (y2a a processed y1a) and
    sub_b reversely degraded; pass check_degraded=False to defer the check
    (the generic inner/outer evaluators do not need it).
    """

    kind = "parallel"

    def __init__(self, sub_a, sub_b, check_degraded=True):
        if not isinstance(sub_a, RbcChannel) or not isinstance(sub_b, RbcChannel):
            raise InputError("parallel subchannels must be RbcChannel")
        self.sub_a = sub_a
        self.sub_b = sub_b
        if check_degraded:
            rep = check_structure(self)
            if not rep.sub_a.degraded_forward:
                raise InputError(
                    "sub_a is not forward-degraded "
                    f"(max residual {rep.sub_a.residual_forward:.3e})")
            if not rep.sub_b.degraded_reverse:
                raise InputError(
                    "sub_b is not reverse-degraded "
                    f"(max residual {rep.sub_b.residual_reverse:.3e})")

    def to_jsonable(self):
        return {"kind": "parallel",
                "sub_a": self.sub_a.to_jsonable(),
                "sub_b": self.sub_b.to_jsonable()}


@dataclass(frozen=True)
class GaussianOrthogonalParams:
    """Powers and noise variances of the Gaussian orthogonal RBC."""
    p: float    # source power budget (shared by the two source inputs)
    p1: float   # relay power
    n1: float   # noise variance at destination 1
    n2: float   # noise variance at destination 2

    def __post_init__(self):
        for name in ("p", "p1", "n1", "n2"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be > 0")


@dataclass(frozen=True)
class BlackwellParams:
    """Input distribution (alpha, beta) and relay-pipe capacity r in bits."""
    r: float
    alpha: float
    beta: float

    def __post_init__(self):
        if self.r < 0:
            raise InputError("r must be >= 0")
        if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta > 1 + 1e-12:
            raise InputError("need alpha >= 0, beta >= 0, alpha + beta <= 1")


def _tensor_to_strings(arr):
    def conv(node):
        if isinstance(node, np.ndarray) and node.ndim:
            return [conv(sub) for sub in node]
        return repr(float(node))
    return conv(arr)


def load_channel(path):
    """Load and validate a channel file; dispatches on its `kind` field."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read channel file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed channel file {path}: {exc}")
    return channel_from_jsonable(doc)


def channel_from_jsonable(doc):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise InputError("channel object needs a 'kind' field")
    kind = doc["kind"]
    if kind == "rbc":
        cards = doc.get("cards", {})
        shape = tuple(int(cards[k]) for k in ("x", "x1", "y1", "y2"))
        return RbcChannel(_parse_tensor(doc["law"], shape, "law"))
    if kind == "orthogonal":
        cards = doc.get("cards", {})
        law1 = _parse_tensor(doc["law1"],
                             tuple(int(cards[k]) for k in ("xr", "x1", "y1")),
                             "law1")
        law2 = _parse_tensor(doc["law2"],
                             tuple(int(cards[k]) for k in ("xd", "x1", "y2")),
                             "law2")
        return OrthogonalRbcChannel(law1, law2)
    if kind == "parallel":
        return ParallelRbcChannel(channel_from_jsonable(doc["sub_a"]),
                                  channel_from_jsonable(doc["sub_b"]))
    raise InputError(f"unknown channel kind {kind!r}")


def save_channel(channel, path):
    """Write a channel file atomically (temp file + rename)."""
    write_text_atomic(path, json.dumps(channel.to_jsonable(), indent=1) + "\n")


def write_text_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_blackwell(r_bits):
    """Blackwell broadcast channel plus a noiseless r_bits-wide relay pipe.

    X ∈ {0,1,2} with Y1 = 1{X=1} and Y2 = (1{X=0}, X1); the pipe output is
    packed into Y2 as y2 = 1{x=0} * 2**r_bits + x1. Y1 ignores X1.
    """
    if r_bits not in (0, 1, 2, 3):
        raise InputError(f"r_bits must be in 0..3, got {r_bits}")
    n1 = 2 ** r_bits
    law = np.zeros((3, n1, 2, 2 * n1))
    for x in range(3):
        y1 = 1 if x == 1 else 0
        y2bc = 1 if x == 0 else 0
        for x1 in range(n1):
            law[x, x1, y1, y2bc * n1 + x1] = 1.0
    return RbcChannel(law)


def build_example2():
    """Parallel channel whose subchannel capacities are 0 but joint capacity 1.

    Subchannel I: Y1a = Xa, Y2a = 0 (relay hears, destination 2 does not).
    Subchannel II: Y2b = X1b, Y1b = Y2b (relay pipe only).
    All alphabets binary.
    """
    law_a = np.zeros((2, 2, 2, 1))
    for xa in range(2):
        for x1a in range(2):
            law_a[xa, x1a, xa, 0] = 1.0
    law_b = np.zeros((2, 2, 2, 2))
    for xb in range(2):
        for x1b in range(2):
            law_b[xb, x1b, x1b, x1b] = 1.0
    return ParallelRbcChannel(RbcChannel(law_a), RbcChannel(law_b))


def rbc_from_factors(p_y1, p_y2_given_y1):
    """Compose a forward-degraded channel p(y1|x,x1) * p(y2|y1,x1).

    p_y1 is [x, x1, y1]; p_y2_given_y1 is [y1, x1, y2].
    """
    law = np.einsum("abc,cbd->abcd", np.asarray(p_y1, dtype=float),
                    np.asarray(p_y2_given_y1, dtype=float))
    return RbcChannel(law)


@dataclass(frozen=True)
class StructureReport:
    semideterministic: bool
    deterministic: bool
    degraded_forward: bool
    degraded_reverse: bool
    residual_forward: float
    residual_reverse: float


@dataclass(frozen=True)
class ParallelStructureReport:
    sub_a: StructureReport
    sub_b: StructureReport

    @property
    def unmatched_degraded(self):
        return self.sub_a.degraded_forward and self.sub_b.degraded_reverse


def _degradation_residual(law):
    """Max residual of the best p(y2|y1,x1) explaining law as a degradation.

    Solved per (x1, y1) in closed form: the least-squares q(y2|y1) given the
    linear system p(y1|x,x1) q(y2|y1) = p(y1,y2|x,x1) over x, which also
    decides feasibility when the Y1 columns are linearly dependent.
    """
    nx, nx1, ny1, ny2 = law.shape
    p_y1 = law.sum(axis=3)           # [x, x1, y1]
    worst = 0.0
    for x1 in range(nx1):
        for y1 in range(ny1):
            weights = p_y1[:, x1, y1]
            denom = float(np.dot(weights, weights))
            if denom <= 0.0:
                continue  # unreachable y1: any stochastic row works
            q = weights @ law[:, x1, y1, :] / denom
            resid = np.abs(np.outer(weights, q) - law[:, x1, y1, :]).max()
            worst = max(worst, float(resid), abs(float(q.sum()) - 1.0))
    return worst


def check_structure(channel):
    """Structural flags verified to 1e-9; parallel channels get per-sub reports."""
    if isinstance(channel, ParallelRbcChannel):
        return ParallelStructureReport(check_structure(channel.sub_a),
                                       check_structure(channel.sub_b))
    if isinstance(channel, OrthogonalRbcChannel):
        raise InputError("check_structure takes an RbcChannel or ParallelRbcChannel")
    law = channel.law
    p_y1 = law.sum(axis=3)
    semidet = bool(np.all(np.minimum(np.abs(p_y1), np.abs(p_y1 - 1.0))
                          < STRUCT_TOL))
    det = bool(np.all(np.minimum(np.abs(law), np.abs(law - 1.0)) < STRUCT_TOL))
    res_fwd = _degradation_residual(law)
    res_rev = _degradation_residual(law.transpose(0, 1, 3, 2))
    return StructureReport(
        semideterministic=semidet,
        deterministic=det,
        degraded_forward=res_fwd < STRUCT_TOL,
        degraded_reverse=res_rev < STRUCT_TOL,
        residual_forward=res_fwd,
        residual_reverse=res_rev,
    )
