import json

import numpy as np
import pytest

from rbcbounds.channel_model import (
    BlackwellParams, GaussianOrthogonalParams, OrthogonalRbcChannel,
    ParallelRbcChannel, RbcChannel, build_blackwell, build_example2,
    channel_from_jsonable, check_structure, load_channel, rbc_from_factors,
    save_channel)
from rbcbounds.errors import InputError
from rbcbounds.info_measures import FiniteDist, binary_entropy, cond_mutual_info, entropy


def random_rbc(rng, nx=2, nx1=2, ny1=2, ny2=2):
    law = rng.dirichlet(np.ones(ny1 * ny2), size=(nx, nx1))
    return RbcChannel(law.reshape(nx, nx1, ny1, ny2))


def test_load_valid_rbc(tmp_path):
    law = [[[["0.5", "0.1"], ["0.2", "0.2"]],
            [["1/4", "1/4"], ["1/4", "1/4"]]],
           [[["0", "0"], ["0", "1"]],
            [["0.3", "0.3"], ["0.3", "0.1"]]]]
    doc = {"kind": "rbc", "cards": {"x": 2, "x1": 2, "y1": 2, "y2": 2},
           "law": law}
    path = tmp_path / "ch.json"
    path.write_text(json.dumps(doc))
    ch = load_channel(path)
    assert isinstance(ch, RbcChannel)
    assert ch.law[0, 1, 0, 0] == 0.25


def test_load_names_bad_slice(tmp_path):
    doc = {"kind": "rbc", "cards": {"x": 1, "x1": 2, "y1": 1, "y2": 2},
           "law": [[[["0.5", "0.5"]], [["0.5", "0.4"]]]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InputError, match=r"x=0, x1=1"):
        load_channel(path)


def test_load_orthogonal(tmp_path):
    doc = {"kind": "orthogonal",
           "cards": {"xr": 2, "xd": 2, "x1": 2, "y1": 2, "y2": 2},
           "law1": [[["1", "0"], ["1", "0"]], [["0", "1"], ["0", "1"]]],
           "law2": [[["0.9", "0.1"], ["0.9", "0.1"]],
                    [["0.1", "0.9"], ["0.1", "0.9"]]]}
    path = tmp_path / "orth.json"
    path.write_text(json.dumps(doc))
    ch = load_channel(path)
    assert isinstance(ch, OrthogonalRbcChannel)
    joint = ch.joint_law()
    np.testing.assert_allclose(
        joint, np.einsum("rky,dkz->rdkyz", ch.law1, ch.law2))


def test_roundtrip_decimal_strings(tmp_path):
    law = [[[["0.5", "0.1"], ["0.25", "0.15"]]]]
    doc = {"kind": "rbc", "cards": {"x": 1, "x1": 1, "y1": 2, "y2": 2},
           "law": law}
    p1 = tmp_path / "a.json"
    p1.write_text(json.dumps(doc))
    ch = load_channel(p1)
    p2 = tmp_path / "b.json"
    save_channel(ch, p2)
    saved = json.loads(p2.read_text())
    assert saved["law"] == law


def test_inconsistent_cards(tmp_path):
    doc = {"kind": "rbc", "cards": {"x": 2, "x1": 1, "y1": 2, "y2": 2},
           "law": [[[["1", "0"], ["0", "0"]]]]}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(InputError, match="cards mismatch"):
        load_channel(path)


def test_blackwell_r0_columns():
    ch = build_blackwell(0)
    assert ch.cards == {"x": 3, "x1": 1, "y1": 2, "y2": 2}
    cols = {}
    for x in range(3):
        y1, y2 = np.unravel_index(np.argmax(ch.law[x, 0]), (2, 2))
        cols[x] = (int(y1), int(y2))
    assert cols == {0: (0, 1), 1: (1, 0), 2: (0, 0)}


def test_blackwell_r1_cards_and_determinism():
    ch = build_blackwell(1)
    assert ch.cards == {"x": 3, "x1": 2, "y1": 2, "y2": 4}
    rep = check_structure(ch)
    assert rep.deterministic and rep.semideterministic
    with pytest.raises(InputError):
        build_blackwell(4)


def test_blackwell_y1_entropy_matches_formula():
    rng = np.random.default_rng(7)
    for r_bits in (0, 1, 2):
        ch = build_blackwell(r_bits)
        px = rng.dirichlet(np.ones(3))
        beta = px[1]
        joint = np.einsum("x,xab->ab", px, ch.law[:, 0])
        d = FiniteDist([("y1", 2), ("y2", ch.cards["y2"])], joint)
        assert entropy(d, ["y1"]) == pytest.approx(
            binary_entropy(beta), abs=1e-12)


def test_example2_structure_and_zero_terms():
    ch = build_example2()
    rep = check_structure(ch)
    assert rep.sub_a.degraded_forward
    assert rep.sub_b.degraded_reverse
    assert rep.unmatched_degraded
    rng = np.random.default_rng(11)
    for _ in range(5):
        pa = rng.dirichlet(np.ones(4)).reshape(2, 2)
        joint_a = np.einsum("ak,akbc->akbc", pa, ch.sub_a.law)
        da = FiniteDist([("xa", 2), ("x1a", 2), ("y1a", 2), ("y2a", 1)],
                        joint_a)
        assert cond_mutual_info(da, ["xa", "x1a"], ["y2a"]) == pytest.approx(
            0.0, abs=1e-12)
        pb = rng.dirichlet(np.ones(4)).reshape(2, 2)
        joint_b = np.einsum("ak,akbc->akbc", pb, ch.sub_b.law)
        db = FiniteDist([("xb", 2), ("x1b", 2), ("y1b", 2), ("y2b", 2)],
                        joint_b)
        assert cond_mutual_info(db, ["xb"], ["y2b"], ["x1b"]) == pytest.approx(
            0.0, abs=1e-12)


def test_bsc_noise_not_semideterministic():
    law = np.zeros((2, 1, 2, 1))
    law[:, 0, :, 0] = [[0.95, 0.05], [0.05, 0.95]]
    rep = check_structure(RbcChannel(law))
    assert not rep.semideterministic
    assert not rep.deterministic


def test_degraded_random_factors_100():
    rng = np.random.default_rng(13)
    for _ in range(100):
        p_y1 = rng.dirichlet(np.ones(2), size=(2, 2))
        p_y2 = rng.dirichlet(np.ones(2), size=(2, 2))
        ch = rbc_from_factors(p_y1, p_y2)
        assert check_structure(ch).degraded_forward


def test_parallel_rejects_undegraded():
    rng = np.random.default_rng(17)
    noisy = random_rbc(rng)
    # generic random laws are not degraded either way
    with pytest.raises(InputError, match="degraded"):
        ParallelRbcChannel(noisy, noisy)


def test_param_validation():
    with pytest.raises(InputError):
        GaussianOrthogonalParams(1.0, 1.0, 0.0, 1.0)
    with pytest.raises(InputError):
        BlackwellParams(r=0.5, alpha=0.7, beta=0.5)
    BlackwellParams(r=0.0, alpha=1 / 3, beta=1 / 3)


def test_unknown_kind():
    with pytest.raises(InputError, match="unknown channel kind"):
        channel_from_jsonable({"kind": "weird"})
