import numpy as np
import pytest

from rbcbounds.errors import (InfeasibleRelationsError, InputError,
                              UnsupportedDimensionError)
from rbcbounds.rate_polytope import (
    AtomRelation, NumericPolytope, RateTriple, RegionCloud, SymbolicIneqSystem,
    cloud_dominates, equivalent_under, fme_eliminate, instantiate,
    load_system, minkowski_sum, pareto_filter, save_system, substitute,
    systems, vertex_sets_match, vertices)


def atom_vals(a1, a2, a3, a4, a5):
    return dict(zip(systems.ATOM_NAMES, (a1, a2, a3, a4, a5)))


# ---------------------------------------------------------------- symbolic

def test_fme_binned_system_projects_to_eight_bounds():
    proj = fme_eliminate(systems.binned_rate_system(), ["R1p", "R2p"])
    assert all(ineq.rates[3] == 0 and ineq.rates[4] == 0
               for ineq in proj.inequalities)
    reduced = proj.restrict(("R0", "R1", "R2"))
    assert len(reduced.inequalities) == 8
    assert reduced.same_inequalities(systems.projected_rate_system())


def test_fme_lower_bounds_only_victim_vanishes():
    sys_ = SymbolicIneqSystem(
        ("R1", "V"), ("A",),
        [((1, -1), (1,)),    # R1 - V <= A  (lower bound on V)
         ((1, 0), (1,))])    # R1 <= A
    out = fme_eliminate(sys_, ["V"])
    assert len(out.inequalities) == 1
    assert out.inequalities[0].rates == (1, 0)


def test_fme_unknown_victim():
    with pytest.raises(InputError):
        fme_eliminate(systems.projected_rate_system(), ["nope"])


def test_substitute_identity():
    eq4 = systems.projected_rate_system()
    ident = {v: {v: 1} for v in eq4.rate_vars}
    out = substitute(eq4, ident, new_vars=eq4.rate_vars)
    assert out.same_inequalities(eq4)


def test_substitute_transfer_examples():
    sub = systems.transferred_rate_system()
    by_key = {ineq.key(): ineq for ineq in sub.inequalities}
    # R0 + R1 <= A2 becomes R0 + R1 + D2 <= A2
    assert ((1, 1, 0, 0, 1), (0, 1, 0, 0, 0)) in by_key
    # R2 <= A3 becomes R2 - D2 <= A3
    assert ((0, 0, 1, 0, -1), (0, 0, 1, 0, 0)) in by_key


def test_substitute_unmapped_variable():
    with pytest.raises(InputError):
        substitute(systems.projected_rate_system(), {"R0": {"R0": 1}})


def test_system_serialization_roundtrip(tmp_path):
    eq3 = systems.binned_rate_system()
    path = tmp_path / "eq3.sys"
    save_system(eq3, path)
    loaded = load_system(path)
    assert loaded.same_inequalities(eq3)
    assert loaded.rate_vars == eq3.rate_vars
    assert loaded.atoms == eq3.atoms


def test_duplicates_and_tautologies_removed():
    sys_ = SymbolicIneqSystem(
        ("R1",), ("A",),
        [((1,), (1,)), ((2,), (2,)),        # same row after scaling
         ((-1,), (0,)),                     # structural nonneg, trivially true
         ((0,), (1,))])                     # 0 <= A, trivially true
    assert len(sys_.inequalities) == 1


# ----------------------------------------------------------------- numeric

def test_instantiate_all_zero_atoms_origin_only():
    poly = instantiate(systems.projected_rate_system(),
                       atom_vals(0, 0, 0, 0, 0))
    verts = vertices(poly)
    assert verts.shape[0] == 1
    np.testing.assert_allclose(verts[0], [0, 0, 0], atol=1e-12)


def test_instantiate_unit_atoms_max_sum_rate():
    poly = instantiate(systems.projected_rate_system(),
                       atom_vals(1, 1, 1, 1, 0))
    verts = vertices(poly)
    sums = verts.sum(axis=1)
    assert np.max(sums) == pytest.approx(2.0, abs=1e-9)
    assert any(np.allclose(v, [0, 1, 1], atol=1e-9) for v in verts)
    # independent oracle: dense random feasibility scan stays below 2
    rng = np.random.default_rng(0)
    pts = rng.uniform(0, 2.5, size=(20000, 3))
    feas = poly.contains(pts)
    assert np.max(pts[feas].sum(axis=1)) <= 2.0 + 1e-9


def test_instantiate_missing_atom():
    with pytest.raises(InputError):
        instantiate(systems.projected_rate_system(), {"I(U1;Y1|T,X1)": 1.0})


def test_pentagon_vertices():
    # R1 <= 1, R2 <= 1, R1 + R2 <= 1.5 in the nonnegative quadrant
    sys_ = SymbolicIneqSystem(
        ("R1", "R2"), ("H1", "H2", "H12"),
        [((1, 0), (1, 0, 0)), ((0, 1), (0, 1, 0)), ((1, 1), (0, 0, 1))])
    poly = instantiate(sys_, {"H1": 1.0, "H2": 1.0, "H12": 1.5})
    verts = vertices(poly)
    expected = [(0, 0), (0, 1), (0.5, 1), (1, 0), (1, 0.5)]
    assert verts.shape[0] == 5
    for e in expected:
        assert any(np.allclose(v, e, atol=1e-9) for v in verts)


def test_unit_cube_and_box_corners():
    cube = NumericPolytope(("a", "b", "c"), np.eye(3), np.ones(3), bmax=5.0)
    assert vertices(cube).shape[0] == 8
    box = NumericPolytope(("a", "b", "c"), np.zeros((0, 3)), np.zeros(0),
                          bmax=2.0)
    verts = vertices(box)
    assert verts.shape[0] == 8
    assert np.max(verts) == pytest.approx(2.0)


def test_vertices_dim_cap():
    poly = NumericPolytope(("a", "b", "c", "d"), np.eye(4), np.ones(4), 2.0)
    with pytest.raises(UnsupportedDimensionError):
        vertices(poly)


def test_equivalent_under_trivial_and_enlargement():
    eq4 = systems.projected_rate_system()
    ok, _ = equivalent_under(eq4, eq4, systems.enlargement_relations(),
                             trials=5, seed=0)
    assert ok
    proj = fme_eliminate(systems.transferred_rate_system(),
                         ["D1", "D2"]).restrict(("R0", "R1", "R2"))
    ok, _ = equivalent_under(proj, systems.enlarged_rate_system(),
                             systems.enlargement_relations(),
                             trials=40, seed=1)
    assert ok


def test_equivalent_under_detects_difference():
    ok, witness = equivalent_under(
        systems.projected_rate_system(), systems.enlarged_rate_system(),
        systems.enlargement_relations(), trials=60, seed=2)
    assert not ok
    assert witness is not None and "atom_values" in witness


def test_equivalent_under_infeasible_relations():
    eq4 = systems.projected_rate_system()
    impossible = [AtomRelation((1, 0, 0, 0, 0), -1)]  # A1 <= -1
    with pytest.raises(InfeasibleRelationsError):
        equivalent_under(eq4, eq4, impossible, trials=1, seed=0)


def test_fme_soundness_random_systems():
    rng = np.random.default_rng(42)
    for trial in range(15):
        n_rates, n_atoms = 3, 2
        rows = []
        for _ in range(5):
            rates = rng.integers(-2, 3, size=n_rates)
            atoms = rng.integers(0, 3, size=n_atoms)
            rows.append((tuple(int(v) for v in rates),
                         tuple(int(v) for v in atoms)))
        sys_ = SymbolicIneqSystem(("x", "y", "v"), ("A", "B"), rows)
        values = {"A": float(rng.uniform(0, 2)), "B": float(rng.uniform(0, 2))}
        proj = fme_eliminate(sys_, ["v"]).restrict(("x", "y"))
        poly_proj = instantiate(proj, values)
        pts = rng.uniform(0, poly_proj.bmax, size=(300, 2))
        in_proj = poly_proj.contains(pts)
        # victim extension: bounds on v at a fixed (x, y)
        full = instantiate(sys_, values)
        for p, inside in zip(pts, in_proj):
            lows, highs = [0.0], [np.inf]
            for row, bound in zip(full.a, full.b):
                c = row[2]
                rest = row[0] * p[0] + row[1] * p[1]
                if c > 1e-12:
                    highs.append((bound - rest) / c)
                elif c < -1e-12:
                    lows.append((bound - rest) / c)
                elif rest > bound + 1e-9:
                    highs.append(-np.inf)
            feasible = (max(lows) <= min(highs) + 1e-9
                        and p[0] >= -1e-9 and p[1] >= -1e-9
                        and np.all(p <= full.bmax + 1e-9))
            assert feasible == bool(inside), (trial, p)


def test_vertex_enumeration_vs_support_sampling():
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = 6
        a = rng.normal(size=(m, 3))
        b = rng.uniform(0.5, 2.0, size=m)
        poly = NumericPolytope(("a", "b", "c"), a, b, bmax=3.0)
        verts = vertices(poly)
        if verts.shape[0] == 0:
            continue
        pts = rng.uniform(0, 3.0, size=(50000, 3))
        feas = pts[poly.contains(pts)]
        if not feas.size:
            continue
        for _ in range(25):
            w = rng.normal(size=3)
            assert np.max(feas @ w) <= np.max(verts @ w) + 1e-7


# ------------------------------------------------------------------- cloud

def test_pareto_examples():
    cloud = RegionCloud([(1, 0, 0), (0.5, 0, 0)])
    out = pareto_filter(cloud)
    np.testing.assert_allclose(out.points, [[1, 0, 0]])
    assert len(pareto_filter(RegionCloud(np.zeros((0, 3))))) == 0
    tri = RegionCloud([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert len(pareto_filter(tri)) == 3


def test_pareto_idempotent_and_stable():
    rng = np.random.default_rng(5)
    cloud = RegionCloud(rng.uniform(0, 1, size=(500, 3)))
    once = pareto_filter(cloud)
    twice = pareto_filter(once)
    np.testing.assert_allclose(once.points, twice.points)
    # survivors keep the input order
    idx = [np.flatnonzero(np.all(cloud.points == p, axis=1))[0]
           for p in once.points]
    assert idx == sorted(idx)


def test_minkowski_identity_and_rectangle():
    b = RegionCloud([(0, 1, 0), (0, 0, 2), (0, 0.5, 0.5)])
    out = minkowski_sum(RegionCloud([(0, 0, 0)]), b)
    assert vertex_sets_match(out.points, pareto_filter(b).points)[0]
    rect = minkowski_sum(RegionCloud([(1, 0, 0)]), RegionCloud([(0, 2, 0)]))
    np.testing.assert_allclose(rect.points, [[1, 2, 0]])


def test_minkowski_commutative():
    rng = np.random.default_rng(6)
    a = RegionCloud(rng.uniform(0, 1, size=(40, 3)))
    b = RegionCloud(rng.uniform(0, 1, size=(30, 3)))
    ab = minkowski_sum(a, b)
    ba = minkowski_sum(b, a)
    assert vertex_sets_match(np.array(sorted(map(tuple, ab.points))),
                             np.array(sorted(map(tuple, ba.points))),
                             tol=1e-12)[0]


def test_cloud_dominates():
    cloud = RegionCloud([(1, 1, 0), (0, 0, 1)])
    ok, gap, _ = cloud_dominates(cloud, cloud, tol=0.0)
    assert ok and gap <= 0.0
    inner = RegionCloud([(1, 1.1, 0)])
    ok, gap, witness = cloud_dominates(cloud, inner, tol=0.05)
    assert not ok
    assert gap == pytest.approx(0.1, abs=1e-12)
    assert witness == RateTriple(1, 1.1, 0)


def test_rate_triple_validation():
    with pytest.raises(InputError):
        RateTriple(-0.1, 0, 0).validated()
