"""Tests for root systems, tau, and multinumber labels."""

import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, settings, strategies as st

import scal_fixtures as fx
from flagpuzzles.lattice import (
    LatticeError,
    Lattice,
    RootSystem,
    ZERO_NAME,
    apply_word,
    build_lattice,
    build_root_system,
    build_tau,
    e_weight,
    quiver_dims,
    quiver_weight,
    vadd,
    vneg,
    _WORDS,
)

PRINTED = {1: fx.D1_LABELS, 2: fx.D2_LABELS, 3: fx.D3_LABELS}
TABLES = {1: fx.D1_K, 2: fx.D2_K, 3: fx.D3_K}


# -- root system basics -----------------------------------------------------

def test_cartan_d1():
    rs = build_root_system(1)
    assert rs.cartan == ((2, -1), (-1, 2))
    assert rs.nodes == ("a", "a'")


def test_cartan_d2_star():
    rs = build_root_system(2)
    # D4: a is the central node, adjacent to the three legs
    assert set(rs.adjacency["a"]) == {"b", "a'", "b'"}
    for leg in ("b", "a'", "b'"):
        assert rs.adjacency[leg] == ("a",)


def test_cartan_symmetric_simply_laced():
    for d in (1, 2, 3, 4):
        rs = build_root_system(d)
        c = rs.cartan
        n = rs.rank
        assert len(c) == n
        for i in range(n):
            assert c[i][i] == 2
            for j in range(n):
                assert c[i][j] == c[j][i]
                if i != j:
                    assert c[i][j] in (0, -1)


def test_fundamental_weights_dual_to_roots():
    for d in (1, 2, 3, 4):
        rs = build_root_system(d)
        for s in rs.nodes:
            for t in rs.nodes:
                assert rs.gram(rs.omega(s), rs.alpha(t)) == int(s == t)


def test_root_norms():
    for d in (1, 2, 3, 4):
        rs = build_root_system(d)
        for s in rs.nodes:
            assert rs.gram(rs.alpha(s), rs.alpha(s)) == 2


def test_quiver_weight_example_d3():
    rs = build_root_system(3)
    w = quiver_weight(rs, {"c": 1}, {"c": 1, "b": 1, "a": 1})
    expect = vadd(rs.omega("c"),
                  vneg(vadd(vadd(rs.alpha("c"), rs.alpha("b")), rs.alpha("a"))))
    assert w == expect
    assert w == e_weight(rs, 1, 0)


def test_quiver_weight_unknown_node():
    rs = build_root_system(1)
    with pytest.raises(LatticeError):
        quiver_weight(rs, {"z": 1}, {})


def test_e_weight_endpoints():
    # all parameters off gives the framing node's fundamental weight
    for d in (1, 2, 3, 4):
        rs = build_root_system(d)
        fr, dims = quiver_dims(rs, "1", n=1, params=(0,) * d)
        assert dims == {}
        assert e_weight(rs, 1, d) == rs.omega(fr)


# -- reflection words relating the quivers ------------------------------------

PARAM_SETS = [
    (1, (0, 0, 0, 0)),
    (1, (1, 1, 1, 1)),
    (2, (1, 2, 3, 4)),
    (3, (2, 0, 1, 5)),
    (1, (0, 2, 0, 3)),
]


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_reflection_words(d):
    rs = build_root_system(d)
    for target, source, word in _WORDS[d]:
        for n, params in PARAM_SETS:
            fr_s, dims_s = quiver_dims(rs, source, n=n, params=params[:d])
            fr_t, dims_t = quiver_dims(rs, target, n=n, params=params[:d])
            assert fr_s == fr_t
            got = apply_word(rs, word, fr_s, n, dims_s)
            assert got == dims_t, (d, target, n, params)


# -- tau ----------------------------------------------------------------------

@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_tau_defining_constraints(d):
    lat = build_lattice(d)
    for i in range(d + 1):
        assert lat.tau(lat.f[i]) == vneg(e_weight(lat.rs, 3, i))
        assert lat.tau2(lat.f[i]) == e_weight(lat.rs, 2, i)


def test_tau_d1_example():
    lat = build_lattice(1)
    assert lat.tau2(lat.f[1]) == e_weight(lat.rs, 2, 1)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_tau_preserves_killing(d):
    lat = build_lattice(d)
    rng = random.Random(7 + d)
    ws = sorted(lat.W)
    for _ in range(30):
        u, v = rng.choice(ws), rng.choice(ws)
        assert lat.killing(lat.tau(u), lat.tau(v)) == lat.killing(u, v)


def test_one_plus_tau_plus_tau2_vanishes():
    for d in (1, 2, 3, 4):
        lat = build_lattice(d)
        for w in sorted(lat.W)[:40]:
            s = vadd(vadd(w, lat.tau(w)), lat.tau2(w))
            assert s == lat.rs.zero


# -- weight sets ---------------------------------------------------------------

def test_weight_set_sizes():
    for d, size in ((1, 3), (2, 8), (3, 27)):
        lat = build_lattice(d)
        for role in (1, 2, 3):
            assert len(lat.weight_set(role)) == size
    lat4 = build_lattice(4)
    for role in (1, 2, 3):
        assert len(lat4.weight_set(role)) == 241  # 240 roots plus zero


def test_weight_set_roles_related_by_tau():
    lat = build_lattice(2)
    w1 = lat.weight_set(1)
    assert lat.weight_set(2) == frozenset(lat.tau2(w) for w in w1)
    assert lat.weight_set(3) == frozenset(vneg(lat.tau(w)) for w in w1)


def test_weights_have_norm_two():
    for d in (1, 2, 3, 4):
        lat = build_lattice(d)
        for w in lat.W:
            assert lat.killing(w, w) == 2


def test_d1_weight_set_explicit():
    lat = build_lattice(1)
    f0, f1 = lat.f[0], lat.f[1]
    f10 = vneg(vadd(lat.tau(f0), lat.tau2(f1)))
    assert lat.W == frozenset((f0, f1, f10))
    assert lat.name(f10) == "10"


# -- labels --------------------------------------------------------------------

@pytest.mark.parametrize("d", [1, 2, 3])
def test_labels_match_printed_tables(d):
    lat = build_lattice(d)
    assert sorted(lat.labels()) == sorted(PRINTED[d])
    for p in PRINTED[d]:
        assert lat.name(lat.parse(p)) == p


def test_label_count_d4():
    lat = build_lattice(4)
    assert len(lat.labels()) == 240


def test_d4_printed_puzzle_labels_are_canonical():
    lat = build_lattice(4)
    for p in fx.D4_PUZZLE_LABELS:
        w = lat.parse(p)
        assert lat.name(w) == p


def test_single_number_names():
    for d in (1, 2, 3, 4):
        lat = build_lattice(d)
        for i in range(d + 1):
            assert lat.name(lat.f[i]) == str(i)
            assert lat.parse(str(i)) == lat.f[i]


def test_parse_31_is_composition():
    lat = build_lattice(3)
    expect = vneg(vadd(lat.tau(lat.f[1]), lat.tau2(lat.f[3])))
    assert lat.parse("31") == expect


def test_d4_deep_label_parses_to_root():
    lat = build_lattice(4)
    w = lat.parse("(((43)2)1)0")
    assert w in lat.W
    assert lat.killing(w, w) == 2


@pytest.mark.parametrize("d", [1, 2, 3, 4])
@pytest.mark.parametrize("role", [1, 2, 3])
def test_name_parse_round_trip(d, role):
    lat = build_lattice(d)
    for w in lat.weight_set(role):
        assert lat.parse(lat.name(w, role), role) == w


def test_zero_label_distinct():
    lat = build_lattice(4)
    assert lat.name(lat.rs.zero) == ZERO_NAME
    assert lat.parse(ZERO_NAME) == lat.rs.zero
    assert lat.parse("0") != lat.rs.zero
    with pytest.raises(LatticeError):
        build_lattice(3).parse(ZERO_NAME)


def test_name_digits_weakly_decreasing_low_d():
    for d in (1, 2, 3):
        for label in build_lattice(d).labels():
            ds = [c for c in label if c.isdigit()]
            assert all(a >= b for a, b in zip(ds, ds[1:]))


def test_parse_rejects_garbage():
    lat = build_lattice(2)
    for bad in ("", "(10", "10)", "x", "3", "(1)(0)(1)"):
        with pytest.raises(LatticeError):
            lat.parse(bad)


def test_name_rejects_foreign_weight():
    lat = build_lattice(2)
    with pytest.raises(LatticeError):
        lat.name((5,) * 4)


# -- scalar products ------------------------------------------------------------

@pytest.mark.parametrize("d", [1, 2, 3])
def test_scal_table_regeneration(d):
    lat = build_lattice(d)
    labels = PRINTED[d]
    a = lat.rs.scale
    for x in labels:
        row = TABLES[d][x]
        for y, kc in zip(labels, row):
            assert lat.scal(x, y) == -1 + int(kc) * a, (d, x, y)


def test_scal_example_d3():
    lat = build_lattice(3)
    assert lat.scal("10", "20") == -1


@pytest.mark.parametrize("d,lo,hi", [(1, -1, 2), (2, -1, 2), (3, -1, 2),
                                     (4, -2, 2)])
def test_twisted_product_bounds(d, lo, hi):
    lat = build_lattice(d)
    ws = sorted(lat.W)
    rng = random.Random(d)
    pairs = ([(x, y) for x in ws for y in ws] if d <= 3 else
             [(rng.choice(ws), rng.choice(ws)) for _ in range(4000)])
    for x, y in pairs:
        v = lat.killing(lat.tau2(x), y)
        assert lo <= v <= hi


@pytest.mark.parametrize("d", [1, 2])
def test_triangle_validity_matches_conservation(d):
    # |f_X + tau^2 f_Y + tau f_Z|^2 = 0 exactly when all three pairwise
    # twisted products are -1
    lat = build_lattice(d)
    ws = sorted(lat.W)
    for x in ws:
        for y in ws:
            for z in ws:
                s = vadd(vadd(x, lat.tau2(y)), lat.tau(z))
                zero = lat.killing(s, s) == 0
                triple = (lat.scal(y, x) == -1 and lat.scal(x, z) == -1
                          and lat.scal(z, y) == -1)
                assert zero == triple


def test_triangle_validity_d3_sampled():
    lat = build_lattice(3)
    ws = sorted(lat.W)
    rng = random.Random(33)
    count = 0
    for _ in range(4000):
        x, y, z = (rng.choice(ws) for _ in range(3))
        s = vadd(vadd(x, lat.tau2(y)), lat.tau(z))
        zero = lat.killing(s, s) == 0
        triple = (lat.scal(y, x) == -1 and lat.scal(x, z) == -1
                  and lat.scal(z, y) == -1)
        assert zero == triple
        count += zero
    assert count  # some valid triangles were seen


# -- epsilon signs ---------------------------------------------------------------

def test_epsilon_only_d4():
    with pytest.raises(LatticeError):
        build_lattice(3).epsilon("0", "1")


def test_epsilon_zero_rejected():
    lat = build_lattice(4)
    with pytest.raises(LatticeError):
        lat.epsilon(lat.rs.zero, lat.f[0])


def test_epsilon_values_pm1():
    lat = build_lattice(4)
    ws = sorted(lat.W)
    rng = random.Random(44)
    for _ in range(200):
        assert lat.epsilon(rng.choice(ws), rng.choice(ws)) in (-1, 1)


def test_epsilon_cocycle_identity():
    lat = build_lattice(4)
    ws = sorted(lat.W)
    rng = random.Random(4)
    for _ in range(1000):
        x, y = rng.choice(ws), rng.choice(ws)
        assert (lat.epsilon(x, y) * lat.epsilon(y, x)
                == (-1) ** lat.killing(x, y))


def test_epsilon_bilinear():
    lat = build_lattice(4)
    ws = sorted(lat.W)
    rng = random.Random(5)
    seen = 0
    while seen < 100:
        x, y, z = (rng.choice(ws) for _ in range(3))
        s = vadd(y, z)
        if s not in lat.W:
            continue
        assert lat.epsilon(x, s) == lat.epsilon(x, y) * lat.epsilon(x, z)
        assert lat.epsilon(s, x) == lat.epsilon(y, x) * lat.epsilon(z, x)
        seen += 1


# -- misc ------------------------------------------------------------------------

def test_coxeter_numbers():
    for d, h in ((1, 3), (2, 6), (3, 12), (4, 30)):
        assert build_root_system(d).coxeter == h


def test_scale_values():
    for d, a in ((1, Q(3)), (2, Q(2)), (3, Q(3, 2)), (4, Q(1))):
        assert build_root_system(d).scale == a


def test_label_table_obj_shape_and_determinism():
    lat = build_lattice(2)
    one = lat.label_table_obj(1)
    two = lat.label_table_obj(1)
    assert one == two
    assert [r["name"] for r in one["labels"]] == lat.labels()
    row = {r["name"]: r for r in one["labels"]}["21"]
    got = tuple(Q(c) for c in row["coords"])
    assert got == tuple(Q(x) for x in lat.parse("21"))


def test_label_table_obj_d4_includes_zero():
    lat = build_lattice(4)
    obj = lat.label_table_obj(2)
    names = [r["name"] for r in obj["labels"]]
    assert names[-1] == ZERO_NAME
    assert len(names) == 241


def test_build_lattice_cached():
    assert build_lattice(2) is build_lattice(2)


def test_bad_d_rejected():
    with pytest.raises(LatticeError):
        RootSystem(5)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_orbit_closed_under_reflections(d, data):
    lat = build_lattice(d)
    ws = sorted(lat.W)
    w = data.draw(st.sampled_from(ws))
    node = data.draw(st.sampled_from(lat.rs.nodes))
    assert lat.rs.reflect(node, w) in lat.W
