import pytest

import sscx


def test_builtins_and_nuclei():
    assert set(sscx.builtin_names()) == {"odometer", "grigorchuk", "basilica"}
    assert sorted(sscx.Group(builtin="odometer").nucleus()) == ["a", "e", "~a"]
    assert len(sscx.Group(builtin="grigorchuk").nucleus()) == 5


def test_action_and_equality():
    g = sscx.Group(builtin="odometer")
    assert g.act("a", "111") == "000"
    assert g.act("a", "011") == "111"
    gr = sscx.Group(builtin="grigorchuk")
    assert gr.equal("bcd", "")
    assert not gr.equal("ab", "ba")


def test_complex_distances():
    g = sscx.Group(builtin="basilica")
    c = sscx.Complex(g)
    assert c.graph_distance("0101", "0101") == 0
    assert c.graph_distance("01", "1") == 1
    info = c.geodesic("0110", "1011")
    assert info.distance == c.graph_distance("1011", "0110")
    assert info.min_level <= info.max_level == c.level_product("0110", "1011")
    assert c.level_connected(8)
    assert "graph" in c.level_dot(2)


def test_calibration_and_boundary():
    g = sscx.Group(builtin="odometer")
    c = sscx.Complex(g)
    cal = sscx.calibrate(c, hsigma=5)
    assert cal.hsigma == 5
    assert cal.epsilon == pytest.approx(1 / 16)
    ray = sscx.Ray("1;0")
    assert ray.vertex(3) == "001"
    degrees = sscx.boundary_degrees(c, ray)
    assert sum(d for _, d in degrees) == 2
    assert sscx.rays_equivalent(c, sscx.Ray(";0"), sscx.Ray(";1"))
    assert sscx.visual_distance(c, sscx.Ray(";0"), sscx.Ray(";1"), cal) == 0.0


def test_dynamics():
    g = sscx.Group(builtin="grigorchuk")
    c = sscx.Complex(g)
    st = sscx.bounded_degree_stats(c, 1, 3, 6, 1, 3, max_centers=16)
    assert st.C_observed >= 1
    atlas = sscx.build_dynatlas(c, 1, 3, 5, 5, 0, 2, max_centers=4)
    assert len(atlas.new_per_k) == 3
    assert atlas.form_count == sum(atlas.new_per_k)
    res = sscx.stabilizer_orbit(g, "0101", 1, "11")
    assert res.orbit_size >= 1
    assert sscx.cone_type_counts(c, 1, 4, 3)[-1] >= 1


def test_errors_carry_kind():
    with pytest.raises(sscx.SscxError):
        sscx.Group(builtin="nope")
    with pytest.raises(sscx.SscxError):
        sscx.Group(builtin="odometer", json="{}")


def test_verify_suite_passes():
    g = sscx.Group(builtin="odometer")
    c = sscx.Complex(g)
    checks = sscx.run_verify(c, sscx.calibrate(c))
    assert checks and all(ok for _, _, ok, _ in checks)
