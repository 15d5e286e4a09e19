import math

import pytest

import ldgsolver as ldg


def test_preset_names():
    names = ldg.preset_names()
    assert "porous1d" in names
    assert "fermion2d" in names
    assert len(names) == 6


def test_gauss_rule_values():
    pts, wts = ldg.gauss_rule(2)
    assert pts[0] == pytest.approx(-1.0 / math.sqrt(3.0))
    assert pts[1] == pytest.approx(1.0 / math.sqrt(3.0))
    assert sum(wts) == pytest.approx(2.0)

    pts, wts = ldg.gauss_lobatto_rule(3)
    assert list(pts) == pytest.approx([-1.0, 0.0, 1.0])
    assert list(wts) == pytest.approx([1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0])


def test_tableau_properties():
    for order in range(1, 5):
        tab = ldg.tableau(order)
        assert tab["order"] == order
        b = tab["b"]
        assert sum(b) == pytest.approx(1.0)
        # stiffly accurate: last row of a equals b
        last = tab["a"][-1]
        assert list(last) == pytest.approx(list(b))


def test_small_run(tmp_path):
    r = ldg.run({
        "preset": "porous1d",
        "mesh": 20,
        "t_final": 0.02,
        "output_dir": str(tmp_path / "run"),
    })
    assert r["status"] == "ok"
    assert r["steps"] >= 1
    assert r["min_u_run"] >= 1e-10 - 1e-12
    assert len(r["entropy"]) == r["steps"] + 1
    # entropy decreases, mass is conserved
    assert r["entropy"][-1] <= r["entropy"][0]
    assert r["mass"][-1] == pytest.approx(r["mass"][0], abs=1e-12)


def test_compare_runs(tmp_path):
    cfg = {"preset": "porous1d", "mesh": 20, "t_final": 0.01}
    a = dict(cfg, output_dir=str(tmp_path / "a"))
    b = dict(cfg, output_dir=str(tmp_path / "b"))
    ldg.run(a)
    ldg.run(b)
    rep = ldg.compare_runs(str(tmp_path / "a"), str(tmp_path / "b"))
    assert rep["max_delta"] == 0.0


def test_bad_config_raises():
    with pytest.raises(ldg.ConfigError):
        ldg.run({"preset": "not_a_preset"})
    with pytest.raises(ldg.ConfigError):
        ldg.run({"preset": "porous1d", "bogus_key": 1})
