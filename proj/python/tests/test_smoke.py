from fractions import Fraction

import pytest

import freezetree as ft

EXAMPLE = [1, -1, 1, 1, -1]


def test_walk_and_scales():
    s, tau = ft.walk(EXAMPLE)
    assert s == [1, 2, 1, 2, 3, 2]
    assert tau is None
    assert ft.h_plus(EXAMPLE, 5) == pytest.approx(4 / 3)
    assert ft.h_minus(EXAMPLE, 5) == pytest.approx(3 / 2)
    assert ft.walk([1, -1, -1])[1] == 3


def test_builders():
    t = ft.build_attach(EXAMPLE, seed=3)
    assert len(t["vertices"]) == 4
    b = ft.build_coalescent(EXAMPLE, seed=3)
    assert len(b["merge_log"]) == 3
    assert b["birth"][:2] == [5, 5]
    key = ft.canonical_form(t)
    assert key in ft.enumerate_trees(EXAMPLE)
    with pytest.raises(ft.PreconditionError):
        ft.build_coalescent([-1, 1])


def test_exact_law():
    law = ft.enumerate_trees(EXAMPLE)
    assert len(law) == 12
    assert set(law.values()) == {Fraction(1, 12)}
    assert ft.tree_probability(EXAMPLE) == Fraction(1, 12)
    assert ft.birth_time_cdf(EXAMPLE, 5, 2) == Fraction(1, 4)
    total = sum(ft.coalescence_pmf(EXAMPLE, 5, 5, 5, c) for c in range(5))
    assert total == 1
    with pytest.raises(ft.CapExceeded):
        ft.enumerate_trees([1] * 12, cap=1000)


def test_bijection():
    left = "a(1:8(2:4,6:a(9:11)),3:a(5:7,10:a))"
    right = "1(2(4,6(9(11,a),8)),3(5(7,10(a,a)),a))"
    assert ft.phi(left) == right
    assert ft.psi(right) == left
    assert ft.tangent_numbers(7) == [1, 2, 16, 272, 7936, 353792, 22368256]
    assert ft.count_t0n_exhaustive(4) == "272"


def test_constants_and_fluid():
    assert ft.solve_fc(1.0) == pytest.approx(2.718281828459045, abs=1e-12)
    k = ft.linear_constants(0.5)
    assert k["height"] == pytest.approx(3.5403934573700134, rel=1e-12)
    t, g, t0 = ft.fluid_solve(2.0)
    assert t0 == pytest.approx(1.5936242600400401, rel=1e-9)
    assert g[0] == 1.0
    assert ft.bennett_tail(10.0, 10.0) == pytest.approx(0.021006074709707943, rel=1e-12)


def test_sequences():
    x = ft.gen_iid(0.75, 1000, seed=1, conditioned=True)
    assert min(ft.walk(x)[0]) > 0
    assert x == ft.gen_iid(0.75, 1000, seed=1, conditioned=True)
    signs, h, i = ft.gen_sir(200, 0.01, seed=4)
    assert i[-1] == 0
    assert all(ik == 2 * (200 - hk) - k + 1 for k, (hk, ik) in enumerate(zip(h, i)))


def test_experiment_and_suite():
    manifest = {
        "experiment_id": "py",
        "sequence": {"kind": "constant_plus", "n": 1000},
        "builder": "attach",
        "replications": 20,
        "master_seed": 7,
        "statistics": ["height", "depth"],
    }
    a = ft.run_experiment(dict(manifest, threads=1))
    b = ft.run_experiment(dict(manifest, threads=3))
    assert a == b
    assert a["statistics"]["height"]["count"] == 20
    ok, checks, stats = ft.run_suite("fc")
    assert ok and len(checks) >= 3
    assert "exact" in ft.suite_names()
