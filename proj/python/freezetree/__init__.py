"""Uniform attachment trees with freezing."""

import json
from fractions import Fraction

from . import _core
from ._core import (
    CapExceeded,
    ConditioningError,
    PreconditionError,
    bennett_tail,
    count_t0n_exhaustive,
    fluid_solve,
    gen_iid,
    gen_sir,
    h_minus,
    h_plus,
    linear_constants,
    phi,
    psi,
    solve_fc,
    suite_names,
    walk,
)

__all__ = [
    "CapExceeded",
    "ConditioningError",
    "PreconditionError",
    "bennett_tail",
    "birth_time_cdf",
    "build_attach",
    "build_coalescent",
    "canonical_form",
    "coalescence_pmf",
    "count_t0n_exhaustive",
    "enumerate_trees",
    "fluid_solve",
    "gen_iid",
    "gen_sir",
    "h_minus",
    "h_plus",
    "linear_constants",
    "phi",
    "psi",
    "run_experiment",
    "run_suite",
    "solve_fc",
    "suite_names",
    "tangent_numbers",
    "tree_probability",
    "walk",
]


def _fraction(pair):
    return Fraction(int(pair[0]), int(pair[1]))


def build_attach(x, n=None, seed=0):
    """Forward construction over the first n signs; returns the tree as a dict."""
    return json.loads(_core.build_attach(list(x), len(x) if n is None else n, seed))


def build_coalescent(x, n=None, seed=0):
    """Reverse construction; dict with tree, birth and merge_log."""
    return json.loads(_core.build_coalescent(list(x), len(x) if n is None else n, seed))


def canonical_form(tree):
    return _core.canonical_form(json.dumps(tree))


def tree_probability(x, n=None):
    return _fraction(_core.tree_probability(list(x), len(x) if n is None else n))


def enumerate_trees(x, n=None, cap=1_000_000):
    """Every attainable tree key with its exact probability."""
    return {k: _fraction(p) for k, p in _core.enumerate_trees(list(x), len(x) if n is None else n, cap)}


def birth_time_cdf(x, n, m):
    return _fraction(_core.birth_time_cdf(list(x), n, m))


def coalescence_pmf(x, n, bu, bv, c):
    return _fraction(_core.coalescence_pmf(list(x), n, bu, bv, c))


def tangent_numbers(count):
    return [int(t) for t in _core.tangent_numbers(count)]


def run_experiment(manifest):
    """Runs a manifest given as a dict; returns the statistics as a dict."""
    return json.loads(_core.run_experiment(json.dumps(manifest)))


def run_suite(name, quick=True, seed=None, threads=0):
    """Returns (passed, [(check, passed, detail)], stats dict)."""
    args = {"quick": quick, "threads": threads}
    if seed is not None:
        args["seed"] = seed
    ok, checks, stats = _core.run_suite(name, **args)
    return ok, checks, json.loads(stats)
