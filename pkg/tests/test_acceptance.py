"""Acceptance checks, one test per criterion.

Each test registers a one-line verdict that is printed in the terminal
summary (and echoed to stdout by the test itself). Criteria 5-11 run through
the verification harness on its acceptance configuration; the remaining ones
call the library directly against independent references.
"""

from functools import lru_cache

import numpy as np
from oracles import wp_strip_sum
from spincm.harness import RunConfig, SCHEMA, acceptance_config, run_suite
from spincm.rootdata import build_root_system, exponent_data, partitions_conjugate
from spincm.weierstrass import Lattice, wp

TOLERANCES = {"commute_tol": 1e-7, "flow_tol": 1e-6, "det_tol": 1e-6, "integrator_tol": 1e-10}
LATTICE = (0.5, 0.65j)
ELLIPTIC = "elliptic(0.5+0i,0+0.65i)"


@lru_cache(maxsize=None)
def _main_report():
    rep = run_suite(acceptance_config(seed=7))
    assert not rep.errors, rep.errors
    return rep


@lru_cache(maxsize=None)
def _report(suites: tuple, algebras: tuple, seed: int = 7):
    cfg = RunConfig.from_dict({
        "schema": SCHEMA, "algebras": list(algebras),
        "families": [{"kind": "rational", "subset": "full"}],
        "n_samples": 5, "seed": seed, "tolerances": TOLERANCES, "suites": list(suites),
    })
    rep = run_suite(cfg)
    assert not rep.errors, rep.errors
    return rep


def _entries(rep, criterion, **where):
    out = [e for e in rep.entries if e.criterion == criterion]
    for key, val in where.items():
        out = [e for e in out if getattr(e, key) == val]
    return out


def _verdict(entries):
    failed = [f"{e.name}[{e.algebra} {e.family}]={e.value:.2e}" for e in entries if e.passed is False]
    return not failed and bool(entries), failed


def _report_line(criterion_line, n, title, entries):
    ok, failed = _verdict(entries)
    worst = {}
    for e in entries:
        if e.comparison == "<":
            worst[e.name] = max(worst.get(e.name, 0.0), e.value)
    detail = f"{len(entries)} checks; " + ", ".join(f"{k} max {v:.1e}" for k, v in worst.items())
    if failed:
        detail += "; failed: " + ", ".join(failed)
    criterion_line(n, title, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} {title} -- {detail}")
    return ok, failed


def _family_labels(rep, criterion, algebra):
    return {e.family for e in _entries(rep, criterion, algebra=algebra)}


# ---------------------------------------------------------------------------


CRIT1_ALGEBRAS = [("A", 1), ("A", 2), ("A", 3), ("A", 4), ("B", 2), ("B", 3),
                  ("C", 2), ("C", 3), ("D", 4), ("G", 2)]


def test_criterion_01_exponent_identities(criterion_line):
    bad = []
    for letter, rank in CRIT1_ALGEBRAS:
        rs = build_root_system(letter, rank)
        ed = exponent_data(rs)
        if sum(ed.exponents) != len(rs.positive_roots):
            bad.append(f"{rs.name}: sum m_k")
        if not partitions_conjugate(ed):
            bad.append(f"{rs.name}: heights not conjugate")
    criterion_line(1, "exponent identities", f"{len(CRIT1_ALGEBRAS)} algebras" + (f"; {bad}" if bad else ""))
    print(f"criterion 1: {'PASS' if not bad else 'FAIL'} exponent identities {bad}")
    assert not bad


def test_criterion_02_algebra_realization(criterion_line):
    algebras = ("A1", "A2", "A3", "B2", "C2", "D4")
    rep = _report(("liealg",), algebras)
    entries = _entries(rep, 2)
    ok, failed = _report_line(criterion_line, 2, "algebra realization", entries)
    assert {e.algebra for e in entries} == set(algebras)
    assert ok, failed
    assert max(e.value for e in entries) < 1e-9


def test_criterion_03_selection_rules(criterion_line):
    rep = _report(("invariants",), ("A1", "A2", "A3", "B2", "C2", "D4"))
    entries = _entries(rep, 3)
    ok, failed = _report_line(criterion_line, 3, "selection rules", entries)
    sel = [e for e in entries if e.name == "weight_selection"]
    tra = [e for e in entries if e.name == "transfer_identity"]
    assert all(e.details["multisets"] >= 100 for e in sel)
    assert all(e.details["samples"] >= 50 for e in tra)
    assert all(e.value < 1e-10 for e in sel) and all(e.value < 1e-9 for e in tra)
    assert ok, failed


def test_criterion_04_F_coefficient_identities(criterion_line):
    rep = _report(("invariants",), ("A1", "A2", "A3", "B2", "C2", "D4"))
    entries = _entries(rep, 4)
    ok, failed = _report_line(criterion_line, 4, "F_k0 / F_kd / F_k1 identities", entries)
    assert {e.name for e in entries} == {"F_k0_eq_I_k(p)", "F_kd_eq_I_k(xi)", "F_k1_zero_on_h_perp"}
    assert all(e.value < 1e-10 for e in entries)
    assert ok, failed


def test_criterion_05_rational_family(criterion_line):
    rep = _main_report()
    entries = [e for a in ("A2", "B2") for e in _entries(rep, 5, algebra=a)]
    ok, failed = _report_line(criterion_line, 5, "rational family (A2, B2; full and proper)", entries)
    for a in ("A2", "B2"):
        assert _family_labels(rep, 5, a) == {"rational:full", "rational:span0"}
    names = {e.name for e in entries}
    assert names == {"I_k1_zero_on_shell", "top_integral_eq_I_k(xi)", "casimir_top_integrals"}
    assert all(e.value < (1e-9 if e.name == "I_k1_zero_on_shell" else 1e-8) for e in entries)
    assert ok, failed


def test_criterion_06_trigonometric_odd_relation(criterion_line):
    rep = _main_report()
    entries = _entries(rep, 6, algebra="A2")
    ok, failed = _report_line(criterion_line, 6, "trigonometric odd relation (A2)", entries)
    assert {"trigonometric:full", "trigonometric:span0"} <= _family_labels(rep, 6, "A2")
    assert all(e.value < 1e-8 for e in entries if e.name == "odd_relation")
    assert ok, failed


def test_criterion_07_elliptic_family(criterion_line):
    rep = _main_report()
    label = ELLIPTIC
    entries = [e for a in ("A1", "A2") for e in _entries(rep, 7, algebra=a, family=label)]
    ok, failed = _report_line(criterion_line, 7, "elliptic family (A1, A2)", entries)
    for a in ("A1", "A2"):
        names = {e.name for e in entries if e.algebra == a}
        assert names == {"quasi_periodicity", "held_out_reconstruction", "top_integral_eq_I_k(xi)"}
    limits = {"quasi_periodicity": 1e-7, "held_out_reconstruction": 1e-7, "top_integral_eq_I_k(xi)": 1e-8}
    assert all(e.value < limits[e.name] for e in entries)
    assert ok, failed


def test_criterion_08_poisson_commutation(criterion_line):
    rep = _main_report()
    wanted = {("A2", "rational:full"), ("A2", "rational:span0"), ("B2", "rational:full"),
              ("B2", "rational:span0"), ("A2", "trigonometric:full"), ("A2", "trigonometric:span0"),
              ("A1", ELLIPTIC), ("A2", ELLIPTIC)}
    entries = [e for e in _entries(rep, 8) if (e.algebra, e.family) in wanted]
    ok, failed = _report_line(criterion_line, 8, "on-shell commutation, O(h^2), off-shell witness", entries)
    assert {(e.algebra, e.family) for e in entries} == wanted
    for e in entries:
        if e.name == "commutation_on_shell":
            assert e.value < 1e-7
        if e.name == "off_shell_witness":
            assert e.comparison == ">" and e.value > e.threshold
    assert ok, failed


def test_criterion_09_flow_conservation(criterion_line):
    rep = _main_report()
    wanted = {("A1", "rational:full"), ("A2", "rational:full"), ("A1", ELLIPTIC)}
    entries = [e for e in _entries(rep, 9) if (e.algebra, e.family) in wanted]
    ok, failed = _report_line(criterion_line, 9, "flow conservation, T=1, tol 1e-10", entries)
    assert {(e.algebra, e.family) for e in entries} == wanted
    assert {e.name for e in entries} == {"flow_integral_drift", "flow_momentum_drift"}
    assert all(e.value < 1e-6 for e in entries)
    assert rep.config["tolerances"]["integrator_tol"] == 1e-10 and rep.config["flow"]["T"] == 1.0
    assert ok, failed


def test_criterion_10_independence(criterion_line):
    rep = _main_report()
    entries = [e for a in ("A2", "B2", "A3") for e in _entries(rep, 10, algebra=a)]
    ok, failed = _report_line(criterion_line, 10, "independence (A2, B2, A3)", entries)
    expected = {"A2": 5, "B2": 6, "A3": 9}
    for a, r in expected.items():
        ranks = [e for e in entries if e.algebra == a and e.name == "jacobian_rank"]
        assert len(ranks) == 5 and all(e.details["expected"] == r for e in ranks)
        names = {e.name for e in entries if e.algebra == a}
        assert {"block_triangularity", "det_ratio_constancy", "A_j_full_rank", "jacobian_rank"} <= names
    assert all(e.value < 1e-9 for e in entries if e.name == "block_triangularity")
    assert all(e.value < 1e-6 for e in entries if e.name.startswith("det_"))
    assert ok, failed


def test_criterion_11_liouville_bookkeeping(criterion_line):
    rep = _main_report()
    entries = _entries(rep, 11)
    ok, failed = _report_line(criterion_line, 11, "Liouville bookkeeping", entries)
    for a in ("A1", "A2", "B2", "A3"):
        kinds = {e.family for e in entries if e.algebra == a and e.name == "liouville_count"}
        assert kinds == {"rational", "trigonometric", "elliptic"}
    assert all(e.value == 0 for e in entries)
    assert ok, failed


def test_criterion_12_weierstrass_layer(criterion_line):
    L = Lattice(*LATTICE)
    rng = np.random.default_rng(12)
    s, t = rng.uniform(0.05, 0.95, 10), rng.uniform(0.05, 0.95, 10)
    z = 2 * L.omega1 * s + 2 * L.omega2 * t
    P, D = wp(L, z), wp(L, z, 1)
    legendre = L.legendre_residual()
    ode = float(np.max(np.abs(D ** 2 - (4 * P ** 3 - L.g2 * P - L.g3)) / np.maximum(np.abs(D) ** 2, 1.0)))
    ref = wp_strip_sum(*LATTICE, z)
    oracle = float(np.max(np.abs(P - ref)) / np.max(np.abs(ref)))
    ok = legendre < 1e-8 and ode < 1e-8 and oracle < 1e-7
    detail = f"legendre {legendre:.1e}, ode {ode:.1e}, series vs strip oracle {oracle:.1e} at 10 points"
    criterion_line(12, "Weierstrass layer", detail)
    print(f"criterion 12: {'PASS' if ok else 'FAIL'} Weierstrass layer -- {detail}")
    assert legendre < 1e-8
    assert ode < 1e-8
    assert oracle < 1e-7
