"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
Runtime limits and the numeric tolerance are pinned below.
"""

import time

import numpy as np

from ybeloops import braided as br
from ybeloops import classify as cl
from ybeloops import constructions as co
from ybeloops import morphisms as mo
from ybeloops.tables import LawId, MulTable, as_loop, center, check_law, classify_loop, element_orders, holds, subloops

from conftest import small_descriptors

LIMIT_IDENTITY_S = 1.0
LIMIT_BP3_S = 10.0
LIMIT_ORACLE_S = 120.0
LIMIT_L3_S = 300.0
HOUSEHOLDER_TOL = 1e-9


def _fmt(checks: dict) -> tuple[bool, str]:
    bad = [k for k, v in checks.items() if not v]
    return not bad, "all checks hold" if not bad else "failed: " + ", ".join(bad)


def test_criterion_01_identity_suite(record):
    t0 = time.perf_counter()
    b = co.stock_solutions("smith", loop=co.abelian_group((3, 3)))
    nd = br.nondegeneracy_flags(b)
    checks = {
        "solution": br.is_solution(b) == [],
        "braid by composition": br.braid_relation_by_composition(b),
        "dihedral": br.is_dihedral(b) == [],
        "triality": br.is_triality(b) == [],
        "latin": nd.latin,
        "biquandle": br.is_biquandle(b),
    }
    elapsed = time.perf_counter() - t0
    checks[f"runtime {elapsed:.3f}s < {LIMIT_IDENTITY_S}s"] = elapsed < LIMIT_IDENTITY_S
    ok, detail = _fmt(checks)
    record(1, ok, f"Smith solution on (Z/3)^2: {detail}")
    assert ok, detail


def _bp3_checks(p: int) -> dict:
    t0 = time.perf_counter()
    loop = co.build_bpq(p, 3)
    sizes: dict[int, int] = {}
    for s in subloops(loop):
        sizes[len(s)] = sizes.get(len(s), 0) + 1
    g = mo.automorphism_group(loop.table, loop.e)
    checks = {
        "Bol": holds(loop, LawId.BOL),
        "AIP": holds(loop, LawId.AIP),
        "Moufang fails": check_law(loop, LawId.MOUFANG, cap=1) != [],
        "orders in {1,3,p}": set(element_orders(as_loop(loop))) <= {1, 3, p},
        "one order-p subloop": sizes.get(p) == 1,
        "p order-3 subloops": sizes.get(3) == p,
        "condensed == general": co.build_bp3_condensed(p).table == loop.table,
        f"|Aut| = {2 * p * (p - 1)}": g.order == 2 * p * (p - 1),
        "verify_ap3": mo.verify_ap3(p),
        "4 involution classes": len(mo.involution_classes(loop.table, loop.e, group=g)) == 4,
    }
    elapsed = time.perf_counter() - t0
    checks[f"runtime {elapsed:.2f}s < {LIMIT_BP3_S}s"] = elapsed < LIMIT_BP3_S
    return checks


def test_criterion_02_bp3(record):
    checks5, checks7 = _bp3_checks(5), _bp3_checks(7)
    ok5, d5 = _fmt(checks5)
    ok7, d7 = _fmt(checks7)
    record(2, ok5 and ok7, f"B_5,3: {d5}; B_7,3: {d7}")
    assert ok5 and ok7, (d5, d7)


def test_criterion_03_classification_counts(record):
    reports = {}
    for p in (3, 5, 7):
        reports[f"p={p}"] = cl.classify_order_p(p)
    for p in (3, 5):
        reports[f"p^2={p * p}"] = cl.classify_order_p2(p)
    for p in (5, 7):
        reports[f"3p={3 * p}"] = cl.classify_order_3p(p)
    parts, ok = [], True
    for key, rep in reports.items():
        good = rep.agrees_with_published and rep.all_distinct
        ok &= bool(good)
        parts.append(f"{key}: {rep.count} (expected {rep.published_count}, certified {rep.all_distinct})")
    record(3, ok, "; ".join(parts))
    assert ok, "; ".join(parts)


def test_criterion_04_oracle(record):
    t0 = time.perf_counter()
    agree = {n: cl.oracle_agreement(n) for n in (3, 5)}
    empty = {n: len(cl.brute_force_solutions(n, latin=True, dihedral=True)) for n in (2, 4)}
    tri5 = len(cl.brute_force_solutions(5, latin=True, triality=True))
    elapsed = time.perf_counter() - t0
    checks = {
        "n=3 two classes matched": agree[3].agree and agree[3].brute_count == 2,
        "n=5 two classes matched": agree[5].agree and agree[5].brute_count == 2,
        "n=2 none": empty[2] == 0,
        "n=4 none": empty[4] == 0,
        "n=5 triality none": tri5 == 0,
        f"runtime {elapsed:.1f}s < {LIMIT_ORACLE_S}s": elapsed < LIMIT_ORACLE_S,
    }
    ok, detail = _fmt(checks)
    record(4, ok, f"exhaustive search: {detail}")
    assert ok, detail


def test_criterion_05_l3(record):
    t0 = time.perf_counter()
    l3 = co.build_l3()
    cls = classify_loop(l3)
    n_inv = len(mo.involution_classes(l3.table, l3.e))
    rep81 = cl.classify_lbts(81)
    sq3 = cl.sq_analysis(co.l3_descriptor("S3"))
    sq4 = cl.sq_analysis(co.l3_descriptor("S4"))
    elapsed = time.perf_counter() - t0
    checks = {
        "order 81": l3.n == 81,
        "CML": cls.cml,
        "exponent 3": cls.exponent == 3,
        "nonassociative": not cls.associative,
        "center 3": len(center(l3)) == 3,
        f"involution classes {n_inv} = 4": n_inv == 4,
        f"LBTS order 81: {rep81.count} = 9": rep81.count == 9 and rep81.all_distinct,
        "S3 Sq endomorphic": sq3.is_endomorphism,
        "S4 Sq not endomorphic": not sq4.is_endomorphism,
        f"runtime {elapsed:.1f}s < {LIMIT_L3_S}s": elapsed < LIMIT_L3_S,
    }
    ok, detail = _fmt(checks)
    record(5, ok, f"L_3: {detail}")
    assert ok, detail


def test_criterion_06_table1_partial(record):
    expected = cl.load_expected("table1")
    rep = cl.catalog_report(cl.associative_order27(), expected)
    rows = ", ".join(f"{r.name}={r.n_ci} ({'match' if r.match else 'MISMATCH'})" for r in rep.rows)
    ok = rep.checked == 3 and rep.matched == 3 and [r.n_ci for r in rep.rows] == [4, 4, 2]
    record(6, ok, f"{rows}; order-27 total 24 and order-81 total 263 not verified: "
                  f"catalog loops {', '.join(rep.missing)} not ingested")
    assert ok, rows


def test_criterion_07_round_trips(record):
    descs = small_descriptors()
    rt_desc = rt_quasi = rt_quandle = rack_ok = True
    for d in descs:
        b, q = co.lbds_from_descriptor(d)
        back = co.descriptor_from_lbds(q, d.loop.e)
        rt_desc &= back.loop.table == d.loop.table and back.s == d.s
        b2, q2 = co.lbds_from_descriptor(back)
        rt_quasi &= b2 == b and q2.mul == q.mul
        quandle = co.quandle_bruck_roundtrip(d.loop)
        rt_quandle &= co.quandle_bruck_roundtrip(quandle, d.loop.e).table == d.loop.table
        rack = br.derived_rack(b)
        rack_ok &= (holds(rack, LawId.LD) and holds(rack, LawId.IDEMP)
                    and holds(rack, LawId.LS) and _is_latin(rack))
    brute = cl.brute_force_solutions(3, latin=True, dihedral=True)
    brute += cl.brute_force_solutions(5, latin=True, dihedral=True)
    for b in brute:
        e = int(np.flatnonzero(np.diag(b.circ.t) == np.arange(b.n))[0])
        rt_quasi &= co.lbds_from_descriptor(co.descriptor_from_lbds(b, e))[0] == b
    appendix = True
    instances = [co.lbds_from_descriptor(d)[0] for d in descs] + brute
    for b in instances:
        dp = br.diagonal_pair(b)
        appendix &= (dp.equal and dp.s_involutive
                     and np.array_equal(b.bullet.t, np.broadcast_to(dp.S[:, None], (b.n, b.n))))
    checks = {
        "descriptor -> LBDS -> descriptor": rt_desc,
        "LBDS -> descriptor -> LBDS": rt_quasi,
        "quandle <-> Bruck": rt_quandle,
        "derived rack is a left-symmetric Latin quandle": rack_ok,
        "x.y = x^S, S = T, S^2 = id": appendix,
    }
    ok, detail = _fmt(checks)
    record(7, ok, f"{len(descs)} descriptors, {len(instances)} Latin dihedral instances: {detail}")
    assert ok, detail


def _is_latin(m: MulTable) -> bool:
    t = m.t
    return all(len(set(r)) == m.n for r in t.tolist()) and all(len(set(c)) == m.n for c in t.T.tolist())


def test_criterion_08_structure(record):
    split = cl.sq_analysis(co.signed_descriptor((3, 3), (1, -1)))
    b53 = cl.sq_analysis(co.bp3_descriptor(5, -1, 1, 0))
    # witness shape: Sq kills the Z/3 coordinate, so Sq(i, j) = (0, j) with labels i*p + j
    ar = np.arange(15)
    witness_shape = np.array_equal(b53.sq, ar % 5)
    factor = True
    for order in (3, 9, 27, 81):
        for d in cl.lbts_named(order):
            factor &= bool(cl.sq_analysis(d).factorization)
    checks = {
        "(Z/3)^2 split extension": split.split_verified is True,
        "B_5,3 Sq not endomorphic": not b53.is_endomorphism and len(b53.plus_witnesses) > 0,
        "B_5,3 Sq(i, j) = (0, j)": witness_shape,
        "LBTS factorization": factor,
    }
    ok, detail = _fmt(checks)
    record(8, ok, f"Sq analysis: {detail}")
    assert ok, detail


def test_criterion_09_householder(record):
    rep = co.householder_braiding_check(dim=3, trials=1000, tol=HOUSEHOLDER_TOL, seed=0)
    space = _reflection_space(7)
    first, second = co.symmetric_space_solutions(space)
    forms = all(br.is_solution(b) == [] for b in (first, second))
    ok = rep.worst < HOUSEHOLDER_TOL and forms
    record(9, ok, f"dim 3, 1000 triples: residuals {rep.residual_first:.1e}/{rep.residual_second:.1e} "
                  f"< {HOUSEHOLDER_TOL:.0e}; finite pointed-space forms are solutions: {forms}")
    assert ok


def _reflection_space(n: int) -> co.PointedSymmetricSpace:
    ar = np.arange(n)
    return co.PointedSymmetricSpace((2 * ar[:, None] - ar[None, :]) % n, 0)


def test_criterion_10_braiding_order(record):
    abelian = {n: br.braiding_order(co.stock_solutions("abelian", n=n)).order for n in (3, 5, 7, 9)}
    lbts = [br.braiding_order(co.lbds_from_descriptor(d)[0]).order
            for order in (3, 9, 27, 81) for d in cl.lbts_named(order)]
    ok = all(abelian[n] == n for n in abelian) and set(lbts) == {3}
    record(10, ok, f"abelian Z/n orders {abelian}; {len(lbts)} LBTS instances with orders {sorted(set(lbts))}")
    assert ok
