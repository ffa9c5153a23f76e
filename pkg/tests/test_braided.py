import numpy as np
import pytest
from hypothesis import given, strategies as st

from ybeloops import braided as br
from ybeloops import constructions as co
from ybeloops.tables import LawId, MulTable, holds

EX_C = br.BraidedSet([[1, 0], [1, 0]], [[0, 0], [1, 1]])
EX_D_CIRC = [[1, 0, 2, 3], [1, 0, 2, 3], [0, 1, 3, 2], [0, 1, 3, 2]]
EX_LF_CIRC = [[1, 0, 2], [1, 0, 2], [0, 1, 2]]
EX_LF_BULLET = [[1, 1, 0], [0, 0, 1], [2, 2, 2]]


def derived(circ):
    n = len(circ)
    return br.BraidedSet(circ, np.broadcast_to(np.arange(n)[:, None], (n, n)).copy())


def test_order_two_derived_bds():
    assert br.is_solution(EX_C) == [] and br.is_dihedral(EX_C) == []
    assert not holds(EX_C.circ, LawId.IDEMP)
    nd = br.nondegeneracy_flags(EX_C)
    # bullet columns are identities, so the map is right nondegenerate
    assert nd.left and nd.right and not nd.latin


def test_order_four_derived_bds():
    b = derived(EX_D_CIRC)
    assert br.is_solution(b) == [] and br.is_dihedral(b) == []
    assert holds(b.circ, LawId.LD) and holds(b.circ, LawId.LS)
    assert not holds(b.circ, LawId.IDEMP)
    cols = [tuple(c) for c in b.circ.t.T.tolist()]
    assert any(len(set(c)) > 1 for c in cols)


def test_nonderived_lf_example():
    b = br.BraidedSet(EX_LF_CIRC, EX_LF_BULLET)
    assert br.is_solution(b) == [] and br.is_dihedral(b) == []
    nd = br.nondegeneracy_flags(b)
    assert nd.left and nd.right and not nd.latin
    dp = br.diagonal_pair(b)
    assert not np.array_equal(b.bullet.t, np.broadcast_to(dp.S[:, None], (3, 3)))
    assert holds(b.circ, LawId.LF)


def test_smith_solution_flags(z3sq):
    b = co.stock_solutions("smith", loop=z3sq)
    f = b.flags
    assert all(f[k] for k in ("solution", "dihedral", "triality", "latin", "biquandle", "bijective"))
    assert br.tau_r_squared_is_identity(b) and br.r_cubed_is_identity(b)


@pytest.mark.parametrize("n", [3, 5, 9])
def test_dihedral_quandle(n):
    b = co.stock_solutions("dihedral_quandle", n=n)
    assert b.flags["dihedral"]
    assert b.flags["triality"] == (n == 3)


def test_trivial_solution_is_not_triality():
    b = co.stock_solutions("trivial", n=3)
    assert b.flags["dihedral"] and not b.flags["triality"]
    assert br.is_triality(b)[0].law.startswith("Tri")


def test_counterexample_reported():
    b = br.BraidedSet([[0, 0], [1, 0]], [[1, 0], [0, 0]])
    bad = br.is_solution(b, cap=2)
    assert len(bad) == 2 and all(c.law.startswith("YB") for c in bad)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 4])
def test_braiding_order_of_abelian_family(n):
    b = co.stock_solutions("abelian", n=n)
    assert br.braiding_order(b) == br.BraidingOrder(n, 0)
    assert br.nondegeneracy_flags(b).latin == (n % 2 == 1)


def test_braiding_order_of_degenerate_map():
    b = br.BraidedSet([[0, 0], [0, 0]], [[0, 0], [0, 0]])
    assert br.braiding_order(b) == br.BraidingOrder(1, 1)


def test_qybe_dual(z3sq):
    b = co.stock_solutions("smith", loop=z3sq)
    assert br.qybe_dual_check(b) == br.QybeDual(True, True)


def test_missing_division():
    b = br.BraidedSet([[0, 0], [1, 1]], [[0, 0], [0, 0]])
    with pytest.raises(br.MissingDivision):
        br.diagonal_pair(b)
    assert not br.is_biquandle(b)


def test_derived_rack_of_lbds_is_kei():
    b, _ = co.lbds_from_descriptor(co.bp3_descriptor(5, -1, 1, 0))
    rack = br.derived_rack(b)
    for law in (LawId.LD, LawId.IDEMP, LawId.LS):
        assert holds(rack, law)


def tables(n, rows_perm=False):
    if rows_perm:
        row = st.permutations(range(n))
    else:
        row = st.lists(st.integers(0, n - 1), min_size=n, max_size=n)
    return st.lists(row, min_size=n, max_size=n)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(tables(n), tables(n))))
def test_component_identities_match_composition(pair):
    b = br.BraidedSet(*pair)
    assert (br.is_solution(b) == []) == br.braid_relation_by_composition(b)


@given(st.integers(1, 4).flatmap(lambda n: tables(n, rows_perm=True)))
def test_lf_law_iff_solution(rows):
    m = MulTable(rows)
    b = br.lf_map_solution(m)
    assert holds(m, LawId.LF) == (br.is_solution(b) == [])


@given(st.sampled_from([2, 3, 5]), st.data())
def test_flags_are_labeling_invariant(n, data):
    b = co.stock_solutions("dihedral_quandle", n=n)
    perm = data.draw(st.permutations(range(n)))
    assert b.relabel(perm).flags == b.flags
