import numpy as np
import pytest
from hypothesis import given, strategies as st

from ybeloops import braided as br
from ybeloops import classify as cl
from ybeloops import constructions as co
from ybeloops.tables import MulTable, NotALoop

from conftest import small_descriptors


def derived(circ):
    n = len(circ)
    return br.BraidedSet(circ, np.broadcast_to(np.arange(n)[:, None], (n, n)).copy())


@pytest.mark.parametrize("n,count", [(1, 1), (2, 2), (3, 12), (4, 576), (5, 161280)])
def test_latin_square_counts(n, count):
    sq = cl.latin_squares(n)
    assert len(sq) == count
    assert len({s.tobytes() for s in sq}) == count


def test_size_limits():
    with pytest.raises(cl.InfeasibleSize):
        cl.latin_squares(6)
    with pytest.raises(cl.InfeasibleSize):
        cl.brute_force_solutions(5, derived=True)
    with pytest.raises(cl.InfeasibleSize):
        cl.brute_force_solutions(3, latin=True)


@pytest.mark.parametrize("n,racks", [(1, 1), (2, 2), (3, 6), (4, 19)])
def test_rack_counts(n, racks):
    # derived solutions are exactly racks; these are the known counts up to isomorphism
    assert len(cl.brute_force_solutions(n, derived=True)) == racks


def test_small_derived_examples_found():
    two = {cl.canonical_form(b) for b in cl.brute_force_solutions(2, derived=True, dihedral=True)}
    assert cl.canonical_form(derived([[1, 0], [1, 0]])) in two
    four = {cl.canonical_form(b) for b in cl.brute_force_solutions(4, derived=True, dihedral=True)}
    d = derived([[1, 0, 2, 3], [1, 0, 2, 3], [0, 1, 3, 2], [0, 1, 3, 2]])
    assert cl.canonical_form(d) in four


@given(st.sampled_from([3, 5]), st.data())
def test_canonical_form_is_labeling_invariant(n, data):
    b = co.stock_solutions("abelian", n=n)
    perm = data.draw(st.permutations(range(n)))
    assert cl.canonical_form(b.relabel(perm)) == cl.canonical_form(b)


@pytest.mark.parametrize("n,count", [(2, 0), (3, 2), (4, 0)])
def test_latin_dihedral_counts(n, count):
    found = cl.brute_force_solutions(n, latin=True, dihedral=True)
    assert len(found) == count
    assert all(b.flags["latin"] and b.flags["dihedral"] for b in found)


def test_latin_triality_order_three():
    found = cl.brute_force_solutions(3, latin=True, triality=True)
    assert len(found) == 2 and all(b.flags["triality"] for b in found)


def test_oracle_pairs_order_three():
    agree = cl.oracle_agreement(3)
    assert agree.agree and agree.pairing == {0: agree.pairing[0], 1: 1 - agree.pairing[0]}


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_order_p(p):
    rep = cl.classify_order_p(p)
    assert rep.count == 2 and rep.all_distinct and rep.agrees_with_published


def test_order_p2_names_cover_all_classes():
    rep = cl.classify_order_p2(3)
    assert rep.count == 5 and len(rep.matches) == 5
    assert not any(n.startswith("class not among") for n in rep.notes)


def test_order_3p_reports_extra_classes():
    rep = cl.classify_order_3p(5)
    assert rep.count == 8 and rep.all_distinct
    assert rep.agrees_with_published is False
    assert any("square roots of 1 mod 15: [1, 4, 11, 14]" in n for n in rep.notes)
    # the two extra classes both live on the cyclic group
    extra = [r for r in rep.reps if r.name.startswith("Z/15 class")]
    assert len(extra) == 2


@pytest.mark.parametrize("order,count", [(3, 2), (9, 3), (27, 4)])
def test_lbts_small(order, count):
    rep = cl.classify_lbts(order)
    assert rep.count == count and rep.all_distinct and rep.notes == []


def test_lbts_bad_order():
    with pytest.raises(ValueError):
        cl.classify_lbts(243)


def test_split_extension():
    sq = cl.sq_analysis(co.signed_descriptor((3, 3), (1, -1)))
    assert sq.is_endomorphism and sq.split_verified and sq.intersection_trivial
    assert len(sq.fixed_locus) == 3 and len(sq.q_e) == 3


def test_bp3_sq_not_endomorphic():
    sq = cl.sq_analysis(co.bp3_descriptor(5, -1, 1, 0))
    assert not sq.is_endomorphism and sq.split_verified is None
    i, j, lhs, rhs = sq.plus_witnesses[0]
    assert lhs != rhs


@pytest.mark.parametrize("d", small_descriptors(), ids=lambda d: d.name)
def test_sq_structure(d):
    sq = cl.sq_analysis(d)
    # Sq is an endomorphism of + exactly when it is one of the quasigroup
    assert sq.endo_agree
    assert sq.idempotents_match and sq.substructures_closed and sq.intersection_trivial
    assert sq.q_e == sq.q_e_by_sign


def test_expected_tables():
    t1 = cl.load_expected("table1")
    t2 = cl.load_expected("table2")
    assert sum(t1.values()) == 24 and len(t1) == 7
    assert sum(t2.values()) == 263 and len(t2) == 72


def test_expected_file_errors(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("27/1 4 extra\n")
    with pytest.raises(ValueError):
        cl.load_expected(str(path))


def test_catalog_report_rejects_non_bruck():
    quandle = MulTable([[0, 2, 1], [2, 1, 0], [1, 0, 2]])
    with pytest.raises(NotALoop):
        cl.catalog_report([("q", quandle)])
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(cl.CatalogNotBruck) as exc:
        cl.catalog_report([("5/x", t)])
    assert exc.value.source == "5/x"


def test_catalog_report_rows():
    rep = cl.catalog_report(cl.associative_order27(), cl.load_expected("table1"))
    assert [(r.name, r.n_ci, r.match) for r in rep.rows] == [
        ("27/1", 4, True), ("27/2", 4, True), ("27/7", 2, True)]
    assert rep.missing == ["27/3", "27/4", "27/5", "27/6"]
    assert rep.total == 10


def test_subloop_counts(b53):
    assert cl.subloop_counts(b53) == {1: 1, 3: 5, 5: 1}
