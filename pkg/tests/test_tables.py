from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ybeloops import constructions as co
from ybeloops.tables import (
    LawId,
    LawNeedsDivision,
    MulTable,
    NotALoop,
    NotBruck,
    Not2Divisible,
    NotLeftQuasigroup,
    NotRightQuasigroup,
    OutOfRange,
    Ragged,
    bruck_loop,
    center,
    check_law,
    classify_loop,
    closure,
    element_orders,
    find_identity,
    holds,
    idempotents,
    left_division,
    loop_from_mul,
    quasigroup_from_mul,
    right_division,
    squaring_map,
    subloops,
    table_from_function,
    validate_table,
)


def cyclic(n):
    return table_from_function(n, lambda x, y: (x + y) % n)


def test_multable_is_read_only_and_hashable():
    m = cyclic(3)
    with pytest.raises(ValueError):
        m.t[0, 0] = 1
    assert m == cyclic(3) and hash(m) == hash(cyclic(3))
    assert m[1, 2] == 0


def test_validation_errors():
    with pytest.raises(Ragged):
        MulTable([[0, 1], [1]])
    with pytest.raises(OutOfRange):
        MulTable([[0, 2], [1, 0]])
    with pytest.raises(Ragged):
        validate_table(3, [[0, 1], [1, 0]])


def test_divisions_invert_rows_and_columns():
    m = cyclic(5)
    q = quasigroup_from_mul(m)
    assert q.quasigroup_axiom_failures() == []
    assert np.array_equal(left_division(m).t, (np.arange(5)[None, :] - np.arange(5)[:, None]) % 5)
    assert np.array_equal(right_division(m).t, (np.arange(5)[:, None] - np.arange(5)[None, :]) % 5)


def test_left_only_quasigroup():
    m = MulTable([[0, 1], [0, 1]])  # x*y = y: rows are permutations, columns are not
    assert left_division(m) is not None
    with pytest.raises(NotRightQuasigroup):
        right_division(m)
    with pytest.raises(NotLeftQuasigroup):
        left_division(MulTable([[0, 0], [1, 1]]))


def test_identity_and_loops():
    assert find_identity(cyclic(4)) == 0
    quandle = MulTable([[0, 2, 1], [2, 1, 0], [1, 0, 2]])
    assert find_identity(quandle) is None
    with pytest.raises(NotALoop):
        loop_from_mul(quandle)


def test_law_counterexample_shape():
    quandle = MulTable([[0, 2, 1], [2, 1, 0], [1, 0, 2]])  # 2x - y mod 3
    assert holds(quandle, LawId.IDEMP) and holds(quandle, LawId.LD) and holds(quandle, LawId.LS)
    bad = check_law(quandle, LawId.ASSOC, cap=3)
    assert 0 < len(bad) <= 3
    for c in bad:
        assert c.law == "ASSOC" and c.lhs != c.rhs and len(c.args) == 3


def test_law_needing_division_on_left_quasigroup():
    m = MulTable([[0, 1], [0, 1]])
    with pytest.raises(LawNeedsDivision):
        check_law(m, LawId.RF)
    assert holds(m, LawId.LF)


def test_cyclic_group_classification():
    c = classify_loop(cyclic(9))
    assert c.associative and c.commutative and c.bol and c.moufang and c.bruck
    assert c.exponent == 9 and c.uniquely_2_divisible
    assert not classify_loop(cyclic(4)).uniquely_2_divisible


def test_bruck_loop_rejections():
    with pytest.raises(Not2Divisible):
        bruck_loop(cyclic(4))
    # nonassociative loop of order 5 that is not Bol
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NotBruck) as exc:
        bruck_loop(t)
    assert exc.value.law in ("BOL", "AIP", "two-sided inverses")


def test_bp3_loop_facts(b53):
    c = classify_loop(b53)
    assert c.bruck and not c.commutative and not c.moufang and not c.associative
    assert set(element_orders(b53.loop)) == {1, 3, 5}
    sizes = sorted(len(s) for s in subloops(b53))
    assert sizes.count(3) == 5 and sizes.count(5) == 1 and sizes[-1] == 15
    assert center(b53) == (b53.e,)


def test_l3_is_cml(l3):
    c = classify_loop(l3)
    assert c.cml and c.exponent == 3 and not c.associative
    assert len(center(l3)) == 3


def test_squaring_and_idempotents():
    m = cyclic(5)
    assert np.array_equal(squaring_map(m), (2 * np.arange(5)) % 5)
    assert np.array_equal(squaring_map(m, "rdiv"), np.zeros(5))
    quandle = MulTable((2 * np.arange(5)[:, None] - np.arange(5)[None, :]) % 5)
    assert idempotents(quandle) == tuple(range(5))


def test_closure_with_unary():
    t = cyclic(9).t
    assert closure(t, [3]).tolist() == [0, 3, 6]
    neg = (-np.arange(9)) % 9
    assert closure(t, [0], [neg]).tolist() == [0]


@st.composite
def group_relabelings(draw):
    moduli = draw(st.sampled_from([(3,), (5,), (3, 3), (9,), (15,)]))
    loop = co.abelian_group(moduli)
    perm = draw(st.permutations(range(loop.n)))
    return loop.table, perm


@given(group_relabelings())
def test_classification_is_labeling_invariant(data):
    m, perm = data
    a, b = classify_loop(m), classify_loop(m.relabel(perm))
    assert replace(a, power_orders=None) == replace(b, power_orders=None)
    assert sorted(a.power_orders) == sorted(b.power_orders)


@given(st.integers(2, 12), st.data())
def test_relabel_is_an_isomorphism(n, data):
    m = cyclic(n)
    perm = np.array(data.draw(st.permutations(range(n))))
    r = m.relabel(perm)
    x, y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    assert np.array_equal(r.t[perm[x], perm[y]], perm[m.t])
