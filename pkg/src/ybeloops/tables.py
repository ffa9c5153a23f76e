"""Finite magmas, quasigroups and loops stored as index tables.

Every structure lives on the carrier ``{0, ..., n-1}``; ``t[x][y]`` is the
product ``x * y``.  Identities are checked by brute force over all variable
assignments, which is cheap for the orders used here (``n <= 81``, at most
three variables).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

DEFAULT_CAP = 16


class TableError(ValueError):
    """Base class for malformed or unsuitable tables."""


class OutOfRange(TableError):
    def __init__(self, row: int, col: int, value):
        self.row, self.col, self.value = row, col, value
        super().__init__(f"entry ({row}, {col}) = {value!r} is outside 0..n-1")


class Ragged(TableError):
    def __init__(self, row: int, length: int, n: int):
        self.row, self.length = row, length
        super().__init__(f"row {row} has {length} entries, expected {n}")


class NotLeftQuasigroup(TableError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row} is not a permutation")


class NotRightQuasigroup(TableError):
    def __init__(self, col: int):
        self.col = col
        super().__init__(f"column {col} is not a permutation")


class NotALoop(TableError):
    pass


class LawNeedsDivision(TableError):
    pass


class LawNeedsInverse(TableError):
    pass


class NotPowerAssociative(TableError):
    def __init__(self, element: int):
        self.element = element
        super().__init__(f"element {element} does not generate a group")


class NotBruck(TableError):
    def __init__(self, law: str, witness: tuple):
        self.law, self.witness = law, witness
        super().__init__(f"{law} fails at {witness}")


class Not2Divisible(TableError):
    pass


# --------------------------------------------------------------------------
# tables


class MulTable:
    """An ``n x n`` multiplication table with entries in ``range(n)``.

    The array is read-only; tables compare and hash by content.
    """

    __slots__ = ("_t", "__dict__")

    def __init__(self, rows):
        if isinstance(rows, MulTable):
            arr = rows._t
        else:
            arr = _checked_array(rows)
        arr = np.array(arr, dtype=np.int64)
        arr.setflags(write=False)
        self._t = arr

    @property
    def t(self) -> np.ndarray:
        return self._t

    @property
    def n(self) -> int:
        return self._t.shape[0]

    def __getitem__(self, xy):
        return int(self._t[xy])

    def __eq__(self, other):
        return isinstance(other, MulTable) and np.array_equal(self._t, other._t)

    def __hash__(self):
        return hash(self._t.tobytes())

    def __repr__(self):
        return f"MulTable(n={self.n})"

    def tolist(self) -> list[list[int]]:
        return self._t.tolist()

    def relabel(self, perm: Sequence[int]) -> "MulTable":
        """Transport the operation along the bijection ``perm``."""
        p = np.asarray(perm, dtype=np.int64)
        new = np.empty_like(self._t)
        new[np.ix_(p, p)] = p[self._t]
        return MulTable(new)


def _checked_array(rows) -> np.ndarray:
    if isinstance(rows, np.ndarray):
        if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
            raise Ragged(0, rows.shape[-1] if rows.ndim else 0, rows.shape[0] if rows.ndim else 0)
        n = rows.shape[0]
        bad = np.argwhere((rows < 0) | (rows >= n))
        if len(bad):
            r, c = bad[0]
            raise OutOfRange(int(r), int(c), rows[r, c].item())
        return rows
    rows = [list(r) for r in rows]
    return validate_table(len(rows), rows).t


def validate_table(n: int, raw) -> MulTable:
    """Check that ``raw`` is an ``n x n`` table of indices and wrap it."""
    raw = list(raw)
    if len(raw) != n:
        raise Ragged(len(raw), len(raw), n)
    for i, row in enumerate(raw):
        row = list(row)
        if len(row) != n:
            raise Ragged(i, len(row), n)
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v < n:
                raise OutOfRange(i, j, v)
    return MulTable(np.array(raw, dtype=np.int64).reshape(n, n))


def table_from_function(n: int, op: Callable[[int, int], int]) -> MulTable:
    return MulTable([[op(x, y) for y in range(n)] for x in range(n)])


def is_permutation(arr) -> bool:
    arr = np.asarray(arr)
    return bool(np.array_equal(np.sort(arr), np.arange(len(arr))))


def left_division(m: MulTable) -> MulTable:
    """Table of ``x \\ y`` (the z with ``x*z = y``); rows must be permutations."""
    t = m.t
    n = m.n
    ld = np.empty_like(t)
    for x in range(n):
        if not is_permutation(t[x]):
            raise NotLeftQuasigroup(x)
        ld[x, t[x]] = np.arange(n)
    return MulTable(ld)


def right_division(m: MulTable) -> MulTable:
    """Table of ``x / y`` (the z with ``z*y = x``); columns must be permutations."""
    t = m.t
    n = m.n
    rd = np.empty_like(t)
    for y in range(n):
        if not is_permutation(t[:, y]):
            raise NotRightQuasigroup(y)
        rd[t[:, y], y] = np.arange(n)
    return MulTable(rd)


@dataclass(frozen=True, eq=False)
class QuasigroupData:
    mul: MulTable
    ldiv: MulTable
    rdiv: MulTable

    @property
    def n(self) -> int:
        return self.mul.n

    def quasigroup_axiom_failures(self, cap: int = DEFAULT_CAP) -> list:
        """Counterexamples to (IL), (SL), (IR), (SR); empty for a valid quasigroup."""
        m, ld, rd = self.mul.t, self.ldiv.t, self.rdiv.t
        n = self.n
        y = np.arange(n)[:, None]
        x = np.arange(n)[None, :]
        checks = {
            "IL": (ld[y, m[y, x]], np.broadcast_to(x, (n, n))),
            "SL": (m[y, ld[y, x]], np.broadcast_to(x, (n, n))),
            "IR": (rd[m[x, y], y], np.broadcast_to(x, (n, n))),
            "SR": (m[rd[x, y], y], np.broadcast_to(x, (n, n))),
        }
        out = []
        for name, (lhs, rhs) in checks.items():
            for yy, xx in np.argwhere(lhs != rhs)[:cap]:
                out.append(Counterexample(name, (int(xx), int(yy)), int(lhs[yy, xx]), int(rhs[yy, xx])))
        return out[:cap]


def quasigroup_from_mul(m: MulTable) -> QuasigroupData:
    """Invert rows and columns of ``m``; fails unless ``m`` is a Latin square."""
    return QuasigroupData(m, left_division(m), right_division(m))


def find_identity(m: MulTable) -> Optional[int]:
    t = m.t
    ar = np.arange(m.n)
    for e in range(m.n):
        if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar):
            return e
    return None


@dataclass(frozen=True, eq=False)
class LoopData:
    q: QuasigroupData
    e: int

    @property
    def n(self) -> int:
        return self.q.n

    @property
    def mul(self) -> MulTable:
        return self.q.mul

    @cached_property
    def inv(self) -> np.ndarray:
        """Two-sided inverses; raises if some element lacks one."""
        t = self.mul.t
        right = self.q.ldiv.t[:, self.e]  # x * right[x] = e
        left = self.q.rdiv.t[self.e, :]  # left[x] * x = e
        if not np.array_equal(left, right):
            bad = int(np.argmax(left != right))
            raise LawNeedsInverse(f"element {bad} has no two-sided inverse")
        assert np.all(t[np.arange(self.n), right] == self.e)
        return right


def loop_from_mul(m: MulTable) -> LoopData:
    q = quasigroup_from_mul(m)
    e = find_identity(m)
    if e is None:
        raise NotALoop("table has no two-sided identity")
    return LoopData(q, e)


def as_loop(obj) -> LoopData:
    if isinstance(obj, LoopData):
        return obj
    if isinstance(obj, BruckLoopData):
        return obj.loop
    if isinstance(obj, QuasigroupData):
        obj = obj.mul
    return loop_from_mul(MulTable(obj))


# --------------------------------------------------------------------------
# law engine


@dataclass(frozen=True)
class Counterexample:
    law: str
    args: tuple
    lhs: int
    rhs: int


class _Ops:
    """The operations a law may refer to, resolved lazily from the input."""

    def __init__(self, obj):
        self.ldiv = self.rdiv = None
        self._loop = None
        if isinstance(obj, BruckLoopData):
            obj = obj.loop
        if isinstance(obj, LoopData):
            self._loop = obj
            obj = obj.q
        if isinstance(obj, QuasigroupData):
            self._table = obj.mul
            self.mul = obj.mul.t
            self.ldiv = obj.ldiv.t
            self.rdiv = obj.rdiv.t
        else:
            m = MulTable(obj)
            self.mul = m.t
            self._table = m
        self.n = self.mul.shape[0]

    def need_ldiv(self):
        if self.ldiv is None:
            try:
                self.ldiv = left_division(self._table).t
            except NotLeftQuasigroup as exc:
                raise LawNeedsDivision(f"left division unavailable: {exc}") from None
        return self.ldiv

    def need_rdiv(self):
        if self.rdiv is None:
            try:
                self.rdiv = right_division(self._table).t
            except NotRightQuasigroup as exc:
                raise LawNeedsDivision(f"right division unavailable: {exc}") from None
        return self.rdiv

    def need_inv(self):
        if self._loop is None:
            try:
                self._loop = loop_from_mul(self._table)
            except TableError as exc:
                raise LawNeedsInverse(f"not a loop: {exc}") from None
        return self._loop.inv


@dataclass(frozen=True)
class _Law:
    arity: int
    fn: Callable


def _m(o, a, b):
    return o.mul[a, b]


class LawId(enum.Enum):
    """Named identities; values are the evaluators (lhs, rhs) over index arrays."""

    ASSOC = _Law(3, lambda o, x, y, z: (_m(o, _m(o, x, y), z), _m(o, x, _m(o, y, z))))
    COMM = _Law(2, lambda o, x, y: (_m(o, x, y), _m(o, y, x)))
    IDEMP = _Law(1, lambda o, x: (_m(o, x, x), x))
    LS = _Law(2, lambda o, x, y: (_m(o, x, _m(o, x, y)), y))
    RS = _Law(2, lambda o, x, y: (_m(o, _m(o, y, x), x), y))
    SS1 = _Law(2, lambda o, x, y: (_m(o, x, _m(o, y, x)), y))
    SS2 = _Law(2, lambda o, x, y: (_m(o, _m(o, x, y), x), y))
    LD = _Law(3, lambda o, x, y, z: (_m(o, x, _m(o, y, z)), _m(o, _m(o, x, y), _m(o, x, z))))
    LF = _Law(3, lambda o, x, y, z: (
        _m(o, x, _m(o, y, z)), _m(o, _m(o, x, y), _m(o, o.need_ldiv()[x, x], z))))
    RF = _Law(3, lambda o, x, y, z: (
        _m(o, _m(o, z, y), x), _m(o, _m(o, z, o.need_rdiv()[x, x]), _m(o, y, x))))
    BOL = _Law(3, lambda o, x, y, z: (_m(o, x, _m(o, y, _m(o, x, z))), _m(o, _m(o, x, _m(o, y, x)), z)))
    MOUFANG = _Law(3, lambda o, x, y, z: (_m(o, x, _m(o, y, _m(o, x, z))), _m(o, _m(o, _m(o, x, y), x), z)))
    AIP = _Law(2, lambda o, x, y: (o.need_inv()[_m(o, x, y)], _m(o, o.need_inv()[x], o.need_inv()[y])))
    LIP = _Law(2, lambda o, x, y: (_m(o, o.need_inv()[x], _m(o, x, y)), y))
    RIP = _Law(2, lambda o, x, y: (_m(o, _m(o, y, x), o.need_inv()[x]), y))
    MANIN = _Law(3, lambda o, x, y, z: (_m(o, _m(o, x, x), _m(o, y, z)), _m(o, _m(o, x, y), _m(o, x, z))))
    SQ_LIP = _Law(2, lambda o, x, y: (_m(o, o.need_ldiv()[x, x], _m(o, x, y)), y))

    @property
    def arity(self) -> int:
        return self.value.arity


def evaluate_law(obj, law: LawId):
    """Return broadcast (lhs, rhs) arrays of shape ``(n,) * arity``."""
    o = _Ops(obj)
    k = law.arity
    n = o.n
    vars_ = [np.arange(n).reshape([n if i == j else 1 for j in range(k)]) for i in range(k)]
    lhs, rhs = law.value.fn(o, *vars_)
    shape = (n,) * k
    return np.broadcast_to(lhs, shape), np.broadcast_to(rhs, shape)


def check_law(obj, law: LawId, cap: int = DEFAULT_CAP) -> list[Counterexample]:
    """Every violating assignment (up to ``cap``); an empty list means the law holds."""
    lhs, rhs = evaluate_law(obj, law)
    bad = np.argwhere(lhs != rhs)[:cap]
    return [Counterexample(law.name, tuple(int(v) for v in idx), int(lhs[tuple(idx)]), int(rhs[tuple(idx)]))
            for idx in bad]


def holds(obj, law: LawId) -> bool:
    lhs, rhs = evaluate_law(obj, law)
    return bool(np.array_equal(lhs, rhs))


# --------------------------------------------------------------------------
# maps on tables


def squaring_map(obj, which: str = "mul") -> np.ndarray:
    """``x -> x op x`` for ``op`` one of ``mul``, ``ldiv``, ``rdiv``."""
    o = _Ops(obj)
    ar = np.arange(o.n)
    if which == "mul":
        return o.mul[ar, ar].copy()
    if which == "ldiv":
        return o.need_ldiv()[ar, ar].copy()
    if which == "rdiv":
        return o.need_rdiv()[ar, ar].copy()
    raise ValueError(f"unknown operation {which!r}")


def idempotents(m) -> tuple[int, ...]:
    t = _Ops(m).mul
    return tuple(int(x) for x in np.flatnonzero(t[np.arange(len(t)), np.arange(len(t))] == np.arange(len(t))))


def closure(t: np.ndarray, seeds: Iterable[int], unary: Sequence[np.ndarray] = ()) -> np.ndarray:
    """Sorted array of the smallest subset containing ``seeds`` closed under ``t`` and ``unary``."""
    n = t.shape[0]
    member = np.zeros(n, dtype=bool)
    new = np.unique(np.fromiter(seeds, dtype=np.int64))
    member[new] = True
    while len(new):
        dom = np.flatnonzero(member)
        cand = [t[np.ix_(new, dom)].ravel(), t[np.ix_(dom, new)].ravel()]
        cand += [u[new] for u in unary]
        cand = np.unique(np.concatenate(cand))
        new = cand[~member[cand]]
        member[new] = True
    return np.flatnonzero(member)


# --------------------------------------------------------------------------
# loops


@dataclass(frozen=True, eq=False)
class BruckLoopData:
    """A uniquely 2-divisible Bruck loop written additively."""

    loop: LoopData
    neg: np.ndarray
    dbl: np.ndarray
    half: np.ndarray

    @property
    def n(self) -> int:
        return self.loop.n

    @property
    def e(self) -> int:
        return self.loop.e

    @property
    def table(self) -> MulTable:
        return self.loop.mul

    def add(self, x, y):
        return self.loop.mul.t[x, y]

    def sub(self, x, y):
        """``x - y`` meaning ``x + (-y)``."""
        return self.loop.mul.t[x, self.neg[y]]


def bruck_loop(obj) -> BruckLoopData:
    """Validate a uniquely 2-divisible Bruck loop and precompute neg/dbl/half."""
    loop = as_loop(obj)
    for law in (LawId.BOL, LawId.AIP):
        try:
            bad = check_law(loop, law, cap=1)
        except LawNeedsInverse as exc:
            raise NotBruck("two-sided inverses", ()) from exc
        if bad:
            raise NotBruck(law.name, bad[0].args)
    ar = np.arange(loop.n)
    dbl = loop.mul.t[ar, ar].copy()
    if not is_permutation(dbl):
        raise Not2Divisible("x -> x+x is not a bijection")
    half = np.empty_like(dbl)
    half[dbl] = ar
    neg = loop.inv.copy()
    for a in (neg, dbl, half):
        a.setflags(write=False)
    return BruckLoopData(loop, neg, dbl, half)


def element_orders(l: LoopData) -> tuple[int, ...]:
    """Order of each element, i.e. the size of the group it generates.

    Refuses loops where some element does not generate an associative subloop.
    """
    t = l.mul.t
    orders = []
    for x in range(l.n):
        sub = closure(t, [x])
        s = t[np.ix_(sub, sub)]
        # relabel into the subloop to test associativity there
        pos = np.full(l.n, -1)
        pos[sub] = np.arange(len(sub))
        s = pos[s]
        if not np.array_equal(s[s, :], _assoc_rhs(s)):
            raise NotPowerAssociative(x)
        orders.append(len(sub))
    return tuple(orders)


def _assoc_rhs(s: np.ndarray) -> np.ndarray:
    k = s.shape[0]
    return s[np.arange(k)[:, None, None], s[None, :, :]]


@dataclass(frozen=True)
class LoopClassification:
    associative: bool
    commutative: bool
    bol: bool
    moufang: bool
    aip: bool
    lip: bool
    rip: bool
    cml: bool
    bruck: bool
    power_associative: bool
    power_orders: Optional[tuple[int, ...]]
    exponent: Optional[int]
    uniquely_2_divisible: bool
    bruck_data: Optional[BruckLoopData] = field(default=None, compare=False, repr=False)


def classify_loop(l) -> LoopClassification:
    """Loop-class flags from exhaustive law evaluation.

    ``power_orders`` and ``exponent`` are ``None`` when the loop is not power
    associative; :func:`element_orders` raises in that case.
    """
    l = as_loop(l)
    flag = {}
    for name, law in [("associative", LawId.ASSOC), ("commutative", LawId.COMM), ("bol", LawId.BOL),
                      ("moufang", LawId.MOUFANG), ("manin", LawId.MANIN)]:
        flag[name] = holds(l, law)
    try:
        l.inv
        for name, law in [("aip", LawId.AIP), ("lip", LawId.LIP), ("rip", LawId.RIP)]:
            flag[name] = holds(l, law)
    except LawNeedsInverse:
        flag.update(aip=False, lip=False, rip=False)
    try:
        orders = element_orders(l)
        exponent = math.lcm(*orders)
    except NotPowerAssociative:
        orders = exponent = None
    ar = np.arange(l.n)
    two_div = is_permutation(l.mul.t[ar, ar])
    bruck = flag["bol"] and flag["aip"]
    data = bruck_loop(l) if bruck and two_div else None
    return LoopClassification(
        associative=flag["associative"], commutative=flag["commutative"], bol=flag["bol"],
        moufang=flag["moufang"], aip=flag["aip"], lip=flag["lip"], rip=flag["rip"],
        cml=flag["manin"], bruck=bruck, power_associative=orders is not None,
        power_orders=orders, exponent=exponent, uniquely_2_divisible=two_div, bruck_data=data)


def center(l) -> tuple[int, ...]:
    """Elements that commute and associate with everything, in every position."""
    l = as_loop(l)
    t = l.mul.t
    lhs, rhs = evaluate_law(l, LawId.ASSOC)
    eq = lhs == rhs
    nucleus = eq.all(axis=(1, 2)) & eq.all(axis=(0, 2)) & eq.all(axis=(0, 1))
    comm = (t == t.T).all(axis=1)
    return tuple(int(x) for x in np.flatnonzero(nucleus & comm))


def subloops(l, max_generators: int = 2) -> list[tuple[int, ...]]:
    """Distinct subloops generated by at most ``max_generators`` elements."""
    l = as_loop(l)
    t = l.mul.t
    found = set()
    frontier = {(): (l.e,)}
    for _ in range(max_generators):
        nxt = {}
        for gens in frontier:
            for x in range(l.n):
                key = tuple(sorted(set(gens) | {x}))
                if key in nxt:
                    continue
                nxt[key] = tuple(closure(t, list(key) + [l.e]).tolist())
        frontier = nxt
        found.update(nxt.values())
    found.add((l.e,))
    return sorted(found, key=lambda s: (len(s), s))


LoopLike = Union[MulTable, QuasigroupData, LoopData, BruckLoopData]
