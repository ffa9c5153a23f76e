"""Classification of LBDS by involution classes, with an exhaustive oracle for tiny orders.

Over a fixed uniquely 2-divisible Bruck loop, LBDS up to isomorphism correspond
to conjugacy classes of involutive automorphisms.  The pipeline below takes a
complete list of Bruck loops of an order, computes those classes, matches them
against any named representatives, and certifies pairwise non-isomorphism with
the intertwiner search.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from . import morphisms as mo
from .braided import BraidedSet, is_triality
from .constructions import (
    LbdsDescriptor,
    abelian_group,
    bp3_descriptor,
    build_bpq,
    build_l3,
    descriptor_from_lbds,
    l3_descriptor,
    lbds_from_descriptor,
    make_descriptor,
    signed_descriptor,
    zn_descriptor,
)
from .tables import (
    BruckLoopData,
    MulTable,
    NotBruck,
    bruck_loop,
    classify_loop,
    closure,
    is_permutation,
)


class InfeasibleSize(ValueError):
    pass


class CatalogNotBruck(NotBruck):
    def __init__(self, source: str, law: str, witness: tuple):
        self.source = source
        super().__init__(law, witness)
        self.args = (f"{source}: {law} fails at {witness}",)


@dataclass(frozen=True)
class Certificate:
    """Why representatives ``i`` and ``j`` are not isomorphic."""

    i: int
    j: int
    reason: str
    nodes: int = 0


@dataclass
class ClassificationReport:
    order: int
    reps: list[LbdsDescriptor]
    certificates: list[Certificate]
    published_count: Optional[int] = None
    matches: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.reps)

    @property
    def all_distinct(self) -> bool:
        k = self.count
        return len(self.certificates) == k * (k - 1) // 2

    @property
    def agrees_with_published(self) -> Optional[bool]:
        return None if self.published_count is None else self.count == self.published_count


# --------------------------------------------------------------------------
# pipeline


def _spectrum(d: LbdsDescriptor) -> tuple[int, int]:
    s = d.s_array
    ar = np.arange(d.n)
    return int(np.sum(s == ar)), int(np.sum(s == d.loop.neg))


def _sort_key(d: LbdsDescriptor):
    assoc = classify_loop(d.loop).associative
    return (not assoc, _spectrum(d), d.loop.table.t.tobytes(), d.s.img)


def classify_over_loops(order: int, loops: Sequence[tuple[str, BruckLoopData]],
                        named: Sequence[LbdsDescriptor] = (), published: Optional[int] = None,
                        budget: int = mo.DEFAULT_BUDGET) -> ClassificationReport:
    """One representative per involution class over each loop, matched to ``named``."""
    reps: list[LbdsDescriptor] = []
    matches: dict = {}
    notes: list[str] = []
    for lname, loop in loops:
        if loop.n != order:
            raise ValueError(f"{lname} has order {loop.n}, not {order}")
        classes = mo.involution_classes(loop.table, loop.e, budget=budget)
        for k, cls in enumerate(classes):
            members = set(p.img for p in cls.members)
            hit = [d for d in named if d.loop.table == loop.table and d.s.img in members]
            if len(hit) > 1:
                notes.append(f"named {[d.name for d in hit]} fall in one class over {lname}")
            if hit:
                rep = make_descriptor(loop, hit[0].s, hit[0].name)
                matches[hit[0].name] = len(reps)
            else:
                rep = make_descriptor(loop, cls.representative, f"{lname} class {k} (|class|={cls.size})")
                notes.append(f"class not among named representatives: {rep.name}, "
                             f"S fixes {_spectrum(rep)[0]} points")
            reps.append(rep)
    for d in named:
        if d.name not in matches:
            notes.append(f"named representative {d.name} is not over any listed loop")
    reps.sort(key=_sort_key)
    matches = {name: next(i for i, r in enumerate(reps) if r.name == name) for name in matches}
    certs = certify_distinct(reps, budget)
    return ClassificationReport(order, reps, certs, published, matches, notes)


def certify_distinct(reps: Sequence[LbdsDescriptor], budget: int = mo.DEFAULT_BUDGET) -> list[Certificate]:
    """One certificate per pair that the intertwiner search proves non-isomorphic."""
    out = []
    for i, j in itertools.combinations(range(len(reps)), 2):
        res = mo.lbds_isomorphic(reps[i], reps[j], budget)
        if not res.found:
            out.append(Certificate(i, j, res.reason, res.nodes))
    return out


def classify_order_p(p: int, budget: int = mo.DEFAULT_BUDGET) -> ClassificationReport:
    """Bruck loops of prime order are cyclic groups."""
    loops = [(f"Z/{p}", abelian_group((p,)))]
    named = [zn_descriptor(p, 1), zn_descriptor(p, -1)]
    return classify_over_loops(p, loops, named, 2, budget)


def classify_order_p2(p: int, budget: int = mo.DEFAULT_BUDGET) -> ClassificationReport:
    loops = [(f"Z/{p * p}", abelian_group((p * p,))), (f"(Z/{p})^2", abelian_group((p, p)))]
    named = [zn_descriptor(p * p, 1), zn_descriptor(p * p, -1),
             signed_descriptor((p, p), (1, 1), f"((Z/{p})^2, +1)"),
             signed_descriptor((p, p), (-1, -1), f"((Z/{p})^2, -1)"),
             signed_descriptor((p, p), (1, -1), f"((Z/{p})^2, 1+-1)")]
    return classify_over_loops(p * p, loops, named, 5, budget)


def classify_order_3p(p: int, budget: int = mo.DEFAULT_BUDGET) -> ClassificationReport:
    """Bruck loops of order 3p: the cyclic group and B_{p,3}."""
    loops = [(f"Z/{3 * p}", abelian_group((3 * p,))), (f"B_{p},3", build_bpq(p, 3))]
    named = [zn_descriptor(3 * p, 1), zn_descriptor(3 * p, -1)]
    named += [bp3_descriptor(p, a, b) for a, b in ((1, 1), (-1, -1), (1, -1), (-1, 1))]
    rep = classify_over_loops(3 * p, loops, named, 6, budget)
    units = [u for u in range(3 * p) if u * u % (3 * p) == 1]
    rep.notes.append(f"square roots of 1 mod {3 * p}: {units}")
    return rep


def lbts_named(order: int) -> list[LbdsDescriptor]:
    k = round(math.log(order, 3))
    out = []
    for plus in range(k, -1, -1):
        signs = (1,) * plus + (-1,) * (k - plus)
        out.append(signed_descriptor((3,) * k, signs, f"(Q_1)^{plus} x (Q_-1)^{k - plus}"))
    if order == 81:
        out += [l3_descriptor(s) for s in ("S1", "S2", "S3", "S4")]
    return out


LBTS_PUBLISHED = {3: 2, 9: 3, 27: 4, 81: 9}


def classify_lbts(order: int, budget: int = mo.DEFAULT_BUDGET) -> ClassificationReport:
    """LBTS live on commutative Moufang loops of exponent 3."""
    k = round(math.log(order, 3))
    if 3 ** k != order or order > 81:
        raise ValueError("order must be 3, 9, 27 or 81")
    loops = [(f"(Z/3)^{k}", abelian_group((3,) * k))]
    if order == 81:
        loops.append(("L3", build_l3()))
    rep = classify_over_loops(order, loops, lbts_named(order), LBTS_PUBLISHED[order], budget)
    for d in rep.reps:
        b, _ = lbds_from_descriptor(d)
        if is_triality(b, cap=1):
            rep.notes.append(f"{d.name} is not a triality set")
    return rep


def classify_lbts_upto_81(budget: int = mo.DEFAULT_BUDGET) -> dict[int, ClassificationReport]:
    return {order: classify_lbts(order, budget) for order in (3, 9, 27, 81)}


# --------------------------------------------------------------------------
# squaring map


@dataclass
class SqAnalysis:
    sq: np.ndarray
    fixed_locus: tuple[int, ...]
    q_e: tuple[int, ...]
    q_e_by_sign: tuple[int, ...]
    idempotents_match: bool
    substructures_closed: bool
    endo_plus: bool
    endo_circ: bool
    plus_witnesses: list
    split_verified: Optional[bool]
    intersection_trivial: bool
    factorization: Optional[bool]

    @property
    def is_endomorphism(self) -> bool:
        return self.endo_plus

    @property
    def endo_agree(self) -> bool:
        return self.endo_plus == self.endo_circ


def sq_analysis(d: LbdsDescriptor, cap: int = 16) -> SqAnalysis:
    """The right-division squaring map, its fixed locus and its fibre over ``e``."""
    b, q = lbds_from_descriptor(d)
    L = d.loop
    n = d.n
    ar = np.arange(n)
    s = d.s_array
    add = L.table.t
    circ = q.mul.t
    sq = q.rdiv.t[ar, ar]
    fixed = tuple(int(x) for x in np.flatnonzero(s == ar))
    q_e = tuple(int(x) for x in np.flatnonzero(sq == L.e))
    q_e_sign = tuple(int(x) for x in np.flatnonzero(s == L.neg))
    idem = tuple(int(x) for x in np.flatnonzero(circ[ar, ar] == ar))
    image = tuple(int(x) for x in np.unique(sq))
    idempotents_match = idem == fixed == image

    def closed(sub, t):
        sub = np.array(sub)
        return set(t[np.ix_(sub, sub)].ravel().tolist()) <= set(sub.tolist())

    substructures_closed = all(closed(sub, t) for sub in (fixed, q_e) for t in (add, circ))

    x = ar[:, None]
    y = ar[None, :]
    bad_plus = sq[add] != add[sq[x], sq[y]]
    bad_circ = sq[circ] != circ[sq[x], sq[y]]
    witnesses = [(int(i), int(j), int(sq[add[i, j]]), int(add[sq[i], sq[j]])) for i, j in np.argwhere(bad_plus)[:cap]]
    endo_plus = not bad_plus.any()
    endo_circ = not bad_circ.any()
    inter = set(fixed) & set(q_e) == {L.e}

    split = None
    if endo_plus:
        pairs = add[np.ix_(np.array(fixed), np.array(q_e))].ravel()
        split = bool(
            np.array_equal(sq[sq], sq)
            and image == fixed
            and inter
            and endo_circ
            and len(pairs) == n
            and is_permutation(pairs)
        )

    factor = None
    exps = classify_loop(L).exponent
    if exps == 3:
        fx, qe = np.array(fixed), np.array(q_e)
        neg = L.neg
        a_part = add[neg[ar], neg[s]]  # -x - x^S
        b_part = add[neg[ar], s]  # -x + x^S
        via_circ = circ[circ[neg, neg], circ[ar, neg]]
        factor = bool(
            set(add[np.ix_(fx, qe)].ravel().tolist()) == set(range(n))
            and set(circ[np.ix_(fx, qe)].ravel().tolist()) == set(range(n))
            and np.array_equal(add[a_part, b_part], ar)
            and np.all(np.isin(a_part, fx)) and np.all(np.isin(b_part, qe))
            and np.array_equal(via_circ, ar)
        )
    return SqAnalysis(sq, fixed, q_e, q_e_sign, idempotents_match, substructures_closed,
                      endo_plus, endo_circ, witnesses, split, inter, factor)


# --------------------------------------------------------------------------
# exhaustive oracle


def latin_squares(n: int, chunk_limit: int = 4_000_000) -> np.ndarray:
    """All Latin squares of order ``n`` as an ``(N, n, n)`` array, rows in lexicographic order."""
    if n > 5:
        raise InfeasibleSize(f"Latin square enumeration is limited to n <= 5, got {n}")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.int8)
    partial = perms[:, None, :]
    for _ in range(1, n):
        out = []
        step = max(1, chunk_limit // (len(perms) * n))
        for start in range(0, len(partial), step):
            block = partial[start:start + step]
            clash = np.zeros((len(block), len(perms)), dtype=bool)
            for r in range(block.shape[1]):
                clash |= (block[:, r, None, :] == perms[None, :, :]).any(axis=2)
            bi, pi = np.nonzero(~clash)
            out.append(np.concatenate([block[bi], perms[pi][:, None, :]], axis=1))
        partial = np.concatenate(out) if out else np.empty((0, partial.shape[1] + 1, n), dtype=np.int8)
    return partial.astype(np.int64)


def _batch_braided_ok(c: np.ndarray, d: np.ndarray, triality: bool) -> np.ndarray:
    """Per-table mask: braid relation, Di1, Di2, bijectivity (and Tri1, Tri2)."""
    N, n, _ = c.shape
    ok = _batch_solution_only(c, d)
    B = np.arange(N)[:, None, None]
    x = np.arange(n)[None, :, None]
    y = np.arange(n)[None, None, :]
    cxy, dxy = c[B, x, y], d[B, x, y]
    ok &= (d[B, dxy, cxy] == x).all(axis=(1, 2))
    ok &= (c[B, dxy, cxy] == y).all(axis=(1, 2))
    codes = (cxy * n + dxy).reshape(N, -1)
    ok &= (np.sort(codes, axis=1) == np.arange(n * n)).all(axis=1)
    if triality:
        ok &= (c[B, cxy, dxy] == d[B, y, x]).all(axis=(1, 2))
        ok &= (d[B, cxy, dxy] == c[B, y, x]).all(axis=(1, 2))
    return ok


def canonical_form(b: BraidedSet) -> bytes:
    """Smallest byte string of ``(circ, bullet)`` over all simultaneous relabelings."""
    n = b.n
    best = None
    for p in itertools.permutations(range(n)):
        rb = b.relabel(p)
        key = rb.circ.t.astype(np.int8).tobytes() + rb.bullet.t.astype(np.int8).tobytes()
        if best is None or key < best:
            best = key
    return best


def _from_canonical(key: bytes, n: int) -> BraidedSet:
    arr = np.frombuffer(key, dtype=np.int8).astype(np.int64)
    return BraidedSet(arr[:n * n].reshape(n, n), arr[n * n:].reshape(n, n))


def brute_force_solutions(n: int, latin: bool = False, dihedral: bool = False, triality: bool = False,
                          derived: bool = False, chunk: int = 20000) -> list[BraidedSet]:
    """Every solution of the given profile of order ``n``, one per isomorphism class.

    Latin profiles need ``dihedral`` (the bullet is then forced by ``Di2``) and
    ``n <= 5``.  Derived profiles (``bullet[x][y] = x``) need ``n <= 4``.
    """
    if triality:
        dihedral = True
    found: set[bytes] = set()
    if latin:
        if not dihedral:
            raise InfeasibleSize("a Latin search needs the dihedral constraint to fix the bullet")
        squares = latin_squares(n)
        for start in range(0, len(squares), chunk):
            c = squares[start:start + chunk]
            N = len(c)
            rd = np.empty_like(c)
            Bi = np.arange(N)[:, None, None]
            xs = np.arange(n)[None, :, None]
            ys = np.arange(n)[None, None, :]
            rd[Bi, c, ys] = np.broadcast_to(xs, c.shape)
            d = rd[Bi, ys, c]  # bullet[x][y] = y / (x∘y)
            keep = _batch_braided_ok(c, d, triality)
            if derived:
                keep &= (d == xs).all(axis=(1, 2))
            for ci, di in zip(c[keep], d[keep]):
                found.add(canonical_form(BraidedSet(ci, di)))
    elif derived:
        if n > 4:
            raise InfeasibleSize("derived search is limited to n <= 4")
        rows = [p for p in itertools.permutations(range(n))
                if not dihedral or all(p[p[i]] == i for i in range(n))]
        rows = np.array(rows, dtype=np.int64)
        d_one = np.broadcast_to(np.arange(n)[:, None], (n, n))
        combos = np.array(list(itertools.product(range(len(rows)), repeat=n)), dtype=np.int64)
        for start in range(0, len(combos), chunk):
            c = rows[combos[start:start + chunk]]
            d = np.broadcast_to(d_one, c.shape).copy()
            keep = _batch_braided_ok(c, d, triality) if dihedral else _batch_solution_only(c, d)
            for ci in c[keep]:
                found.add(canonical_form(BraidedSet(ci, d_one.copy())))
    else:
        raise InfeasibleSize("profile needs latin or derived")
    return [_from_canonical(k, n) for k in sorted(found)]


def _batch_solution_only(c: np.ndarray, d: np.ndarray) -> np.ndarray:
    N, n, _ = c.shape
    B = np.arange(N)[:, None, None, None]
    x = np.arange(n)[None, :, None, None]
    y = np.arange(n)[None, None, :, None]
    z = np.arange(n)[None, None, None, :]
    cyz, dyz, cxy, dxy = c[B, y, z], d[B, y, z], c[B, x, y], d[B, x, y]
    ok = (c[B, x, cyz] == c[B, cxy, c[B, dxy, z]]).all(axis=(1, 2, 3))
    ok &= (d[B, cxy, c[B, dxy, z]] == c[B, d[B, x, cyz], dyz]).all(axis=(1, 2, 3))
    ok &= (d[B, dxy, z] == d[B, d[B, x, cyz], dyz]).all(axis=(1, 2, 3))
    return ok


@dataclass
class OracleAgreement:
    n: int
    brute_count: int
    pipeline_count: int
    pairing: dict  # brute-force index -> pipeline representative index

    @property
    def agree(self) -> bool:
        return (self.brute_count == self.pipeline_count
                and sorted(self.pairing.values()) == list(range(self.pipeline_count)))


def oracle_agreement(p: int, budget: int = mo.DEFAULT_BUDGET) -> OracleAgreement:
    """Match the exhaustive Latin dihedral classes with :func:`classify_order_p`."""
    brute = brute_force_solutions(p, latin=True, dihedral=True)
    report = classify_order_p(p, budget)
    pairing = {}
    for i, b in enumerate(brute):
        e = int(np.flatnonzero(b.circ.t[np.arange(p), np.arange(p)] == np.arange(p))[0])
        d = descriptor_from_lbds(b, e)
        for j, r in enumerate(report.reps):
            if mo.lbds_isomorphic(d, r, budget).found:
                pairing[i] = j
                break
    return OracleAgreement(p, len(brute), report.count, pairing)


# --------------------------------------------------------------------------
# catalogs


def associative_order27() -> list[tuple[str, BruckLoopData]]:
    return [("27/1", abelian_group((3, 3, 3))), ("27/2", abelian_group((3, 9))), ("27/7", abelian_group((27,)))]


def load_expected(path_or_name: str) -> dict[str, int]:
    """Two-column ``name count`` file; ``table1``/``table2`` name the bundled ones."""
    if path_or_name in ("table1", "table2"):
        text = resources.files("ybeloops.data").joinpath(f"{path_or_name}_expected.txt").read_text()
    else:
        with open(path_or_name) as fh:
            text = fh.read()
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'name count'")
        out[parts[0]] = int(parts[1])
    return out


@dataclass(frozen=True)
class CatalogRow:
    name: str
    n_ci: int
    expected: Optional[int]

    @property
    def match(self) -> Optional[bool]:
        return None if self.expected is None else self.n_ci == self.expected


@dataclass
class CatalogReport:
    rows: list[CatalogRow]
    missing: list[str]

    @property
    def total(self) -> int:
        return sum(r.n_ci for r in self.rows)

    @property
    def matched(self) -> int:
        return sum(1 for r in self.rows if r.match)

    @property
    def checked(self) -> int:
        return sum(1 for r in self.rows if r.expected is not None)


def catalog_report(entries: Sequence[tuple[str, object]], expected: Optional[dict] = None,
                   budget: int = mo.DEFAULT_BUDGET) -> CatalogReport:
    """``n_CI`` for each loop; loops failing the Bruck laws are rejected with the witness."""
    rows = []
    for name, obj in entries:
        if isinstance(obj, BruckLoopData):
            loop = obj
        else:
            try:
                loop = bruck_loop(obj)
            except NotBruck as exc:
                raise CatalogNotBruck(name, exc.law, exc.witness) from None
        rows.append(CatalogRow(name, mo.n_ci(loop.table, loop.e, budget), None if expected is None else expected.get(name)))
    missing = sorted(set(expected or {}) - {r.name for r in rows}, key=_id_key)
    return CatalogReport(rows, missing)


def _id_key(name: str):
    try:
        a, b = name.split("/")
        return (int(a), int(b))
    except ValueError:
        return (math.inf, name)


def subloop_counts(loop) -> dict[int, int]:
    """Number of subloops of each order generated by one element."""
    t = loop.table.t if isinstance(loop, BruckLoopData) else MulTable(loop).t
    subs = {tuple(closure(t, [x]).tolist()) for x in range(t.shape[0])}
    counts: dict[int, int] = {}
    for s in subs:
        counts[len(s)] = counts.get(len(s), 0) + 1
    return counts
