"""Automorphisms, isomorphisms and involution classes of finite structures.

The search engine works on a *signature*: one binary table, a tuple of unary
maps and a tuple of constants.  A partial map is grown by propagation (every
product of mapped elements must map to the product of the images); branching
happens only on the next greedy generator that is not yet mapped.  Candidate
images are restricted to elements of the same refined colour.

Automorphism groups are represented by a stabiliser chain over the greedy
generating sequence, so the group order is known without listing elements and
the element list can be produced on demand from the transversals.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

from .tables import MulTable, closure, find_identity

DEFAULT_BUDGET = int(os.environ.get("YBELOOPS_SEARCH_BUDGET", 10**7))
MATERIALIZE_CAP = 2_000_000


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"search budget exhausted after {nodes} nodes")


class GroupTooLarge(RuntimeError):
    pass


# --------------------------------------------------------------------------
# permutations


@dataclass(frozen=True, order=True)
class Permutation:
    img: tuple[int, ...]

    def __post_init__(self):
        img = tuple(int(v) for v in self.img)
        if sorted(img) != list(range(len(img))):
            raise ValueError("not a bijection of {0..n-1}")
        object.__setattr__(self, "img", img)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.img)

    def __call__(self, x: int) -> int:
        return self.img[x]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """``(p * q)(x) = p(q(x))``."""
        return Permutation(tuple(self.img[i] for i in other.img))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for x, y in enumerate(self.img):
            inv[y] = x
        return Permutation(tuple(inv))

    def array(self) -> np.ndarray:
        return np.array(self.img, dtype=np.int64)

    def is_identity(self) -> bool:
        return self.img == tuple(range(self.n))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for x in range(self.n):
            if x in seen:
                continue
            cyc = [x]
            seen.add(x)
            y = self.img[x]
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = self.img[y]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()))


def _as_perm_array(p) -> np.ndarray:
    if isinstance(p, Permutation):
        return p.array()
    return np.asarray(p, dtype=np.int64)


def is_automorphism(m: MulTable, p) -> bool:
    p = _as_perm_array(p)
    return bool(np.array_equal(m.t[np.ix_(p, p)], p[m.t]))


def is_isomorphism(m1: MulTable, m2: MulTable, p) -> bool:
    p = _as_perm_array(p)
    return bool(np.array_equal(m2.t[np.ix_(p, p)], p[m1.t]))


# --------------------------------------------------------------------------
# signatures and colours


@dataclass(frozen=True, eq=False)
class Signature:
    """A binary table with optional unary maps and distinguished constants."""

    table: np.ndarray
    unary: tuple = ()
    const: tuple = ()

    @property
    def n(self) -> int:
        return self.table.shape[0]

    @classmethod
    def of(cls, m, unary=(), const=()) -> "Signature":
        t = m.t if isinstance(m, MulTable) else np.asarray(m, dtype=np.int64)
        return cls(t, tuple(_as_perm_array(u) for u in unary), tuple(int(c) for c in const))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """Greedy generating sequence: rarest colour first, then largest growth."""
        col = refine_colours([self])[0]
        class_size = Counter(col.tolist())
        n = self.n
        gens: list[int] = []
        cur = closure(self.table, self.const, self.unary) if self.const else np.array([], dtype=np.int64)
        while len(cur) < n:
            inside = np.zeros(n, dtype=bool)
            inside[cur] = True
            outside = np.flatnonzero(~inside)
            rarest = min(class_size[int(col[x])] for x in outside)
            pool = [int(x) for x in outside if class_size[int(col[x])] == rarest]
            best, best_cl = None, None
            for x in pool:
                cl = closure(self.table, np.concatenate([cur, [x]]), self.unary)
                if best is None or len(cl) > len(best_cl):
                    best, best_cl = x, cl
            gens.append(best)
            cur = best_cl
        return tuple(gens)


def _initial_invariants(sig: Signature) -> list[tuple]:
    t = sig.table
    n = sig.n
    ar = np.arange(n)
    lhs = t[t]  # (xy)z
    rhs = t[ar[:, None, None], t[None, :, :]]  # x(yz)
    eq = lhs == rhs
    a1, a2, a3 = eq.sum(axis=(1, 2)), eq.sum(axis=(0, 2)), eq.sum(axis=(0, 1))
    comm = (t == t.T).sum(axis=1)
    idem = t[ar, ar] == ar
    out = []
    for x in range(n):
        # orbit of y -> y*x starting at x: (tail, period)
        seen = {}
        y, k = x, 0
        while y not in seen:
            seen[y] = k
            y = int(t[y, x])
            k += 1
        rho = (seen[y], k - seen[y])
        row = _shape(t[x])
        colm = _shape(t[:, x])
        un = tuple((int(u[x]) == x, _orbit_len(u, x)) for u in sig.unary)
        cons = tuple(x == c for c in sig.const)
        out.append((bool(idem[x]), rho, int(comm[x]), int(a1[x]), int(a2[x]), int(a3[x]), row, colm, un, cons))
    return out


def _shape(arr: np.ndarray) -> tuple:
    """Cycle type of a permutation row, or the image size otherwise."""
    n = len(arr)
    if len(np.unique(arr)) != n:
        return ("img", len(np.unique(arr)))
    seen = np.zeros(n, dtype=bool)
    lens = []
    for s in range(n):
        if seen[s]:
            continue
        k, y = 0, s
        while not seen[y]:
            seen[y] = True
            y = arr[y]
            k += 1
        lens.append(k)
    return ("perm", tuple(sorted(lens)))


def _orbit_len(u: np.ndarray, x: int) -> int:
    k, y = 1, int(u[x])
    while y != x and k <= len(u):
        y = int(u[y])
        k += 1
    return k


def refine_colours(sigs: Sequence[Signature], max_rounds: int = 50) -> list[np.ndarray]:
    """Joint colour refinement; colours are comparable across the given signatures."""
    raw = [_initial_invariants(s) for s in sigs]
    palette = {v: i for i, v in enumerate(sorted({v for r in raw for v in r}, key=repr))}
    cols = [np.array([palette[v] for v in r], dtype=np.int64) for r in raw]
    count = len(palette)
    for _ in range(max_rounds):
        raw = []
        for s, c in zip(sigs, cols):
            t = s.table
            rows = []
            for x in range(s.n):
                nb = sorted(zip(c.tolist(), c[t[x]].tolist(), c[t[:, x]].tolist()))
                un = tuple(int(c[u[x]]) for u in s.unary)
                rows.append((int(c[x]), tuple(nb), un))
            raw.append(rows)
        palette = {v: i for i, v in enumerate(sorted({v for r in raw for v in r}))}
        cols = [np.array([palette[v] for v in r], dtype=np.int64) for r in raw]
        if len(palette) == count:
            break
        count = len(palette)
    return cols


# --------------------------------------------------------------------------
# backtracking


class _Search:
    """Enumerate structure-preserving bijections from ``a`` to ``b``."""

    def __init__(self, a: Signature, b: Signature, *, involutive: bool = False,
                 budget: int = DEFAULT_BUDGET, colours=None):
        if a.n != b.n or len(a.unary) != len(b.unary) or len(a.const) != len(b.const):
            raise ValueError("signatures differ")
        self.a, self.b = a, b
        self.n = a.n
        self.involutive = involutive
        self.budget = budget
        self.nodes = 0
        if colours is None:
            colours = refine_colours([a, b]) if a is not b else refine_colours([a]) * 2
        self.ca, self.cb = colours
        self.order = list(a.generators) + list(range(self.n))

    def colours_match(self) -> bool:
        return Counter(self.ca.tolist()) == Counter(self.cb.tolist())

    def _propagate(self, phi, psi, src, dst) -> bool:
        ta, tb = self.a.table, self.b.table
        while len(src):
            keep = phi[src] != dst
            src, dst = src[keep], dst[keep]
            if not len(src):
                return True
            if np.any(phi[src] != -1) or np.any(psi[dst] != -1):
                return False
            if np.any(self.ca[src] != self.cb[dst]):
                return False
            o = np.argsort(src, kind="stable")
            s_, d_ = src[o], dst[o]
            dup = s_[1:] == s_[:-1]
            if np.any(d_[1:][dup] != d_[:-1][dup]):
                return False
            first = np.concatenate([[True], ~dup])
            src, dst = s_[first], d_[first]
            if len(np.unique(dst)) != len(dst):
                return False
            phi[src] = dst
            psi[dst] = src
            dom = np.flatnonzero(phi >= 0)
            img = phi[dom]
            nsrc = [ta[np.ix_(src, dom)].ravel(), ta[np.ix_(dom, src)].ravel()]
            ndst = [tb[np.ix_(dst, img)].ravel(), tb[np.ix_(img, dst)].ravel()]
            for ua, ub in zip(self.a.unary, self.b.unary):
                nsrc.append(ua[src])
                ndst.append(ub[dst])
            if self.involutive:
                nsrc.append(dst)
                ndst.append(src)
            src = np.concatenate(nsrc)
            dst = np.concatenate(ndst)
        return True

    def _verify(self, phi) -> bool:
        a, b = self.a, self.b
        if not np.array_equal(b.table[np.ix_(phi, phi)], phi[a.table]):
            return False
        for ua, ub in zip(a.unary, b.unary):
            if not np.array_equal(phi[ua], ub[phi]):
                return False
        if any(phi[ca] != cb for ca, cb in zip(a.const, b.const)):
            return False
        if self.involutive and not np.array_equal(phi[phi], np.arange(self.n)):
            return False
        return True

    def start(self, fixed=()) -> Optional[tuple[np.ndarray, np.ndarray]]:
        phi = np.full(self.n, -1, dtype=np.int64)
        psi = np.full(self.n, -1, dtype=np.int64)
        pairs = list(zip(self.a.const, self.b.const)) + list(fixed)
        if pairs:
            src = np.array([p[0] for p in pairs], dtype=np.int64)
            dst = np.array([p[1] for p in pairs], dtype=np.int64)
            if not self._propagate(phi, psi, src, dst):
                return None
        return phi, psi

    def run(self, fixed=()) -> Iterator[np.ndarray]:
        st = self.start(fixed)
        if st is None:
            return
        yield from self._rec(*st)

    def _rec(self, phi, psi) -> Iterator[np.ndarray]:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetExceeded(self.nodes)
        x = next((x for x in self.order if phi[x] < 0), None)
        if x is None:
            if self._verify(phi):
                yield phi.copy()
            return
        cands = np.flatnonzero((self.cb == self.ca[x]) & (psi < 0))
        for c in cands:
            p2, s2 = phi.copy(), psi.copy()
            if self._propagate(p2, s2, np.array([x]), np.array([c])):
                yield from self._rec(p2, s2)


@dataclass
class SearchOutcome:
    """Result of an isomorphism search: a map, or the reason none exists."""

    mapping: Optional[Permutation]
    reason: str
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.mapping is not None


def find_isomorphism(a: Signature, b: Signature, budget: int = DEFAULT_BUDGET) -> SearchOutcome:
    if a.n != b.n:
        return SearchOutcome(None, "orders differ")
    s = _Search(a, b, budget=budget)
    if not s.colours_match():
        return SearchOutcome(None, "colour invariants differ")
    for phi in s.run():
        return SearchOutcome(Permutation(tuple(phi.tolist())), "found", s.nodes)
    return SearchOutcome(None, "search exhausted", s.nodes)


def structure_invariants(m: MulTable) -> tuple:
    """Cheap isomorphism invariants: idempotent count, centre size, power profile."""
    t = m.t
    n = m.n
    ar = np.arange(n)
    idem = int(np.sum(t[ar, ar] == ar))
    comm = (t == t.T).all(axis=1)
    lhs = t[t]
    rhs = t[ar[:, None, None], t[None, :, :]]
    eq = lhs == rhs
    nucleus = eq.all(axis=(1, 2)) & eq.all(axis=(0, 2)) & eq.all(axis=(0, 1))
    powers = sorted(inv[1] for inv in _initial_invariants(Signature.of(m)))
    return n, idem, int(np.sum(nucleus & comm)), tuple(powers)


def are_isomorphic(m1: MulTable, m2: MulTable, budget: int = DEFAULT_BUDGET) -> Optional[Permutation]:
    """An explicit isomorphism ``m1 -> m2`` or ``None`` after exhaustive search."""
    if m1.n != m2.n or structure_invariants(m1) != structure_invariants(m2):
        return None
    return find_isomorphism(Signature.of(m1), Signature.of(m2), budget).mapping


# --------------------------------------------------------------------------
# automorphism groups


@dataclass(eq=False)
class AutGroup:
    """Automorphism group given by a stabiliser chain along ``base``.

    ``transversals[i]`` holds, for every point of the orbit of ``base[i]`` under
    the pointwise stabiliser of ``base[:i]``, one element mapping ``base[i]``
    there.  Every element factors uniquely as ``u_0 * u_1 * ... * u_k``.
    """

    n: int
    base: tuple[int, ...]
    transversals: list[dict]
    generators: list[Permutation] = field(default_factory=list)

    @property
    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, p) -> bool:
        g = _as_perm_array(p)
        if len(g) != self.n:
            return False
        for b, tr in zip(self.base, self.transversals):
            u = tr.get(int(g[b]))
            if u is None:
                return False
            uinv = np.empty_like(u)
            uinv[u] = np.arange(self.n)
            g = uinv[g]
        return bool(np.array_equal(g, np.arange(self.n)))

    def element_array(self, cap: int = MATERIALIZE_CAP) -> np.ndarray:
        """All elements as rows of an array, sorted lexicographically."""
        if self.order > cap:
            raise GroupTooLarge(f"|G| = {self.order} exceeds cap {cap}")
        dtype = np.uint8 if self.n <= 256 else np.int64
        prod = np.arange(self.n, dtype=dtype)[None, :]
        for tr in reversed(self.transversals):
            u = np.array(sorted(tr.values(), key=lambda a: a.tolist()), dtype=dtype)
            prod = u[:, prod].reshape(-1, self.n)
        order = np.lexsort(prod.T[::-1])
        return prod[order].astype(np.int64)

    @cached_property
    def elements(self) -> list[Permutation]:
        return [Permutation(tuple(r)) for r in self.element_array().tolist()]


def automorphism_group(m: MulTable, e: Optional[int] = None, *, unary=(),
                       budget: int = DEFAULT_BUDGET) -> AutGroup:
    """Stabiliser chain of the automorphisms of ``m`` (fixing ``e`` and commuting with ``unary``)."""
    sig = Signature.of(m, unary=unary, const=() if e is None else (e,))
    return _aut_of_signature(sig, budget)


def _aut_of_signature(sig: Signature, budget: int) -> AutGroup:
    n = sig.n
    base = sig.generators
    colours = refine_colours([sig]) * 2
    ident = np.arange(n)
    gens_by_level: list[list[np.ndarray]] = [[] for _ in base]
    transversals: list[dict] = [None] * len(base)
    nodes = 0
    for i in reversed(range(len(base))):
        b = base[i]
        gens = [g for lvl in gens_by_level[i:] for g in lvl]
        orbit = _orbit_transversal(b, gens, ident)
        col = colours[0]
        for c in np.flatnonzero(col == col[b]):
            c = int(c)
            if c in orbit:
                continue
            s = _Search(sig, sig, budget=budget - nodes, colours=colours)
            fixed = [(base[j], base[j]) for j in range(i)] + [(b, c)]
            found = next(s.run(fixed), None)
            nodes += s.nodes
            if found is not None:
                gens_by_level[i].append(found)
                gens.append(found)
                orbit = _orbit_transversal(b, gens, ident)
        transversals[i] = orbit
    generators = [Permutation(tuple(g.tolist())) for lvl in gens_by_level for g in lvl]
    return AutGroup(n, tuple(base), transversals, generators)


def _orbit_transversal(b: int, gens: list[np.ndarray], ident: np.ndarray) -> dict:
    tr = {b: ident}
    queue = [b]
    while queue:
        p = queue.pop()
        for g in gens:
            q = int(g[p])
            if q not in tr:
                tr[q] = g[tr[p]]
                queue.append(q)
    return tr


# --------------------------------------------------------------------------
# conjugacy


@dataclass(frozen=True)
class ConjugacyClass:
    representative: Permutation
    members: tuple[Permutation, ...]
    element_order: int

    @property
    def size(self) -> int:
        return len(self.members)


def _orbits_under_conjugation(elems: np.ndarray, gens: Sequence[Permutation]) -> list[list[int]]:
    index = {row.tobytes(): i for i, row in enumerate(elems)}
    parent = list(range(len(elems)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in gens:
        ga = g.array()
        ginv = np.empty_like(ga)
        ginv[ga] = np.arange(len(ga))
        conj = ga[elems[:, ginv]]  # g s g^-1
        for i, row in enumerate(conj):
            j = index.get(row.tobytes())
            if j is None:
                raise ValueError("element set is not closed under conjugation")
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for i in range(len(elems)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _classes(elems: np.ndarray, gens) -> list[ConjugacyClass]:
    out = []
    for idx in _orbits_under_conjugation(elems, gens):
        members = sorted(Permutation(tuple(elems[i].tolist())) for i in idx)
        out.append(ConjugacyClass(members[0], tuple(members), members[0].order()))
    out.sort(key=lambda c: (c.element_order, c.size, c.representative.img))
    return out


def conjugacy_classes(g: AutGroup) -> list[ConjugacyClass]:
    """Conjugacy classes of the whole group, sorted by (order, size, representative)."""
    return _classes(g.element_array(), g.generators)


def involutions(m: MulTable, e: Optional[int] = None, *, unary=(), budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All automorphisms ``s`` with ``s*s = 1`` (identity included), as array rows."""
    sig = Signature.of(m, unary=unary, const=() if e is None else (e,))
    s = _Search(sig, sig, involutive=True, budget=budget)
    rows = [phi for phi in s.run()]
    arr = np.array(rows, dtype=np.int64).reshape(-1, sig.n)
    return arr[np.lexsort(arr.T[::-1])]


def involution_classes(m: MulTable, e: Optional[int] = None, *, group: Optional[AutGroup] = None,
                       budget: int = DEFAULT_BUDGET) -> list[ConjugacyClass]:
    """Conjugacy classes of automorphisms of order dividing 2."""
    if e is None:
        e = find_identity(m)
    if group is None:
        group = automorphism_group(m, e, budget=budget)
    inv = involutions(m, e, budget=budget)
    return _classes(inv, group.generators)


def n_ci(m: MulTable, e: Optional[int] = None, budget: int = DEFAULT_BUDGET) -> int:
    """Number of conjugacy classes of automorphisms ``S`` with ``S^2 = 1``, identity included."""
    return len(involution_classes(m, e, budget=budget))


def export_permutations(perms) -> str:
    """One permutation per line as its image tuple."""
    return "".join(" ".join(str(v) for v in _as_perm_array(p).tolist()) + "\n" for p in perms)


# --------------------------------------------------------------------------
# LBDS descriptors


def descriptor_signature(d) -> Signature:
    """Loop table with ``S`` as a unary map and the identity as a constant."""
    return Signature.of(d.loop.table, unary=(d.s_array,), const=(d.loop.e,))


def lbds_isomorphic(d1, d2, budget: int = DEFAULT_BUDGET) -> SearchOutcome:
    """A loop isomorphism ``phi`` with ``phi S1 = S2 phi``, or the reason none exists."""
    if d1.n != d2.n:
        return SearchOutcome(None, "orders differ")
    if structure_invariants(d1.loop.table) != structure_invariants(d2.loop.table):
        return SearchOutcome(None, "loop invariants differ")
    fix1 = int(np.sum(d1.s_array == np.arange(d1.n)))
    fix2 = int(np.sum(d2.s_array == np.arange(d2.n)))
    if fix1 != fix2:
        return SearchOutcome(None, f"S has {fix1} vs {fix2} fixed points")
    return find_isomorphism(descriptor_signature(d1), descriptor_signature(d2), budget)


def quasigroup_isomorphism(c1: MulTable, c2: MulTable, budget: int = DEFAULT_BUDGET) -> SearchOutcome:
    """Isomorphism search between two quasigroup tables (no distinguished element)."""
    return find_isomorphism(Signature.of(c1), Signature.of(c2), budget)


def intertwiner_from_quasigroup_iso(q2_mul: MulTable, q2_rdiv: MulTable, e1: int, f2: int, psi) -> Permutation:
    """``L_g psi`` with ``g = f / psi(e)``: turns an LBDS-quasigroup isomorphism into a loop one."""
    psi = _as_perm_array(psi)
    g = int(q2_rdiv.t[f2, psi[e1]])
    return Permutation(tuple(q2_mul.t[g][psi].tolist()))


def is_intertwining(d1, d2, phi) -> bool:
    phi = _as_perm_array(phi)
    return (is_isomorphism(d1.loop.table, d2.loop.table, phi)
            and bool(np.array_equal(phi[d1.s_array], d2.s_array[phi])))


def verify_ap3(p: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Aut(B_{p,3}) and the maps ``[a, b, lambda_c]`` agree as sets of permutations."""
    from .constructions import ap3_group, build_bpq

    loop = build_bpq(p, 3)
    g = automorphism_group(loop.table, loop.e, budget=budget)
    found = {tuple(r) for r in g.element_array().tolist()}
    ap3 = {a.perm().img for a in ap3_group(p)}
    return found == ap3 and len(found) == 2 * p * (p - 1)
