"""Braided sets given by two tables, ``r(x, y) = (x∘y, x•y)``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .tables import (
    DEFAULT_CAP,
    Counterexample,
    MulTable,
    NotLeftQuasigroup,
    NotRightQuasigroup,
    QuasigroupData,
    TableError,
    is_permutation,
    left_division,
    quasigroup_from_mul,
    right_division,
)


class MissingDivision(TableError):
    pass


@dataclass(frozen=True, eq=False)
class BraidedSet:
    circ: MulTable
    bullet: MulTable

    def __post_init__(self):
        object.__setattr__(self, "circ", MulTable(self.circ))
        object.__setattr__(self, "bullet", MulTable(self.bullet))
        if self.circ.n != self.bullet.n:
            raise ValueError("circ and bullet tables have different orders")

    @property
    def n(self) -> int:
        return self.circ.n

    def __eq__(self, other):
        return isinstance(other, BraidedSet) and self.circ == other.circ and self.bullet == other.bullet

    def __hash__(self):
        return hash((self.circ, self.bullet))

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        return int(self.circ.t[x, y]), int(self.bullet.t[x, y])

    def relabel(self, perm) -> "BraidedSet":
        return BraidedSet(self.circ.relabel(perm), self.bullet.relabel(perm))

    @cached_property
    def pair_map(self) -> np.ndarray:
        """``r`` as a self-map of pair codes ``x*n + y``."""
        return (self.circ.t * self.n + self.bullet.t).ravel()

    @cached_property
    def flags(self) -> dict:
        nd = nondegeneracy_flags(self)
        out = {
            "solution": not is_solution(self, cap=1),
            "dihedral": not is_dihedral(self, cap=1),
            "left": nd.left,
            "right": nd.right,
            "latin": nd.latin,
            "bijective": nd.bijective,
        }
        out["triality"] = out["dihedral"] and not is_triality(self, cap=1)
        out["biquandle"] = is_biquandle(self)
        return out


def _grid(n: int, k: int):
    return [np.arange(n).reshape([n if i == j else 1 for j in range(k)]) for i in range(k)]


def _collect(named, cap: int) -> list[Counterexample]:
    out = []
    for name, lhs, rhs in named:
        lhs, rhs = np.broadcast_arrays(lhs, rhs)
        for idx in np.argwhere(lhs != rhs):
            if len(out) >= cap:
                return out
            idx = tuple(int(v) for v in idx)
            out.append(Counterexample(name, idx, int(lhs[idx]), int(rhs[idx])))
    return out


def is_solution(b: BraidedSet, cap: int = DEFAULT_CAP) -> list[Counterexample]:
    """Counterexamples to the three component identities of the braid relation."""
    c, d = b.circ.t, b.bullet.t
    x, y, z = _grid(b.n, 3)
    return _collect([
        ("YB1", c[x, c[y, z]], c[c[x, y], c[d[x, y], z]]),
        ("YB2", d[c[x, y], c[d[x, y], z]], c[d[x, c[y, z]], d[y, z]]),
        ("YB3", d[d[x, y], z], d[d[x, c[y, z]], d[y, z]]),
    ], cap)


def braid_relation_by_composition(b: BraidedSet) -> bool:
    """``r12 r23 r12 == r23 r12 r23`` as self-maps of ``Q^3``."""
    n = b.n
    r = b.pair_map
    codes = np.arange(n ** 3)

    def r12(v):
        xy, z = np.divmod(v, n)
        return r[xy] * n + z

    def r23(v):
        x, yz = np.divmod(v, n * n)
        return x * n * n + r[yz]

    return bool(np.array_equal(r12(r23(r12(codes))), r23(r12(r23(codes)))))


def is_dihedral(b: BraidedSet, cap: int = DEFAULT_CAP) -> list[Counterexample]:
    c, d = b.circ.t, b.bullet.t
    x, y = _grid(b.n, 2)
    return _collect([
        ("Di1", d[d[x, y], c[x, y]], x),
        ("Di2", c[d[x, y], c[x, y]], y),
    ], cap)


def is_triality(b: BraidedSet, cap: int = DEFAULT_CAP) -> list[Counterexample]:
    """Counterexamples to Di1, Di2, Tri1, Tri2."""
    c, d = b.circ.t, b.bullet.t
    x, y = _grid(b.n, 2)
    out = is_dihedral(b, cap)
    return out + _collect([
        ("Tri1", c[c[x, y], d[x, y]], d[y, x]),
        ("Tri2", d[c[x, y], d[x, y]], c[y, x]),
    ], cap - len(out))


def tau_r_squared_is_identity(b: BraidedSet) -> bool:
    n = b.n
    tr = _swap(b.pair_map, n)
    return bool(np.array_equal(tr[tr], np.arange(n * n)))


def r_cubed_is_identity(b: BraidedSet) -> bool:
    r = b.pair_map
    return bool(np.array_equal(r[r[r]], np.arange(len(r))))


def _swap(codes: np.ndarray, n: int) -> np.ndarray:
    a, c = np.divmod(codes, n)
    return c * n + a


@dataclass(frozen=True)
class NondegeneracyFlags:
    left: bool
    right: bool
    latin: bool
    bijective: bool


def nondegeneracy_flags(b: BraidedSet) -> NondegeneracyFlags:
    c, d = b.circ.t, b.bullet.t
    left = all(is_permutation(row) for row in c)
    right = all(is_permutation(col) for col in d.T)
    latin = left and all(is_permutation(col) for col in c.T)
    return NondegeneracyFlags(left, right, latin, is_permutation(b.pair_map))


def circ_quasigroup(b: BraidedSet) -> QuasigroupData:
    return quasigroup_from_mul(b.circ)


@dataclass(frozen=True, eq=False)
class DiagonalPair:
    S: np.ndarray
    T: np.ndarray

    @property
    def mutually_inverse(self) -> bool:
        ar = np.arange(len(self.S))
        return bool(np.array_equal(self.S[self.T], ar) and np.array_equal(self.T[self.S], ar))

    @property
    def equal(self) -> bool:
        return bool(np.array_equal(self.S, self.T))

    @property
    def s_involutive(self) -> bool:
        return bool(np.array_equal(self.S[self.S], np.arange(len(self.S))))


def diagonal_pair(b: BraidedSet) -> DiagonalPair:
    """``S = x\\∘x`` and ``T = x/•x``."""
    ar = np.arange(b.n)
    try:
        S = left_division(b.circ).t[ar, ar]
    except NotLeftQuasigroup as exc:
        raise MissingDivision(f"left division of circ: {exc}") from None
    try:
        T = right_division(b.bullet).t[ar, ar]
    except NotRightQuasigroup as exc:
        raise MissingDivision(f"right division of bullet: {exc}") from None
    return DiagonalPair(S, T)


def is_biquandle(b: BraidedSet) -> bool:
    """Nondegenerate solution whose diagonal maps satisfy ``(x\\x)/(x\\x) = x``."""
    nd = nondegeneracy_flags(b)
    if not (nd.left and nd.right) or is_solution(b, cap=1):
        return False
    S = left_division(b.circ).t
    T = right_division(b.bullet).t
    ar = np.arange(b.n)
    s = S[ar, ar]
    return bool(np.array_equal(T[s, s], ar))


def derived_rack(b: BraidedSet) -> MulTable:
    """``x◁y = x∘(y•(y\\∘x))``."""
    try:
        ld = left_division(b.circ).t
    except NotLeftQuasigroup as exc:
        raise MissingDivision(str(exc)) from None
    c, d = b.circ.t, b.bullet.t
    x, y = _grid(b.n, 2)
    return MulTable(c[x, d[y, ld[y, x]]])


@dataclass(frozen=True)
class BraidingOrder:
    """``r^(preperiod + order) = r^preperiod``; ``preperiod`` is 0 iff ``r`` is bijective."""

    order: int
    preperiod: int


def braiding_order(b: BraidedSet) -> BraidingOrder:
    r = b.pair_map
    if is_permutation(r):
        seen = np.zeros(len(r), dtype=bool)
        lens = []
        for s in range(len(r)):
            if seen[s]:
                continue
            k, v = 0, s
            while not seen[v]:
                seen[v] = True
                v = r[v]
                k += 1
            lens.append(k)
        return BraidingOrder(math.lcm(*lens), 0)
    period, tail = 1, 0
    for s in range(len(r)):
        mu, lam = _floyd(r, s)
        period = math.lcm(period, lam)
        tail = max(tail, mu)
    return BraidingOrder(period, tail)


def _floyd(f: np.ndarray, x0: int) -> tuple[int, int]:
    """(tail length, cycle length) of the orbit of ``x0``."""
    tort, hare = f[x0], f[f[x0]]
    while tort != hare:
        tort, hare = f[tort], f[f[hare]]
    mu, tort = 0, x0
    while tort != hare:
        tort, hare = f[tort], f[hare]
        mu += 1
    lam, hare = 1, f[tort]
    while tort != hare:
        hare = f[hare]
        lam += 1
    return mu, lam


@dataclass(frozen=True)
class QybeDual:
    qybe: bool
    involutive: bool


def qybe_dual_check(b: BraidedSet) -> QybeDual:
    """``rho = tau r``: ``rho12 rho13 rho23 == rho23 rho13 rho12`` and whether ``rho^2 = 1``."""
    n = b.n
    rho = _swap(b.pair_map, n)
    codes = np.arange(n ** 3)

    def act(i, j):
        def f(v):
            parts = list(np.unravel_index(v, (n, n, n)))
            out = rho[parts[i] * n + parts[j]]
            parts[i], parts[j] = np.divmod(out, n)
            return np.ravel_multi_index(parts, (n, n, n))
        return f

    r12, r13, r23 = act(0, 1), act(0, 2), act(1, 2)
    # operators composed right to left: rho12 rho13 rho23 applies rho23 first
    lhs = r12(r13(r23(codes)))
    rhs = r23(r13(r12(codes)))
    return QybeDual(bool(np.array_equal(lhs, rhs)), bool(np.array_equal(rho[rho], np.arange(n * n))))


def lf_map_solution(m: MulTable) -> Optional[BraidedSet]:
    """``(x, y) -> (x∘y, x\\x)`` for a left quasigroup ``m``."""
    try:
        ld = left_division(m).t
    except NotLeftQuasigroup:
        return None
    ar = np.arange(m.n)
    s = ld[ar, ar]
    return BraidedSet(m, MulTable(np.broadcast_to(s[:, None], (m.n, m.n)).copy()))
