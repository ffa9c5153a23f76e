"""Explicit loops, descriptors and solutions.

Labelings are fixed:

* ``abelian_group(moduli)``: mixed radix, first coordinate most significant.
* ``build_bpq(p, q)`` and ``build_bp3_condensed(p)``: ``(i, j) -> i*p + j`` with
  ``i`` in ``Z/q`` and ``j`` in ``Z/p``.
* ``build_l3()``: ``(m, n, q, r) -> 27m + 9n + 3q + r`` for ``b^m c^n`` and ``q + r*w``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .braided import BraidedSet
from .morphisms import Permutation
from .tables import (
    BruckLoopData,
    LawId,
    MulTable,
    NotBruck,
    QuasigroupData,
    TableError,
    bruck_loop,
    check_law,
    is_permutation,
    quasigroup_from_mul,
)


class ConstructionError(ValueError):
    pass


class BadOrderPair(ConstructionError):
    pass


class DenominatorZero(ConstructionError):
    pass


class CoefficientUndefined(ConstructionError):
    pass


class NotInvolutive(ConstructionError):
    pass


class NotAutomorphism(ConstructionError):
    pass


class NotLBDS(ConstructionError):
    pass


class NotIdempotent(ConstructionError):
    pass


class NotLSQuandle(ConstructionError):
    pass


class InvalidSymmetricSpace(ConstructionError):
    def __init__(self, axiom: str, witness: tuple):
        self.axiom, self.witness = axiom, witness
        super().__init__(f"{axiom} fails at {witness}")


class ToleranceExceeded(ConstructionError):
    def __init__(self, residual: float, tol: float):
        self.residual = residual
        super().__init__(f"worst residual {residual:.3e} exceeds {tol:.1e}")


class UnknownFamily(ConstructionError):
    pass


class BadParams(ConstructionError):
    pass


# --------------------------------------------------------------------------
# GF(p^2)


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(n: int) -> bool:
    return n >= 2 and _prime_factors(n) == [n]


def smallest_nonresidue(p: int) -> int:
    squares = {x * x % p for x in range(1, p)}
    return next(t for t in range(2, p) if t not in squares)


@dataclass(frozen=True)
class GF2Element:
    """``a + b*sqrt(t)`` in ``F_p[x]/(x^2 - t)``."""

    p: int
    t: int
    a: int
    b: int

    def _new(self, a, b):
        return GF2Element(self.p, self.t, a % self.p, b % self.p)

    def __add__(self, o):
        return self._new(self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return self._new(self.a - o.a, self.b - o.b)

    def __neg__(self):
        return self._new(-self.a, -self.b)

    def __mul__(self, o):
        return self._new(self.a * o.a + self.t * self.b * o.b, self.a * o.b + self.b * o.a)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def inverse(self) -> "GF2Element":
        norm = (self.a * self.a - self.t * self.b * self.b) % self.p
        if norm == 0:
            raise ZeroDivisionError("zero has no inverse")
        k = pow(norm, -1, self.p)
        return self._new(self.a * k, -self.b * k)

    def __pow__(self, k: int) -> "GF2Element":
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self._new(1, 0), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def in_base_field(self) -> bool:
        return self.b == 0


@dataclass(frozen=True)
class GF2Setup:
    p: int
    q: int
    t: int
    omega: GF2Element
    theta: tuple[int, ...]


def gf2_setup(p: int, q: int, omega: Optional[tuple[int, int]] = None) -> GF2Setup:
    """Non-residue ``t``, an element ``omega`` of order ``q`` and ``theta_i = 2/(w^i + w^-i)``.

    ``omega`` defaults to the first element of order ``q`` in lexicographic ``(a, b)`` order.
    """
    if p < 3 or not _is_prime(p):
        raise BadOrderPair(f"p={p} is not an odd prime")
    if q < 2 or (p * p - 1) % q:
        raise BadOrderPair(f"q={q} does not divide p^2-1={p * p - 1}")
    t = smallest_nonresidue(p)
    one = GF2Element(p, t, 1, 0)

    def has_order_q(w):
        return (w ** q) == one and all(w ** (q // r) != one for r in _prime_factors(q))

    if omega is None:
        w = next(w for a, b in itertools.product(range(p), repeat=2)
                 if (w := GF2Element(p, t, a, b)) != GF2Element(p, t, 0, 0) and has_order_q(w))
    else:
        w = GF2Element(p, t, omega[0] % p, omega[1] % p)
        if w.is_zero() or not has_order_q(w):
            raise BadOrderPair(f"omega={omega} does not have order {q}")
    theta = []
    for i in range(q):
        s = w ** i + w ** (-i)
        if s.is_zero():
            raise DenominatorZero(f"w^{i} + w^-{i} = 0")
        th = GF2Element(p, t, 2, 0) * s.inverse()
        if not th.in_base_field():
            raise DenominatorZero(f"theta_{i} is not in Z/{p}")
        theta.append(th.a)
    if q == 3:
        assert all(theta[a * x % 3] == theta[x] for a in (1, 2) for x in range(3))
    return GF2Setup(p, q, t, w, tuple(theta))


# --------------------------------------------------------------------------
# loops


def abelian_group(moduli: Sequence[int]) -> BruckLoopData:
    """``Z/m1 x ... x Z/mk`` for odd moduli, mixed-radix labels."""
    moduli = tuple(int(m) for m in moduli)
    if not moduli or any(m < 1 for m in moduli):
        raise BadParams(f"bad moduli {moduli}")
    coords = np.array(list(itertools.product(*[range(m) for m in moduli])), dtype=np.int64).reshape(-1, len(moduli))
    mods = np.array(moduli)
    radix = np.array([int(np.prod(moduli[i + 1:])) for i in range(len(moduli))], dtype=np.int64)
    s = (coords[:, None, :] + coords[None, :, :]) % mods
    return bruck_loop(MulTable(s @ radix))


def group_coords(moduli: Sequence[int]) -> np.ndarray:
    """Row ``x`` is the coordinate vector of label ``x`` in :func:`abelian_group`."""
    return np.array(list(itertools.product(*[range(m) for m in moduli])), dtype=np.int64).reshape(-1, len(moduli))


def linear_map_perm(moduli: Sequence[int], matrix) -> Permutation:
    """Permutation of ``abelian_group(moduli)`` induced by ``x -> M x`` (coordinates mod moduli)."""
    coords = group_coords(moduli)
    mods = np.array(moduli)
    radix = np.array([int(np.prod(moduli[i + 1:])) for i in range(len(moduli))], dtype=np.int64)
    img = (coords @ np.asarray(matrix, dtype=np.int64).T) % mods
    return Permutation(tuple((img @ radix).tolist()))


def build_bpq(p: int, q: int, omega: Optional[tuple[int, int]] = None) -> BruckLoopData:
    gs = gf2_setup(p, q, omega)
    th = gs.theta
    i = np.arange(q)[:, None]
    k = np.arange(q)[None, :]
    ik = (i + k) % q
    thv = np.array(th, dtype=np.int64)
    den_a = (thv[k] + thv[k] * thv[i]) % p
    if np.any(den_a == 0):
        a, b = np.argwhere(den_a == 0)[0]
        raise CoefficientUndefined(f"theta_k + theta_k*theta_i vanishes at (i,k)=({a},{b})")
    inv = np.vectorize(lambda v: pow(int(v), -1, p))
    A = ((thv[k] + thv[ik]) * inv(den_a)) % p
    B = (thv[ik] * inv(thv[k] % p)) % p
    # table indexed by (i, j, k, l)
    j = np.arange(p)
    second = (A[:, None, :, None] * j[None, :, None, None] + B[:, None, :, None] * j[None, None, None, :]) % p
    first = np.broadcast_to(ik[:, None, :, None], second.shape)
    return bruck_loop(MulTable((first * p + second).reshape(q * p, q * p)))


def build_bp3_condensed(p: int) -> BruckLoopData:
    """B_{p,3} from its nine block formulas; ``2`` stands for ``-1`` in ``Z/3``."""
    if p <= 3 or not _is_prime(p):
        raise BadParams("p must be a prime > 3")
    h = pow(2, -1, p)
    j = np.arange(p)[:, None]
    l_ = np.arange(p)[None, :]
    blocks = {
        (0, 0): (0, j + l_), (0, 1): (1, j + l_), (0, 2): (2, j + l_),
        (1, 0): (1, j - 2 * l_), (1, 1): (2, -2 * j + l_), (1, 2): (0, h * (-j - l_)),
        (2, 0): (2, j - 2 * l_), (2, 1): (0, h * (-j - l_)), (2, 2): (1, -2 * j + l_),
    }
    t = np.empty((3 * p, 3 * p), dtype=np.int64)
    for (i, k), (blk, second) in blocks.items():
        t[i * p:(i + 1) * p, k * p:(k + 1) * p] = blk * p + second % p
    return bruck_loop(MulTable(t))


def _zw_mul_omega(q, r):
    """``w (q + r w) = -r + (q - r) w`` over ``Z/3`` with ``w^2 = -1 - w``."""
    return (-r) % 3, (q - r) % 3


def l3_coords() -> np.ndarray:
    return group_coords((3, 3, 3, 3))


def build_l3() -> BruckLoopData:
    """The nonassociative commutative Moufang loop of order 81 and exponent 3."""
    c = l3_coords()
    m1, n1, q1, r1 = (c[:, None, k] for k in range(4))
    m2, n2, q2, r2 = (c[None, :, k] for k in range(4))
    nu = (m1 * n2 - n1 * m2) % 3

    def rot(q, r, k):
        for _ in range(2):
            sel = k > 0
            qq, rr = _zw_mul_omega(q, r)
            q, r = np.where(sel, qq, q), np.where(sel, rr, r)
            k = np.where(sel, k - 1, k)
        return q, r

    a_q, a_r = rot(np.broadcast_to(q1, nu.shape), np.broadcast_to(r1, nu.shape), nu)
    b_q, b_r = rot(np.broadcast_to(q2, nu.shape), np.broadcast_to(r2, nu.shape), (-nu) % 3)
    label = 27 * ((m1 + m2) % 3) + 9 * ((n1 + n2) % 3) + 3 * ((a_q + b_q) % 3) + (a_r + b_r) % 3
    return bruck_loop(MulTable(label))


def l3_involutions() -> dict[str, Permutation]:
    """The maps S1..S4 on L_3."""
    c = l3_coords()
    m, n, q, r = c.T

    def lab(m, n, q, r):
        return tuple((27 * (m % 3) + 9 * (n % 3) + 3 * (q % 3) + r % 3).tolist())

    return {
        "S1": Permutation(lab(m, n, q, r)),
        "S2": Permutation(lab(-m, -n, -q, -r)),
        "S3": Permutation(lab(m, n, -q, -r)),
        "S4": Permutation(lab(-m, -n, q, r)),
    }


# --------------------------------------------------------------------------
# A_{p,3}


def _sign3(x: int) -> int:
    """Representative of ``x mod 3`` in ``{0, 1, -1}``."""
    return (0, 1, -1)[x % 3]


@dataclass(frozen=True)
class LambdaMap:
    """``lambda_b``: ``0 -> 0``, ``+-1 -> +-b``."""

    p: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "b", self.b % self.p)

    def __call__(self, x: int) -> int:
        return _sign3(x) * self.b % self.p

    def __add__(self, other: "LambdaMap") -> "LambdaMap":
        return LambdaMap(self.p, self.b + other.b)

    def scale(self, d: int) -> "LambdaMap":
        return LambdaMap(self.p, d * self.b)

    def precompose(self, a: int) -> "LambdaMap":
        """``a_lambda_b : x -> lambda_b(a x)``, which equals ``lambda_{ab}``."""
        return LambdaMap(self.p, _sign3(a) * self.b)


@dataclass(frozen=True)
class Ap3Element:
    """``[a, b, lambda_c]: (x, y) -> (a x, b y + lambda_c(x))``."""

    a: int
    b: int
    lam: LambdaMap

    def __post_init__(self):
        p = self.lam.p
        object.__setattr__(self, "a", self.a % 3)
        object.__setattr__(self, "b", self.b % p)
        if self.a == 0 or self.b == 0:
            raise BadParams("a and b must be units")

    @property
    def p(self) -> int:
        return self.lam.p

    @classmethod
    def make(cls, p: int, a: int, b: int, c: int) -> "Ap3Element":
        return cls(a, b, LambdaMap(p, c))

    @classmethod
    def identity(cls, p: int) -> "Ap3Element":
        return cls.make(p, 1, 1, 0)

    def __call__(self, x: int, y: int) -> tuple[int, int]:
        return self.a * x % 3, (self.b * y + self.lam(x)) % self.p

    def __mul__(self, other: "Ap3Element") -> "Ap3Element":
        """``self * other`` applies ``other`` first."""
        d, e, f = self.a, self.b, self.lam
        a, b, c = other.a, other.b, other.lam
        return Ap3Element(d * a, e * b, c.scale(e) + f.precompose(a))

    def inverse(self) -> "Ap3Element":
        p = self.p
        ai = self.a  # units of Z/3 are self-inverse
        bi = pow(self.b, -1, p)
        return Ap3Element(ai, bi, LambdaMap(p, -bi * self.lam.b).precompose(ai))

    def perm(self) -> Permutation:
        p = self.p
        return Permutation(tuple(self(i, j)[0] * p + self(i, j)[1] for i in range(3) for j in range(p)))


def ap3_group(p: int) -> list[Ap3Element]:
    if p <= 3 or not _is_prime(p):
        raise BadParams("p must be a prime > 3")
    return [Ap3Element.make(p, a, b, c) for a in (1, 2) for b in range(1, p) for c in range(p)]


# --------------------------------------------------------------------------
# LBDS descriptors


@dataclass(frozen=True, eq=False)
class LbdsDescriptor:
    """A uniquely 2-divisible Bruck loop with an involutive automorphism ``s``."""

    loop: BruckLoopData
    s: Permutation
    name: str = ""

    @property
    def n(self) -> int:
        return self.loop.n

    @property
    def s_array(self) -> np.ndarray:
        return self.s.array()


def make_descriptor(loop, s, name: str = "") -> LbdsDescriptor:
    if not isinstance(loop, BruckLoopData):
        loop = bruck_loop(loop)
    s = s if isinstance(s, Permutation) else Permutation(tuple(int(v) for v in s))
    if s.n != loop.n:
        raise NotAutomorphism("degree mismatch")
    sa = s.array()
    if not np.array_equal(sa[sa], np.arange(loop.n)):
        raise NotInvolutive("s∘s is not the identity")
    t = loop.table.t
    bad = np.argwhere(t[np.ix_(sa, sa)] != sa[t])
    if len(bad):
        raise NotAutomorphism(f"s(x+y) != s(x)+s(y) at {tuple(int(v) for v in bad[0])}")
    return LbdsDescriptor(loop, s, name)


def lbds_from_descriptor(d: LbdsDescriptor) -> tuple[BraidedSet, QuasigroupData]:
    """``r(x, y) = (2x - y^S, x^S)`` and the quasigroup ``(circ, \\, /)``."""
    L = d.loop
    s = d.s_array
    n = L.n
    x = np.arange(n)[:, None]
    y = np.arange(n)[None, :]
    circ = L.add(L.dbl[x], L.neg[s[y]])
    ldiv = L.add(L.dbl[s[x]], L.neg[s[y]])
    rdiv = L.add(s[y], L.half[L.add(L.neg[s[y]], x)])
    bullet = np.broadcast_to(s[:, None], (n, n)).copy()
    q = QuasigroupData(MulTable(circ), MulTable(ldiv), MulTable(rdiv))
    bad = q.quasigroup_axiom_failures(cap=1)
    if bad:
        raise AssertionError(f"LBDS quasigroup axioms fail: {bad[0]}")
    return BraidedSet(circ, bullet), q


def lbds_quasigroup_failures(q) -> list:
    """Why ``q`` is not an LBDS quasigroup; empty when it is."""
    if isinstance(q, BraidedSet):
        b = q
        try:
            q = quasigroup_from_mul(b.circ)
        except TableError as exc:
            return [f"not latin: {exc}"]
    else:
        b = None
        if not isinstance(q, QuasigroupData):
            try:
                q = quasigroup_from_mul(MulTable(q))
            except TableError as exc:
                return [f"not latin: {exc}"]
    out = [f"{c.law} at {c.args}" for c in check_law(q, LawId.LF, cap=1)]
    out += [f"{c.law} at {c.args}" for c in check_law(q, LawId.SQ_LIP, cap=1)]
    ar = np.arange(q.n)
    S = q.ldiv.t[ar, ar]
    if not np.array_equal(S[S], ar):
        out.append("x -> x\\x is not involutive")
    if b is not None and not np.array_equal(b.bullet.t, np.broadcast_to(S[:, None], (q.n, q.n))):
        out.append("bullet is not x -> x\\x")
    return out


def descriptor_from_lbds(q, e: int) -> LbdsDescriptor:
    """``x + y = (x/e)∘(e∘y)`` with ``S = x\\x``."""
    bad = lbds_quasigroup_failures(q)
    if bad:
        raise NotLBDS("; ".join(bad))
    if isinstance(q, BraidedSet):
        q = quasigroup_from_mul(q.circ)
    elif not isinstance(q, QuasigroupData):
        q = quasigroup_from_mul(MulTable(q))
    c, rd = q.mul.t, q.rdiv.t
    if c[e, e] != e:
        raise NotIdempotent(f"{e} is not idempotent")
    add = c[rd[:, e][:, None], c[e][None, :]]
    try:
        loop = bruck_loop(MulTable(add))
    except TableError as exc:
        raise NotLBDS(f"isotope is not a uniquely 2-divisible Bruck loop: {exc}") from None
    ar = np.arange(q.n)
    return make_descriptor(loop, Permutation(tuple(q.ldiv.t[ar, ar].tolist())))


def descriptor_roundtrip_ok(d: LbdsDescriptor) -> bool:
    """``descriptor_from_lbds(lbds_from_descriptor(d), e)`` reproduces ``d`` exactly."""
    b, q = lbds_from_descriptor(d)
    back = descriptor_from_lbds(q, d.loop.e)
    return back.loop.table == d.loop.table and back.s == d.s


def idempotent_change_map(q: QuasigroupData, e: int, f: int) -> Permutation:
    """Left translation ``x -> g∘x`` with ``g∘e = f``."""
    g = int(q.rdiv.t[f, e])
    return Permutation(tuple(q.mul.t[g].tolist()))


# --------------------------------------------------------------------------
# quandles and Bruck loops


def quandle_from_bruck(loop) -> MulTable:
    """``x * y = 2x - y``."""
    L = loop if isinstance(loop, BruckLoopData) else bruck_loop(loop)
    x = np.arange(L.n)[:, None]
    y = np.arange(L.n)[None, :]
    return MulTable(L.add(L.dbl[x], L.neg[y]))


def bruck_from_quandle(m: MulTable, e: int = 0) -> BruckLoopData:
    """``x + y = (x/e) * (e y)`` for a left-symmetric Latin quandle."""
    m = MulTable(m)
    try:
        q = quasigroup_from_mul(m)
    except TableError as exc:
        raise NotLSQuandle(f"not latin: {exc}") from None
    for law in (LawId.IDEMP, LawId.LS, LawId.LD):
        bad = check_law(m, law, cap=1)
        if bad:
            raise NotLSQuandle(f"{law.name} fails at {bad[0].args}")
    t, rd = m.t, q.rdiv.t
    try:
        return bruck_loop(MulTable(t[rd[:, e][:, None], t[e][None, :]]))
    except NotBruck:
        raise
    except TableError as exc:
        raise NotBruck(str(exc), ()) from None


def quandle_bruck_roundtrip(obj, e: int = 0):
    """Convert to the other structure and check that converting back is exact."""
    if isinstance(obj, BruckLoopData):
        qd = quandle_from_bruck(obj)
        if bruck_from_quandle(qd, obj.e).table != obj.table:
            raise AssertionError("Bruck -> quandle -> Bruck is not the identity")
        return qd
    m = MulTable(obj.mul if isinstance(obj, QuasigroupData) else obj)
    loop = bruck_from_quandle(m, e)
    if quandle_from_bruck(loop) != m:
        raise AssertionError("quandle -> Bruck -> quandle is not the identity")
    return loop


def derived_bds_from_rack(m) -> BraidedSet:
    m = MulTable(m)
    n = m.n
    return BraidedSet(m, MulTable(np.broadcast_to(np.arange(n)[:, None], (n, n)).copy()))


# --------------------------------------------------------------------------
# symmetric spaces


@dataclass(frozen=True, eq=False)
class PointedSymmetricSpace:
    sym: np.ndarray  # sym[x] is the permutation s_x
    o: int

    def __post_init__(self):
        sym = np.asarray(self.sym, dtype=np.int64)
        object.__setattr__(self, "sym", sym)
        n = sym.shape[0]
        ar = np.arange(n)
        if sym.shape != (n, n) or not 0 <= self.o < n:
            raise InvalidSymmetricSpace("shape", (sym.shape, self.o))
        for x in range(n):
            if not is_permutation(sym[x]):
                raise InvalidSymmetricSpace("bijective", (x,))
            if sym[x, x] != x:
                raise InvalidSymmetricSpace("s_x(x) = x", (x,))
            if not np.array_equal(sym[x][sym[x]], ar):
                raise InvalidSymmetricSpace("s_x^2 = id", (x,))
        x, y, z = ar[:, None, None], ar[None, :, None], ar[None, None, :]
        lhs = sym[sym[x, y], sym[x, z]]
        rhs = sym[x, sym[y, z]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            raise InvalidSymmetricSpace("s_{s_x(y)} s_x = s_x s_y", tuple(int(v) for v in bad[0]))

    @property
    def n(self) -> int:
        return self.sym.shape[0]


def symmetric_space_solutions(s: PointedSymmetricSpace) -> tuple[BraidedSet, BraidedSet]:
    """``(s_x(y), x)`` and ``(s_x(s_o(y)), s_o(x))``."""
    n = s.n
    sym = s.sym
    x = np.arange(n)[:, None]
    so = sym[s.o]
    first = BraidedSet(sym, np.broadcast_to(x, (n, n)).copy())
    second = BraidedSet(sym[x, so[np.arange(n)][None, :]], np.broadcast_to(so[:, None], (n, n)).copy())
    return first, second


# --------------------------------------------------------------------------
# Householder reflections


@dataclass(frozen=True)
class HouseholderReport:
    dim: int
    trials: int
    residual_first: float
    residual_second: float
    involution_residual: float
    fixed_residual: float

    @property
    def worst(self) -> float:
        return max(self.residual_first, self.residual_second, self.involution_residual, self.fixed_residual)


def _householder(v: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``H_v(x) = 2<x, v> v - x`` row-wise."""
    return 2 * np.sum(x * v, axis=-1, keepdims=True) * v - x


def householder_braiding_check(dim: int = 3, trials: int = 1000, tol: float = 1e-9, seed: int = 0) -> HouseholderReport:
    if dim < 2:
        raise BadParams("dim must be at least 2")
    rng = np.random.default_rng(seed)

    def unit(k):
        v = rng.standard_normal((k, dim))
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    x, y, z = unit(trials), unit(trials), unit(trials)
    o = unit(1)

    def r_first(a, b):
        return _householder(a, b), a

    def r_second(a, b):
        return _householder(a, _householder(o, b)), _householder(o, a)

    def braid_residual(r):
        a, b, c = x, y, z
        a1, b1 = r(a, b)
        b2, c2 = r(b1, c)
        a3, b3 = r(a1, b2)
        lhs = np.stack([a3, b3, c2])
        b1, c1 = r(b, c)
        a2, b2 = r(a, b1)
        b3, c3 = r(b2, c1)
        rhs = np.stack([a2, b3, c3])
        return float(np.max(np.abs(lhs - rhs)))

    inv_res = float(np.max(np.abs(_householder(x, _householder(x, y)) - y)))
    fix_res = float(np.max(np.abs(_householder(x, x) - x)))
    rep = HouseholderReport(dim, trials, braid_residual(r_first), braid_residual(r_second), inv_res, fix_res)
    if rep.worst >= tol:
        raise ToleranceExceeded(rep.worst, tol)
    return rep


# --------------------------------------------------------------------------
# stock solutions


def _loop_arg(params) -> BruckLoopData:
    loop = params.get("loop")
    if loop is None:
        loop = abelian_group(params.get("moduli", (3, 3)))
    return loop if isinstance(loop, BruckLoopData) else bruck_loop(loop)


def _const_rows(v: np.ndarray) -> np.ndarray:
    n = len(v)
    return np.broadcast_to(v[:, None], (n, n)).copy()


def stock_solutions(name: str, **params) -> BraidedSet:
    """Named families.

    ``trivial(n)``, ``dihedral_quandle(n)``, ``abelian(n)`` live on ``Z/n``;
    ``smith``, ``cml_derived`` and ``lbts`` take ``loop=`` (a CML of exponent 3,
    default ``(Z/3)^2``) and ``lbts`` also takes ``s=``.
    """
    if name in ("trivial", "dihedral_quandle", "abelian"):
        n = params.get("n")
        if not isinstance(n, int) or n < 1:
            raise BadParams(f"{name} needs a positive integer n")
        x = np.arange(n)[:, None]
        y = np.arange(n)[None, :]
        xs = np.broadcast_to(x, (n, n))
        if name == "trivial":
            return BraidedSet(np.broadcast_to(y, (n, n)).copy(), xs.copy())
        if name == "dihedral_quandle":
            return BraidedSet((2 * x - y) % n, xs.copy())
        return BraidedSet((2 * x + y) % n, np.broadcast_to((-x) % n, (n, n)).copy())
    if name in ("smith", "cml_derived", "lbts"):
        L = _loop_arg(params)
        x = np.arange(L.n)[:, None]
        y = np.arange(L.n)[None, :]
        if name == "smith":
            return BraidedSet(L.add(L.neg[x], y), _const_rows(L.neg))
        if name == "cml_derived":
            return BraidedSet(L.add(L.neg[x], L.neg[y]), _const_rows(np.arange(L.n)))
        s = params.get("s")
        if s is None:
            raise BadParams("lbts needs s")
        s = _as_array(s)
        return BraidedSet(L.add(L.neg[x], L.neg[s[y]]), _const_rows(s))
    raise UnknownFamily(name)


def _as_array(p) -> np.ndarray:
    return p.array() if isinstance(p, Permutation) else np.asarray(p, dtype=np.int64)


# --------------------------------------------------------------------------
# named descriptors


def zn_descriptor(n: int, sign: int) -> LbdsDescriptor:
    ar = np.arange(n)
    return make_descriptor(abelian_group((n,)), (sign * ar) % n, f"(Z/{n}, {sign:+d})")


def signed_descriptor(moduli: Sequence[int], signs: Sequence[int], name: str = "") -> LbdsDescriptor:
    """Abelian group with ``S`` acting by ``signs[i]`` on coordinate ``i``."""
    loop = abelian_group(moduli)
    s = linear_map_perm(moduli, np.diag(signs))
    return make_descriptor(loop, s, name or f"{tuple(moduli)} S={tuple(signs)}")


def bp3_descriptor(p: int, a: int, b: int, c: int = 0) -> LbdsDescriptor:
    g = Ap3Element.make(p, a, b, c)
    return make_descriptor(build_bpq(p, 3), g.perm(), f"B_{p},3 [{_sign3(a):+d},{b if b <= p // 2 else b - p:+d},λ{c}]")


def l3_descriptor(which: str) -> LbdsDescriptor:
    return make_descriptor(build_l3(), l3_involutions()[which], f"L3 {which}")


