"""Finite fields GF(p^n), quadratic towers and trace classes.

Elements are plain integers in ``range(ctx.order)``.  For a field built from
a polynomial over GF(p) the integer is the base-p digit string of the
coefficient vector, constant term in the least significant digit.  For a
tower step F[y]/(y^2 + y + nu) (or y^2 - nu in odd characteristic) the
element a + b*y is encoded as ``a + b * base.order``, so the base field
embeds as the integers below ``base.order``.

Multiplication goes through log/exp tables built once per context.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "INF",
    "FieldCtx",
    "FieldElement",
    "TraceClass",
    "field_ctx",
    "tower_extend",
    "abs_trace",
    "classes",
    "solve_quadratic",
    "is_prime",
    "prime_power",
]


class _Infinity:
    """The point at infinity of PG(1, q); equal only to itself."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "∞"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

# Low-to-high coefficient masks for GF(2^n).
DEFAULT_BINARY_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0b100011101,
}


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, n) with q = p**n, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    if not is_prime(p):
        raise ValueError(f"{q} is not a prime power")
    n, m = 0, q
    while m % p == 0:
        m //= p
        n += 1
    if m != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, n


# -- polynomials over GF(p), coefficient lists low -> high ------------------

def _poly_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mod(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    f = _poly_trim(list(f))
    g = _poly_trim(list(g))
    inv_lead = pow(g[-1], -1, p)
    while len(f) >= len(g):
        coef = f[-1] * inv_lead % p
        shift = len(f) - len(g)
        for i, c in enumerate(g):
            f[shift + i] = (f[shift + i] - coef * c) % p
        _poly_trim(f)
    return f


def _is_irreducible(poly: Sequence[int], p: int) -> bool:
    n = len(poly) - 1
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(poly, list(low) + [1], p):
                return False
    return True


def _mask_to_coeffs(mask: int) -> list[int]:
    return [(mask >> i) & 1 for i in range(mask.bit_length())]


def _coeffs_to_mask(coeffs: Sequence[int]) -> int:
    return sum(c << i for i, c in enumerate(coeffs))


def _first_irreducible(p: int, n: int) -> tuple[int, ...]:
    for low in itertools.product(range(p), repeat=n):
        poly = tuple(reversed(low)) + (1,)
        if poly[0] != 0 and _is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")


class FieldCtx:
    """Arithmetic context for a finite field.

    Construct with :func:`field_ctx` or :func:`tower_extend`; the context is
    immutable afterwards.
    """

    def __init__(self, p: int, degree: int, poly: tuple[int, ...] | None = None,
                 parent: FieldCtx | None = None, nu: int | None = None):
        self.p = p
        self.degree = degree
        self.order = p ** degree
        self.poly = poly
        self.parent = parent
        self.nu = nu
        self._build_tables()

    # -- construction -------------------------------------------------------

    def _raw_mul(self, a: int, b: int) -> int:
        if self.parent is not None:
            base = self.parent
            m = base.order
            a0, a1 = a % m, a // m
            b0, b1 = b % m, b // m
            hi = base.mul(a1, b1)
            lo = base.add(base.mul(a0, b0), base.mul(hi, self.nu))
            mid = base.add(base.mul(a0, b1), base.mul(a1, b0))
            if self.p == 2:
                mid = base.add(mid, hi)
            return lo + m * mid
        p, n = self.p, self.degree
        if n == 1:
            return a * b % p
        da = [(a // p ** i) % p for i in range(n)]
        db = [(b // p ** i) % p for i in range(n)]
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _poly_mod(prod, self.poly, p)
        return sum(c * p ** i for i, c in enumerate(rem))

    def _build_tables(self):
        q = self.order
        p = self.p
        if p == 2:
            self._add = None
        else:
            digits = np.array([[(x // p ** i) % p for i in range(self.degree)] for x in range(q)])
            weights = p ** np.arange(self.degree)
            s = (digits[:, None, :] + digits[None, :, :]) % p
            self._add = (s * weights).sum(axis=2).astype(np.int64)
            neg = ((-digits) % p * weights).sum(axis=1)
            self._neg = [int(v) for v in neg]
        # exhaustive search for a primitive element
        for g in range(2, q) if q > 2 else [1]:
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self._raw_mul(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                break
        else:
            raise ValueError("defining polynomial is not irreducible")
        self.primitive = g
        self._exp = exp + exp
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        self._log = log
        self._exp_np = np.array(self._exp, dtype=np.int64)
        self._log_np = np.array(log, dtype=np.int64)

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add is None:
            return a ^ b
        return int(self._add[a, b])

    def neg(self, a: int) -> int:
        if self._add is None:
            return a
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if k == 0 else 0
        return self._exp[(self._log[a] * k) % (self.order - 1)]

    def log(self, a: int) -> int:
        """Discrete log to the base ``self.primitive``."""
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def frobenius(self, a: int, k: int = 1) -> int:
        """a -> a^(p^k)."""
        return self.pow(a, self.p ** k)

    def one(self) -> int:
        return 1

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> GF(p)."""
        return n % self.p

    def elements(self) -> range:
        return range(self.order)

    def coords(self, a: int) -> tuple[int, ...]:
        """Coordinate vector over GF(p), constant term first."""
        return tuple((a // self.p ** i) % self.p for i in range(self.degree))

    def __call__(self, value: int) -> FieldElement:
        return FieldElement(self, value)

    def __repr__(self):
        if self.parent is not None:
            return f"FieldCtx(GF({self.order}) over GF({self.parent.order}), nu={self.nu})"
        return f"FieldCtx(GF({self.order}), poly={self.poly})"

    # -- derived structure -------------------------------------------------

    @cached_property
    def _squares(self) -> dict[int, int]:
        roots: dict[int, int] = {}
        for x in range(self.order):
            roots.setdefault(self.mul(x, x), x)
        return roots

    @cached_property
    def _as_roots(self) -> list[int]:
        """Smallest root t of t^2 + t = c, or -1 (characteristic 2 only)."""
        table = [-1] * self.order
        for t in range(self.order):
            c = self.add(self.mul(t, t), t)
            if table[c] < 0:
                table[c] = t
        return table

    def is_square(self, a: int) -> bool:
        return a in self._squares

    def sqrt(self, a: int) -> int | None:
        """One square root of a, or None.  Unique in characteristic 2."""
        if self.p == 2:
            return self.pow(a, self.order // 2)
        return self._squares.get(a)

    @cached_property
    def base_order(self) -> int | None:
        return self.parent.order if self.parent is not None else None

    def in_base(self, a: int) -> bool:
        """True iff a lies in the embedded parent field."""
        if self.parent is None:
            raise ValueError("not a tower extension")
        return a < self.parent.order

    def relative_frobenius(self, a: int) -> int:
        """a -> a^q where q is the order of the parent field."""
        if self.parent is None:
            raise ValueError("not a tower extension")
        m = self.parent.order
        if self.p == 2:
            # y^q is the other root of y^2 + y + nu, namely y + 1
            a0, a1 = a % m, a // m
            return self.parent.add(a0, a1) + m * a1
        return self.pow(a, m)

    @cached_property
    def extension(self) -> FieldCtx:
        """The quadratic extension of this field (cached)."""
        return tower_extend(self)

    @cached_property
    def mul_table(self) -> np.ndarray:
        """Full q x q multiplication table (only sensible for small q)."""
        idx = np.arange(self.order, dtype=np.int64)
        return self._mul_logexp(idx[:, None], idx[None, :])

    # -- vectorised arithmetic on integer arrays ---------------------------

    def add_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self._add is None:
            return np.bitwise_xor(a, b)
        return self._add[a, b]

    def neg_array(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self._add is None:
            return a
        return np.asarray(self._neg, dtype=np.int64)[a]

    def _mul_logexp(self, a, b) -> np.ndarray:
        out = self._exp_np[self._log_np[a] + self._log_np[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def mul_array(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.order <= 256:
            return self.mul_table[a, b]
        return self._mul_logexp(a, b)

    def inv_array(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self._exp_np[(self.order - 1 - self._log_np[a]) % (self.order - 1)]

    def square_array(self, a) -> np.ndarray:
        return self.mul_array(a, a)


@dataclass(frozen=True, eq=False)
class FieldElement:
    """Operator-overloaded view of a field element."""

    ctx: FieldCtx
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.ctx.order:
            raise ValueError(f"{self.value} out of range for GF({self.ctx.order})")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.ctx is not self.ctx:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.ctx.from_int(other)
        return NotImplemented

    def __add__(self, other):
        return FieldElement(self.ctx, self.ctx.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.ctx, self.ctx.sub(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.ctx, self.ctx.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.ctx, self.ctx.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElement(self.ctx, self.ctx.div(self._other(other), self.value))

    def __pow__(self, k: int):
        return FieldElement(self.ctx, self.ctx.pow(self.value, k))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx is other.ctx and self.value == other.value
        if isinstance(other, int):
            return self.value == self.ctx.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ctx), self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.ctx.order})[{self.value}]"

    @property
    def coords(self) -> tuple[int, ...]:
        return self.ctx.coords(self.value)

    def trace(self) -> int:
        return abs_trace(self.ctx, self.value)

    def inverse(self) -> FieldElement:
        return FieldElement(self.ctx, self.ctx.inv(self.value))


def field_ctx(p: int, n: int = 1, poly: int | Sequence[int] | None = None) -> FieldCtx:
    """Build GF(p^n).

    ``poly`` is either a coefficient sequence (constant term first) or, for
    p = 2, an integer bit mask such as ``0x13`` for x^4 + x + 1.  Without it a
    fixed default polynomial is used.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 1:
        raise ValueError("extension degree must be >= 1")
    if poly is None:
        if n == 1:
            coeffs: tuple[int, ...] = (0, 1)
        elif p == 2 and n in DEFAULT_BINARY_POLYS:
            coeffs = tuple(_mask_to_coeffs(DEFAULT_BINARY_POLYS[n]))
        else:
            coeffs = _first_irreducible(p, n)
    else:
        if isinstance(poly, int):
            if p != 2:
                raise ValueError("integer polynomial masks are only meaningful for p = 2")
            coeffs = tuple(_mask_to_coeffs(poly))
        else:
            coeffs = tuple(int(c) % p for c in poly)
        coeffs = tuple(_poly_trim(list(coeffs)))
        if len(coeffs) - 1 != n:
            raise ValueError(f"polynomial has degree {len(coeffs) - 1}, expected {n}")
        lead_inv = pow(coeffs[-1], -1, p)
        coeffs = tuple(c * lead_inv % p for c in coeffs)
        if n > 1 and not _is_irreducible(coeffs, p):
            raise ValueError(f"polynomial {coeffs} is reducible over GF({p})")
    return FieldCtx(p, n, poly=coeffs)


def poly_mask(ctx: FieldCtx) -> int:
    """Bit mask of the defining polynomial of a prime-based binary field."""
    if ctx.poly is None or ctx.p != 2:
        raise ValueError("no binary polynomial mask for this field")
    return _coeffs_to_mask(ctx.poly)


def tower_extend(base: FieldCtx) -> FieldCtx:
    """The quadratic extension base[y]/(y^2 + y + nu).

    nu is the first element of absolute trace 1 in the enumeration order.  In
    odd characteristic the step is y^2 - nu with nu the first non-square.
    """
    if base.p == 2:
        nu = next(x for x in base.elements() if abs_trace(base, x) == 1)
    else:
        nu = next(x for x in range(1, base.order) if not base.is_square(x))
    return FieldCtx(base.p, 2 * base.degree, parent=base, nu=nu)


def abs_trace(ctx: FieldCtx, x: int) -> int:
    """Absolute trace x + x^p + ... + x^(p^(n-1)) as an integer mod p."""
    total = 0
    y = x
    for _ in range(ctx.degree):
        total = ctx.add(total, y)
        y = ctx.frobenius(y)
    if total >= ctx.p:
        raise AssertionError("trace left the prime field")
    return total


def partial_trace(ctx: FieldCtx, x: int) -> int:
    """x + x^2 + ... + x^(q/2) for x in F_{q^2}, q the parent order."""
    if ctx.parent is None or ctx.p != 2:
        raise ValueError("needs a characteristic-2 tower")
    total = 0
    y = x
    for _ in range(ctx.parent.degree):
        total = ctx.add(total, y)
        y = ctx.mul(y, y)
    return total


@dataclass(frozen=True)
class TraceClass:
    """Trace-class subsets of a field.

    For even q, ``T0``/``T1`` are the absolute-trace classes; for odd q they
    are the nonzero squares and the non-squares.  ``S`` and ``G`` are filled
    only for a characteristic-2 tower F_{q^2} over F_q and map r in F_q to
    S_r and G_r.
    """

    order: int
    even: bool
    T0: frozenset[int]
    T1: frozenset[int]
    S: dict[int, frozenset[int]] = field(default_factory=dict)
    G: dict[int, frozenset[int]] = field(default_factory=dict)

    @property
    def T0_star(self) -> frozenset[int]:
        return self.T0 - {0}

    @property
    def T0_plus(self) -> frozenset[int]:
        return self.T0 if self.even else self.T0 | {0}

    @property
    def T1_plus(self) -> frozenset[int]:
        return self.T1 if self.even else self.T1 | {0}

    def trace_class(self, x: int) -> int | None:
        """e with x in T_e; None for x = 0 in odd characteristic."""
        if x in self.T0:
            return 0
        if x in self.T1:
            return 1
        return None


def classes(ctx: FieldCtx) -> TraceClass:
    if ctx.p == 2:
        t0 = frozenset(x for x in ctx.elements() if abs_trace(ctx, x) == 0)
        t1 = frozenset(ctx.elements()) - t0
        S: dict[int, frozenset[int]] = {}
        G: dict[int, frozenset[int]] = {}
        if ctx.parent is not None:
            m = ctx.parent.order
            s_sets: dict[int, set[int]] = {r: set() for r in range(m)}
            g_sets: dict[int, set[int]] = {r: set() for r in range(m)}
            for x in ctx.elements():
                s = partial_trace(ctx, x)
                if s < m:
                    s_sets[s].add(x)
                g = ctx.add(ctx.relative_frobenius(x), x)
                g_sets[g].add(x)
            S = {r: frozenset(v) for r, v in s_sets.items()}
            G = {r: frozenset(v) for r, v in g_sets.items()}
        return TraceClass(ctx.order, True, t0, t1, S, G)
    squares = frozenset(ctx.mul(x, x) for x in range(1, ctx.order))
    nonsq = frozenset(range(1, ctx.order)) - squares
    return TraceClass(ctx.order, False, squares, nonsq)


def solve_quadratic(ctx: FieldCtx, A: int, B: int, C: int) -> list[int]:
    """All distinct roots of A x^2 + B x + C in ctx, sorted."""
    if A == 0 and B == 0 and C == 0:
        raise ValueError("degenerate quadratic: all coefficients zero")
    if A == 0:
        if B == 0:
            return []
        return [ctx.div(ctx.neg(C), B)]
    if ctx.p == 2:
        if B == 0:
            return [ctx.sqrt(ctx.div(C, A))]
        # x = (B/A) t turns the equation into t^2 + t = AC/B^2
        c = ctx.div(ctx.mul(A, C), ctx.mul(B, B))
        t = ctx._as_roots[c]
        if t < 0:
            return []
        scale = ctx.div(B, A)
        return sorted({ctx.mul(scale, t), ctx.mul(scale, ctx.add(t, 1))})
    disc = ctx.sub(ctx.mul(B, B), ctx.mul(ctx.from_int(4), ctx.mul(A, C)))
    s = ctx.sqrt(disc)
    if s is None:
        return []
    two_a = ctx.mul(ctx.from_int(2), A)
    nb = ctx.neg(B)
    return sorted({ctx.div(ctx.add(nb, s), two_a), ctx.div(ctx.sub(nb, s), two_a)})


def enumerate_elements(ctx: FieldCtx) -> Iterable[FieldElement]:
    return (FieldElement(ctx, v) for v in ctx.elements())
