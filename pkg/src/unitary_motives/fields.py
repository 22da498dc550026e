"""Exact arithmetic in odd finite fields, their extensions, and quadratic étale algebras.

Field elements of ``F_{p^d}`` are plain integers ``c_0 + c_1 p + ... + c_{d-1} p^{d-1}``
where ``c_i`` is the coefficient of ``x^i`` in the residue polynomial.  The prime
subfield is therefore ``{0, ..., p-1}`` with its usual encoding, and iterating
``range(q)`` walks the field in lexicographic coefficient order.

Every arithmetic method accepts Python ints or numpy integer arrays, so the
same field object drives both scalar code and the vectorized enumerators.

The quadratic étale algebra ``L = F[beta]/(beta^2 - b)`` is kept in the single
representation ``u + v*beta`` whether or not ``b`` is a square.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

import numpy as np

from .errors import CharTwo, DegenerateAlgebra, InvalidInput, NoIrreducibleFound, NonPrime

#: Largest field order for which log/exp tables are built.
DEFAULT_FIELD_LIMIT = int(os.environ.get("UNITARY_MOTIVES_FIELD_LIMIT", 1 << 20))

# Full q x q addition/multiplication tables below this order.
_TABLE_ORDER = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


# -- dense polynomials over F_p, coefficient lists low -> high -------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    b = _trim(list(b))
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    """Factor search: ``f`` has no monic divisor of degree ``1..deg(f)//2``."""
    d = len(f) - 1
    if d == 1:
        return True
    for k in range(1, d // 2 + 1):
        for t in range(p**k):
            g = [(t // p**i) % p for i in range(k)] + [1]
            if not _poly_rem(f, g, p):
                return False
    return True


def find_modulus(p: int, d: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree ``d`` in lexicographic order."""
    for t in range(p**d):
        f = [(t // p**i) % p for i in range(d)] + [1]
        if _is_irreducible(f, p):
            return tuple(f)
    raise NoIrreducibleFound(f"no irreducible polynomial of degree {d} over F_{p}")


ArrayLike = Union[int, np.integer, np.ndarray]


class FiniteField:
    """The field ``F_{p^d} = F_p[x]/(modulus)``.

    Parameters
    ----------
    p : int
        Odd prime characteristic.
    degree : int
        Extension degree over ``F_p``.
    limit : int, optional
        Refuse orders above this value (tables are dense).
    """

    def __init__(self, p: int, degree: int = 1, limit: int | None = None):
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        if p == 2:
            raise CharTwo("characteristic 2 is not supported")
        if degree < 1:
            raise InvalidInput(f"extension degree must be >= 1, got {degree}")
        limit = DEFAULT_FIELD_LIMIT if limit is None else limit
        if p**degree > limit:
            raise InvalidInput(f"field of order {p}^{degree} exceeds the field limit {limit}")
        self.p = p
        self.degree = degree
        self.q = p**degree
        self.modulus = find_modulus(p, degree)
        self._build_tables()

    # FieldTower naming: q = p^m
    @property
    def m(self) -> int:
        return self.degree

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, degree={self.degree})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteField)
            and (self.p, self.degree, self.modulus) == (other.p, other.degree, other.modulus)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.degree, self.modulus))

    def __reduce__(self):
        return (_field_from_key, (self.p, self.degree))

    # -- construction ------------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.degree)]

    def _encode(self, digits: Sequence[int]) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(digits))

    def _mul_digits(self, a: list[int], b: list[int]) -> list[int]:
        p, d = self.p, self.degree
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        mod = self.modulus
        for k in range(len(prod) - 1, d - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(d):
                    prod[k - d + i] -= c * mod[i]
        return [c % p for c in prod[:d]]

    def _slow_pow(self, a: int, e: int) -> int:
        result = self._digits(1)
        base = self._digits(a)
        while e:
            if e & 1:
                result = self._mul_digits(result, base)
            base = self._mul_digits(base, base)
            e >>= 1
        return self._encode(result)

    def _find_generator(self) -> int:
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(1, self.q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        raise RuntimeError("no primitive element found")  # unreachable for a field

    def _build_tables(self) -> None:
        q, p, d = self.q, self.p, self.degree
        g = self._find_generator()
        self.generator = g
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        if d == 1:
            x = 1
            for i in range(q - 1):
                exp[i] = x
                log[x] = i
                x = x * g % p
        else:
            # multiplication by g as an F_p-linear map on coefficient vectors
            cols = [self._mul_digits(self._digits(p**j), self._digits(g)) for j in range(d)]
            v = self._digits(1)
            for i in range(q - 1):
                a = self._encode(v)
                exp[i] = a
                log[a] = i
                v = [sum(cols[j][r] * v[j] for j in range(d)) % p for r in range(d)]
        exp[q - 1 :] = exp[: q - 1]
        self._exp = exp
        self._log = log
        self._pows = np.array([p**i for i in range(d)], dtype=np.int64)
        digits = (np.arange(q, dtype=np.int64)[:, None] // self._pows) % p
        self._neg = ((-digits) % p) @ self._pows
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp[(q - 1 - log[1:]) % (q - 1)]
        self._inv = inv
        self._add_table = self._mul_table = None
        if 1 < d and q <= _TABLE_ORDER:
            add = np.zeros((q, q), dtype=np.int64)
            for i in range(d):
                add += ((digits[:, None, i] + digits[None, :, i]) % p) * self._pows[i]
            self._add_table = add
            a = np.arange(q)
            mul = exp[log[a][:, None] + log[a][None, :]]
            mul[0, :] = 0
            mul[:, 0] = 0
            self._mul_table = mul
        for arr in (self._exp, self._log, self._neg, self._inv, self._add_table, self._mul_table):
            if arr is not None:
                arr.setflags(write=False)

    # -- arithmetic ----------------------------------------------------------

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> np.ndarray:
        """All elements in lexicographic coefficient order."""
        return np.arange(self.q, dtype=np.int64)

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return int(n) % self.p

    def coerce(self, x) -> int:
        """Read an integer literal as a field element.

        Over a prime field this is reduction mod ``p``.  Over ``F_{p^d}`` with
        ``d > 1`` a literal in ``[0, q)`` is an encoded element and ``-x`` is
        the additive inverse of ``x``.
        """
        x = int(x)
        if self.degree == 1:
            return x % self.p
        if 0 <= x < self.q:
            return x
        if x < 0 and -x < self.q:
            return int(self.neg(-x))
        raise InvalidInput(f"{x} does not encode an element of F_{self.q}")

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(self._digits(int(a)))

    def add(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        if self.degree == 1:
            return (a + b) % self.p
        if self._add_table is not None:
            return self._add_table[a, b]
        a = np.asarray(a)
        b = np.asarray(b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for pw in self._pows:
            out += ((a // pw + b // pw) % self.p) * pw
        return out

    def neg(self, a: ArrayLike) -> ArrayLike:
        if self.degree == 1:
            return (-a) % self.p
        return self._neg[a]

    def sub(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        return self.add(a, self.neg(b))

    def mul(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        if self.degree == 1:
            return (a * b) % self.p
        if self._mul_table is not None:
            return self._mul_table[a, b]
        a = np.asarray(a)
        b = np.asarray(b)
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def inv(self, a: ArrayLike) -> ArrayLike:
        if np.ndim(a) == 0 and a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def div(self, a: ArrayLike, b: ArrayLike) -> ArrayLike:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 1 if e == 0 else 0
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    def is_square(self, a: ArrayLike) -> ArrayLike:
        """Squares of ``F_q`` (zero included)."""
        return (np.asarray(a) == 0) | (self._log[a] % 2 == 0)

    def sqrt(self, a: int) -> int | None:
        """The smaller (in encoding order) square root of ``a``, or ``None``."""
        a = int(a)
        if a == 0:
            return 0
        if self._log[a] % 2:
            return None
        r = int(self._exp[int(self._log[a]) // 2])
        return min(r, int(self.neg(r)))

    def nonsquares(self) -> np.ndarray:
        els = self.elements()[1:]
        return els[~self.is_square(els)]

    def squares(self) -> np.ndarray:
        els = self.elements()[1:]
        return els[self.is_square(els)]


FieldTower = FiniteField


@lru_cache(maxsize=None)
def _field_from_key(p: int, degree: int) -> FiniteField:
    return FiniteField(p, degree)


def make_field(p: int, m: int = 1, limit: int | None = None) -> FiniteField:
    """Build (or fetch the cached) field ``F_{p^m}``.

    >>> make_field(3, 2).q
    9
    """
    if limit is not None and limit < DEFAULT_FIELD_LIMIT:
        return FiniteField(p, m, limit=limit)
    return _field_from_key(p, m)


@dataclass(frozen=True, eq=False)
class ExtensionCtx:
    """``F_{q^k}`` together with an explicit embedding of the base field ``F_q``.

    The big field is built directly over ``F_p`` (degree ``m*k``); the embedding
    sends the base generator to ``root``, a root of the base modulus.
    """

    base: FiniteField
    k: int
    field: FiniteField
    root: int
    table: np.ndarray = dc_field(repr=False)

    @property
    def Q(self) -> int:
        return self.field.q

    def embed(self, x: ArrayLike) -> ArrayLike:
        if isinstance(x, (int, np.integer)):
            return int(self.table[x])
        return self.table[x]

    def __reduce__(self):
        return (extend, (self.base, self.k))


@lru_cache(maxsize=None)
def extend(base: FiniteField, k: int = 1) -> ExtensionCtx:
    if k < 1:
        raise InvalidInput(f"extension degree k must be >= 1, got {k}")
    if k == 1:
        table = base.elements()
        table.setflags(write=False)
        return ExtensionCtx(base, 1, base, base.p if base.degree > 1 else 0, table)
    big = make_field(base.p, base.degree * k)
    xs = big.elements()
    acc = np.zeros_like(xs)
    for c in reversed(base.modulus):
        acc = big.add(big.mul(acc, xs), c)
    roots = xs[acc == 0]
    if len(roots) == 0:
        raise NoIrreducibleFound("base modulus has no root in the extension")
    root = int(roots[0])
    table = np.zeros(base.q, dtype=np.int64)
    for a in range(base.q):
        acc_a = 0
        for c in reversed(base.coeffs(a)):
            acc_a = big.add(big.mul(acc_a, root), c)
        table[a] = acc_a
    table.setflags(write=False)
    return ExtensionCtx(base, k, big, root, table)


class SignField:
    """Exact rationals read through their sign.

    Only isotropy questions are asked in this mode: a diagonal form is
    anisotropic exactly when all of its entries share a strict sign.
    """

    p = 0

    def __repr__(self) -> str:
        return "SignField()"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SignField)

    def __hash__(self) -> int:
        return hash("SignField")

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n) -> Fraction:
        return Fraction(n)

    def add(self, a, b):
        return Fraction(a) + Fraction(b)

    def sub(self, a, b):
        return Fraction(a) - Fraction(b)

    def neg(self, a):
        return -Fraction(a)

    def mul(self, a, b):
        return Fraction(a) * Fraction(b)

    def inv(self, a):
        return 1 / Fraction(a)

    def sign(self, a) -> int:
        return (a > 0) - (a < 0)

    def is_square(self, a) -> bool:
        return a >= 0


SIGN = SignField()


# -- the quadratic étale algebra ----------------------------------------------


@dataclass(frozen=True)
class EtaleAlgebra:
    """``L = F[beta]/(beta^2 - b)`` with involution ``beta -> -beta``."""

    field: object
    b: object

    def __post_init__(self):
        if self.b == 0:
            raise DegenerateAlgebra("b = 0 gives a non-étale algebra")
        if isinstance(self.field, FiniteField):
            object.__setattr__(self, "b", self.field.coerce(self.b))
        else:
            object.__setattr__(self, "b", Fraction(self.b))

    def __reduce__(self):
        return (EtaleAlgebra, (self.field, self.b))

    def element(self, u, v=0) -> "EtaleElement":
        return EtaleElement(self, u, v)

    @property
    def one(self) -> "EtaleElement":
        return self.element(self.field.one, self.field.zero)

    @property
    def beta(self) -> "EtaleElement":
        return self.element(self.field.zero, self.field.one)

    def elements(self) -> list["EtaleElement"]:
        els = self.field.elements()
        return [self.element(int(u), int(v)) for v in els for u in els]

    def base_change(self, ext: ExtensionCtx) -> "EtaleAlgebra":
        if ext.base != self.field:
            raise InvalidInput("extension context does not match the algebra's field")
        return EtaleAlgebra(ext.field, ext.embed(self.b))

    # array-level operations on (u, v) coordinate pairs

    def mul_uv(self, u1, v1, u2, v2):
        F = self.field
        u = F.add(F.mul(u1, u2), F.mul(self.b, F.mul(v1, v2)))
        v = F.add(F.mul(u1, v2), F.mul(v1, u2))
        return u, v

    def sigma_uv(self, u, v):
        return u, self.field.neg(v)

    def norm_uv(self, u, v):
        F = self.field
        return F.sub(F.mul(u, u), F.mul(self.b, F.mul(v, v)))


@dataclass(frozen=True)
class EtaleElement:
    """The element ``u + v*beta`` of ``algebra``."""

    algebra: EtaleAlgebra = dc_field(repr=False)
    u: object = 0
    v: object = 0

    def __post_init__(self):
        F = self.algebra.field
        if isinstance(F, FiniteField):
            object.__setattr__(self, "u", F.coerce(self.u))
            object.__setattr__(self, "v", F.coerce(self.v))
        else:
            object.__setattr__(self, "u", Fraction(self.u))
            object.__setattr__(self, "v", Fraction(self.v))

    def __add__(self, other: "EtaleElement") -> "EtaleElement":
        F = self.algebra.field
        return EtaleElement(self.algebra, F.add(self.u, other.u), F.add(self.v, other.v))

    def __sub__(self, other: "EtaleElement") -> "EtaleElement":
        F = self.algebra.field
        return EtaleElement(self.algebra, F.sub(self.u, other.u), F.sub(self.v, other.v))

    def __neg__(self) -> "EtaleElement":
        F = self.algebra.field
        return EtaleElement(self.algebra, F.neg(self.u), F.neg(self.v))

    def __mul__(self, other: "EtaleElement") -> "EtaleElement":
        u, v = self.algebra.mul_uv(self.u, self.v, other.u, other.v)
        return EtaleElement(self.algebra, u, v)

    def scale(self, c) -> "EtaleElement":
        F = self.algebra.field
        return EtaleElement(self.algebra, F.mul(c, self.u), F.mul(c, self.v))

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def norm(self):
        return self.algebra.norm_uv(self.u, self.v)

    def trace(self):
        return self.algebra.field.add(self.u, self.u)

    def is_unit(self) -> bool:
        return self.norm() != 0

    def inverse(self) -> "EtaleElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError(f"{self} is not a unit")
        F = self.algebra.field
        ninv = F.inv(n)
        return EtaleElement(self.algebra, F.mul(self.u, ninv), F.mul(F.neg(self.v), ninv))

    def __repr__(self) -> str:
        return f"({self.u} + {self.v}*beta)"


def sigma(x: EtaleElement) -> EtaleElement:
    """The Galois involution ``u + v*beta -> u - v*beta``."""
    u, v = x.algebra.sigma_uv(x.u, x.v)
    return EtaleElement(x.algebra, u, v)


def is_split(L: EtaleAlgebra) -> bool:
    """Whether ``L`` is isomorphic to ``F x F``, i.e. ``b`` is a square."""
    if L.b == 0:
        raise DegenerateAlgebra("b = 0")
    return bool(L.field.is_square(L.b))


def split_idempotents(L: EtaleAlgebra) -> tuple[EtaleElement, EtaleElement] | None:
    """Idempotents ``e1 = (1 + beta/s)/2`` and ``e2 = sigma(e1)`` where ``s^2 = b``.

    ``s`` is the smaller square root in encoding order.  Returns ``None`` when
    ``L`` is a field.
    """
    if not is_split(L):
        return None
    F = L.field
    s = F.sqrt(L.b)
    half = F.inv(F.from_int(2))
    e1 = L.element(half, F.mul(half, F.inv(s)))
    return e1, sigma(e1)


def split_coordinates(L: EtaleAlgebra, u, v):
    """Idempotent coordinates ``(alpha, gamma)`` with ``u + v*beta = alpha e1 + gamma e2``."""
    F = L.field
    s = F.sqrt(L.b)
    if s is None:
        raise DegenerateAlgebra("algebra is not split")
    sv = F.mul(s, v)
    return F.add(u, sv), F.sub(u, sv)


def from_split_coordinates(L: EtaleAlgebra, alpha, gamma):
    """Inverse of :func:`split_coordinates`."""
    F = L.field
    s = F.sqrt(L.b)
    half = F.inv(F.from_int(2))
    u = F.mul(half, F.add(alpha, gamma))
    v = F.mul(F.mul(half, F.inv(s)), F.sub(alpha, gamma))
    return u, v


def annihilated_mask(L: EtaleAlgebra, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Row-wise ``ann_L(m) != 0`` for module vectors with coordinates ``U + V*beta``.

    ``l = x + y*beta`` kills ``m_i = u_i + v_i*beta`` iff
    ``x*u_i + b*y*v_i = 0`` and ``x*v_i + y*u_i = 0``.  A nonzero solution
    ``(x, y)`` exists iff the ``2n x 2`` coefficient matrix has rank at most 1,
    i.e. all of its 2x2 minors vanish.
    """
    F = L.field
    U = np.asarray(U)
    V = np.asarray(V)
    n = U.shape[-1]
    rows = []
    for i in range(n):
        rows.append((U[..., i], F.mul(L.b, V[..., i])))
        rows.append((V[..., i], U[..., i]))
    ok = np.ones(U.shape[:-1], dtype=bool)
    for r in range(len(rows)):
        for s in range(r + 1, len(rows)):
            (a0, a1), (b0, b1) = rows[r], rows[s]
            ok &= F.mul(a0, b1) == F.mul(a1, b0)
    return ok


def annihilator_nonzero(m: Sequence[EtaleElement]) -> bool:
    """Whether some nonzero ``l`` in ``L`` satisfies ``l * m_i = 0`` for every ``i``."""
    if len(m) == 0:
        return True
    L = m[0].algebra
    U = np.array([[x.u for x in m]], dtype=np.int64)
    V = np.array([[x.v for x in m]], dtype=np.int64)
    return bool(annihilated_mask(L, U, V)[0])
