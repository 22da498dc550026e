"""Symbolic direct sums of Tate-twisted motives and the two rewrite rules.

A :class:`MotiveExpr` is a multiset of ``(atom, twist)`` pairs.  There is no
cancellation: two expressions are equal only when they agree as multisets.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import InvalidInput, NegativeTwist, RankTooSmall

MAX_TWIST = 64


class Tag(enum.Enum):
    ProjSpace = "P_F(N)"
    Quadric = "V(q_h)"
    DegenerateLocus = "S"
    WeilProj = "P(N,L)"
    Herm = "V(h)"

    @property
    def order(self) -> int:
        return list(Tag).index(self)


@dataclass(frozen=True)
class MotiveAtom:
    tag: Tag
    n: int
    split: bool | None = None

    def label(self) -> str:
        return f"M({self.tag.value})"

    def key(self) -> str:
        return self.tag.name


@dataclass(frozen=True)
class MotiveExpr:
    """Finite multiset of ``(MotiveAtom, twist)`` summands."""

    terms: tuple[tuple[tuple[MotiveAtom, int], int], ...] = ()

    @classmethod
    def of(cls, summands: Iterable[tuple[MotiveAtom, int]]) -> "MotiveExpr":
        counts = Counter()
        for atom, i in summands:
            _check_twist(i)
            counts[(atom, i)] += 1
        return cls(tuple(sorted(counts.items(), key=lambda kv: _sort_key(kv[0]))))

    def counter(self) -> Counter:
        return Counter(dict(self.terms))

    def summands(self) -> list[tuple[MotiveAtom, int]]:
        out = []
        for pair, mult in self.terms:
            out.extend([pair] * mult)
        return out

    def __len__(self) -> int:
        return sum(m for _, m in self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MotiveExpr) and expr_equal(self, other)

    def __hash__(self) -> int:
        return hash(self.terms)

    def pretty(self) -> str:
        parts = []
        for atom, i in self.summands():
            parts.append(atom.label() + (f"({i})" if i else ""))
        return " + ".join(parts) if parts else "0"

    def canonical(self) -> list[list]:
        return [[atom.key(), atom.n, i] for atom, i in self.summands()]


def _sort_key(pair: tuple[MotiveAtom, int]):
    atom, i = pair
    return (i, atom.tag.order, atom.n, -1 if atom.split is None else int(atom.split))


def _check_twist(i: int) -> None:
    if i < 0:
        raise NegativeTwist(f"twist {i} < 0")
    if i > MAX_TWIST:
        raise InvalidInput(f"twist {i} exceeds {MAX_TWIST}")


EMPTY = MotiveExpr()


def atom_expr(atom: MotiveAtom, i: int = 0) -> MotiveExpr:
    return MotiveExpr.of([(atom, i)])


def twist(e: MotiveExpr, i: int) -> MotiveExpr:
    """Add ``i`` to every twist."""
    if i < 0:
        raise NegativeTwist(f"twist {i} < 0")
    return MotiveExpr.of((atom, j + i) for atom, j in e.summands())


def dsum(*exprs: MotiveExpr) -> MotiveExpr:
    return MotiveExpr.of(s for e in exprs for s in e.summands())


def expr_equal(a: MotiveExpr, b: MotiveExpr) -> bool:
    return a.counter() == b.counter()


def bundle_expand(base: MotiveAtom, fiber_rank: int) -> MotiveExpr:
    """Projective bundle of relative dimension ``r``: ``sum_{i=0}^{r} M(base)(i)``."""
    if fiber_rank < 0:
        raise InvalidInput("fiber rank must be >= 0")
    return MotiveExpr.of((base, i) for i in range(fiber_rank + 1))


def blowup_expand(total: MotiveAtom, center: MotiveAtom, codim: int) -> MotiveExpr:
    """Blow-up along a codimension-``c`` center: ``M(total) + sum_{i=1}^{c-1} M(center)(i)``."""
    if codim < 1:
        raise InvalidInput("codimension must be >= 1")
    return MotiveExpr.of([(total, 0)] + [(center, i) for i in range(1, codim)])


@dataclass(frozen=True)
class Identity:
    name: str
    n: int
    lhs: MotiveExpr
    rhs: MotiveExpr
    provenance: tuple[str, ...]

    def __post_init__(self):
        if not self.lhs or not self.rhs:
            raise InvalidInput("both sides of an identity must be nonempty")

    def pretty(self) -> str:
        return f"{self.lhs.pretty()} = {self.rhs.pretty()}"

    def canonical(self) -> str:
        return json.dumps({"identity": self.name, "n": self.n, "lhs": self.lhs.canonical(), "rhs": self.rhs.canonical()})


def derive_main_identity(n: int) -> Identity:
    """``M(V(q_h)) + sum_{i=1}^{n-2} M(S)(i) = M(V(h)) + M(V(h))(1)`` for rank ``n``.

    The left side is the blow-up of ``V(q_h)`` along ``S(W)`` (codimension
    ``n-1``); the right side is that blow-up read as a ``P^1``-bundle over ``V(h)``.
    """
    if n < 2:
        raise RankTooSmall(f"the Hermitian identity needs n >= 2, got {n}")
    lhs = blowup_expand(MotiveAtom(Tag.Quadric, n), MotiveAtom(Tag.DegenerateLocus, n), n - 1)
    rhs = bundle_expand(MotiveAtom(Tag.Herm, n), 1)
    steps = (
        "S(W) lies on V(q_h)",
        "g_W restricts to Bl_S V(q_h) -> V(h)",
        "g_h is a P^1-bundle",
        "blow-up formula, codim n-1",
        "projective bundle formula, rank 1",
    )
    return Identity("main", n, lhs, rhs, steps)


def derive_proj_identity(n: int) -> Identity:
    """``M(P_F(N)) + sum_{i=1}^{n-1} M(S)(i) = M(P(N,L)) + M(P(N,L))(1)``."""
    if n < 1:
        raise RankTooSmall(f"the projective identity needs n >= 1, got {n}")
    lhs = blowup_expand(MotiveAtom(Tag.ProjSpace, n), MotiveAtom(Tag.DegenerateLocus, n), n)
    rhs = bundle_expand(MotiveAtom(Tag.WeilProj, n), 1)
    steps = (
        "f_N resolves to g_N on Bl_S P_F(N)",
        "g_N is a P^1-bundle",
        "S(N) = P_L(N)",
        "blow-up formula, codim n",
        "projective bundle formula, rank 1",
    )
    return Identity("proj", n, lhs, rhs, steps)


def derive(name: str, n: int) -> Identity:
    if name == "main":
        return derive_main_identity(n)
    if name == "proj":
        return derive_proj_identity(n)
    raise InvalidInput(f"unknown identity {name!r}")
