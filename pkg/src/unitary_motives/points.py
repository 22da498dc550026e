"""Exact point enumeration over ``F_Q`` (``Q = q^k``).

Every count is produced by walking an explicit list of normalized
representatives in chunks of numpy arrays.  Normalized projective vectors are
indexed by a rank in ``[0, #P^{N-1})`` (lexicographic order), so any index
range can be handed to a worker and the partial counts added back together.

Varieties covered, for a rank-``n`` module ``N`` over ``L`` (F-dimension ``2n``):

- ``P_F(N)``           -- :func:`count_proj_space`
- ``S(N)``             -- :func:`count_S`, classes with nonzero ``L``-annihilator
- ``P(N, L)``          -- :func:`count_weil_proj`, ``L``-lines
- ``V(q)``             -- :func:`count_quadric`
- ``V(h)``             -- :func:`count_hermitian_variety`, isotropic ``L``-lines
- the incidence model of ``Bl_S P_F(N)`` -- :func:`enum_incidence_blowup`
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import partial
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import DegeneratePoint, DimensionMismatch, EnumerationBoundExceeded, InvalidInput, NotSplit
from .fields import (
    EtaleAlgebra,
    ExtensionCtx,
    FiniteField,
    annihilated_mask,
    from_split_coordinates,
    is_split,
    split_coordinates,
)
from .forms import HermitianDiag, QuadraticForm, deinterleave, interleave, trace_form

DEFAULT_BOUND = 10**7
CHUNK = 1 << 15


def default_bound() -> int:
    return int(os.environ.get("UNITARY_MOTIVES_BOUND", DEFAULT_BOUND))


def proj_size(N: int, A: int) -> int:
    """Number of normalized nonzero vectors of length ``N`` over an alphabet of size ``A``."""
    return (A**N - 1) // (A - 1)


def check_bound(points: int, bound: int | None) -> None:
    bound = default_bound() if bound is None else bound
    if points > bound:
        raise EnumerationBoundExceeded(f"{points} points exceed the enumeration bound {bound}")


# -- normalized projective vectors -------------------------------------------


def unrank_normalized(idx: np.ndarray, N: int, A: int) -> np.ndarray:
    """Vectors with first nonzero entry 1, in lexicographic order, by rank.

    Vectors whose leading 1 sits at position ``j`` have ``r = N-1-j`` free
    trailing symbols; the block for ``r`` starts at ``(A^r - 1)/(A - 1)``.
    """
    idx = np.asarray(idx, dtype=np.int64)
    offsets = np.array([proj_size(r, A) for r in range(N)], dtype=np.int64)
    r = np.searchsorted(offsets, idx, side="right") - 1
    rem = idx - offsets[r]
    out = np.zeros((len(idx), N), dtype=np.int64)
    rows = np.arange(len(idx))
    out[rows, N - 1 - r] = 1
    for pos in range(N - 1, 0, -1):
        # digit for position ``pos`` is the least significant of the block
        free = pos > N - 1 - r
        out[:, pos] = np.where(free, rem % A, out[:, pos])
        rem = np.where(free, rem // A, rem)
    return out


def iter_ranges(start: int, stop: int, step: int) -> Iterator[tuple[int, int]]:
    for a in range(start, stop, step):
        yield a, min(stop, a + step)


def proj_points(N: int, A: int, start: int = 0, stop: int | None = None, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    stop = proj_size(N, A) if stop is None else stop
    for a, b in iter_ranges(start, stop, chunk):
        yield unrank_normalized(np.arange(a, b, dtype=np.int64), N, A)


def normalize_rows(F: FiniteField, W: np.ndarray) -> np.ndarray:
    """Scale each nonzero row so that its first nonzero entry is 1."""
    W = np.asarray(W)
    nz = W != 0
    lead_pos = np.argmax(nz, axis=-1)
    lead = np.take_along_axis(W, lead_pos[..., None], axis=-1)
    lead = np.where(lead == 0, 1, lead)
    return F.mul(W, F.inv(lead))


def encode_rows(W: np.ndarray, Q: int) -> np.ndarray:
    N = W.shape[-1]
    if Q**N >= 2**62:
        raise InvalidInput("vectors too long to encode as int64 keys")
    weights = np.array([Q**i for i in range(N)], dtype=np.int64)
    return W @ weights


def _sum_ranges(task: Callable[[int, int], int], total: int, jobs: int) -> int:
    if jobs <= 1 or total < 2 * CHUNK:
        return task(0, total)
    step = -(-total // jobs)
    ranges = list(iter_ranges(0, total, step))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_call_range, [task] * len(ranges), ranges))
    return sum(parts)


def _call_range(task, rng):
    return task(*rng)


# -- module and L-line descriptors ---------------------------------------------


@dataclass(frozen=True)
class ModuleSpec:
    """Free ``L``-module of rank ``rank``, seen as an ``F``-space of dimension ``2*rank``."""

    algebra: EtaleAlgebra
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidInput("module rank must be >= 1")

    @property
    def fdim(self) -> int:
        return 2 * self.rank

    @property
    def field(self) -> FiniteField:
        return self.algebra.field

    def base_change(self, ext: ExtensionCtx) -> "ModuleSpec":
        return ModuleSpec(self.algebra.base_change(ext), self.rank)


@dataclass(frozen=True)
class LLinePoint:
    """A point of ``P(N, L)``.

    ``kind == "split"``: ``data`` is a pair of normalized vectors, the two
    idempotent components.  ``kind == "field"``: ``data`` is the generator as
    a tuple of ``(u, v)`` pairs, scaled so its first nonzero coordinate is 1.
    """

    kind: str
    data: tuple


def _working(obj, ext: ExtensionCtx | None):
    return obj if ext is None else obj.base_change(ext)


def lline_size(N: ModuleSpec) -> int:
    Q = N.field.q
    if is_split(N.algebra):
        return proj_size(N.rank, Q) ** 2
    return proj_size(N.rank, Q * Q)


def lline_generators(N: ModuleSpec, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Generators ``(U, V)`` of the ``L``-lines with index in ``[start, stop)``."""
    L = N.algebra
    Q = L.field.q
    n = N.rank
    idx = np.arange(start, stop, dtype=np.int64)
    if is_split(L):
        P = proj_size(n, Q)
        ia, ig = np.divmod(idx, P)
        alpha = unrank_normalized(ia, n, Q)
        gamma = unrank_normalized(ig, n, Q)
        return from_split_coordinates(L, alpha, gamma)
    sym = unrank_normalized(idx, n, Q * Q)
    return sym % Q, sym // Q


def iter_llines(N: ModuleSpec, start: int = 0, stop: int | None = None, chunk: int = CHUNK):
    stop = lline_size(N) if stop is None else stop
    for a, b in iter_ranges(start, stop, chunk):
        yield lline_generators(N, a, b)


def lline_point(N: ModuleSpec, U: Sequence[int], V: Sequence[int]) -> LLinePoint:
    """Canonical :class:`LLinePoint` of the ``L``-line generated by ``U + V*beta``."""
    L = N.algebra
    F = L.field
    U = np.asarray(U, dtype=np.int64)[None, :]
    V = np.asarray(V, dtype=np.int64)[None, :]
    if is_split(L):
        alpha, gamma = split_coordinates(L, U, V)
        a = tuple(int(x) for x in normalize_rows(F, alpha)[0])
        g = tuple(int(x) for x in normalize_rows(F, gamma)[0])
        return LLinePoint("split", (a, g))
    nz = (U[0] != 0) | (V[0] != 0)
    j = int(np.argmax(nz))
    nu = L.norm_uv(U[0, j], V[0, j])
    ninv = F.inv(nu)
    iu, iv = F.mul(U[0, j], ninv), F.mul(F.neg(V[0, j]), ninv)
    u, v = L.mul_uv(U[0], V[0], iu, iv)
    return LLinePoint("field", tuple((int(a), int(b)) for a, b in zip(u, v)))


# -- counts ----------------------------------------------------------------------


@dataclass
class CountReport:
    variety: str
    params: dict
    count: int
    elapsed_ms: int

    def to_json(self) -> dict:
        return {"variety": self.variety, "params": self.params, "count": self.count, "elapsed_ms": self.elapsed_ms}


def count_proj_space(dim: int, field: FiniteField, ext: ExtensionCtx | None = None, verify_limit: int = 1 << 16) -> int:
    """``#P^{dim-1}(F_Q)``; cross-checked by brute force over ``F_Q^dim`` when small."""
    if dim < 1:
        raise InvalidInput("dim must be >= 1")
    F = field if ext is None else ext.field
    Q = F.q
    value = proj_size(dim, Q)
    if Q**dim <= verify_limit:
        allv = (np.arange(Q**dim, dtype=np.int64)[:, None] // np.array([Q**i for i in range(dim)])) % Q
        nz = allv != 0
        first = np.argmax(nz, axis=1)
        lead = allv[np.arange(len(allv)), first]
        brute = int(np.count_nonzero(nz.any(axis=1) & (lead == 1)))
        if brute != value:
            raise AssertionError(f"projective count mismatch: {brute} != {value}")
    return value


def _S_task(L: EtaleAlgebra, n: int, start: int, stop: int) -> int:
    total = 0
    for W in proj_points(2 * n, L.field.q, start, stop):
        U, V = deinterleave(W)
        total += int(np.count_nonzero(annihilated_mask(L, U, V)))
    return total


def count_S(N: ModuleSpec, ext: ExtensionCtx | None = None, bound: int | None = None, jobs: int = 1) -> int:
    """``#S(N)(F_Q)``: classes ``[m]`` of ``P_F(N)`` with ``ann_L(m) != 0``."""
    N = _working(N, ext)
    total = proj_size(N.fdim, N.field.q)
    check_bound(total, bound)
    return _sum_ranges(partial(_S_task, N.algebra, N.rank), total, jobs)


def iter_S_points(N: ModuleSpec, ext: ExtensionCtx | None = None) -> Iterator[np.ndarray]:
    N = _working(N, ext)
    for W in proj_points(N.fdim, N.field.q):
        U, V = deinterleave(W)
        mask = annihilated_mask(N.algebra, U, V)
        if mask.any():
            yield W[mask]


def _weil_task(N: ModuleSpec, start: int, stop: int) -> int:
    total = 0
    for U, V in iter_llines(N, start, stop):
        total += int(np.count_nonzero(~annihilated_mask(N.algebra, U, V)))
    return total


def count_weil_proj(N: ModuleSpec, ext: ExtensionCtx | None = None, bound: int | None = None, jobs: int = 1) -> int:
    """``#P(N, L)(F_Q)``: enumerated ``L``-lines whose generator is free."""
    N = _working(N, ext)
    check_bound(proj_size(N.fdim, N.field.q), bound)
    return _sum_ranges(partial(_weil_task, N), lline_size(N), jobs)


def _quadric_task(q: QuadraticForm, start: int, stop: int) -> int:
    total = 0
    for W in proj_points(q.dim, q.field.q, start, stop):
        total += int(np.count_nonzero(q.values(W) == 0))
    return total


def count_quadric(q: QuadraticForm, ext: ExtensionCtx | None = None, bound: int | None = None, jobs: int = 1) -> int:
    """``#V(q)(F_Q)``."""
    if q.dim < 2:
        raise InvalidInput("quadric needs dimension >= 2")
    q = _working(q, ext)
    total = proj_size(q.dim, q.field.q)
    check_bound(total, bound)
    return _sum_ranges(partial(_quadric_task, q), total, jobs)


def find_isotropic_vector(q: QuadraticForm, bound: int | None = None) -> tuple[int, ...] | None:
    """First normalized ``w`` (lexicographic order) with ``q(w) = 0``."""
    check_bound(proj_size(q.dim, q.field.q), bound)
    for W in proj_points(q.dim, q.field.q):
        hits = np.flatnonzero(q.values(W) == 0)
        if len(hits):
            return tuple(int(x) for x in W[hits[0]])
    return None


def _herm_task(h: HermitianDiag, start: int, stop: int) -> int:
    N = ModuleSpec(h.algebra, h.n)
    total = 0
    for U, V in iter_llines(N, start, stop):
        hu, hv = h.values_uv(U, V)
        if np.any(hv != 0):
            raise AssertionError("h(w, w) left the base field")
        total += int(np.count_nonzero(hu == 0))
    return total


def count_hermitian_variety(h: HermitianDiag, ext: ExtensionCtx | None = None, bound: int | None = None, jobs: int = 1) -> int:
    """``#V(h)(F_Q)``: ``L``-lines ``[w]`` with ``h(w, w) = 0``."""
    if h.n < 2:
        raise InvalidInput("V(h) needs rank >= 2")
    h = _working(h, ext)
    check_bound(proj_size(2 * h.n, h.field.q), bound)
    return _sum_ranges(partial(_herm_task, h), lline_size(ModuleSpec(h.algebra, h.n)), jobs)


def S_quadric_violations(h: HermitianDiag, ext: ExtensionCtx | None = None, bound: int | None = None) -> tuple[int, int]:
    """``(#S(W), #{points of S(W) off V(q_h)})``."""
    h = _working(h, ext)
    N = ModuleSpec(h.algebra, h.n)
    check_bound(proj_size(N.fdim, N.field.q), bound)
    qh = trace_form(h)
    seen = bad = 0
    for W in iter_S_points(N):
        seen += len(W)
        bad += int(np.count_nonzero(qh.values(W) != 0))
    return seen, bad


def check_S_in_quadric(h: HermitianDiag, ext: ExtensionCtx | None = None, bound: int | None = None) -> bool:
    """Whether every point of ``S(W)`` lies on ``V(q_h)``."""
    return S_quadric_violations(h, ext, bound)[1] == 0


# -- blow-up incidence model ---------------------------------------------------


@dataclass
class IncidenceResult:
    """Points of the incidence model ``{([n], Lambda) : n in Lambda}`` grouped by base point.

    ``fiber_sizes[i]`` is the number of distinct classes ``[n]`` over the
    ``i``-th counted base point (base points in enumeration order).
    """

    model: str
    restricted: bool
    total: int
    fiber_sizes: np.ndarray = dc_field(repr=False)
    exceptional: int
    closure_violations: int
    Q: int

    @property
    def n_fibers(self) -> int:
        return len(self.fiber_sizes)

    @property
    def uniform(self) -> bool:
        return bool(np.all(self.fiber_sizes == self.Q + 1))

    @property
    def variance(self) -> Fraction:
        """Exact population variance of the fiber sizes."""
        n = self.n_fibers
        if n == 0:
            return Fraction(0)
        s1 = int(self.fiber_sizes.sum())
        s2 = int((self.fiber_sizes.astype(object) ** 2).sum())
        return Fraction(n * s2 - s1 * s1, n * n)

    def histogram(self) -> dict[int, int]:
        sizes, counts = np.unique(self.fiber_sizes, return_counts=True)
        return {int(a): int(b) for a, b in zip(sizes, counts)}


def fiber_scalars(L: EtaleAlgebra, model: str) -> tuple[np.ndarray, np.ndarray]:
    """``L``-scalars ``l`` parametrizing one fiber, one per point of ``P^1(F)``.

    ``split``: ``l = lambda e1 + mu e2``.  ``span``: ``l = x + y*beta``.
    """
    F = L.field
    P1 = unrank_normalized(np.arange(F.q + 1), 2, F.q)
    if model == "split":
        return from_split_coordinates(L, P1[:, 0], P1[:, 1])
    return P1[:, 0].copy(), P1[:, 1].copy()


def _incidence_task(N: ModuleSpec, model: str, restrict: QuadraticForm | None, start: int, stop: int):
    L = N.algebra
    F = L.field
    Q = F.q
    lu, lv = fiber_scalars(L, model)
    unit = L.norm_uv(lu, lv) != 0
    sizes, exc, viol = [], 0, 0
    chunk = max(1, CHUNK // (Q + 1))
    for U, V in iter_llines(N, start, stop, chunk):
        fu, fv = L.mul_uv(lu[None, :, None], lv[None, :, None], U[:, None, :], V[:, None, :])
        W = normalize_rows(F, interleave(fu, fv))
        if restrict is not None:
            qv = restrict.values(W) == 0
            keep = qv[:, unit].all(axis=1)
            viol += int(np.count_nonzero(~qv[keep]))
            W, fu, fv = W[keep], fu[keep], fv[keep]
        keys = np.sort(encode_rows(W, Q), axis=1)
        sizes.append(1 + np.count_nonzero(np.diff(keys, axis=1), axis=1))
        exc += int(np.count_nonzero(annihilated_mask(L, fu, fv)))
    fibers = np.concatenate(sizes) if sizes else np.zeros(0, dtype=np.int64)
    return fibers, exc, viol


def _incidence(N: ModuleSpec, model: str, restrict_to, ext, bound, jobs) -> IncidenceResult:
    N = _working(N, ext)
    if restrict_to is not None:
        restrict_to = _working(restrict_to, ext)
        if restrict_to.dim != N.fdim:
            raise DimensionMismatch("restricting quadric must live on P_F(N)")
    check_bound(proj_size(N.fdim, N.field.q), bound)
    total = lline_size(N)
    task = partial(_incidence_task, N, model, restrict_to)
    if jobs <= 1 or total < 2 * CHUNK:
        parts = [task(0, total)]
    else:
        step = -(-total // jobs)
        ranges = list(iter_ranges(0, total, step))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_call_range, [task] * len(ranges), ranges))
    fibers = np.concatenate([p[0] for p in parts])
    return IncidenceResult(
        model=model,
        restricted=restrict_to is not None,
        total=int(fibers.sum()),
        fiber_sizes=fibers,
        exceptional=sum(p[1] for p in parts),
        closure_violations=sum(p[2] for p in parts),
        Q=N.field.q,
    )


def enum_incidence_blowup(
    N: ModuleSpec,
    ext: ExtensionCtx | None = None,
    restrict_to: QuadraticForm | None = None,
    bound: int | None = None,
    jobs: int = 1,
) -> IncidenceResult:
    """Split incidence model ``{([n1; n2], [m1], [m2]) : n_i on the line [m_i]}``.

    The fiber over ``([m1], [m2])`` is ``{[lambda m1; mu m2]}``.  With
    ``restrict_to`` only the strict transform is kept: a fiber is counted
    when its open part (``lambda*mu != 0``) lies on the quadric, and then all
    of its points are counted; points of a counted fiber that miss the
    quadric are reported in ``closure_violations``.
    """
    if not is_split(_working(N, ext).algebra):
        raise NotSplit("the split incidence model needs L to split over the working field")
    return _incidence(N, "split", restrict_to, ext, bound, jobs)


def enum_span_incidence(
    N: ModuleSpec,
    ext: ExtensionCtx | None = None,
    restrict_to: QuadraticForm | None = None,
    bound: int | None = None,
    jobs: int = 1,
) -> IncidenceResult:
    """Incidence model ``{([n], Lambda) : Lambda an L-line, n in Lambda}`` for any ``L``.

    The fiber over ``Lambda = L g`` is ``{[l g] : l in P_F(L)}``; in the split
    case this is the same set as :func:`enum_incidence_blowup`.
    """
    return _incidence(N, "span", restrict_to, ext, bound, jobs)


def span_map(m: Sequence[int], N: ModuleSpec) -> LLinePoint:
    """The ``L``-line ``L m`` through a point of ``P_F(N)`` outside ``S(N)``.

    ``m`` is given in interleaved coordinates ``(u1, v1, ..., un, vn)``.
    """
    m = np.asarray(m, dtype=np.int64)
    if m.shape != (N.fdim,):
        raise DimensionMismatch(f"expected {N.fdim} coordinates")
    U, V = deinterleave(m[None, :])
    if annihilated_mask(N.algebra, U, V)[0]:
        raise DegeneratePoint(f"{tuple(int(x) for x in m)} lies in S(N)")
    return lline_point(N, U[0], V[0])


def count_blowup_formula(x_count: int, s_count: int, codim: int, Q: int) -> int:
    """``x + sum_{i=1}^{c-1} Q^i s``: point count of a blow-up along a codimension-``c`` center."""
    if codim < 1:
        raise InvalidInput("codimension must be >= 1")
    return x_count + sum(Q**i * s_count for i in range(1, codim))


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, int(round((time.perf_counter() - t0) * 1000))
