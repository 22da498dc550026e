"""Counting realization of motive expressions and the checks built on it.

``M(X)`` is sent to ``#X(F_Q)`` and the Tate twist ``(i)`` to the factor
``Q^i``, with ``Q = q^k``.  Every atom count comes from :mod:`.points`
enumeration, never from a closed formula.
"""

from __future__ import annotations

import itertools
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Mapping

import numpy as np

from .errors import EnumerationBoundExceeded, InvalidInput, UnresolvedAtom
from .fields import SIGN, EtaleAlgebra, ExtensionCtx, FiniteField, SignField, extend, is_split, make_field
from .forms import HermitianDiag, QuadraticForm, deinterleave, quad_eval, sign_isotropic, trace_form
from .motives import Identity, MotiveExpr, Tag, derive
from .points import (
    ModuleSpec,
    S_quadric_violations,
    check_bound,
    count_blowup_formula,
    count_hermitian_variety,
    count_proj_space,
    count_quadric,
    count_S,
    count_weil_proj,
    default_bound,
    enum_incidence_blowup,
    enum_span_incidence,
    find_isotropic_vector,
    proj_points,
    proj_size,
)


class RealizationCtx:
    """Fixes ``F_q``, ``k``, ``b`` and ``h = <a_1..a_n>``; memoizes atom counts.

    Parameters
    ----------
    field : FiniteField
        The base field ``F_q``.
    b : int
        ``L = F[beta]/(beta^2 - b)``.
    coeffs : sequence of int
        Diagonal of ``h``; its length is the rank ``n``.
    k : int
        Count over ``F_{q^k}``.
    """

    def __init__(self, field: FiniteField, b, coeffs, k: int = 1, bound: int | None = None, jobs: int = 1):
        self.field = field
        self.k = k
        self.ext: ExtensionCtx = extend(field, k)
        self.algebra = EtaleAlgebra(field, b)
        self.h = HermitianDiag(self.algebra, tuple(coeffs))
        self.bound = default_bound() if bound is None else bound
        self.jobs = jobs
        self.counts: dict[Tag, int] = {}
        self.timings: dict[Tag, int] = {}

    @property
    def n(self) -> int:
        return self.h.n

    @property
    def Q(self) -> int:
        return self.ext.Q

    @property
    def module(self) -> ModuleSpec:
        return ModuleSpec(self.algebra, self.n)

    def params(self) -> dict:
        return {
            "p": self.field.p,
            "m": self.field.m,
            "k": self.k,
            "b": int(self.algebra.b),
            "coeffs": [int(a) for a in self.h.coeffs],
            "n": self.n,
        }

    def _compute(self, tag: Tag) -> int:
        kw = dict(bound=self.bound, jobs=self.jobs)
        if tag is Tag.ProjSpace:
            check_bound(proj_size(2 * self.n, self.Q), self.bound)
            return count_proj_space(2 * self.n, self.field, self.ext)
        if tag is Tag.Quadric:
            return count_quadric(trace_form(self.h), self.ext, **kw)
        if tag is Tag.DegenerateLocus:
            return count_S(self.module, self.ext, **kw)
        if tag is Tag.WeilProj:
            return count_weil_proj(self.module, self.ext, **kw)
        if tag is Tag.Herm:
            return count_hermitian_variety(self.h, self.ext, **kw)
        raise UnresolvedAtom(tag)

    def count(self, atom) -> int:
        if atom.n != self.n:
            raise UnresolvedAtom(f"{atom} does not match rank {self.n}")
        if atom.tag not in self.counts:
            t0 = time.perf_counter()
            self.counts[atom.tag] = self._compute(atom.tag)
            self.timings[atom.tag] = int(round(1000 * (time.perf_counter() - t0)))
        return self.counts[atom.tag]


def realize(e: MotiveExpr, ctx: RealizationCtx) -> int:
    """``sum Q^twist * #atom(F_Q)`` over the summands of ``e``."""
    return sum(mult * ctx.Q**i * ctx.count(atom) for (atom, i), mult in e.terms)


@dataclass
class VerifyReport:
    identity: str
    n: int
    params: dict
    lhs: int
    rhs: int
    breakdown: dict
    elapsed_ms: int
    provenance: tuple = ()

    @property
    def verdict(self) -> str:
        return "pass" if self.lhs == self.rhs else "fail"

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "params": dict(self.params),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "verdict": self.verdict,
            "breakdown": dict(self.breakdown),
            "elapsed_ms": self.elapsed_ms,
            "provenance": list(self.provenance),
        }

    def sort_key(self):
        p = self.params
        return (self.identity, p["p"], p["m"], p["n"], p["b"], p["k"], tuple(p["coeffs"]))


def verify_identity(identity: Identity, ctx: RealizationCtx) -> VerifyReport:
    if identity.n != ctx.n:
        raise InvalidInput(f"identity is for rank {identity.n}, context has rank {ctx.n}")
    t0 = time.perf_counter()
    lhs = realize(identity.lhs, ctx)
    rhs = realize(identity.rhs, ctx)
    tags = {atom.tag for atom, _ in identity.lhs.summands() + identity.rhs.summands()}
    breakdown = {t.name: ctx.counts[t] for t in Tag if t in tags}
    return VerifyReport(
        identity=identity.name,
        n=identity.n,
        params=ctx.params(),
        lhs=lhs,
        rhs=rhs,
        breakdown=breakdown,
        elapsed_ms=int(round(1000 * (time.perf_counter() - t0))),
        provenance=identity.provenance,
    )


# -- sweeps -----------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    identity: str
    p: int
    m: int
    n: int
    b: int
    k: int
    coeffs: tuple


def _pick_b(F: FiniteField, kind, rng: np.random.Generator) -> int:
    if kind == "square":
        return int(rng.choice(F.squares()))
    if kind == "nonsquare":
        return int(rng.choice(F.nonsquares()))
    return F.coerce(int(kind))


def draw_form(F: FiniteField, n: int, kind, seed: int) -> tuple[int, tuple[int, ...]]:
    """Seeded choice of ``b`` (of the requested kind) and a random nonzero diagonal."""
    key = zlib.crc32(f"{F.p}:{F.m}:{n}:{kind}".encode())
    rng = np.random.default_rng([seed, key])
    b = _pick_b(F, kind, rng)
    coeffs = tuple(int(a) for a in rng.integers(1, F.q, size=n))
    return b, coeffs


def plan_sweep(grid: Mapping[str, Iterable], seed: int = 0, bound: int | None = None) -> tuple[list[Cell], list[Cell]]:
    """Cells of ``grid`` within the enumeration bound, and those skipped.

    Keys: ``p``, ``m`` (default ``[1]``), ``n``, ``b`` (``"square"``,
    ``"nonsquare"`` or a literal), ``k`` (default ``[1]``), ``identity``
    (default ``["main", "proj"]``).
    """
    bound = default_bound() if bound is None else bound
    if not grid or not all(grid.get(key) for key in ("p", "n", "b")):
        return [], []
    cells, skipped = [], []
    for ident, p, m, n, kind, k in itertools.product(
        grid.get("identity", ["main", "proj"]),
        grid["p"],
        grid.get("m", [1]),
        grid["n"],
        grid["b"],
        grid.get("k", [1]),
    ):
        if ident == "main" and n < 2:
            continue
        F = make_field(p, m)
        b, coeffs = draw_form(F, n, kind, seed)
        cell = Cell(ident, p, m, n, b, k, coeffs)
        (cells if proj_size(2 * n, F.q**k) <= bound else skipped).append(cell)
    return cells, skipped


def run_cell(cell: Cell, bound: int | None = None) -> VerifyReport:
    ctx = RealizationCtx(make_field(cell.p, cell.m), cell.b, cell.coeffs, cell.k, bound=bound)
    return verify_identity(derive(cell.identity, cell.n), ctx)


def sweep(grid: Mapping[str, Iterable], seed: int = 0, jobs: int = 1, bound: int | None = None) -> list[VerifyReport]:
    """Verify every in-bound cell of ``grid``; reports sorted by parameters."""
    cells, _ = plan_sweep(grid, seed, bound)
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run_cell, cells, [bound] * len(cells)))
    else:
        reports = [run_cell(c, bound) for c in cells]
    return sorted(reports, key=VerifyReport.sort_key)


# -- per-cell audit ------------------------------------------------------------


def count_square_roots(F: FiniteField, b: int) -> int:
    """``#Hom_F(L, F)``: the number of ``s`` in ``F`` with ``s^2 = b`` (brute force)."""
    xs = F.elements()
    return int(np.count_nonzero(F.mul(xs, xs) == b))


@dataclass
class CellAudit:
    params: dict
    main: VerifyReport
    proj: VerifyReport | None
    values: dict = dc_field(default_factory=dict)
    checks: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def audit_cell(field: FiniteField, b, coeffs, k: int = 1, bound: int | None = None) -> CellAudit:
    """Run every counting check for one ``(F_q, b, h, k)``.

    Values collected: the main and projective identities, ``S(W)`` against
    ``V(q_h)``, the ``S(N) = P_L(N)`` count law, and the restricted and
    unrestricted incidence models against the blow-up formula.
    """
    ctx = RealizationCtx(field, b, coeffs, k, bound=bound)
    n, Q = ctx.n, ctx.Q
    main = verify_identity(derive("main", n), ctx)
    proj = verify_identity(derive("proj", n), ctx)
    cnt = ctx.counts
    vals: dict = {}
    chk: dict = {}
    chk["main_identity"] = main.passed
    chk["proj_identity"] = proj.passed

    hw = ctx.h.base_change(ctx.ext)
    s_seen, s_bad = S_quadric_violations(hw, bound=ctx.bound)
    vals["S_points_checked"] = s_seen
    chk["S_in_quadric"] = s_bad == 0 and s_seen == cnt[Tag.DegenerateLocus]

    roots = count_square_roots(ctx.ext.field, hw.algebra.b)
    law = roots * count_proj_space(n, ctx.ext.field)
    vals["embeddings"] = roots
    vals["S_law"] = law
    chk["S_count_law"] = cnt[Tag.DegenerateLocus] == law

    Nw = ModuleSpec(hw.algebra, n)
    qh = trace_form(hw)
    split = is_split(hw.algebra)
    vals["split"] = split
    enum = enum_incidence_blowup if split else enum_span_incidence
    full = enum(Nw, bound=ctx.bound)
    restricted = enum(Nw, restrict_to=qh, bound=ctx.bound)
    vals["incidence_model"] = full.model
    vals["incidence_total"] = full.total
    vals["restricted_total"] = restricted.total
    vals["fiber_histogram"] = full.histogram()
    chk["fibers_uniform"] = full.uniform and restricted.uniform and full.variance == 0
    chk["incidence_vs_formula"] = full.total == count_blowup_formula(cnt[Tag.ProjSpace], cnt[Tag.DegenerateLocus], n, Q)
    blow = count_blowup_formula(cnt[Tag.Quadric], cnt[Tag.DegenerateLocus], n - 1, Q)
    bundle = (Q + 1) * cnt[Tag.Herm]
    vals["triple"] = (restricted.total, blow, bundle)
    chk["triple_agreement"] = restricted.total == blow == bundle and restricted.closure_violations == 0
    if split:
        span = enum_span_incidence(Nw, restrict_to=qh, bound=ctx.bound)
        chk["split_vs_span_model"] = span.total == restricted.total
    return CellAudit(ctx.params(), main, proj, vals, chk)


# -- zero-cycles ----------------------------------------------------------------


@dataclass
class A0Result:
    """``A_0`` of ``V(h)`` (equivalently of ``V(q_h)``): ``Z`` or ``2Z``.

    ``degree_map_injective`` is not recomputed; it holds in both cases of the
    dichotomy and is reported as such.
    """

    group: str
    mode: str
    form: tuple
    witness: tuple | None = None
    certificate: str = ""
    degree_map_injective: bool = True
    injectivity_source: str = "derived from the A_0 dichotomy"

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "mode": self.mode,
            "form": [str(c) for c in self.form],
            "witness": None if self.witness is None else list(self.witness),
            "certificate": self.certificate,
            "degree_map_injective": self.degree_map_injective,
            "injectivity_source": self.injectivity_source,
        }


def find_hermitian_isotropic(h: HermitianDiag, bound: int | None = None) -> tuple[int, ...] | None:
    """First class ``[w]`` of ``P_F(W)`` with ``h(w, w) = 0`` (interleaved coordinates)."""
    check_bound(proj_size(2 * h.n, h.field.q), bound)
    for W in proj_points(2 * h.n, h.field.q):
        U, V = deinterleave(W)
        hu, hv = h.values_uv(U, V)
        hits = np.flatnonzero((hu == 0) & (hv == 0))
        if len(hits):
            return tuple(int(x) for x in W[hits[0]])
    return None


def a0(form, ctx: ExtensionCtx | SignField | None = None, bound: int | None = None) -> A0Result:
    """``Z`` with an isotropic witness, or ``2Z`` with a certificate.

    Hermitian input is converted to ``q_h``; in finite mode the witness is
    searched with ``h`` itself and then checked against ``q_h``.
    """
    herm = form if isinstance(form, HermitianDiag) else None
    F = form.field
    if isinstance(ctx, SignField) or isinstance(F, SignField):
        q = trace_form(herm) if herm is not None else form
        iso = sign_isotropic(q.coeffs)
        signs = sorted({SIGN.sign(c) for c in q.coeffs})
        if iso:
            cert = "entries of both signs: isotropic over the real closure"
        else:
            cert = f"all entries {'positive' if signs == [1] else 'negative'}: definite, anisotropic"
        return A0Result("Z" if iso else "2Z", "sign", q.coeffs, None, cert)
    if isinstance(ctx, ExtensionCtx):
        form = form.base_change(ctx)
        herm = form if herm is not None else None
    if herm is not None:
        q = trace_form(herm)
        w = find_hermitian_isotropic(herm, bound)
    else:
        q = form
        w = find_isotropic_vector(q, bound)
    if w is not None:
        if quad_eval(q, w) != 0:
            raise AssertionError(f"witness {w} is not isotropic for q_h")
        return A0Result("Z", "finite", q.coeffs, w, "isotropic vector found")
    total = proj_size(q.dim, q.field.q)
    return A0Result("2Z", "finite", q.coeffs, None, f"exhausted {total} projective classes")


def isotropy_equivalence_check(h: HermitianDiag, bound: int | None = None) -> tuple[int, int, int]:
    """Compare ``h(w, w) = 0`` with ``q_h(w') = 0`` on every class of ``P_F(W)``.

    Both predicates are invariant under ``w -> c w`` for ``c`` in ``F^x``, so
    one representative per class plus the zero vector covers every vector.
    Returns ``(vectors checked, predicate disagreements, value disagreements)``.
    """
    qh = trace_form(h)
    total = proj_size(2 * h.n, h.field.q)
    check_bound(total, bound)
    disagree = value_mismatch = 0
    for W in proj_points(2 * h.n, h.field.q):
        U, V = deinterleave(W)
        hu, hv = h.values_uv(U, V)
        qv = qh.values(W)
        disagree += int(np.count_nonzero(((hu == 0) & (hv == 0)) != (qv == 0)))
        value_mismatch += int(np.count_nonzero((hu != qv) | (hv != 0)))
    return total + 1, disagree, value_mismatch
