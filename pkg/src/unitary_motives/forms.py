"""Diagonal Hermitian forms over ``L`` and diagonal quadratic forms over ``F``.

Coordinates convention: a vector ``w`` of the rank-``n`` ``L``-module with
coordinates ``w_i = u_i + v_i*beta`` is the ``F``-vector
``(u_1, v_1, u_2, v_2, ..., u_n, v_n)``.  The trace form is written in the
same interleaved order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DegenerateForm, DimensionMismatch, InvalidInput
from .fields import SIGN, EtaleAlgebra, EtaleElement, ExtensionCtx, FiniteField, SignField, sigma


@dataclass(frozen=True)
class HermitianDiag:
    """``h = <a_1, ..., a_n>`` with ``h(x, y) = sum a_i x_i sigma(y_i)``."""

    algebra: EtaleAlgebra
    coeffs: tuple

    def __post_init__(self):
        F = self.algebra.field
        if len(self.coeffs) < 1:
            raise DegenerateForm("a Hermitian form needs rank >= 1")
        coeffs = tuple(_coerce(F, a) for a in self.coeffs)
        if any(a == 0 for a in coeffs):
            raise DegenerateForm(f"zero diagonal coefficient in {list(self.coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def field(self):
        return self.algebra.field

    def base_change(self, ext: ExtensionCtx) -> "HermitianDiag":
        return HermitianDiag(self.algebra.base_change(ext), tuple(ext.embed(a) for a in self.coeffs))

    def values_uv(self, U: np.ndarray, V: np.ndarray):
        """``h(w, w)`` for each row of the coordinate arrays, as an ``(u, v)`` pair."""
        L = self.algebra
        F = L.field
        hu = np.zeros(U.shape[:-1], dtype=np.int64)
        hv = np.zeros(U.shape[:-1], dtype=np.int64)
        for i, a in enumerate(self.coeffs):
            su, sv = L.sigma_uv(U[..., i], V[..., i])
            pu, pv = L.mul_uv(U[..., i], V[..., i], su, sv)
            hu = F.add(hu, F.mul(a, pu))
            hv = F.add(hv, F.mul(a, pv))
        return hu, hv


@dataclass(frozen=True)
class QuadraticForm:
    """Diagonal quadratic form ``q(w) = sum d_i w_i^2``."""

    field: object
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(_coerce(self.field, d) for d in self.coeffs)
        if len(coeffs) < 1:
            raise DegenerateForm("empty quadratic form")
        if any(d == 0 for d in coeffs):
            raise DegenerateForm(f"zero diagonal coefficient in {list(self.coeffs)}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def base_change(self, ext: ExtensionCtx) -> "QuadraticForm":
        return QuadraticForm(ext.field, tuple(ext.embed(d) for d in self.coeffs))

    def scaled(self, c) -> "QuadraticForm":
        return QuadraticForm(self.field, tuple(self.field.mul(c, d) for d in self.coeffs))

    def values(self, W: np.ndarray) -> np.ndarray:
        """``q`` evaluated on every row of ``W``."""
        F = self.field
        W = np.asarray(W)
        if W.shape[-1] != self.dim:
            raise DimensionMismatch(f"expected vectors of length {self.dim}, got {W.shape[-1]}")
        out = np.zeros(W.shape[:-1], dtype=np.int64)
        for i, d in enumerate(self.coeffs):
            out = F.add(out, F.mul(d, F.mul(W[..., i], W[..., i])))
        return out


def _coerce(F, x):
    if isinstance(F, SignField):
        return Fraction(x)
    if isinstance(F, FiniteField):
        return F.coerce(x)
    raise InvalidInput(f"unsupported field {F!r}")


def parse_coeffs(text: str, field) -> tuple:
    """Parse ``"1,-1,1"`` into field elements (residues, or rationals in sign mode)."""
    try:
        raw = [t.strip() for t in text.split(",") if t.strip()]
        if isinstance(field, SignField):
            return tuple(Fraction(t) for t in raw)
        return tuple(field.coerce(int(t)) for t in raw)
    except ValueError as exc:
        raise InvalidInput(f"cannot parse coefficients {text!r}: {exc}") from None


def hermitian_eval(h: HermitianDiag, x: Sequence[EtaleElement], y: Sequence[EtaleElement]) -> EtaleElement:
    if len(x) != h.n or len(y) != h.n:
        raise DimensionMismatch(f"vectors must have length {h.n}")
    L = h.algebra
    acc = L.element(L.field.zero, L.field.zero)
    for a, xi, yi in zip(h.coeffs, x, y):
        acc = acc + (xi * sigma(yi)).scale(a)
    return acc


def trace_form(h: HermitianDiag) -> QuadraticForm:
    """``q_h(w) = h(w, w)`` on the underlying ``F``-space: ``<1, -b> (x) <a_1..a_n>``.

    In the basis ``u_i = w_i``, ``v_i = beta w_i`` (interleaved).
    """
    F = h.field
    minus_b = F.neg(h.algebra.b)
    out = []
    for a in h.coeffs:
        out.extend([a, F.mul(minus_b, a)])
    return QuadraticForm(F, tuple(out))


def quad_eval(q: QuadraticForm, w: Sequence):
    if len(w) != q.dim:
        raise DimensionMismatch(f"expected a vector of length {q.dim}, got {len(w)}")
    F = q.field
    acc = F.zero
    for d, x in zip(q.coeffs, w):
        acc = F.add(acc, F.mul(d, F.mul(x, x)))
    return acc if isinstance(F, SignField) else int(acc)


def interleave(U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """``(..., n)`` L-coordinates to ``(..., 2n)`` F-coordinates ``(u1, v1, u2, v2, ...)``."""
    W = np.empty(U.shape[:-1] + (2 * U.shape[-1],), dtype=np.int64)
    W[..., 0::2] = U
    W[..., 1::2] = V
    return W


def deinterleave(W: np.ndarray):
    W = np.asarray(W)
    return W[..., 0::2], W[..., 1::2]


def is_isotropic_form(q: QuadraticForm, ctx: ExtensionCtx | SignField | None = None) -> bool:
    """Whether ``q`` has a nonzero zero.

    Finite fields: brute-force search over projective points (after base
    change to ``ctx`` when given).  Sign mode: anisotropic iff every entry has
    the same strict sign.
    """
    if isinstance(ctx, SignField) or isinstance(q.field, SignField):
        return sign_isotropic(q.coeffs)
    from .points import find_isotropic_vector

    if ctx is not None:
        q = q.base_change(ctx)
    return find_isotropic_vector(q) is not None


def sign_isotropic(coeffs: Sequence) -> bool:
    signs = {SIGN.sign(Fraction(c)) for c in coeffs}
    return len(signs) > 1
