"""Truncated t-adic arithmetic: elements of F_q[t]/(t^N) with explicit precision.

Precision is pessimistic (the min rule) and never grows implicitly; a series
whose stored coefficients all vanish has valuation AtLeast(N), never N, so
that certificate checks cannot overclaim.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ff import FqContext
from .poly import MultiPoly, RationalFunction


@dataclass(frozen=True)
class AtLeast:
    """Valuation lower bound: the truncation cannot distinguish 0 from t^N*u."""

    n: int

    def __repr__(self):
        return f"AtLeast({self.n})"


def val_ge(v, n: int) -> bool:
    """Is the valuation (int or AtLeast) certainly >= n?"""
    if isinstance(v, AtLeast):
        return v.n >= n
    return v >= n


def val_exact(v) -> bool:
    return not isinstance(v, AtLeast)


class TruncatedSeries:
    """An element of F_q[t]/(t^N): N stored coefficients plus the precision N."""

    __slots__ = ("ctx", "coeffs", "precision")

    def __init__(self, ctx: FqContext, coeffs, precision: int | None = None):
        cs = [ctx.elem(c) for c in coeffs]
        if precision is None:
            precision = len(cs)
        if precision < 1:
            raise ValueError("precision must be >= 1")
        if len(cs) < precision:
            cs += [ctx.zero()] * (precision - len(cs))
        self.ctx = ctx
        self.coeffs = tuple(cs[:precision])
        self.precision = precision

    @classmethod
    def zero(cls, ctx, precision):
        return cls(ctx, [], precision)

    @classmethod
    def one(cls, ctx, precision):
        return cls(ctx, [1], precision)

    @classmethod
    def t(cls, ctx, precision):
        if precision < 2:
            return cls.zero(ctx, precision)
        return cls(ctx, [0, 1], precision)

    @classmethod
    def constant(cls, ctx, c, precision):
        return cls(ctx, [c], precision)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.ctx == other.ctx
            and self.precision == other.precision
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.coeffs, self.precision))

    def __add__(self, other):
        n = min(self.precision, other.precision)
        return TruncatedSeries(
            self.ctx, [a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])], n
        )

    def __neg__(self):
        return TruncatedSeries(self.ctx, [-a for a in self.coeffs], self.precision)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        n = min(self.precision, other.precision)
        z = self.ctx.zero()
        out = [z] * n
        for i, a in enumerate(self.coeffs[:n]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: n - i]):
                if b:
                    out[i + j] = out[i + j] + a * b
        return TruncatedSeries(self.ctx, out, n)

    def __pow__(self, k: int):
        result = TruncatedSeries.one(self.ctx, self.precision)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def truncate(self, n: int) -> "TruncatedSeries":
        if n > self.precision:
            raise ValueError(f"cannot raise precision {self.precision} to {n}")
        return TruncatedSeries(self.ctx, self.coeffs[:n], n)

    def __repr__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = repr(c)
            if i == 0:
                parts.append(cs)
            else:
                head = "" if cs == "1" else f"{cs}*"
                parts.append(f"{head}t" + (f"^{i}" if i > 1 else ""))
        body = " + ".join(parts) if parts else "0"
        return f"({body} + O(t^{self.precision}))"


def valuation(a: TruncatedSeries):
    """Index of the first nonzero stored coefficient, or AtLeast(precision)."""
    for i, c in enumerate(a.coeffs):
        if c:
            return i
    return AtLeast(a.precision)


def invert_unit(a: TruncatedSeries) -> TruncatedSeries:
    """Inverse of a t-adic unit (valuation 0), to full precision."""
    v = valuation(a)
    if v != 0:
        raise ValueError(f"not a unit: valuation {v}")
    inv0 = a.coeffs[0].inv()
    out = [inv0]
    for k in range(1, a.precision):
        acc = a.ctx.zero()
        for i in range(1, k + 1):
            acc = acc + a.coeffs[i] * out[k - i]
        out.append(-(inv0 * acc))
    return TruncatedSeries(a.ctx, out, a.precision)


def shift_right(a: TruncatedSeries, e: int) -> TruncatedSeries:
    """Exact division by t^e; the e low coefficients must vanish.

    Costs e digits of precision: a known mod t^N determines a/t^e only
    mod t^(N-e)."""
    if e == 0:
        return a
    if any(a.coeffs[:e]):
        raise ValueError("division by t^e with nonzero low coefficients")
    if a.precision - e < 1:
        raise ValueError("shift consumes all precision")
    return TruncatedSeries(a.ctx, a.coeffs[e:], a.precision - e)


def expand_rational(r: RationalFunction, n: int) -> TruncatedSeries:
    """t-adic expansion of an element of F_q(t) lying in F_q[[t]]."""
    ctx = r.ctx
    if not r.num:
        return TruncatedSeries.zero(ctx, n)
    if r.t_valuation() < 0:
        raise ValueError(f"{r!r} has negative t-adic valuation, not integral")
    w = r.den.valuation()
    num = list(r.num.coeffs[w:]) if w else list(r.num.coeffs)
    den = list(r.den.coeffs[w:]) if w else list(r.den.coeffs)
    num += [ctx.zero()] * max(0, n - len(num))
    den += [ctx.zero()] * max(0, n - len(den))
    inv0 = den[0].inv()
    out = []
    for k in range(n):
        acc = num[k]
        for i in range(1, k + 1):
            acc = acc - den[i] * out[k - i]
        out.append(acc * inv0)
    return TruncatedSeries(ctx, out, n)


def evaluate(f: MultiPoly, point) -> TruncatedSeries:
    """Evaluate a polynomial over F_q (t as a slot) at a series point.

    The point supplies one series per ring variable; the t slot, if present,
    must be given the series t.  All precisions must agree, and the result
    carries that shared precision.
    """
    ring = f.ring
    if len(point) != ring.nvars:
        raise ValueError(f"need {ring.nvars} coordinates, got {len(point)}")
    if not point:
        raise ValueError("series evaluation needs at least the t coordinate")
    precision = point[0].precision
    ctx = point[0].ctx
    for x in point:
        if x.precision != precision:
            raise ValueError("mixed precisions in evaluation point")
    acc = TruncatedSeries.zero(ctx, precision)
    for e, c in f.terms.items():
        term = TruncatedSeries.constant(ctx, c, precision)
        for i, k in enumerate(e):
            if k:
                term = term * point[i] ** k
        acc = acc + term
    return acc


def coeff_to_json(c):
    """FqElem as an int for prime fields, else the coordinate vector."""
    return c.coords[0] if c.ctx.n == 1 else list(c.coords)


def witness_to_json(witness):
    """{"precision": N, "coords": [[c_0..c_{N-1}], ...]} with coordinates in
    the fixed field basis."""
    if not witness:
        return {"precision": None, "coords": []}
    return {
        "precision": witness[0].precision,
        "coords": [[coeff_to_json(c) for c in x.coeffs] for x in witness],
    }


def series_point(f_ring, xs, precision):
    """Assemble the evaluation point for a ring with a t slot: the given
    coordinate series plus t in the slot position."""
    tpos = f_ring.tpos
    ctx = f_ring.field
    point = list(xs)
    if tpos is not None:
        point.insert(tpos, TruncatedSeries.t(ctx, precision))
    return point
