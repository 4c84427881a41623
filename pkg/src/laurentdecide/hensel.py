"""Newton/Hensel lifting of approximate solutions in F_q[t]/(t^N).

A liftability certificate names a square Jacobian subsystem (rows = equation
indices, cols = bound variables) whose determinant has valuation e at the
witness, with every residual of valuation >= N and N > 2e.  Newton iteration
on that subsystem then converges t-adically to an exact solution congruent to
the witness mod t^(N-e).

Soundness guard: equations outside the chosen rows must lie in the saturation
(rows-ideal) : det^infinity, checked by a Groebner computation over F_q(t).
Without it, an equation vanishing to high but finite order at the witness
could survive every truncated residual check while the Newton limit misses
it.  With it, the limit solves the full system because det is a unit along
the lifted branch.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .ideal import buchberger, dimension, extend_ring, normal_form
from .poly import det_matrix, jacobian, to_rational_coeffs
from .series import (
    TruncatedSeries,
    evaluate,
    invert_unit,
    series_point,
    shift_right,
    val_exact,
    val_ge,
    valuation,
)


class CertificateError(Exception):
    """A certificate failed to deliver what it promised at the point."""


@dataclass(frozen=True)
class HenselCertificate:
    rows: tuple
    cols: tuple
    e: int
    precision: int

    def to_json(self):
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "e": self.e,
            "precision": self.precision,
        }


@dataclass(frozen=True)
class PerturbBudget:
    directions: int = 8
    depth: int = 16


def system_dimension(equations, ring):
    """Krull dimension of the equations over F_q(t) (None = empty locus)."""
    rational = [to_rational_coeffs(f) for f in equations if f]
    if not rational:
        tpos = ring.tpos
        nx = ring.nvars - (1 if tpos is not None else 0)
        return nx
    gb = buchberger(rational, ring=rational[0].ring)
    return dimension(gb)


def _x_indices(ring):
    tpos = ring.tpos
    return [i for i in range(ring.nvars) if i != tpos]


def _residuals(equations, point, precision=None):
    if not equations:
        return []
    ring = equations[0].ring
    if precision is None:
        precision = point[0].precision
    pt = series_point(ring, point, precision)
    return [evaluate(f, pt) for f in equations]


_saturation_cache = {}


def _saturation_ok(equations, rows, det_poly):
    """Every equation outside rows lies in (rows) : det^inf over F_q(t).

    Depends only on the equations and the symbolic minor, not on the point,
    so results are memoized across candidate points."""
    others = [i for i in range(len(equations)) if i not in rows]
    if not others:
        return True
    key = (tuple(equations), tuple(rows), det_poly)
    cached = _saturation_cache.get(key)
    if cached is not None:
        return cached
    result = _saturation_check(equations, rows, det_poly, others)
    _saturation_cache[key] = result
    return result


def _saturation_check(equations, rows, det_poly, others):
    row_rat = [to_rational_coeffs(equations[i]) for i in rows]
    det_rat = to_rational_coeffs(det_poly)
    if not det_rat:
        return False
    base_ring = det_rat.ring
    ext, lift = extend_ring(base_ring, "Zsat")
    z = ext.var(ext.nvars - 1)
    gens = [lift(f) for f in row_rat] + [ext.one() - z * lift(det_rat)]
    gb = buchberger(gens, ring=ext)
    for i in others:
        f = lift(to_rational_coeffs(equations[i]))
        if normal_form(f, gb):
            return False
    return True


def _minor_search(equations, point, k, exclude_col=None):
    """Deterministic minor choice: minimal determinant valuation, then
    lexicographic (rows, cols); saturation-checked.  Returns
    (rows, cols, e) or None."""
    if k == 0:
        return ((), (), 0) if _saturation_empty(equations) else None
    ring = equations[0].ring
    xvars = _x_indices(ring)
    m = len(xvars)
    n = len(equations)
    if k > n or k > m:
        return None
    jac = jacobian(equations, xvars)
    pt = series_point(ring, point, point[0].precision)
    jac_at = [[evaluate(entry, pt) for entry in row] for row in jac]
    candidates = []
    for rows in combinations(range(n), k):
        for cols_idx in combinations(range(m), k):
            if exclude_col is not None and exclude_col in cols_idx:
                continue
            sub = [[jac_at[i][j] for j in cols_idx] for i in rows]
            det = det_matrix(sub, None)
            v = valuation(det)
            if val_exact(v):
                candidates.append((v, rows, cols_idx))
    candidates.sort()
    for e, rows, cols_idx in candidates:
        det_poly = det_matrix([[jac[i][j] for j in cols_idx] for i in rows], ring.one())
        if _saturation_ok(equations, rows, det_poly):
            return rows, tuple(xvars[j] for j in cols_idx), e
    return None


def _saturation_empty(equations):
    """k = 0 case: with no bound equations the branch is the whole space, so
    every equation must already be zero."""
    return all(not f for f in equations)


def certify_liftable(equations, point, dim=None, precision=None):
    """HenselCertificate for the point, or None.

    Conditions: every residual valuation >= N (the point precision), some
    size-(m-d) Jacobian minor with determinant valuation e satisfying N > 2e,
    and the saturation guard for equations outside the minor rows.
    """
    equations = [f for f in equations if f]
    if precision is None:
        precision = point[0].precision if point else 1
    if not equations:
        return HenselCertificate((), (), 0, precision)
    ring = equations[0].ring
    n_prec = precision
    if dim is None:
        dim = system_dimension(equations, ring)
    if dim is None:
        return None  # empty locus over the algebraic closure of F_q(t)
    m = len(_x_indices(ring))
    k = m - dim
    if k < 0:
        return None
    for r in _residuals(equations, point, n_prec):
        if not val_ge(valuation(r), n_prec):
            return None
    if k == 0:
        if not _saturation_empty(equations):
            return None
        return HenselCertificate((), (), 0, n_prec)
    found = _minor_search(equations, point, k)
    if found is None:
        return None
    rows, cols, e = found
    if not n_prec > 2 * e:
        return None
    return HenselCertificate(rows, tuple(cols), e, n_prec)


def _col_positions(ring, cols):
    """Positions of the certificate's bound variables within the x vector."""
    xvars = _x_indices(ring)
    return [xvars.index(c) for c in cols]


def newton_lift(equations, point, certificate, target, trace=None):
    """Lift the certified point to residual valuations >= target.

    Returns the refined point at precision target; the low t^(N-e) digits
    agree with the input.  Each iteration at least doubles (minus 2e) the
    minimum residual valuation of the driving square subsystem; stalls raise
    CertificateError.  trace, when given, collects the minimum subsystem
    residual valuation before each correction step.
    """
    equations = [f for f in equations if f]
    if not equations:
        ctx = point[0].ctx if point else None
        if ctx is None:
            return ()
        return tuple(_extend(x, target) for x in point)
    ring = equations[0].ring
    ctx = point[0].ctx
    e = certificate.e
    rows = list(certificate.rows)
    k = len(rows)
    work_prec = max(target, certificate.precision) + e + 1
    xs = [_extend(x, work_prec) for x in point]

    if k == 0:
        res = _residuals(equations, [x.truncate(target) for x in xs])
        if not all(val_ge(valuation(r), target) for r in res):
            raise CertificateError("empty-minor certificate with nonzero residual")
        return tuple(x.truncate(target) for x in xs)

    col_pos = _col_positions(ring, certificate.cols)
    jac_sub = [[equations[i].partial(c) for c in certificate.cols] for i in rows]

    prev_min = None
    max_iter = 2 * (target.bit_length() + 4)
    for _ in range(max_iter):
        res = _residuals(equations, xs)
        vals_all = [valuation(r) for r in res]
        if all(val_ge(v, target) for v in vals_all):
            return tuple(x.truncate(target) for x in xs)
        sub_vals = [vals_all[i] for i in rows]
        v_min = min((v if val_exact(v) else v.n) for v in sub_vals)
        if trace is not None:
            trace.append(v_min)
        if prev_min is not None and v_min <= prev_min:
            raise CertificateError("Newton iteration stalled")
        prev_min = v_min
        if not v_min > 2 * e:
            raise CertificateError("residual valuation fell inside the minor gap")
        pt = series_point(ring, xs, work_prec)
        j_at = [[evaluate(entry, pt) for entry in row] for row in jac_sub]
        det = det_matrix(j_at, None)
        vdet = valuation(det)
        if vdet != e:
            raise CertificateError(f"minor valuation drifted: {vdet} != {e}")
        unit_inv = invert_unit(shift_right(det, e))
        deltas = []
        for idx in range(k):
            col_mat = [
                [j_at[r][c] if c != idx else -res[rows[r]] for c in range(k)]
                for r in range(k)
            ]
            num = det_matrix(col_mat, None)
            if not val_ge(valuation(num), e):
                raise CertificateError("Cramer numerator below minor valuation")
            deltas.append(shift_right(num, e) * unit_inv)
        for idx, dpos in enumerate(col_pos):
            xs[dpos] = _add_exact(xs[dpos], deltas[idx], work_prec)
    raise CertificateError("Newton budget exhausted before reaching target")


def _extend(x: TruncatedSeries, precision):
    """Zero-extend the stored representative to a higher working precision
    (the representative is an exact polynomial, so this is exact)."""
    if precision <= x.precision:
        return x.truncate(precision)
    return TruncatedSeries(x.ctx, list(x.coeffs), precision)


def _add_exact(x: TruncatedSeries, delta: TruncatedSeries, precision):
    coeffs = list(x.coeffs[:precision])
    coeffs += [x.ctx.zero()] * (precision - len(coeffs))
    for i, c in enumerate(delta.coeffs):
        if i < precision:
            coeffs[i] = coeffs[i] + c
    return TruncatedSeries(x.ctx, coeffs, precision)


def smooth_perturb(equations, point, certificate, g, budget: PerturbBudget, dim=None):
    """A certified solution with g of exact finite valuation (hence nonzero),
    or None when the budget is exhausted.

    Perturbs one free coordinate (outside the certificate's bound columns) by
    c*t^M, then re-solves the bound coordinates by Newton.  Deterministic
    order: depths M increasing, then directions by coordinate index, then
    scalars in field-enumeration order.  The minor and its valuation are
    recomputed after every perturbation.
    """
    equations = [f for f in equations if f]
    precision = point[0].precision if point else 1
    gring = g.ring
    ctx = gring.field

    def g_value(xs):
        return evaluate(g, series_point(gring, xs, xs[0].precision if xs else precision))

    if point:
        if val_exact(valuation(g_value(point))):
            return point, certificate
    else:
        # closed system: g is a constant in t
        return (point, certificate) if g else None

    if dim is None and equations:
        dim = system_dimension(equations, equations[0].ring)
    if equations and dim is None:
        return None  # empty locus cannot carry a certified point
    m = len(point)
    bound = set(certificate.cols)
    ring = equations[0].ring if equations else gring
    xvars = _x_indices(ring)
    free = [j for j in xvars if j not in bound]
    free = free[: budget.directions]
    if not free:
        return None
    nonzero_scalars = [c for c in ctx.elements() if c]
    xpos = {v: i for i, v in enumerate(xvars)}

    m0 = max(1, 2 * certificate.e + 1)
    for mm in range(m0, m0 + budget.depth):
        if mm >= precision:
            break
        for j in free:
            for c in nonzero_scalars:
                xs = [
                    _bump(x, mm, c) if xvars[i] == j else x
                    for i, x in enumerate(point)
                ]
                if not equations:
                    if val_exact(valuation(g_value(xs))):
                        return tuple(xs), certificate
                    continue
                res = _residuals(equations, xs)
                vals = [valuation(r) for r in res]
                floor = min((v if val_exact(v) else v.n) for v in vals)
                k = m - dim
                found = _minor_search(equations, xs, k, exclude_col=xpos[j])
                if found is None:
                    continue
                rows, cols, e2 = found
                if not floor > 2 * e2:
                    continue
                cert2 = HenselCertificate(rows, cols, e2, min(floor, precision))
                try:
                    lifted = newton_lift(equations, xs, cert2, precision)
                except CertificateError:
                    continue
                if val_exact(valuation(g_value(list(lifted)))):
                    final = certify_liftable(equations, list(lifted), dim)
                    if final is not None:
                        return tuple(lifted), final
    return None


def _bump(x: TruncatedSeries, mm: int, c):
    coeffs = list(x.coeffs)
    coeffs[mm] = coeffs[mm] + c
    return TruncatedSeries(x.ctx, coeffs, x.precision)
