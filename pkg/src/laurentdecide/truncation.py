"""Positive-existential solvability in F_q[[t]] by truncation.

A system of equations over F_q[t] has a solution in F_q[[t]] iff its
reduction mod t^N is solvable for every N; unsolvability at a single level
is therefore a sound refutation.  Solvability mod t^N is an F_q-question
after expanding each unknown into N series digits (Weil restriction), and
the digit system is searched by exhaustive enumeration with pruning.  A
mod-t^N solution becomes a SAT verdict only once Hensel certification plus
a confirming Newton lift to doubled precision succeed, so both verdicts stay
sound while completeness is budget-limited: UNKNOWN is a legal outcome.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ff import FqContext
from .hensel import CertificateError, certify_liftable, newton_lift, system_dimension
from .poly import MultiPoly, PolyRing
from .series import TruncatedSeries
from .verdict import SAT, UNKNOWN, UNSAT, Verdict


@dataclass(frozen=True)
class PrecisionSchedule:
    """Truncation levels 1, 2, 4, ... up to the precision budget."""

    max_precision: int = 64

    def levels(self):
        n = 1
        while n <= self.max_precision:
            yield n
            n *= 2


@dataclass
class WeilRestriction:
    """The mod-t^N reduction of a system, expanded over F_q.

    Digit variables are ordered x-major: digit k of original variable j sits
    at index j*level + k, so enumeration in ring order is lexicographic in
    the series coordinates.  A tuple over F_q[t]/(t^N) solves the reduced
    system iff its digit expansion solves the restricted one.
    """

    original: list
    level: int
    ring: PolyRing
    restricted: list

    def point(self, assignment):
        """Assemble the series point from a digit assignment."""
        ctx = self.ring.field
        n = self.level
        m = self.ring.nvars // n if n else 0
        out = []
        for j in range(m):
            coeffs = [assignment[j * n + k] for k in range(n)]
            out.append(TruncatedSeries(ctx, coeffs, n))
        return tuple(out)


def weil_restrict(equations, ring: PolyRing, level: int) -> WeilRestriction:
    """Coefficients of t^0..t^(level-1) of each equation after substituting
    the digit expansion for every unknown."""
    if level < 1:
        raise ValueError("truncation level must be >= 1")
    ctx = ring.field
    assert isinstance(ctx, FqContext), "weil restriction runs over F_q[t] systems"
    tpos = ring.tpos
    assert tpos is not None, "system ring must carry the t slot"
    xnames = [n for i, n in enumerate(ring.names) if i != tpos]
    m = len(xnames)

    digit_names = [f"{name}_{k}" for name in xnames for k in range(level)]
    assert len(set(digit_names)) == len(digit_names), "digit name collision"
    digits = PolyRing(ctx, digit_names)
    work = PolyRing(ctx, tuple(digit_names) + ("t",))

    t_img = work.var(work.nvars - 1)
    images = []
    xi = 0
    for i in range(ring.nvars):
        if i == tpos:
            images.append(t_img)
        else:
            expansion = work.zero()
            for k in range(level):
                expansion = expansion + work.var(xi * level + k) * t_img**k
            images.append(expansion)
            xi += 1

    restricted = []
    seen = set()
    for f in equations:
        expanded = f.compose(images, work)
        for k in range(level):
            coeff = expanded.coeff_of(work.nvars - 1, k)
            g = MultiPoly(digits, {e[:-1]: c for e, c in coeff.terms.items()})
            if not g:
                continue
            if g in seen:
                continue
            seen.add(g)
            restricted.append(g)
    return WeilRestriction(list(equations), level, digits, restricted)


def _substitute_var(f: MultiPoly, i: int, value):
    terms = {}
    for e, c in f.terms.items():
        k = e[i]
        c2 = c * value**k if k else c
        if not c2:
            continue
        e2 = e[:i] + (0,) + e[i + 1 :]
        if e2 in terms:
            s = terms[e2] + c2
            if s:
                terms[e2] = s
            else:
                del terms[e2]
        else:
            terms[e2] = c2
    return MultiPoly(f.ring, terms)


class SearchBudgetExceeded(Exception):
    """The digit search walked more nodes than the caller allowed."""


def iter_solutions(system, ring: PolyRing, node_budget: int | None = None):
    """All solutions over F_q in lexicographic enumeration order.

    Depth-first assignment with early pruning: a branch dies as soon as any
    fully-instantiated equation is a nonzero constant.  Without a node budget
    the search is exhaustive; with one, SearchBudgetExceeded fires once the
    walk exceeds it (callers must then treat the level as undecided).
    """
    ctx = ring.field
    elems = list(ctx.elements())
    nv = ring.nvars
    nodes = [0]

    def dead(polys):
        return any(p.is_constant() and p for p in polys)

    def rec(i, polys, acc):
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            raise SearchBudgetExceeded(f"digit search exceeded {node_budget} nodes")
        if dead(polys):
            return
        if i == nv:
            if all(not p for p in polys):
                yield tuple(acc)
            return
        for v in elems:
            nxt = [_substitute_var(p, i, v) for p in polys]
            acc.append(v)
            yield from rec(i + 1, nxt, acc)
            acc.pop()

    yield from rec(0, list(system), [])


def solve_finite(system, ring: PolyRing):
    """Lexicographically first solution, or None after exhausting the space."""
    return next(iter_solutions(system, ring), None)


def decide_positive(
    equations,
    ring: PolyRing,
    schedule: PrecisionSchedule | None = None,
    candidate_cap: int = 256,
    trace: list | None = None,
    search_budget: int | None = 2_000_000,
    accept=None,
) -> Verdict:
    """Decide a pure equation system (no inequation) over F_q[[t]].

    UNSAT(N) as soon as some scheduled truncation level N has no mod-t^N
    solution; SAT once a restricted solution certifies and its Newton lift to
    doubled precision confirms; UNKNOWN when the schedule runs out (or the
    digit search at some level outgrows the node budget).

    An optional accept(witness) predicate lets the caller prefer certified
    witnesses with an extra property (an inequation holding, say): candidates
    failing it are remembered but the search keeps going, deeper levels
    included; the first remembered witness is returned when nothing better
    turns up.  Refutation is independent of accept.
    """
    if schedule is None:
        schedule = PrecisionSchedule()
    if trace is None:
        trace = []
    eqs = [f for f in equations if f]
    dim = system_dimension(eqs, ring)
    blocked_by_budget = False
    fallback = None
    for level in schedule.levels():
        restriction = weil_restrict(eqs, ring, level)
        trace.append(
            f"level {level}: {len(restriction.restricted)} restricted equations, "
            f"{restriction.ring.nvars} digit variables"
        )
        found_any = False
        tried = 0
        try:
            for assignment in iter_solutions(
                restriction.restricted, restriction.ring, search_budget
            ):
                found_any = True
                tried += 1
                if tried > candidate_cap:
                    trace.append(f"level {level}: candidate cap {candidate_cap} reached")
                    break
                point = restriction.point(assignment)
                cert = certify_liftable(eqs, list(point), dim, precision=level)
                if cert is None:
                    continue
                target = 2 * max(level, cert.e + 1)
                if target > schedule.max_precision:
                    blocked_by_budget = True
                    trace.append(
                        f"level {level}: certificate found but confirmation precision "
                        f"{target} exceeds budget {schedule.max_precision}"
                    )
                    continue
                try:
                    lifted = newton_lift(eqs, list(point), cert, target)
                except CertificateError as err:
                    trace.append(f"level {level}: lift rejected a candidate ({err})")
                    continue
                final = certify_liftable(eqs, list(lifted), dim, precision=target)
                if final is None:
                    continue
                if accept is not None and not accept(lifted):
                    if fallback is None:
                        fallback = Verdict(SAT, witness=lifted, certificate=final, trace=trace)
                        trace.append(
                            f"level {level}: certified witness missed the acceptance "
                            "predicate, kept as fallback"
                        )
                    continue
                trace.append(f"level {level}: certified witness at precision {target}")
                return Verdict(SAT, witness=lifted, certificate=final, trace=trace)
        except SearchBudgetExceeded:
            trace.append(f"level {level}: digit search budget exhausted")
            return Verdict(UNKNOWN, reason="search-budget-exhausted", trace=trace)
        if not found_any:
            trace.append(f"level {level}: restricted system unsolvable")
            return Verdict(UNSAT, refuted_at=level, trace=trace)
    if fallback is not None:
        trace.append("no accepted witness; returning the first certified one")
        return fallback
    reason = "precision-exhausted"
    trace.append(f"schedule exhausted at max precision {schedule.max_precision}"
                 + (" with unconfirmed certificates" if blocked_by_budget else ""))
    return Verdict(UNKNOWN, reason=reason, trace=trace)
