"""Sparse multivariate polynomials over F_q and F_q(t).

Two coefficient domains share one term representation:

  * over F_q, the uniformizer t is a distinguished extra exponent slot
    (a variable named "t"), so "spreading out" t is a retag, not a
    conversion;
  * over F_q(t), coefficients are exact RationalFunction values
    (reduced fractions of univariate polynomials in t).

The term order is graded reverse lexicographic everywhere; the zero
polynomial is the empty term map.
"""

from __future__ import annotations

from .ff import FqContext, FqElem


# ---------------------------------------------------------------------------
# univariate polynomials over F_q (used for moduli of fractions, gcds,
# and t-expansion of coefficients)


class UniPoly:
    """Dense univariate polynomial over F_q, coefficients low-to-high."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FqContext, coeffs):
        cs = [ctx.elem(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.ctx = ctx
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, ctx, c):
        return cls(ctx, [ctx.elem(c)])

    @classmethod
    def t_power(cls, ctx, k: int, c=1):
        return cls(ctx, [0] * k + [c])

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs and self.ctx == other.ctx

    def __hash__(self):
        return hash(self.coeffs)

    def degree(self) -> int:
        if not self.coeffs:
            raise ValueError("degree of zero polynomial")
        return len(self.coeffs) - 1

    def valuation(self) -> int:
        """t-adic valuation: index of the first nonzero coefficient."""
        if not self.coeffs:
            raise ValueError("valuation of zero polynomial")
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise AssertionError("normalized polynomial with no nonzero coefficient")

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.ctx.zero()
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else z
            b = other.coeffs[i] if i < len(other.coeffs) else z
            out.append(a + b)
        return UniPoly(self.ctx, out)

    def __neg__(self):
        return UniPoly(self.ctx, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self or not other:
            return UniPoly(self.ctx, [])
        z = self.ctx.zero()
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return UniPoly(self.ctx, out)

    def __pow__(self, k: int):
        result = UniPoly.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def divmod(self, other):
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        q = UniPoly(self.ctx, [])
        r = self
        inv_lead = other.coeffs[-1].inv()
        while r and len(r.coeffs) >= len(other.coeffs):
            shift = len(r.coeffs) - len(other.coeffs)
            c = r.coeffs[-1] * inv_lead
            term = UniPoly(self.ctx, [0] * shift + [c])
            q = q + term
            r = r - term * other
        return q, r

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if not self:
            return self
        inv = self.coeffs[-1].inv()
        return UniPoly(self.ctx, [c * inv for c in self.coeffs])

    def derivative(self):
        ctx = self.ctx
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(ctx.from_int(i) * self.coeffs[i])
        return UniPoly(ctx, out)

    def eval(self, x: FqElem) -> FqElem:
        acc = self.ctx.zero()
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def is_pth_power(self) -> bool:
        """p-th powers in F_q[t] are exactly the polynomials in t^p
        (coefficients are automatic: F_q is perfect)."""
        p = self.ctx.p
        return all(not c for i, c in enumerate(self.coeffs) if i % p)

    def pth_root(self) -> "UniPoly":
        p = self.ctx.p
        assert self.is_pth_power()
        out = [self.coeffs[i].pth_root() for i in range(0, len(self.coeffs), p)]
        return UniPoly(self.ctx, out)

    def __repr__(self):
        if not self.coeffs:
            return "0"
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
        return " + ".join(parts)


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over F_q by the Euclidean algorithm."""
    while b:
        a, b = b, a % b
    return a.monic()


def uni_lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if not a or not b:
        return UniPoly(a.ctx, [])
    return ((a * b) // uni_gcd(a, b)).monic()


# ---------------------------------------------------------------------------
# the field F_q(t)


class RationalFunction:
    """Reduced fraction num/den of univariate polynomials over F_q in t.

    den is monic and coprime to num.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: UniPoly, den: UniPoly):
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = uni_gcd(num, den)
            if g.degree() > 0:
                num = num // g
                den = den // g
            lead_inv = den.coeffs[-1].inv()
            num = UniPoly(num.ctx, [c * lead_inv for c in num.coeffs])
            den = den.monic()
        else:
            den = UniPoly(den.ctx, [1])
        self.num = num
        self.den = den

    @property
    def ctx(self):
        return self.den.ctx

    @classmethod
    def from_unipoly(cls, f: UniPoly):
        return cls(f, UniPoly.const(f.ctx, 1))

    @classmethod
    def const(cls, ctx, c):
        return cls.from_unipoly(UniPoly.const(ctx, c))

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        return (
            isinstance(other, RationalFunction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RationalFunction(self.num * other.num, self.den * other.den)

    def inv(self):
        if not self.num:
            raise ZeroDivisionError("inversion of zero in F_q(t)")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = RationalFunction.const(self.ctx, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def t_valuation(self) -> int:
        if not self.num:
            raise ValueError("valuation of zero")
        return self.num.valuation() - self.den.valuation()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def is_pth_power(self) -> bool:
        return self.num.is_pth_power() and self.den.is_pth_power()

    def pth_root(self):
        return RationalFunction(self.num.pth_root(), self.den.pth_root())

    def __repr__(self):
        if self.den.degree() == 0:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


class RationalFunctionField:
    """Coefficient-field descriptor for F_q(t)."""

    def __init__(self, ctx: FqContext):
        self.ctx = ctx

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and self.ctx == other.ctx

    def __hash__(self):
        return hash(("F_q(t)", self.ctx))

    def zero(self):
        return RationalFunction.const(self.ctx, 0)

    def one(self):
        return RationalFunction.const(self.ctx, 1)

    def from_int(self, k: int):
        return RationalFunction.const(self.ctx, k)

    def elem(self, v):
        if isinstance(v, RationalFunction):
            return v
        if isinstance(v, UniPoly):
            return RationalFunction.from_unipoly(v)
        if isinstance(v, FqElem):
            return RationalFunction.from_unipoly(UniPoly(self.ctx, [v]))
        if isinstance(v, int):
            return self.from_int(v)
        raise TypeError(f"cannot coerce {v!r} into F_q(t)")

    def __repr__(self):
        return f"Frac({self.ctx!r}[t])"


# ---------------------------------------------------------------------------
# term order


def grevlex_key(exps):
    """Sort key: larger key = larger monomial in graded reverse lex."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


# ---------------------------------------------------------------------------
# multivariate polynomials


class PolyRing:
    """A polynomial ring descriptor: coefficient field + ordered variable names.

    A variable named "t" is the uniformizer slot; rings over F_q(t) must not
    declare one.
    """

    def __init__(self, field, names):
        self.field = field
        self.names = tuple(names)
        if isinstance(field, RationalFunctionField) and "t" in self.names:
            raise ValueError("t cannot be both a variable and a coefficient")

    @property
    def nvars(self):
        return len(self.names)

    @property
    def tpos(self):
        """Index of the t slot, or None."""
        try:
            return self.names.index("t")
        except ValueError:
            return None

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.field == other.field
            and self.names == other.names
        )

    def __hash__(self):
        return hash((self.field, self.names))

    def __repr__(self):
        return f"{self.field!r}[{', '.join(self.names)}]"

    def zero(self):
        return MultiPoly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self._coeff(c)
        if not c:
            return self.zero()
        return MultiPoly(self, {(0,) * self.nvars: c})

    def _coeff(self, c):
        if isinstance(c, int):
            return self.field.from_int(c)
        if isinstance(self.field, FqContext):
            return self.field.elem(c)
        return self.field.elem(c)

    def var(self, i: int):
        e = [0] * self.nvars
        e[i] = 1
        return MultiPoly(self, {tuple(e): self.field.one()})

    def var_named(self, name: str):
        return self.var(self.names.index(name))

    def from_terms(self, terms: dict):
        out = {}
        for exps, c in terms.items():
            c = self._coeff(c)
            if c:
                out[tuple(exps)] = c
        return MultiPoly(self, out)


class MultiPoly:
    """Sparse polynomial: map from exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def _check(self, other):
        if not isinstance(other, MultiPoly) or other.ring != self.ring:
            raise ValueError("polynomials from different rings")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s:
                    out[e] = s
                else:
                    del out[e]
            else:
                out[e] = c
        return MultiPoly(self.ring, out)

    def __neg__(self):
        return MultiPoly(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if e in out:
                    s = out[e] + c
                    if s:
                        out[e] = s
                    else:
                        del out[e]
                elif c:
                    out[e] = c
        return MultiPoly(self.ring, out)

    def __pow__(self, k: int):
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        c = self.ring._coeff(c)
        if not c:
            return self.ring.zero()
        return MultiPoly(self.ring, {e: cc * c for e, cc in self.terms.items()})

    def mul_term(self, exps, c):
        """Multiply by the single term c * x^exps."""
        if not c:
            return self.ring.zero()
        return MultiPoly(
            self.ring,
            {tuple(a + b for a, b in zip(e, exps)): cc * c for e, cc in self.terms.items()},
        )

    # -- order-dependent accessors

    def lead_monomial(self):
        if not self.terms:
            raise ValueError("leading monomial of zero")
        return max(self.terms, key=grevlex_key)

    def lead_coeff(self):
        return self.terms[self.lead_monomial()]

    def monic(self):
        if not self.terms:
            return self
        inv = self.lead_coeff().inv()
        return MultiPoly(self.ring, {e: c * inv for e, c in self.terms.items()})

    # -- structural accessors

    def total_degree(self) -> int:
        if not self.terms:
            raise ValueError("total degree of the zero polynomial")
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        """Degree in variable i; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        """The coefficient of the constant term (field zero if absent)."""
        z = (0,) * self.ring.nvars
        return self.terms.get(z, self.ring.field.zero())

    def variables(self):
        """Indices of variables occurring with positive exponent."""
        seen = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    seen.add(i)
        return sorted(seen)

    def coeff_of(self, i: int, k: int):
        """Coefficient polynomial of x_i^k (exponent slot i dropped to 0)."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                e2 = list(e)
                e2[i] = 0
                out[tuple(e2)] = c
        return MultiPoly(self.ring, out)

    # -- calculus

    def partial(self, i: int):
        """Formal partial derivative; the char-p power rule is automatic."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            k = self.ring.field.from_int(e[i])
            cc = c * k
            if not cc:
                continue
            e2 = list(e)
            e2[i] -= 1
            e2 = tuple(e2)
            if e2 in out:
                s = out[e2] + cc
                if s:
                    out[e2] = s
                else:
                    del out[e2]
            else:
                out[e2] = cc
        return MultiPoly(self.ring, out)

    # -- substitution

    def compose(self, images, target: PolyRing):
        """Substitute images[i] (a MultiPoly in target) for variable i.

        Coefficients are carried over by target's coefficient coercion, so
        this also implements the F_q[t] <-> F_q(t) retags when the image of
        the t slot is provided.
        """
        result = target.zero()
        for e, c in self.terms.items():
            term = target.const(_convert_coeff(c, self.ring.field, target.field))
            for i, k in enumerate(e):
                if k:
                    term = term * images[i] ** k
            result = result + term
        return result

    def eval_coeffs(self, xs):
        """Exact evaluation at field elements (same coefficient field)."""
        acc = self.ring.field.zero()
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v = v * xs[i] ** k
            acc = acc + v
        return acc

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=grevlex_key, reverse=True):
            c = self.terms[e]
            factors = []
            cs = repr(c)
            for i, k in enumerate(e):
                if k:
                    factors.append(self.ring.names[i] + (f"^{k}" if k > 1 else ""))
            if not factors:
                parts.append(cs if "/" not in cs and "+" not in cs else f"({cs})")
            else:
                head = "" if cs == "1" else (cs if "/" not in cs and "+" not in cs and " " not in cs else f"({cs})") + "*"
                parts.append(head + "*".join(factors))
        return " + ".join(parts)


def _convert_coeff(c, src_field, dst_field):
    if src_field == dst_field:
        return c
    if isinstance(dst_field, RationalFunctionField):
        return dst_field.elem(c)
    if isinstance(c, RationalFunction):
        if not c:
            return dst_field.zero()
        if not c.is_polynomial() or c.num.degree() > 0:
            raise ValueError("t-dependent coefficient cannot land in F_q; clear denominators instead")
        return dst_field.elem(c.num.coeffs[0])
    return dst_field.elem(c)


# ---------------------------------------------------------------------------
# derived operations


def jacobian(system, var_indices):
    """Matrix of partials: rows = equations, columns = var_indices."""
    return [[f.partial(j) for j in var_indices] for f in system]


def det_matrix(matrix, one):
    """Laplace-expansion determinant over any commutative ring; matrix sizes
    stay tiny (k <= 4 at desk scale).  The 0x0 determinant is one."""
    k = len(matrix)
    if k == 0:
        return one
    if k == 1:
        return matrix[0][0]
    if k == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    acc = None
    for j in range(k):
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = matrix[0][j] * det_matrix(minor, one)
        if acc is None:
            acc = term if j % 2 == 0 else -term
        else:
            acc = acc + term if j % 2 == 0 else acc - term
    return acc


def total_degree(f: MultiPoly) -> int:
    return f.total_degree()


def attach_t(ring: PolyRing) -> PolyRing:
    """The ring over F_q with the t slot appended (idempotent)."""
    if isinstance(ring.field, RationalFunctionField):
        return PolyRing(ring.field.ctx, ring.names + ("t",))
    if ring.tpos is not None:
        return ring
    return PolyRing(ring.field, ring.names + ("t",))


def to_rational_coeffs(f: MultiPoly) -> MultiPoly:
    """Retag a poly over F_q with t slot into F_q(t) coefficients (X vars only)."""
    ring = f.ring
    tpos = ring.tpos
    ctx = ring.field
    assert isinstance(ctx, FqContext)
    if tpos is None:
        target = PolyRing(RationalFunctionField(ctx), ring.names)
        return f.compose([target.var(i) for i in range(ring.nvars)], target)
    names = tuple(n for i, n in enumerate(ring.names) if i != tpos)
    target = PolyRing(RationalFunctionField(ctx), names)
    out = {}
    for e, c in f.terms.items():
        et = e[tpos]
        e2 = tuple(k for i, k in enumerate(e) if i != tpos)
        coeff = RationalFunction.from_unipoly(UniPoly.t_power(ctx, et, 1)).__mul__(
            RationalFunction.from_unipoly(UniPoly(ctx, [c]))
        )
        if e2 in out:
            s = out[e2] + coeff
            if s:
                out[e2] = s
            else:
                del out[e2]
        else:
            out[e2] = coeff
    return MultiPoly(target, out)


def clear_denominators(equations):
    """Scale each equation over F_q(t)[X] by the lcm of its coefficient
    denominators, yielding equations over F_q[t][X] (t as a slot) with the
    same zero set over F_q((t))."""
    out = []
    for f in equations:
        ring = f.ring
        assert isinstance(ring.field, RationalFunctionField)
        ctx = ring.field.ctx
        target = PolyRing(ctx, ring.names + ("t",))
        if not f:
            out.append(target.zero())
            continue
        lcm = UniPoly.const(ctx, 1)
        for c in f.terms.values():
            lcm = uni_lcm(lcm, c.den)
        terms = {}
        for e, c in f.terms.items():
            scaled = c.num * (lcm // c.den)
            for k, ck in enumerate(scaled.coeffs):
                if not ck:
                    continue
                e2 = e + (k,)
                terms[e2] = ck
        out.append(MultiPoly(target, terms))
    return out
