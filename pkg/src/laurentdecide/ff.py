"""Exact arithmetic in the finite field F_q, q = p^n.

Elements are coordinate vectors over Z/p in the basis 1, a, ..., a^(n-1),
where a is a root of a monic irreducible modulus of degree n.  No discrete-log
tables: q stays small and the representation is uniform in n.  The default
modulus is the lexicographically smallest monic irreducible (comparing the
coefficient tuple c_0..c_{n-1}), so contexts are reproducible across runs.
"""

from __future__ import annotations

from functools import lru_cache


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _zp_mul(a, b, p):
    # polynomial product over Z/p, dense low-to-high coefficient lists
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return out


def _zp_mod(a, m, p):
    """Remainder of a modulo the monic polynomial m, over Z/p."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    return [c % p for c in a[:dm]] + [0] * max(0, dm - len(a))


def _is_irreducible(modulus, p: int) -> bool:
    """Trial division by all monic polynomials of degree <= deg/2 over Z/p."""
    n = len(modulus) - 1
    if n < 1 or modulus[-1] != 1:
        return False
    for d in range(1, n // 2 + 1):
        # all monic polynomials of degree d: coefficient tuples over Z/p
        for code in range(p**d):
            div = []
            c = code
            for _ in range(d):
                div.append(c % p)
                c //= p
            div.append(1)
            # does div divide modulus? compute remainder
            r = list(modulus)
            for i in range(len(r) - 1, d - 1, -1):
                lead = r[i] % p
                if lead:
                    for j in range(d + 1):
                        r[i - d + j] = (r[i - d + j] - lead * div[j]) % p
            if not any(c % p for c in r[:d]):
                return False
    return True


def _smallest_irreducible(p: int, n: int):
    """Lexicographically smallest monic irreducible of degree n over Z/p."""
    # enumerate tuples (c_0..c_{n-1}) in lexicographic order, c_0 slowest
    def tuples(k):
        if k == 0:
            yield ()
            return
        for first in range(p):
            for rest in tuples(k - 1):
                yield (first,) + rest

    for tail in tuples(n):
        cand = list(tail) + [1]
        if _is_irreducible(cand, p):
            return tuple(tail) + (1,)
    raise ValueError(f"no irreducible of degree {n} over F_{p}")  # unreachable


class FqContext:
    """The field F_q = F_p^n with a fixed monic irreducible modulus."""

    def __init__(self, p: int, n: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.n = n
        self.q = p**n
        if n == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = _smallest_irreducible(p, n)
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree n")
            if not _is_irreducible(list(modulus), p):
                raise ValueError(f"modulus {modulus} is reducible over F_{p}")
            self.modulus = modulus

    def __eq__(self, other):
        return (
            isinstance(other, FqContext)
            and (self.p, self.n, self.modulus) == (other.p, other.n, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    def __repr__(self):
        if self.n == 1:
            return f"F_{self.p}"
        return f"F_{self.q}(mod={list(self.modulus)})"

    def elem(self, value) -> "FqElem":
        """Build an element from an int or a coordinate sequence."""
        if isinstance(value, FqElem):
            if value.ctx != self:
                raise ValueError("element from a different field")
            return value
        if isinstance(value, int):
            coords = (value % self.p,) + (0,) * (self.n - 1)
            return FqElem(self, coords)
        coords = tuple(int(c) % self.p for c in value)
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        return FqElem(self, coords)

    def zero(self) -> "FqElem":
        return self.elem(0)

    def one(self) -> "FqElem":
        return self.elem(1)

    def from_int(self, k: int) -> "FqElem":
        return self.elem(k)

    def gen(self) -> "FqElem":
        """The basis element a (requires n > 1)."""
        if self.n == 1:
            raise ValueError("prime field has no extension generator")
        return self.elem((0, 1) + (0,) * (self.n - 2))

    def elements(self):
        """All q elements in coordinate-lexicographic order: 0, 1, ..., a, a+1, ...

        Equivalently base-p counting with c_0 the least significant digit.
        """
        for k in range(self.q):
            coords = []
            v = k
            for _ in range(self.n):
                coords.append(v % self.p)
                v //= self.p
            yield FqElem(self, tuple(coords))


class FqElem:
    """An element of F_q as a coordinate tuple over Z/p."""

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx: FqContext, coords):
        self.ctx = ctx
        self.coords = tuple(coords)

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        return (
            isinstance(other, FqElem)
            and self.ctx == other.ctx
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        if self.ctx.n == 1:
            return str(self.coords[0])
        parts = []
        for i, c in enumerate(self.coords):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else str(c) + "*"
                parts.append(f"{head}a" + (f"^{i}" if i > 1 else ""))
        return " + ".join(parts) if parts else "0"

    def _check(self, other):
        if not isinstance(other, FqElem) or other.ctx != self.ctx:
            raise ValueError("mixed-field arithmetic")

    def __add__(self, other):
        self._check(other)
        p = self.ctx.p
        return FqElem(self.ctx, tuple((a + b) % p for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        p = self.ctx.p
        return FqElem(self.ctx, tuple((-a) % p for a in self.coords))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        ctx = self.ctx
        if ctx.n == 1:
            return FqElem(ctx, ((self.coords[0] * other.coords[0]) % ctx.p,))
        prod = _zp_mul(list(self.coords), list(other.coords), ctx.p)
        red = _zp_mod(prod, list(ctx.modulus), ctx.p)
        return FqElem(ctx, tuple(red[: ctx.n]))

    def inv(self) -> "FqElem":
        if not self:
            raise ZeroDivisionError("inversion of zero in F_q")
        # a^(q-2) = a^(-1); q is tiny, square-and-multiply is plenty
        return self ** (self.ctx.q - 2)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inv()

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = self.ctx.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_pth_power(self) -> bool:
        return True  # finite fields are perfect

    def pth_root(self) -> "FqElem":
        """The unique p-th root (finite fields are perfect): a^(p^(n-1))."""
        return self ** (self.ctx.p ** (self.ctx.n - 1))


@lru_cache(maxsize=None)
def fq_context(p: int, n: int = 1, modulus=None) -> FqContext:
    """Cached context constructor so repeated parses share one field object."""
    return FqContext(p, n, modulus)
