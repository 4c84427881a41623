import random

import pytest

from laurentdecide.ff import FqContext
from laurentdecide.poly import (
    PolyRing,
    RationalFunction,
    RationalFunctionField,
    UniPoly,
    clear_denominators,
    jacobian,
    to_rational_coeffs,
    total_degree,
    uni_gcd,
)

F2 = FqContext(2)
F3 = FqContext(3)
F5 = FqContext(5)


def ring(ctx, *names):
    return PolyRing(ctx, names)


# -- independent naive oracle: dict-based polynomial arithmetic ------------


def naive_mul(a, b, nvars):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, e1[0] * 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def as_dict(f):
    return dict(f.terms)


# -- UniPoly / RationalFunction --------------------------------------------


def test_unipoly_divmod_roundtrip():
    rng = random.Random(7)
    for _ in range(40):
        a = UniPoly(F3, [rng.randrange(3) for _ in range(rng.randrange(1, 6))])
        b = UniPoly(F3, [rng.randrange(3) for _ in range(rng.randrange(1, 4))])
        if not b:
            continue
        q, r = a.divmod(b)
        assert q * b + r == a
        if r:
            assert r.degree() < b.degree()


def test_uni_gcd_known():
    # gcd(t^2 - 1, t - 1) = t - 1 over F_3
    a = UniPoly(F3, [2, 0, 1])
    b = UniPoly(F3, [2, 1])
    assert uni_gcd(a, b) == b.monic()


def test_rational_reduction():
    # (t^2 - 1)/(t - 1) reduces to t + 1
    num = UniPoly(F3, [2, 0, 1])
    den = UniPoly(F3, [2, 1])
    r = RationalFunction(num, den)
    assert r.den == UniPoly.const(F3, 1)
    assert r.num == UniPoly(F3, [1, 1])


def test_rational_field_axioms_random():
    rng = random.Random(99)
    field = RationalFunctionField(F3)

    def rand_rf():
        num = UniPoly(F3, [rng.randrange(3) for _ in range(rng.randrange(1, 4))])
        den = UniPoly(F3, [rng.randrange(3) for _ in range(rng.randrange(1, 4))])
        if not den:
            den = UniPoly.const(F3, 1)
        return RationalFunction(num, den)

    for _ in range(40):
        a, b, c = rand_rf(), rand_rf(), rand_rf()
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * a.inv() == field.one()


def test_rational_t_valuation():
    t = UniPoly(F3, [0, 1])
    one = UniPoly.const(F3, 1)
    assert RationalFunction(t, one).t_valuation() == 1
    assert RationalFunction(one, t).t_valuation() == -1
    assert RationalFunction(t * t, t).t_valuation() == 1


# -- MultiPoly arithmetic ----------------------------------------------------


def test_char2_add_cancel():
    R = ring(F2, "X")
    f = R.from_terms({(1,): 1, (0,): 1})  # X + 1
    assert not (f + f)


def test_char2_frobenius_square():
    R = ring(F2, "X", "Y")
    f = R.var(0) + R.var(1)
    assert f * f == R.from_terms({(2, 0): 1, (0, 2): 1})


def test_f3_square_expansion():
    # (X+Y)^2 = X^2 + 2XY + Y^2 over F_3
    R = ring(F3, "X", "Y")
    f = R.var(0) + R.var(1)
    assert f * f == R.from_terms({(2, 0): 1, (1, 1): 2, (0, 2): 1})


def test_ring_axioms_random():
    rng = random.Random(4242)
    R = ring(F3, "X", "Y")

    def rand_poly():
        terms = {}
        for _ in range(rng.randrange(1, 5)):
            e = (rng.randrange(3), rng.randrange(3))
            terms[e] = rng.randrange(3)
        return R.from_terms(terms)

    for _ in range(50):
        a, b, c = rand_poly(), rand_poly(), rand_poly()
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)


def test_domain_mismatch_rejected():
    with pytest.raises(ValueError):
        ring(F2, "X").var(0) + ring(F3, "X").var(0)


# -- jacobian ----------------------------------------------------------------


def test_jacobian_char_p_power_rule():
    # d/dX of X^p - t is 0 in characteristic p
    for ctx in (F2, F3, F5):
        R = ring(ctx, "X", "t")
        f = R.from_terms({(ctx.p, 0): 1, (0, 1): -1})
        (row,) = jacobian([f], [0])
        assert not row[0]


def test_jacobian_product_system():
    R = ring(F3, "X", "Y")
    f = R.var(0) * R.var(1) - R.one()
    (row,) = jacobian([f], [0, 1])
    assert row[0] == R.var(1)
    assert row[1] == R.var(0)


def test_jacobian_cusp_f5():
    # {Y^2 - X^3} over F_5: (-3X^2, 2Y)
    R = ring(F5, "X", "Y")
    f = R.var(1) ** 2 - R.var(0) ** 3
    (row,) = jacobian([f], [0, 1])
    assert row[0] == R.from_terms({(2, 0): -3})
    assert row[1] == R.from_terms({(0, 1): 2})


def test_jacobian_is_derivation_on_products():
    rng = random.Random(11)
    R = ring(F3, "X", "Y")

    def rand_poly():
        return R.from_terms(
            {(rng.randrange(3), rng.randrange(3)): rng.randrange(3) for _ in range(3)}
        )

    for _ in range(30):
        f, g = rand_poly(), rand_poly()
        for j in (0, 1):
            lhs = (f * g).partial(j)
            rhs = f.partial(j) * g + f * g.partial(j)
            assert lhs == rhs


# -- total_degree ------------------------------------------------------------


def test_total_degree_counts_t():
    R = ring(F3, "X", "t")
    assert total_degree(R.from_terms({(2, 0): 1, (0, 0): 1})) == 2
    # t*X + t^3 has total degree 3 (t counted as a variable)
    assert total_degree(R.from_terms({(1, 1): 1, (0, 3): 1})) == 3
    assert total_degree(R.one()) == 0
    with pytest.raises(ValueError):
        total_degree(R.zero())


def test_total_degree_multiplicative_over_domain():
    rng = random.Random(5)
    R = ring(F5, "X", "Y")
    for _ in range(40):
        f = R.from_terms({(rng.randrange(3), rng.randrange(3)): rng.randrange(1, 5) for _ in range(2)})
        g = R.from_terms({(rng.randrange(3), rng.randrange(3)): rng.randrange(1, 5) for _ in range(2)})
        if f and g:
            assert total_degree(f * g) == total_degree(f) + total_degree(g)


# -- clear_denominators ------------------------------------------------------


def rational_ring(ctx, *names):
    return PolyRing(RationalFunctionField(ctx), names)


def test_clear_denominators_inverse_t():
    # (1/t)*X + 1  ->  X + t
    R = rational_ring(F3, "X")
    t = UniPoly(F3, [0, 1])
    one = UniPoly.const(F3, 1)
    f = R.from_terms({(1,): RationalFunction(one, t), (0,): RationalFunction.const(F3, 1)})
    (g,) = clear_denominators([f])
    assert g.ring.names == ("X", "t")
    assert g == g.ring.from_terms({(1, 0): 1, (0, 1): 1})


def test_clear_denominators_identity_on_integral():
    R = rational_ring(F3, "X")
    f = R.var(0) - R.one()
    (g,) = clear_denominators([f])
    assert g == g.ring.from_terms({(1, 0): 1, (0, 0): -1})


def test_clear_denominators_mixed():
    # X^2 - (1+t)/(1-t) scales to (1-t)X^2 - (1+t), up to the unit forced by
    # the monic-denominator normalization; zero sets on t-adic units agree.
    R = rational_ring(F3, "X")
    t = UniPoly(F3, [0, 1])
    one = UniPoly.const(F3, 1)
    c = RationalFunction(one + t, one - t)
    f = R.from_terms({(2,): RationalFunction.const(F3, 1)}) - R.from_terms({(0,): c})
    (g,) = clear_denominators([f])
    T = g.ring
    expected = T.from_terms({(2, 0): 1, (2, 1): -1, (0, 0): -1, (0, 1): -1})
    assert g in (expected, expected.scale(-1))
    # same zero set over F_9-style checks is overkill here; verify the defining
    # identity g = lcm * f coefficientwise instead
    back = to_rational_coeffs(g)
    lcm = RationalFunction(t + UniPoly.const(F3, 2), one)
    assert back == f.scale(lcm)


def test_clear_denominators_preserves_unit_zero_sets():
    # evaluated at constants (denominator nonzero there), cleared and original
    # vanish together
    rng = random.Random(31)
    R = rational_ring(F3, "X")
    t = UniPoly(F3, [0, 1])
    one = UniPoly.const(F3, 1)
    f = R.from_terms(
        {
            (2,): RationalFunction(one, one + t),
            (1,): RationalFunction(t, one - t),
            (0,): RationalFunction.const(F3, rng.randrange(3)),
        }
    )
    (g,) = clear_denominators([f])
    field = R.field
    for c in range(3):
        x = field.from_int(c)
        orig = f.eval_coeffs([x])
        rat = to_rational_coeffs(g)
        assert bool(rat.eval_coeffs([x])) == bool(orig)


def test_clear_denominators_zero_set_at_series_points():
    # at series points (all denominators are units at t = 0 here), the cleared
    # equation vanishes to precision N exactly when the original does
    from laurentdecide.series import TruncatedSeries, evaluate, expand_rational, series_point

    rng = random.Random(93)
    R = rational_ring(F3, "X")
    t = UniPoly(F3, [0, 1])
    one = UniPoly.const(F3, 1)
    n = 4
    for _ in range(25):
        f = R.from_terms(
            {
                (2,): RationalFunction(UniPoly(F3, [rng.randrange(3), rng.randrange(3)]), one + t),
                (1,): RationalFunction(UniPoly(F3, [rng.randrange(3)]), one - t),
                (0,): RationalFunction.const(F3, rng.randrange(3)),
            }
        )
        if not f:
            continue
        (g,) = clear_denominators([f])
        for _ in range(6):
            x = TruncatedSeries(F3, [rng.randrange(3) for _ in range(n)], n)
            # original value: sum of expanded coefficients times powers
            acc = TruncatedSeries.zero(F3, n)
            for e, c in f.terms.items():
                acc = acc + expand_rational(c, n) * x ** e[0]
            cleared_val = evaluate(g, series_point(g.ring, [x], n))
            assert bool(acc) == bool(cleared_val)


# -- retags ------------------------------------------------------------------


def test_to_rational_coeffs_roundtrip():
    R = ring(F3, "X", "t")
    f = R.from_terms({(2, 0): 1, (0, 1): -1})  # X^2 - t
    g = to_rational_coeffs(f)
    assert g.ring.names == ("X",)
    t = UniPoly(F3, [0, 1])
    assert g.terms[(2,)] == RationalFunction.const(F3, 1)
    assert g.terms[(0,)] == RationalFunction(-t, UniPoly.const(F3, 1))
    (back,) = clear_denominators([g])
    assert back == f
