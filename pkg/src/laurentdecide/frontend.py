"""Sentence front-end: parse existential sentences over F_q((t)) with the
valuation-ring predicate O( ) and the uniformizer, eliminate O-atoms by their
existential definition, normalize to a disjunction of equation-plus-inequation
systems, and aggregate the per-system verdicts.

Quantified variables range over the valuation ring F_q[[t]]; constants may be
arbitrary F_q(t) values, so O(c) for a constant c is a real condition.  The
positive atom O(s) becomes  exists y: y^2 + y = w*s^2  (solvable exactly when
w*s^2 has odd positive valuation or is zero, i.e. when s is integral); the
negative atom uses the inverse trick  exists w', y: w*s*w' = 1 and
y^2 + y = w*w'^2,  which forces v(s) = -1 - v(w') < 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ff import FqContext
from .poly import (
    PolyRing,
    RationalFunction,
    RationalFunctionField,
    UniPoly,
    clear_denominators,
)
from .resolve import AffineSystem, RunConfig, decide_existential
from .verdict import SAT, UNKNOWN, UNSAT, Verdict


class ParseError(ValueError):
    def __init__(self, message, column):
        super().__init__(f"{message} at column {column}")
        self.column = column


# ---------------------------------------------------------------------------
# terms and formulas


@dataclass(frozen=True)
class TNum:
    value: int


@dataclass(frozen=True)
class TConst:
    value: RationalFunction  # an explicit F_q(t) constant (AST-level injections)


@dataclass(frozen=True)
class TVar:
    name: str


@dataclass(frozen=True)
class TUnif:
    pass


@dataclass(frozen=True)
class TOp:
    op: str  # + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class InRing:
    term: object


@dataclass(frozen=True)
class Not:
    inner: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass
class Sentence:
    variables: list
    formula: object

    def unbound_variables(self):
        bound = set(self.variables)

        def walk_term(t):
            if isinstance(t, TVar):
                yield t.name
            elif isinstance(t, TOp):
                yield from walk_term(t.left)
                yield from walk_term(t.right)

        def walk(f):
            if isinstance(f, (And, Or)):
                yield from walk(f.left)
                yield from walk(f.right)
            elif isinstance(f, Not):
                yield from walk(f.inner)
            elif isinstance(f, Eq):
                yield from walk_term(f.left)
                yield from walk_term(f.right)
            elif isinstance(f, InRing):
                yield from walk_term(f.term)

        return [v for v in walk(self.formula) if v not in bound]


# ---------------------------------------------------------------------------
# lexer / parser

_UNIFORMIZER_NAMES = {"t", "w", "pi"}


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("num", int(text[i:j]), col))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            word = text[i:j]
            tokens.append(("word", word, col))
            i = j
        elif ch in "+-*/^=&|~().,":
            tokens.append((ch, ch, col))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", col)
    tokens.append(("end", None, n + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok

    def parse_sentence(self):
        variables = []
        kind, value, col = self.peek()
        if kind == "word" and value == "exists":
            self.next()
            while True:
                tok = self.next()
                if tok[0] != "word":
                    raise ParseError("expected a variable name", tok[2])
                if tok[1] in _UNIFORMIZER_NAMES or tok[1] in ("exists", "O"):
                    raise ParseError(f"{tok[1]!r} cannot be a variable", tok[2])
                if tok[1] in variables:
                    raise ParseError(f"duplicate variable {tok[1]!r}", tok[2])
                variables.append(tok[1])
                if self.peek()[0] == ",":
                    self.next()
                    continue
                if self.peek()[0] == "word":
                    continue
                break
            self.expect(".")
        formula = self.parse_formula()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
        sentence = Sentence(variables, formula)
        unbound = sentence.unbound_variables()
        if unbound:
            raise ParseError(f"unbound variable {unbound[0]!r}", 1)
        return sentence

    def parse_formula(self):
        left = self.parse_conjunction()
        while self.peek()[0] == "|":
            self.next()
            left = Or(left, self.parse_conjunction())
        return left

    def parse_conjunction(self):
        left = self.parse_unary()
        while self.peek()[0] == "&":
            self.next()
            left = And(left, self.parse_unary())
        return left

    def parse_unary(self):
        kind, value, col = self.peek()
        if kind == "~":
            self.next()
            return Not(self.parse_unary())
        if kind == "(":
            # parenthesized formula or a term-level parenthesis of an atom:
            # try formula first by scanning for a top-level comparison
            save = self.pos
            try:
                self.next()
                inner = self.parse_formula()
                self.expect(")")
                return inner
            except ParseError:
                self.pos = save
                return self.parse_atom()
        return self.parse_atom()

    def parse_atom(self):
        kind, value, col = self.peek()
        if kind == "word" and value == "O":
            save = self.pos
            self.next()
            if self.peek()[0] == "(":
                self.next()
                term = self.parse_term()
                self.expect(")")
                return InRing(term)
            self.pos = save
        left = self.parse_term()
        self.expect("=")
        right = self.parse_term()
        return Eq(left, right)

    def parse_term(self):
        left = self.parse_product()
        while self.peek()[0] in ("+", "-"):
            op = self.next()[0]
            left = TOp(op, left, self.parse_product())
        return left

    def parse_product(self):
        left = self.parse_factor()
        while self.peek()[0] in ("*", "/"):
            op = self.next()[0]
            left = TOp(op, left, self.parse_factor())
        return left

    def parse_factor(self):
        kind, value, col = self.peek()
        if kind == "-":
            self.next()
            inner = self.parse_factor()
            return TOp("-", TNum(0), inner)
        base = self.parse_base()
        while self.peek()[0] == "^":
            self.next()
            tok = self.next()
            if tok[0] != "num":
                raise ParseError("exponent must be an integer literal", tok[2])
            base = TOp("^", base, TNum(tok[1]))
        return base

    def parse_base(self):
        kind, value, col = self.next()
        if kind == "num":
            return TNum(value)
        if kind == "word":
            if value in _UNIFORMIZER_NAMES:
                return TUnif()
            return TVar(value)
        if kind == "(":
            inner = self.parse_term()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {value!r}", col)


def parse(text: str) -> Sentence:
    """Parse a sentence: [exists <vars> .] <formula>."""
    return _Parser(text).parse_sentence()


def parse_term_text(text: str):
    """Parse a bare polynomial term (for system files)."""
    p = _Parser(text)
    term = p.parse_term()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected trailing input {tok[1]!r}", tok[2])
    return term


def unparse_term(term) -> str:
    if isinstance(term, TNum):
        return str(term.value)
    if isinstance(term, TUnif):
        return "t"
    if isinstance(term, TVar):
        return term.name
    if isinstance(term, TOp):
        if term.op == "^":
            return f"({unparse_term(term.left)})^{term.right.value}"
        return f"({unparse_term(term.left)} {term.op} {unparse_term(term.right)})"
    raise ValueError(f"cannot print {term!r} (explicit constants have no surface syntax)")


def unparse_formula(formula) -> str:
    if isinstance(formula, And):
        return f"({unparse_formula(formula.left)} & {unparse_formula(formula.right)})"
    if isinstance(formula, Or):
        return f"({unparse_formula(formula.left)} | {unparse_formula(formula.right)})"
    if isinstance(formula, Not):
        return f"~{unparse_formula(formula.inner)}"
    if isinstance(formula, Eq):
        return f"{unparse_term(formula.left)} = {unparse_term(formula.right)}"
    if isinstance(formula, InRing):
        return f"O({unparse_term(formula.term)})"
    raise AssertionError(f"unknown formula node {formula!r}")


def unparse(sentence: Sentence) -> str:
    head = ""
    if sentence.variables:
        head = "exists " + ", ".join(sentence.variables) + ". "
    return head + unparse_formula(sentence.formula)


# ---------------------------------------------------------------------------
# negation normal form and O-elimination


def nnf(formula, negate=False):
    if isinstance(formula, Not):
        return nnf(formula.inner, not negate)
    if isinstance(formula, And):
        parts = (nnf(formula.left, negate), nnf(formula.right, negate))
        return Or(*parts) if negate else And(*parts)
    if isinstance(formula, Or):
        parts = (nnf(formula.left, negate), nnf(formula.right, negate))
        return And(*parts) if negate else Or(*parts)
    return Not(formula) if negate else formula


def _fresh(base, taken, counter):
    while True:
        counter += 1
        name = f"{base}{counter}"
        if name not in taken:
            taken.add(name)
            return name, counter


def eliminate_valuation_atoms(sentence: Sentence) -> Sentence:
    """Rewrite O-atoms away.  O(s) gains one fresh Artin-Schreier variable;
    ~O(s) gains an inverse variable and then one more for the inner O."""
    matrix = nnf(sentence.formula)
    taken = set(sentence.variables) | _UNIFORMIZER_NAMES
    new_vars = list(sentence.variables)
    counters = {"y": 0, "w": 0}

    def artin_schreier(target):
        name, counters["y"] = _fresh("y", taken, counters["y"])
        new_vars.append(name)
        y = TVar(name)
        return Eq(TOp("+", TOp("^", y, TNum(2)), y), target)

    def rewrite(f):
        if isinstance(f, And):
            return And(rewrite(f.left), rewrite(f.right))
        if isinstance(f, Or):
            return Or(rewrite(f.left), rewrite(f.right))
        if isinstance(f, InRing):
            # y^2 + y = w * s^2
            return artin_schreier(TOp("*", TUnif(), TOp("^", f.term, TNum(2))))
        if isinstance(f, Not):
            inner = f.inner
            if isinstance(inner, InRing):
                name, counters["w"] = _fresh("w", taken, counters["w"])
                new_vars.append(name)
                winv = TVar(name)
                # w * s * w' = 1  and  O(w')
                unit = Eq(TOp("*", TOp("*", TUnif(), inner.term), winv), TNum(1))
                integral = artin_schreier(TOp("*", TUnif(), TOp("^", winv, TNum(2))))
                return And(unit, integral)
            if isinstance(inner, Eq):
                return f
            raise AssertionError("negation normal form leaked a compound negation")
        return f

    return Sentence(new_vars, rewrite(matrix))


# ---------------------------------------------------------------------------
# systems


def _term_to_poly(term, ring: PolyRing, var_index):
    field = ring.field
    ctx = field.ctx
    if isinstance(term, TNum):
        return ring.const(term.value)
    if isinstance(term, TConst):
        return ring.const(term.value)
    if isinstance(term, TUnif):
        t = RationalFunction.from_unipoly(UniPoly.t_power(ctx, 1, 1))
        return ring.const(t)
    if isinstance(term, TVar):
        return ring.var(var_index[term.name])
    if isinstance(term, TOp):
        left = _term_to_poly(term.left, ring, var_index)
        if term.op == "^":
            return left ** term.right.value
        right = _term_to_poly(term.right, ring, var_index)
        if term.op == "+":
            return left + right
        if term.op == "-":
            return left - right
        if term.op == "*":
            return left * right
        if term.op == "/":
            if not right.is_constant():
                raise ParseError("division by a variable term is not allowed", 1)
            c = right.constant_value()
            if not c:
                raise ZeroDivisionError("division by the zero constant")
            return left.scale(c.inv())
        raise AssertionError(f"unknown operator {term.op}")
    raise AssertionError(f"unknown term node {term!r}")


def _dnf(formula):
    if isinstance(formula, Or):
        return _dnf(formula.left) + _dnf(formula.right)
    if isinstance(formula, And):
        return [a + b for a in _dnf(formula.left) for b in _dnf(formula.right)]
    return [[formula]]


def to_systems(sentence: Sentence, ctx: FqContext):
    """Disjunctive normal form, one AffineSystem per disjunct: equalities as
    f = 0 with denominators cleared, negated equalities merged into a single
    product inequation."""
    rring = PolyRing(RationalFunctionField(ctx), tuple(sentence.variables))
    ring = PolyRing(ctx, tuple(sentence.variables) + ("t",))
    var_index = {name: i for i, name in enumerate(sentence.variables)}
    systems = []
    for disjunct in _dnf(sentence.formula):
        eqs_rat = []
        ineq_factors = []
        infeasible = False
        for literal in disjunct:
            if isinstance(literal, Eq):
                f = _term_to_poly(literal.left, rring, var_index) - _term_to_poly(
                    literal.right, rring, var_index
                )
                if f.is_constant():
                    if f:
                        infeasible = True
                        break
                    continue  # 0 = 0
                eqs_rat.append(f)
            elif isinstance(literal, Not) and isinstance(literal.inner, Eq):
                inner = literal.inner
                gi = _term_to_poly(inner.left, rring, var_index) - _term_to_poly(
                    inner.right, rring, var_index
                )
                if gi.is_constant():
                    if not gi:
                        infeasible = True  # ~(0 = 0)
                        break
                    continue  # nonzero constant != 0 is always true
                ineq_factors.append(gi)
            else:
                raise AssertionError("to_systems needs an O-free literal matrix")
        if infeasible:
            one = rring.one()
            systems.append(AffineSystem(ring, clear_denominators([one])))
            continue
        equations = clear_denominators(eqs_rat) if eqs_rat else []
        g = None
        if ineq_factors:
            product = ineq_factors[0]
            for h in ineq_factors[1:]:
                product = product * h
            (g,) = clear_denominators([product])
        systems.append(AffineSystem(ring, equations, g))
    return systems


def decide(sentence, ctx: FqContext, config: RunConfig | None = None) -> Verdict:
    """Decide a sentence over F_q((t)): SAT if some disjunct is SAT (first in
    order), UNSAT if all are, otherwise UNKNOWN."""
    if isinstance(sentence, str):
        sentence = parse(sentence)
    if config is None:
        config = RunConfig()
    eliminated = eliminate_valuation_atoms(sentence)
    systems = to_systems(eliminated, ctx)
    trace = [f"{len(systems)} disjunct(s) after normalization"]
    branches = []
    for i, system in enumerate(systems):
        trace.append(f"disjunct {i}: {len(system.equations)} equation(s)"
                     + (", inequation present" if system.inequation is not None else ""))
        v = decide_existential(system, config, trace)
        if v.system is None:
            v.system = system
        if v.is_sat:
            trace.append(f"disjunct {i} is satisfiable")
            return Verdict(
                SAT,
                witness=v.witness,
                certificate=v.certificate,
                inequation_valuation=v.inequation_valuation,
                branches=branches + [v],
                trace=trace,
                system=v.system,
            )
        branches.append(v)
    if all(v.is_unsat for v in branches):
        return Verdict(UNSAT, branches=branches, trace=trace,
                       refuted_at=next((v.refuted_at for v in branches if v.refuted_at), None))
    reasons = sorted({v.reason for v in branches if v.is_unknown})
    return Verdict(UNKNOWN, reason=";".join(r for r in reasons if r), branches=branches, trace=trace)
