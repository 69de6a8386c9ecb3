"""Reading and writing clause systems, solutions and counterexamples.

Two concrete syntaxes are supported.

Native (Prolog-like)::

    # comment
    p(X) :- X >= 10.
    q(V, W) :- p(U), W = U + V.
    Z >= Y :- q(Y, Z), Y =< 0.
    false :- p(X), X < 0.
    wf(r(S, T)).

Variables start with an upper-case letter or ``_``, predicates with a
lower-case letter.  Heads may be ``false``, an atom, or a formula built from
constraints with ``,`` (and) and ``;`` (or).  Numbers are integers or
``p/q`` fractions; decimal points are rejected.

SMT-LIB2 (HORN logic, reals only)::

    (set-logic HORN)
    (declare-fun p (Real) Bool)
    (assert (forall ((x Real)) (=> (>= x 10) (p x))))
    (declare-wf r)

``declare-wf`` is the one extension over standard SMT-LIB2.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .core import (
    Atom,
    ClauseSystem,
    Conjunction,
    Constraint,
    DNFFormula,
    FALSE,
    HornClause,
    LinearTerm,
    PredicateSymbol,
    Rel,
    Solution,
    TRUE,
    Variable,
    WfCondition,
    formals,
    normalize_constraint,
)
from .errors import InputError, ParseError


class SourceFormat(enum.Enum):
    NATIVE = "native"
    SMTLIB2 = "smt2"

    @classmethod
    def from_path(cls, path: str) -> "SourceFormat":
        if path.endswith(".smt2"):
            return cls.SMTLIB2
        if path.endswith(".chc"):
            return cls.NATIVE
        raise InputError(f"cannot infer format of {path!r}; use --format")

    @classmethod
    def parse(cls, name: str) -> "SourceFormat":
        for f in cls:
            if f.value == name:
                return f
        raise InputError(f"unknown format {name!r}")


# ---------------------------------------------------------------------------
# Native syntax: tokens


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<decimal>\d+\.\d+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*'*)
  | (?P<op>:-|>=|=<|<=|>|<|=|\(|\)|,|;|\.|\+|-|\*|/)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "decimal":
            raise ParseError(f"decimal literal {m.group()} not allowed; write p/q", line, col)
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


_RELOPS = {">=", "=<", "<=", ">", "<", "="}


def make_constraint(lhs: LinearTerm, op: str, rhs: LinearTerm) -> Constraint:
    if op == ">=":
        c = Constraint(lhs - rhs, Rel.GE)
    elif op == ">":
        c = Constraint(lhs - rhs, Rel.GT)
    elif op in ("=<", "<="):
        c = Constraint(rhs - lhs, Rel.GE)
    elif op == "<":
        c = Constraint(rhs - lhs, Rel.GT)
    else:
        c = Constraint(lhs - rhs, Rel.EQ)
    return normalize_constraint(c)


class _Backtrack(Exception):
    pass


class NativeParser:
    """Recursive-descent parser over native tokens.

    ``resolve`` maps an identifier to a variable; it is replaced per clause.
    """

    def __init__(self, text: str, resolve: Optional[Callable[[str, Token], Variable]] = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.resolve = resolve

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def error(self, message: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.tok
        if not self.accept(text):
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return tok

    def at_keyword(self, word: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == word

    def at_atom(self) -> bool:
        t = self.tok
        return (
            t.kind == "ident"
            and t.text[0].islower()
            and t.text not in ("true", "false")
            and not (self.resolve_is_state_var(t.text))
        )

    def resolve_is_state_var(self, name: str) -> bool:
        return False

    # -- arithmetic

    def expr(self) -> LinearTerm:
        term = self.product()
        while True:
            if self.accept("+"):
                term = term + self.product()
            elif self.tok.kind == "op" and self.tok.text == "-" :
                self.pos += 1
                term = term - self.product()
            else:
                return term

    def product(self) -> LinearTerm:
        start = self.tok
        term = self.unary()
        while True:
            if self.accept("*"):
                rhs = self.unary()
                if term.is_constant():
                    term = rhs.scale(term.constant)
                elif rhs.is_constant():
                    term = term.scale(rhs.constant)
                else:
                    raise self.error("nonlinear product", start)
            elif self.tok.kind == "op" and self.tok.text == "/":
                slash = self.tok
                self.pos += 1
                rhs = self.unary()
                if not rhs.is_constant() or rhs.constant == 0:
                    raise self.error("division by a non-constant or zero", slash)
                term = term.scale(1 / rhs.constant)
            else:
                return term

    def unary(self) -> LinearTerm:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        tok = self.tok
        if tok.kind == "num":
            self.pos += 1
            return LinearTerm.const(int(tok.text))
        if self.accept("("):
            t = self.expr()
            self.expect(")")
            return t
        if tok.kind == "ident" and self.resolve is not None:
            v = self.resolve(tok.text, tok)
            if v is not None:
                self.pos += 1
                return LinearTerm.var(v)
        raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")

    def constraint(self) -> Constraint:
        lhs = self.expr()
        tok = self.tok
        if tok.kind != "op" or tok.text not in _RELOPS:
            raise self.error(f"expected a comparison, found {tok.text or 'end of input'!r}")
        self.pos += 1
        rhs = self.expr()
        return make_constraint(lhs, tok.text, rhs)

    # -- formulas (heads, definitions, transition descriptions)

    def formula(self) -> DNFFormula:
        result = self.conjunction()
        while self.accept(";"):
            result = result | self.conjunction()
        return result

    def conjunction(self) -> DNFFormula:
        result = self.formula_item()
        while self.tok.kind == "op" and self.tok.text == ",":
            self.pos += 1
            result = result & self.formula_item()
        return result

    def formula_item(self) -> DNFFormula:
        if self.at_keyword("true"):
            self.pos += 1
            return TRUE
        if self.at_keyword("false"):
            self.pos += 1
            return FALSE
        if self.tok.kind == "op" and self.tok.text == "(":
            save = self.pos
            try:
                return DNFFormula.conj([self.constraint()])
            except ParseError:
                self.pos = save
            self.expect("(")
            f = self.formula()
            self.expect(")")
            return f
        return DNFFormula.conj([self.constraint()])


# ---------------------------------------------------------------------------
# Native syntax: clause systems


def _canonical(clause: HornClause, key: Callable[[Variable], str]):
    order: list[Variable] = []
    atoms = ([clause.head] if isinstance(clause.head, Atom) else []) + list(clause.body_atoms)
    for a in atoms:
        for v in a.args:
            if v not in order:
                order.append(v)
    seen = set(order)
    order += sorted((v for v in clause.variables() if v not in seen), key=lambda v: (key(v), v.index))
    mapping = {v: Variable.fresh(v.name) for v in order}
    renamed = HornClause(
        clause.id,
        tuple(a.rename(mapping) for a in clause.body_atoms),
        clause.body_constraint.rename(mapping),
        clause.head.rename(mapping),
    )
    return renamed, mapping


def canonical_clause(clause: HornClause) -> HornClause:
    """Rename variables to fresh ones in a fixed order.

    Head arguments come first, then body atom arguments, then the remaining
    variables sorted by name.  Parsing and rendering both pass through this
    order, so normalized constraints come out the same after a round trip.
    """
    return _canonical(clause, lambda v: v.name)[0]


class _SystemBuilder:
    def __init__(self):
        self.predicates: dict[str, PredicateSymbol] = {}
        self.clauses: list[HornClause] = []
        self.wf: list[tuple[str, int, Token]] = []
        # names introduced by an explicit declaration rather than by use
        self.declared: set[str] = set()

    def predicate(self, name: str, arity: int, where: Token) -> PredicateSymbol:
        p = self.predicates.get(name)
        if p is None:
            p = self.predicates[name] = PredicateSymbol(name, arity)
        elif p.arity != arity:
            raise ParseError(
                f"predicate {name} used with arity {arity}, previously {p.arity}",
                where.line, where.col,
            )
        return p

    def add_clause(self, atoms, constraints, head) -> None:
        clause = HornClause(len(self.clauses), tuple(atoms), Conjunction.of(constraints), head)
        self.clauses.append(canonical_clause(clause))

    def finish(self) -> ClauseSystem:
        used = {self.predicates[n] for n in self.declared}
        for cl in self.clauses:
            used.update(a.predicate for a in cl.body_atoms)
            if isinstance(cl.head, Atom):
                used.add(cl.head.predicate)
        conds = []
        for name, arity, tok in self.wf:
            p = self.predicates.get(name)
            if p is None or p not in used:
                raise ParseError(f"wf condition on undeclared predicate {name}", tok.line, tok.col)
            if p.arity != arity:
                raise ParseError(f"wf condition on {name} with wrong arity", tok.line, tok.col)
            if arity % 2:
                raise ParseError(f"wf condition on {name} needs even arity", tok.line, tok.col)
            cond = WfCondition(p)
            if cond not in conds:
                conds.append(cond)
        return ClauseSystem(tuple(self.predicates.values()), tuple(self.clauses), tuple(conds))


class _ClauseScope:
    """Variables of one clause plus the equalities produced by flattening atom arguments."""

    def __init__(self):
        self.vars: dict[str, Variable] = {}
        self.extra: list[Constraint] = []
        self.counter = 0

    def resolve(self, name: str, tok: Token) -> Optional[Variable]:
        if not (name[0].isupper() or name[0] == "_") or "'" in name:
            return None
        if name == "_":
            return self.fresh()
        v = self.vars.get(name)
        if v is None:
            v = self.vars[name] = Variable.fresh(name)
        return v

    def fresh(self) -> Variable:
        self.counter += 1
        return Variable.fresh(f"_A{self.counter}")

    def flatten(self, args: Sequence[LinearTerm]) -> tuple[Variable, ...]:
        out: list[Variable] = []
        for t in args:
            if len(t.coeffs) == 1 and t.coeffs[0][1] == 1 and t.constant == 0:
                v = t.coeffs[0][0]
                if v not in out:
                    out.append(v)
                    continue
            v = self.fresh()
            self.extra.append(normalize_constraint(Constraint(LinearTerm.var(v) - t, Rel.EQ)))
            out.append(v)
        return tuple(out)


class _NativeSystemParser(NativeParser):
    def __init__(self, text: str):
        super().__init__(text)
        self.builder = _SystemBuilder()

    def atom(self, scope: _ClauseScope) -> Atom:
        tok = self.tok
        name = tok.text
        self.pos += 1
        args: list[LinearTerm] = []
        if self.accept("("):
            if not self.accept(")"):
                args.append(self.expr())
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
        p = self.builder.predicate(name, len(args), tok)
        return Atom(p, scope.flatten(args))

    def parse(self) -> ClauseSystem:
        while self.tok.kind != "eof":
            self.statement()
        return self.builder.finish()

    def statement(self) -> None:
        scope = _ClauseScope()
        self.resolve = scope.resolve
        if self.at_keyword("wf") and self.peek().text == "(":
            tok = self.tok
            self.pos += 2
            if not self.at_atom():
                raise self.error("expected an atom inside wf(...)")
            name = self.tok.text
            atom = self.atom(scope)
            self.expect(")")
            self.expect(".")
            self.builder.wf.append((name, atom.predicate.arity, tok))
            return

        head: Union[Atom, DNFFormula]
        if self.at_atom():
            head = self.atom(scope)
        else:
            head = self.formula()
        atoms: list[Atom] = []
        constraints: list[Constraint] = []
        if self.accept(":-"):
            self.body(scope, atoms, constraints)
        self.expect(".")
        constraints.extend(scope.extra)
        self.builder.add_clause(atoms, constraints, head)

    def body(self, scope, atoms, constraints) -> None:
        while True:
            if self.at_keyword("true"):
                self.pos += 1
            elif self.at_atom():
                atoms.append(self.atom(scope))
            else:
                constraints.append(self.constraint())
            if not self.accept(","):
                return


def parse_native(text: str) -> ClauseSystem:
    return _NativeSystemParser(text).parse()


# ---------------------------------------------------------------------------
# SMT-LIB2 syntax


@dataclass(frozen=True)
class SExpr:
    items: tuple
    line: int
    col: int


@dataclass(frozen=True)
class Sym:
    text: str
    line: int
    col: int


_SMT_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>;[^\n]*)
  | (?P<lp>\()
  | (?P<rp>\))
  | (?P<quoted>\|[^|]*\|)
  | (?P<string>"[^"]*")
  | (?P<atom>[^\s()|";]+)
    """,
    re.VERBOSE,
)


def read_sexprs(text: str) -> list:
    stack: list[list] = [[]]
    starts: list[tuple[int, int]] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _SMT_TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "lp":
            stack.append([])
            starts.append((line, col))
        elif kind == "rp":
            if len(stack) == 1:
                raise ParseError("unbalanced ')'", line, col)
            items = stack.pop()
            l, c = starts.pop()
            stack[-1].append(SExpr(tuple(items), l, c))
        elif kind == "quoted":
            stack[-1].append(Sym(m.group()[1:-1], line, col))
        elif kind in ("atom", "string"):
            stack[-1].append(Sym(m.group(), line, col))
        pos = m.end()
    if len(stack) != 1:
        l, c = starts[-1]
        raise ParseError("unbalanced '('", l, c)
    return stack[0]


def _where(x) -> tuple[int, int]:
    return (x.line, x.col)


def _head_sym(e) -> Optional[str]:
    if isinstance(e, SExpr) and e.items and isinstance(e.items[0], Sym):
        return e.items[0].text
    return None


_SMT_RELS = {">=": ">=", "<=": "=<", ">": ">", "<": "<", "=": "="}


class _SmtParser:
    def __init__(self):
        self.predicates: dict[str, PredicateSymbol] = {}
        self.builder = _SystemBuilder()

    def error(self, message: str, at) -> ParseError:
        return ParseError(message, *_where(at))

    def numeral(self, s: Sym) -> Optional[Fraction]:
        if re.fullmatch(r"\d+", s.text):
            return Fraction(int(s.text))
        if re.fullmatch(r"\d+\.\d*", s.text):
            raise self.error(f"decimal literal {s.text} not allowed; use (/ p q)", s)
        return None

    def term(self, e, env: Mapping[str, Variable]) -> LinearTerm:
        if isinstance(e, Sym):
            n = self.numeral(e)
            if n is not None:
                return LinearTerm.const(n)
            if e.text in env:
                return LinearTerm.var(env[e.text])
            raise self.error(f"unbound symbol {e.text}", e)
        op = _head_sym(e)
        args = [self.term(a, env) for a in e.items[1:]]
        if op == "+":
            out = LinearTerm()
            for a in args:
                out = out + a
            return out
        if op == "-":
            if len(args) == 1:
                return -args[0]
            out = args[0]
            for a in args[1:]:
                out = out - a
            return out
        if op == "*":
            out = LinearTerm.const(1)
            for a in args:
                if out.is_constant():
                    out = a.scale(out.constant)
                elif a.is_constant():
                    out = out.scale(a.constant)
                else:
                    raise self.error("nonlinear product", e)
            return out
        if op == "/":
            if len(args) != 2 or not args[1].is_constant() or args[1].constant == 0:
                raise self.error("division by a non-constant or zero", e)
            return args[0].scale(1 / args[1].constant)
        raise self.error(f"unsupported term operator {op}", e)

    def comparison(self, e, env) -> list[Constraint]:
        op = _head_sym(e)
        args = [self.term(a, env) for a in e.items[1:]]
        if len(args) < 2:
            raise self.error(f"{op} needs two arguments", e)
        return [make_constraint(a, _SMT_RELS[op], b) for a, b in zip(args, args[1:])]

    def formula(self, e, env) -> DNFFormula:
        if isinstance(e, Sym):
            if e.text == "true":
                return TRUE
            if e.text == "false":
                return FALSE
            raise self.error(f"expected a formula, found {e.text}", e)
        op = _head_sym(e)
        if op in _SMT_RELS:
            return DNFFormula.conj(self.comparison(e, env))
        if op == "and":
            out = TRUE
            for a in e.items[1:]:
                out = out & self.formula(a, env)
            return out
        if op == "or":
            out = FALSE
            for a in e.items[1:]:
                out = out | self.formula(a, env)
            return out
        if op == "not" and len(e.items) == 2:
            return self.formula(e.items[1], env).negate()
        raise self.error(f"unsupported formula {op}", e)

    def is_atom(self, e) -> bool:
        name = e.text if isinstance(e, Sym) else _head_sym(e)
        return name in self.predicates

    def atom(self, e, env, scope: _ClauseScope) -> Atom:
        if isinstance(e, Sym):
            name, raw = e.text, []
        else:
            name, raw = e.items[0].text, e.items[1:]
        p = self.predicates[name]
        if len(raw) != p.arity:
            raise self.error(f"predicate {name} expects {p.arity} arguments", e)
        return Atom(p, scope.flatten([self.term(a, env) for a in raw]))

    def body_literals(self, e, env, scope, atoms, constraints) -> None:
        if isinstance(e, Sym) and e.text == "true":
            return
        if _head_sym(e) == "and":
            for a in e.items[1:]:
                self.body_literals(a, env, scope, atoms, constraints)
            return
        if self.is_atom(e):
            atoms.append(self.atom(e, env, scope))
            return
        if _head_sym(e) in _SMT_RELS:
            constraints.extend(self.comparison(e, env))
            return
        raise self.error("clause bodies must be conjunctions of atoms and comparisons", e)

    def assertion(self, e) -> None:
        env: dict[str, Variable] = {}
        if _head_sym(e) == "forall":
            if len(e.items) != 3 or not isinstance(e.items[1], SExpr):
                raise self.error("malformed forall", e)
            for binding in e.items[1].items:
                if (not isinstance(binding, SExpr) or len(binding.items) != 2
                        or not isinstance(binding.items[0], Sym)):
                    raise self.error("malformed binding", binding)
                sort = binding.items[1]
                if not (isinstance(sort, Sym) and sort.text == "Real"):
                    raise self.error("only Real variables are supported", binding)
                name = binding.items[0].text
                env[name] = Variable.fresh(name)
            e = e.items[2]
        scope = _ClauseScope()
        atoms: list[Atom] = []
        constraints: list[Constraint] = []
        op = _head_sym(e)
        if op == "=>":
            if len(e.items) != 3:
                raise self.error("=> expects two arguments", e)
            self.body_literals(e.items[1], env, scope, atoms, constraints)
            head_expr = e.items[2]
        elif op == "not" and len(e.items) == 2:
            self.body_literals(e.items[1], env, scope, atoms, constraints)
            head_expr = Sym("false", e.line, e.col)
        else:
            head_expr = e
        if self.is_atom(head_expr):
            head: Union[Atom, DNFFormula] = self.atom(head_expr, env, scope)
        else:
            head = self.formula(head_expr, env)
        self.builder.add_clause(atoms, constraints + scope.extra, head)

    def declare_fun(self, e) -> None:
        if len(e.items) != 4 or not isinstance(e.items[1], Sym) or not isinstance(e.items[2], SExpr):
            raise self.error("malformed declare-fun", e)
        name = e.items[1].text
        for s in e.items[2].items:
            if not (isinstance(s, Sym) and s.text == "Real"):
                raise self.error("only Real arguments are supported", e)
        if not (isinstance(e.items[3], Sym) and e.items[3].text == "Bool"):
            raise self.error("predicates must return Bool", e)
        tok = Token("ident", name, e.line, e.col)
        p = self.builder.predicate(name, len(e.items[2].items), tok)
        self.builder.declared.add(name)
        self.predicates[name] = p

    def parse(self, text: str) -> ClauseSystem:
        for e in read_sexprs(text):
            op = _head_sym(e)
            if op in ("set-logic", "set-info", "set-option", "check-sat", "exit", "get-model"):
                continue
            if op == "declare-fun":
                self.declare_fun(e)
            elif op == "declare-wf":
                if len(e.items) != 2 or not isinstance(e.items[1], Sym):
                    raise self.error("malformed declare-wf", e)
                name = e.items[1].text
                p = self.predicates.get(name)
                tok = Token("ident", name, e.line, e.col)
                self.builder.wf.append((name, p.arity if p else -1, tok))
            elif op == "assert" and len(e.items) == 2:
                self.assertion(e.items[1])
            else:
                raise self.error(f"unsupported command {op}", e)
        system = self.builder.finish()
        # declared-but-unused predicates are kept
        return system


def parse_smtlib2(text: str) -> ClauseSystem:
    return _SmtParser().parse(text)


def parse_system(text: str, fmt: SourceFormat = SourceFormat.NATIVE) -> ClauseSystem:
    if fmt is SourceFormat.SMTLIB2:
        return parse_smtlib2(text)
    return parse_native(text)


# ---------------------------------------------------------------------------
# Rendering


def _name_map(variables: Iterable[Variable], sanitize: Callable[[str], str]) -> dict[Variable, str]:
    names: dict[Variable, str] = {}
    taken: set[str] = set()
    for v in sorted(variables, key=lambda v: v.index):
        base = sanitize(v.name)
        name, k = base, 2
        while name in taken:
            name = f"{base}_{k}"
            k += 1
        taken.add(name)
        names[v] = name
    return names


def _native_var(name: str) -> str:
    name = re.sub(r"[^A-Za-z0-9_]", "_", name.rstrip("@"))
    name = re.sub(r"[^A-Za-z0-9_]", "_", name)
    if not name or name == "_":
        return "V"
    if name[0].isdigit():
        return "V" + name
    if name[0].islower():
        return name[0].upper() + name[1:]
    return name


def _smt_var(name: str) -> str:
    name = name.rstrip("@")
    if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_.@']*", name) and name not in ("true", "false"):
        return name
    return "|" + name.replace("|", "_") + "|"


def format_number(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _native_linear(coeffs, names) -> str:
    parts = []
    for v, c in coeffs:
        mag = abs(c)
        body = names[v] if mag == 1 else f"{format_number(mag)}*{names[v]}"
        parts.append(("- " if c < 0 else "+ ") + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def render_constraint_native(c: Constraint, names: Mapping[Variable, str]) -> str:
    if c.term.is_constant():
        return "true" if c.is_trivially_true() else "false"
    lhs = _native_linear(c.term.coeffs, names)
    op = {Rel.GE: ">=", Rel.GT: ">", Rel.EQ: "="}[c.rel]
    return f"{lhs} {op} {format_number(-c.term.constant)}"


def render_formula_native(f: DNFFormula, names: Mapping[Variable, str]) -> str:
    if f.is_false:
        return "false"
    if f.is_true:
        return "true"
    parts = [", ".join(render_constraint_native(c, names) for c in d) for d in f.disjuncts]
    if len(parts) == 1:
        return parts[0]
    return "(" + " ; ".join(parts) + ")"


def _smt_num(q: Fraction) -> str:
    mag = abs(q)
    text = str(mag.numerator) if mag.denominator == 1 else f"(/ {mag.numerator} {mag.denominator})"
    return f"(- {text})" if q < 0 else text


def _smt_linear(coeffs, names) -> str:
    parts = []
    for v, c in coeffs:
        parts.append(names[v] if c == 1 else f"(* {_smt_num(c)} {names[v]})")
    if not parts:
        return "0"
    if len(parts) == 1:
        return parts[0]
    return f"(+ {' '.join(parts)})"


def render_constraint_smt(c: Constraint, names: Mapping[Variable, str]) -> str:
    if c.term.is_constant():
        return "true" if c.is_trivially_true() else "false"
    op = {Rel.GE: ">=", Rel.GT: ">", Rel.EQ: "="}[c.rel]
    return f"({op} {_smt_linear(c.term.coeffs, names)} {_smt_num(-c.term.constant)})"


def render_formula_smt(f: DNFFormula, names: Mapping[Variable, str]) -> str:
    if f.is_false:
        return "false"
    if f.is_true:
        return "true"

    def conj(d: Conjunction) -> str:
        items = [render_constraint_smt(c, names) for c in d]
        return items[0] if len(items) == 1 else f"(and {' '.join(items)})"

    parts = [conj(d) for d in f.disjuncts]
    return parts[0] if len(parts) == 1 else f"(or {' '.join(parts)})"


def _prepared(clause: HornClause, sanitize) -> tuple[HornClause, dict[Variable, str]]:
    """Clause in canonical variable order together with its printed names."""
    first = canonical_clause(clause)
    names = _name_map(first.variables(), sanitize)
    second, mapping = _canonical(first, lambda v: names[v])
    return second, {new: names[old] for old, new in mapping.items()}


def _native_atom(a: Atom, names) -> str:
    if not a.args:
        return a.predicate.name
    return f"{a.predicate.name}({', '.join(names[v] for v in a.args)})"


def _render_native_system(system: ClauseSystem) -> str:
    lines = []
    for cl in system.clauses:
        cl, names = _prepared(cl, _native_var)
        if isinstance(cl.head, Atom):
            head = _native_atom(cl.head, names)
        else:
            head = render_formula_native(cl.head, names)
            if head.startswith("(") or ";" in head:
                head = head if head.startswith("(") else f"({head})"
        body = [_native_atom(a, names) for a in cl.body_atoms]
        body += [render_constraint_native(c, names) for c in cl.body_constraint]
        lines.append(f"{head} :- {', '.join(body) or 'true'}.")
    for w in system.wf_conditions:
        args = ", ".join(f"S{i + 1}" for i in range(w.predicate.arity))
        lines.append(f"wf({w.predicate.name}({args})).")
    return "\n".join(lines) + ("\n" if lines else "")


def _smt_atom(a: Atom, names) -> str:
    if not a.args:
        return _smt_var(a.predicate.name)
    return f"({_smt_var(a.predicate.name)} {' '.join(names[v] for v in a.args)})"


def _render_smt_system(system: ClauseSystem) -> str:
    lines = ["(set-logic HORN)"]
    for p in system.predicates:
        sorts = " ".join(["Real"] * p.arity)
        lines.append(f"(declare-fun {_smt_var(p.name)} ({sorts}) Bool)")
    for cl in system.clauses:
        cl, names = _prepared(cl, _smt_var)
        if isinstance(cl.head, Atom):
            head = _smt_atom(cl.head, names)
        else:
            head = render_formula_smt(cl.head, names)
        body = [_smt_atom(a, names) for a in cl.body_atoms]
        body += [render_constraint_smt(c, names) for c in cl.body_constraint]
        if not body:
            body_text = "true"
        elif len(body) == 1:
            body_text = body[0]
        else:
            body_text = f"(and {' '.join(body)})"
        inner = f"(=> {body_text} {head})"
        if names:
            binders = " ".join(f"({names[v]} Real)" for v in sorted(names, key=lambda v: v.index))
            inner = f"(forall ({binders}) {inner})"
        lines.append(f"(assert {inner})")
    for w in system.wf_conditions:
        lines.append(f"(declare-wf {_smt_var(w.predicate.name)})")
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def render_system(system: ClauseSystem, fmt: SourceFormat = SourceFormat.NATIVE) -> str:
    if fmt is SourceFormat.SMTLIB2:
        return _render_smt_system(system)
    return _render_native_system(system)


def render_solution(sol: Solution, fmt: SourceFormat = SourceFormat.NATIVE) -> str:
    lines = []
    for p, f in sol.items():
        params = formals(p.arity)
        if fmt is SourceFormat.SMTLIB2:
            names = {v: f"x{i + 1}" for i, v in enumerate(params)}
            binders = " ".join(f"({names[v]} Real)" for v in params)
            lines.append(f"  (define-fun {_smt_var(p.name)} ({binders}) Bool "
                         f"{render_formula_smt(f, names)})")
        else:
            names = {v: v.name for v in params}
            head = p.name if not params else f"{p.name}({', '.join(v.name for v in params)})"
            lines.append(f"{head} = {render_formula_native(f, names)}.")
    if fmt is SourceFormat.SMTLIB2:
        return "(model\n" + "".join(line + "\n" for line in lines) + ")\n"
    return "".join(line + "\n" for line in lines)


def render_counterexample(cex, fmt: SourceFormat = SourceFormat.NATIVE) -> str:
    """Derivation shape followed by the falsifying point."""
    point = cex.model.assignment
    variables = sorted(point, key=lambda v: v.index)
    if fmt is SourceFormat.SMTLIB2:
        names = _name_map(variables, _smt_var)
        lines = ["(counterexample", f'  (derivation "{cex.derivation}")']
        lines += [f"  (define-fun {names[v]} () Real {_smt_num(point[v])})" for v in variables]
        return "\n".join(lines) + "\n)\n"
    names = _name_map(variables, _native_var)
    lines = [f"# derivation {cex.derivation}"]
    lines += [f"{names[v]} = {format_number(point[v])}." for v in variables]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Solutions


def _bind_predicate(system, name, arity, where) -> PredicateSymbol:
    if system is None:
        return PredicateSymbol(name, arity)
    for p in system.predicates:
        if p.name == name:
            if p.arity != arity:
                raise ParseError(f"{name} defined with arity {arity}, declared {p.arity}", *where)
            return p
    raise ParseError(f"definition of unknown predicate {name}", *where)


def _parse_native_solution(text: str, system) -> Solution:
    parser = NativeParser(text)
    assignment: dict[PredicateSymbol, DNFFormula] = {}
    while parser.tok.kind != "eof":
        tok = parser.tok
        if not (tok.kind == "ident" and tok.text[0].islower()):
            raise parser.error("expected a predicate definition")
        parser.pos += 1
        params: list[str] = []
        if parser.accept("("):
            if not parser.accept(")"):
                while True:
                    t = parser.tok
                    if t.kind != "ident":
                        raise parser.error("expected a parameter name")
                    params.append(t.text)
                    parser.pos += 1
                    if parser.accept(")"):
                        break
                    parser.expect(",")
        if len(set(params)) != len(params):
            raise parser.error("repeated parameter name", tok)
        p = _bind_predicate(system, tok.text, len(params), (tok.line, tok.col))
        env = dict(zip(params, formals(len(params))))
        parser.resolve = lambda name, t, env=env: env.get(name)
        parser.expect("=")
        assignment[p] = parser.formula()
        parser.expect(".")
    return _complete(assignment, system)


def _parse_smt_solution(text: str, system) -> Solution:
    sp = _SmtParser()
    assignment: dict[PredicateSymbol, DNFFormula] = {}
    exprs = read_sexprs(text)
    if len(exprs) == 1 and _head_sym(exprs[0]) == "model":
        exprs = list(exprs[0].items[1:])
    for e in exprs:
        if _head_sym(e) != "define-fun" or len(e.items) != 5:
            raise sp.error("expected define-fun", e)
        name = e.items[1].text
        params = []
        for b in e.items[2].items:
            if not isinstance(b, SExpr) or len(b.items) != 2:
                raise sp.error("malformed parameter", b)
            params.append(b.items[0].text)
        p = _bind_predicate(system, name, len(params), _where(e))
        env = dict(zip(params, formals(len(params))))
        assignment[p] = sp.formula(e.items[4], env)
    return _complete(assignment, system)


def _complete(assignment, system) -> Solution:
    if system is not None:
        missing = [p for p in system.predicates if p not in assignment]
        if missing:
            raise InputError(f"solution has no entry for {', '.join(map(str, missing))}")
    return Solution(assignment)


def parse_solution(text: str, fmt: SourceFormat = SourceFormat.NATIVE, system: ClauseSystem = None) -> Solution:
    """Parse definitions as printed by :func:`render_solution`."""
    if fmt is SourceFormat.SMTLIB2:
        return _parse_smt_solution(text, system)
    return _parse_native_solution(text, system)
