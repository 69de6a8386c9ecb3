"""Interpolation problem families as recursion-free clause systems.

Each encoder turns a path (or tree, or unfolding) through a program into
clauses whose unknown predicates are the interpolants to be found.  State
copies along a path are named ``v{k}_{x}`` for position ``k``.  Formulas with
several disjuncts in a clause body are split into one clause per disjunct,
so the closed-form clause counts hold for conjunctive transitions.

Transition-system files are line oriented.  A keyword at the start of a line
opens a section; the formula of a section may continue on following lines::

    # counter
    VARS x, y
    INIT x = 0, y = 0
    TRANS inc x' = x + 1, y' = y
    TRANS dec x' = x - 1, y' = y ; x' = x, y' = y - 1
    SAFE x >= 0
    POST inc x =< 7          # child label for search trees
    GUARD x >= 0             # state/transition problems
    SUMMARY x' >= x

Procedural programs use ``GLOBALS``, ``MAIN`` and ``PROC name ... END``
blocks containing ``LOCALS``, ``INIT``, ``INST label``, ``CALL label callee``,
``RET label`` and ``SAFE``.  Primed names denote post-state variables; in a
call transition they denote the callee's locals.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence, Union

from .core import (
    Atom,
    ClauseSystem,
    DNFFormula,
    HornClause,
    PredicateSymbol,
    TRUE,
    Variable,
    WfCondition,
)
from .errors import EncodingError, ParseError
from .frontend import NativeParser
from .qelim import eliminate

# ---------------------------------------------------------------------------
# Problem descriptions


@dataclass(frozen=True)
class TransitionSystem:
    """State variables, their primed copies, and formulas over them."""

    vars: tuple[Variable, ...]
    post: tuple[Variable, ...]
    init: DNFFormula
    transitions: Mapping[str, DNFFormula]
    safe: DNFFormula
    # optional sections used by particular families
    posts: Mapping[str, DNFFormula] = field(default_factory=dict)
    guard: Optional[DNFFormula] = None
    summary: Optional[DNFFormula] = None

    def transition(self, label: str) -> DNFFormula:
        try:
            return self.transitions[label]
        except KeyError:
            raise EncodingError(f"unknown transition label {label!r}") from None


@dataclass(frozen=True)
class Procedure:
    name: str
    locals: tuple[Variable, ...]
    post_locals: tuple[Variable, ...]
    inst: Mapping[str, DNFFormula] = field(default_factory=dict)
    # label -> (callee, formula over g, l_p and the callee's primed locals)
    calls: Mapping[str, tuple[str, DNFFormula]] = field(default_factory=dict)
    rets: Mapping[str, DNFFormula] = field(default_factory=dict)
    safe: DNFFormula = TRUE
    init: DNFFormula = TRUE


@dataclass(frozen=True)
class ProceduralProgram:
    globals: tuple[Variable, ...]
    post_globals: tuple[Variable, ...]
    procedures: Mapping[str, Procedure]
    main: str

    def __post_init__(self):
        if self.main not in self.procedures:
            raise EncodingError(f"main procedure {self.main!r} is not declared")
        for proc in self.procedures.values():
            for label, (callee, _) in proc.calls.items():
                if callee not in self.procedures:
                    raise EncodingError(f"call {label} names undeclared procedure {callee!r}")

    def owner(self, label: str) -> tuple[Procedure, str]:
        """The procedure containing ``label`` and its kind: inst, call or ret."""
        for proc in self.procedures.values():
            for kind, table in (("inst", proc.inst), ("call", proc.calls), ("ret", proc.rets)):
                if label in table:
                    return proc, kind
        raise EncodingError(f"unknown transition label {label!r}")


@dataclass(frozen=True)
class SearchNode:
    label: DNFFormula
    # (transition over v ++ v', child label over v)
    children: tuple[tuple[DNFFormula, DNFFormula], ...]

    def __post_init__(self):
        if not self.children:
            raise EncodingError("a search node needs at least one child")


class QuantifierMode(enum.Enum):
    EXISTENTIAL = "exists"
    UNIVERSAL = "forall"


# ---------------------------------------------------------------------------
# Clause assembly


class _Builder:
    def __init__(self):
        self.predicates: list[PredicateSymbol] = []
        self.clauses: list[HornClause] = []
        self.wf: list[WfCondition] = []

    def predicate(self, name: str, arity: int) -> PredicateSymbol:
        p = PredicateSymbol(name, arity)
        self.predicates.append(p)
        return p

    def add(self, atoms: Sequence[Atom], formulas: Iterable[DNFFormula], head) -> None:
        body = TRUE
        for f in formulas:
            body = body & f
        for d in body.disjuncts:
            self.clauses.append(HornClause(len(self.clauses), tuple(atoms), d, head))

    def system(self) -> ClauseSystem:
        return ClauseSystem(tuple(self.predicates), tuple(self.clauses), tuple(self.wf))


def _copy(vars: Sequence[Variable], k: Union[int, str]) -> tuple[Variable, ...]:
    return tuple(Variable.fresh(f"v{k}_{v.name}") for v in vars)


def _at(f: DNFFormula, ts: TransitionSystem, pre, post=()) -> DNFFormula:
    """Instantiate ``f`` with ``pre`` for the state and ``post`` for primed variables."""
    mapping = dict(zip(ts.vars, pre))
    mapping.update(zip(ts.post, post))
    return f.rename(mapping)


def _check_labels(ts: TransitionSystem, path: Sequence[str]) -> list[DNFFormula]:
    return [ts.transition(label) for label in path]


def encode_path(ts: TransitionSystem, path: Sequence[str]) -> ClauseSystem:
    """``init -> i0``, ``i{k-1} & next_k -> i{k}``, ``i{n} -> safe``."""
    nexts = _check_labels(ts, path)
    b = _Builder()
    n = len(nexts)
    preds = [b.predicate(f"i{k}", len(ts.vars)) for k in range(n + 1)]
    v0 = _copy(ts.vars, 0)
    b.add([], [_at(ts.init, ts, v0)], Atom(preds[0], v0))
    for k in range(1, n + 1):
        pre, post = _copy(ts.vars, k - 1), _copy(ts.vars, k)
        b.add([Atom(preds[k - 1], pre)], [_at(nexts[k - 1], ts, pre, post)], Atom(preds[k], post))
    vn = _copy(ts.vars, n)
    b.add([Atom(preds[n], vn)], [], _at(ts.safe, ts, vn))
    return b.system()


def encode_transition(ts: TransitionSystem, path: Sequence[str]) -> ClauseSystem:
    """``next_k -> t{k}`` and ``init(v0) & t1(v0,v1) & ... -> safe(vn)``."""
    nexts = _check_labels(ts, path)
    b = _Builder()
    n = len(nexts)
    preds = [b.predicate(f"t{k}", 2 * len(ts.vars)) for k in range(1, n + 1)]
    for k in range(n):
        pre, post = _copy(ts.vars, 0), _copy(ts.vars, 1)
        b.add([], [_at(nexts[k], ts, pre, post)], Atom(preds[k], pre + post))
    states = [_copy(ts.vars, k) for k in range(n + 1)]
    atoms = [Atom(preds[k], states[k] + states[k + 1]) for k in range(n)]
    b.add(atoms, [_at(ts.init, ts, states[0])], _at(ts.safe, ts, states[n]))
    return b.system()


def encode_wellfounded(
    ts: TransitionSystem, stem: Sequence[str], loop: Sequence[str]
) -> ClauseSystem:
    """Stem chain ``i0..i{m}``, loop relations ``t1..t{n}`` and ``wf(t{n})``."""
    if not loop:
        raise EncodingError("the loop of a well-founded problem must be nonempty")
    stems = _check_labels(ts, stem)
    loops = _check_labels(ts, loop)
    b = _Builder()
    m, n, w = len(stems), len(loops), len(ts.vars)
    ipreds = [b.predicate(f"i{k}", w) for k in range(m + 1)]
    tpreds = [b.predicate(f"t{k}", 2 * w) for k in range(1, n + 1)]
    v0 = _copy(ts.vars, 0)
    b.add([], [_at(ts.init, ts, v0)], Atom(ipreds[0], v0))
    for k in range(1, m + 1):
        pre, post = _copy(ts.vars, k - 1), _copy(ts.vars, k)
        b.add([Atom(ipreds[k - 1], pre)], [_at(stems[k - 1], ts, pre, post)], Atom(ipreds[k], post))
    pre, post = _copy(ts.vars, m), _copy(ts.vars, m + 1)
    b.add([Atom(ipreds[m], pre)], [_at(loops[0], ts, pre, post)], Atom(tpreds[0], pre + post))
    for k in range(1, n):
        start, mid, end = _copy(ts.vars, m), _copy(ts.vars, m + k), _copy(ts.vars, m + k + 1)
        b.add([Atom(tpreds[k - 1], start + mid)], [_at(loops[k], ts, mid, end)],
              Atom(tpreds[k], start + end))
    b.wf.append(WfCondition(tpreds[-1]))
    return b.system()


def encode_state_transition(
    vars_: Sequence[Variable],
    post: Sequence[Variable],
    nexts: Sequence[DNFFormula],
    guard: DNFFormula,
    summary: DNFFormula,
) -> ClauseSystem:
    """Summaries ``s{k}`` of each step and guards ``g{k}`` in front of them."""
    n = len(nexts)
    if n == 0:
        raise EncodingError("a state/transition problem needs at least one step")
    ts = TransitionSystem(tuple(vars_), tuple(post), TRUE, {}, TRUE)
    b = _Builder()
    w = len(vars_)
    spreds = [b.predicate(f"s{k}", 2 * w) for k in range(1, n + 1)]
    gpreds = [b.predicate(f"g{k}", w) for k in range(1, n + 1)]
    for k in range(n):
        pre, nxt = _copy(vars_, 0), _copy(vars_, 1)
        b.add([], [_at(nexts[k], ts, pre, nxt)], Atom(spreds[k], pre + nxt))
    v = _copy(vars_, 0)
    b.add([], [_at(guard, ts, v)], Atom(gpreds[0], v))
    for k in range(n):
        pre, nxt = _copy(vars_, 0), _copy(vars_, 1)
        atoms = [Atom(gpreds[k], pre), Atom(spreds[k], pre + nxt)]
        if k + 1 < n:
            b.add(atoms, [], Atom(gpreds[k + 1], nxt))
        else:
            b.add(atoms, [], _at(summary, ts, pre, nxt))
    return b.system()


def search_head(
    next_: DNFFormula, child: DNFFormula, vars_, post, mode: QuantifierMode
) -> DNFFormula:
    """Quantifier-free head for one child, over the unprimed variables."""
    child_post = child.rename(dict(zip(vars_, post)))
    if mode is QuantifierMode.EXISTENTIAL:
        return eliminate(next_.negate() | child_post, set(post))
    return eliminate(next_ & child_post.negate(), set(post)).negate()


def encode_search_tree(
    vars_: Sequence[Variable],
    post: Sequence[Variable],
    node: SearchNode,
    mode: QuantifierMode = QuantifierMode.EXISTENTIAL,
) -> ClauseSystem:
    """``s0 -> i{k}`` and ``i{k} -> head_k`` for every child ``k``."""
    b = _Builder()
    w = len(vars_)
    ts = TransitionSystem(tuple(vars_), tuple(post), TRUE, {}, TRUE)
    preds = [b.predicate(f"i{k}", w) for k in range(1, len(node.children) + 1)]
    for k, p in enumerate(preds):
        v = _copy(vars_, 0)
        b.add([], [_at(node.label, ts, v)], Atom(p, v))
    for k, (next_, child) in enumerate(node.children):
        head = search_head(next_, child, vars_, post, mode)
        v = _copy(vars_, 0)
        b.add([Atom(preds[k], v)], [], _at(head, ts, v))
    return b.system()


def search_node(ts: TransitionSystem, children: Sequence[str]) -> SearchNode:
    """Node labeled ``init`` whose children follow the given transitions."""
    kids = []
    for label in children:
        if label not in ts.posts:
            raise EncodingError(f"transition {label!r} has no POST child label")
        kids.append((ts.transition(label), ts.posts[label]))
    return SearchNode(ts.init, tuple(kids))


def encode_nested(prog: ProceduralProgram, path: Sequence[str]) -> ClauseSystem:
    """Path through procedures with an explicit call stack.

    A return clause also conjoins the interpolant of the caller at its call
    site, so the caller's locals survive the call.
    """
    g = prog.globals
    b = _Builder()
    main = prog.procedures[prog.main]

    def state(k: int, proc: Procedure) -> tuple[Variable, ...]:
        return _copy(g + proc.locals, k)

    # each stack frame: (procedure, index of the interpolant before the call)
    stack: list[tuple[Procedure, int]] = [(main, -1)]
    procs = [main]
    for k, label in enumerate(path, start=1):
        proc, kind = prog.owner(label)
        top = stack[-1][0]
        if proc is not top:
            trace = " > ".join(p.name for p, _ in stack)
            raise EncodingError(f"step {k} ({label}) belongs to {proc.name}, active stack {trace}")
        if kind == "call":
            stack.append((prog.procedures[proc.calls[label][0]], k - 1))
        elif kind == "ret":
            if len(stack) == 1:
                raise EncodingError(f"step {k} ({label}) returns from {proc.name} with an empty stack")
            stack.pop()
        procs.append(stack[-1][0])

    preds = [b.predicate(f"i{k}", len(g) + len(p.locals)) for k, p in enumerate(procs)]

    def rename(f: DNFFormula, mapping) -> DNFFormula:
        return f.rename(dict(mapping))

    v0 = state(0, main)
    b.add([], [rename(main.init, zip(g + main.locals, v0))], Atom(preds[0], v0))
    pending: list[int] = []
    for k, label in enumerate(path, start=1):
        proc, kind = prog.owner(label)
        pre = state(k - 1, proc)
        pg, pl = pre[: len(g)], pre[len(g):]
        env = list(zip(g + proc.locals, pre))
        if kind == "inst":
            post = state(k, proc)
            env += zip(prog.post_globals + proc.post_locals, post)
            b.add([Atom(preds[k - 1], pre)], [rename(proc.inst[label], env)], Atom(preds[k], post))
        elif kind == "call":
            callee_name, f = proc.calls[label]
            callee = prog.procedures[callee_name]
            lq = _copy(callee.locals, k)
            env += zip(callee.post_locals, lq)
            b.add([Atom(preds[k - 1], pre)], [rename(f, env)], Atom(preds[k], tuple(pg) + lq))
            pending.append(k - 1)
        else:
            j = pending.pop()
            caller = procs[k]
            at_call = state(j, caller)
            g_out = _copy(g, k)
            lq = at_call[len(g):]
            env += zip(prog.post_globals, g_out)
            atoms = [Atom(preds[k - 1], pre), Atom(preds[j], at_call)]
            b.add(atoms, [rename(proc.rets[label], env)], Atom(preds[k], g_out + lq))
    last = procs[-1]
    vn = state(len(path), last)
    b.add([Atom(preds[-1], vn)], [], rename(last.safe, zip(g + last.locals, vn)))
    return b.system()


def encode_unfolding(system: ClauseSystem, expansion: Sequence[int]) -> ClauseSystem:
    """Linear unfolding of (possibly recursive) clauses along ``expansion``.

    Step ``k`` uses clause ``expansion[k]`` and defines the indexed copy
    ``{p}_{k}`` of its head predicate; its body atom must refer to the copy
    defined by step ``k - 1``.  A query clause may only come last.
    """
    b = _Builder()
    previous: Optional[PredicateSymbol] = None
    previous_copy: Optional[PredicateSymbol] = None
    for k, cid in enumerate(expansion):
        try:
            clause = system.clause(cid)
        except KeyError:
            raise EncodingError(f"step {k}: unknown clause id {cid}") from None
        if len(clause.body_atoms) > 1:
            raise EncodingError(f"step {k}: clause {cid} is not linear")
        if k == 0 and clause.body_atoms:
            raise EncodingError(f"step 0: clause {cid} has a body atom, expected a fact")
        if k > 0 and previous is None:
            raise EncodingError(f"step {k}: nothing follows a query clause")
        if k > 0 and (not clause.body_atoms or clause.body_atoms[0].predicate != previous):
            raise EncodingError(f"step {k}: clause {cid} does not continue from {previous}")
        mapping = {v: Variable.fresh(f"{v.name}_{k}") for v in sorted(clause.variables())}
        atoms = []
        if clause.body_atoms:
            atoms.append(Atom(previous_copy, clause.body_atoms[0].rename(mapping).args))
        if isinstance(clause.head, Atom):
            copy = b.predicate(f"{clause.head.predicate.name}_{k}", clause.head.predicate.arity)
            head = Atom(copy, clause.head.rename(mapping).args)
            previous, previous_copy = clause.head.predicate, copy
        else:
            head = clause.head.rename(mapping)
            previous = previous_copy = None
        b.add(atoms, [DNFFormula.of([clause.body_constraint.rename(mapping)])], head)
    return b.system()


# ---------------------------------------------------------------------------
# Transition-system files

_ONE_NAME = {"TRANS", "POST", "INST", "RET", "MAIN", "PROC"}
_NO_NAME = {"INIT", "SAFE", "GUARD", "SUMMARY", "END"}
_LISTS = {"VARS", "GLOBALS", "LOCALS"}
_KEYWORDS = _ONE_NAME | _NO_NAME | _LISTS | {"CALL"}
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass
class _Section:
    keyword: str
    names: list[str]
    line: int
    text: str = ""
    col: int = 1


def _sections(text: str) -> list[_Section]:
    out: list[_Section] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        words = stripped.split(None, 1)
        if words[0] in _KEYWORDS:
            kw = words[0]
            rest = words[1] if len(words) > 1 else ""
            count = 2 if kw == "CALL" else 1 if kw in _ONE_NAME else 0
            parts = rest.split(None, count) if count else [rest]
            names = parts[:count] if count else []
            if len(names) < count:
                raise ParseError(f"{kw} needs {count} name(s)", lineno, 1)
            for name in names:
                if not _NAME.match(name):
                    raise ParseError(f"bad name {name!r}", lineno, 1)
            body = parts[count] if len(parts) > count else ""
            sec = _Section(kw, names, lineno, col=line.find(body) + 1 if body else 1)
            sec.text = body
            out.append(sec)
        else:
            if not out:
                raise ParseError("text before the first section", lineno, 1)
            out[-1].text += "\n" + line
    return out


def _var_list(sec: _Section) -> list[str]:
    names = [n.strip() for n in sec.text.split(",") if n.strip()]
    for n in names:
        if not _NAME.match(n) or n in ("true", "false"):
            raise ParseError(f"bad variable name {n!r}", sec.line, sec.col)
    if len(set(names)) != len(names):
        raise ParseError("repeated variable name", sec.line, sec.col)
    return names


def _formula(sec: _Section, env: Mapping[str, Variable]) -> DNFFormula:
    if not sec.text.strip():
        raise ParseError(f"{sec.keyword} needs a formula", sec.line, sec.col)
    # pad so that diagnostics carry file positions
    text = "\n" * (sec.line - 1) + " " * (sec.col - 1) + sec.text
    parser = NativeParser(text, resolve=lambda name, tok: env.get(name))
    f = parser.formula()
    if parser.tok.kind != "eof":
        raise parser.error(f"unexpected {parser.tok.text!r}")
    return f


def _state_vars(names: Sequence[str]) -> tuple[tuple[Variable, ...], tuple[Variable, ...]]:
    pre = tuple(Variable.fresh(n) for n in names)
    post = tuple(Variable.fresh(n + "'") for n in names)
    return pre, post


def parse_transition_system(text: str) -> TransitionSystem:
    secs = _sections(text)
    var_secs = [s for s in secs if s.keyword == "VARS"]
    if len(var_secs) != 1:
        raise ParseError("expected exactly one VARS section", secs[0].line if secs else 1, 1)
    names = _var_list(var_secs[0])
    pre, post = _state_vars(names)
    env = dict(zip(names, pre))
    env.update((n + "'", v) for n, v in zip(names, post))
    init, safe, guard, summary = TRUE, TRUE, None, None
    trans: dict[str, DNFFormula] = {}
    posts: dict[str, DNFFormula] = {}
    for s in secs:
        if s.keyword == "VARS":
            continue
        if s.keyword not in ("INIT", "SAFE", "TRANS", "POST", "GUARD", "SUMMARY"):
            raise ParseError(f"{s.keyword} is not allowed in a transition system", s.line, 1)
        f = _formula(s, env)
        if s.keyword in ("INIT", "SAFE", "GUARD", "POST") and any(v in post for v in f.variables()):
            raise ParseError(f"{s.keyword} may not mention primed variables", s.line, s.col)
        if s.keyword == "INIT":
            init = f
        elif s.keyword == "SAFE":
            safe = f
        elif s.keyword == "GUARD":
            guard = f
        elif s.keyword == "SUMMARY":
            summary = f
        else:
            table = trans if s.keyword == "TRANS" else posts
            if s.names[0] in table:
                raise ParseError(f"duplicate label {s.names[0]}", s.line, 1)
            table[s.names[0]] = f
    return TransitionSystem(pre, post, init, trans, safe, posts, guard, summary)


def parse_program(text: str) -> ProceduralProgram:
    secs = _sections(text)
    gnames: list[str] = []
    main = None
    i = 0
    blocks: list[tuple[_Section, list[_Section]]] = []
    while i < len(secs):
        s = secs[i]
        if s.keyword == "GLOBALS":
            gnames = _var_list(s)
        elif s.keyword == "MAIN":
            main = s.names[0]
        elif s.keyword == "PROC":
            j = i + 1
            while j < len(secs) and secs[j].keyword != "END":
                if secs[j].keyword == "PROC":
                    raise ParseError("nested PROC block", secs[j].line, 1)
                j += 1
            if j == len(secs):
                raise ParseError(f"PROC {s.names[0]} has no END", s.line, 1)
            blocks.append((s, secs[i + 1:j]))
            i = j
        else:
            raise ParseError(f"{s.keyword} outside a PROC block", s.line, 1)
        i += 1
    if main is None:
        raise ParseError("missing MAIN", 1, 1)
    g, gpost = _state_vars(gnames)
    genv = dict(zip(gnames, g))
    genv_post = {n + "'": v for n, v in zip(gnames, gpost)}

    locals_of: dict[str, tuple[list[str], tuple, tuple]] = {}
    for head, body in blocks:
        lnames: list[str] = []
        for s in body:
            if s.keyword == "LOCALS":
                lnames = _var_list(s)
        if set(lnames) & set(gnames):
            raise ParseError(f"locals of {head.names[0]} shadow globals", head.line, 1)
        if head.names[0] in locals_of:
            raise ParseError(f"duplicate procedure {head.names[0]}", head.line, 1)
        locals_of[head.names[0]] = (lnames, *_state_vars(lnames))

    procs: dict[str, Procedure] = {}
    labels: set[str] = set()
    for head, body in blocks:
        name = head.names[0]
        lnames, lpre, lpost = locals_of[name]
        env = dict(genv)
        env.update(zip(lnames, lpre))
        inst, calls, rets = {}, {}, {}
        safe = init = TRUE
        for s in body:
            kw = s.keyword
            if kw == "LOCALS":
                continue
            label = s.names[0] if s.names else None
            if label is not None:
                if label in labels:
                    raise ParseError(f"duplicate label {label}", s.line, 1)
                labels.add(label)
            if kw == "INST":
                e = dict(env, **genv_post)
                e.update((n + "'", v) for n, v in zip(lnames, lpost))
                inst[label] = _formula(s, e)
            elif kw == "CALL":
                callee = s.names[1]
                if callee not in locals_of:
                    raise ParseError(f"call to undeclared procedure {callee}", s.line, 1)
                cnames, _, cpost = locals_of[callee]
                e = dict(env)
                e.update((n + "'", v) for n, v in zip(cnames, cpost))
                calls[label] = (callee, _formula(s, e))
            elif kw == "RET":
                rets[label] = _formula(s, dict(env, **genv_post))
            elif kw == "SAFE":
                safe = _formula(s, env)
            elif kw == "INIT":
                init = _formula(s, env)
            else:
                raise ParseError(f"{kw} is not allowed inside PROC", s.line, 1)
        procs[name] = Procedure(name, lpre, lpost, inst, calls, rets, safe, init)
    return ProceduralProgram(g, gpost, procs, main)


FAMILIES = ("path", "transition", "wellfounded", "nested", "state-transition", "search", "unfold")


def encode_file(family: str, text: str, path=(), stem=(), loop=(), mode="exists") -> ClauseSystem:
    """Dispatch used by the command line."""
    if family == "nested":
        return encode_nested(parse_program(text), path)
    ts = parse_transition_system(text)
    if family == "path":
        return encode_path(ts, path)
    if family == "transition":
        return encode_transition(ts, path)
    if family == "wellfounded":
        return encode_wellfounded(ts, stem, loop)
    if family == "state-transition":
        if ts.summary is None:
            raise EncodingError("state-transition problems need a SUMMARY section")
        guard = ts.guard if ts.guard is not None else ts.init
        return encode_state_transition(ts.vars, ts.post, _check_labels(ts, path), guard, ts.summary)
    if family == "search":
        return encode_search_tree(ts.vars, ts.post, search_node(ts, path), QuantifierMode(mode))
    raise EncodingError(f"unknown family {family!r}")


__all__ = [
    "FAMILIES",
    "ProceduralProgram",
    "Procedure",
    "QuantifierMode",
    "SearchNode",
    "TransitionSystem",
    "encode_file",
    "encode_nested",
    "encode_path",
    "encode_search_tree",
    "encode_state_transition",
    "encode_transition",
    "encode_unfolding",
    "encode_wellfounded",
    "parse_program",
    "parse_transition_system",
    "search_head",
    "search_node",
]
