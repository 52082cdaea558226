"""Formula AST for the two-layer language, its concrete syntax, and closures.

Explicit-belief formulas (atoms, ``~``, ``&``, ``B{i,k}``) form the inner
layer; the outer layer adds the graded distributed-belief box ``D{J,k}``.
Both layers share the node classes below.  The layering is enforced at
construction time: a ``Tri`` body may never contain a ``Box``.

Concrete grammar (loosest binding first)::

    f  ::= f <-> f | f -> f | f '|' f | f & f
         | ~f | B{i,k} f | D{J,k} f | Dhat{J,k} f
         | disagree{J,k} | true | false | atom | ( f )

Derived connectives are expanded while parsing, so every AST only uses
``Atom``, ``Top``, ``Not``, ``And``, ``Tri`` and ``Box``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

from .grades import OMEGA, Grade, agent_key, format_grade, sort_agents


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class _Node:
    _h: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_h", hash((type(self).__name__, *self._fields())))

    def _fields(self) -> tuple:
        return ()

    def __hash__(self) -> int:
        return self._h

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, eq=True)
class Atom(_Node):
    name: str = ""

    def _fields(self) -> tuple:
        return (self.name,)


@dataclass(frozen=True, eq=True)
class Top(_Node):
    pass


@dataclass(frozen=True, eq=True)
class Not(_Node):
    sub: "Formula" = None  # type: ignore[assignment]

    def _fields(self) -> tuple:
        return (self.sub,)


@dataclass(frozen=True, eq=True)
class And(_Node):
    left: "Formula" = None  # type: ignore[assignment]
    right: "Formula" = None  # type: ignore[assignment]

    def _fields(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Tri(_Node):
    """Agent ``agent`` explicitly believes ``body`` with weight at least ``grade``."""

    agent: str = ""
    grade: Grade = 1
    body: "Formula" = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if not (self.grade == OMEGA or (isinstance(self.grade, int) and self.grade >= 1)):
            raise FormulaError(f"triangle grade must be >= 1 or omega, got {self.grade!r}")
        if not is_inner(self.body):
            raise FormulaError("a triangle body must not contain a box")
        super().__post_init__()

    def _fields(self) -> tuple:
        return (self.agent, self.grade, self.body)


@dataclass(frozen=True, eq=True)
class Box(_Node):
    """Group ``group`` implicitly believes ``body`` with strength at least ``grade``."""

    group: frozenset = frozenset()
    grade: int = 0
    body: "Formula" = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", frozenset(self.group))
        if not self.group:
            raise FormulaError("box group must be nonempty")
        if self.grade == OMEGA or not isinstance(self.grade, int) or self.grade < 0:
            raise FormulaError(f"box grade must be a finite natural number, got {self.grade!r}")
        super().__post_init__()

    def _fields(self) -> tuple:
        return (self.group, self.grade, self.body)


Formula = Union[Atom, Top, Not, And, Tri, Box]

# dataclass() regenerates __hash__ on each frozen subclass; restore the cached one
for _cls in (Atom, Top, Not, And, Tri, Box):
    _cls.__hash__ = _Node.__hash__  # type: ignore[method-assign]

TOP = Top()
BOTTOM = Not(TOP)


# -- constructors for derived connectives ------------------------------------

def neg(f: Formula) -> Formula:
    return Not(f)


def conj(a: Formula, b: Formula) -> Formula:
    return And(a, b)


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(implies(a, b), implies(b, a))


def conj_all(items: Iterable[Formula]) -> Formula:
    """Left-folded conjunction; the empty conjunction is ``true``."""
    result: Optional[Formula] = None
    for f in items:
        result = f if result is None else And(result, f)
    return TOP if result is None else result


def disj_all(items: Iterable[Formula]) -> Formula:
    """Left-folded disjunction; the empty disjunction is ``false``."""
    result: Optional[Formula] = None
    for f in items:
        result = f if result is None else disj(result, f)
    return BOTTOM if result is None else result


def diamond(group: Iterable[str], grade: int, body: Formula) -> Formula:
    return Not(Box(frozenset(group), grade, Not(body)))


def disagree(group: Iterable[str], strength: int) -> Formula:
    """Disagreement of at least ``strength`` within ``group``: ``D{J,k-1} false``."""
    if strength == OMEGA or strength < 1:
        raise FormulaError("disagreement strength must be a finite k >= 1")
    return Box(frozenset(group), strength - 1, BOTTOM)


# -- structural queries ------------------------------------------------------

def children(f: Formula) -> tuple:
    if isinstance(f, Not):
        return (f.sub,)
    if isinstance(f, And):
        return (f.left, f.right)
    if isinstance(f, (Tri, Box)):
        return (f.body,)
    return ()


@lru_cache(maxsize=1 << 16)
def is_inner(f: Formula) -> bool:
    if isinstance(f, Box):
        return False
    return all(is_inner(c) for c in children(f))


def iter_nodes(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def subformula_closure(f: Formula) -> set:
    return set(iter_nodes(f))


def node_count(f: Formula) -> int:
    return sum(1 for _ in iter_nodes(f))


@lru_cache(maxsize=1 << 16)
def size(f: Formula) -> int:
    """Number of connectives and modalities (atoms and constants count zero)."""
    return sum(1 for g in iter_nodes(f) if isinstance(g, (Not, And, Tri, Box)))


@lru_cache(maxsize=1 << 16)
def modal_depth(f: Formula) -> int:
    """Nesting depth of boxes."""
    inner = max((modal_depth(c) for c in children(f)), default=0)
    return inner + 1 if isinstance(f, Box) else inner


def atoms_of(f: Formula) -> set[str]:
    return {g.name for g in iter_nodes(f) if isinstance(g, Atom)}


def agents_of(f: Formula) -> set[str]:
    out: set[str] = set()
    for g in iter_nodes(f):
        if isinstance(g, Tri):
            out.add(g.agent)
        elif isinstance(g, Box):
            out.update(g.group)
    return out


def triangles_of(f: Formula) -> list[Tri]:
    return [g for g in iter_nodes(f) if isinstance(g, Tri)]


# -- printing ----------------------------------------------------------------

def render_group(group: Iterable[str]) -> str:
    return " ".join(sort_agents(group))


@lru_cache(maxsize=1 << 16)
def render(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Not):
        if isinstance(f.sub, Top):
            return "false"
        return "~" + _operand(f.sub)
    if isinstance(f, And):
        right = render(f.right)
        if isinstance(f.right, And):
            right = f"({right})"
        return f"{render(f.left)} & {right}"
    if isinstance(f, Tri):
        return f"B{{{f.agent},{format_grade(f.grade)}}} {_operand(f.body)}"
    if isinstance(f, Box):
        return f"D{{{render_group(f.group)},{f.grade}}} {_operand(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _operand(f: Formula) -> str:
    text = render(f)
    return f"({text})" if isinstance(f, And) else text


def sort_key(f: Formula) -> str:
    return render(f)


# -- parsing -----------------------------------------------------------------

class ParseError(FormulaError):
    def __init__(self, message: str, pos: int, text: str = "") -> None:
        self.pos = pos
        self.text = text
        super().__init__(f"{message} (at position {pos})")


_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[~&|(){},])|(?P<word>[A-Za-z_][A-Za-z0-9_]*|[0-9]+))"
)
KEYWORDS = {"B", "D", "Dhat", "disagree", "true", "false"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = "op" if m.group("op") else "word"
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: Optional[Iterable[str]]) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.agents = None if agents is None else set(agents)

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def error(self, msg: str, pos: Optional[int] = None) -> ParseError:
        return ParseError(msg, self.peek()[2] if pos is None else pos, self.text)

    def take(self, value: Optional[str] = None) -> tuple[str, str, int]:
        tok = self.peek()
        if value is not None and tok[1] != value:
            shown = tok[1] or "end of input"
            raise self.error(f"expected {value!r}, found {shown!r}")
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return f

    def iff(self) -> Formula:
        left = self.imp()
        if self.peek()[1] == "<->":
            self.take()
            return iff(left, self.iff())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.peek()[1] == "|":
            self.take()
            left = disj(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.peek()[1] == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "~":
            self.take()
            return Not(self.unary())
        if value == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if kind != "word":
            raise self.error(f"unexpected token {value or 'end of input'!r}")
        if value == "true":
            self.take()
            return TOP
        if value == "false":
            self.take()
            return BOTTOM
        if value in ("B", "D", "Dhat", "disagree") and self.tokens[self.i + 1][1] == "{":
            return self.modal(value)
        if value in KEYWORDS or value.isdigit():
            raise self.error(f"expected a formula, found {value!r}")
        self.take()
        return Atom(value)

    def _agent(self) -> str:
        kind, value, pos = self.take()
        if kind != "word" or value in KEYWORDS:
            raise self.error(f"expected an agent name, found {value!r}", pos)
        if self.agents is not None and value not in self.agents:
            raise self.error(f"agent {value!r} is not declared", pos)
        return value

    def _grade(self) -> tuple[Grade, int]:
        kind, value, pos = self.take()
        if value == "w":
            return OMEGA, pos
        if kind == "word" and value.isdigit():
            return int(value), pos
        raise self.error(f"expected a grade, found {value!r}", pos)

    def modal(self, op: str) -> Formula:
        _, _, start = self.take()
        self.take("{")
        if op == "B":
            agent = self._agent()
            self.take(",")
            grade, gpos = self._grade()
            self.take("}")
            if grade != OMEGA and grade < 1:
                raise self.error("triangle grade must be >= 1", gpos)
            body_pos = self.peek()[2]
            body = self.unary()
            if not is_inner(body):
                raise self.error("a box may not occur inside a triangle", body_pos)
            return Tri(agent, grade, body)
        group = []
        while self.peek()[1] not in (",", "}") and self.peek()[0] != "end":
            group.append(self._agent())
        if not group:
            raise self.error("group must be nonempty")
        self.take(",")
        grade, gpos = self._grade()
        self.take("}")
        if grade == OMEGA:
            raise self.error("box grades must be finite", gpos)
        if op == "disagree":
            if grade < 1:
                raise self.error("disagreement strength must be >= 1", gpos)
            return disagree(group, grade)
        body = self.unary()
        if op == "D":
            return Box(frozenset(group), grade, body)
        return diamond(group, grade, body)


def parse(text: str, agents: Optional[Iterable[str]] = None) -> Formula:
    """Parse ``text``; when ``agents`` is given, undeclared agents are errors."""
    return _Parser(text, agents).parse()


def parse_inner(text: str, agents: Optional[Iterable[str]] = None) -> Formula:
    f = parse(text, agents)
    if not is_inner(f):
        raise FormulaError(f"expected a box-free formula: {text!r}")
    return f


def group_of(text_or_agents: Union[str, Iterable[str]]) -> frozenset:
    if isinstance(text_or_agents, str):
        members = text_or_agents.replace(",", " ").split()
    else:
        members = list(text_or_agents)
    if not members:
        raise FormulaError("group must be nonempty")
    return frozenset(members)


__all__ = [
    "Atom", "Top", "Not", "And", "Tri", "Box", "Formula", "TOP", "BOTTOM",
    "neg", "conj", "disj", "implies", "iff", "conj_all", "disj_all", "diamond",
    "disagree", "is_inner", "subformula_closure", "node_count", "size",
    "modal_depth", "atoms_of", "agents_of", "render", "parse", "parse_inner",
    "ParseError", "FormulaError", "sort_key", "group_of", "agent_key",
]
