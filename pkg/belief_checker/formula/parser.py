"""
Concrete syntax for formulas

Precedence, tightest first: ``!``, ``&`` (left), ``|`` (left), ``->`` (right). Modal operators
are prefix with a parenthesized argument. The keywords E, C, Ea, Ca, chi, ALW, ACTING,
SHOULD_ACT and MEMBER cannot be used as variable names. Operators nest at most
MAX_FORMULA_DEPTH deep. See doc/grammar.md for the EBNF.
"""

import functools
import logging

from typing import List, Optional

from lark import Lark, Transformer, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError
from lark.lexer import PatternStr

from belief_checker.errors import ContractViolationError, FormulaSyntaxError, UnresolvedIdentifierError
from belief_checker.formula.ast import (
    AgentSet,
    Alw,
    And,
    Atom,
    Believes,
    Chi,
    Common,
    CommonA,
    CommonT,
    Everyone,
    EveryoneA,
    EveryoneT,
    Formula,
    GroupName,
    GroupRef,
    Implies,
    Not,
    Or,
)
from belief_checker.model import Model, flag_variable

logger = logging.getLogger(__name__)

MAX_FORMULA_DEPTH = 100

# rules below the operator level, not counted as nesting
_LEAF_RULES = frozenset({"atom", "variable", "group", "stamp"})

GRAMMAR = r"""
?start: implication

?implication: disjunction
    | disjunction "->" implication          -> implies

?disjunction: conjunction
    | disjunction "|" conjunction           -> or_

?conjunction: unary
    | conjunction "&" unary                 -> and_

?unary: primary
    | "!" unary                             -> not_

?primary: atom
    | "(" implication ")"
    | BELIEF "(" implication ")"            -> believes
    | "E" group "(" implication ")"         -> everyone
    | "C" group "(" implication ")"         -> common
    | "E" stamp group "(" implication ")"   -> everyone_t
    | "C" stamp group "(" implication ")"   -> common_t
    | "Ea" group "(" implication ")"        -> everyone_a
    | "Ca" group "(" implication ")"        -> common_a
    | "chi" group                           -> chi
    | "ALW" "(" implication ")"             -> alw

stamp: "[" "t" ":" NAME "]"

group: "{" "}"
    | "{" NAME ("," NAME)* "}"

atom: variable "=" VALUE

variable: NAME
    | FLAG_KIND "[" NAME "," NAME "]"

FLAG_KIND.2: /(ACTING|SHOULD_ACT|MEMBER)(?![A-Za-z0-9_])/
BELIEF.2: /B_[A-Za-z_][A-Za-z0-9_]*(?=\s*\()/
NAME: /[A-Za-z_][A-Za-z0-9_]*/
VALUE: /[A-Za-z0-9_]+/

%import common.WS
%ignore WS
"""


@functools.cache
def _lark() -> Lark:
    return Lark(GRAMMAR, parser="lalr", lexer="contextual", maybe_placeholders=False)


class _Resolver(Transformer):
    """Build Formula nodes and resolve identifiers against a model (if any)"""

    def __init__(self, model: Optional[Model]):
        super().__init__()
        self.model = model

    # connectives

    def implies(self, items):
        return Implies(items[0], items[1])

    def or_(self, items):
        return Or(items[0], items[1])

    def and_(self, items):
        return And(items[0], items[1])

    def not_(self, items):
        return Not(items[0])

    # modalities

    def believes(self, items):
        token, f = items
        agent = str(token)[2:]
        if self.model is not None and agent not in self.model.agents:
            raise UnresolvedIdentifierError("agent", agent, f"in {token}")
        return Believes(agent, f)

    def everyone(self, items):
        return Everyone(items[0], items[1])

    def common(self, items):
        return Common(items[0], items[1])

    def everyone_t(self, items):
        stamp, group, f = items
        return EveryoneT(group, stamp, f)

    def common_t(self, items):
        stamp, group, f = items
        return CommonT(group, stamp, f)

    def everyone_a(self, items):
        return EveryoneA(items[0], items[1])

    def common_a(self, items):
        return CommonA(items[0], items[1])

    def chi(self, items):
        return Chi(items[0])

    def alw(self, items):
        return Alw(items[0])

    # identifiers

    def stamp(self, items) -> str:
        name = str(items[0])
        if self.model is not None and name not in self.model.timestamps:
            raise UnresolvedIdentifierError("stamp function", name)
        return name

    def group(self, items) -> GroupRef:
        names: List[str] = [str(t) for t in items]
        if not names:
            raise ContractViolationError("empty group {}")
        m = self.model
        if len(names) == 1:
            name = names[0]
            if m is None or name in m.groups:
                g = None if m is None else m.groups[name]
                if g is not None and g.is_rigid and not g.rigid:
                    raise ContractViolationError(f"rigid group {name} has no member")
                return GroupName(name)
        if m is not None:
            for name in names:
                if name not in m.agents:
                    kind = "agent" if len(names) > 1 else "group or agent"
                    raise UnresolvedIdentifierError(kind, name)
        return AgentSet(frozenset(names))

    def variable(self, items) -> str:
        if len(items) == 1:
            name = str(items[0])
            if self.model is not None and name not in self.model.variables:
                raise UnresolvedIdentifierError("variable", name)
            return name
        kind, agent, group = (str(t) for t in items)
        if self.model is not None:
            if agent not in self.model.agents:
                raise UnresolvedIdentifierError("agent", agent, f"in {kind}[{agent},{group}]")
            if group not in self.model.groups:
                raise UnresolvedIdentifierError("group", group, f"in {kind}[{agent},{group}]")
        return flag_variable(kind, agent, group)

    def atom(self, items) -> Atom:
        variable, value = items[0], str(items[1])
        if self.model is not None:
            domain = self.model.domain(variable)
            if value not in domain:
                raise UnresolvedIdentifierError("value", value, f"{variable} ranges over {list(domain)}")
        return Atom(variable, value)


def _describe(name: str) -> str:
    if name == "$END":
        return "end of input"
    try:
        pattern = _lark().get_terminal(name).pattern
    except KeyError:
        return name
    if isinstance(pattern, PatternStr):
        return repr(pattern.value)
    return name.lower()


def _line_col(text: str, offset: int):
    before = text[:offset]
    line = before.count("\n") + 1
    column = offset - (before.rfind("\n") + 1) + 1
    return line, column


def _syntax_error(text: str, e: UnexpectedInput) -> FormulaSyntaxError:
    if isinstance(e, UnexpectedCharacters):
        offset = e.pos_in_stream
        expected = sorted(_describe(t) for t in e.allowed or ())
        found = repr(e.char)
    elif isinstance(e, UnexpectedEOF):
        offset = len(text)
        expected = sorted(_describe(t) for t in e.expected)
        found = "end of input"
    elif isinstance(e, UnexpectedToken):
        at_end = e.token.type == "$END" or e.token.start_pos is None
        offset = len(text) if at_end else e.token.start_pos
        expected = sorted(_describe(t) for t in e.expected)
        found = "end of input" if at_end else repr(str(e.token))
    else:
        offset = getattr(e, "pos_in_stream", None) or 0
        expected, found = [], "?"
    offset = min(max(offset, 0), len(text))
    line, column = _line_col(text, offset)
    return FormulaSyntaxError(offset, line, column, " or ".join(expected) or "nothing", found)


def _nesting(tree: Tree) -> int:
    deepest = 0
    stack = [(tree, 0)]
    while stack:
        node, depth = stack.pop()
        if node.data in _LEAF_RULES:
            continue
        depth += 1
        deepest = max(deepest, depth)
        stack.extend((c, depth) for c in node.children if isinstance(c, Tree))
    return deepest


def parse(text: str, m: Optional[Model] = None) -> Formula:
    """Parse a formula and resolve its identifiers against m

    Args:
        text: formula text, e.g. ``C[t:plan]{Y,Z}(TRAPS=1)``
        m: model providing agents, groups, variables and stamp functions; without a model
           only the syntax is checked and ``{X}`` is read as a group name

    Raises:
        FormulaSyntaxError: syntax fault (position, expected and found tokens)
        UnresolvedIdentifierError: unknown agent, group, variable, value or stamp function
        ContractViolationError: empty rigid group, or operators nested deeper than
            MAX_FORMULA_DEPTH
    """
    try:
        tree = _lark().parse(text)
    except UnexpectedInput as e:
        raise _syntax_error(text, e) from None

    depth = _nesting(tree)
    if depth > MAX_FORMULA_DEPTH:
        raise ContractViolationError(
            f"formula nests {depth} operators deep, at most {MAX_FORMULA_DEPTH} allowed"
        )

    try:
        f = _Resolver(m).transform(tree)
    except VisitError as e:
        raise e.orig_exc from None

    logger.debug("parsed %r", text)
    return f
