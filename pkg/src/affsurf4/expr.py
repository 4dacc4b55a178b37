"""Closed-form expression language for curves and immersions.

Grammar (lowest to highest precedence):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' exponent)?        # right-associative
    exponent:= '-'? NUMBER ('^' exponent)?
    atom    := NUMBER | 'u' | 'v' | '(' expr ')' | FUNC '(' expr ')'

Exponents are numeric literals (possibly chained, e.g. ``u^2^3`` is
``u^(2^3)``), so lifting to jets stays single-valued.  Unary minus binds
looser than '^': ``-u^2`` is ``-(u^2)``.  There is no implicit
multiplication.  Numeric literals are decimal with an optional exponent
part.
"""

import re
from dataclasses import dataclass

from .errors import DegenerateDivisor, ExprSyntaxError, UnboundVariable
from .jets import FUNCTIONS, powr

__all__ = [
    "Literal", "Var", "Unary", "Binary", "Call",
    "parse", "evaluate", "to_source", "variables",
    "CurveDef", "SurfaceDef",
]


@dataclass(frozen=True)
class Literal:
    value: float


@dataclass(frozen=True)
class Var:
    name: str  # "u" or "v"


@dataclass(frozen=True)
class Unary:
    op: str  # "-"
    arg: object


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_VARIABLES = ("u", "v")


def _tokenize(source):
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.end() == m.start():
            stripped = source[pos:].lstrip()
            if not stripped:
                break
            off = n - len(stripped)
            raise ExprSyntaxError(f"unexpected character {stripped[0]!r}", off,
                                  {"number", "identifier", "operator"})
        kind = m.lastgroup
        text = m.group(kind)
        tokens.append((kind, text, m.end() - len(text)))
        pos = m.end()
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        kind, text, off = self.peek()
        what = repr(text) if text else "end of input"
        raise ExprSyntaxError(f"unexpected {what}", off, expected)

    def expect_op(self, op):
        kind, text, off = self.peek()
        if kind == "op" and text == op:
            return self.advance()
        self.fail({op})

    def expr(self):
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = Binary(text, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = Binary(text, node, self.unary())
            else:
                return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Unary("-", self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            node = Binary("^", node, self.exponent())
        return node

    def exponent(self):
        kind, text, _ = self.peek()
        negate = False
        if kind == "op" and text == "-":
            self.advance()
            negate = True
            kind, text, _ = self.peek()
        if kind != "num":
            self.fail({"number"})
        self.advance()
        node = Literal(float(text))
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            node = Binary("^", node, self.exponent())
        return Unary("-", node) if negate else node

    def atom(self):
        kind, text, off = self.peek()
        if kind == "num":
            self.advance()
            return Literal(float(text))
        if kind == "ident":
            self.advance()
            if text in _VARIABLES:
                return Var(text)
            if text in FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            raise ExprSyntaxError(f"unknown identifier {text!r}", off,
                                  set(_VARIABLES) | set(FUNCTIONS))
        if kind == "op" and text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        self.fail({"number", "u", "v", "(", "function"})


def parse(source):
    """Parse an expression, returning its Ast or raising ExprSyntaxError."""
    p = _Parser(_tokenize(source))
    node = p.expr()
    kind, text, off = p.peek()
    if kind != "eof":
        raise ExprSyntaxError(f"trailing input {text!r}", off, {"end of input"})
    return node


def _const_value(node):
    """Fold a literal-only subtree (exponents) to a float."""
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Unary):
        return -_const_value(node.arg)
    if isinstance(node, Binary) and node.op == "^":
        return _const_value(node.left) ** _const_value(node.right)
    raise ExprSyntaxError("exponent must be a numeric literal", 0, {"number"})


def evaluate(node, binding):
    """Evaluate an Ast over plain reals or jets.

    ``binding`` maps variable names to scalars; all bound scalars must share
    one kind (float, Jet1 or Jet2) and order.
    """
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Var):
        try:
            return binding[node.name]
        except KeyError:
            raise UnboundVariable(f"variable {node.name!r} is not bound") from None
    if isinstance(node, Unary):
        return -evaluate(node.arg, binding)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](evaluate(node.arg, binding))
    if isinstance(node, Binary):
        if node.op == "^":
            return powr(evaluate(node.left, binding), _const_value(node.right))
        a = evaluate(node.left, binding)
        b = evaluate(node.right, binding)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        try:
            return a / b
        except ZeroDivisionError:
            raise DegenerateDivisor("division by zero") from None
    raise TypeError(f"not an Ast node: {node!r}")


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def to_source(node):
    """Pretty-print an Ast; reparsing yields a structurally identical tree."""
    return _print(node, 0)


def _print(node, parent_prec):
    if isinstance(node, Literal):
        text = repr(node.value)
        return text[:-2] if text.endswith(".0") else text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({_print(node.arg, 0)})"
    if isinstance(node, Unary):
        inner = _print(node.arg, _PREC["neg"])
        text = f"-{inner}"
        return f"({text})" if parent_prec > _PREC["neg"] else text
    if isinstance(node, Binary):
        prec = _PREC[node.op]
        if node.op == "^":
            left = _print(node.left, prec + 1)   # base must stay an atom
            text = f"{left}^{_print_exponent(node.right)}"
        else:
            left = _print(node.left, prec)
            right = _print(node.right, prec + 1)  # left-associative
            text = f"{left} {node.op} {right}" if node.op in "+-" else f"{left}{node.op}{right}"
        return f"({text})" if parent_prec > prec or (parent_prec == prec and node.op in "+-*/") else text
    raise TypeError(f"not an Ast node: {node!r}")


def _print_exponent(node):
    # matches the exponent grammar: '-'? NUMBER ('^' exponent)?
    if isinstance(node, Literal):
        return _print(node, 0)
    if isinstance(node, Unary):
        return f"-{_print_exponent(node.arg)}"
    if isinstance(node, Binary) and node.op == "^":
        return f"{_print(node.left, 0)}^{_print_exponent(node.right)}"
    raise TypeError(f"exponent subtree is not literal-only: {node!r}")


def variables(node):
    """Set of variable names occurring in an Ast."""
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Unary):
        return variables(node.arg)
    if isinstance(node, Call):
        return variables(node.arg)
    if isinstance(node, Binary):
        return variables(node.left) | variables(node.right)
    return set()


class CurveDef:
    """Four component expressions in u, defining a curve in R^4."""

    def __init__(self, components):
        components = tuple(components)
        if len(components) != 4:
            raise ValueError(f"a curve needs 4 components, got {len(components)}")
        for k, ast in enumerate(components):
            extra = variables(ast) - {"u"}
            if extra:
                raise ValueError(f"curve component {k+1} uses {sorted(extra)}; only u is allowed")
        self.components = components

    @classmethod
    def from_strings(cls, sources):
        return cls([parse(s) for s in sources])

    def at(self, u_jet):
        """Evaluate all components at a scalar or jet value of u."""
        return [evaluate(ast, {"u": u_jet}) for ast in self.components]


class SurfaceDef:
    """An immersion x(u, v) in R^4, optionally with transversal fields."""

    def __init__(self, components, xi1=None, xi2=None):
        components = tuple(components)
        if len(components) != 4:
            raise ValueError(f"a surface needs 4 components, got {len(components)}")
        if (xi1 is None) != (xi2 is None):
            raise ValueError("either both transversal fields are given or neither")
        if xi1 is not None:
            xi1 = tuple(xi1)
            xi2 = tuple(xi2)
            if len(xi1) != 4 or len(xi2) != 4:
                raise ValueError("transversal fields need 4 components each")
        self.components = components
        self.xi1 = xi1
        self.xi2 = xi2

    @classmethod
    def from_strings(cls, sources, xi1=None, xi2=None):
        return cls([parse(s) for s in sources],
                   None if xi1 is None else [parse(s) for s in xi1],
                   None if xi2 is None else [parse(s) for s in xi2])

    @property
    def has_transversal(self):
        return self.xi1 is not None

    def at(self, u_jet, v_jet):
        binding = {"u": u_jet, "v": v_jet}
        return [evaluate(ast, binding) for ast in self.components]

    def transversal_at(self, u_jet, v_jet):
        if not self.has_transversal:
            raise ValueError("surface has no transversal fields")
        binding = {"u": u_jet, "v": v_jet}
        return ([evaluate(ast, binding) for ast in self.xi1],
                [evaluate(ast, binding) for ast in self.xi2])
