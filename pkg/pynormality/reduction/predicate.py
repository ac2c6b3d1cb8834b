"""
A small language for the predicate `C(x, y)` over positive integers.

    expr       := or
    or         := and { "|" and }
    and        := unary { "&" unary }
    unary      := "!" unary | atom
    atom       := "true" | "false" | comparison | "(" expr ")"
    comparison := "div" "(" sum "," sum ")" | sum rel sum
    rel        := "=" | "!=" | "<" | "<=" | ">" | ">="
    sum        := term { ("+" | "-") term }
    term       := factor { ("*" | "%") factor }
    factor     := integer | "x" | "y" | "(" sum ")"

`div(a, b)` holds when `b` divides `a`. `%` is floored modulo. A zero divisor
is a run-time error, or a parse error when it is the literal `0`.
"""
import operator
from dataclasses import dataclass
import pyparsing as pp
from pynormality.general.errors import PredicateSyntaxError, PredicateEvaluationError

pp.ParserElement.enable_packrat()

@dataclass(frozen = True)
class BoolConst:
    value: bool

    def evaluate(self, x, y):
        return self.value

    def __str__(self):
        return "true" if self.value else "false"

@dataclass(frozen = True)
class Const:
    value: int

    def evaluate(self, x, y):
        return self.value

    def __str__(self):
        return str(self.value)

@dataclass(frozen = True)
class Var:
    name: str

    def evaluate(self, x, y):
        return x if self.name == "x" else y

    def __str__(self):
        return self.name

def _modulo(a, b):
    if b == 0:
        raise PredicateEvaluationError(f"Modulo by zero (`{a} % 0`).")
    return a % b

ARITHMETIC = {"+": operator.add, "-": operator.sub, "*": operator.mul, "%": _modulo}
RELATIONS = {"=": operator.eq, "!=": operator.ne, "<": operator.lt,
             "<=": operator.le, ">": operator.gt, ">=": operator.ge}

@dataclass(frozen = True)
class BinOp:
    op: str
    lhs: object
    rhs: object

    def evaluate(self, x, y):
        return ARITHMETIC[self.op](self.lhs.evaluate(x, y), self.rhs.evaluate(x, y))

    def __str__(self):
        return f"({self.lhs} {self.op} {self.rhs})"

@dataclass(frozen = True)
class Compare:
    op: str
    lhs: object
    rhs: object

    def evaluate(self, x, y):
        return RELATIONS[self.op](self.lhs.evaluate(x, y), self.rhs.evaluate(x, y))

    def __str__(self):
        return f"{self.lhs} {self.op} {self.rhs}"

@dataclass(frozen = True)
class Divides:
    """`div(value, divisor)`."""
    value: object
    divisor: object

    def evaluate(self, x, y):
        a, b = self.value.evaluate(x, y), self.divisor.evaluate(x, y)
        if b == 0:
            raise PredicateEvaluationError(f"Divisibility by zero (`div({a}, 0)`).")
        return a % b == 0

    def __str__(self):
        return f"div({self.value}, {self.divisor})"

@dataclass(frozen = True)
class Not:
    arg: object

    def evaluate(self, x, y):
        return not self.arg.evaluate(x, y)

    def __str__(self):
        return f"!{self.arg}"

@dataclass(frozen = True)
class And:
    args: tuple

    def evaluate(self, x, y):
        return all(a.evaluate(x, y) for a in self.args)

    def __str__(self):
        return "(" + " & ".join(str(a) for a in self.args) + ")"

@dataclass(frozen = True)
class Or:
    args: tuple

    def evaluate(self, x, y):
        return any(a.evaluate(x, y) for a in self.args)

    def __str__(self):
        return "(" + " | ".join(str(a) for a in self.args) + ")"

@dataclass(frozen = True)
class Predicate:
    """Parsed predicate, call it as `C(x, y)`."""
    tree: object
    text: str = ""

    def __call__(self, x, y):
        return bool(self.tree.evaluate(x, y))

    def __str__(self):
        return self.text or str(self.tree)

def _fold_arithmetic(s, loc, tokens):
    node = tokens[0]
    for op, rhs in zip(tokens[1::2], tokens[2::2]):
        if op == "%" and rhs == Const(0):
            raise pp.ParseFatalException(s, loc, "modulo by the constant 0")
        node = BinOp(op, node, rhs)
    return node

def _fold_logic(cls):
    def action(tokens):
        return tokens[0] if len(tokens) == 1 else cls(tuple(tokens))
    return action

def _unknown(s, loc, tokens):
    raise pp.ParseFatalException(s, loc, f"unknown identifier `{tokens[0]}`")

def _divides(s, loc, tokens):
    if tokens[1] == Const(0):
        raise pp.ParseFatalException(s, loc, "divisibility by the constant 0")
    return Divides(tokens[0], tokens[1])

def make_grammar():
    lpar, rpar, comma = map(pp.Suppress, "(),")

    integer = pp.Word(pp.nums).set_parse_action(lambda t: Const(int(t[0])))
    variable = (pp.Keyword("x") | pp.Keyword("y")).set_parse_action(lambda t: Var(t[0]))
    reserved = pp.MatchFirst([pp.Keyword(x) for x in ("true", "false", "div", "x", "y")])
    identifier = (~reserved + pp.Word(pp.alphas + "_", pp.alphanums + "_")).set_parse_action(_unknown)

    sum_expr = pp.Forward()
    factor = integer | variable | (lpar + sum_expr + rpar) | identifier
    term = (factor + pp.ZeroOrMore(pp.one_of("* %") + factor)).set_parse_action(_fold_arithmetic)
    sum_expr <<= (term + pp.ZeroOrMore(pp.one_of("+ -") + term)).set_parse_action(_fold_arithmetic)

    relation = pp.one_of("= != <= >= < >")
    div_call = (pp.Suppress(pp.Keyword("div")) + lpar + sum_expr + comma + sum_expr + rpar).set_parse_action(_divides)
    comparison = div_call | (sum_expr + relation + sum_expr).set_parse_action(lambda t: Compare(t[1], t[0], t[2]))

    expr = pp.Forward()
    literal = (pp.Keyword("true") | pp.Keyword("false")).set_parse_action(lambda t: BoolConst(t[0] == "true"))
    atom = literal | comparison | (lpar + expr + rpar)
    unary = pp.Forward()
    unary <<= (pp.Suppress("!") + unary).set_parse_action(lambda t: Not(t[0])) | atom
    conjunction = (unary + pp.ZeroOrMore(pp.Suppress("&") + unary)).set_parse_action(_fold_logic(And))
    disjunction = (conjunction + pp.ZeroOrMore(pp.Suppress("|") + conjunction)).set_parse_action(_fold_logic(Or))
    expr <<= disjunction
    return expr

GRAMMAR = make_grammar()

def parse_predicate(text):
    """Parse predicate text.

    Parameters
    ----------
    text : str
        Predicate in the grammar of this module.

    Returns
    -------
    Predicate
        Callable predicate.
    """
    try:
        tree = GRAMMAR.parse_string(text, parse_all = True)[0]
    except pp.ParseBaseException as e:
        raise PredicateSyntaxError(e.msg, text = text, line = e.lineno, col = e.col) from None
    return Predicate(tree, text.strip())

BUILTINS = {
    "true": Predicate(BoolConst(True), "true"),
    "false": Predicate(BoolConst(False), "false"),
}
