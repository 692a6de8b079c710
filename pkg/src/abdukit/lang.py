"""Many-sorted two-level language: alphabets, terms, literals, formulae.

The language is second-order only in a restricted sense: arguments of
second-order predicate symbols are first-order literals (or second-order
variables standing for them).  There are no function symbols.

Surface grammar
---------------
::

    formula  := disj ( "->" formula )?                  # right assoc, macro
    disj     := conj ( "|" conj )*
    conj     := unary ( "&" unary )*                    # macro
    unary    := "!" unary | quantifier | atom
    quantifier := ("exists" | "forall") binder "." formula
    binder   := NAME ":" NAME      # first-order variable with sort
              | NAME               # second-order variable
    atom     := "true" | "false"                        # macros
              | "(" formula ")" ( "==" soterm )?        # parenthesised literal
                                                        # may start a 2nd-order eq
              | NAME "(" args ")" ( "==" soterm )?      # predicate or R atom
              | term "=" term                           # first-order equality
              | NAME                                    # second-order variable
    soterm   := "!"? NAME "(" terms ")" | NAME          # literal or 2nd-order var
    term     := NAME ":" NAME | NAME                    # sorted var / constant

First-order variables always carry a sort annotation (``x:comp``); a bare
name is a constant when declared, otherwise a second-order variable.  Names
may contain hyphens (``Cause-Effect``); ``->`` is still tokenised as the
implication arrow.

Derived connectives (``&``, ``->``, ``forall``, ``true``, ``false``) are
expanded by the parser and never stored in an AST.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union


class LanguageError(Exception):
    """Base error for alphabet and formula problems."""


class FormulaSyntaxError(LanguageError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SortError(LanguageError):
    """Raised when a parsed formula cannot be well-sorted."""


_KEYWORDS = {"exists", "forall", "true", "false"}


# ---------------------------------------------------------------------------
# Alphabet


@dataclass(frozen=True)
class Alphabet:
    """Finite stock of sorts, constants and predicate symbols.

    ``predicates`` maps a first-order predicate name to the tuple of its
    argument sorts; ``second_order`` maps a second-order predicate name to
    its arity (>= 1).  Variables are not declared: any undeclared name is
    available as a variable.
    """

    sorts: tuple[str, ...]
    constants: dict[str, tuple[str, ...]]
    predicates: dict[str, tuple[str, ...]]
    second_order: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.sorts)) != len(self.sorts):
            raise LanguageError("duplicate sort names")
        if not self.predicates:
            raise LanguageError("alphabet needs at least one predicate")
        for sort, names in self.constants.items():
            if sort not in self.sorts:
                raise LanguageError(f"constants declared for unknown sort {sort!r}")
            if len(set(names)) != len(names):
                raise LanguageError(f"duplicate constant names in sort {sort!r}")
        for pred, argsorts in self.predicates.items():
            for s in argsorts:
                if s not in self.sorts:
                    raise LanguageError(f"predicate {pred!r} uses unknown sort {s!r}")
        for rel, arity in self.second_order.items():
            if arity < 1:
                raise LanguageError(f"second-order predicate {rel!r} needs arity >= 1")
        # Names must be unambiguous across kinds for parsing.
        seen: dict[str, str] = {}
        for kind, names in (
            ("sort", self.sorts),
            ("constant", [n for ns in self.constants.values() for n in ns]),
            ("predicate", self.predicates),
            ("second-order predicate", self.second_order),
        ):
            for name in names:
                if name in _KEYWORDS:
                    raise LanguageError(f"{kind} name {name!r} is a keyword")
                if kind != "sort" and name in seen and seen[name] != kind:
                    raise LanguageError(f"name {name!r} used as both {seen[name]} and {kind}")
                if kind != "sort":
                    seen[name] = kind

    def constant_sort(self, name: str) -> Optional[str]:
        for sort, names in self.constants.items():
            if name in names:
                return sort
        return None

    def max_predicate_arity(self) -> int:
        return max(len(a) for a in self.predicates.values())

    def first_false_witness(self) -> tuple[str, Optional[str]]:
        """Sort and constant used by the ``true``/``false`` macros."""
        sort = self.sorts[0]
        names = self.constants.get(sort, ())
        return sort, (names[0] if names else None)


# ---------------------------------------------------------------------------
# Terms and literals


@dataclass(frozen=True, order=True)
class Var:
    name: str
    sort: str

    def __str__(self):
        return f"{self.name}:{self.sort}"


@dataclass(frozen=True, order=True)
class Const:
    name: str
    sort: str

    def __str__(self):
        return self.name


Term = Union[Var, Const]


@dataclass(frozen=True)
class PredAtom:
    pred: str
    args: tuple[Term, ...]

    def __str__(self):
        return f"{self.pred}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class EqAtom:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{self.lhs} = {self.rhs}"


Atom = Union[PredAtom, EqAtom]


@dataclass(frozen=True)
class Literal:
    """A signed atom.  Equality literals are legal but cannot be arguments
    of second-order predicates (their interpretation there is undefined)."""

    atom: Atom
    positive: bool = True

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    @property
    def is_equality(self) -> bool:
        return isinstance(self.atom, EqAtom)

    def __str__(self):
        if self.positive:
            return str(self.atom)
        if isinstance(self.atom, EqAtom):
            return f"!({self.atom})"
        return f"!{self.atom}"


@dataclass(frozen=True)
class SOVar:
    """Second-order variable, usable as a second-order term."""

    name: str

    def __str__(self):
        return self.name


SOTerm = Union[Literal, SOVar]


# ---------------------------------------------------------------------------
# Formulae (core connectives only)


@dataclass(frozen=True)
class Lit:
    literal: Literal


@dataclass(frozen=True)
class SOVarRef:
    name: str


@dataclass(frozen=True)
class SOEq:
    lhs: SOTerm
    rhs: SOTerm


@dataclass(frozen=True)
class SOAtom:
    rel: str
    args: tuple[SOTerm, ...]


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Or:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class ExistsFO:
    var: Var
    body: "Formula"


@dataclass(frozen=True)
class ExistsSO:
    var: str
    body: "Formula"


Formula = Union[Lit, SOVarRef, SOEq, SOAtom, Not, Or, ExistsFO, ExistsSO]

#: A sentence is a formula without free variables; enforced by helpers, not
#: by the type system.
Sentence = Formula


# ---------------------------------------------------------------------------
# Derived connectives (expanded on construction, never stored)


def neg(phi: Formula) -> Formula:
    """Negation; folds onto positive literals so `!p(c)` stays one node."""
    if isinstance(phi, Lit) and phi.literal.positive:
        return Lit(phi.literal.negate())
    return Not(phi)


def disj(lhs: Formula, rhs: Formula) -> Formula:
    return Or(lhs, rhs)


def conj(lhs: Formula, rhs: Formula) -> Formula:
    return neg(Or(neg(lhs), neg(rhs)))


def impl(lhs: Formula, rhs: Formula) -> Formula:
    return Or(neg(lhs), rhs)


def iff(lhs: Formula, rhs: Formula) -> Formula:
    return conj(impl(lhs, rhs), impl(rhs, lhs))


def forall_fo(var: Var, body: Formula) -> Formula:
    return neg(ExistsFO(var, neg(body)))


def forall_so(name: str, body: Formula) -> Formula:
    return neg(ExistsSO(name, neg(body)))


def true_formula(alphabet: Alphabet) -> Formula:
    sort, const = alphabet.first_false_witness()
    if const is None:
        x = Var("x", sort)
        return ExistsFO(x, Lit(Literal(EqAtom(x, x))))
    c = Const(const, sort)
    refl = Lit(Literal(EqAtom(c, c)))
    return Or(refl, neg(refl))


def false_formula(alphabet: Alphabet) -> Formula:
    sort, const = alphabet.first_false_witness()
    if const is None:
        x = Var("x", sort)
        return ExistsFO(x, Lit(Literal(EqAtom(x, x), positive=False)))
    c = Const(const, sort)
    refl = Lit(Literal(EqAtom(c, c)))
    return conj(refl, neg(refl))


def conj_all(formulas: Iterable[Formula], alphabet: Alphabet) -> Formula:
    """Left-fold conjunction of a sequence; empty sequence is ``true``."""
    items = list(formulas)
    if not items:
        return true_formula(alphabet)
    acc = items[0]
    for f in items[1:]:
        acc = conj(acc, f)
    return acc


# ---------------------------------------------------------------------------
# Traversal: free variables, closure


def _literal_vars(lit: Literal) -> Iterator[Var]:
    if isinstance(lit.atom, PredAtom):
        for t in lit.atom.args:
            if isinstance(t, Var):
                yield t
    else:
        for t in (lit.atom.lhs, lit.atom.rhs):
            if isinstance(t, Var):
                yield t


def _soterm_vars(term: SOTerm) -> tuple[set[Var], set[str]]:
    if isinstance(term, SOVar):
        return set(), {term.name}
    return set(_literal_vars(term)), set()


def free_variables(phi: Formula) -> tuple[frozenset[Var], frozenset[str]]:
    """Free first- and second-order variables of a formula."""

    def walk(f: Formula, bound1: frozenset[Var], bound2: frozenset[str]):
        if isinstance(f, Lit):
            return {v for v in _literal_vars(f.literal) if v not in bound1}, set()
        if isinstance(f, SOVarRef):
            return set(), ({f.name} if f.name not in bound2 else set())
        if isinstance(f, (SOEq, SOAtom)):
            terms = (f.lhs, f.rhs) if isinstance(f, SOEq) else f.args
            fo: set[Var] = set()
            so: set[str] = set()
            for t in terms:
                tfo, tso = _soterm_vars(t)
                fo |= tfo
                so |= tso
            return {v for v in fo if v not in bound1}, {x for x in so if x not in bound2}
        if isinstance(f, Not):
            return walk(f.body, bound1, bound2)
        if isinstance(f, Or):
            lfo, lso = walk(f.lhs, bound1, bound2)
            rfo, rso = walk(f.rhs, bound1, bound2)
            return lfo | rfo, lso | rso
        if isinstance(f, ExistsFO):
            return walk(f.body, bound1 | {f.var}, bound2)
        if isinstance(f, ExistsSO):
            return walk(f.body, bound1, bound2 | {f.var})
        raise TypeError(f"not a formula: {f!r}")

    fo, so = walk(phi, frozenset(), frozenset())
    return frozenset(fo), frozenset(so)


def is_sentence(phi: Formula) -> bool:
    fo, so = free_variables(phi)
    return not fo and not so


def variable_order_key(v: Var) -> tuple[str, str]:
    # Canonical variable order: sort name first, then variable name.
    return (v.sort, v.name)


def existential_closure(phi: Formula) -> Sentence:
    """Prefix an existential quantifier for every free variable.

    First-order variables come first in canonical (sort, name) order,
    then second-order variables by name; the result is a sentence.
    """
    fo, so = free_variables(phi)
    body = phi
    for name in sorted(so, reverse=True):
        body = ExistsSO(name, body)
    for v in sorted(fo, key=variable_order_key, reverse=True):
        body = ExistsFO(v, body)
    return body


# ---------------------------------------------------------------------------
# Well-sortedness


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self):
        return f"[{self.code}] {self.message}"


@dataclass(frozen=True)
class SortVerdict:
    ok: bool
    diagnostics: tuple[Diagnostic, ...] = ()

    def __bool__(self):
        return self.ok


def _check_term(t: Term, expected: str, alphabet: Alphabet, out: list[Diagnostic],
                var_sorts: dict[str, str]):
    if t.sort not in alphabet.sorts:
        out.append(Diagnostic("unknown-sort", f"term {t} has undeclared sort {t.sort!r}"))
        return
    if isinstance(t, Const):
        declared = alphabet.constant_sort(t.name)
        if declared is None:
            out.append(Diagnostic("unknown-constant", f"constant {t.name!r} not declared"))
        elif declared != t.sort:
            out.append(Diagnostic("sort-mismatch",
                                  f"constant {t.name!r} has sort {declared!r}, not {t.sort!r}"))
    else:
        if alphabet.constant_sort(t.name) is not None:
            out.append(Diagnostic("name-clash", f"variable {t.name!r} shadows a constant"))
        seen = var_sorts.setdefault(t.name, t.sort)
        if seen != t.sort:
            out.append(Diagnostic("sort-mismatch",
                                  f"variable {t.name!r} used with sorts {seen!r} and {t.sort!r}"))
    if t.sort != expected:
        out.append(Diagnostic("sort-mismatch", f"term {t} where sort {expected!r} expected"))


def _check_literal(lit: Literal, alphabet: Alphabet, out: list[Diagnostic],
                   var_sorts: dict[str, str]):
    atom = lit.atom
    if isinstance(atom, PredAtom):
        argsorts = alphabet.predicates.get(atom.pred)
        if argsorts is None:
            out.append(Diagnostic("unknown-predicate", f"predicate {atom.pred!r} not declared"))
            return
        if len(argsorts) != len(atom.args):
            out.append(Diagnostic("arity-mismatch",
                                  f"{atom.pred!r} expects {len(argsorts)} args, got {len(atom.args)}"))
            return
        for t, s in zip(atom.args, argsorts):
            _check_term(t, s, alphabet, out, var_sorts)
    else:
        if atom.lhs.sort != atom.rhs.sort:
            out.append(Diagnostic("sort-mismatch",
                                  f"equality between sorts {atom.lhs.sort!r} and {atom.rhs.sort!r}"))
        _check_term(atom.lhs, atom.lhs.sort, alphabet, out, var_sorts)
        _check_term(atom.rhs, atom.lhs.sort, alphabet, out, var_sorts)


def _check_soterm(t: SOTerm, alphabet: Alphabet, out: list[Diagnostic],
                  var_sorts: dict[str, str]):
    if isinstance(t, SOVar):
        return
    if t.is_equality:
        # Interpretation of an equality literal as a second-order term is
        # undefined; rejected here rather than silently guessed.
        out.append(Diagnostic("equality-as-so-argument",
                              f"equality literal {t} cannot be a second-order argument"))
        return
    _check_literal(t, alphabet, out, var_sorts)


def well_sorted(phi: Formula, alphabet: Alphabet) -> SortVerdict:
    """Check predicate/R arities and sorts; never raises."""
    out: list[Diagnostic] = []
    var_sorts: dict[str, str] = {}

    def walk(f: Formula):
        if isinstance(f, Lit):
            _check_literal(f.literal, alphabet, out, var_sorts)
        elif isinstance(f, SOVarRef):
            pass
        elif isinstance(f, SOEq):
            _check_soterm(f.lhs, alphabet, out, var_sorts)
            _check_soterm(f.rhs, alphabet, out, var_sorts)
        elif isinstance(f, SOAtom):
            arity = alphabet.second_order.get(f.rel)
            if arity is None:
                out.append(Diagnostic("unknown-predicate",
                                      f"second-order predicate {f.rel!r} not declared"))
            elif arity != len(f.args):
                out.append(Diagnostic("arity-mismatch",
                                      f"{f.rel!r} expects {arity} args, got {len(f.args)}"))
            for t in f.args:
                _check_soterm(t, alphabet, out, var_sorts)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, Or):
            walk(f.lhs)
            walk(f.rhs)
        elif isinstance(f, ExistsFO):
            _check_term(f.var, f.var.sort, alphabet, out, var_sorts)
            walk(f.body)
        elif isinstance(f, ExistsSO):
            walk(f.body)
        else:
            out.append(Diagnostic("not-a-formula", repr(f)))

    walk(phi)
    return SortVerdict(not out, tuple(out))


# ---------------------------------------------------------------------------
# Serialisation (defines the normalised surface text)


def serialize_term(t: Term) -> str:
    return str(t)


def serialize_literal(lit: Literal) -> str:
    return str(lit)


def _serialize_soterm(t: SOTerm) -> str:
    if isinstance(t, SOVar):
        return t.name
    if not t.positive:
        return f"({t})"
    return str(t)


def serialize(phi: Formula) -> str:
    """Deterministic text form; ``parse_formula`` inverts it exactly."""
    if isinstance(phi, Lit):
        return str(phi.literal)
    if isinstance(phi, SOVarRef):
        return phi.name
    if isinstance(phi, SOEq):
        return f"({_serialize_soterm(phi.lhs)} == {_serialize_soterm(phi.rhs)})"
    if isinstance(phi, SOAtom):
        return f"{phi.rel}({','.join(_serialize_soterm(a) for a in phi.args)})"
    if isinstance(phi, Not):
        body = phi.body
        if isinstance(body, (SOVarRef, SOAtom)) or (
            isinstance(body, Lit) and not body.literal.is_equality and body.literal.positive
        ):
            return f"!{serialize(body)}"
        return f"!({serialize(body)})"
    if isinstance(phi, Or):
        lhs = serialize(phi.lhs)
        if isinstance(phi.lhs, (ExistsFO, ExistsSO)):
            # A quantifier body extends maximally right; keep it from
            # swallowing the second disjunct.
            lhs = f"({lhs})"
        return f"({lhs} | {serialize(phi.rhs)})"
    if isinstance(phi, ExistsFO):
        return f"exists {phi.var} . {serialize(phi.body)}"
    if isinstance(phi, ExistsSO):
        return f"exists {phi.var} . {serialize(phi.body)}"
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# Parsing


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<eq2>==)
  | (?P<name>[A-Za-z0-9_]+(?:-(?=[A-Za-z0-9_])[A-Za-z0-9_]+)*)
  | (?P<op>[()!|&=:.,])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'name', 'op', 'arrow', 'eq2', 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[i]!r}", i)
        i = m.end()
        if m.lastgroup == "ws":
            continue
        tokens.append(_Token(m.lastgroup, m.group(), m.start()))
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, alphabet: Alphabet):
        self.tokens = _tokenize(text)
        self.alphabet = alphabet
        self.i = 0
        self.var_sorts: dict[str, str] = {}

    # -- token helpers

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise FormulaSyntaxError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                                     tok.pos)
        return tok

    def error(self, message: str) -> FormulaSyntaxError:
        return FormulaSyntaxError(message, self.peek().pos)

    # -- grammar

    def parse(self) -> Formula:
        phi = self.formula()
        if self.peek().kind != "end":
            raise self.error(f"trailing input {self.peek().text!r}")
        return phi

    def formula(self) -> Formula:
        lhs = self.disjunction()
        if self.peek().kind == "arrow":
            self.next()
            return impl(lhs, self.formula())
        return lhs

    def disjunction(self) -> Formula:
        lhs = self.conjunction()
        while self.peek().text == "|":
            self.next()
            lhs = Or(lhs, self.conjunction())
        return lhs

    def conjunction(self) -> Formula:
        lhs = self.unary()
        while self.peek().text == "&":
            self.next()
            lhs = conj(lhs, self.unary())
        return lhs

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.text == "!":
            self.next()
            return neg(self.unary())
        if tok.text in ("exists", "forall"):
            return self.quantifier()
        return self.atom()

    def quantifier(self) -> Formula:
        kw = self.next().text
        name = self.name_token("quantified variable")
        if self.peek().text == ":":
            self.next()
            sort = self.name_token("sort name")
            var = self.first_order_var(name, sort)
            self.expect(".")
            body = self.formula()
            return ExistsFO(var, body) if kw == "exists" else forall_fo(var, body)
        if self.alphabet.constant_sort(name) is not None:
            raise self.error(f"cannot quantify over constant {name!r}")
        self.expect(".")
        body = self.formula()
        return ExistsSO(name, body) if kw == "exists" else forall_so(name, body)

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.text == "true":
            self.next()
            return true_formula(self.alphabet)
        if tok.text == "false":
            self.next()
            return false_formula(self.alphabet)
        if tok.text == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            if self.peek().kind == "eq2":
                if not isinstance(inner, Lit):
                    raise self.error("left side of '==' must be a literal or second-order variable")
                self.next()
                return SOEq(inner.literal, self.so_term())
            return inner
        if tok.kind != "name":
            raise self.error(f"expected a formula, found {tok.text or 'end of input'!r}")
        name = self.next().text
        if self.peek().text == "(":
            return self.application(name)
        if self.peek().text == ":":
            self.next()
            sort = self.name_token("sort name")
            lhs: Term = self.first_order_var(name, sort)
            return self.equality(lhs)
        csort = self.alphabet.constant_sort(name)
        if csort is not None:
            return self.equality(Const(name, csort))
        if name in self.alphabet.predicates or name in self.alphabet.second_order:
            raise self.error(f"predicate {name!r} used without arguments")
        # A bare undeclared name is a second-order variable.
        if self.peek().kind == "eq2":
            self.next()
            return SOEq(SOVar(name), self.so_term())
        return SOVarRef(name)

    def application(self, name: str) -> Formula:
        if name in self.alphabet.predicates:
            lit = self.predicate_literal(name)
            if self.peek().kind == "eq2":
                self.next()
                return SOEq(lit, self.so_term())
            return Lit(lit)
        if name in self.alphabet.second_order:
            self.expect("(")
            args = [self.so_term()]
            while self.peek().text == ",":
                self.next()
                args.append(self.so_term())
            self.expect(")")
            arity = self.alphabet.second_order[name]
            if arity != len(args):
                raise self.error(f"{name!r} expects {arity} arguments, got {len(args)}")
            return SOAtom(name, tuple(args))
        raise self.error(f"unknown symbol {name!r}")

    def predicate_literal(self, name: str) -> Literal:
        argsorts = self.alphabet.predicates[name]
        self.expect("(")
        args: list[Term] = []
        for k, sort in enumerate(argsorts):
            if k:
                self.expect(",")
            args.append(self.term(sort))
        self.expect(")")
        return Literal(PredAtom(name, tuple(args)))

    def equality(self, lhs: Term) -> Formula:
        self.expect("=")
        rhs = self.term(lhs.sort)
        return Lit(Literal(EqAtom(lhs, rhs)))

    def term(self, expected_sort: str) -> Term:
        name = self.name_token("term")
        if self.peek().text == ":":
            self.next()
            sort = self.name_token("sort name")
            if sort != expected_sort:
                raise self.error(f"term of sort {sort!r} where {expected_sort!r} expected")
            return self.first_order_var(name, sort)
        csort = self.alphabet.constant_sort(name)
        if csort is None:
            raise self.error(f"unknown symbol {name!r} (variables need a ':sort' annotation)")
        if csort != expected_sort:
            raise self.error(f"constant {name!r} has sort {csort!r}, not {expected_sort!r}")
        return Const(name, csort)

    def so_term(self) -> SOTerm:
        if self.peek().text == "(":
            self.next()
            self.expect("!")
            name = self.name_token("predicate")
            if name not in self.alphabet.predicates:
                raise self.error(f"unknown predicate {name!r}")
            lit = self.predicate_literal(name).negate()
            self.expect(")")
            return lit
        name = self.name_token("second-order term")
        if name in self.alphabet.predicates:
            return self.predicate_literal(name)
        if self.alphabet.constant_sort(name) is not None:
            raise self.error(f"constant {name!r} is not a second-order term")
        return SOVar(name)

    # -- leaf helpers

    def name_token(self, what: str) -> str:
        tok = self.next()
        if tok.kind != "name":
            raise FormulaSyntaxError(f"expected {what}, found {tok.text or 'end of input'!r}",
                                     tok.pos)
        return tok.text

    def first_order_var(self, name: str, sort: str) -> Var:
        if sort not in self.alphabet.sorts:
            raise self.error(f"unknown sort {sort!r}")
        csort = self.alphabet.constant_sort(name)
        if csort is not None:
            if csort != sort:
                raise self.error(f"constant {name!r} annotated with wrong sort {sort!r}")
            raise self.error(f"constant {name!r} cannot be used as a variable")
        seen = self.var_sorts.setdefault(name, sort)
        if seen != sort:
            raise self.error(f"variable {name!r} already used with sort {seen!r}")
        return Var(name, sort)


def parse_formula(text: str, alphabet: Alphabet) -> Formula:
    """Parse surface text into a core-connective AST.

    Raises :class:`FormulaSyntaxError` with a position on bad syntax and
    checks sorts while parsing.
    """
    phi = _Parser(text, alphabet).parse()
    verdict = well_sorted(phi, alphabet)
    if not verdict.ok:
        raise SortError("; ".join(str(d) for d in verdict.diagnostics))
    return phi


def parse_sentence(text: str, alphabet: Alphabet) -> Sentence:
    phi = parse_formula(text, alphabet)
    if not is_sentence(phi):
        fo, so = free_variables(phi)
        names = [str(v) for v in sorted(fo, key=variable_order_key)] + sorted(so)
        raise SortError(f"expected a sentence, found free variables: {', '.join(names)}")
    return phi


def parse_literal(text: str, alphabet: Alphabet) -> Literal:
    """Parse a single (possibly negated) literal, e.g. for graph vertices."""
    phi = parse_formula(text, alphabet)
    if not isinstance(phi, Lit):
        raise SortError(f"expected a literal, got {serialize(phi)!r}")
    return phi.literal
