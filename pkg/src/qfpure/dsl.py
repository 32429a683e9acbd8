"""Ring-declaration language and polynomial / Witt-expression parsers.

Grammar (whitespace-insensitive, ``#`` starts a comment)::

    decl     := "ring" IDENT "=" "GF(" INT ")" "[" [identlist] "]" [ "/" "(" polylist ")" ] mode
    mode     := "finite" | "graded" | "affine"
    poly     := ["+"|"-"] term (("+"|"-") term)*
    term     := factor (["*"] factor)*
    factor   := atom ["^" INT]
    atom     := INT | IDENT | "(" poly ")"

For ``GF(q)`` with ``q = p^k``, ``k > 1``, the field generator is the reserved
variable ``u`` (a root of the first monic irreducible of degree ``k``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .poly import PolyRing, SparsePoly

FIELD_GENERATOR = "u"
#: "affine" quotients are ungraded and support reducedness checks only
MODES = ("finite", "graded", "affine")

_TOKEN = re.compile(r"\s*(?:(?P<op>GF\(|[-+*^/()\[\],=;])|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9']*))")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(sorted(set(expected)))
        where = f"line {line}, column {col}: " if line else ""
        exp = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{where}{message}{exp}")


@dataclass(frozen=True)
class Token:
    kind: str  # int | ident | op | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        line = line.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos:].strip() == "":
                break
            m = _TOKEN.match(line, pos)
            if not m or m.end() == pos:
                col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
                raise ParseError(f"unexpected character {line[col - 1]!r}", lineno, col)
            kind = m.lastgroup
            start = m.start(kind)
            tokens.append(Token(kind, m.group(kind), lineno, start + 1))
            pos = m.end()
    last = len(text.splitlines()) or 1
    tokens.append(Token("eof", "", last, 0))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at(self, *texts) -> bool:
        return self.tok.kind == "op" and self.tok.text in texts

    def at_word(self, *words) -> bool:
        return self.tok.kind == "ident" and self.tok.text in words

    def error(self, msg, expected=()):
        t = self.tok
        raise ParseError(msg, t.line, t.col, expected)

    def expect(self, text: str) -> Token:
        if self.tok.kind == "op" and self.tok.text == text:
            return self.advance()
        self.error(f"unexpected {self.tok.text or 'end of input'!r}", [repr(text)])

    def expect_word(self, word: str) -> Token:
        if self.at_word(word):
            return self.advance()
        self.error(f"unexpected {self.tok.text or 'end of input'!r}", [repr(word)])

    def expect_kind(self, kind: str) -> Token:
        if self.tok.kind == kind:
            return self.advance()
        self.error(f"unexpected {self.tok.text or 'end of input'!r}", [kind.upper()])

    # polynomials
    def poly(self, ring: PolyRing) -> SparsePoly:
        sign = 1
        if self.at("+", "-"):
            sign = -1 if self.advance().text == "-" else 1
        acc = self.term(ring) * sign
        while self.at("+", "-"):
            op = self.advance().text
            t = self.term(ring)
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self, ring: PolyRing) -> SparsePoly:
        acc = self.factor(ring)
        while True:
            if self.at("*"):
                self.advance()
                acc = acc * self.factor(ring)
            elif self.tok.kind in ("int", "ident") or self.at("("):
                acc = acc * self.factor(ring)
            else:
                return acc

    def factor(self, ring: PolyRing) -> SparsePoly:
        base = self.atom(ring)
        if self.at("^"):
            self.advance()
            e = int(self.expect_kind("int").text)
            base = base ** e
        return base

    def atom(self, ring: PolyRing) -> SparsePoly:
        t = self.tok
        if t.kind == "int":
            self.advance()
            return ring.const(int(t.text))
        if t.kind == "ident":
            if t.text not in ring.names:
                raise ParseError(f"undeclared variable {t.text!r}", t.line, t.col, ring.names)
            self.advance()
            return ring.gen(t.text)
        if self.at("("):
            self.advance()
            inner = self.poly(ring)
            self.expect(")")
            return inner
        self.error(f"unexpected {t.text or 'end of input'!r}", ["INT", "IDENT", "'('"])


def parse_poly(text: str, ring: PolyRing) -> SparsePoly:
    ps = _Parser(text)
    out = ps.poly(ring)
    if ps.tok.kind != "eof":
        ps.error(f"trailing input {ps.tok.text!r}", ["'+'", "'-'", "'*'", "end of input"])
    return out


@dataclass(frozen=True)
class RingDecl:
    name: str
    q: int
    variables: Tuple[str, ...]
    relations: Tuple[SparsePoly, ...]
    mode: str

    @property
    def p(self) -> int:
        from .rings import prime_power

        return prime_power(self.q)[0]

    @property
    def field_degree(self) -> int:
        from .rings import prime_power

        return prime_power(self.q)[1]

    @property
    def all_variables(self) -> Tuple[str, ...]:
        if self.field_degree > 1:
            return (FIELD_GENERATOR,) + self.variables
        return self.variables

    def poly_ring(self) -> PolyRing:
        return PolyRing(self.all_variables, self.p)

    def to_text(self) -> str:
        head = f"ring {self.name} = GF({self.q})[{','.join(self.variables)}]"
        if self.relations:
            head += " / (" + ", ".join(str(r) for r in self.relations) + ")"
        return f"{head} {self.mode}"

    def build(self, cap: Optional[int] = None):
        """Instantiate as a FiniteAlgebra, GradedQuotient or AffineQuotient."""
        from .rings import AffineQuotient, GradedQuotient, field_modulus, make_finite_algebra

        rels = [str(r) for r in self.relations]
        if self.mode == "graded":
            return GradedQuotient(self.p, self.variables, rels, name=self.name)
        if self.mode == "affine":
            return AffineQuotient(self.p, self.variables, rels, name=self.name)
        mod = field_modulus(self.q)
        if mod is not None:
            rels = [str(mod)] + rels
        kwargs = {} if cap is None else {"cap": cap}
        return make_finite_algebra(self.p, self.all_variables, rels, name=self.name, **kwargs)


def _parse_decl(ps: _Parser) -> RingDecl:
    from .rings import prime_power

    ps.expect_word("ring")
    name = ps.expect_kind("ident").text
    ps.expect("=")
    if not ps.at("GF("):
        ps.error(f"unexpected {ps.tok.text or 'end of input'!r}", ["'GF('"])
    ps.advance()
    qtok = ps.expect_kind("int")
    q = int(qtok.text)
    pk = prime_power(q)
    if pk is None:
        raise ParseError(f"{q} is not a prime power", qtok.line, qtok.col)
    ps.expect(")")
    ps.expect("[")
    names: List[str] = []
    if not ps.at("]"):
        names.append(ps.expect_kind("ident").text)
        while ps.at(","):
            ps.advance()
            names.append(ps.expect_kind("ident").text)
    ps.expect("]")
    if len(set(names)) != len(names):
        ps.error("duplicate variable name")
    if pk[1] > 1 and FIELD_GENERATOR in names:
        ps.error(f"variable name {FIELD_GENERATOR!r} is reserved for the generator of GF({q})")
    allnames = ((FIELD_GENERATOR,) if pk[1] > 1 else ()) + tuple(names)
    ring = PolyRing(allnames, pk[0])
    rels: List[SparsePoly] = []
    rel_pos = []
    if ps.at("/"):
        ps.advance()
        ps.expect("(")
        rel_pos.append(ps.tok)
        rels.append(ps.poly(ring))
        while ps.at(","):
            ps.advance()
            rel_pos.append(ps.tok)
            rels.append(ps.poly(ring))
        ps.expect(")")
    if not ps.at_word(*MODES):
        ps.error(f"unexpected {ps.tok.text or 'end of input'!r}", [f"'{m}'" for m in MODES])
    mode = ps.advance().text
    if mode in ("graded", "affine") and pk[1] > 1:
        raise ParseError(f"{mode} mode needs a prime field GF(p)", qtok.line, qtok.col)
    if mode == "graded":
        for r, t in zip(rels, rel_pos):
            if not r.is_homogeneous():
                raise ParseError(f"relation {r} is not homogeneous", t.line, t.col)
    return RingDecl(name, q, tuple(names), tuple(r for r in rels), mode)


def parse_ring_dsl(text: str) -> RingDecl:
    """Parse exactly one declaration."""
    decls = parse_ring_file(text)
    if len(decls) != 1:
        raise ParseError(f"expected one declaration, found {len(decls)}")
    return decls[0]


def parse_ring_file(text: str) -> List[RingDecl]:
    ps = _Parser(text)
    decls = []
    while ps.tok.kind != "eof":
        decls.append(_parse_decl(ps))
        while ps.at(";"):
            ps.advance()
    names = [d.name for d in decls]
    if len(set(names)) != len(names):
        raise ParseError("duplicate ring name")
    return decls


def print_ring_decl(decl: RingDecl) -> str:
    return decl.to_text()


# Witt expressions: e := t (("+"|"-") t)*;  t := u ("*" u)*;  u := "-" u | a ["^" INT]
# a := INT | "p" | "[" poly "]" | "W(" poly ("," poly)* ")" | ("V"|"F") "(" e ")" | "(" e ")"


@dataclass
class WittTrace:
    steps: List[Tuple[str, str]] = field(default_factory=list)

    def record(self, expr: str, value) -> None:
        self.steps.append((expr, str(value)))


def eval_witt_expr(text: str, W, poly_ring: Optional[PolyRing] = None, trace: Optional[WittTrace] = None):
    """Evaluate a Witt expression in ``W`` (a :class:`qfpure.witt.WittRing`)."""
    from .witt import frobenius_w, verschiebung_truncated

    base = W.base
    ring = poly_ring or PolyRing((), base.characteristic)
    ps = _Parser(text)
    trace = trace if trace is not None else WittTrace()

    def coerce(f: SparsePoly):
        if hasattr(base, "from_poly") and getattr(base, "presentation", None) is not None:
            return base.from_poly(f.change_ring(base.presentation.ring))
        if hasattr(base, "normal_form"):
            return base.normal_form(f)
        return base.from_int(f.constant_coeff())

    def span(start):
        toks = ps.tokens[start:ps.i]
        return " ".join(t.text for t in toks).replace("GF( ", "GF(")

    def expr():
        start = ps.i
        acc = term()
        while ps.at("+", "-"):
            op = ps.advance().text
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
            trace.record(span(start), acc)
        return acc

    def term():
        start = ps.i
        acc = unary()
        while ps.at("*"):
            ps.advance()
            acc = acc * unary()
            trace.record(span(start), acc)
        return acc

    def unary():
        if ps.at("-"):
            ps.advance()
            return -unary()
        a = atom()
        if ps.at("^"):
            ps.advance()
            a = a ** int(ps.expect_kind("int").text)
        return a

    def atom():
        start = ps.i
        t = ps.tok
        if t.kind == "int":
            ps.advance()
            return W.from_int(int(t.text))
        if ps.at_word("p"):
            ps.advance()
            return W.p_element()
        if ps.at("["):
            ps.advance()
            r = coerce(ps.poly(ring))
            ps.expect("]")
            v = W.teichmuller(r)
            trace.record(span(start), v)
            return v
        if ps.at_word("W"):
            ps.advance()
            ps.expect("(")
            coords = [coerce(ps.poly(ring))]
            while ps.at(","):
                ps.advance()
                coords.append(coerce(ps.poly(ring)))
            ps.expect(")")
            if len(coords) != W.n:
                raise ParseError(f"W(...) needs {W.n} coordinates", t.line, t.col)
            return W.from_raw(coords)
        if ps.at_word("V", "F"):
            op = ps.advance().text
            ps.expect("(")
            inner = expr()
            ps.expect(")")
            v = verschiebung_truncated(inner) if op == "V" else frobenius_w(inner)
            trace.record(span(start), v)
            return v
        if ps.at("("):
            ps.advance()
            inner = expr()
            ps.expect(")")
            return inner
        ps.error(f"unexpected {t.text or 'end of input'!r}", ["INT", "'p'", "'['", "'W('", "'V('", "'F('", "'('"])

    value = expr()
    if ps.tok.kind != "eof":
        ps.error(f"trailing input {ps.tok.text!r}", ["'+'", "'-'", "'*'", "end of input"])
    return value, trace
