"""Textual layer-stack format and program syntax.

Grammar (statements end with ";"):

    atoms a b c;
    layer traces {
      op ";" : 2;
      op "skip" : 0;
      eq x;(y;z) = (x;y);z;
      eq skip;x = x;
      normalizer monoid;
    }

Terms use infix syntax for the three canonical operators — ";" binds
tighter than "+", which binds tighter than "⊕[λ]" — plus prefix call
syntax f(t1, ..., tn) for anything else.  "(+)[λ]" is an ASCII alias for
"⊕[λ]".  Parameters are rational literals with an explicit denominator
("1/2"; bare "0" and "1" allowed) or parameter expressions over variables.
Parse errors carry line and column.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .pipeline import INNER_SEED, OUTER, LayerSpec
from .terms import (
    App,
    Const,
    OpSymbol,
    PBin,
    PConst,
    PVar,
    Signature,
    Term,
    Theory,
    Var,
    equation,
)
from .theories import describe_equation

NORMALIZER_NAMES = {
    "monoid": "MONOID",
    "semilattice": "SEMILATTICE",
    "comm-monoid": "COMM_MONOID",
    "convex": "CONVEX",
    "idem-semiring": "IDEM_SEMIRING",
    "semiring": "SEMIRING",
    "two-monoids": "TWO_MONOIDS_ABSORB",
    "generic": "GENERIC",
}

KEYWORDS = {"atoms", "layer", "op", "eq", "normalizer"}

_INFIX_PREC = {";": 30, "+": 20, "⊕": 10}


class SpecParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class SpecFile:
    atoms: tuple
    layers: tuple  # LayerSpec, seed first

    @property
    def signature_at(self):
        """signature_at(stage) -> combined signature visible at that stage."""

        def at(stage: int) -> Signature:
            sig = self.layers[0].theory.signature
            for layer in self.layers[1 : stage + 1]:
                sig = sig.merge(layer.theory.signature)
            return sig

        return at


# ---------------------------------------------------------------------------
# tokens

@dataclass(frozen=True)
class _Tok:
    kind: str  # ident | string | number | punct | end
    text: str
    line: int
    col: int


_PUNCT = (";", ":", "{", "}", "(", ")", "[", "]", "=", "+", "-", "*", "/", ",", "⊕")


def _tokenize(text: str):
    toks = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c in " \t\r":
            i, col = i + 1, col + 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if text.startswith("(+)", i):
            toks.append(_Tok("punct", "⊕", line, col))
            i, col = i + 3, col + 3
            continue
        if c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise SpecParseError("unterminated string", line, col)
            toks.append(_Tok("string", text[i + 1 : j], line, col))
            col += j + 1 - i
            i = j + 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("number", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            toks.append(_Tok("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if c in _PUNCT:
            toks.append(_Tok("punct", c, line, col))
            i, col = i + 1, col + 1
            continue
        raise SpecParseError(f"unexpected character {c!r}", line, col)
    toks.append(_Tok("end", "", line, col))
    return toks


class _Stream:
    def __init__(self, toks):
        self.toks = toks
        self.i = 0

    def peek(self, ahead: int = 0) -> _Tok:
        return self.toks[min(self.i + ahead, len(self.toks) - 1)]

    def next(self) -> _Tok:
        t = self.peek()
        self.i = min(self.i + 1, len(self.toks) - 1)
        return t

    def expect(self, kind: str, text: Optional[str] = None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            raise SpecParseError(f"expected {want!r}, found {t.text or t.kind!r}", t.line, t.col)
        return self.next()


# ---------------------------------------------------------------------------
# term parsing

def _can_start_term(t: _Tok, sig: Signature) -> bool:
    if t.kind == "ident":
        return t.text not in KEYWORDS
    return t.kind == "punct" and t.text == "("


def _parse_param_expr(ts: _Stream, prec: int = 0):
    left = _parse_param_atom(ts)
    while True:
        t = ts.peek()
        if t.kind != "punct" or t.text not in "+-*/":
            return left
        op_prec = 1 if t.text in "+-" else 2
        if op_prec <= prec:
            return left
        ts.next()
        right = _parse_param_expr(ts, op_prec)
        left = PBin(t.text, left, right)
    return left


def _parse_param_atom(ts: _Stream):
    t = ts.peek()
    if t.kind == "punct" and t.text == "(":
        ts.next()
        inner = _parse_param_expr(ts)
        ts.expect("punct", ")")
        return inner
    if t.kind == "number":
        ts.next()
        num = int(t.text)
        if ts.peek().kind == "punct" and ts.peek().text == "/":
            ts.next()
            den = ts.expect("number")
            return PConst(Fraction(num, int(den.text)))
        if num not in (0, 1):
            raise SpecParseError(
                "rationals need an explicit denominator (write p/q)", t.line, t.col
            )
        return PConst(Fraction(num))
    if t.kind == "ident":
        ts.next()
        return PVar(t.text)
    raise SpecParseError(f"expected a parameter expression, found {t.text!r}", t.line, t.col)


def _simplify_param(p):
    return p.value if isinstance(p, PConst) else p


def _parse_term(ts: _Stream, sig: Signature, leaf, prec: int = 0) -> Term:
    left = _parse_term_atom(ts, sig, leaf)
    while True:
        t = ts.peek()
        if t.kind != "punct" or t.text not in _INFIX_PREC:
            return left
        op_prec = _INFIX_PREC[t.text]
        if op_prec <= prec:
            return left
        # ';' also terminates statements: only an operator before a term
        if t.text == ";" and not _can_start_term(ts.peek(1), sig):
            return left
        if t.text not in sig:
            raise SpecParseError(f"operation {t.text!r} not declared", t.line, t.col)
        op = sig[t.text]
        ts.next()
        param = None
        if op.param:
            ts.expect("punct", "[")
            param = _simplify_param(_parse_param_expr(ts))
            ts.expect("punct", "]")
        right = _parse_term(ts, sig, leaf, op_prec)
        left = App(op, (left, right), param)
    return left


def _parse_term_atom(ts: _Stream, sig: Signature, leaf) -> Term:
    t = ts.peek()
    if t.kind == "punct" and t.text == "(":
        ts.next()
        inner = _parse_term(ts, sig, leaf)
        ts.expect("punct", ")")
        return inner
    if t.kind == "ident" and t.text not in KEYWORDS:
        ts.next()
        if t.text in sig:
            op = sig[t.text]
            if op.arity == 0:
                return App(op, ())
            ts.expect("punct", "(")
            args = [_parse_term(ts, sig, leaf)]
            while ts.peek().kind == "punct" and ts.peek().text == ",":
                ts.next()
                args.append(_parse_term(ts, sig, leaf))
            ts.expect("punct", ")")
            if len(args) != op.arity:
                raise SpecParseError(
                    f"{op.name!r} expects {op.arity} arguments, got {len(args)}",
                    t.line,
                    t.col,
                )
            return App(op, tuple(args))
        return leaf(t)
    raise SpecParseError(f"expected a term, found {t.text or t.kind!r}", t.line, t.col)


# ---------------------------------------------------------------------------
# spec files

def parse_spec(text: str) -> SpecFile:
    ts = _Stream(_tokenize(text))
    tok = ts.expect("ident", "atoms")
    atoms = []
    while ts.peek().kind == "ident":
        atoms.append(ts.next().text)
    ts.expect("punct", ";")
    if not atoms:
        raise SpecParseError("at least one atom is required", tok.line, tok.col)

    layers = []
    while ts.peek().kind != "end":
        layers.append(_parse_layer(ts, role=INNER_SEED if not layers else OUTER))
    if not layers:
        t = ts.peek()
        raise SpecParseError("at least one inner seed layer is required", t.line, t.col)
    return SpecFile(tuple(atoms), tuple(layers))


def _parse_layer(ts: _Stream, role: str) -> LayerSpec:
    ts.expect("ident", "layer")
    name = ts.expect("ident").text
    ts.expect("punct", "{")
    ops = []
    normalizer = None
    # ops must precede the equations that use them, so a single pass with an
    # incrementally grown signature suffices
    equations = []
    while True:
        t = ts.peek()
        if t.kind == "punct" and t.text == "}":
            ts.next()
            break
        if t.kind == "ident" and t.text == "op":
            ts.next()
            opname = ts.expect("string").text
            ts.expect("punct", ":")
            arity = int(ts.expect("number").text)
            param = False
            if ts.peek().kind == "ident" and ts.peek().text == "param":
                ts.next()
                param = True
            ts.expect("punct", ";")
            ops.append(OpSymbol(opname, arity, param))
            continue
        if t.kind == "ident" and t.text == "eq":
            ts.next()
            sig = Signature(tuple(ops))
            lhs = _parse_term(ts, sig, _var_leaf)
            ts.expect("punct", "=")
            rhs = _parse_term(ts, sig, _var_leaf)
            ts.expect("punct", ";")
            try:
                e = equation(lhs, rhs)
                pattern = describe_equation(e, sig)
                if pattern != e.describe():
                    e = equation(lhs, rhs, name=pattern)
                equations.append(e)
            except SpecParseError:
                raise
            except Exception as exc:
                raise SpecParseError(str(exc), t.line, t.col)
            continue
        if t.kind == "ident" and t.text == "normalizer":
            ts.next()
            norm = ts.expect("ident")
            while ts.peek().kind == "punct" and ts.peek().text == "-":
                ts.next()
                norm = _Tok(norm.kind, norm.text + "-" + ts.expect("ident").text, norm.line, norm.col)
            ts.expect("punct", ";")
            if norm.text not in NORMALIZER_NAMES:
                raise SpecParseError(
                    f"unknown normalizer {norm.text!r} (expected one of {sorted(NORMALIZER_NAMES)})",
                    norm.line,
                    norm.col,
                )
            normalizer = NORMALIZER_NAMES[norm.text]
            continue
        raise SpecParseError(
            f"expected 'op', 'eq', 'normalizer' or '}}', found {t.text or t.kind!r}",
            t.line,
            t.col,
        )

    theory = Theory(Signature(tuple(ops)), tuple(equations), name=name)
    return LayerSpec(name, theory, normalizer, role)


def _var_leaf(tok: _Tok) -> Term:
    return Var(tok.text)


def parse_program(text: str, sig: Signature, atoms) -> Term:
    """A closed program: bare identifiers are atoms, not variables."""
    atom_set = set(atoms)

    def leaf(tok: _Tok) -> Term:
        if tok.text not in atom_set:
            raise SpecParseError(f"unbound atom {tok.text!r}", tok.line, tok.col)
        return Const(tok.text)

    ts = _Stream(_tokenize(text))
    t = _parse_term(ts, sig, leaf)
    end = ts.peek()
    if end.kind != "end":
        raise SpecParseError(f"trailing input {end.text!r}", end.line, end.col)
    return t
