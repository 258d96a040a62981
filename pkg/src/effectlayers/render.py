"""Canonical rendering and reparsing of effect values.

One fixed textual form per value: words concatenate their atoms ("ac",
empty word "ε"), sets use braces, multisets use ⟨⟨…⟩⟩ with elements
repeated by multiplicity, nested sums are parenthesized "+"-joined words,
and distributions are comma-joined "value: p/q" entries.  `parse_value`
inverts `render_value` on every value the composed stacks produce.
"""

from __future__ import annotations

from fractions import Fraction

from .values import Dist, MultiSet, SumAtom, ValueError_, sort_values

EMPTY_WORD = "ε"


def render_fraction(f: Fraction) -> str:
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def render_value(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, tuple):
        return _render_word(v)
    if isinstance(v, frozenset):
        return "{" + ", ".join(render_value(e) for e in sort_values(v)) + "}"
    if isinstance(v, MultiSet):
        parts = []
        for e, n in v.items():
            parts.extend([render_value(e)] * n)
        return "⟨⟨" + ", ".join(parts) + "⟩⟩"
    if isinstance(v, Dist):
        return ", ".join(
            f"{render_value(e)}: {render_fraction(w)}" for e, w in v.items()
        )
    if isinstance(v, SumAtom):
        parts = []
        for w, n in v.summands.items():
            parts.extend([_render_word(w)] * n)
        return "(" + " + ".join(parts) + ")"
    if isinstance(v, Fraction):
        return render_fraction(v)
    raise TypeError(f"no canonical rendering for {type(v).__name__}")


def _render_word(w: tuple) -> str:
    if not w:
        return EMPTY_WORD
    rendered = [render_value(a) for a in w]
    if all(len(r) == 1 for r in rendered):
        return "".join(rendered)
    return "·".join(rendered)


# ---------------------------------------------------------------------------
# reparser

class ValueParseError(ValueError_):
    pass


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\n":
            self.pos += 1

    def peek(self, n: int = 1) -> str:
        return self.text[self.pos : self.pos + n]

    def eat(self, token: str):
        self.skip_ws()
        if not self.text.startswith(token, self.pos):
            raise ValueParseError(
                f"expected {token!r} at position {self.pos} in {self.text!r}"
            )
        self.pos += len(token)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)


def parse_value(text: str):
    """Parse a canonical value literal back into the value it renders."""
    sc = _Scanner(text)
    first = _parse_simple(sc)
    sc.skip_ws()
    if sc.peek() == ":":  # a distribution: entry list at top level
        entries = {}
        sc.eat(":")
        entries[first] = _parse_fraction(sc)
        while not sc.at_end():
            sc.eat(",")
            v = _parse_simple(sc)
            sc.eat(":")
            entries[v] = entries.get(v, 0) + _parse_fraction(sc)
        return Dist(entries)
    if not sc.at_end():
        raise ValueParseError(f"trailing input at position {sc.pos} in {text!r}")
    return first


def _parse_simple(sc: _Scanner):
    sc.skip_ws()
    c = sc.peek()
    if c == "{":
        sc.eat("{")
        elems = []
        sc.skip_ws()
        if sc.peek() != "}":
            elems.append(_parse_simple(sc))
            sc.skip_ws()
            while sc.peek() == ",":
                sc.eat(",")
                elems.append(_parse_simple(sc))
                sc.skip_ws()
        sc.eat("}")
        return frozenset(elems)
    if sc.peek(2) == "⟨⟨":
        sc.eat("⟨⟨")
        elems = []
        sc.skip_ws()
        if sc.peek(2) != "⟩⟩":
            elems.append(_parse_simple(sc))
            sc.skip_ws()
            while sc.peek() == ",":
                sc.eat(",")
                elems.append(_parse_simple(sc))
                sc.skip_ws()
        sc.eat("⟩⟩")
        return MultiSet(elems)
    return _parse_word(sc)


def _parse_word(sc: _Scanner):
    sc.skip_ws()
    if sc.peek() == EMPTY_WORD:
        sc.eat(EMPTY_WORD)
        return ()
    atoms = []
    run = ""
    dotted = False
    while True:
        c = sc.peek()
        if c == "(":
            atoms.extend(_split_run(run, dotted))
            run, dotted = "", False
            atoms.append(_parse_sum(sc))
        elif c == "·":
            sc.eat("·")
            dotted = True
            run += "·"
        elif c and (c.isalnum() or c in "_'"):
            sc.eat(c)
            run += c
        else:
            break
    atoms.extend(_split_run(run, dotted))
    if not atoms:
        raise ValueParseError(f"expected a word at position {sc.pos} in {sc.text!r}")
    return tuple(atoms)


def _split_run(run: str, dotted: bool):
    run = run.strip("·")
    if not run:
        return []
    return run.split("·") if dotted else list(run)


def _parse_sum(sc: _Scanner) -> SumAtom:
    sc.eat("(")
    words = [_parse_word(sc)]
    sc.skip_ws()
    while sc.peek() == "+":
        sc.eat("+")
        words.append(_parse_word(sc))
        sc.skip_ws()
    sc.eat(")")
    return SumAtom(MultiSet(words))


def _parse_fraction(sc: _Scanner) -> Fraction:
    sc.skip_ws()
    start = sc.pos
    while sc.pos < len(sc.text) and (sc.text[sc.pos].isdigit() or sc.text[sc.pos] == "/"):
        sc.pos += 1
    if sc.pos == start:
        raise ValueParseError(f"expected a rational at position {start} in {sc.text!r}")
    return Fraction(sc.text[start : sc.pos])
