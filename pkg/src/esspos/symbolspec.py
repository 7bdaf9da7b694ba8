"""Tiny symbol-description grammar and its recursive-descent parser.

    spec     := kind "{" item ("," item)* "}"
    kind     := "radial" | "hardy" | "diagonal"
    radial   := poly "[" num ("," num)* "]"
              | atom "(" num "@" num ")"
              | zz "(" num "," num ")"
    diagonal := list "[" num ("," num)* "]" | lacunary
    hardy    := fourier "[" idx ":" num ("," idx ":" num)* "]"
              | samples "(" path ")"

Whitespace insensitive; numbers are decimal with optional exponent.  Hardy
Fourier items are completed conjugate-symmetrically: an index given without
its mirror receives ``f_{-k} = f_k`` (coefficients in the grammar are real).
Every failure is a :class:`SymbolParseError` with line/column position.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import SymbolParseError
from .hardy import CircleSymbol
from .radial import RadialProfileMeasure, lacunary_operator, zhao_zheng_symbol
from .sequences import EigenvalueSequence

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<punct>[{}\[\](),:@])
    """,
    re.VERBOSE,
)

KINDS = ("radial", "hardy", "diagonal")


@dataclass(frozen=True)
class _Token:
    type: str  # "number" | "ident" | "punct" | "end"
    text: str
    line: int
    column: int


def _tokenize(text):
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise SymbolParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = match.lastgroup
        chunk = match.group()
        if kind != "ws":
            tokens.append(_Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rfind("\n") + 1
        pos = match.end()
    tokens.append(_Token("end", "", line, len(text) - line_start + 1))
    return tokens


@dataclass(frozen=True)
class SymbolSpec:
    """Parsed symbol description; ``source`` keeps the original text."""

    kind: str
    poly: tuple | None = None
    zz: tuple | None = None
    atoms: tuple = ()
    diagonal: tuple | None = None
    lacunary: bool = False
    fourier: tuple | None = None  # ((k, value), ...) sorted by k
    samples_path: str | None = None
    source: str = field(default="", compare=False)

    # -- conversions to the numerical objects ---------------------------

    def to_measure(self):
        if self.kind != "radial":
            raise ValueError("only radial specs describe a profile measure")
        poly = list(self.poly or ())
        if self.zz is not None:
            zz = zhao_zheng_symbol(*self.zz)
            while len(poly) < len(zz.poly):
                poly.append(0.0)
            for j, c in enumerate(zz.poly):
                poly[j] += c
        return RadialProfileMeasure(poly=tuple(poly), atoms=self.atoms)

    def to_sequence(self, n_terms=256):
        if self.kind == "radial":
            from .radial import eigenvalue_sequence

            return eigenvalue_sequence(self.to_measure(), n_terms - 1)
        if self.kind != "diagonal":
            raise ValueError("only radial or diagonal specs describe a diagonal operator")
        if self.lacunary:
            return lacunary_operator(n_terms)
        return EigenvalueSequence(np.asarray(self.diagonal, dtype=np.float64))

    def to_circle_symbol(self):
        if self.kind != "hardy":
            raise ValueError("only hardy specs describe a circle symbol")
        if self.samples_path is not None:
            return CircleSymbol.from_samples_csv(self.samples_path)
        return CircleSymbol.from_fourier(dict(self.fourier), complete_conjugate=True)


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    @property
    def current(self):
        return self.tokens[self.pos]

    def error(self, message, token=None):
        token = token or self.current
        raise SymbolParseError(message, token.line, token.column)

    def advance(self):
        token = self.current
        self.pos += 1
        return token

    def expect_punct(self, char):
        token = self.current
        if token.type != "punct" or token.text != char:
            self.error(f"expected {char!r}, found {token.text or 'end of input'!r}")
        return self.advance()

    def expect_ident(self):
        token = self.current
        if token.type != "ident":
            self.error(f"expected a name, found {token.text or 'end of input'!r}")
        return self.advance()

    def expect_number(self):
        token = self.current
        if token.type != "number":
            self.error(f"expected a number, found {token.text or 'end of input'!r}")
        self.advance()
        value = float(token.text)
        if not math.isfinite(value):
            self.error("numeric literal overflows to a non-finite value", token)
        return value, token

    def expect_integer(self):
        value, token = self.expect_number()
        if value != int(value):
            self.error("expected an integer index", token)
        return int(value), token

    def number_list(self):
        self.expect_punct("[")
        values = [self.expect_number()[0]]
        while self.current.type == "punct" and self.current.text == ",":
            self.advance()
            values.append(self.expect_number()[0])
        self.expect_punct("]")
        return tuple(values)

    def parse(self):
        kind_token = self.expect_ident()
        kind = kind_token.text
        if kind not in KINDS:
            self.error(f"unknown symbol kind {kind!r} (expected one of {', '.join(KINDS)})", kind_token)
        self.expect_punct("{")
        state = {
            "poly": None,
            "zz": None,
            "atoms": [],
            "diagonal": None,
            "lacunary": False,
            "fourier": None,
            "samples_path": None,
        }
        while True:
            self.parse_item(kind, state)
            if self.current.type == "punct" and self.current.text == ",":
                self.advance()
                continue
            break
        self.expect_punct("}")
        if self.current.type != "end":
            self.error("trailing input after the closing brace")
        return self.finish(kind, state)

    def parse_item(self, kind, state):
        token = self.expect_ident()
        name = token.text
        if kind == "radial":
            if name == "poly":
                if state["poly"] is not None:
                    self.error("duplicate poly item", token)
                state["poly"] = self.number_list()
            elif name == "atom":
                self.expect_punct("(")
                mass, _ = self.expect_number()
                self.expect_punct("@")
                radius, radius_token = self.expect_number()
                self.expect_punct(")")
                if not 0.0 <= radius < 1.0:
                    self.error(f"atom radius {radius!r} outside [0, 1)", radius_token)
                state["atoms"].append((mass, radius))
            elif name == "zz":
                if state["zz"] is not None:
                    self.error("duplicate zz item", token)
                self.expect_punct("(")
                a, _ = self.expect_number()
                self.expect_punct(",")
                b, _ = self.expect_number()
                self.expect_punct(")")
                state["zz"] = (a, b)
            else:
                self.error(f"unknown radial item {name!r} (expected poly, atom or zz)", token)
        elif kind == "diagonal":
            if name == "list":
                if state["diagonal"] is not None or state["lacunary"]:
                    self.error("diagonal spec takes a single item", token)
                state["diagonal"] = self.number_list()
            elif name == "lacunary":
                if state["diagonal"] is not None or state["lacunary"]:
                    self.error("diagonal spec takes a single item", token)
                state["lacunary"] = True
            else:
                self.error(f"unknown diagonal item {name!r} (expected list or lacunary)", token)
        else:  # hardy
            if name == "fourier":
                if state["fourier"] is not None or state["samples_path"] is not None:
                    self.error("hardy spec takes a single item", token)
                state["fourier"] = self.fourier_table()
            elif name == "samples":
                if state["fourier"] is not None or state["samples_path"] is not None:
                    self.error("hardy spec takes a single item", token)
                self.expect_punct("(")
                state["samples_path"] = self.path_token()
                self.expect_punct(")")
            else:
                self.error(f"unknown hardy item {name!r} (expected fourier or samples)", token)

    def fourier_table(self):
        self.expect_punct("[")
        table = {}
        while True:
            k, k_token = self.expect_integer()
            self.expect_punct(":")
            value, _ = self.expect_number()
            if k in table and table[k] != value:
                self.error(f"conflicting values for Fourier index {k}", k_token)
            table[k] = value
            if self.current.type == "punct" and self.current.text == ",":
                self.advance()
                continue
            break
        self.expect_punct("]")
        # conjugate-symmetric completion; grammar coefficients are real
        for k in list(table):
            if -k not in table:
                table[-k] = table[k]
        for k, v in table.items():
            if table[-k] != v:
                self.error(f"non-real symbol: f_{-k} != f_{k} for index pair ({k}, {-k})")
        return tuple(sorted(table.items()))

    def path_token(self):
        # a path runs to the closing parenthesis; commas and parens need quoting
        # the grammar does not offer, so they are simply not supported here
        start = self.current
        parts = []
        depth = 0
        while True:
            token = self.current
            if token.type == "end":
                self.error("unterminated samples(...) path", start)
            if token.type == "punct" and token.text == ")" and depth == 0:
                break
            if token.type == "punct" and token.text in ",{}[]":
                self.error(f"unexpected {token.text!r} inside a samples path", token)
            parts.append(token.text)
            self.advance()
        if not parts:
            self.error("empty samples path", start)
        return "".join(parts)

    def finish(self, kind, state):
        if kind == "radial":
            if state["poly"] is None and state["zz"] is None and not state["atoms"]:
                self.error("radial spec needs at least one item")
            radii = [r for _, r in state["atoms"]]
            if len(set(radii)) != len(radii):
                self.error("duplicate atom radius")
            return SymbolSpec(
                kind="radial",
                poly=state["poly"],
                zz=state["zz"],
                atoms=tuple(state["atoms"]),
                source=self.text,
            )
        if kind == "diagonal":
            if state["diagonal"] is None and not state["lacunary"]:
                self.error("diagonal spec needs list[...] or lacunary")
            return SymbolSpec(
                kind="diagonal",
                diagonal=state["diagonal"],
                lacunary=state["lacunary"],
                source=self.text,
            )
        if state["fourier"] is None and state["samples_path"] is None:
            self.error("hardy spec needs fourier[...] or samples(...)")
        return SymbolSpec(
            kind="hardy",
            fourier=state["fourier"],
            samples_path=state["samples_path"],
            source=self.text,
        )


def parse_symbol(text):
    """Parse a symbol description; every failure is a positioned :class:`SymbolParseError`."""
    if not isinstance(text, str):
        raise SymbolParseError("symbol description must be a string")
    try:
        return _Parser(text).parse()
    except SymbolParseError:
        raise
    except RecursionError:
        raise SymbolParseError("symbol description too deeply nested")


def _fmt(x):
    return repr(float(x))


def render_symbol(spec):
    """Canonical text for a spec; ``parse_symbol(render_symbol(s)) == s``."""
    if spec.kind == "radial":
        items = []
        if spec.poly is not None:
            items.append("poly[" + ",".join(_fmt(c) for c in spec.poly) + "]")
        if spec.zz is not None:
            items.append(f"zz({_fmt(spec.zz[0])},{_fmt(spec.zz[1])})")
        for mass, radius in sorted(spec.atoms, key=lambda a: a[1]):
            items.append(f"atom({_fmt(mass)}@{_fmt(radius)})")
        return "radial{" + ",".join(items) + "}"
    if spec.kind == "diagonal":
        if spec.lacunary:
            return "diagonal{lacunary}"
        return "diagonal{list[" + ",".join(_fmt(v) for v in spec.diagonal) + "]}"
    if spec.samples_path is not None:
        return f"hardy{{samples({spec.samples_path})}}"
    positive = [(k, v) for k, v in spec.fourier if k >= 0]
    # mirrors are implied by completion; render only k >= 0 plus any
    # explicitly asymmetric negative entries (none for real grammar input)
    rendered = ",".join(f"{k}:{_fmt(v)}" for k, v in positive)
    return "hardy{fourier[" + rendered + "]}"
