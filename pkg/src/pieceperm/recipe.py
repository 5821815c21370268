"""Tiny recipe language for building functions from the command line.

    recipe  := func
    func    := name "(" [arg ("," arg)*] ")"
             | "piecewise" "(" "f=" func ";" "g=" func ";" "s=" int ")"
    arg     := key "=" value | value            (a bare value binds to the first slot)
    value   := int | hex | affine-poly          (over x, x^2, x^(2^j); "w" is the cube root of unity)

Examples: ``gold(k=2)``, ``monomial(e=7)``, ``piecewise(f=affine_inv(w*x);g=gold(k=2);s=2)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import constructions as C
from . import gf2n
from .errors import ParameterError, RecipeSyntaxError
from .funcrep import AffineMap, LutFunction, identity, monomial
from .gf2n import FieldSpec

# name -> (positional slot order, kind of each key)
SIGNATURES: dict[str, tuple[str, ...]] = {
    "gold": ("k",),
    "kasami": ("k",),
    "inverse": (),
    "identity": (),
    "bracken_leander": ("k",),
    "btt": ("m", "i"),
    "monomial": ("e", "c"),
    "affine": ("A",),
    "affine_inv": ("A1", "A2"),
    "gold_plus_one": ("k", "s"),
    "f_t1t2": ("t1", "t2"),
    "f_alphabeta": ("alpha", "beta"),
    "f_gamma": ("gamma",),
}
INT_KEYS = {"k", "m", "i", "e", "s"}
MAP_KEYS = {"A", "A1", "A2"}
SUBFIELD_LOCAL = {"affine", "affine_inv"}


@dataclass
class Node:
    name: str
    args: dict = field(default_factory=dict)
    pos: int = 0


@dataclass
class Term:
    coeff: int | str  # int literal, "w", "w^2", hex
    power: int | None  # exponent of x, None for a constant
    pos: int


_TOKEN = re.compile(r"\s*(?:(0x[0-9a-fA-F]+)|(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                break
            hexv, dec, ident, sym = m.groups()
            start = m.start(m.lastindex)
            if hexv:
                self.toks.append(("hex", hexv, start))
            elif dec:
                self.toks.append(("int", dec, start))
            elif ident:
                self.toks.append(("id", ident, start))
            elif sym:
                self.toks.append(("sym", sym, start))
            pos = m.end()
        self.i = 0

    def error(self, msg: str, pos: int | None = None):
        if pos is None:
            pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise RecipeSyntaxError(msg, pos, self.text)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("eof", "", len(self.text))

    def take(self, kind: str, value: str | None = None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = repr(value) if value else kind
            self.error(f"expected {want}, found {tok[1]!r}" if tok[0] != "eof" else f"expected {want} before end of input")
        self.i += 1
        return tok

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        return tok[0] == kind and (value is None or tok[1] == value)

    def parse(self) -> Node:
        node = self.func()
        if self.peek()[0] != "eof":
            self.error(f"unexpected trailing input {self.peek()[1]!r}")
        return node

    def func(self) -> Node:
        _, name, pos = self.take("id")
        if name == "piecewise":
            return self.piecewise(pos)
        if name not in SIGNATURES:
            self.error(f"unknown function {name!r}", pos)
        node = Node(name, {}, pos)
        slots = list(SIGNATURES[name])
        self.take("sym", "(")
        idx = 0
        while not self.at("sym", ")"):
            if idx:
                self.take("sym", ",")
            tok = self.peek()
            nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
            if tok[0] == "id" and nxt is not None and nxt[:2] == ("sym", "="):
                key, kpos = tok[1], tok[2]
                if key not in SIGNATURES[name]:
                    self.error(f"{name}() takes no argument {key!r}", kpos)
                self.i += 2
            else:
                free = [k for k in slots if k not in node.args]
                if not free:
                    self.error(f"too many arguments for {name}()")
                key = free[0]
            if key in node.args:
                self.error(f"duplicate argument {key!r}")
            node.args[key] = self.value(key)
            idx += 1
        self.take("sym", ")")
        return node

    def piecewise(self, pos: int) -> Node:
        self.take("sym", "(")
        parts = {}
        for key, sep in (("f", ";"), ("g", ";"), ("s", ")")):
            self.take("id", key)
            self.take("sym", "=")
            parts[key] = int(self.take("int")[1]) if key == "s" else self.func()
            self.take("sym", sep)
        return Node("piecewise", parts, pos)

    def value(self, key: str):
        if key in INT_KEYS:
            return int(self.take("int")[1])
        return self.poly()

    def poly(self) -> list[Term]:
        terms = [self.term()]
        while self.at("sym", "+"):
            self.i += 1
            terms.append(self.term())
        return terms

    def coeff(self):
        tok = self.peek()
        if tok[0] == "hex":
            self.i += 1
            return int(tok[1], 16)
        if tok[0] == "int":
            self.i += 1
            return int(tok[1])
        if tok[0] == "id" and tok[1] in ("w", "wx"):
            # "wx" is accepted as w*x
            self.i += 1
            if tok[1] == "wx":
                self.toks.insert(self.i, ("id", "x", tok[2] + 1))
                return "w"
            if self.at("sym", "^"):
                self.i += 1
                e = int(self.take("int")[1])
                return f"w^{e}"
            return "w"
        return None

    def term(self) -> Term:
        pos = self.peek()[2]
        c = self.coeff()
        if c is not None and self.at("sym", "*"):
            self.i += 1
        elif c is not None and not self.at("id", "x"):
            return Term(c, None, pos)
        if not self.at("id", "x"):
            self.error("expected x, a constant or w")
        self.i += 1
        power = 1
        if self.at("sym", "^"):
            self.i += 1
            if self.at("sym", "("):
                self.i += 1
                base = int(self.take("int")[1])
                self.take("sym", "^")
                j = int(self.take("int")[1])
                self.take("sym", ")")
                if base != 2:
                    self.error("only x^(2^j) exponents are allowed", pos)
                power = 1 << j
            else:
                power = int(self.take("int")[1])
        return Term(1 if c is None else c, power, pos)


def parse(text: str) -> Node:
    """Parse recipe text into a syntax tree without touching any field."""
    return _Parser(text).parse()


def _const(spec: FieldSpec, c, text: str, pos: int) -> int:
    if isinstance(c, int):
        if c >= spec.order:
            raise RecipeSyntaxError(f"constant {c:#x} does not fit GF(2^{spec.n})", pos, text)
        return c
    e = 1 if c == "w" else int(c.split("^")[1])
    try:
        w = gf2n.primitive_cube_root(spec)
    except ParameterError as exc:
        raise RecipeSyntaxError(str(exc), pos, text) from None
    return gf2n.power(spec, w, e)


def _affine(spec: FieldSpec, s: int, terms: list[Term], text: str) -> AffineMap:
    coeffs = [0] * s
    const = 0
    for t in terms:
        c = _const(spec, t.coeff, text, t.pos)
        if t.power is None:
            const ^= c
            continue
        j = t.power.bit_length() - 1
        if t.power != 1 << j or j >= s:
            raise RecipeSyntaxError(f"x^{t.power} is not a linearized monomial over GF(2^{s})", t.pos, text)
        coeffs[j] ^= c
    return AffineMap(spec, s, tuple(coeffs), const)


def _element(spec: FieldSpec, terms: list[Term], text: str) -> int:
    acc = 0
    for t in terms:
        if t.power is not None:
            raise RecipeSyntaxError("expected a field constant, not a polynomial", t.pos, text)
        acc ^= _const(spec, t.coeff, text, t.pos)
    return acc


def _subfield_values(spec: FieldSpec, s: int, node: Node, text: str) -> np.ndarray:
    """Values of ``node`` on GF(2^s), in ``subfield_elements`` order."""
    sub = np.asarray(gf2n.subfield_elements(spec, s), dtype=np.int64)
    if node.name == "affine":
        return _affine(spec, s, node.args.get("A", [Term(1, 1, node.pos)]), text).apply(sub)
    if node.name == "affine_inv":
        A1 = _affine(spec, s, node.args["A1"], text) if "A1" in node.args else AffineMap.identity(spec, s)
        A2 = _affine(spec, s, node.args["A2"], text) if "A2" in node.args else None
        return C.affine_inverse_values(spec, s, A1, A2)
    return build(spec, node, text).table[sub]


def build(spec: FieldSpec, node: Node, text: str = "") -> LutFunction:
    a = node.args
    s_default = spec.s
    name = node.name
    if name == "piecewise":
        s = a["s"]
        if s < 1 or spec.n % s:
            raise ParameterError(f"piecewise: s={s} must divide n={spec.n}")
        sub_spec = spec.with_subfield(s)
        g = build(sub_spec, a["g"], text)
        vals = _subfield_values(sub_spec, s, a["f"], text)
        piece = C.PiecewiseSpec(sub_spec, s, vals, g, provenance=text or "piecewise")
        return C.materialize(piece)
    if name in SUBFIELD_LOCAL:
        # outside a piecewise the map acts on the whole field
        vals = _subfield_values(spec, spec.n, node, text)
        return LutFunction(spec, vals, name=text or name)

    def need(key: str):
        if key not in a:
            raise ParameterError(f"{name}() requires argument {key!r}")
        return a[key]

    def need_s(fn: str) -> int:
        s = a.get("s", s_default)
        if s is None:
            raise ParameterError(f"{fn} needs a subfield: pass s=... or use --field ...,s=<s>")
        return s

    if name == "gold":
        return C.gold(spec, need("k"))
    if name == "kasami":
        return C.kasami(spec, need("k"))
    if name == "inverse":
        return C.inverse(spec)
    if name == "identity":
        return identity(spec)
    if name == "bracken_leander":
        return C.bracken_leander(spec, need("k"))
    if name == "btt":
        return C.bracken_tan_tan(spec, need("m"), need("i"))
    if name == "monomial":
        c = _element(spec, a["c"], text) if "c" in a else 1
        return monomial(spec, need("e"), c)
    if name == "gold_plus_one":
        return C.gold_plus_one(spec, need_s("gold_plus_one"), need("k"))
    s = need_s(name)
    if name == "f_t1t2":
        return C.f_t1t2(spec, s, _element(spec, need("t1"), text), _element(spec, a.get("t2", [Term(0, None, 0)]), text))
    if name == "f_alphabeta":
        return C.f_alphabeta(spec, s, _element(spec, need("alpha"), text), _element(spec, need("beta"), text))
    if name == "f_gamma":
        return C.f_gamma(spec, s, _element(spec, need("gamma"), text))
    raise ParameterError(f"unknown function {name!r}")  # pragma: no cover


def parse_recipe(spec: FieldSpec, text: str) -> LutFunction:
    lut = build(spec, parse(text), text)
    return lut.renamed(text)


def parse_piecewise(spec: FieldSpec, text: str) -> C.PiecewiseSpec:
    """Like :func:`parse_recipe` for a top-level ``piecewise(...)`` but stops before materializing."""
    node = parse(text)
    if node.name != "piecewise":
        raise ParameterError("expected a piecewise(...) recipe")
    s = node.args["s"]
    sub_spec = spec.with_subfield(s)
    g = build(sub_spec, node.args["g"], text)
    vals = _subfield_values(sub_spec, s, node.args["f"], text)
    return C.PiecewiseSpec(sub_spec, s, vals, g, provenance=text)

