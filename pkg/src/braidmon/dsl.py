"""ASCII notation for band-twist factorizations.

Grammar (whitespace is free outside subscripts)::

    product  := 'Id' | term (('*' | '·')? term)*
    term     := atom | symbol | '(' product ')' postfix*
    postfix  := '^{' product '}'                 conjugation  (X)^{C} = C^-1 X C
              | '_{' var '=' values '}'          indexed product over values
    atom     := marker skip* exp? '_{' sub '}' exp?
    marker   := 'Z' | 'uZ' (under the axis) | 'bZ' (over the axis)
    skip     := '(' label ')' ( '-' '(' label ')' )?
    exp      := '^' int | '^{' int '}'
    sub      := group ',' group | label label
    group    := label | label label'            (pair, e.g. 33' or 10 10')
    values   := item (',' item)* ( '\\' item (',' item)* )?
    item     := int '-' int | group
    symbol   := Name ('_' (int | var | '{' int '}'))?   e.g. D_4, D_t, F1hat

Labels are integers with an optional prime, or single lowercase
placeholder letters (``i``, ``i'``). A glued ``33'`` in a subscript is the
pair ``(3, 3')``; a lone primed label that would read as a glued pair is
written in brackets, ``[11']``. Files hold ``let NAME = expr`` and
``factorization NAME = expr`` statements; a statement runs until the next
line starting with ``let`` or ``factorization``; ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

from .bands import CompositeBand, PunctureConfig, Side, expand_composite
from .braid import ArtinWord
from .factorization import Factor, Factorization, Origin, StubFactor

KINDS = {"Z": "plain", "uZ": "under", "bZ": "bar"}
MARKERS = {v: k for k, v in KINDS.items()}
RESERVED = {"F1hat"}

Group = tuple  # tuple[str, ...] of one label or a pair


# --- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    kind: str
    skips: tuple[tuple[str, str], ...]
    groups: tuple[Group, Group]
    exponent: int = 1

    def __post_init__(self):
        if self.kind not in MARKERS:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        if self.exponent == 0:
            raise ValueError("exponent must be nonzero")


@dataclass(frozen=True)
class Conjugated:
    base: "FactorExpr"
    conjugator: "FactorExpr"


@dataclass(frozen=True)
class Product:
    children: tuple["FactorExpr", ...] = ()


@dataclass(frozen=True)
class Range:
    lo: int
    hi: int


@dataclass(frozen=True)
class IndexedFamily:
    template: "FactorExpr"
    var: str
    values: tuple[Union[Group, Range], ...]
    excluded: tuple[Union[Group, Range], ...] = ()

    def expanded_values(self) -> list[Group]:
        def flat(items):
            out = []
            for it in items:
                if isinstance(it, Range):
                    out.extend((str(k),) for k in range(it.lo, it.hi + 1))
                else:
                    out.append(it)
            return out
        drop = set(flat(self.excluded))
        return [v for v in flat(self.values) if v not in drop]


@dataclass(frozen=True)
class SymbolRef:
    name: str
    index: str | None = None

    def full_name(self, index: str | None = None) -> str:
        idx = self.index if index is None else index
        return self.name if idx is None else f"{self.name}_{idx}"


@dataclass(frozen=True)
class Stub:
    """Binding value standing for a block of known degree."""

    degree: int


FactorExpr = Union[Atom, Conjugated, Product, IndexedFamily, SymbolRef]


@dataclass
class Document:
    lets: dict[str, FactorExpr | Stub] = field(default_factory=dict)
    factorizations: dict[str, FactorExpr] = field(default_factory=dict)


class DSLSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.detail = message


class ResolveError(ValueError):
    pass


# --- parser --------------------------------------------------------------------

_LABEL = r"(?:[1-9]\d*|0|[a-z])'?"
_LABEL_RE = re.compile(_LABEL)
_NAME_RE = re.compile(r"[A-Z][A-Za-z0-9]*(?:_[A-Z][A-Za-z0-9]*)*")
_INT_RE = re.compile(r"-?\d+")


def _is_label(tok: str) -> bool:
    return bool(re.fullmatch(_LABEL, tok))


def _split_glued_pair(tok: str) -> Group | None:
    """``33'`` -> ('3', "3'"); ``ii'`` -> ('i', "i'"); None when not a glued pair."""
    if tok.endswith("'") and len(tok) % 2 == 1:
        half = (len(tok) - 1) // 2
        a, b = tok[:half], tok[half:]
        if b == a + "'" and _is_label(a):
            return (a, b)
    return None


def _parse_group(text: str) -> Group:
    toks = text.split()
    if len(toks) == 2:
        a, b = toks
        if not (_is_label(a) and b == a + "'"):
            raise ValueError(f"bad pair {text!r}: expected 'j j''")
        return (a, b)
    if len(toks) != 1:
        raise ValueError(f"bad index group {text!r}")
    tok = toks[0]
    if tok.startswith("[") and tok.endswith("]") and _is_label(tok[1:-1]):
        return (tok[1:-1],)
    pair = _split_glued_pair(tok)
    if pair:
        return pair
    if _is_label(tok):
        return (tok,)
    raise ValueError(f"bad index group {text!r}")


def _parse_subscript(text: str) -> tuple[Group, Group]:
    if "," in text:
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"subscript needs exactly two index groups: {text!r}")
        return _parse_group(parts[0]), _parse_group(parts[1])
    toks = text.split()
    if len(toks) == 2 and all(_is_label(t) for t in toks):
        return (toks[0],), (toks[1],)
    if len(toks) != 1:
        raise ValueError(f"bad subscript {text!r}")
    tok = toks[0]
    splits = [(tok[:k], tok[k:]) for k in range(1, len(tok))
              if _is_label(tok[:k]) and _is_label(tok[k:])]
    if len(splits) != 1:
        why = "ambiguous" if splits else "not two labels"
        raise ValueError(f"subscript {text!r} is {why}; separate the labels with a comma")
    a, b = splits[0]
    return (a,), (b,)


class _Parser:
    def __init__(self, text: str, base_offset: int = 0, full_text: str | None = None):
        self.s = text
        self.i = 0
        self.base = base_offset
        self.full = full_text if full_text is not None else text

    # error reporting
    def error(self, msg: str, at: int | None = None):
        pos = self.base + (self.i if at is None else at)
        before = self.full[:pos]
        line = before.count("\n") + 1
        col = pos - (before.rfind("\n") + 1) + 1
        raise DSLSyntaxError(msg, line, col)

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self, k: int = 0) -> str:
        j = self.i + k
        return self.s[j] if j < len(self.s) else ""

    def startswith(self, tok: str) -> bool:
        return self.s.startswith(tok, self.i)

    def expect(self, tok: str):
        self.ws()
        if not self.startswith(tok):
            self.error(f"expected {tok!r}")
        self.i += len(tok)

    def braced(self) -> tuple[str, int]:
        """Raw text inside ``{...}`` starting at the current '{' (nesting aware)."""
        if self.peek() != "{":
            self.error("expected '{'")
        start = self.i
        depth = 0
        while self.i < len(self.s):
            c = self.s[self.i]
            if c == "{":
                depth += 1
            elif c == "}":
                depth -= 1
                if depth == 0:
                    self.i += 1
                    return self.s[start + 1:self.i - 1], start + 1
            self.i += 1
        self.error("unbalanced '{'", start)

    def sub_parser(self, text: str, offset: int) -> _Parser:
        return _Parser(text, self.base + offset, self.full)

    # grammar
    def parse_all(self) -> FactorExpr:
        e = self.product()
        self.ws()
        if self.i != len(self.s):
            self.error(f"unexpected {self.peek()!r}")
        return e

    def product(self) -> FactorExpr:
        self.ws()
        children = [self.term()]
        while True:
            self.ws()
            c = self.peek()
            if c in ("*", "·"):
                self.i += 1
                self.ws()
                children.append(self.term())
            elif c and c not in ")}":
                children.append(self.term())
            else:
                break
        return children[0] if len(children) == 1 else Product(tuple(children))

    def _name_continues(self, j: int) -> bool:
        return j < len(self.s) and (self.s[j].isalnum() or self.s[j] == "_")

    def term(self) -> FactorExpr:
        self.ws()
        c = self.peek()
        if c == "(":
            start = self.i
            self.i += 1
            inner = self.product()
            self.ws()
            if self.peek() != ")":
                self.error("unbalanced '('", start)
            self.i += 1
            return self.postfixes(inner)
        if re.match(r"[ub]?Z(?![A-Za-z0-9])", self.s[self.i:self.i + 3]):
            return self.atom()
        if self.startswith("Id") and not self._name_continues(self.i + 2):
            self.i += 2
            return Product(())
        m = _NAME_RE.match(self.s, self.i)
        if m:
            return self.symbol()
        if not c:
            self.error("unexpected end of input")
        self.error(f"unknown marker {c!r}")

    def postfixes(self, e: FactorExpr) -> FactorExpr:
        while True:
            if self.startswith("^"):
                self.i += 1
                if self.peek() != "{":
                    self.error("conjugation needs '^{...}'")
                text, off = self.braced()
                conj = self.sub_parser(text, off).parse_all()
                e = Conjugated(e, conj)
            elif self.startswith("_"):
                self.i += 1
                if self.peek() != "{":
                    self.error("indexed product needs '_{var=...}'")
                text, off = self.braced()
                e = self.family(e, text, off)
            else:
                return e

    def family(self, template: FactorExpr, text: str, off: int) -> IndexedFamily:
        m = re.fullmatch(r"\s*([a-z])\s*=(.*)", text, re.S)
        if not m:
            self.error("indexed product needs 'var=values'", off)
        var, rest = m.group(1), m.group(2)
        if "\\" in rest:
            inc, exc = rest.split("\\", 1)
        else:
            inc, exc = rest, ""
        try:
            values = tuple(self._items(inc))
            excluded = tuple(self._items(exc)) if exc.strip() else ()
        except ValueError as err:
            self.error(str(err))
        if not values:
            self.error("indexed product has no values")
        return IndexedFamily(template, var, values, excluded)

    @staticmethod
    def _items(text: str):
        for raw in text.split(","):
            raw = raw.strip()
            if not raw:
                raise ValueError("empty index value")
            m = re.fullmatch(r"(\d+)\s*-\s*(\d+)", raw)
            if m:
                lo, hi = int(m.group(1)), int(m.group(2))
                if lo > hi:
                    raise ValueError(f"empty range {raw!r}")
                yield Range(lo, hi)
            else:
                yield _parse_group(raw)

    def atom(self) -> Atom:
        start = self.i
        if self.startswith("uZ") or self.startswith("bZ"):
            marker = self.s[self.i:self.i + 2]
            self.i += 2
        else:
            marker = "Z"
            self.i += 1
        skips = []
        while self.peek() == "(":
            lo = self._skip_label()
            hi = lo
            if self.peek() == "-" and self.peek(1) == "(":
                self.i += 1
                hi = self._skip_label()
            skips.append((lo, hi))
        exponent = None
        if self.peek() == "^":
            exponent = self._exponent()
        if self.peek() != "_":
            self.error("atom needs a subscript '_{...}'")
        self.i += 1
        text, off = self.braced()
        try:
            groups = _parse_subscript(text)
        except ValueError as err:
            self.error(str(err), off)
        if self.peek() == "^":
            save = self.i
            try:
                e2 = self._exponent()
            except DSLSyntaxError:
                self.i = save
                e2 = None
            if e2 is not None:
                if exponent is not None:
                    self.error("exponent given twice", save)
                exponent = e2
        if exponent == 0:
            self.error("exponent must be nonzero", start)
        return Atom(KINDS[marker], tuple(skips), groups, 1 if exponent is None else exponent)

    def _skip_label(self) -> str:
        m = re.compile(r"\(\s*(" + _LABEL + r")\s*\)").match(self.s, self.i)
        if not m:
            self.error("bad skip decoration, expected '(label)'")
        self.i = m.end()
        return m.group(1)

    def _exponent(self) -> int:
        self.i += 1  # '^'
        if self.peek() == "{":
            save = self.i
            text, _ = self.braced()
            if not re.fullmatch(r"\s*-?\d+\s*", text):
                self.i = save - 1
                self.error("exponent must be an integer")
            return int(text)
        m = _INT_RE.match(self.s, self.i)
        if not m:
            self.error("exponent must be an integer")
        self.i = m.end()
        return int(m.group())

    def symbol(self) -> SymbolRef:
        m = _NAME_RE.match(self.s, self.i)
        name = m.group()
        self.i = m.end()
        index = None
        mi = re.compile(r"_(?:\{(\d+)\}|(\d+|[a-z])(?![=\w]))").match(self.s, self.i)
        if mi:
            index = mi.group(1) or mi.group(2)
            self.i = mi.end()
        return self.postfixes(SymbolRef(name, index))


def parse(text: str) -> FactorExpr:
    """Parse one expression."""
    return _Parser(text).parse_all()


_STMT = re.compile(r"^(let|factorization)\s+([A-Za-z][A-Za-z0-9_]*)\s*=", re.M)
_STUB = re.compile(r"\s*stub\s*\(\s*(\d+)\s*\)\s*$")


def _strip_comments(text: str) -> str:
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)


def parse_document(text: str) -> Document:
    """Parse a file of ``let`` / ``factorization`` statements."""
    clean = _strip_comments(text)
    doc = Document()
    matches = list(_STMT.finditer(clean))
    head = clean[:matches[0].start()] if matches else clean
    if head.strip():
        off = len(head) - len(head.lstrip())
        _Parser(clean, 0).error("expected 'let' or 'factorization'", off)
    for k, m in enumerate(matches):
        end = matches[k + 1].start() if k + 1 < len(matches) else len(clean)
        body = clean[m.end():end]
        stub = _STUB.match(body)
        if stub:
            if m.group(1) != "let":
                _Parser(clean).error("a factorization cannot be a stub", m.start())
            value: FactorExpr | Stub = Stub(int(stub.group(1)))
        else:
            if not body.strip():
                _Parser(clean).error("empty statement", m.end())
            value = _Parser(body, m.end(), clean).parse_all()
        name = m.group(2)
        target = doc.lets if m.group(1) == "let" else doc.factorizations
        if name in doc.lets or name in doc.factorizations:
            _Parser(clean).error(f"duplicate definition of {name}", m.start())
        target[name] = value
    return doc


# --- serializer ------------------------------------------------------------------

def _ser_label(lab: str) -> str:
    return f"[{lab}]" if _split_glued_pair(lab) else lab


def _ser_group(g: Group) -> str:
    if len(g) == 1:
        return _ser_label(g[0])
    a, b = g
    return f"{a}{b}" if len(a) == 1 else f"{a} {b}"


def _ser_items(items) -> str:
    out = []
    for it in items:
        out.append(f"{it.lo}-{it.hi}" if isinstance(it, Range) else _ser_group(it))
    return ",".join(out)


def serialize(e: FactorExpr | Stub) -> str:
    if isinstance(e, Stub):
        return f"stub({e.degree})"
    if isinstance(e, Atom):
        skips = "".join(f"({lo})" if lo == hi else f"({lo})-({hi})" for lo, hi in e.skips)
        exp = "" if e.exponent == 1 else (f"^{e.exponent}" if e.exponent > 0 else f"^{{{e.exponent}}}")
        sub = ",".join(_ser_group(g) for g in e.groups)
        return f"{MARKERS[e.kind]}{skips}{exp}_{{{sub}}}"
    if isinstance(e, Product):
        if not e.children:
            return "Id"
        return " * ".join(_ser_child(c) for c in e.children)
    if isinstance(e, Conjugated):
        return f"({serialize(e.base)})^{{{serialize(e.conjugator)}}}"
    if isinstance(e, IndexedFamily):
        vals = _ser_items(e.values)
        if e.excluded:
            vals += " \\ " + _ser_items(e.excluded)
        return f"({serialize(e.template)})_{{{e.var}={vals}}}"
    if isinstance(e, SymbolRef):
        if e.index is None:
            return e.name
        return f"{e.name}_{e.index}" if len(e.index) == 1 else f"{e.name}_{{{e.index}}}"
    raise TypeError(f"not an expression: {e!r}")


def _ser_child(c: FactorExpr) -> str:
    if isinstance(c, Product) and c.children:
        return f"({serialize(c)})"
    return serialize(c)


def serialize_document(doc: Document) -> str:
    lines = [f"let {k} = {serialize(v)}" for k, v in doc.lets.items()]
    lines += [f"factorization {k} = {serialize(v)}" for k, v in doc.factorizations.items()]
    return "\n".join(lines) + ("\n" if lines else "")


# --- resolution --------------------------------------------------------------------

_SIDES = {"plain": Side.BELOW, "under": Side.BELOW, "bar": Side.ABOVE}


class _Resolver:
    def __init__(self, config: PunctureConfig, symbols: Mapping[str, FactorExpr | Stub],
                 bindings: Mapping[str, FactorExpr | Stub | Factorization]):
        self.cfg = config
        self.symbols = dict(symbols)
        self.bindings = dict(bindings)
        self.n = config.count
        self.ident = ArtinWord(self.n)
        self._stack: list[str] = []

    def factors(self, e: FactorExpr, env: dict, path: tuple[str, ...]) -> list:
        if isinstance(e, Product):
            out = []
            for c in e.children:
                out.extend(self.factors(c, env, path))
            return out
        if isinstance(e, Atom):
            return self.atom_factors(e, env, path)
        if isinstance(e, Conjugated):
            c = self.braid(e.conjugator, env)
            return [f.conjugated(c) for f in self.factors(e.base, env, path)]
        if isinstance(e, IndexedFamily):
            out = []
            for v in e.expanded_values():
                out.extend(self.factors(e.template, {**env, e.var: v}, path))
            return out
        if isinstance(e, SymbolRef):
            return self.symbol_factors(e, env, path)
        raise TypeError(f"not an expression: {e!r}")

    def _lookup(self, ref: SymbolRef, env: dict) -> tuple[str, object]:
        index = ref.index
        if index is not None and index in env:
            v = env[index]
            if len(v) != 1:
                raise ResolveError(f"symbol index {index} bound to a pair")
            index = v[0]
        name = ref.full_name(index)
        if name in self.bindings:
            return name, self.bindings[name]
        if name in RESERVED:
            raise ResolveError(
                f"{name} is undefined: supply a binding (a factorization or a stub degree)")
        if name in self.symbols:
            return name, self.symbols[name]
        raise ResolveError(f"undefined symbol {name}")

    def symbol_factors(self, ref: SymbolRef, env: dict, path: tuple[str, ...]) -> list:
        name, value = self._lookup(ref, env)
        if name in self._stack:
            raise ResolveError(f"recursive definition of {name}")
        sub = path + (name,)
        if isinstance(value, Stub):
            return [StubFactor(name, value.degree, None, Origin(sub, name))]
        if isinstance(value, Factorization):
            if value.strand_count != self.n:
                raise ResolveError(f"binding {name} has the wrong strand count")
            return [f for f in value.factors]
        self._stack.append(name)
        try:
            return self.factors(value, {}, sub)
        finally:
            self._stack.pop()

    def _subst_label(self, lab: str, env: dict) -> tuple[str, ...]:
        base = lab.rstrip("'")
        if not base.isalpha():
            return (lab,)
        if base not in env:
            raise ResolveError(f"unbound placeholder {base}")
        v = env[base]
        if lab.endswith("'"):
            if len(v) != 1:
                raise ResolveError(f"cannot prime placeholder {base} bound to a pair")
            return (v[0] + "'",)
        return tuple(v)

    def subst_groups(self, a: Atom, env: dict) -> tuple[Group, Group]:
        out = []
        for g in a.groups:
            parts = [self._subst_label(lab, env) for lab in g]
            if len(parts) == 2 and any(len(p) != 1 for p in parts):
                raise ResolveError(f"pair {''.join(g)} has a placeholder bound to a pair")
            labs = tuple(x for p in parts for x in p)
            for lab in labs:
                if lab not in self.cfg:
                    raise ResolveError(f"unknown label {lab}")
            out.append(labs)
        return out[0], out[1]

    def composite(self, a: Atom, env: dict) -> CompositeBand:
        g1, g2 = self.subst_groups(a, env)
        cfg = self.cfg
        for g in (g1, g2):
            if len(g) == 2 and cfg.partner(g[0]) != g[1]:
                raise ResolveError(f"{g[0]},{g[1]} is not a primed pair")
        flipped: set[str] = set()
        for lo, hi in a.skips:
            lo_l, hi_l = self._subst_label(lo, env)[0], self._subst_label(hi, env)[-1]
            try:
                p, q = cfg.position(lo_l), cfg.position(hi_l)
            except KeyError as err:
                raise ResolveError(str(err)) from None
            if p > q:
                raise ResolveError(f"skip range ({lo})-({hi}) runs backwards")
            flipped.update(cfg.labels[p - 1:q])
        try:
            cb = CompositeBand.make(cfg, g1, g2, _SIDES[a.kind], flipped)
        except ValueError as err:
            raise ResolveError(str(err)) from None
        if a.kind == "plain" and cb.flags:
            raise ResolveError(
                f"plain Z{serialize_groups(g1, g2)} passes intermediate punctures; "
                "mark it under (uZ) or bar (bZ)")
        return cb

    def atom_factors(self, a: Atom, env: dict, path: tuple[str, ...]) -> list:
        cb = self.composite(a, env)
        text = f"{MARKERS[a.kind]}^{a.exponent}_{{{serialize_groups(cb.left, cb.right)[1:-1]}}}"
        try:
            pieces = expand_composite(cb, a.exponent)
        except ValueError as err:
            raise ResolveError(str(err)) from None
        return [Factor(p.twist, p.exponent, p.conjugator, Origin(path, text, k))
                for k, p in enumerate(pieces)]

    def braid(self, e: FactorExpr, env: dict) -> ArtinWord:
        """The braid denoted by a conjugator expression."""
        if isinstance(e, Atom):
            cb = self.composite(e, env)
            try:
                return cb.braid(e.exponent)
            except ValueError as err:
                raise ResolveError(str(err)) from None
        if isinstance(e, Product):
            w = self.ident
            for c in e.children:
                w = w * self.braid(c, env)
            return w
        if isinstance(e, Conjugated):
            b = self.braid(e.base, env)
            c = self.braid(e.conjugator, env)
            return c.inverse() * b * c
        if isinstance(e, IndexedFamily):
            w = self.ident
            for v in e.expanded_values():
                w = w * self.braid(e.template, {**env, e.var: v})
            return w
        if isinstance(e, SymbolRef):
            name, value = self._lookup(e, env)
            if isinstance(value, Stub):
                raise ResolveError(f"{name} is a stub and has no braid")
            if isinstance(value, Factorization):
                from .factorization import product_word
                return product_word(value)
            return self.braid(value, {})
        raise TypeError(f"not an expression: {e!r}")


def serialize_groups(g1: Group, g2: Group) -> str:
    return "{" + _ser_group(g1) + "," + _ser_group(g2) + "}"


def resolve(e: FactorExpr, config: PunctureConfig,
            symbols: Mapping[str, FactorExpr | Stub] | None = None,
            bindings: Mapping[str, FactorExpr | Stub | Factorization] | None = None,
            origin: Sequence[str] = ()) -> Factorization:
    """Flatten ``e`` into atomic factors on ``config``.

    ``symbols`` supplies ``let`` definitions, ``bindings`` supplies reserved
    symbols such as ``F1hat`` (a :class:`Stub`, an expression or a
    resolved factorization).
    """
    r = _Resolver(config, symbols or {}, bindings or {})
    return Factorization(config.count, tuple(r.factors(e, {}, tuple(origin))))


def resolve_braid(e: FactorExpr, config: PunctureConfig,
                  symbols: Mapping[str, FactorExpr | Stub] | None = None) -> ArtinWord:
    """The braid an expression denotes when read as a conjugator."""
    return _Resolver(config, symbols or {}, {}).braid(e, {})
