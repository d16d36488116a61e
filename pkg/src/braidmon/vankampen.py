"""From braid monodromy factors to fundamental-group relations.

Each atomic factor ``(Z^r)^c`` determines two loops ``A, B`` in the free
group of the punctured fibre (generators ``Gamma_j`` labelled like the
punctures). The relation is ``A = B`` for a branch point (r = 1),
``[A, B] = 1`` for a node (r = 2) and ``ABA = BAB`` for a cusp (r = 3).
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .bands import PathDescriptor, PunctureConfig, _slide_letters
from .braid import ArtinWord
from .factorization import Factor, Factorization, StubFactor
from .words import GWord, act


class RelationKind(enum.Enum):
    BRANCH_POINT = "branch"
    NODE = "node"
    CUSP = "cusp"
    SQUARE = "square"
    CUSTOM = "custom"


CUSP_FORMS = ("braid", "involutive")


@dataclass(frozen=True)
class Relation:
    """``left = right`` with the loops it was built from (when known)."""

    kind: RelationKind
    left: GWord
    right: GWord
    origin: str = ""
    loops: tuple[GWord, GWord] | None = None

    def relator(self) -> GWord:
        return (self.left * self.right.inverse()).cyclically_reduced()

    def labels(self) -> set[str]:
        return self.left.labels() | self.right.labels()

    def substitute(self, images: dict[str, GWord], origin: str | None = None) -> Relation:
        loops = None
        if self.loops is not None:
            loops = (self.loops[0].substitute(images), self.loops[1].substitute(images))
        return Relation(self.kind, self.left.substitute(images), self.right.substitute(images),
                        self.origin if origin is None else origin, loops)

    def __str__(self) -> str:
        return f"{self.left} = {self.right}"


def branch_relation(a: GWord, b: GWord, origin: str = "") -> Relation:
    return Relation(RelationKind.BRANCH_POINT, a, b, origin, (a, b))


def node_relation(a: GWord, b: GWord, origin: str = "") -> Relation:
    return Relation(RelationKind.NODE, a * b, b * a, origin, (a, b))


def cusp_relation(a: GWord, b: GWord, origin: str = "", form: str = "braid") -> Relation:
    if form == "braid":
        return Relation(RelationKind.CUSP, a * b * a, b * a * b, origin, (a, b))
    if form == "involutive":
        return Relation(RelationKind.CUSP, (a * b) ** 3, GWord(), origin, (a, b))
    raise ValueError(f"unknown cusp form {form!r}")


def square_relation(label: str) -> Relation:
    g = GWord.gen(label)
    return Relation(RelationKind.SQUARE, g * g, GWord(), f"square {label}", (g, g))


@dataclass(frozen=True)
class GPresentation:
    generators: tuple[str, ...]
    relations: tuple[Relation, ...] = ()

    def __post_init__(self):
        known = set(self.generators)
        for r in self.relations:
            extra = r.labels() - known
            if extra:
                raise ValueError(f"relation {r} uses undeclared generators {sorted(extra)}")

    def relators(self) -> list[GWord]:
        return [r.relator() for r in self.relations]

    def to_text(self) -> str:
        lines = ["gen: " + " ".join(self.generators)]
        lines.extend(f"rel: {r.left} = {r.right}" for r in self.relations)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> GPresentation:
        gens: list[str] = []
        rels: list[Relation] = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("gen:"):
                gens.extend(line[4:].split())
            elif line.startswith("rel:"):
                body = line[4:]
                left, _, right = body.partition("=")
                if not _:
                    rels.append(Relation(RelationKind.CUSTOM, GWord.parse(left), GWord()))
                else:
                    rels.append(Relation(RelationKind.CUSTOM, GWord.parse(left), GWord.parse(right)))
            else:
                raise ValueError(f"unrecognised presentation line: {raw!r}")
        return cls(tuple(gens), tuple(rels))


# --- loops ---------------------------------------------------------------------

def _path_braid(path: PathDescriptor, config: PunctureConfig,
                conjugator: ArtinWord | None) -> tuple[int, list[int]]:
    path.validate(config)
    w = _slide_letters(config, path.flags, 1)
    letters = [-x for x in reversed(w)]
    if conjugator is not None:
        letters.extend(conjugator.letters)
    return config.position(path.left_end), letters


def loops_from_path(path: PathDescriptor, config: PunctureConfig,
                    conjugator: ArtinWord | None = None) -> tuple[GWord, GWord]:
    """The loops ``A`` (around the left end) and ``B`` (around the right end).

    The band ``Z`` along ``path`` is ``W sigma_i W^-1`` where ``W`` slides
    the right endpoint next to the left one; ``A`` and ``B`` are the images
    of the standard generators at positions ``i, i+1`` under the braid
    ``W^-1 c`` (``c`` the factor's conjugator).
    """
    i, letters = _path_braid(path, config, conjugator)
    labels = config.labels
    a = act(GWord.gen(labels[i - 1]), letters, labels)
    b = act(GWord.gen(labels[i]), letters, labels)
    return a, b


def loops_from_factor(fac: Factor) -> tuple[GWord, GWord]:
    return loops_from_path(fac.twist.path, fac.twist.config, fac.conjugator)


def relation_from_factor(fac: Factor | StubFactor, cusp_form: str = "braid") -> list[Relation]:
    if isinstance(fac, StubFactor):
        raise ValueError(f"{fac.name} is a stub and carries no path data")
    a, b = loops_from_factor(fac)
    origin = str(fac.origin)
    if fac.exponent == 1:
        return [branch_relation(a, b, origin)]
    if fac.exponent == 2:
        return [node_relation(a, b, origin)]
    if fac.exponent == 3:
        return [cusp_relation(a, b, origin, cusp_form)]
    raise ValueError(f"no van Kampen relation for exponent {fac.exponent}")


def presentation_from_factorization(f: Factorization, config: PunctureConfig,
                                    mode: str = "pi1", cusp_form: str = "braid") -> GPresentation:
    """Generators are the puncture labels; one relation per factor, in order.

    ``mode="quotient"`` appends ``Gamma_j^2 = 1`` for every generator, primed
    and unprimed alike.
    """
    if mode not in ("pi1", "quotient"):
        raise ValueError(f"unknown mode {mode!r}")
    if f.strand_count != config.count:
        raise ValueError("factorization and configuration disagree on the strand count")
    rels: list[Relation] = []
    for fac in f.factors:
        rels.extend(relation_from_factor(fac, cusp_form))
    if mode == "quotient":
        rels.extend(square_relation(lab) for lab in config.labels)
    return GPresentation(tuple(config.labels), tuple(rels))


# --- orbits and substitutions ----------------------------------------------------------

def pair_twist_images(config: PunctureConfig, j: str, m: int) -> dict[str, GWord]:
    """Letter action of ``Z_{jj'}^m`` on the pair of ``j`` (iterated single twists)."""
    a, b = config.pair_of(j)
    pos = config.position(a)
    step = 1 if m > 0 else -1
    images = {a: GWord.gen(a), b: GWord.gen(b)}
    for _ in range(abs(m)):
        one = act(GWord.gen(a), [step * pos], config.labels), act(GWord.gen(b), [step * pos], config.labels)
        images = {a: one[0].substitute(images), b: one[1].substitute(images)}
    return images


def invariance_orbit(rels: Sequence[Relation], config: PunctureConfig,
                     pairs: Iterable[str] | None = None, bound: int = 1) -> list[Relation]:
    """All images of ``rels`` under ``rho = prod_j Z_{jj'}^{m_j}`` with ``|m_j| <= bound``.

    The identity tuple comes first, so the original relations lead the list.
    """
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if pairs is None:
        pairs = [config.pair_of(lab)[0] for lab in config.labels
                 if config.partner(lab) is not None and not lab.endswith("'")]
    pairs = list(pairs)
    used = set().union(*(r.labels() for r in rels)) if rels else set()
    pairs = [p for p in pairs if set(config.pair_of(p)) & used]
    out: list[Relation] = []
    powers = [0] + [m for k in range(1, bound + 1) for m in (k, -k)]
    for ms in itertools.product(powers, repeat=len(pairs)):
        images: dict[str, GWord] = {}
        for p, m in zip(pairs, ms):
            if m:
                images.update(pair_twist_images(config, p, m))
        tag = ",".join(f"{p}^{m}" for p, m in zip(pairs, ms) if m)
        for r in rels:
            out.append(r if not tag else r.substitute(images, f"{r.origin} rho[{tag}]"))
    return out


def generator_images(config: PunctureConfig, c: ArtinWord) -> dict[str, GWord]:
    """``Gamma_j -> (Gamma_j)`` under the right action of ``c``."""
    return {lab: act(GWord.gen(lab), c.letters, config.labels) for lab in config.labels}


def conjugate_generators(rels: Sequence[Relation], c: ArtinWord,
                         config: PunctureConfig) -> list[Relation]:
    images = generator_images(config, c)
    return [r.substitute(images) for r in rels]


# --- comparison modulo squares ------------------------------------------------------

def involutive_reduce(w: GWord) -> tuple[str, ...]:
    """Normal form of ``w`` once every generator is an involution.

    In the free product of copies of Z/2 a word is reduced exactly when no
    two adjacent letters coincide, so this is a canonical spelling.
    """
    out: list[str] = []
    for lab, _ in w.letters:
        if out and out[-1] == lab:
            out.pop()
        else:
            out.append(lab)
    return tuple(out)


def involutive_text(w: GWord) -> str:
    return " ".join(involutive_reduce(w)) or "e"


def same_loops_mod_squares(pair1: tuple[GWord, GWord], pair2: tuple[GWord, GWord],
                           ordered: bool = False) -> bool:
    x = tuple(involutive_reduce(w) for w in pair1)
    y = tuple(involutive_reduce(w) for w in pair2)
    return x == y or (not ordered and x == y[::-1])


def _reduce_labels(seq: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for lab in seq:
        if out and out[-1] == lab:
            out.pop()
        else:
            out.append(lab)
    return tuple(out)


def _split_conjugate(w: GWord) -> tuple[tuple[str, ...], str] | None:
    """``w = u a u^-1`` modulo squares -> ``(u, a)``; None if not of that shape."""
    t = involutive_reduce(w)
    k = len(t) // 2
    if len(t) % 2 == 0 or t[:k] != t[:k:-1]:
        return None
    return t[:k], t[k]


def relation_key(rel: Relation) -> tuple | None:
    """A label for ``rel`` that ignores squares and simultaneous conjugation.

    Both loops must be conjugates of generators, ``A = u a u^-1`` and
    ``B = v b v^-1`` (modulo squares). Conjugating by ``u`` gives
    ``(a, w b w^-1)`` with ``w = u^-1 v``, and ``w`` only matters up to the
    double coset ``<a> w <b>``, whose shortest element is canonical. The key
    is the smaller of the two readings ``(A, B)`` and ``(B, A)``; relations
    with equal keys define the same normal subgroup once every generator is
    an involution. Returns None when the loops have another shape.
    """
    if rel.loops is None:
        return None
    sides = [_split_conjugate(x) for x in rel.loops]
    if None in sides:
        return None
    keys = []
    for (u, a), (v, b) in (sides, sides[::-1]):
        w = _reduce_labels(u[::-1] + v)
        if w and w[0] == a:
            w = w[1:]
        if w and w[-1] == b:
            w = w[:-1]
        keys.append((a, w, b))
    return rel.kind.value, min(keys)


# --- compact relation notation ------------------------------------------------------------

_LOOP = re.compile(r"^\s*([0-9]+'?)\s*(?:\^\{([^}]*)\})?\s*$")


def parse_loop(text: str) -> GWord:
    """``5'^{6 6'}`` -> ``(Gamma_5')^(Gamma_6 Gamma_6')``."""
    m = _LOOP.match(text)
    if not m:
        raise ValueError(f"bad loop {text!r}")
    base = GWord.gen(m.group(1))
    return base.conj(GWord.parse(m.group(2))) if m.group(2) else base


def parse_relation_line(line: str, cusp_form: str = "involutive") -> Relation:
    """One line of the compact notation: ``cusp A ; B``, ``node A ; B``,
    ``equal A ; B`` or ``square j`` (with an optional leading tag ``[k]``)."""
    tag = ""
    line = line.strip()
    m = re.match(r"^\[(\w+)\]\s*(.*)$", line)
    if m:
        tag, line = m.group(1), m.group(2)
    kind, _, rest = line.partition(" ")
    if kind == "square":
        r = square_relation(rest.strip())
        return Relation(r.kind, r.left, r.right, tag or r.origin, r.loops)
    a_text, sep, b_text = rest.partition(";")
    if not sep:
        raise ValueError(f"expected 'A ; B' in {line!r}")
    a, b = parse_loop(a_text), parse_loop(b_text)
    if kind == "cusp":
        return cusp_relation(a, b, tag, cusp_form)
    if kind == "node":
        return node_relation(a, b, tag)
    if kind == "equal":
        return branch_relation(a, b, tag)
    raise ValueError(f"unknown relation kind {kind!r}")


def parse_relation_list(text: str, cusp_form: str = "involutive") -> list[Relation]:
    rels = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rels.append(parse_relation_line(line, cusp_form))
    return rels
