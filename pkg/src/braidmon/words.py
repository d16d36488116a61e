"""Words in the free group on the Gamma alphabet and the braid action on them."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

Letter = tuple[str, int]


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for label, sign in letters:
        if out and out[-1][0] == label and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((label, sign))
    return tuple(out)


_TOKEN = re.compile(r"^([A-Za-z0-9_']+?)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class GWord:
    """A word over labelled free generators; ``letters`` holds ``(label, +-1)``."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple((str(l), int(s)) for l, s in self.letters))
        for _, s in self.letters:
            if s not in (1, -1):
                raise ValueError("letter signs must be +1 or -1")

    @classmethod
    def gen(cls, label: str, power: int = 1) -> GWord:
        sign = 1 if power > 0 else -1
        return cls(((label, sign),) * abs(power))

    @classmethod
    def parse(cls, text: str) -> GWord:
        """Parse ``5 1 1'^-1`` style text; ``e`` alone (or empty) is the identity."""
        text = text.strip()
        if text in ("", "e"):
            return cls()
        letters: list[Letter] = []
        for tok in text.replace("*", " ").split():
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad word token {tok!r}")
            label, e = m.group(1), int(m.group(2) or 1)
            if e == 0:
                continue
            letters.extend([(label, 1 if e > 0 else -1)] * abs(e))
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(l if s > 0 else f"{l}^-1" for l, s in self.letters)

    def reduced(self) -> GWord:
        return GWord(free_reduce(self.letters))

    def cyclically_reduced(self) -> GWord:
        w = list(free_reduce(self.letters))
        while len(w) > 1 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
            w = w[1:-1]
        return GWord(tuple(w))

    def inverse(self) -> GWord:
        return GWord(tuple((l, -s) for l, s in reversed(self.letters)))

    def __mul__(self, other: GWord) -> GWord:
        return GWord(free_reduce(self.letters + other.letters))

    def __pow__(self, k: int) -> GWord:
        base = self if k >= 0 else self.inverse()
        return GWord(free_reduce(base.letters * abs(k)))

    def conj(self, by: GWord) -> GWord:
        """``self^by = by^-1 * self * by``."""
        return by.inverse() * self * by

    def labels(self) -> set[str]:
        return {l for l, _ in self.letters}

    def substitute(self, images: dict[str, GWord]) -> GWord:
        """Apply the endomorphism sending each generator to ``images[label]`` (missing: fixed)."""
        out: list[Letter] = []
        for label, sign in self.letters:
            img = images.get(label)
            if img is None:
                out.append((label, sign))
            else:
                out.extend(img.letters if sign > 0 else img.inverse().letters)
        return GWord(free_reduce(out))


def commutator(a: GWord, b: GWord) -> GWord:
    """``[a, b] = a^-1 b^-1 a b``."""
    return a.inverse() * b.inverse() * a * b


def braid_action_images(labels: Sequence[str], letter: int) -> dict[str, GWord]:
    """Images of the free generators under one Artin letter.

    Right action: with ``x_i`` the generator at position ``i``,
    ``sigma_i`` sends ``x_i -> x_{i+1}`` and ``x_{i+1} -> x_{i+1}^-1 x_i x_{i+1}``;
    ``sigma_i^-1`` is the inverse automorphism.
    """
    i = abs(letter) - 1
    a, b = labels[i], labels[i + 1]
    xa, xb = GWord.gen(a), GWord.gen(b)
    if letter > 0:
        return {a: xb, b: xa.conj(xb)}
    return {a: xb.conj(xa.inverse()), b: xa}


def act(word: GWord, braid_letters: Iterable[int], labels: Sequence[str]) -> GWord:
    """Right action of a braid (letters applied left to right) on a free-group word."""
    for x in braid_letters:
        word = word.substitute(braid_action_images(labels, x))
    return word
