"""Exact arithmetic in the Artin braid group B_n.

A braid word is a sequence of signed generator indices: ``i`` stands for
sigma_i and ``-i`` for its inverse, ``1 <= i <= n - 1``. Words compose left
to right, so ``a * b`` performs ``a`` first.

Equality is decided by the Garside left-canonical form
``Delta^p A_1 ... A_k``. Each canonical factor is a permutation braid, stored
as the tuple ``perm`` with ``perm[s] = e`` when the strand starting at
position ``s`` ends at position ``e`` (0-based). Dynnikov coordinates give a
second, independent equality test.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence


@dataclass(frozen=True)
class Permutation:
    """A permutation of ``1..n``; ``images[k - 1]`` is the image of ``k``.

    Products read left to right: ``(p * q)(k) = q(p(k))``, matching the
    order in which braid words are composed.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Permutation:
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        images = list(range(1, n + 1))
        for cycle in cycles:
            for k, x in enumerate(cycle):
                images[x - 1] = cycle[(k + 1) % len(cycle)]
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise ValueError("permutation degrees differ")
        return Permutation(tuple(other.images[x - 1] for x in self.images))

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for k, x in enumerate(self.images, start=1):
            inv[x - 1] = k
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(x == k for k, x in enumerate(self.images, start=1))

    def moved_points(self) -> list[int]:
        return [k for k, x in enumerate(self.images, start=1) if x != k]

    def is_transposition(self) -> bool:
        moved = self.moved_points()
        return len(moved) == 2 and self(moved[0]) == moved[1]

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(1, self.degree + 1):
            if start in seen or self(start) == start:
                continue
            cycle = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cycle.append(x)
                seen.add(x)
                x = self(x)
            out.append(tuple(cycle))
        return out

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


_LETTER = re.compile(r"^s(\d+)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class ArtinWord:
    """A word in the Artin generators of B_n (stored as signed indices)."""

    strand_count: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strand_count < 1:
            raise ValueError("strand_count must be positive")
        object.__setattr__(self, "letters", tuple(self.letters))
        for x in self.letters:
            if x == 0 or abs(x) >= self.strand_count:
                raise ValueError(
                    f"generator {x} out of range for B_{self.strand_count}")

    @classmethod
    def identity(cls, n: int) -> ArtinWord:
        return cls(n, ())

    @classmethod
    def generator(cls, n: int, i: int, exponent: int = 1) -> ArtinWord:
        sign = 1 if exponent > 0 else -1
        return cls(n, (sign * i,) * abs(exponent))

    @classmethod
    def parse(cls, text: str, n: int) -> ArtinWord:
        """Parse ``s1 s2^-1 s3^2`` (an empty string or ``1`` is the identity)."""
        letters: list[int] = []
        for tok in text.replace("*", " ").split():
            if tok == "1":
                continue
            m = _LETTER.match(tok)
            if not m:
                raise ValueError(f"bad braid letter {tok!r}")
            i, e = int(m.group(1)), int(m.group(2) or 1)
            letters.extend([i if e > 0 else -i] * abs(e))
        return cls(n, tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"s{x}" if x > 0 else f"s{-x}^-1" for x in self.letters)

    def reduced(self) -> ArtinWord:
        return ArtinWord(self.strand_count, _free_reduce(self.letters))

    def inverse(self) -> ArtinWord:
        return ArtinWord(self.strand_count, tuple(-x for x in reversed(self.letters)))

    def __mul__(self, other: ArtinWord) -> ArtinWord:
        return multiply(self, other)

    def __pow__(self, k: int) -> ArtinWord:
        base = self if k >= 0 else self.inverse()
        return ArtinWord(self.strand_count, base.letters * abs(k)).reduced()

    @property
    def degree(self) -> int:
        return degree(self)

    def mirror(self) -> ArtinWord:
        """Image under sigma_i -> sigma_i^-1 (the complex-conjugation automorphism)."""
        return ArtinWord(self.strand_count, tuple(-x for x in self.letters))


def _check_same_n(a: ArtinWord, b: ArtinWord) -> None:
    if a.strand_count != b.strand_count:
        raise ValueError(
            f"strand counts differ: {a.strand_count} vs {b.strand_count}")


def multiply(a: ArtinWord, b: ArtinWord) -> ArtinWord:
    _check_same_n(a, b)
    return ArtinWord(a.strand_count, _free_reduce(a.letters + b.letters))


def conjugate(a: ArtinWord, c: ArtinWord) -> ArtinWord:
    """``(a)_c = c^-1 a c``."""
    _check_same_n(a, c)
    return ArtinWord(a.strand_count,
                     _free_reduce(c.inverse().letters + a.letters + c.letters))


def degree(a: ArtinWord) -> int:
    return sum(1 if x > 0 else -1 for x in a.letters)


def half_twist(n: int) -> ArtinWord:
    """The positive half twist Delta_n."""
    letters: list[int] = []
    for top in range(n - 1, 0, -1):
        letters.extend(range(1, top + 1))
    return ArtinWord(n, tuple(letters))


def full_twist(n: int) -> ArtinWord:
    """``(sigma_1 ... sigma_{n-1})^n``, the generator of the centre of B_n."""
    if n < 2:
        raise ValueError("full_twist needs n >= 2")
    return ArtinWord(n, tuple(range(1, n)) * n)


def induced_permutation(a: ArtinWord) -> Permutation:
    """Where each strand ends up: ``images[s - 1]`` is the final position of strand ``s``."""
    n = a.strand_count
    at = list(range(n))
    for x in a.letters:
        i = abs(x) - 1
        at[i], at[i + 1] = at[i + 1], at[i]
    images = [0] * n
    for pos, strand in enumerate(at):
        images[strand] = pos + 1
    return Permutation(tuple(images))


# --- Garside normal form ---------------------------------------------------

def _inverse(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for s, e in enumerate(perm):
        inv[e] = s
    return inv


def _tau(perm: Sequence[int]) -> tuple[int, ...]:
    """Conjugation by Delta: sigma_i -> sigma_{n-i}."""
    n = len(perm)
    return tuple(n - 1 - perm[n - 1 - s] for s in range(n))


def _left_weight(a_inv: list[int], b: list[int]) -> bool:
    """Make the pair (A, B) left-weighted in place.

    ``a_inv`` is the end->start table of A, ``b`` the start->end table of B.
    Letters are moved from the front of B to the back of A until every
    left descent of B is a right descent of A. Returns whether anything moved.
    """
    n = len(b)
    stack = list(range(n - 1))
    moved = False
    while stack:
        i = stack.pop()
        if b[i] > b[i + 1] and a_inv[i] < a_inv[i + 1]:
            a_inv[i], a_inv[i + 1] = a_inv[i + 1], a_inv[i]
            b[i], b[i + 1] = b[i + 1], b[i]
            moved = True
            if i > 0:
                stack.append(i - 1)
            if i < n - 2:
                stack.append(i + 1)
    return moved


def simple_to_letters(perm: Sequence[int]) -> list[int]:
    """A positive word (1-based letters) for the permutation braid ``perm``."""
    p = list(perm)
    letters: list[int] = []
    n = len(p)
    i = 0
    while i < n - 1:
        if p[i] > p[i + 1]:
            letters.append(i + 1)
            p[i], p[i + 1] = p[i + 1], p[i]
            i = max(i - 1, 0)
        else:
            i += 1
    return letters


@dataclass(frozen=True)
class NormalForm:
    """Left-canonical form ``Delta^delta_power * A_1 * ... * A_k``."""

    strand_count: int
    delta_power: int
    factors: tuple[tuple[int, ...], ...]

    @property
    def canonical_length(self) -> int:
        return len(self.factors)

    def is_identity(self) -> bool:
        return self.delta_power == 0 and not self.factors

    def to_word(self) -> ArtinWord:
        n = self.strand_count
        letters = list(half_twist(n).letters) * abs(self.delta_power)
        if self.delta_power < 0:
            letters = [-x for x in letters]
        for f in self.factors:
            letters.extend(simple_to_letters(f))
        return ArtinWord(n, tuple(letters))

    def __mul__(self, other: NormalForm) -> NormalForm:
        builder = NormalFormBuilder.from_normal_form(self)
        builder.append_normal_form(other)
        return builder.result()

    def __str__(self) -> str:
        parts = [f"D^{self.delta_power}"]
        parts += ["[" + " ".join(str(x + 1) for x in f) + "]" for f in self.factors]
        return " ".join(parts)


class NormalFormBuilder:
    """Streams braid words into a left-canonical form.

    Memory is one normal form; each appended simple element costs one
    right-to-left left-weighting pass. Inverse letters are turned into
    ``(right complement) * Delta^-1`` and the Delta^-1 is pushed to the front
    by toggling a tau-twist flag instead of rewriting the stored factors.
    """

    def __init__(self, n: int):
        self.n = n
        self._delta = tuple(range(n - 1, -1, -1))
        self._identity = tuple(range(n))
        self._power = 0
        self._twisted = False
        self._factors: list[list[int]] = []

    @classmethod
    def from_normal_form(cls, nf: NormalForm) -> NormalFormBuilder:
        b = cls(nf.strand_count)
        b._power = nf.delta_power
        b._factors = [list(f) for f in nf.factors]
        return b

    def _push_simple(self, perm: Sequence[int]) -> None:
        perm = tuple(perm)
        if self._twisted:
            perm = _tau(perm)
        if perm == self._identity:
            return
        f = self._factors
        f.append(list(perm))
        j = len(f) - 1
        while j > 0:
            a_inv = _inverse(f[j - 1])
            if not _left_weight(a_inv, f[j]):
                break
            f[j - 1] = _inverse(a_inv)
            j -= 1
        while f and tuple(f[-1]) == self._identity:
            f.pop()
        lead = 0
        while lead < len(f) and tuple(f[lead]) == self._delta:
            lead += 1
        if lead:
            del f[:lead]
            self._power += lead

    def _push_delta_power(self, k: int) -> None:
        self._power += k
        if k % 2:
            self._twisted = not self._twisted

    def append_word(self, word: ArtinWord) -> NormalFormBuilder:
        if word.strand_count != self.n:
            raise ValueError("strand counts differ")
        n = self.n
        block_inv: list[int] | None = None   # positive run, end->start table
        neg: list[int] | None = None         # inverse run Y (start->end), word = Y^-1

        def flush_pos():
            nonlocal block_inv
            if block_inv is not None:
                self._push_simple(_inverse(block_inv))
                block_inv = None

        def flush_neg():
            nonlocal neg
            if neg is not None:
                y_inv = _inverse(neg)
                self._push_simple([n - 1 - y_inv[e] for e in range(n)])
                self._push_delta_power(-1)
                neg = None

        for x in word.letters:
            i = abs(x) - 1
            if x > 0:
                flush_neg()
                if block_inv is None:
                    block_inv = list(range(n))
                elif block_inv[i] > block_inv[i + 1]:
                    flush_pos()
                    block_inv = list(range(n))
                block_inv[i], block_inv[i + 1] = block_inv[i + 1], block_inv[i]
            else:
                flush_pos()
                if neg is None:
                    neg = list(range(n))
                elif neg[i] > neg[i + 1]:
                    flush_neg()
                    neg = list(range(n))
                neg[i], neg[i + 1] = neg[i + 1], neg[i]
        flush_pos()
        flush_neg()
        return self

    def append_normal_form(self, nf: NormalForm) -> NormalFormBuilder:
        self._push_delta_power(nf.delta_power)
        for f in nf.factors:
            self._push_simple(f)
        return self

    def result(self) -> NormalForm:
        factors = [tuple(f) for f in self._factors]
        if self._twisted:
            factors = [_tau(f) for f in factors]
        return NormalForm(self.n, self._power, tuple(factors))


def normal_form(a: ArtinWord) -> NormalForm:
    return NormalFormBuilder(a.strand_count).append_word(a).result()


def equals(a: ArtinWord, b: ArtinWord) -> bool:
    _check_same_n(a, b)
    return normal_form(a) == normal_form(b)


def is_identity(a: ArtinWord) -> bool:
    return normal_form(a).is_identity()


@lru_cache(maxsize=None)
def _delta_nf(n: int) -> NormalForm:
    return NormalForm(n, 2, ())


def is_full_twist(a: ArtinWord) -> bool:
    return normal_form(a) == _delta_nf(a.strand_count)


# --- Dynnikov coordinates ---------------------------------------------------

def _pos(x: int) -> int:
    return x if x > 0 else 0


def _neg(x: int) -> int:
    return x if x < 0 else 0


def _dynnikov_step(a: list[int], b: list[int], p: int, sign: int) -> None:
    x1, y1, x2, y2 = a[p], b[p], a[p + 1], b[p + 1]
    if sign > 0:
        z = x1 - _neg(y1) - x2 + _pos(y2)
        a[p] = x1 + _pos(y1) + _pos(_pos(y2) - z)
        b[p] = y2 - _pos(z)
        a[p + 1] = x2 + _neg(y2) + _neg(_neg(y1) + z)
        b[p + 1] = y1 + _pos(z)
    else:
        z = x1 + _neg(y1) - x2 - _pos(y2)
        a[p] = x1 - _pos(y1) - _pos(_pos(y2) + z)
        b[p] = y2 + _neg(z)
        a[p + 1] = x2 - _neg(y2) - _neg(_neg(y1) - z)
        b[p + 1] = y1 - _neg(z)


def dynnikov_coordinates(word: ArtinWord) -> tuple[int, ...]:
    """Coordinates of the image of the standard lamination under ``word``.

    B_n is embedded in B_{n+2} (sigma_i -> sigma_{i+1}) so that every
    generator acts through the interior update rule; the embedding is
    injective and the action on the standard lamination is faithful.
    """
    n = word.strand_count
    a = [0] * n
    b = [1] * n
    for x in word.letters:
        _dynnikov_step(a, b, abs(x) - 1, x)
    return tuple(a) + tuple(b)


def dynnikov_equal(a: ArtinWord, b: ArtinWord) -> bool:
    _check_same_n(a, b)
    return dynnikov_coordinates(a) == dynnikov_coordinates(b)
