"""Punctures on the real line, band paths and the half-twists they induce.

Punctures sit on the real axis in label order (``1, 1', 2, 2', ...``). A band
path joins two punctures and passes every puncture strictly between them
either above or below the axis. The half-twist along the path is the Artin
word ``W sigma_i W^-1`` where ``W`` slides the right endpoint leftwards past
the intermediate punctures, one letter per puncture, with the letter sign
fixed by the side on which the path passes that puncture.

Composite subscripts (``Z^2_{33',44'}``, ``Z^3_{11',4}``) treat a primed pair
as a block of two adjacent punctures; they are expanded into atomic band
twists by :func:`expand_composite`.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .braid import ArtinWord, half_twist


class Side(enum.Enum):
    ABOVE = "above"
    BELOW = "below"

    def flipped(self) -> Side:
        return Side.BELOW if self is Side.ABOVE else Side.ABOVE


# Which side of the axis contributes *positive* conjugator letters. The
# van Kampen fixtures (loops read off the factorization tables) pin this
# to "above": a path passing a puncture below the axis contributes the
# inverse generator. ``set_side_convention`` flips it globally.
_positive_side = "above"


def set_side_convention(positive_side: str) -> None:
    """Choose the side (``"above"`` or ``"below"``) giving positive conjugator letters."""
    global _positive_side
    key = positive_side.lower()
    if key not in ("above", "below"):
        raise ValueError(f"unknown side convention {positive_side!r}")
    _positive_side = key


def side_convention() -> str:
    return _positive_side


def side_sign(side: Side) -> int:
    return 1 if side.value == _positive_side else -1


# --- puncture configurations -------------------------------------------------

@dataclass(frozen=True)
class PunctureConfig:
    """Ordered puncture labels on the real line plus the ``j <-> j'`` pairing."""

    labels: tuple[str, ...]
    pairing: tuple[tuple[str, str], ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "pairing", tuple(tuple(p) for p in self.pairing))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("puncture labels must be distinct")
        index = {lab: k + 1 for k, lab in enumerate(self.labels)}
        for a, b in self.pairing:
            if a not in index or b not in index:
                raise ValueError(f"pair ({a},{b}) uses an unknown label")
            if index[b] != index[a] + 1:
                raise ValueError(f"pair ({a},{b}) is not adjacent")
        object.__setattr__(self, "_index", index)

    @classmethod
    def paired(cls, pairs: int) -> PunctureConfig:
        labels: list[str] = []
        for j in range(1, pairs + 1):
            labels += [str(j), f"{j}'"]
        return cls(tuple(labels), tuple((str(j), f"{j}'") for j in range(1, pairs + 1)))

    @classmethod
    def plain(cls, n: int) -> PunctureConfig:
        return cls(tuple(str(j) for j in range(1, n + 1)))

    @classmethod
    def from_name(cls, name: str) -> PunctureConfig:
        """``54p`` (27 primed pairs), ``12p`` (6 pairs) or ``n=<k>`` (labels 1..k)."""
        name = name.strip()
        m = re.fullmatch(r"(\d+)p", name)
        if m:
            k = int(m.group(1))
            if k % 2:
                raise ValueError(f"paired configuration needs an even count: {name}")
            return cls.paired(k // 2)
        m = re.fullmatch(r"n=(\d+)", name)
        if m:
            return cls.plain(int(m.group(1)))
        raise ValueError(f"unknown configuration {name!r} (use e.g. 54p or n=5)")

    @property
    def count(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def position(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown puncture label {label!r}") from None

    def label_at(self, pos: int) -> str:
        return self.labels[pos - 1]

    def partner(self, label: str) -> str | None:
        for a, b in self.pairing:
            if label == a:
                return b
            if label == b:
                return a
        return None

    def pair_of(self, label: str) -> tuple[str, str]:
        for a, b in self.pairing:
            if label in (a, b):
                return a, b
        raise ValueError(f"label {label!r} has no paired partner")

    def between(self, a: str, b: str) -> tuple[str, ...]:
        pa, pb = sorted((self.position(a), self.position(b)))
        return self.labels[pa:pb - 1]


# --- paths and half-twists ---------------------------------------------------

@dataclass(frozen=True)
class PathDescriptor:
    """A path from ``left_end`` to ``right_end`` with a side per intermediate puncture."""

    left_end: str
    right_end: str
    flags: tuple[tuple[str, Side], ...] = ()

    @classmethod
    def make(cls, config: PunctureConfig, a: str, b: str,
             default: Side = Side.BELOW, flipped: Iterable[str] = ()) -> PathDescriptor:
        """Path between ``a`` and ``b`` (any order) passing ``default`` except at ``flipped``."""
        if config.position(a) > config.position(b):
            a, b = b, a
        flipped = set(flipped)
        mids = config.between(a, b)
        unknown = flipped - set(mids)
        if unknown:
            raise ValueError(f"flipped punctures {sorted(unknown)} are not between {a} and {b}")
        return cls(a, b, tuple((m, default.flipped() if m in flipped else default) for m in mids))

    def flag(self, label: str) -> Side:
        for lab, side in self.flags:
            if lab == label:
                return side
        raise KeyError(label)

    def validate(self, config: PunctureConfig) -> None:
        pa, pb = config.position(self.left_end), config.position(self.right_end)
        if pa >= pb:
            raise ValueError("left_end must lie left of right_end")
        if tuple(lab for lab, _ in self.flags) != config.between(self.left_end, self.right_end):
            raise ValueError(
                f"flags must cover exactly the punctures between {self.left_end} and {self.right_end}")

    def conjugate(self) -> PathDescriptor:
        return PathDescriptor(self.left_end, self.right_end,
                              tuple((lab, s.flipped()) for lab, s in self.flags))


@dataclass(frozen=True)
class BandTwist:
    path: PathDescriptor
    config: PunctureConfig

    def __post_init__(self):
        self.path.validate(self.config)

    @property
    def endpoints(self) -> tuple[str, str]:
        return self.path.left_end, self.path.right_end

    def word(self) -> ArtinWord:
        return band_word(self)

    def __str__(self) -> str:
        marks = "".join("^" if s is Side.ABOVE else "_" for _, s in self.path.flags)
        return f"Z[{self.path.left_end},{self.path.right_end}{':' + marks if marks else ''}]"


def _slide_letters(config: PunctureConfig, flags: Sequence[tuple[str, Side]],
                   block: int) -> list[int]:
    """Letters sliding a block of ``block`` strands leftwards past each flagged puncture."""
    letters: list[int] = []
    for lab, side in reversed(flags):
        m = config.position(lab)
        e = side_sign(side)
        letters.extend(e * (m + k) for k in range(block))
    return letters


def band_word(t: BandTwist) -> ArtinWord:
    cfg = t.config
    i = cfg.position(t.path.left_end)
    w = _slide_letters(cfg, t.path.flags, 1)
    letters = w + [i] + [-x for x in reversed(w)]
    return ArtinWord(cfg.count, tuple(letters))


def complex_conjugate(t: BandTwist) -> BandTwist:
    return BandTwist(t.path.conjugate(), t.config)


def band(config: PunctureConfig, a: str, b: str, default: Side = Side.BELOW,
         flipped: Iterable[str] = ()) -> BandTwist:
    return BandTwist(PathDescriptor.make(config, a, b, default, flipped), config)


def rho_twist(j: str, m: int, config: PunctureConfig) -> ArtinWord:
    """``Z_{jj'}^m``: the m-th power of the adjacent half-twist on the pair of ``j``."""
    a, _ = config.pair_of(j)
    return ArtinWord.generator(config.count, config.position(a), m) if m else ArtinWord(config.count)


# --- composite band twists ----------------------------------------------------

@dataclass(frozen=True)
class CompositeBand:
    """Band between two endpoint groups, each a single puncture or a primed pair."""

    left: tuple[str, ...]
    right: tuple[str, ...]
    flags: tuple[tuple[str, Side], ...]
    config: PunctureConfig
    side: Side = Side.BELOW

    @classmethod
    def make(cls, config: PunctureConfig, g1: Sequence[str], g2: Sequence[str],
             default: Side = Side.BELOW, flipped: Iterable[str] = ()) -> CompositeBand:
        g1, g2 = tuple(g1), tuple(g2)
        for g in (g1, g2):
            pos = [config.position(x) for x in g]
            if len(g) not in (1, 2) or pos != list(range(pos[0], pos[0] + len(g))):
                raise ValueError(f"endpoint group {g} must be one puncture or an adjacent pair")
        if config.position(g1[0]) > config.position(g2[0]):
            g1, g2 = g2, g1
        if config.position(g1[-1]) >= config.position(g2[0]):
            raise ValueError(f"endpoint groups {g1} and {g2} overlap")
        mids = config.labels[config.position(g1[-1]):config.position(g2[0]) - 1]
        flipped = set(flipped)
        unknown = flipped - set(mids) - set(g1) - set(g2)
        if unknown:
            raise ValueError(f"flipped punctures {sorted(unknown)} are not between the endpoints")
        flags = tuple((m, default.flipped() if m in flipped else default) for m in mids)
        return cls(g1, g2, flags, config, default)

    @property
    def is_atomic(self) -> bool:
        return len(self.left) == 1 and len(self.right) == 1

    @property
    def atom_count(self) -> int:
        return len(self.left) * len(self.right)

    def conjugate(self) -> CompositeBand:
        return CompositeBand(self.left, self.right,
                             tuple((lab, s.flipped()) for lab, s in self.flags),
                             self.config, self.side.flipped())

    def _slide(self) -> list[int]:
        return _slide_letters(self.config, self.flags, len(self.right))

    def local_twist(self) -> list[int]:
        """Letters of ``Delta^2(block) Delta^-2(left) Delta^-2(right)`` on adjacent positions."""
        start = self.config.position(self.left[0])
        k, r = len(self.left), len(self.right)
        n = k + r
        letters = [x + start - 1 for x in half_twist(n).letters] * 2 if n > 1 else []
        if k == 2:
            letters += [-start, -start]
        if r == 2:
            letters += [-(start + k), -(start + k)]
        return letters

    def braid(self, exponent: int) -> ArtinWord:
        """The braid written ``Z^exponent`` on this band (used for conjugators)."""
        if self.is_atomic:
            return self.word(exponent)
        if exponent % 2:
            raise ValueError(
                f"odd exponent {exponent} is not defined as a braid on a composite band")
        return self.word(exponent // 2)

    def word(self, power: int = 1) -> ArtinWord:
        """Braid of ``Z^{2 power}`` for this composite (``Z^1`` itself when atomic)."""
        w = self._slide()
        inv = [-x for x in reversed(w)]
        if self.is_atomic:
            core = [self.config.position(self.left[0])]
        else:
            core = self.local_twist()
        body = core * abs(power) if power > 0 else [-x for x in reversed(core)] * abs(power)
        return ArtinWord(self.config.count, tuple(w + body + inv)).reduced()

    def atom(self, a: str, b: str, extra: dict[str, Side] | None = None) -> BandTwist:
        """Atomic band between ``a`` and ``b`` inheriting this composite's flags.

        Partner punctures of the endpoint groups that the atomic path must
        cross take their side from ``extra`` (default: the composite's side).
        """
        cfg = self.config
        if cfg.position(a) > cfg.position(b):
            a, b = b, a
        known = dict(self.flags)
        extra = extra or {}
        flags = []
        for m in cfg.between(a, b):
            if m in known:
                flags.append((m, known[m]))
            else:
                flags.append((m, extra.get(m, self.side)))
        return BandTwist(PathDescriptor(a, b, tuple(flags)), cfg)


@dataclass(frozen=True)
class AtomicPiece:
    """One atomic factor of a composite: ``(Z_twist^exponent)^conjugator``."""

    twist: BandTwist
    exponent: int
    conjugator: ArtinWord


def expand_composite(cb: CompositeBand, exponent: int) -> list[AtomicPiece]:
    """Expand ``Z^exponent`` on a composite band into atomic factors.

    * atomic band: one factor with the given exponent;
    * two pairs, exponent +-2: four full twists (all endpoint combinations);
    * pair and single, exponent +-2: two full twists;
    * pair and single, exponent 3: three cusps, the pair-side half-twist
      conjugates of one band (``k = -1, 0, 1`` in the pair's half-twist).
    For exponent +-2 the product of the pieces equals ``cb.braid(exponent)``.
    """
    n = cb.config.count
    ident = ArtinWord(n)
    if cb.is_atomic:
        return [AtomicPiece(cb.atom(cb.left[0], cb.right[0]), exponent, ident)]
    if abs(exponent) == 2:
        pieces = _even_pieces(cb)
        if exponent < 0:
            pieces = list(reversed(pieces))
        return [AtomicPiece(t, exponent, ident) for t in pieces]
    if abs(exponent) == 3 and cb.atom_count == 2:
        return _cusp_pieces(cb, exponent)
    raise ValueError(
        f"exponent {exponent} is not defined on a composite band "
        f"{''.join(cb.left)},{''.join(cb.right)}")


def _even_pieces(cb: CompositeBand) -> list[BandTwist]:
    # Every atomic path runs on the composite's side, partner punctures
    # included. The normal-form oracle fixes the order: lexicographic in
    # (left, right) when that side carries positive conjugator letters,
    # reversed otherwise; then the product equals cb.braid(2).
    pieces = [cb.atom(a, b) for a in cb.left for b in cb.right]
    if side_sign(cb.side) < 0:
        pieces.reverse()
    return pieces


def _cusp_pieces(cb: CompositeBand, exponent: int) -> list[AtomicPiece]:
    # Three cusps: the band from the single puncture to the far member of
    # the pair, conjugated by the pair half-twist to the powers 1, 0, -1.
    cfg = cb.config
    if len(cb.left) == 2:
        pair, far = cb.left, cb.left[0]
        t = cb.atom(far, cb.right[0])
    else:
        pair, far = cb.right, cb.right[1]
        t = cb.atom(cb.left[0], far)
    rho = ArtinWord.generator(cfg.count, cfg.position(pair[0]))
    return [AtomicPiece(t, exponent, rho ** k) for k in (1, 0, -1)]
