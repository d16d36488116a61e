"""Factorizations: ordered products of conjugated band-twist powers.

A factor ``(Z^r)^c`` is stored as the band twist ``Z``, the exponent ``r`` and
the conjugating braid ``c`` (so its braid is ``c^-1 Z^r c``). Placeholder
factors (:class:`StubFactor`) carry only a declared degree; they take part
in degree bookkeeping but block product verification.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Union

from .bands import BandTwist, PunctureConfig, band_word, complex_conjugate
from .braid import (
    ArtinWord,
    NormalForm,
    NormalFormBuilder,
    induced_permutation,
    normal_form,
    Permutation,
)


@dataclass(frozen=True)
class Origin:
    """Where a factor came from: symbol path, the source atom text and piece index."""

    path: tuple[str, ...] = ()
    atom: str = ""
    piece: int = 0

    def group(self, depth: int = 0) -> str:
        return self.path[depth] if len(self.path) > depth else ""

    def __str__(self) -> str:
        where = "/".join(self.path) or "-"
        return f"{where}:{self.atom}#{self.piece}"


@dataclass(frozen=True)
class Factor:
    twist: BandTwist
    exponent: int
    conjugator: ArtinWord
    origin: Origin = Origin()

    @property
    def degree(self) -> int:
        return self.exponent

    @property
    def strand_count(self) -> int:
        return self.twist.config.count

    def word(self) -> ArtinWord:
        """``c^-1 Z^r c`` as a freely reduced Artin word."""
        core = band_word(self.twist) ** self.exponent
        c = self.conjugator
        return ArtinWord(core.strand_count, c.inverse().letters + core.letters + c.letters).reduced()

    def conjugated(self, c: ArtinWord) -> Factor:
        return Factor(self.twist, self.exponent, (self.conjugator * c), self.origin)

    def mirrored(self) -> Factor:
        """Complex conjugate: flip every path side and mirror the conjugator."""
        return Factor(complex_conjugate(self.twist), self.exponent,
                      self.conjugator.mirror(), self.origin)

    def __str__(self) -> str:
        s = f"{self.twist}^{self.exponent}"
        if self.conjugator.letters:
            s = f"({s})^{{{self.conjugator}}}"
        return s


@dataclass(frozen=True)
class StubFactor:
    """A named block known only by its degree (e.g. an unexpanded sub-factorization)."""

    name: str
    declared_degree: int
    conjugator: ArtinWord | None = None
    origin: Origin = Origin()

    @property
    def degree(self) -> int:
        return self.declared_degree

    def conjugated(self, c: ArtinWord) -> StubFactor:
        conj = c if self.conjugator is None else self.conjugator * c
        return StubFactor(self.name, self.declared_degree, conj, self.origin)

    def __str__(self) -> str:
        return f"<{self.name}: degree {self.declared_degree}>"


AnyFactor = Union[Factor, StubFactor]


class StubError(ValueError):
    """Raised when a braid is requested from a factorization containing stubs."""


@dataclass(frozen=True)
class Factorization:
    strand_count: int
    factors: tuple[AnyFactor, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        for f in self.factors:
            if isinstance(f, Factor) and f.strand_count != self.strand_count:
                raise ValueError("factor strand count differs from the factorization")

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __add__(self, other: Factorization) -> Factorization:
        if other.strand_count != self.strand_count:
            raise ValueError("strand counts differ")
        return Factorization(self.strand_count, self.factors + other.factors)

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)

    def has_stubs(self) -> bool:
        return any(isinstance(f, StubFactor) for f in self.factors)

    def conjugated(self, c: ArtinWord) -> Factorization:
        return Factorization(self.strand_count, tuple(f.conjugated(c) for f in self.factors))

    def without(self, index: int) -> Factorization:
        return Factorization(self.strand_count, self.factors[:index] + self.factors[index + 1:])

    def mirrored(self) -> Factorization:
        """Complex conjugate of the whole factorization.

        Conjugation of the plane sends a positive half-twist to a negative
        one, so the image of ``f_1 ... f_k = P`` is ``f_1' ... f_k' = mirror(P)``
        with ``f_i'`` the inverses of the mirrored factors; inverting gives a
        positive factorization of ``mirror(P)^-1`` in reversed order. For
        ``P = Delta^2`` this is again ``Delta^2``.
        """
        if self.has_stubs():
            raise StubError("cannot complex-conjugate a factorization with stubs")
        return Factorization(self.strand_count, tuple(f.mirrored() for f in reversed(self.factors)))


# --- products and verification ---------------------------------------------

def _require_resolved(f: Factorization) -> None:
    stubs = [s for s in f.factors if isinstance(s, StubFactor)]
    if stubs:
        raise StubError(
            f"factorization contains {len(stubs)} stub factor(s) "
            f"(e.g. {stubs[0].name}); bind them to real factorizations first")


def product_word(f: Factorization) -> ArtinWord:
    _require_resolved(f)
    letters: list[int] = []
    for fac in f.factors:
        letters.extend(fac.word().letters)
    return ArtinWord(f.strand_count, tuple(letters))


def product_braid(f: Factorization) -> NormalForm:
    """Normal form of the left-to-right product, streamed factor by factor."""
    _require_resolved(f)
    builder = NormalFormBuilder(f.strand_count)
    for fac in f.factors:
        builder.append_word(fac.word())
    return builder.result()


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    degree_delta: int
    product: NormalForm | None = None
    first_divergence: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_full_twist(f: Factorization) -> CheckResult:
    """Is the product equal to Delta^2_n? Diagnostic: degree delta and first differing factor."""
    n = f.strand_count
    delta = f.degree - n * (n - 1)
    if f.has_stubs():
        return CheckResult(False, delta, None, None,
                           "stub factors present: the product cannot be formed")
    nf = product_braid(f)
    if nf == NormalForm(n, 2, ()):
        return CheckResult(True, delta, nf, None, "product equals the full twist")
    # Delta^2 has infimum 2 and no canonical factors: index 0 flags a wrong
    # infimum, index k >= 1 the first surplus canonical factor.
    if nf.delta_power != 2:
        first, what = 0, f"infimum is {nf.delta_power}, expected 2"
    else:
        first, what = 1, f"extra canonical factor {[x + 1 for x in nf.factors[0]]}"
    msg = f"product differs from the full twist: {what}; degree delta {delta:+d}"
    return CheckResult(False, delta, nf, first, msg)


def residual_degree(f, n: int) -> int:
    """``n(n-1)`` minus the total degree of ``f`` (anything with a ``degree``)."""
    return n * (n - 1) - f.degree


def invariance_check(f: Factorization, rho: ArtinWord, grouping: str = "factor") -> bool:
    """Does conjugation by ``rho`` leave the factorization unchanged?

    ``grouping="factor"`` compares every factor braid with its conjugate;
    ``grouping="origin"`` compares products of consecutive factors sharing an
    origin atom (a composite and its expansion), which is the granularity at
    which the paired-puncture twists are invariants.
    """
    _require_resolved(f)
    for block in factor_blocks(f, grouping):
        w = ArtinWord(f.strand_count)
        for fac in block:
            w = w * fac.word()
        if normal_form(w * rho) != normal_form(rho * w):
            return False
    return True


def factor_blocks(f: Factorization, grouping: str) -> list[list[Factor]]:
    if grouping == "factor":
        return [[fac] for fac in f.factors]
    if grouping != "origin":
        raise ValueError(f"unknown grouping {grouping!r}")
    blocks: list[list[Factor]] = []
    key = None
    for fac in f.factors:
        k = (fac.origin.path, fac.origin.atom, fac.conjugator.letters)
        if blocks and k == key:
            blocks[-1].append(fac)
        else:
            blocks.append([fac])
            key = k
    return blocks


def permutation_product(f: Factorization) -> Permutation:
    _require_resolved(f)
    perm = Permutation.identity(f.strand_count)
    for fac in f.factors:
        perm = perm * induced_permutation(fac.word())
    return perm


def hurwitz_move(f: Factorization, i: int, inverse: bool = False) -> Factorization:
    """Braid-group action on factorizations.

    The move replaces the adjacent pair ``(a, b)`` at positions ``i, i+1``
    by ``(b, a^b)``; the inverse move gives ``(a b a^-1, a)``. Both
    preserve the product.
    """
    _require_resolved(f)
    fs = list(f.factors)
    a, b = fs[i], fs[i + 1]
    if not inverse:
        fs[i], fs[i + 1] = b, a.conjugated(b.word())
    else:
        fs[i], fs[i + 1] = b.conjugated(a.word().inverse()), a
    return Factorization(f.strand_count, tuple(fs))


# --- degree bookkeeping -------------------------------------------------------

@dataclass(frozen=True)
class GroupDegree:
    name: str
    by_exponent: tuple[tuple[int, int], ...]
    stub_degree: int
    factor_count: int

    @property
    def total(self) -> int:
        return sum(e * c for e, c in self.by_exponent) + self.stub_degree

    def count(self, exponent: int) -> int:
        return dict(self.by_exponent).get(exponent, 0)


@dataclass(frozen=True)
class DegreeReport:
    groups: tuple[GroupDegree, ...]

    @property
    def total(self) -> int:
        return sum(g.total for g in self.groups)

    @property
    def factor_count(self) -> int:
        return sum(g.factor_count for g in self.groups)

    def counts(self) -> dict[int, int]:
        c: Counter = Counter()
        for g in self.groups:
            for e, k in g.by_exponent:
                c[e] += k
        return dict(sorted(c.items()))

    @property
    def stub_degree(self) -> int:
        return sum(g.stub_degree for g in self.groups)

    def group(self, name: str) -> GroupDegree:
        for g in self.groups:
            if g.name == name:
                return g
        raise KeyError(name)

    def to_text(self) -> str:
        lines = [f"{'group':<12} {'factors':>7} {'r=1':>5} {'r=2':>5} {'r=3':>5} {'stub':>5} {'degree':>7}"]
        for g in self.groups:
            lines.append(f"{g.name:<12} {g.factor_count:>7} {g.count(1):>5} {g.count(2):>5} "
                         f"{g.count(3):>5} {g.stub_degree:>5} {g.total:>7}")
        c = self.counts()
        lines.append(f"{'total':<12} {self.factor_count:>7} {c.get(1, 0):>5} {c.get(2, 0):>5} "
                     f"{c.get(3, 0):>5} {self.stub_degree:>5} {self.total:>7}")
        return "\n".join(lines)

    def to_records(self) -> list[dict]:
        recs = []
        for g in self.groups:
            recs.append({"group": g.name, "factors": g.factor_count,
                         "by_exponent": {str(e): k for e, k in g.by_exponent},
                         "stub_degree": g.stub_degree, "degree": g.total})
        recs.append({"group": "*total*", "factors": self.factor_count,
                     "by_exponent": {str(e): k for e, k in self.counts().items()},
                     "stub_degree": self.stub_degree, "degree": self.total})
        return recs


def degree_report(f: Factorization | Iterable[tuple[str, Factorization]],
                  grouping: str | Callable[[AnyFactor], str] = "none") -> DegreeReport:
    """Exact degree sums, per group.

    ``f`` is a factorization or a sequence of ``(name, factorization)``
    parts. ``grouping`` is ``"none"``, ``"origin"`` (top-level symbol of
    each factor) or a callable mapping a factor to its group name; with
    parts, each part is its own group unless a grouping is given.
    """
    if isinstance(f, Factorization):
        parts = [("all", f)]
    else:
        parts = list(f)
    if grouping == "none":
        key = None
    elif grouping == "origin":
        key = lambda fac: fac.origin.group(0) or "-"  # noqa: E731
    elif callable(grouping):
        key = grouping
    else:
        raise ValueError(f"unknown grouping {grouping!r}")
    order: list[str] = []
    data: dict[str, list] = {}
    for name, part in parts:
        for fac in part.factors:
            g = name if key is None else key(fac)
            if g not in data:
                data[g] = [Counter(), 0, 0]
                order.append(g)
            if isinstance(fac, StubFactor):
                data[g][1] += fac.declared_degree
            else:
                data[g][0][fac.exponent] += 1
            data[g][2] += 1
        if key is None and name not in data:
            data[name] = [Counter(), 0, 0]
            order.append(name)
    groups = tuple(GroupDegree(g, tuple(sorted(data[g][0].items())), data[g][1], data[g][2])
                   for g in order)
    return DegreeReport(groups)


@dataclass(frozen=True)
class Bundle:
    """Named factorizations that together make up one global factorization.

    Parts may live on different puncture configurations (local models);
    only degree bookkeeping is meaningful across parts.
    """

    parts: tuple[tuple[str, Factorization], ...]

    @property
    def degree(self) -> int:
        return sum(p.degree for _, p in self.parts)

    def __iter__(self):
        return iter(self.parts)

    def part(self, name: str) -> Factorization:
        for n, p in self.parts:
            if n == name:
                return p
        raise KeyError(name)


def line_arrangement_factorization(n: int) -> Factorization:
    """Band factorization of Delta^2_n from a generic arrangement of n real lines.

    Factors ``Z^2_{ij}`` along the standard paths below the real axis, for
    ``j = 2..n``; within each ``j`` the index ``i`` runs downwards when the
    lower side carries negative conjugator letters and upwards otherwise.
    This order is the one the normal-form and Dynnikov checks confirm.
    """
    from .bands import Side, band, side_sign

    cfg = PunctureConfig.plain(n)
    ident = ArtinWord(n)
    factors = []
    for j in range(2, n + 1):
        rows = range(j - 1, 0, -1) if side_sign(Side.BELOW) < 0 else range(1, j)
        for i in rows:
            t = band(cfg, str(i), str(j), Side.BELOW)
            factors.append(Factor(t, 2, ident, Origin(("arrangement",), f"Z^2_{{{i},{j}}}")))
    return Factorization(n, tuple(factors))


def letter_factorization(word: ArtinWord) -> Factorization:
    """Each positive letter of ``word`` as a degree-1 adjacent band factor."""
    from .bands import band

    n = word.strand_count
    cfg = PunctureConfig.plain(n)
    ident = ArtinWord(n)
    factors = []
    for k, x in enumerate(word.letters):
        if x < 0:
            raise ValueError("letter_factorization needs a positive word")
        factors.append(Factor(band(cfg, str(x), str(x + 1)), 1, ident,
                              Origin(("letters",), f"s{x}", k)))
    return Factorization(n, tuple(factors))
