"""Finitely presented groups: Tietze moves, abelianization, permutation
images, Todd-Coxeter coset enumeration and Reidemeister-Schreier rewriting."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .braid import Permutation
from .words import GWord, free_reduce


def _cyclic_reduce(w: GWord) -> GWord:
    return w.cyclically_reduced()


def _canonical_cyclic(w: GWord) -> tuple:
    """A key identifying ``w`` up to cyclic permutation and inversion."""
    letters = w.letters
    if not letters:
        return ()
    variants = []
    for word in (letters, w.inverse().letters):
        for k in range(len(word)):
            variants.append(word[k:] + word[:k])
    return min(variants)


@dataclass(frozen=True)
class FpPresentation:
    """``< generators | relators >``; relators are stored freely and cyclically reduced."""

    generators: tuple[str, ...]
    relators: tuple[GWord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        rels = tuple(_cyclic_reduce(GWord(tuple(r.letters))) for r in self.relators)
        known = set(self.generators)
        for r in rels:
            if r.labels() - known:
                raise ValueError(f"relator {r} uses undeclared generators {sorted(r.labels() - known)}")
        object.__setattr__(self, "relators", tuple(r for r in rels if r.letters))

    @classmethod
    def parse(cls, gens: str, *relators: str) -> FpPresentation:
        return cls(tuple(gens.split()), tuple(GWord.parse(r) for r in relators))

    @classmethod
    def from_relations(cls, generators: Sequence[str], relations: Iterable) -> FpPresentation:
        """Fold ``left = right`` relations (anything with ``relator()``) into relators."""
        return cls(tuple(generators), tuple(r.relator() for r in relations))

    def to_text(self) -> str:
        lines = ["gen: " + " ".join(self.generators)]
        lines.extend(f"rel: {r} = e" for r in self.relators)
        return "\n".join(lines) + "\n"

    @property
    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)


# --- Tietze simplification ---------------------------------------------------------

def _dedupe(relators: Iterable[GWord]) -> list[GWord]:
    seen: set = set()
    out = []
    for r in relators:
        r = _cyclic_reduce(r)
        if not r.letters:
            continue
        key = _canonical_cyclic(r)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def _eliminable(r: GWord, order: Sequence[str]) -> str | None:
    """The latest generator (in ``order``) occurring exactly once in ``r``."""
    counts: dict[str, int] = {}
    for lab, _ in r.letters:
        counts[lab] = counts.get(lab, 0) + 1
    for lab in reversed(order):
        if counts.get(lab) == 1:
            return lab
    return None


def _solve_for(r: GWord, lab: str) -> GWord:
    """From the relator ``u x^e v`` return the word equal to ``x``."""
    k = next(i for i, (l, _) in enumerate(r.letters) if l == lab)
    sign = r.letters[k][1]
    u, v = GWord(r.letters[:k]), GWord(r.letters[k + 1:])
    rest = v * u                      # cyclic rotation: x^e (v u) = 1
    return rest.inverse() if sign > 0 else rest


def _shorten(relators: list[GWord]) -> list[GWord]:
    """Replace long relators using shorter ones: if more than half of a
    cyclic rotation of ``s`` occurs inside ``r``, swap in the other part."""
    changed = True
    rels = list(relators)
    while changed:
        changed = False
        rels.sort(key=lambda w: (len(w), str(w)))
        for i, s in enumerate(rels):
            n = len(s)
            if n == 0:
                continue
            rots = set()
            for word in (s.letters, s.inverse().letters):
                for k in range(n):
                    rots.add(word[k:] + word[:k])
            for j in range(i + 1, len(rels)):
                r = rels[j]
                hit = _replace_half(r, rots, n)
                if hit is not None:
                    rels[j] = hit
                    changed = True
            if changed:
                rels = _dedupe(rels)
                break
    return rels


def _replace_half(r: GWord, rots: set, n: int) -> GWord | None:
    letters = r.letters
    m = n // 2 + 1
    for rot in rots:
        head = rot[:m]
        tail_inv = GWord(rot[m:]).inverse().letters
        for p in range(len(letters) - m + 1):
            if letters[p:p + m] == head:
                new = GWord(free_reduce(letters[:p] + tail_inv + letters[p + m:])).cyclically_reduced()
                if len(new) < len(r.cyclically_reduced()):
                    return new
    return None


def tietze_simplify(p: FpPresentation, effort: int = 20,
                    max_definition: int | None = None) -> FpPresentation:
    """Bounded, deterministic Tietze simplification.

    Each round removes duplicate relators (up to rotation and inversion),
    shortens relators against shorter ones and then eliminates one
    generator that occurs exactly once in some relator, choosing the
    shortest such relator (length at most ``max_definition`` if given) and
    within it the generator listed last.
    Stops after ``effort`` eliminations or when nothing applies.
    """
    gens = list(p.generators)
    rels = _dedupe(p.relators)
    for _ in range(max(0, effort)):
        rels = _shorten(rels)
        best = None
        for r in sorted(rels, key=lambda w: (len(w), str(w))):
            if max_definition is not None and len(r) > max_definition + 1:
                break
            lab = _eliminable(r, gens)
            if lab is not None:
                best = (r, lab)
                break
        if best is None:
            break
        r, lab = best
        value = _solve_for(r, lab)
        rels = [s.substitute({lab: value}) for s in rels if s is not r]
        rels = _dedupe(rels)
        gens.remove(lab)
    rels = _shorten(_dedupe(rels))
    return FpPresentation(tuple(gens), tuple(rels))


# --- abelianization -------------------------------------------------------------

def relation_matrix(p: FpPresentation) -> list[list[int]]:
    index = {g: k for k, g in enumerate(p.generators)}
    rows = []
    for r in p.relators:
        row = [0] * len(p.generators)
        for lab, s in r.letters:
            row[index[lab]] += s
        rows.append(row)
    return rows


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (nonnegative, ``d1 | d2 | ...``).

    Pivoting picks the entry of least absolute value; exact integers
    throughout. Trailing zeros (rank deficiency) are not returned.
    """
    a = [list(map(int, row)) for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            # move the smallest nonzero entry of row/column t into the pivot
            best = (t, t)
            for i in range(t, rows):
                if a[i][t] and abs(a[i][t]) < abs(a[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, cols):
                if a[t][j] and abs(a[t][j]) < abs(a[best[0]][best[1]]):
                    best = (t, j)
            i, j = best
            a[t], a[i] = a[i], a[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...]

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " x ".join(parts) if parts else "1"


def abelianize(p: FpPresentation) -> AbelianInvariants:
    diag = smith_normal_form(relation_matrix(p))
    torsion = tuple(d for d in diag if d > 1)
    return AbelianInvariants(len(p.generators) - len(diag), torsion)


# --- permutation images ---------------------------------------------------------

def evaluate(w: GWord, images: Mapping[str, Permutation]) -> Permutation:
    result = None
    for lab, s in w.letters:
        if lab not in images:
            raise KeyError(f"no image for generator {lab}")
        g = images[lab] if s > 0 else images[lab].inverse()
        result = g if result is None else result * g
    if result is None:
        degree = next(iter(images.values())).degree if images else 1
        return Permutation.identity(degree)
    return result


@dataclass(frozen=True)
class HomomorphismCheck:
    ok: bool
    violations: tuple[int, ...] = ()
    non_transpositions: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def check_homomorphism(p: FpPresentation, images: Mapping[str, Permutation],
                       transpositions: bool = False) -> HomomorphismCheck:
    missing = [g for g in p.generators if g not in images]
    if missing:
        raise ValueError(f"generators without an image: {missing}")
    bad = tuple(k for k, r in enumerate(p.relators) if not evaluate(r, images).is_identity())
    non_t = tuple(g for g in p.generators if transpositions and not images[g].is_transposition())
    return HomomorphismCheck(not bad and not non_t, bad, non_t)


def search_transposition_images(p: FpPresentation, degree: int,
                                constraint=None, first: bool = True) -> list[dict[str, Permutation]]:
    """Backtracking search for generator images that are transpositions in ``S_degree``.

    Relators are checked as soon as all their letters are assigned;
    ``constraint(partial)`` may prune further. Returns the first solution
    (or all, with ``first=False``) in a deterministic order.
    """
    gens = list(p.generators)
    trans = [Permutation.transposition(degree, i, j)
             for i, j in itertools.combinations(range(1, degree + 1), 2)]
    ready: dict[int, list[GWord]] = {k: [] for k in range(len(gens))}
    pos = {g: k for k, g in enumerate(gens)}
    for r in p.relators:
        last = max(pos[lab] for lab in r.labels())
        ready[last].append(r)
    out: list[dict[str, Permutation]] = []
    assign: dict[str, Permutation] = {}

    def rec(k: int) -> bool:
        if k == len(gens):
            out.append(dict(assign))
            return first
        for t in trans:
            assign[gens[k]] = t
            if all(evaluate(r, assign).is_identity() for r in ready[k]) and \
                    (constraint is None or constraint(assign)):
                if rec(k + 1):
                    return True
            del assign[gens[k]]
        return False

    rec(0)
    return out


def group_order(perms: Sequence[Permutation], limit: int = 1_000_000) -> int:
    """Order of the group generated by ``perms`` by closure (desk-scale only)."""
    if not perms:
        return 1
    ident = Permutation.identity(perms[0].degree)
    seen = {ident.images}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in perms:
                h = g * s
                if h.images not in seen:
                    seen.add(h.images)
                    if len(seen) > limit:
                        raise OverflowError("group larger than the closure limit")
                    nxt.append(h)
        frontier = nxt
    return len(seen)


# --- Todd-Coxeter ---------------------------------------------------------------

@dataclass
class CosetTable:
    """Coset action: ``rows[c][k]`` is ``c * generators[k]`` (cosets numbered from 0)."""

    generators: tuple[str, ...]
    rows: list[list[int]]
    bound: int
    overflow: bool = False
    defined: int = 0

    @property
    def index(self) -> int | None:
        return None if self.overflow else len(self.rows)

    @property
    def complete(self) -> bool:
        return not self.overflow

    def act(self, coset: int, w: GWord) -> int:
        inv = self._inverse_rows()
        k = {g: i for i, g in enumerate(self.generators)}
        for lab, s in w.letters:
            coset = self.rows[coset][k[lab]] if s > 0 else inv[coset][k[lab]]
        return coset

    def _inverse_rows(self) -> list[list[int]]:
        inv = [[0] * len(self.generators) for _ in self.rows]
        for c, row in enumerate(self.rows):
            for k, d in enumerate(row):
                inv[d][k] = c
        return inv

    def permutations(self) -> dict[str, Permutation]:
        """Each generator's action as a permutation of ``1..index``."""
        if self.overflow:
            raise ValueError("coset enumeration overflowed")
        return {g: Permutation(tuple(row[k] + 1 for row in self.rows))
                for k, g in enumerate(self.generators)}

    def to_records(self) -> list[dict]:
        return [{"coset": c, **{g: row[k] for k, g in enumerate(self.generators)}}
                for c, row in enumerate(self.rows)]


class _Enumerator:
    def __init__(self, gens: Sequence[str], bound: int):
        self.ngens = len(gens)
        self.col = {}
        for k, g in enumerate(gens):
            self.col[(g, 1)] = 2 * k
            self.col[(g, -1)] = 2 * k + 1
        self.bound = bound
        self.table: list[list[int | None]] = [[None] * (2 * self.ngens)]
        self.parent = [0]
        self.live = 1
        self.defined = 1

    def encode(self, w: GWord) -> list[int]:
        return [self.col[x] for x in w.letters]

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def is_live(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int) -> bool:
        if self.live >= self.bound:
            return False
        d = len(self.table)
        self.table.append([None] * (2 * self.ngens))
        self.parent.append(d)
        self.live += 1
        self.defined += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        return True

    def _merge(self, k: int, l: int, queue: list[int]) -> None:
        a, b = self.rep(k), self.rep(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            self.live -= 1
            queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(2 * self.ngens):
                d = self.table[g][x]
                if d is None:
                    continue
                if self.table[d][x ^ 1] == g:
                    self.table[d][x ^ 1] = None
                mu, nu = self.rep(g), self.rep(d)
                if self.table[mu][x] is not None:
                    self._merge(nu, self.table[mu][x], queue)
                elif self.table[nu][x ^ 1] is not None:
                    self._merge(mu, self.table[nu][x ^ 1], queue)
                else:
                    self.table[mu][x] = nu
                    self.table[nu][x ^ 1] = mu

    def scan(self, c: int, w: list[int], fill: bool) -> bool:
        """Scan ``w`` at ``c``; returns False if a definition was needed but refused."""
        n = len(w)
        while True:
            f, i = c, 0
            while i < n and self.table[f][w[i]] is not None:
                f = self.table[f][w[i]]
                i += 1
            if i == n:
                if f != c:
                    self.coincidence(f, c)
                return True
            b, j = c, n - 1
            while j >= i and self.table[b][w[j] ^ 1] is not None:
                b = self.table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return True
            if j == i:
                self.table[f][w[i]] = b
                self.table[b][w[i] ^ 1] = f
                return True
            if not fill:
                return True
            if not self.define(f, w[i]):
                return False

    def lookahead(self, relators: list[list[int]]) -> None:
        c = 0
        while c < len(self.table):
            if self.is_live(c):
                for w in relators:
                    self.scan(c, w, fill=False)
                    if not self.is_live(c):
                        break
            c += 1


def todd_coxeter(p: FpPresentation, subgroup_gens: Sequence[GWord] = (),
                 bound: int = 100_000) -> CosetTable:
    """HLT coset enumeration with lookahead.

    Cosets are defined by scanning each relator at each live coset in
    order. When the number of live cosets reaches ``bound`` a lookahead
    pass (scan without defining) collapses coincidences; if no room is
    freed the result is returned with ``overflow=True`` — never a wrong
    index.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    e = _Enumerator(p.generators, bound)
    rels = [e.encode(r) for r in p.relators]
    subs = [e.encode(GWord(free_reduce(h.letters))) for h in subgroup_gens]
    gens_cols = list(range(2 * e.ngens))

    def run_scan(c: int, w: list[int]) -> bool:
        while not e.scan(c, w, fill=True):
            e.lookahead(rels)
            if e.live >= e.bound:
                return False
            c = e.rep(c)
        return True

    for w in subs:
        if not run_scan(0, w):
            return CosetTable(p.generators, [], bound, overflow=True, defined=e.defined)
    c = 0
    while c < len(e.table):
        if e.is_live(c):
            for w in rels:
                if not e.is_live(c):
                    break
                if not run_scan(c, w):
                    return CosetTable(p.generators, [], bound, overflow=True, defined=e.defined)
            for x in gens_cols:
                if not e.is_live(c):
                    break
                if e.table[c][x] is not None:
                    continue
                if not e.define(c, x):
                    e.lookahead(rels)
                    if e.live >= e.bound:
                        return CosetTable(p.generators, [], bound, overflow=True, defined=e.defined)
                    if e.is_live(c) and e.table[c][x] is None:
                        e.define(c, x)
        c += 1
    return _standardize(p.generators, e, bound)


def _standardize(gens: Sequence[str], e: _Enumerator, bound: int) -> CosetTable:
    """Renumber live cosets in breadth-first order from coset 0."""
    order = {0: 0}
    queue = [0]
    i = 0
    while i < len(queue):
        c = queue[i]
        i += 1
        for k in range(len(gens)):
            for x in (2 * k, 2 * k + 1):
                d = e.rep(e.table[c][x])
                if d not in order:
                    order[d] = len(queue)
                    queue.append(d)
    rows = [[order[e.rep(e.table[c][2 * k])] for k in range(len(gens))] for c in queue]
    return CosetTable(tuple(gens), rows, bound, overflow=False, defined=e.defined)


# --- Reidemeister-Schreier ---------------------------------------------------------

def schreier_transversal(table: CosetTable) -> dict[int, GWord]:
    """Breadth-first spanning tree: coset -> representative word."""
    inv = table._inverse_rows()
    reps = {0: GWord()}
    queue = [0]
    i = 0
    while i < len(queue):
        c = queue[i]
        i += 1
        for k, g in enumerate(table.generators):
            for d, step in ((table.rows[c][k], (g, 1)), (inv[c][k], (g, -1))):
                if d not in reps:
                    reps[d] = GWord(reps[c].letters + (step,))
                    queue.append(d)
    return reps


def reidemeister_schreier(p: FpPresentation, table: CosetTable) -> FpPresentation:
    """Presentation of the subgroup whose coset table is ``table``.

    Schreier generators are named ``c.g`` for each coset ``c`` and generator
    ``g`` whose edge ``c -g-> c*g`` is not a tree edge; relators are the
    rewrites of every relator read from every coset.
    """
    if table.overflow:
        raise ValueError("the coset table is incomplete")
    if tuple(table.generators) != tuple(p.generators):
        raise ValueError("coset table and presentation have different generators")
    reps = schreier_transversal(table)
    tree: set[tuple[int, int]] = set()
    for c, w in reps.items():
        if not w.letters:
            continue
        prev = table.act(0, GWord(w.letters[:-1]))
        lab, s = w.letters[-1]
        k = table.generators.index(lab)
        tree.add((prev, k) if s > 0 else (c, k))
    index = {g: k for k, g in enumerate(p.generators)}
    inv = table._inverse_rows()

    def name(c: int, k: int) -> str:
        return f"{c}.{p.generators[k]}"

    gens = [name(c, k) for c in range(len(table.rows)) for k in range(len(p.generators))
            if (c, k) not in tree]
    rels = []
    for r in p.relators:
        for c0 in range(len(table.rows)):
            c = c0
            out = []
            for lab, s in r.letters:
                k = index[lab]
                if s > 0:
                    if (c, k) not in tree:
                        out.append((name(c, k), 1))
                    c = table.rows[c][k]
                else:
                    d = inv[c][k]
                    if (d, k) not in tree:
                        out.append((name(d, k), -1))
                    c = d
            rels.append(GWord(free_reduce(out)))
    return FpPresentation(tuple(gens), tuple(_dedupe(rels)))
