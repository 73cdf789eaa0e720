"""String combinatorics for monomial special biserial algebras.

A string is a reduced walk of direct and inverse arrow letters avoiding
the zero relations in both readings; strings index the string modules and
cyclic primitive strings whose powers stay valid are bands.  Words are
identified with their formal inverses, so each module gets exactly one
canonical representative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IndeterminateError, InvalidModuleError
from .linalg import QQ

DEFAULT_MAX_LENGTH = 100


@dataclass(frozen=True)
class Letter:
    arrow: str
    inverse: bool

    def key(self):
        return (self.arrow, self.inverse)

    def inverted(self):
        return Letter(self.arrow, not self.inverse)

    def __str__(self):
        return self.arrow + ("^-1" if self.inverse else "")


@dataclass(frozen=True)
class StringWord:
    """Trivial word at a vertex, or a nonempty composable letter sequence."""

    base: str            # source vertex of the walk
    letters: tuple

    @property
    def length(self):
        return len(self.letters)

    @property
    def is_trivial(self):
        return not self.letters

    def key(self):
        return (len(self.letters), tuple(l.key() for l in self.letters), self.base)

    def __str__(self):
        if self.is_trivial:
            return f"e({self.base})"
        return " ".join(str(l) for l in self.letters)


@dataclass(frozen=True)
class Band:
    """Primitive cyclic string, canonical under rotation and inversion."""

    word: StringWord

    def __str__(self):
        return str(self.word)


@dataclass(frozen=True)
class StringPairReport:
    ok: bool
    failures: tuple   # of (condition, witness) pairs

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class StringEnumeration:
    words: tuple
    complete: bool
    max_length: int

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


class _Walker:
    """Shared walk bookkeeping over a monomial presentation."""

    def __init__(self, pres):
        self.pres = pres
        self.quiver = pres.quiver
        self.zero_paths = set()
        self.max_rel_len = 2
        for r in pres.relations:
            if not r.is_monomial:
                raise InvalidModuleError(
                    "string walks need a monomial presentation")
            arrows = r.terms[0][1].arrows
            self.zero_paths.add(arrows)
            self.max_rel_len = max(self.max_rel_len, len(arrows))

    def letter_source(self, l):
        a = self.quiver.arrow_by_name[l.arrow]
        return a.target if l.inverse else a.source

    def letter_target(self, l):
        a = self.quiver.arrow_by_name[l.arrow]
        return a.source if l.inverse else a.target

    def word_target(self, word):
        return word.base if word.is_trivial else self.letter_target(word.letters[-1])

    def run_forbidden(self, names):
        """Does the direct-arrow run contain a zero relation as a factor?"""
        n = len(names)
        for z in self.zero_paths:
            k = len(z)
            if k > n:
                continue
            for i in range(n - k + 1):
                if names[i:i + k] == z:
                    return True
        return False

    def can_append(self, word, letter):
        if not word.is_trivial:
            last = word.letters[-1]
            if last.arrow == letter.arrow and last.inverse != letter.inverse:
                return False
            if self.letter_target(last) != self.letter_source(letter):
                return False
        elif word.base != self.letter_source(letter):
            return False
        # only the direct run ending in the new letter can newly break
        run = [letter]
        for l in reversed(word.letters):
            if l.inverse != letter.inverse:
                break
            run.append(l)
        run.reverse()
        names = tuple(l.arrow for l in run)
        if letter.inverse:
            names = tuple(reversed(names))
        if len(names) >= 2 and self.run_forbidden(names):
            return False
        return True

    def append(self, word, letter):
        return StringWord(word.base, word.letters + (letter,))

    def inverse_word(self, word):
        if word.is_trivial:
            return word
        letters = tuple(l.inverted() for l in reversed(word.letters))
        return StringWord(self.letter_target(word.letters[-1]), letters)

    def canonical(self, word):
        inv = self.inverse_word(word)
        return word if word.key() <= inv.key() else inv

    def word_vertices(self, word):
        vs = [word.base]
        for l in word.letters:
            vs.append(self.letter_target(l))
        return vs

    def all_letters_from(self, v):
        out = []
        for a in self.quiver.arrows_from[v]:
            out.append(Letter(a.name, False))
        for a in self.quiver.arrows_into[v]:
            out.append(Letter(a.name, True))
        out.sort(key=lambda l: l.key())
        return out


def check_string_pair(pres):
    """Conditions for a monomial pair to be a string pair.

    Checks that every relation is monomial, that each vertex starts and
    ends at most two arrows, and that each arrow has at most one forward
    and one backward continuation avoiding the ideal.
    """
    failures = []
    mono = all(r.is_monomial for r in pres.relations)
    if not mono:
        bad = next(r for r in pres.relations if not r.is_monomial)
        failures.append(("NotMonomial", str(bad)))
        return StringPairReport(False, tuple(failures))
    walker = _Walker(pres)
    quiver = pres.quiver
    for v in quiver.vertices:
        if len(quiver.arrows_from[v]) > 2:
            failures.append(("S1", f"vertex {v} starts more than two arrows"))
            break
        if len(quiver.arrows_into[v]) > 2:
            failures.append(("S1", f"vertex {v} ends more than two arrows"))
            break
    if not failures:
        for a in quiver.arrows:
            succ = [b.name for b in quiver.arrows_from[a.target]
                    if not walker.run_forbidden((a.name, b.name))]
            if len(succ) > 1:
                failures.append(
                    ("S2_R", f"arrow {a.name} composes with {succ[0]} and {succ[1]}"))
                break
            pred = [g.name for g in quiver.arrows_into[a.source]
                    if not walker.run_forbidden((g.name, a.name))]
            if len(pred) > 1:
                failures.append(
                    ("S2_L", f"arrow {a.name} follows both {pred[0]} and {pred[1]}"))
                break
    return StringPairReport(not failures, tuple(failures))


def _require_string_pair(pres):
    report = check_string_pair(pres)
    if not report.ok:
        cond, witness = report.failures[0]
        raise InvalidModuleError(f"not a string pair ({cond}: {witness})")
    return _Walker(pres)


def enumerate_strings(pres, max_length=DEFAULT_MAX_LENGTH):
    """All canonical strings of length <= max_length, (length, lex) order."""
    walker = _require_string_pair(pres)
    quiver = pres.quiver
    found = set()
    longest_hit = False
    words = [StringWord(v, ()) for v in quiver.vertices]
    for w in words:
        found.add(w)
    frontier = list(words)
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            v = walker.word_target(w)
            for l in walker.all_letters_from(v):
                if walker.can_append(w, l):
                    nxt.append(walker.append(w, l))
        frontier = nxt
        for w in frontier:
            c = walker.canonical(w)
            if c not in found:
                found.add(c)
        if not frontier:
            break
    longest_hit = any(w.length == max_length for w in found)
    ordered = tuple(sorted(found, key=lambda w: w.key()))
    return StringEnumeration(ordered, not longest_hit, max_length)


def detect_bands(pres, max_length=DEFAULT_MAX_LENGTH):
    """Bands with witness length <= max_length, deduplicated by rotation
    and inversion."""
    walker = _require_string_pair(pres)
    quiver = pres.quiver
    bands = {}

    def is_primitive(letters):
        n = len(letters)
        for p in range(1, n):
            if n % p == 0 and letters[p:] + letters[:p] == letters:
                return False
        return True

    def powers_are_strings(word):
        # enough copies so every relation-length window lies inside
        copies = max(2, -(-walker.max_rel_len // word.length) + 1)
        cur = word
        for _ in range(copies - 1):
            for l in word.letters:
                if not walker.can_append(cur, l):
                    return False
                cur = walker.append(cur, l)
        return True

    def canonical_band(word):
        cands = []
        for w in (word, walker.inverse_word(word)):
            ls = w.letters
            for i in range(len(ls)):
                rot = ls[i:] + ls[:i]
                cands.append(StringWord(walker.letter_source(rot[0]), rot))
        return min(cands, key=lambda w: w.key())

    # depth-first search over cyclic reduced walks from each vertex
    def extend(word, origin):
        if word.length > max_length:
            return
        if word.length >= 1 and walker.word_target(word) == origin:
            first, last = word.letters[0], word.letters[-1]
            closes_reduced = not (first.arrow == last.arrow
                                  and first.inverse != last.inverse)
            if closes_reduced and is_primitive(word.letters) \
                    and powers_are_strings(word):
                c = canonical_band(word)
                bands.setdefault(c.key(), Band(c))
        if word.length == max_length:
            return
        for l in walker.all_letters_from(walker.word_target(word)):
            if walker.can_append(word, l):
                extend(walker.append(word, l), origin)

    for v in quiver.vertices:
        extend(StringWord(v, ()), v)
    return tuple(bands[k] for k in sorted(bands))


def string_module(pres, word):
    """String module of a walk: one basis vector per visited vertex."""
    from .modules import Representation

    walker = _Walker(pres)
    _validate_word(walker, word)
    quiver = pres.quiver
    verts = walker.word_vertices(word)
    slots = {v: [] for v in quiver.vertices}
    positions = []
    for i, v in enumerate(verts):
        positions.append((v, len(slots[v])))
        slots[v].append(i)
    dims = tuple(len(slots[v]) for v in quiver.vertices)
    mats = {a.name: [[QQ(0)] * len(slots[a.source])
                     for _ in range(len(slots[a.target]))]
            for a in quiver.arrows}
    for i, l in enumerate(word.letters):
        # direct letter: basis i maps to i+1; inverse: i+1 maps to i
        src_pos, dst_pos = (i, i + 1) if not l.inverse else (i + 1, i)
        _, col = positions[src_pos]
        _, row = positions[dst_pos]
        mats[l.arrow][row][col] = QQ(1)
    return Representation.make(pres, dims, mats)


def _validate_word(walker, word):
    if word.is_trivial:
        if word.base not in walker.quiver.vertex_index:
            raise InvalidModuleError(f"unknown vertex {word.base!r}")
        return
    cur = StringWord(walker.letter_source(word.letters[0]), ())
    if word.base != cur.base:
        raise InvalidModuleError("walk base does not match its first letter")
    for l in word.letters:
        if not walker.can_append(cur, l):
            raise InvalidModuleError(f"invalid string word {word}")
        cur = walker.append(cur, l)


def inverse_word(pres, word):
    return _Walker(pres).inverse_word(word)


def is_rep_finite_string(pres, max_length=DEFAULT_MAX_LENGTH):
    """Finitely many strings and no band.

    A complete string search bounds every cyclic walk, so a band-free
    complete enumeration is a proof; a band is a disproof; anything else
    is indeterminate.
    """
    enum = enumerate_strings(pres, max_length)
    bands = detect_bands(pres, max_length)
    if bands:
        return False
    if enum.complete:
        return True
    raise IndeterminateError(
        f"string search truncated at {max_length} and no band found")
