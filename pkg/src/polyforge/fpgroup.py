"""Finitely presented groups: words, presentation files, Todd-Coxeter.

Letters are plain ints: ``k`` is generator ``k`` and ``~k`` (that is
``-k - 1``) is its inverse.  Generators declared as involutions by a
relator ``x^2`` are always written with positive letters.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = tuple[int, ...]

DEFAULT_MAX_COSETS = 2**20


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ResourceExhausted(RuntimeError):
    """Coset enumeration hit ``max_cosets`` before the table closed."""


def inverse_word(w: Sequence[int]) -> Word:
    return tuple(~x for x in reversed(w))


def word_power(w: Sequence[int], k: int) -> Word:
    if k < 0:
        return tuple(inverse_word(w)) * -k
    return tuple(w) * k


def commutator_word(a: Sequence[int], b: Sequence[int]) -> Word:
    """``[a, b] = a^-1 b^-1 a b``."""
    return inverse_word(a) + inverse_word(b) + tuple(a) + tuple(b)


def free_reduce(w: Iterable[int], involutions: frozenset[int] = frozenset()) -> Word:
    out: list[int] = []
    for x in w:
        if x < 0 and ~x in involutions:
            x = ~x
        if out and (out[-1] == ~x or (x in involutions and out[-1] == x)):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _is_square(w: Sequence[int]) -> bool:
    return len(w) == 2 and w[0] == w[1]


def _square_letter(w: Sequence[int], invs: frozenset[int]) -> int | None:
    """The generator ``x`` if ``w`` reduces to ``x x`` modulo the other involutions."""
    r = free_reduce(w, invs)
    if _is_square(r):
        return r[0] if r[0] >= 0 else ~r[0]
    if not r:
        for x in invs:
            r = free_reduce(w, invs - {x})
            if _is_square(r) and r[0] in (x, ~x):
                return x
    return None


def _declared_involutions(words: Sequence[Word]) -> tuple[frozenset[int], dict[int, int]]:
    """Involutions declared by relators that reduce to ``x x``.

    Reducing modulo known involutions can expose further squares, so this
    iterates to a fixed point.  Returns the involutions and, for each
    declaring relator (by position), the generator it declares.
    """
    invs: frozenset[int] = frozenset()
    declares: dict[int, int] = {}
    while True:
        for i, w in enumerate(words):
            if i not in declares:
                x = _square_letter(w, invs)
                if x is not None:
                    declares[i] = x
        found = frozenset(declares.values())
        if found <= invs:
            return invs, declares
        invs |= found


@dataclass(frozen=True)
class Presentation:
    generator_count: int
    relators: tuple[Word, ...]
    generator_names: tuple[str, ...] = ()
    involutions: frozenset[int] = field(init=False)

    def __post_init__(self):
        if self.generator_count < 1:
            raise ValueError("a presentation needs at least one generator")
        names = self.generator_names or tuple(f"r{k}" for k in range(self.generator_count))
        if len(names) != self.generator_count or len(set(names)) != len(names):
            raise ValueError("generator names must be distinct, one per generator")
        object.__setattr__(self, "generator_names", tuple(names))
        for w in self.relators:
            for x in w:
                k = x if x >= 0 else ~x
                if not 0 <= k < self.generator_count:
                    raise ValueError(f"generator index {k} out of range in relator {w}")
        invs, declares = _declared_involutions(self.relators)
        object.__setattr__(self, "involutions", invs)
        rels = []
        for i, w in enumerate(self.relators):
            if i in declares:
                rels.append((declares[i], declares[i]))
                continue
            r = free_reduce(w, invs)
            if not r:
                raise ValueError(f"relator {self.format_word(w)} is empty after free reduction")
            rels.append(r)
        object.__setattr__(self, "relators", tuple(rels))

    def format_word(self, w: Sequence[int]) -> str:
        names = self.generator_names or tuple(f"r{k}" for k in range(self.generator_count))
        return " ".join(names[x] if x >= 0 else f"{names[~x]}^-1" for x in w)

    def serialize(self) -> str:
        lines = ["gens " + " ".join(self.generator_names)]
        lines += ["rel " + self.format_word(w) for w in self.relators]
        return "\n".join(lines) + "\n"

    def reduce(self, w: Iterable[int]) -> Word:
        return free_reduce(w, self.involutions)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[()\[\]^,]))")


class _WordParser:
    def __init__(self, text: str, line: int, col0: int, names: dict[str, int]):
        self.text = text
        self.line = line
        self.col0 = col0
        self.names = names
        self.pos = 0
        self.tok: tuple[str, str, int] | None = None
        self._advance()

    def _error(self, msg: str, pos: int | None = None):
        p = self.pos if pos is None else pos
        raise PresentationSyntaxError(msg, self.line, self.col0 + p + 1)

    def _advance(self):
        stripped = len(self.text) - len(self.text[self.pos:].lstrip())
        if stripped >= len(self.text):
            self.tok = None
            self.pos = len(self.text)
            return
        m = _TOKEN.match(self.text, self.pos)
        if m is None:
            self._error(f"unexpected character {self.text[stripped]!r}", stripped)
        kind = m.lastgroup
        self.tok = (kind, m.group(kind), m.start(kind))
        self.pos = m.end()

    def _expect(self, sym: str):
        if self.tok is None or self.tok[1] != sym:
            where = self.tok[2] if self.tok else len(self.text)
            self._error(f"expected {sym!r}", where)
        self._advance()

    def parse_words(self) -> list[Word]:
        words = [self.word(stop=",")]
        while self.tok is not None and self.tok[1] == ",":
            self._advance()
            words.append(self.word(stop=","))
        if self.tok is not None:
            self._error(f"unexpected {self.tok[1]!r}", self.tok[2])
        return words

    def word(self, stop: str) -> Word:
        out: list[int] = []
        start = self.tok[2] if self.tok else len(self.text)
        while self.tok is not None and self.tok[1] not in (stop, ")", "]", ","):
            out.extend(self.factor())
        if not out:
            self._error("empty word", start)
        return tuple(out)

    def factor(self) -> Word:
        kind, val, where = self.tok
        if kind == "name":
            if val not in self.names:
                self._error(f"unknown generator {val!r}", where)
            self._advance()
            atom: Word = (self.names[val],)
        elif val == "(":
            self._advance()
            atom = self.word(stop=")")
            self._expect(")")
        elif val == "[":
            self._advance()
            a = self.word(stop=",")
            self._expect(",")
            b = self.word(stop="]")
            self._expect("]")
            atom = commutator_word(a, b)
        else:
            self._error(f"unexpected {val!r}", where)
        if self.tok is not None and self.tok[1] == "^":
            self._advance()
            if self.tok is None or self.tok[0] != "int":
                self._error("expected integer exponent", self.tok[2] if self.tok else len(self.text))
            atom = word_power(atom, int(self.tok[1]))
            self._advance()
        return atom


def parse_presentation(text: str) -> Presentation:
    """Parse presentation text.

    Statements are ``gens a b c`` and ``rel w1, w2, ...``, separated by
    newlines or ``;``.  ``#`` comments run to end of line.
    """
    names: dict[str, int] = {}
    order: list[str] = []
    relators: list[tuple[Word, int, int]] = []
    seen_gens = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        offset = 0
        for stmt in line.split(";"):
            col = offset + len(stmt) - len(stmt.lstrip())
            offset += len(stmt) + 1
            s = stmt.strip()
            if not s:
                continue
            head, *rest = s.split(None, 1)
            body = rest[0] if rest else ""
            body_col = col + len(s) - len(body)
            if head == "gens":
                if seen_gens:
                    raise PresentationSyntaxError("duplicate 'gens' statement", lineno, col + 1)
                seen_gens = True
                for tok in body.split():
                    if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
                        raise PresentationSyntaxError(f"bad generator name {tok!r}", lineno, body_col + body.find(tok) + 1)
                    if tok in names:
                        raise PresentationSyntaxError(f"duplicate generator {tok!r}", lineno, body_col + 1)
                    names[tok] = len(order)
                    order.append(tok)
                if not order:
                    raise PresentationSyntaxError("'gens' needs at least one name", lineno, col + 1)
            elif head == "rel":
                if not seen_gens:
                    raise PresentationSyntaxError("'rel' before 'gens'", lineno, col + 1)
                for w in _WordParser(body.strip(), lineno, body_col, names).parse_words():
                    relators.append((w, lineno, body_col + 1))
            else:
                raise PresentationSyntaxError(f"unknown statement {head!r}", lineno, col + 1)
    if not seen_gens:
        raise PresentationSyntaxError("missing 'gens' statement", 1, 1)
    words = [w for w, _, _ in relators]
    invs, declares = _declared_involutions(words)
    for i, (w, lineno, col) in enumerate(relators):
        if i not in declares and not free_reduce(w, invs):
            raise PresentationSyntaxError("relator is empty after free reduction", lineno, col)
    return Presentation(len(order), tuple(words), tuple(order))


def coxeter_string_presentation(labels: Sequence[int | None]) -> Presentation:
    """String Coxeter presentation with branch labels ``p_1..p_{d-1}``.

    ``None`` (or ``math.inf``) marks an infinite label; its relator is omitted.
    """
    d = len(labels) + 1
    if d < 2:
        raise ValueError("rank must be at least 2")
    rels: list[Word] = [(i, i) for i in range(d)]
    for i, p in enumerate(labels):
        if p is None or p == float("inf"):
            continue
        if p < 2:
            raise ValueError(f"branch label {p} < 2")
        rels.append((i, i + 1) * int(p))
    for i in range(d):
        for j in range(i + 2, d):
            rels.append((i, j) * 2)
    return Presentation(d, tuple(rels))


def add_relators(p: Presentation, extra: Iterable[Sequence[int]]) -> Presentation:
    return Presentation(p.generator_count, p.relators + tuple(tuple(w) for w in extra), p.generator_names)


# ---------------------------------------------------------------------------
# coset enumeration


@dataclass(frozen=True)
class CosetTable:
    """Closed coset table; ``rows[c][k]`` is the coset ``c . generator_k``."""

    rows: tuple[tuple[int, ...], ...]
    presentation: Presentation

    @property
    def coset_count(self) -> int:
        return len(self.rows)

    def act(self, coset: int, w: Sequence[int]) -> int:
        inv = self._inverse_rows
        for x in w:
            coset = self.rows[coset][x] if x >= 0 else inv[coset][~x]
        return coset

    @property
    def _inverse_rows(self):
        inv = self.__dict__.get("_inv")
        if inv is None:
            n, g = len(self.rows), self.presentation.generator_count
            cols = [[0] * g for _ in range(n)]
            for c, row in enumerate(self.rows):
                for k, t in enumerate(row):
                    cols[t][k] = c
            inv = tuple(tuple(r) for r in cols)
            object.__setattr__(self, "_inv", inv)
        return inv


class _Enumerator:
    """HLT coset enumeration with a deduction stack and final compression."""

    max_stack = 4096

    def __init__(self, p: Presentation, max_cosets: int):
        self.p = p
        self.max_cosets = max_cosets
        ncol = 0
        self.col: dict[int, int] = {}
        self.inv: list[int] = []
        for k in range(p.generator_count):
            if k in p.involutions:
                self.col[k] = self.col[~k] = ncol
                self.inv.append(ncol)
                ncol += 1
            else:
                self.col[k], self.col[~k] = ncol, ncol + 1
                self.inv += [ncol + 1, ncol]
                ncol += 2
        self.ncol = ncol
        self.table: list[list[int]] = [[-1] * ncol]
        self.parent = [0]
        self.live = 1
        self.deductions: list[tuple[int, int]] = []
        self.rels = [tuple(self.col[x] for x in w) for w in p.relators]
        # cyclic conjugates of relators and inverses, bucketed by first column
        self.conjugates: list[list[tuple[int, ...]]] = [[] for _ in range(ncol)]
        seen = set()
        for w in self.rels:
            winv = tuple(self.inv[c] for c in reversed(w))
            for v in (w, winv):
                for s in range(len(v)):
                    r = v[s:] + v[:s]
                    if r not in seen:
                        seen.add(r)
                        self.conjugates[r[0]].append(r)

    def rep(self, c: int) -> int:
        p = self.parent
        root = c
        while p[root] != root:
            root = p[root]
        while p[c] != root:
            p[c], c = root, p[c]
        return root

    def define(self, a: int, x: int) -> int:
        if self.live >= self.max_cosets:
            raise ResourceExhausted(f"coset enumeration exceeded {self.max_cosets} cosets")
        b = len(self.table)
        self.table.append([-1] * self.ncol)
        self.parent.append(b)
        self.live += 1
        self.table[a][x] = b
        self.table[b][self.inv[x]] = a
        self._push(a, x)
        return b

    def _push(self, a: int, x: int):
        if len(self.deductions) < self.max_stack:
            self.deductions.append((a, x))
        else:
            self.deductions.clear()

    def _merge(self, k: int, l: int, queue: list[int]):
        a, b = self.rep(k), self.rep(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.parent[hi] = lo
            self.live -= 1
            queue.append(hi)

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self._merge(a, b, queue)
        t, inv = self.table, self.inv
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(self.ncol):
                dlt = t[g][x]
                if dlt < 0:
                    continue
                t[dlt][inv[x]] = -1
                mu, nu = self.rep(g), self.rep(dlt)
                if t[mu][x] >= 0:
                    self._merge(nu, t[mu][x], queue)
                elif t[nu][inv[x]] >= 0:
                    self._merge(mu, t[nu][inv[x]], queue)
                else:
                    t[mu][x] = nu
                    t[nu][inv[x]] = mu
                    self._push(mu, x)

    def scan(self, a: int, w: tuple[int, ...], fill: bool) -> None:
        t, inv = self.table, self.inv
        f, b = a, a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] >= 0:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][inv[w[j]]] >= 0:
                b = t[b][inv[w[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][w[i]] = b
                t[b][inv[w[i]]] = f
                self._push(f, w[i])
                return
            if not fill:
                return
            self.define(f, w[i])

    def process_deductions(self):
        while self.deductions:
            a, x = self.deductions.pop()
            if self.parent[a] != a:
                continue
            for w in self.conjugates[x]:
                self.scan(a, w, fill=False)
                if self.parent[a] != a:
                    break
            b = self.table[a][x]
            if b >= 0 and self.parent[b] == b:
                for w in self.conjugates[self.inv[x]]:
                    self.scan(b, w, fill=False)
                    if self.parent[b] != b:
                        break

    def run(self, subgroup: Sequence[Word]) -> CosetTable:
        for w in subgroup:
            w = self.p.reduce(w)
            if w:
                self.scan(0, tuple(self.col[x] for x in w), fill=True)
                self.process_deductions()
        a = 0
        while a < len(self.table):
            if self.parent[a] == a:
                for w in self.rels:
                    self.scan(a, w, fill=True)
                    if self.parent[a] != a:
                        break
                    self.process_deductions()
                if self.parent[a] == a:
                    for x in range(self.ncol):
                        if self.table[a][x] < 0:
                            self.define(a, x)
                    self.process_deductions()
            a += 1
        return self._standardize()

    def _standardize(self) -> CosetTable:
        # renumber live cosets in breadth-first discovery order from coset 0
        gen_cols = [self.col[k] for k in range(self.p.generator_count)]
        number = {0: 0}
        order = [0]
        i = 0
        while i < len(order):
            c = order[i]
            i += 1
            for x in gen_cols:
                nxt = self.rep(self.table[c][x])
                if nxt not in number:
                    number[nxt] = len(order)
                    order.append(nxt)
        rows = tuple(tuple(number[self.rep(self.table[c][x])] for x in gen_cols) for c in order)
        return CosetTable(rows, self.p)


def coset_enumerate(
    p: Presentation, subgroup_gens: Sequence[Sequence[int]] = (), max_cosets: int = DEFAULT_MAX_COSETS
) -> CosetTable:
    """Enumerate the right cosets of ``<subgroup_gens>`` in ``p``.

    Raises ResourceExhausted when more than ``max_cosets`` live cosets are
    needed, which means either infinite index or too small a bound.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    return _Enumerator(p, max_cosets).run([tuple(w) for w in subgroup_gens])


def regular_representation(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS):
    """Permutation group of the generator actions on cosets of the trivial subgroup.

    The returned group's generators are the images of the presentation's
    generators, in order (identity images included).
    """
    from .permgroup import Permutation, PermutationGroup

    table = coset_enumerate(p, (), max_cosets)
    n = table.coset_count
    gens = [Permutation([row[k] for row in table.rows]) for k in range(p.generator_count)]
    return PermutationGroup(gens, degree=n)


def evaluate_word(w: Sequence[int], images: Sequence):
    """Multiply out ``w`` with ``images[k]`` standing for generator ``k``."""
    if not images:
        raise ValueError("need at least one image to fix the domain")
    result = images[0].identity_like()
    for x in w:
        result = result * (images[x] if x >= 0 else ~images[~x])
    return result
