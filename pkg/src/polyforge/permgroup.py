"""Permutation groups: Schreier-Sims chains and subgroup constructions.

Permutations act on the right, ``x^(pq) = (x^p)^q``, so ``p * q`` applies
``p`` first.  Commutators are ``[a, b] = a^-1 b^-1 a b`` and conjugates
``a^b = b^-1 a b``.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
import threading
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

ELEMENT_CAP = 2**16

_ID_CACHE: dict[int, np.ndarray] = {}


class CapExceeded(RuntimeError):
    """An operation would need to enumerate more elements than allowed."""


class DomainMismatchError(ValueError):
    pass


class NotASubgroupError(ValueError):
    pass


class NotNormalError(ValueError):
    pass


class NotATwoGroupError(ValueError):
    pass


def _arange(n: int) -> np.ndarray:
    a = _ID_CACHE.get(n)
    if a is None:
        a = np.arange(n, dtype=np.int32)
        a.flags.writeable = False
        _ID_CACHE[n] = a
    return a


class Permutation:
    """A bijection of ``range(n)`` stored as its image array."""

    __slots__ = ("_a", "_list", "_key")

    def __init__(self, images: Iterable[int], check: bool = True):
        a = np.array(list(images) if not isinstance(images, np.ndarray) else images, dtype=np.int32)
        if a.ndim != 1:
            raise ValueError("images must be one-dimensional")
        if check and not np.array_equal(np.sort(a), _arange(len(a))):
            raise ValueError("images do not form a permutation")
        a.flags.writeable = False
        self._a = a
        self._list = None
        self._key = None

    @classmethod
    def _raw(cls, a: np.ndarray) -> "Permutation":
        p = cls.__new__(cls)
        a.flags.writeable = False
        p._a = a
        p._list = None
        p._key = None
        return p

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._raw(_arange(n).copy())

    def identity_like(self) -> "Permutation":
        return Permutation.identity(len(self._a))

    @property
    def degree(self) -> int:
        return len(self._a)

    def __len__(self) -> int:
        return len(self._a)

    @property
    def images(self) -> tuple[int, ...]:
        return tuple(self.as_list())

    @property
    def array(self) -> np.ndarray:
        return self._a

    def as_list(self) -> list[int]:
        if self._list is None:
            self._list = self._a.tolist()
        return self._list

    def __call__(self, point: int) -> int:
        return self.as_list()[point]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if len(other._a) != len(self._a):
            raise DomainMismatchError("permutations act on different domains")
        return Permutation._raw(other._a[self._a])

    def __invert__(self) -> "Permutation":
        inv = np.empty_like(self._a)
        inv[self._a] = _arange(len(self._a))
        return Permutation._raw(inv)

    inverse = __invert__

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else ~self
        k = abs(k)
        result = self.identity_like()
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, by: "Permutation") -> "Permutation":
        return ~by * self * by

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = self._a.tobytes()
        return self._key

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return len(self._a) == len(other._a) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._a, _arange(len(self._a))))

    def smallest_moved_point(self) -> int | None:
        moved = np.flatnonzero(self._a != _arange(len(self._a)))
        return int(moved[0]) if len(moved) else None

    def order(self) -> int:
        seen = np.zeros(len(self._a), dtype=bool)
        lst = self.as_list()
        result = 1
        for start in range(len(lst)):
            if seen[start]:
                continue
            length = 0
            x = start
            while not seen[x]:
                seen[x] = True
                x = lst[x]
                length += 1
            result = math.lcm(result, length)
        return result

    def serialize(self) -> str:
        return "p: " + " ".join(map(str, self.as_list()))

    def __repr__(self) -> str:
        lst = self.as_list()
        if len(lst) > 12:
            return f"Permutation(<{len(lst)} points>)"
        return f"Permutation({lst})"


def commutator(a: Permutation, b: Permutation) -> Permutation:
    return ~a * ~b * a * b


def parse_permutation(line: str) -> Permutation:
    head, _, body = line.strip().partition(":")
    if head.strip() != "p":
        raise ValueError(f"expected 'p: ...', got {line!r}")
    return Permutation(int(t) for t in body.split())


# ---------------------------------------------------------------------------
# Schreier-Sims


class _Level:
    __slots__ = ("point", "gens", "orbit", "transversal", "inverses", "checked")

    def __init__(self, point: int, n: int):
        self.point = point
        self.gens: list[Permutation] = []
        self.orbit: list[int] = [point]
        self.transversal: dict[int, Permutation] = {point: Permutation.identity(n)}
        self.inverses: dict[int, Permutation] = {}
        self.checked: set[tuple[int, int]] = set()

    def copy(self) -> "_Level":
        other = _Level.__new__(_Level)
        other.point = self.point
        other.gens = list(self.gens)
        other.orbit = list(self.orbit)
        other.transversal = dict(self.transversal)
        other.inverses = dict(self.inverses)
        other.checked = set(self.checked)
        return other

    def inverse(self, beta: int) -> Permutation:
        inv = self.inverses.get(beta)
        if inv is None:
            inv = self.inverses[beta] = ~self.transversal[beta]
        return inv

    def extend_orbit(self):
        trans = self.transversal
        i = 0
        while i < len(self.orbit):
            beta = self.orbit[i]
            for s in self.gens:
                gamma = s(beta)
                if gamma not in trans:
                    trans[gamma] = trans[beta] * s
                    self.orbit.append(gamma)
            i += 1


class _Chain:
    """Base and strong generating set, built incrementally and deterministically."""

    def __init__(self, n: int):
        self.n = n
        self.levels: list[_Level] = []

    def copy(self) -> "_Chain":
        c = _Chain(self.n)
        c.levels = [lvl.copy() for lvl in self.levels]
        return c

    @property
    def base(self) -> list[int]:
        return [lvl.point for lvl in self.levels]

    def order(self) -> int:
        return math.prod(len(lvl.orbit) for lvl in self.levels)

    def strip(self, g: Permutation, start: int = 0) -> tuple[Permutation, int]:
        for j in range(start, len(self.levels)):
            lvl = self.levels[j]
            beta = g(lvl.point)
            if beta not in lvl.transversal:
                return g, j
            if beta != lvl.point:
                g = g * lvl.inverse(beta)
        return g, len(self.levels)

    def contains(self, g: Permutation) -> bool:
        h, j = self.strip(g)
        return j == len(self.levels) and h.is_identity()

    def add(self, g: Permutation) -> bool:
        h, j = self.strip(g)
        if j == len(self.levels) and h.is_identity():
            return False
        self._insert(h, j, 0)
        self._complete(j)
        return True

    def _insert(self, h: Permutation, upto: int, start: int):
        if upto == len(self.levels):
            self.levels.append(_Level(h.smallest_moved_point(), self.n))
        for lvl in self.levels[start:upto + 1]:
            lvl.gens.append(h)
            lvl.extend_orbit()

    def _complete(self, i: int):
        while i >= 0:
            lvl = self.levels[i]
            jump = None
            for beta in lvl.orbit:
                u = lvl.transversal[beta]
                for s_idx, s in enumerate(lvl.gens):
                    if (beta, s_idx) in lvl.checked:
                        continue
                    lvl.checked.add((beta, s_idx))
                    gamma = s(beta)
                    y = Permutation._raw(lvl.inverse(gamma)._a[s._a[u._a]])
                    if y.is_identity():
                        continue
                    h, j = self.strip(y, i + 1)
                    if j < len(self.levels) or not h.is_identity():
                        self._insert(h, j, i + 1)
                        jump = j
                        break
                if jump is not None:
                    break
            i = jump if jump is not None else i - 1


# ---------------------------------------------------------------------------
# groups

_tracker: contextvars.ContextVar[list | None] = contextvars.ContextVar("subgroup_tracker", default=None)


@contextlib.contextmanager
def track_subgroups() -> Iterator[list[tuple[str, int, int]]]:
    """Record ``(operation, parent order, subgroup order)`` for every subgroup built inside."""
    log: list[tuple[str, int, int]] = []
    token = _tracker.set(log)
    try:
        yield log
    finally:
        _tracker.reset(token)


def _track(op: str, parent: "PermutationGroup", sub: "PermutationGroup") -> "PermutationGroup":
    log = _tracker.get()
    if log is not None:
        log.append((op, parent.order(), sub.order()))
    return sub


class PermutationGroup:
    """Group generated by permutations of ``range(degree)``.

    The stabilizer chain is built lazily on first use and never changes
    afterwards.
    """

    def __init__(self, generators: Iterable[Permutation] = (), degree: int | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise ValueError("degree is required for a group without generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DomainMismatchError(f"generator on {g.degree} points, group degree {degree}")
        self.generators: list[Permutation] = gens
        self.degree = degree
        self._chain: _Chain | None = None
        self._lock = threading.Lock()

    @classmethod
    def _from_chain(cls, gens: list[Permutation], degree: int, chain: _Chain) -> "PermutationGroup":
        G = cls(gens, degree)
        G._chain = chain
        return G

    @property
    def chain(self) -> _Chain:
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    chain = _Chain(self.degree)
                    for g in self.generators:
                        chain.add(g)
                    self._chain = chain
        return self._chain

    @property
    def base(self) -> list[int]:
        return self.chain.base

    def order(self) -> int:
        return self.chain.order()

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def is_trivial(self) -> bool:
        return all(g.is_identity() for g in self.generators)

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise DomainMismatchError(f"permutation on {g.degree} points, group degree {self.degree}")
        return self.chain.contains(g)

    __contains__ = contains

    def extended(self, extra: Iterable[Permutation]) -> "PermutationGroup":
        """The group generated by this one's generators plus ``extra``."""
        chain = self.chain.copy()
        gens = list(self.generators)
        for g in extra:
            if chain.add(g):
                gens.append(g)
        return PermutationGroup._from_chain(gens, self.degree, chain)

    def element_matrix(self, cap: int = ELEMENT_CAP) -> np.ndarray:
        """All elements as rows of an ``order x degree`` array, deterministic order."""
        if self.order() > cap:
            raise CapExceeded(f"group of order {self.order()} exceeds element cap {cap}")
        E = _arange(self.degree)[None, :].copy()
        for lvl in reversed(self.chain.levels):
            E = np.concatenate([lvl.transversal[b]._a[E] for b in lvl.orbit])
        return E

    def elements(self, cap: int = ELEMENT_CAP) -> list[Permutation]:
        return [Permutation._raw(row) for row in self.element_matrix(cap)]

    def is_subgroup_of(self, other: "PermutationGroup") -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermutationGroup):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.order() == other.order()
            and self.is_subgroup_of(other)
        )

    __hash__ = None

    def serialize(self) -> str:
        return "\n".join([f"degree {self.degree}"] + [g.serialize() for g in self.generators]) + "\n"

    def __repr__(self) -> str:
        return f"PermutationGroup(degree={self.degree}, gens={len(self.generators)})"


def parse_group(text: str) -> PermutationGroup:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if len(head) != 2 or head[0] != "degree":
        raise ValueError("group text must start with 'degree N'")
    return PermutationGroup([parse_permutation(ln) for ln in lines[1:]], degree=int(head[1]))


def _closure(start: PermutationGroup, candidates: Iterable[Permutation]) -> PermutationGroup:
    chain = start.chain.copy()
    gens = list(start.generators)
    for c in candidates:
        if chain.add(c):
            gens.append(c)
    return PermutationGroup._from_chain(gens, start.degree, chain)


def _rows(M: np.ndarray) -> Iterator[Permutation]:
    for row in M:
        yield Permutation._raw(row)


def _check_members(G: PermutationGroup, gens: Sequence[Permutation]):
    for g in gens:
        if not G.contains(g):
            raise NotASubgroupError(f"{g!r} is not an element of the group")


def _is_power_of_two(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def is_two_group(G: PermutationGroup) -> bool:
    return _is_power_of_two(G.order())


def _require_two_group(G: PermutationGroup):
    if not is_two_group(G):
        raise NotATwoGroupError(f"group order {G.order()} is not a power of 2")


def group_order(G: PermutationGroup) -> int:
    return G.order()


def contains(G: PermutationGroup, g: Permutation) -> bool:
    return G.contains(g)


def elements(G: PermutationGroup, cap: int = ELEMENT_CAP) -> list[Permutation]:
    return G.elements(cap)


def subgroup(G: PermutationGroup, gens: Sequence[Permutation]) -> PermutationGroup:
    _check_members(G, gens)
    return _track("subgroup", G, PermutationGroup(gens, degree=G.degree))


def normal_closure(G: PermutationGroup, gens: Sequence[Permutation]) -> PermutationGroup:
    """Smallest normal subgroup of ``G`` containing ``gens``."""
    _check_members(G, gens)
    N = _closure(PermutationGroup([], G.degree), gens)
    queue = deque(N.generators)
    while queue:
        x = queue.popleft()
        for g in G.generators:
            c = x.conjugate(g)
            if not N.contains(c):
                N = N.extended([c])
                queue.append(c)
    return _track("normal_closure", G, N)


def _generator_commutators(A: Sequence[Permutation], B: Sequence[Permutation]) -> list[Permutation]:
    return [commutator(a, b) for a in A for b in B]


def derived_subgroup(G: PermutationGroup) -> PermutationGroup:
    gens = G.generators
    comms = [commutator(gens[i], gens[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))]
    return _track("derived_subgroup", G, normal_closure(G, comms))


def lower_central_term(G: PermutationGroup, k: int) -> PermutationGroup:
    """Term ``k`` of the lower central series; term 1 is ``G``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    term = G
    for _ in range(k - 1):
        # [N, G] is the normal closure of commutators of generators when N is normal
        term = normal_closure(G, _generator_commutators(term.generators, G.generators))
    return _track("lower_central_term", G, term)


def frattini_2group(G: PermutationGroup) -> PermutationGroup:
    """Frattini subgroup of a 2-group, as the normal closure of squares and commutators of generators."""
    _require_two_group(G)
    gens = G.generators
    cands = [g * g for g in gens]
    cands += [commutator(gens[i], gens[j]) for i in range(len(gens)) for j in range(i + 1, len(gens))]
    return _track("frattini_2group", G, normal_closure(G, cands))


def _cayley_graph(G: PermutationGroup, cap: int) -> tuple[list[Permutation], list[list[int]]]:
    """Elements by breadth-first search over generators, plus right-multiplication edges."""
    ident = G.identity()
    elems = [ident]
    index = {ident.key: 0}
    edges: list[list[int]] = []
    i = 0
    while i < len(elems):
        row = []
        for s in G.generators:
            y = elems[i] * s
            j = index.get(y.key)
            if j is None:
                if len(elems) >= cap:
                    raise CapExceeded(f"group has more than {cap} elements")
                j = index[y.key] = len(elems)
                elems.append(y)
            row.append(j)
        edges.append(row)
        i += 1
    return elems, edges


def maximal_subgroups_2group(G: PermutationGroup, cap: int = 2**10) -> list[set[bytes]]:
    """Element sets of all maximal subgroups of a 2-group.

    These are the kernels of the nonzero homomorphisms onto Z/2, found by
    propagating a parity labelling over the Cayley graph; no stabilizer
    chains are involved.
    """
    _require_two_group(G)
    elems, edges = _cayley_graph(G, cap)
    k = len(G.generators)
    kernels: list[set[bytes]] = []
    for mask in range(1, 2**k):
        bits = [(mask >> t) & 1 for t in range(k)]
        parity = [-1] * len(elems)
        parity[0] = 0
        ok = True
        queue = deque([0])
        while queue and ok:
            i = queue.popleft()
            for t, j in enumerate(edges[i]):
                want = parity[i] ^ bits[t]
                if parity[j] < 0:
                    parity[j] = want
                    queue.append(j)
                elif parity[j] != want:
                    ok = False
                    break
        if ok:
            ker = frozenset(e.key for e, p in zip(elems, parity) if p == 0)
            if ker not in kernels:
                kernels.append(ker)
    return [set(k) for k in kernels]


def frattini_by_maximal_subgroups(G: PermutationGroup, cap: int = 2**10) -> PermutationGroup:
    """Frattini subgroup as the intersection of all maximal subgroups (brute force)."""
    kernels = maximal_subgroups_2group(G, cap)
    if not kernels:
        return PermutationGroup([], G.degree)
    common = set.intersection(*kernels)
    members = [Permutation._raw(np.frombuffer(k, dtype=np.int32).copy()) for k in sorted(common)]
    return _closure(PermutationGroup([], G.degree), members)


def _power_rows(E: np.ndarray, j: int) -> np.ndarray:
    X = E
    for _ in range(j):
        X = np.take_along_axis(X, X, axis=1)
    return X


def agemo(G: PermutationGroup, j: int, cap: int = ELEMENT_CAP) -> PermutationGroup:
    """Subgroup generated by all ``x^(2^j)``, by full element enumeration."""
    if j < 1:
        raise ValueError("j must be at least 1")
    _require_two_group(G)
    P = np.unique(_power_rows(G.element_matrix(cap), j), axis=0)
    return _track("agemo", G, _closure(PermutationGroup([], G.degree), _rows(P)))


def omega(G: PermutationGroup, j: int, cap: int = ELEMENT_CAP) -> PermutationGroup:
    """Subgroup generated by all elements whose order divides ``2^j``."""
    if j < 1:
        raise ValueError("j must be at least 1")
    _require_two_group(G)
    E = G.element_matrix(cap)
    mask = (_power_rows(E, j) == _arange(G.degree)).all(axis=1)
    return _track("omega", G, _closure(PermutationGroup([], G.degree), _rows(E[mask])))


def intersection(H1: PermutationGroup, H2: PermutationGroup, cap: int = ELEMENT_CAP) -> PermutationGroup:
    """``H1 ∩ H2`` by enumerating the smaller group and sifting in the other."""
    if H1.degree != H2.degree:
        raise DomainMismatchError("groups act on different domains")
    small, big = (H1, H2) if H1.order() <= H2.order() else (H2, H1)
    members = (g for g in _rows(small.element_matrix(cap)) if big.contains(g))
    result = _closure(PermutationGroup([], H1.degree), members)
    _track("intersection", H1, result)
    return _track("intersection", H2, result)


def is_normal(G: PermutationGroup, H: PermutationGroup) -> bool:
    _check_members(G, H.generators)
    return all(H.contains(h.conjugate(g)) for h in H.generators for g in G.generators)


def is_elementary_abelian(G: PermutationGroup) -> bool:
    gens = G.generators
    return all((g * g).is_identity() for g in gens) and all(
        (a * b) == (b * a) for i, a in enumerate(gens) for b in gens[i + 1:]
    )


def is_abelian(G: PermutationGroup) -> bool:
    gens = G.generators
    return all((a * b) == (b * a) for i, a in enumerate(gens) for b in gens[i + 1:])


def center(G: PermutationGroup, cap: int = ELEMENT_CAP) -> PermutationGroup:
    """Center by element enumeration."""
    E = G.element_matrix(cap)
    mask = np.ones(len(E), dtype=bool)
    for s in G.generators:
        # row x commutes with s iff s[x] == x[s]
        mask &= (s.array[E] == E[:, s.array]).all(axis=1)
    return _track("center", G, _closure(PermutationGroup([], G.degree), _rows(E[mask])))


@dataclass
class GroupHom:
    """Homomorphism given by images of the source generators."""

    source: PermutationGroup
    target: PermutationGroup
    generator_images: list[Permutation]
    _table: dict[bytes, Permutation] | None = field(default=None, repr=False)

    def __call__(self, g: Permutation) -> Permutation:
        if self._table is None:
            elems, edges = _cayley_graph(self.source, ELEMENT_CAP)
            imgs = [self.target.identity()] + [None] * (len(elems) - 1)
            for i, row in enumerate(edges):
                for t, j in enumerate(row):
                    if imgs[j] is None:
                        imgs[j] = imgs[i] * self.generator_images[t]
            self._table = {e.key: im for e, im in zip(elems, imgs)}
        try:
            return self._table[g.key]
        except KeyError:
            raise NotASubgroupError("element is not in the source group") from None


def hom_extends(
    G: PermutationGroup, target_images: Sequence[Permutation], H: PermutationGroup | None = None
) -> bool:
    """Whether ``G.generators[i] -> target_images[i]`` extends to a homomorphism.

    The pairs generate a subgroup of the direct product acting on the disjoint
    union of both domains; the map is a homomorphism iff that subgroup
    projects isomorphically onto ``G``, i.e. has the same order.
    """
    if len(target_images) != len(G.generators):
        raise ValueError(f"{len(G.generators)} generators but {len(target_images)} images")
    if not target_images:
        return True
    m = target_images[0].degree
    if any(h.degree != m for h in target_images):
        raise DomainMismatchError("images act on different domains")
    if H is not None:
        _check_members(H, target_images)
    n = G.degree
    pairs = [
        Permutation._raw(np.concatenate([g.array, h.array + n]).astype(np.int32))
        for g, h in zip(G.generators, target_images)
    ]
    return PermutationGroup(pairs, degree=n + m).order() == G.order()


def quotient(
    G: PermutationGroup, N: PermutationGroup, cap: int = ELEMENT_CAP
) -> tuple[PermutationGroup, GroupHom]:
    """Action of ``G`` on the right cosets of a normal subgroup ``N``.

    Cosets are numbered in breadth-first discovery order from ``N`` itself,
    following the order of ``G``'s generators.
    """
    if not is_normal(G, N):
        raise NotNormalError("subgroup is not normal")
    index = G.order() // N.order()
    if index > cap:
        raise CapExceeded(f"quotient of order {index} exceeds element cap {cap}")
    M = N.element_matrix(cap)

    def coset_key(x: Permutation) -> bytes:
        return min(row.tobytes() for row in x.array[M])

    reps = [G.identity()]
    index_of = {coset_key(reps[0]): 0}
    action: list[list[int]] = [[] for _ in G.generators]
    i = 0
    while i < len(reps):
        for t, s in enumerate(G.generators):
            y = reps[i] * s
            k = coset_key(y)
            j = index_of.get(k)
            if j is None:
                j = index_of[k] = len(reps)
                reps.append(y)
            action[t].append(j)
        i += 1
    assert len(reps) == index
    images = [Permutation(a) for a in action] if G.generators else []
    Q = PermutationGroup(images, degree=index)
    return Q, GroupHom(G, Q, images)


def group_equal(H1: PermutationGroup, H2: PermutationGroup) -> bool:
    return H1 == H2
