"""The abstract regular polytope of a string C-group.

Flags are the group elements. The ``i``-adjacent flag of ``g`` is ``g rho_i``,
so the faces of rank ``i`` are the left cosets ``g <rho_j : j != i>``, which are
exactly the components of the flag graph with colour ``i`` removed. Two faces
are incident iff their cosets meet, i.e. iff some flag contains both.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .permgroup import ELEMENT_CAP, CapExceeded
from .string_cgroup import StringCGroup

Face = tuple[int, int]  # (rank, id); ranks -1 and d hold the single improper face 0


@dataclass(frozen=True)
class Polytope:
    rank: int
    flags: tuple[tuple[int, ...], ...]
    adjacency: tuple[tuple[int, ...], ...]
    incidence: frozenset[tuple[Face, Face]]
    group: StringCGroup | None = field(default=None, compare=False)

    @classmethod
    def from_flags(
        cls,
        rank: int,
        flags: Sequence[Sequence[int]],
        adjacency: Sequence[Sequence[int]],
        incidence=None,
        group: StringCGroup | None = None,
    ) -> "Polytope":
        """Build from raw flag data; incidence defaults to co-occurrence in a flag."""
        flags = tuple(tuple(f) for f in flags)
        adjacency = tuple(tuple(a) for a in adjacency)
        if len(adjacency) != rank or any(len(a) != len(flags) for a in adjacency):
            raise ValueError("adjacency must give one flag permutation per rank")
        if incidence is None:
            incidence = set()
            for f in flags:
                for r, s in itertools.combinations(range(rank), 2):
                    incidence.add(((r, f[r]), (s, f[s])))
        return cls(rank, flags, adjacency, frozenset(incidence), group)

    @property
    def flag_count(self) -> int:
        return len(self.flags)

    def faces(self, r: int) -> list[Face]:
        if r == -1 or r == self.rank:
            return [(r, 0)]
        return [(r, k) for k in range(len({f[r] for f in self.flags}))]

    def incident(self, a: Face, b: Face) -> bool:
        if a[0] > b[0]:
            a, b = b, a
        if a == b:
            return True
        if a[0] == b[0]:
            return False
        if a[0] == -1 or b[0] == self.rank:
            return True
        return (a, b) in self.incidence

    def __repr__(self) -> str:
        return f"Polytope(rank={self.rank}, flags={self.flag_count}, faces={face_counts(self)})"


def build_polytope(S: StringCGroup, cap: int = ELEMENT_CAP) -> Polytope:
    if S.order() > cap:
        raise CapExceeded(f"group order {S.order()} exceeds cap {cap}")
    d = S.rank
    maps = [r.as_list() for r in S.rho]
    start = tuple(S.group.base)
    index = {start: 0}
    keys = [start]
    # breadth-first over right multiplication by rho_i; flag 0 is the identity
    for t in keys:
        for m in maps:
            u = tuple(m[x] for x in t)
            if u not in index:
                index[u] = len(keys)
                keys.append(u)
    adjacency = [[index[tuple(m[x] for x in t)] for t in keys] for m in maps]

    labels = [[0] * len(keys) for _ in range(d)]
    for i in range(d):
        seen = [-1] * len(keys)
        nxt = 0
        for f in range(len(keys)):
            if seen[f] >= 0:
                continue
            seen[f] = nxt
            stack = [f]
            while stack:
                x = stack.pop()
                for j in range(d):
                    if j != i:
                        y = adjacency[j][x]
                        if seen[y] < 0:
                            seen[y] = nxt
                            stack.append(y)
            nxt += 1
        labels[i] = seen
    flags = [tuple(labels[i][f] for i in range(d)) for f in range(len(keys))]
    return Polytope.from_flags(d, flags, adjacency, group=S)


def face_counts(P: Polytope) -> list[int]:
    return [len(P.faces(r)) for r in range(P.rank)]


def _upper(P: Polytope) -> dict[Face, set[Face]]:
    """Faces one rank above each face, improper faces included."""
    up: dict[Face, set[Face]] = defaultdict(set)
    d = P.rank
    for r in range(-1, d):
        for a in P.faces(r):
            for b in P.faces(r + 1):
                if P.incident(a, b):
                    up[a].add(b)
    return up


def check_diamond(P: Polytope) -> bool:
    """Every incident pair two ranks apart has exactly two faces between them."""
    up = _upper(P)
    for j in range(P.rank):
        for low in P.faces(j - 1):
            between: dict[Face, int] = defaultdict(int)
            for mid in up[low]:
                for high in up[mid]:
                    between[high] += 1
            for high in P.faces(j + 1):
                if P.incident(low, high) and between.get(high, 0) != 2:
                    return False
    return True


def check_strong_flag_connected(P: Polytope) -> bool:
    """For every set ``T`` of ranks, flags sharing their ``T``-faces are connected
    through adjacencies of colours outside ``T``."""
    d = P.rank
    nflags = P.flag_count
    for size in range(d + 1):
        for T in itertools.combinations(range(d), size):
            free = [i for i in range(d) if i not in T]
            comp = [-1] * nflags
            c = 0
            for f in range(nflags):
                if comp[f] >= 0:
                    continue
                comp[f] = c
                stack = [f]
                while stack:
                    x = stack.pop()
                    for i in free:
                        y = P.adjacency[i][x]
                        if comp[y] < 0:
                            comp[y] = c
                            stack.append(y)
                c += 1
            classes: dict[tuple[int, ...], int] = {}
            for f, flag in enumerate(P.flags):
                key = tuple(flag[t] for t in T)
                if classes.setdefault(key, comp[f]) != comp[f]:
                    return False
    return True


def section_type_rank3(P: Polytope) -> list[int]:
    """Orders of ``<rho_{j-2}, rho_{j-1}, rho_j>`` for ``j = 2 .. d-1``."""
    if P.rank < 3:
        raise ValueError("rank-3 sections need rank at least 3")
    if P.group is None:
        raise ValueError("polytope was not built from a group")
    return [P.group.parabolic((j - 2, j - 1, j)).order() for j in range(2, P.rank)]


def is_flat(P: Polytope, k: int, l: int) -> bool:
    if not 0 <= k < l <= P.rank - 1:
        raise ValueError(f"need 0 <= k < l <= {P.rank - 1}")
    return all(P.incident(a, b) for a in P.faces(k) for b in P.faces(l))


def is_tight(P: Polytope) -> bool:
    if P.group is None:
        raise ValueError("polytope was not built from a group")
    bound = 2
    for p in P.group.schlafli.entries:
        bound *= p
    return P.flag_count == bound


def covering_flag_map(P: Polytope, Q: Polytope) -> list[int] | None:
    """Map flags of ``P`` to flags of ``Q`` sending base to base and
    ``i``-adjacency to ``i``-adjacency, or ``None`` if no such map exists."""
    if P.rank != Q.rank:
        return None
    image = [-1] * P.flag_count
    image[0] = 0
    stack = [0]
    while stack:
        f = stack.pop()
        for i in range(P.rank):
            g, h = P.adjacency[i][f], Q.adjacency[i][image[f]]
            if image[g] < 0:
                image[g] = h
                stack.append(g)
            elif image[g] != h:
                return None
    if min(image) < 0:
        return None
    return image


def export_flag_graph(P: Polytope) -> str:
    lines = ["graph flags {"]
    for f in range(P.flag_count):
        lines.append(f"  f{f};")
    for i in range(P.rank):
        for f, g in enumerate(P.adjacency[i]):
            if f < g:
                lines.append(f'  f{f} -- f{g} [label="{i}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
