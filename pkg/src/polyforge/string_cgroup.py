"""String C-groups: validation, Schläfli type, and the rotation-subgroup dissection.

For a string C-group ``G = <rho_0, ..., rho_{d-1}>`` of order ``2^n`` the
dissection consists of

* ``A``   = ``<rho_0 rho_1, ..., rho_{d-2} rho_{d-1}>`` (rotation subgroup),
* ``A_i`` = ``A``'s generating list with ``rho_{i-1} rho_i`` replaced by its square,
* ``B_i`` = ``A_1 ∩ ... ∩ A_{i+1}`` and ``C_i`` = ``Φ(A_1) ∩ ... ∩ Φ(A_{i+1})``,
* ``B``   = intersection of all ``A_i``, ``C`` = intersection of all ``Φ(A_i)``.

``theorem_check`` verifies every structural statement about these groups on
a concrete input and collects the outcomes in a ``VerificationReport``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .fpgroup import evaluate_word
from .permgroup import (
    ELEMENT_CAP,
    NotNormalError,
    Permutation,
    PermutationGroup,
    agemo,
    commutator,
    derived_subgroup,
    frattini_2group,
    hom_extends,
    intersection,
    is_normal,
    lower_central_term,
    normal_closure,
    quotient,
    subgroup,
)
from .report import VerificationReport


class ValidationError(ValueError):
    """The generators do not form a string C-group.

    ``kind`` is one of ``"non-involution"``, ``"string-condition"``,
    ``"generation"``, ``"intersection-condition"``.
    """

    def __init__(self, kind: str, message: str, **details):
        super().__init__(f"{kind}: {message}")
        self.kind = kind
        self.details = details


class HypothesisError(ValueError):
    """Input lies outside the hypotheses (2-power order, non-degenerate, 2-power type)."""


class ContractViolation(AssertionError):
    """A structural identity that must hold for valid inputs failed."""


@dataclass(frozen=True)
class SchlafliType:
    entries: tuple[int, ...]

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.entries)) + "}"

    @property
    def is_nondegenerate(self) -> bool:
        return all(p != 2 for p in self.entries)


def _log2(n: int) -> int | None:
    return n.bit_length() - 1 if n > 0 and n & (n - 1) == 0 else None


def _orbit_keys(gens: Sequence[Permutation], base: Sequence[int]):
    """Orbit of the base tuple under ``gens``, with parent pointers.

    Elements of a group are determined by their base images, so for a
    subgroup of the group owning ``base`` this orbit is in bijection with
    the subgroup's elements.
    """
    maps = [g.as_list() for g in gens]
    start = tuple(base)
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], int] | None] = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for t in frontier:
            for k, m in enumerate(maps):
                u = tuple(m[x] for x in t)
                if u not in parent:
                    parent[u] = (t, k)
                    nxt.append(u)
        frontier = nxt
    return parent


def _element_from_key(key, parent, gens: Sequence[Permutation], degree: int) -> Permutation:
    word = []
    while parent[key] is not None:
        key, k = parent[key]
        word.append(k)
    g = Permutation.identity(degree)
    for k in reversed(word):
        g = g * gens[k]
    return g


class StringCGroup:
    """A permutation group with verified distinguished generators; build with ``validate``."""

    def __init__(self, group: PermutationGroup, rho: Sequence[Permutation]):
        self.group = group
        self.rho = list(rho)
        self._parabolics: dict[frozenset[int], PermutationGroup] = {}

    @property
    def rank(self) -> int:
        return len(self.rho)

    def order(self) -> int:
        return self.group.order()

    @cached_property
    def schlafli(self) -> SchlafliType:
        return SchlafliType(tuple((self.rho[i - 1] * self.rho[i]).order() for i in range(1, self.rank)))

    def parabolic(self, indices) -> PermutationGroup:
        key = frozenset(indices)
        P = self._parabolics.get(key)
        if P is None:
            P = self._parabolics[key] = PermutationGroup(
                [self.rho[i] for i in sorted(key)], self.group.degree
            )
        return P

    @cached_property
    def _dissection(self) -> "_Dissection":
        return _Dissection(self)

    def __repr__(self) -> str:
        return f"StringCGroup(order={self.order()}, type={self.schlafli})"


def validate(group: PermutationGroup, rho: Sequence[Permutation]) -> StringCGroup:
    """Check that ``rho`` makes ``group`` a string C-group.

    The intersection condition is checked for every pair of index subsets.
    """
    rho = list(rho)
    d = len(rho)
    if d < 1:
        raise ValidationError("generation", "need at least one generator")
    for i, r in enumerate(rho):
        if r.degree != group.degree:
            raise ValidationError("generation", f"rho_{i} acts on the wrong domain")
        if r.order() != 2:
            raise ValidationError("non-involution", f"rho_{i} has order {r.order()}", index=i)
    for i, j in itertools.combinations(range(d), 2):
        if j - i >= 2 and not (rho[i] * rho[j]).order() <= 2:
            raise ValidationError(
                "string-condition", f"rho_{i} and rho_{j} do not commute", indices=(i, j)
            )
    G = PermutationGroup(rho, group.degree)
    for g in group.generators:
        if not G.contains(g):
            raise ValidationError("generation", "rho does not generate the group")

    base = G.base
    masks = range(2**d)
    orbits = {}
    for m in masks:
        gens = [rho[i] for i in range(d) if m >> i & 1]
        orbits[m] = (_orbit_keys(gens, base), gens)
    for K in masks:
        for J in masks:
            if K & J in (K, J):
                continue
            pk, gk = orbits[K]
            pj, _ = orbits[J]
            common = pk.keys() & pj.keys()
            expected = orbits[K & J][0].keys()
            if len(common) != len(expected) or not expected <= common:
                extra = sorted(common - expected)
                witness = _element_from_key(extra[0], pk, gk, G.degree) if extra else None
                raise ValidationError(
                    "intersection-condition",
                    f"<rho_i : i in {_bits(K)}> ∩ <rho_i : i in {_bits(J)}> is larger than "
                    f"<rho_i : i in {_bits(K & J)}>",
                    K=_bits(K), J=_bits(J), witness=witness,
                )
    S = StringCGroup(G, rho)
    return S


def _bits(m: int) -> tuple[int, ...]:
    return tuple(i for i in range(m.bit_length()) if m >> i & 1)


def schlafli_type(S: StringCGroup) -> SchlafliType:
    return S.schlafli


def is_nondegenerate(S: StringCGroup) -> bool:
    return S.schlafli.is_nondegenerate


def _hypothesis_problem(S: StringCGroup) -> str | None:
    n = _log2(S.order())
    if n is None:
        return f"order {S.order()} is not a power of 2"
    if S.rank < 2:
        return "rank must be at least 2"
    if not S.schlafli.is_nondegenerate:
        return f"degenerate Schläfli type {S.schlafli}"
    bad = [p for p in S.schlafli.entries if _log2(p) is None or p < 4]
    if bad:
        return f"Schläfli type {S.schlafli} has entries that are not powers of 2 at least 4"
    return None


def _require_hypotheses(S: StringCGroup):
    problem = _hypothesis_problem(S)
    if problem:
        raise HypothesisError(problem)


class _Dissection:
    """Lazily computed ``A``, ``A_i``, ``Φ(A_i)``, ``B_i``, ``C_i`` for one string C-group."""

    def __init__(self, S: StringCGroup):
        self.S = S
        self.n = _log2(S.order())
        self.d = S.rank
        rho = S.rho
        self.rotations = [rho[k] * rho[k + 1] for k in range(self.d - 1)]

    @cached_property
    def A(self) -> PermutationGroup:
        return subgroup(self.S.group, self.rotations)

    def a_gens(self, i: int) -> list[Permutation]:
        gens = list(self.rotations)
        gens[i - 1] = gens[i - 1] * gens[i - 1]
        return gens

    @cached_property
    def A_list(self) -> list[PermutationGroup]:
        return [subgroup(self.S.group, self.a_gens(i)) for i in range(1, self.d)]

    @cached_property
    def phi_A_list(self) -> list[PermutationGroup]:
        return [frattini_2group(Ai) for Ai in self.A_list]

    @staticmethod
    def _chain(groups: list[PermutationGroup]) -> list[PermutationGroup]:
        out = []
        cur = groups[0]
        for H in groups[1:]:
            cur = intersection(cur, H)
            out.append(cur)
        return out

    @cached_property
    def B_chain(self) -> list[PermutationGroup]:
        return self._chain(self.A_list)

    @cached_property
    def C_chain(self) -> list[PermutationGroup]:
        return self._chain(self.phi_A_list)

    @property
    def B(self) -> PermutationGroup:
        return self.B_chain[-1] if self.B_chain else self.A_list[0]

    @property
    def C(self) -> PermutationGroup:
        return self.C_chain[-1] if self.C_chain else self.phi_A_list[0]


def rotation_subgroup(S: StringCGroup, check: bool = True) -> PermutationGroup:
    A = S._dissection.A
    if check and _hypothesis_problem(S) is None and S.order() != 2 * A.order():
        raise ContractViolation(f"rotation subgroup has index {S.order() // A.order()}, expected 2")
    return A


def a_subgroup(S: StringCGroup, i: int, check: bool = True) -> PermutationGroup:
    if not 1 <= i <= S.rank - 1:
        raise ValueError(f"i must be in 1..{S.rank - 1}")
    _require_hypotheses(S)
    Ai = S._dissection.A_list[i - 1]
    if check:
        n = S._dissection.n
        if Ai.order() != 2 ** (n - 2):
            raise ContractViolation(f"|A_{i}| = {Ai.order()}, expected {2 ** (n - 2)}")
        if not is_normal(S.group, Ai):
            raise ContractViolation(f"A_{i} is not normal")
    return Ai


def b_chain(S: StringCGroup, check: bool = True) -> list[PermutationGroup]:
    _require_hypotheses(S)
    D = S._dissection
    if check:
        for i, Bi in enumerate(D.B_chain, start=1):
            if Bi.order() != 2 ** (D.n - (i + 2)):
                raise ContractViolation(f"|B_{i}| = {Bi.order()}, expected {2 ** (D.n - (i + 2))}")
    return list(D.B_chain)


def c_chain(S: StringCGroup, check: bool = True) -> list[PermutationGroup]:
    _require_hypotheses(S)
    D = S._dissection
    if check:
        for i, Ci in enumerate(D.C_chain, start=1):
            want = 2 ** (D.n - D.d - (i + 1))
            if Ci.order() != want:
                raise ContractViolation(f"|C_{i}| = {Ci.order()}, expected {want}")
            if not is_normal(S.group, Ci):
                raise ContractViolation(f"C_{i} is not normal")
    return list(D.C_chain)


def core_subgroups(S: StringCGroup, check: bool = True) -> tuple[PermutationGroup, PermutationGroup]:
    """``(B, C)``: intersections of the ``A_i`` and of their Frattini subgroups."""
    _require_hypotheses(S)
    D = S._dissection
    if check:
        if D.B.order() != 2 ** (D.n - D.d):
            raise ContractViolation(f"|B| = {D.B.order()}, expected {2 ** (D.n - D.d)}")
        if D.C.order() != 2 ** (D.n - 2 * D.d + 1):
            raise ContractViolation(f"|C| = {D.C.order()}, expected {2 ** (D.n - 2 * D.d + 1)}")
    return D.B, D.C


def minimal_generating_size(S: StringCGroup, check: bool = True) -> int:
    """``log2 |G : Φ(G)|``, the size of every minimal generating set of a 2-group."""
    phi = frattini_2group(S.group)
    size = _log2(S.order() // phi.order())
    if check and size != S.rank:
        raise ContractViolation(f"minimal generating size {size} differs from rank {S.rank}")
    return size


def induced_relator_failures(images: Sequence[Permutation], relators) -> list:
    return [w for w in relators if not evaluate_word(w, images).is_identity()]


def theorem_check(S: StringCGroup, group_id: str = "", cap: int = ELEMENT_CAP) -> VerificationReport:
    """Verify the 2-power string C-group structure theorem on ``S``."""
    from .cd_construction import cd_presentation

    d = S.rank
    n = _log2(S.order())
    report = VerificationReport(group_id, n, d)
    problem = _hypothesis_problem(S)
    if problem:
        report.hypothesis_failure = problem
        return report

    G = S.group
    rho = S.rho
    D = S._dissection

    phi = frattini_2group(G)
    derived = derived_subgroup(G)
    mho = agemo(G, 1, cap)
    report.check("(a) |Φ(G)| = 2^(n-d)", 2 ** (n - d), phi.order())
    report.check("(a) Φ(G) = G'", True, phi == derived)
    report.check("(a) Φ(G) = ℧_1(G)", True, phi == mho)
    report.check("|G : Φ(G)| = 2^d", 2**d, G.order() // phi.order())

    report.check("|A| = 2^(n-1)", 2 ** (n - 1), D.A.order())
    report.check("rho_0 not in A", False, D.A.contains(rho[0]))
    for i, Ai in enumerate(D.A_list, start=1):
        report.check(f"|A_{i}| = 2^(n-2)", 2 ** (n - 2), Ai.order())
        report.check(f"A_{i} normal in G", True, is_normal(G, Ai))
    for i, Bi in enumerate(D.B_chain, start=1):
        report.check(f"|B_{i}| = 2^(n-{i + 2})", 2 ** (n - (i + 2)), Bi.order())
    for i, Pi in enumerate(D.phi_A_list, start=1):
        report.check(f"|Φ(A_{i})| = 2^(n-d-1)", 2 ** (n - d - 1), Pi.order())
        report.check(f"Φ(A_{i}) = ℧_1(A_{i})", True, Pi == agemo(D.A_list[i - 1], 1, cap))
    for i, Ci in enumerate(D.C_chain, start=1):
        report.check(f"|C_{i}| = 2^(n-d-{i + 1})", 2 ** (n - d - (i + 1)), Ci.order())
        report.check(f"C_{i} normal in G", True, is_normal(G, Ci))

    B, C = D.B, D.C
    report.check("|B| = 2^(n-d)", 2 ** (n - d), B.order())
    report.check("(b) G' = B", True, derived == B)
    report.check("(c) |C| = 2^(n-2d+1)", 2 ** (n - 2 * d + 1), C.order())
    report.check("C normal in G", True, is_normal(G, C))

    relator_elems = []
    for i in range(d - 1):
        r2 = D.rotations[i] * D.rotations[i]
        fourth = r2 * r2
        report.check(f"(rho_{i} rho_{i + 1})^4 in C", True, C.contains(fourth))
        relator_elems.append(fourth)
        for j in range(d):
            c = commutator(r2, rho[j])
            report.check(f"[(rho_{i} rho_{i + 1})^2, rho_{j}] in C", True, C.contains(c))
            if j == i + 2:
                relator_elems.append(c)

    Q, hom = quotient(G, C, cap)
    images = hom.generator_images
    failures = induced_relator_failures(images, cd_presentation(d).relators)
    report.check("(d) |G/C| = 2^(2d-1)", 2 ** (2 * d - 1), Q.order())
    report.check("(d) G/C satisfies every C_d relator", 0, len(failures))
    report.check(
        "(d) G/C ≅ G(C_d) (relators hold and orders agree)",
        True,
        not failures and Q.order() == 2 ** (2 * d - 1),
    )
    try:
        validate(Q, images)
        quotient_ok = True
    except ValidationError as exc:
        quotient_ok = False
        report.notes["G/C validation"] = str(exc)
    report.check("(d) G/C is a string C-group", True, quotient_ok)

    G3 = lower_central_term(G, 3)
    report.check("(e) C = G_3", True, C == G3)
    N = normal_closure(G, relator_elems)
    report.check("C = normal closure of the C_d relator elements", True, C == N)
    report.notes["Schläfli type"] = str(S.schlafli)
    # recorded, not asserted: the same quotient taken through G_3 instead of C
    report.notes["|G_3|"] = G3.order()
    report.notes["|G/G_3|"] = G.order() // G3.order()
    if G3 != C:
        _, hom3 = quotient(G, G3, cap)
        report.notes["G/G_3 C_d relator failures"] = len(
            induced_relator_failures(hom3.generator_images, cd_presentation(d).relators)
        )
    return report


def quotient_stringc(S: StringCGroup, N: PermutationGroup, cap: int = ELEMENT_CAP) -> StringCGroup:
    """``S / N`` with induced generators ``rho_i N``, re-validated."""
    if not is_normal(S.group, N):
        raise NotNormalError("subgroup is not normal")
    A = S._dissection.A
    if not N.is_subgroup_of(A):
        raise ValueError("subgroup must lie in the rotation subgroup")
    Q, hom = quotient(S.group, N, cap)
    for i, r in enumerate(hom.generator_images):
        if r.order() != 2:
            raise ValidationError("non-involution", f"induced rho_{i} has order {r.order()}", index=i)
    return validate(Q, hom.generator_images)


def covers(P: StringCGroup, Q: StringCGroup) -> bool:
    """Whether ``rho_i -> sigma_i`` extends to a homomorphism ``P -> Q``."""
    if P.rank != Q.rank:
        return False
    return hom_extends(P.group, Q.rho, Q.group)
