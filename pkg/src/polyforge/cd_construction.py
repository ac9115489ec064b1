"""Conder's tight polytope group G(C_d) of type {4,...,4} and order 2^(2d-1)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fpgroup import (
    DEFAULT_MAX_COSETS,
    Presentation,
    add_relators,
    commutator_word,
    coxeter_string_presentation,
    regular_representation,
)
from .permgroup import (
    ELEMENT_CAP,
    PermutationGroup,
    center,
    is_abelian,
    is_normal,
    lower_central_term,
    quotient,
    subgroup,
)
from .report import VerificationReport
from .string_cgroup import ContractViolation, StringCGroup, validate


def cd_presentation(d: int) -> Presentation:
    """[4,...,4] plus ``[(rho_i rho_{i+1})^2, rho_j]`` for all ``0 <= i < d-1``, ``0 <= j < d``.

    Centrality relators are emitted for every ``j``, including the ones that
    already follow from the Coxeter relators.
    """
    if d < 2:
        raise ValueError("rank must be at least 2")
    extra = [
        commutator_word((i, i + 1) * 2, (j,))
        for i in range(d - 1)
        for j in range(d)
    ]
    return add_relators(coxeter_string_presentation([4] * (d - 1)), extra)


@dataclass
class CdGroup:
    d: int
    presentation: Presentation
    group: StringCGroup
    K: PermutationGroup


def cd_group(d: int, max_cosets: int = DEFAULT_MAX_COSETS) -> CdGroup:
    pres = cd_presentation(d)
    G = regular_representation(pres, max_cosets)
    S = validate(G, G.generators)
    if S.order() != 2 ** (2 * d - 1):
        raise ContractViolation(f"|G(C_{d})| = {S.order()}, expected {2 ** (2 * d - 1)}")
    if S.schlafli.entries != (4,) * (d - 1):
        raise ContractViolation(f"G(C_{d}) has type {S.schlafli}")
    squares = [(S.rho[i] * S.rho[i + 1]) ** 2 for i in range(d - 1)]
    K = subgroup(S.group, squares)
    return CdGroup(d, pres, S, K)


def verify_cd_structure(c: CdGroup, cap: int = ELEMENT_CAP) -> VerificationReport:
    G = c.group.group
    report = VerificationReport(f"C_{c.d}", 2 * c.d - 1, c.d)
    report.check("|G| = 2^(2d-1)", 2 ** (2 * c.d - 1), G.order())
    report.check("type {4,...,4}", (4,) * (c.d - 1), c.group.schlafli.entries)
    report.check("K abelian", True, is_abelian(c.K))
    report.check("K normal", True, is_normal(G, c.K))
    report.check(
        "K central",
        True,
        all(k * r == r * k for k in c.K.generators for r in c.group.rho),
    )
    Q, _ = quotient(G, c.K, cap)
    report.check("G/K abelian", True, is_abelian(Q))
    report.check("G non-abelian", False, is_abelian(G))
    g2 = lower_central_term(G, 2)
    g3 = lower_central_term(G, 3)
    report.check("G_2 nontrivial", False, g2.order() == 1)
    report.check("G_3 trivial", 1, g3.order())
    # independent route to class 2: G/Z(G) abelian and G itself is not
    Z = center(G, cap)
    GZ, _ = quotient(G, Z, cap)
    report.check("G/Z(G) abelian", True, is_abelian(GZ))
    report.check("K ≤ Z(G)", True, c.K.is_subgroup_of(Z))
    report.notes["|K|"] = c.K.order()
    report.notes["|Z(G)|"] = Z.order()
    return report


def tightness_check(S: StringCGroup) -> bool:
    """Whether ``|G| = 2 p_1 ... p_{d-1}``; the lower bound itself must hold."""
    bound = 2 * math.prod(S.schlafli.entries)
    if S.order() < bound:
        raise ContractViolation(f"order {S.order()} is below the flag lower bound {bound}")
    return S.order() == bound
