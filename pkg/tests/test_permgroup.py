import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyforge.permgroup import (
    CapExceeded,
    DomainMismatchError,
    NotASubgroupError,
    NotATwoGroupError,
    NotNormalError,
    Permutation,
    PermutationGroup,
    agemo,
    center,
    commutator,
    contains,
    derived_subgroup,
    elements,
    frattini_2group,
    frattini_by_maximal_subgroups,
    group_order,
    hom_extends,
    intersection,
    is_elementary_abelian,
    is_normal,
    lower_central_term,
    normal_closure,
    omega,
    parse_group,
    parse_permutation,
    quotient,
    subgroup,
    track_subgroups,
)


def P(*images):
    return Permutation(images)


def cyclic(n):
    return PermutationGroup([P(*range(1, n), 0)])


def dihedral8():
    # symmetries of a square on its vertices 0..3
    return PermutationGroup([P(1, 0, 3, 2), P(0, 3, 2, 1)])


def elementary(k):
    gens = []
    for i in range(k):
        img = list(range(2 * k))
        img[2 * i], img[2 * i + 1] = img[2 * i + 1], img[2 * i]
        gens.append(Permutation(img))
    return PermutationGroup(gens)


# -- permutations


def test_permutation_basics():
    a, b = P(1, 2, 0), P(1, 0, 2)
    # a*b applies a first
    assert (a * b)(0) == b(a(0))
    assert (a * ~a).is_identity()
    assert a ** 3 == Permutation.identity(3)
    assert a ** -1 == ~a
    assert a.order() == 3 and b.order() == 2
    assert commutator(a, b) == ~a * ~b * a * b
    assert a.conjugate(b) == ~b * a * b
    assert b.smallest_moved_point() == 0
    assert Permutation.identity(4).smallest_moved_point() is None


def test_permutation_rejects_non_bijection():
    with pytest.raises(ValueError):
        P(0, 0, 1)


def test_permutation_serialization():
    p = P(0, 2, 1, 3)
    assert p.serialize() == "p: 0 2 1 3"
    assert parse_permutation(p.serialize()) == p


def test_group_serialization_round_trip():
    G = dihedral8()
    H = parse_group(G.serialize())
    assert H == G
    assert H.generators == G.generators


# -- order, membership, elements


def test_trivial_group():
    G = PermutationGroup([], degree=5)
    assert group_order(G) == 1
    assert elements(G) == [Permutation.identity(5)]


def test_contains_identity_and_generators():
    G = dihedral8()
    assert contains(G, G.identity())
    assert all(contains(G, g) for g in G.generators)
    assert not contains(G, P(1, 2, 0, 3))


def test_contains_domain_mismatch():
    with pytest.raises(DomainMismatchError):
        contains(dihedral8(), P(1, 0))


def test_elements_are_distinct_and_deterministic():
    G = dihedral8()
    E = elements(G)
    assert len(E) == 8 == len({e.key for e in E})
    assert E == elements(dihedral8())


def test_elements_cap():
    with pytest.raises(CapExceeded):
        elements(cyclic(9), cap=8)


def test_symmetric_group_order():
    S6 = PermutationGroup([P(1, 2, 3, 4, 5, 0), P(1, 0, 2, 3, 4, 5)])
    assert S6.order() == 720


def test_cd_orders(cd):
    assert group_order(cd(3).group.group) == 32
    assert len(elements(cd(2).group.group)) == 8
    assert len(elements(cd(3).group.group)) == 32


def test_t40_order(t40):
    assert t40.group.order() == 128


# -- subgroup constructions


def test_subgroup_examples(cd):
    S = cd(3).group
    G, r = S.group, S.rho
    assert subgroup(G, []).order() == 1
    A = subgroup(G, [r[0] * r[1], r[1] * r[2]])
    assert A.order() == 16
    assert not contains(A, r[0])
    A1 = subgroup(G, [(r[0] * r[1]) ** 2, r[1] * r[2]])
    assert A1.order() == 8


def test_subgroup_rejects_outsider():
    with pytest.raises(NotASubgroupError):
        subgroup(dihedral8(), [P(1, 2, 0, 3)])


def test_normal_closure_examples(cd):
    G = cd(3).group.group
    assert normal_closure(G, [G.identity()]).order() == 1
    D = dihedral8()
    r = D.generators[0]
    N = normal_closure(D, [r])
    assert is_normal(D, N)
    assert N.order() == 4


def test_normal_closure_of_relator_elements_in_t40(t40):
    r = t40.rho
    rels = [((r[i] * r[i + 1]) ** 2) ** 2 for i in range(2)]
    rels.append(commutator((r[0] * r[1]) ** 2, r[2]))
    assert normal_closure(t40.group, rels).order() == 4


def test_derived_subgroup():
    assert derived_subgroup(cyclic(6)).order() == 1
    assert derived_subgroup(dihedral8()).order() == 2


def test_derived_subgroup_of_cd3_matches_brute_force(cd):
    G = cd(3).group.group
    E = elements(G)
    brute = PermutationGroup([commutator(a, b) for a in E for b in E], G.degree)
    assert derived_subgroup(G) == brute
    assert brute.order() == 4


def test_lower_central_series(cd, t40):
    G = cd(3).group.group
    assert lower_central_term(G, 1) == G
    assert lower_central_term(G, 3).order() == 1
    assert lower_central_term(t40.group, 3).order() == 4
    with pytest.raises(ValueError):
        lower_central_term(G, 0)


def test_frattini_examples(cd):
    assert frattini_2group(elementary(3)).order() == 1
    G = cd(3).group.group
    phi = frattini_2group(G)
    assert phi.order() == 4
    assert G.order() // phi.order() == 8
    assert phi == frattini_by_maximal_subgroups(G)
    assert frattini_2group(dihedral8()).order() == 2


def test_frattini_needs_two_group():
    with pytest.raises(NotATwoGroupError):
        frattini_2group(cyclic(3))
    with pytest.raises(NotATwoGroupError):
        agemo(cyclic(6), 1)


def test_maximal_subgroup_oracle_on_dihedral():
    from polyforge.permgroup import maximal_subgroups_2group

    assert len(maximal_subgroups_2group(dihedral8())) == 3


def test_agemo_examples(cd):
    assert agemo(elementary(3), 1).order() == 1
    G = cd(3).group.group
    assert agemo(G, 1) == frattini_2group(G)
    C8 = cyclic(8)
    assert agemo(C8, 1).order() == 4
    assert agemo(C8, 2).order() == 2
    assert agemo(C8, 3).order() == 1


def test_omega_examples():
    C8 = cyclic(8)
    assert omega(C8, 3) == C8
    assert omega(C8, 1).order() == 2
    assert omega(dihedral8(), 1) == dihedral8()
    assert omega(dihedral8(), 1).order() == 8


def test_intersection_examples(t40):
    G = dihedral8()
    assert intersection(G, G) == G
    assert intersection(G, PermutationGroup([], 4)).order() == 1
    r = t40.rho
    A1 = subgroup(t40.group, [(r[0] * r[1]) ** 2, r[1] * r[2]])
    A2 = subgroup(t40.group, [r[0] * r[1], (r[1] * r[2]) ** 2])
    assert intersection(A1, A2).order() == 16


def test_intersection_domain_mismatch():
    with pytest.raises(DomainMismatchError):
        intersection(dihedral8(), cyclic(5))


def test_quotient_examples():
    G = dihedral8()
    Q, hom = quotient(G, PermutationGroup([], 4))
    assert Q.order() == 8
    Q, hom = quotient(G, G)
    assert Q.order() == 1
    Z = center(G)
    Q, hom = quotient(G, Z)
    assert Q.order() == 4 and is_elementary_abelian(Q)
    assert [hom(g) for g in G.generators] == hom.generator_images


def test_quotient_requires_normal():
    G = dihedral8()
    with pytest.raises(NotNormalError):
        quotient(G, PermutationGroup([G.generators[0]], 4))


def test_is_normal_examples(cd):
    G = dihedral8()
    assert is_normal(G, derived_subgroup(G))
    assert not is_normal(G, PermutationGroup([G.generators[0]], 4))
    S = cd(3).group
    r = S.rho
    A1 = subgroup(S.group, [(r[0] * r[1]) ** 2, r[1] * r[2]])
    assert is_normal(S.group, A1)


def test_hom_extends_examples(t40, cd):
    G = dihedral8()
    assert hom_extends(G, G.generators, G)
    ident = PermutationGroup([], 3).identity()
    assert hom_extends(G, [ident, ident])
    assert hom_extends(t40.group, cd(3).group.rho, cd(3).group.group)
    assert not hom_extends(cd(3).group.group, t40.rho, t40.group)
    # a reflection and a rotation cannot both go to a transposition and a 3-cycle
    assert not hom_extends(G, [P(1, 0, 2), P(1, 2, 0)])
    with pytest.raises(ValueError):
        hom_extends(G, [ident])


def test_is_elementary_abelian():
    assert is_elementary_abelian(PermutationGroup([], 3))
    assert is_elementary_abelian(elementary(4))
    assert not is_elementary_abelian(dihedral8())
    assert not is_elementary_abelian(cyclic(4))


def test_center():
    assert center(dihedral8()).order() == 2
    assert center(cyclic(5)).order() == 5


def test_group_equality_ignores_generators():
    G = dihedral8()
    H = PermutationGroup(list(reversed(G.generators)) + [G.generators[0] * G.generators[1]])
    assert G == H
    assert G != cyclic(4)


def test_track_subgroups_records_lagrange(cd):
    G = cd(3).group.group
    with track_subgroups() as log:
        frattini_2group(G)
        lower_central_term(G, 3)
    assert log
    assert all(parent % sub == 0 for _, parent, sub in log)


# -- properties


@st.composite
def perm_groups(draw, max_degree=6):
    n = draw(st.integers(1, max_degree))
    k = draw(st.integers(0, 3))
    gens = [Permutation(draw(st.permutations(range(n)))) for _ in range(k)]
    return PermutationGroup(gens, degree=n)


@settings(max_examples=80, deadline=None)
@given(perm_groups())
def test_chain_order_matches_enumeration(G):
    E = elements(G)
    assert len(E) == G.order()
    assert len({e.key for e in E}) == len(E)
    assert all(G.contains(e) for e in E)
    assert G.order() == math.factorial(G.degree) or math.factorial(G.degree) % G.order() == 0


@settings(max_examples=60, deadline=None)
@given(perm_groups(), st.data())
def test_intersection_commutative_and_divides(G, data):
    E = elements(G)
    pick = st.lists(st.sampled_from(E), max_size=2)
    H1 = PermutationGroup(data.draw(pick), G.degree)
    H2 = PermutationGroup(data.draw(pick), G.degree)
    I12, I21 = intersection(H1, H2), intersection(H2, H1)
    assert I12 == I21
    assert H1.order() % I12.order() == 0 and H2.order() % I12.order() == 0
    assert I12.is_subgroup_of(H1) and I12.is_subgroup_of(H2)


@settings(max_examples=60, deadline=None)
@given(perm_groups(), st.data())
def test_normal_closure_is_smallest_normal(G, data):
    E = elements(G)
    gens = data.draw(st.lists(st.sampled_from(E), max_size=2))
    N = normal_closure(G, gens)
    assert is_normal(G, N)
    assert all(N.contains(g) for g in gens)
    assert G.order() % N.order() == 0


@settings(max_examples=60, deadline=None)
@given(perm_groups(max_degree=5), perm_groups(max_degree=4), st.data())
def test_hom_extends_invariant_under_regeneration(G, H, data):
    if not G.generators:
        return
    EH = elements(H)
    images = [data.draw(st.sampled_from(EH)) for _ in G.generators]
    words = data.draw(st.lists(st.lists(st.integers(0, len(G.generators) - 1), min_size=1, max_size=4), max_size=3))

    def ev(w, gens):
        out = gens[0].identity_like()
        for i in w:
            out = out * gens[i]
        return out

    G2 = PermutationGroup(list(G.generators) + [ev(w, G.generators) for w in words], G.degree)
    images2 = images + [ev(w, images) for w in words]
    assert hom_extends(G, images, H) == hom_extends(G2, images2, H)


def _two_group_from(S, data):
    E = elements(S.group)
    gens = data.draw(st.lists(st.sampled_from(E), min_size=1, max_size=3))
    return PermutationGroup(gens, S.group.degree)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_two_group_frattini_properties(t40, data):
    G = _two_group_from(t40, data)
    phi = frattini_2group(G)
    assert phi == agemo(G, 1)
    assert phi == frattini_by_maximal_subgroups(G)
    Q, _ = quotient(G, phi)
    assert is_elementary_abelian(Q)
    k = int(math.log2(Q.order()))
    assert 2**k == Q.order()
    assert k <= len(G.generators)
    # every generating set has at least k elements
    if k:
        assert not any(
            PermutationGroup(c, G.degree) == G for c in itertools.combinations(G.generators, k - 1)
        )
