import pytest
from conftest import coxeter_group

from polyforge.cd_construction import cd_presentation, tightness_check, verify_cd_structure
from polyforge.fpgroup import parse_presentation
from polyforge.string_cgroup import ContractViolation, theorem_check


def test_presentation_d2():
    p = cd_presentation(2)
    assert p.generator_count == 2
    # 2 involutions, (r0 r1)^4, and two centrality relators
    assert len(p.relators) == 5


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_presentation_relator_count(d):
    p = cd_presentation(d)
    coxeter = (d - 1) + d + (d - 1) * (d - 2) // 2
    assert len(p.relators) == coxeter + d * (d - 1)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_presentation_round_trip(d):
    p = cd_presentation(d)
    assert parse_presentation(p.serialize()) == p


def test_presentation_rejects_rank_one():
    with pytest.raises(ValueError):
        cd_presentation(1)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_cd_group_order_type_and_tightness(cd, d):
    c = cd(d)
    assert c.group.order() == 2 ** (2 * d - 1)
    assert c.group.schlafli.entries == (4,) * (d - 1)
    assert tightness_check(c.group)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_verify_cd_structure(cd, d):
    r = verify_cd_structure(cd(d))
    assert r.overall, r.render_table()
    assert "|K|" in r.notes


def test_k_is_central_in_cd3(cd):
    c = cd(3)
    G = c.group.group
    assert all(k * g == g * k for k in c.K.generators for g in G.generators)


def test_tightness_examples(t40, square):
    assert not tightness_check(t40)
    assert tightness_check(square)


def test_tightness_false_for_cube():
    # the cube group has order 48, above the bound 2*4*3 = 24
    assert not tightness_check(coxeter_group([4, 3]))


def test_tightness_contract(monkeypatch, square):
    monkeypatch.setattr(type(square), "order", lambda self: 4)
    with pytest.raises(ContractViolation):
        tightness_check(square)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_theorem_check_on_cd_passes_with_trivial_c(cd, d):
    # Stated invariant. Fails for d >= 4 (see the rank-4 notes in the
    # string C-group tests); kept as stated.
    r = theorem_check(cd(d).group, f"cd{d}")
    assert r.status == "pass", r.render_table()
    assert cd(d).group._dissection.C.order() == 1
