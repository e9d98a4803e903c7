import pytest
from hypothesis import given, strategies as st

from conftest import small_groups
from fsubnormal import FormationSpec, FormationViolation, PrimeSet, UnknownFormation, builtin, parse_formation, residual
from fsubnormal.builder import cyclic, dihedral, symmetric
from fsubnormal.permgroup import interval, join, quotient
from fsubnormal.structure import derived_subgroup, frattini, is_soluble, normal_subgroups, pi

CHAIN = ["supersoluble", "NA", "N^2", "La(1)", "soluble"]


def test_builtin_examples(s4, a4, ex21):
    La1 = parse_formation("La(1)")
    assert not La1.contains(s4) and La1.contains(a4)
    assert parse_formation("NA").contains(a4)
    assert not parse_formation("N^3").contains(ex21)


def test_residual_examples(s4, a4, intro):
    assert residual(parse_formation("supersoluble"), a4).order == 4
    assert residual(parse_formation("nilpotent"), s4).order == 12
    assert residual(parse_formation("soluble"), s4).is_trivial()
    R = residual(parse_formation("supersoluble"), intro)
    assert R == derived_subgroup(derived_subgroup(intro)) and R.order == 49


@pytest.mark.parametrize(
    "token,name",
    [("U", "supersoluble"), ("N^1", "nilpotent"), ("metanilpotent", "N^2"), ("La(2)", "La(2)"), ("NA@{2,3}", "NA@{2,3}")],
)
def test_tokens(token, name):
    assert parse_formation(token).name == name


@pytest.mark.parametrize("token", ["foo", "N^0", "La(0)", "NA^2", "N(3)"])
def test_bad_tokens(token):
    with pytest.raises(UnknownFormation):
        parse_formation(token)


def test_restriction_support():
    F = parse_formation("supersoluble@{2,3}")
    assert F.support == PrimeSet.of([2, 3])
    assert F.contains(symmetric(3)) and not F.contains(cyclic(5))
    assert builtin("nilpotent").support.is_all


def test_residual_detects_non_formations():
    # "order at most 2" is not closed under subdirect products: V4 is a
    # subdirect product of two C2 quotients but has order 4
    fake = FormationSpec("order<=2", lambda G: G.order <= 2)
    assert residual(fake, symmetric(3)).order == 3
    with pytest.raises(FormationViolation):
        residual(fake, dihedral(4))


@given(small_groups(max_degree=6))
def test_trivial_group_is_in_every_builtin(G):
    for tok in CHAIN + ["all", "nilpotent"]:
        assert parse_formation(tok).contains(G.trivial)


@given(small_groups(max_degree=6))
def test_formation_chain_is_monotone(G):
    flags = [parse_formation(t).contains(G) for t in CHAIN]
    for a, b in zip(flags, flags[1:]):
        assert not a or b


@given(small_groups(max_degree=6), st.sampled_from(CHAIN + ["nilpotent", "N^3"]))
def test_residual_properties(G, token):
    F = parse_formation(token)
    R = residual(F, G)
    assert F.contains(quotient(G, R).group)
    # least such normal subgroup
    for N in normal_subgroups(G):
        if F.contains(quotient(G, N).group):
            assert R <= N
    # idempotent
    Q = quotient(G, R).group
    assert residual(F, Q).is_trivial()


@given(small_groups(max_degree=5), st.sampled_from(CHAIN + ["nilpotent"]))
def test_builtins_are_hereditary_and_saturated(G, token):
    F = parse_formation(token)
    if F.contains(G):
        assert all(F.contains(H) for H in interval(G, G.trivial))
    if F.contains(quotient(G, frattini(G)).group):
        assert F.contains(G)


@given(small_groups(max_degree=6))
def test_la1_is_fitting_closed(G):
    F = parse_formation("La(1)")
    good = [N for N in normal_subgroups(G) if F.contains(N)]
    for a in good:
        for b in good:
            assert F.contains(join(a, b))


@given(small_groups(max_degree=6))
def test_biprimary_la1_groups_are_metanilpotent(G):
    if len(pi(G)) == 2 and parse_formation("La(1)").contains(G):
        assert parse_formation("N^2").contains(G)


def test_soluble_predicate_agrees_with_structure(s4):
    assert parse_formation("soluble").contains(s4) == is_soluble(s4)
