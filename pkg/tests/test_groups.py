import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pompeiu.groups import (GroupSpecError, build_coset_space, build_group,
                            check_function_invariance, cycle_label,
                            double_cosets, lift_set, load_group_spec,
                            subgroup_closure)

from conftest import cyclic_space, dihedral_space, symmetric_space


def test_cyclic_8_table():
    g = build_group({"family": "cyclic", "n": 8})
    assert g.order == 8
    assert g.mul[3, 7] == 2
    assert g.element_labels[5] == "5"


def test_dihedral_6_order():
    assert build_group({"family": "dihedral", "n": 6}).order == 12


def test_symmetric_3_from_generators():
    g = build_group({"family": "permutations",
                     "generators": [[1, 0, 2], [1, 2, 0]]})
    # independent closure count: multiply tuples until stable
    elems = {(0, 1, 2)}
    gens = [(1, 0, 2), (1, 2, 0)]
    while True:
        new = {tuple(p[q[i]] for i in range(3)) for p in elems for q in gens}
        if new <= elems:
            break
        elems |= new
    assert g.order == len(elems) == 6


def test_generated_order_cap():
    with pytest.raises(GroupSpecError, match="cap"):
        build_group({"family": "permutations",
                     "generators": [[1, 2, 3, 4, 0]]}, order_cap=3)


def test_generators_must_share_domain():
    with pytest.raises(GroupSpecError):
        build_group({"family": "permutations", "generators": [[1, 0], [1, 2, 0]]})
    with pytest.raises(GroupSpecError, match="not a permutation"):
        build_group({"family": "permutations", "generators": [[0, 0, 1]]})


@pytest.mark.parametrize("spec", [
    {"family": "cyclic", "n": 9},
    {"family": "dihedral", "n": 5},
    {"family": "symmetric", "n": 4},
])
def test_group_axioms_exhaustive(spec):
    g = build_group(spec)
    n = g.order
    mul = g.mul
    assert np.array_equal(mul[0], np.arange(n))
    assert np.array_equal(mul[:, 0], np.arange(n))
    assert np.all(mul[np.arange(n), g.inv] == 0)
    # associativity on every triple
    assert np.array_equal(mul[mul, :], mul[:, mul])


def test_identity_is_element_zero():
    for spec in ({"family": "cyclic", "n": 5},
                 {"family": "dihedral", "n": 4},
                 {"family": "symmetric", "n": 3}):
        g = build_group(spec)
        assert g.element_labels[0] in ("0", "e")


def test_cycle_labels():
    assert cycle_label((1, 0, 2)) == "(1 2)"
    assert cycle_label((1, 2, 0)) == "(1 2 3)"
    assert cycle_label((0, 1, 2)) == "e"
    assert cycle_label((1, 0, 3, 2)) == "(1 2)(3 4)"


def test_coset_space_s3():
    space = symmetric_space(3, fixed_point=2)
    assert space.num_cosets == 3
    assert len(space.transversal) == 3
    # the action is the natural one on 3 points: verify directly from
    # coset membership, independently of the stored table
    g = space.group
    for x in range(g.order):
        for c in range(3):
            expected = int(space.coset_of[g.mul[x, space.transversal[c]]])
            assert space.action[x, c] == expected


def test_coset_space_trivial_subgroup():
    space = cyclic_space(6)
    assert space.num_cosets == 6
    assert np.array_equal(space.action, space.group.mul)


def test_d6_has_six_cosets():
    assert dihedral_space(6).num_cosets == 6


def test_action_laws_exhaustive_small():
    for space in (symmetric_space(3, fixed_point=2), dihedral_space(4)):
        g = space.group
        for a in range(g.order):
            for b in range(g.order):
                ab = g.mul[a, b]
                for c in range(space.num_cosets):
                    assert space.action[ab, c] == space.action[a, space.action[b, c]]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_action_law_randomized_d8(a, b, c):
    space = dihedral_space(8)
    g = space.group
    a, b, c = a % g.order, b % g.order, c % space.num_cosets
    assert space.action[g.mul[a, b], c] == space.action[a, space.action[b, c]]


def test_action_law_randomized_s5():
    # order 120 > 64: sampled triples instead of the exhaustive check
    space = symmetric_space(5, fixed_point=4)
    g = space.group
    rng = np.random.default_rng(17)
    a = rng.integers(0, g.order, 10_000)
    b = rng.integers(0, g.order, 10_000)
    c = rng.integers(0, space.num_cosets, 10_000)
    assert np.array_equal(space.action[g.mul[a, b], c],
                          space.action[a, space.action[b, c]])


def test_double_cosets_z8_singletons(z8_space):
    dcp = double_cosets(z8_space)
    assert dcp.num_classes == 8
    assert set(dcp.class_sizes) == {1}


def test_double_cosets_s3(s3_space):
    dcp = double_cosets(s3_space)
    assert dcp.num_classes == 2
    assert sorted(dcp.class_sizes) == [2, 4]
    # independent orbit computation straight from the multiplication table
    g = s3_space.group
    k = s3_space.k_members
    orbits = set()
    for x in range(g.order):
        orbits.add(frozenset(int(g.mul[a, g.mul[x, b]]) for a in k for b in k))
    assert len(orbits) == 2
    for orbit in orbits:
        classes = {int(dcp.class_of[e]) for e in orbit}
        assert len(classes) == 1


def test_double_cosets_d6(d6_space):
    assert double_cosets(d6_space).num_classes == 4


def test_double_cosets_partition_group(s4_space):
    dcp = double_cosets(s4_space)
    assert sum(dcp.class_sizes) == s4_space.group.order


def test_abelian_trivial_k_classes_match_cosets():
    space = cyclic_space(10)
    assert double_cosets(space).num_classes == space.num_cosets


def test_lift_set_cases(s3_space):
    assert lift_set(s3_space, set()) == frozenset()
    everything = lift_set(s3_space, range(s3_space.num_cosets))
    assert everything == frozenset(range(s3_space.group.order))
    lifted = lift_set(s3_space, {0})
    labels = {s3_space.group.element_labels[i] for i in lifted}
    assert labels == {"e", "(1 2)"}
    with pytest.raises(ValueError, match="out of range"):
        lift_set(s3_space, {99})


def test_lift_size_multiple_of_k(d6_space):
    lifted = lift_set(d6_space, {0, 2, 3})
    assert len(lifted) == 3 * d6_space.k_size


@settings(max_examples=40, deadline=None)
@given(st.sets(st.integers(0, 5), min_size=1))
def test_lift_is_right_invariant(subset):
    space = dihedral_space(6)
    lifted = lift_set(space, subset)
    table = [1 if g in lifted else 0 for g in range(space.group.order)]
    assert check_function_invariance(space, table, "right")


def test_function_invariance_cases(s3_space):
    g = s3_space.group
    constant = [3.5] * g.order
    for side in ("left", "right", "bi"):
        assert check_function_invariance(s3_space, constant, side)
    single = [0] * g.order
    single[g.element_labels.index("(1 2 3)")] = 1
    assert not check_function_invariance(s3_space, single, "bi")
    with pytest.raises(ValueError):
        check_function_invariance(s3_space, constant, "sideways")


def test_subgroup_closure_s4(s4_space):
    g = s4_space.group
    assert len(subgroup_closure(g, [])) == 1
    assert len(s4_space.k_members) == 6


def test_load_group_spec_roundtrip(tmp_path):
    path = tmp_path / "g.json"
    path.write_text('{"family": "dihedral", "n": 4, '
                    '"subgroup_generators": [[0, 3, 2, 1]]}')
    group, k_gens = load_group_spec(path)
    assert group.order == 8
    space = build_coset_space(group, k_gens)
    assert space.num_cosets == 4


def test_load_group_spec_cyclic_residues():
    group, k_gens = load_group_spec(
        {"family": "cyclic", "n": 12, "subgroup_generators": [4]})
    space = build_coset_space(group, k_gens)
    assert space.k_size == 3
    assert space.num_cosets == 4


def test_load_group_spec_rejects_stranger():
    with pytest.raises(GroupSpecError):
        load_group_spec({"family": "symmetric", "n": 3,
                         "subgroup_generators": [[1, 0, 3, 2]]})
