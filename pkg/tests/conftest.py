import pytest

from pompeiu.groups import build_coset_space, build_group


def cyclic_space(n):
    return build_coset_space(build_group({"family": "cyclic", "n": n}), [])


def symmetric_space(n, fixed_point=None):
    """S_n with K = {e} or the stabilizer of a point."""
    g = build_group({"family": "symmetric", "n": n})
    if fixed_point is None:
        return build_coset_space(g, [])
    gens = [i for i, p in enumerate(g._perms)
            if p[fixed_point] == fixed_point]
    return build_coset_space(g, gens)


def dihedral_space(n):
    """D_n (order 2n) with K generated by one reflection."""
    g = build_group({"family": "dihedral", "n": n})
    reflection = tuple((-i) % n for i in range(n))
    idx = g._perms.index(reflection)
    return build_coset_space(g, [idx])


def acceptance_suite():
    """The desk-scale suite: (Z_n, e) for n=2..12, (S_3, S_2), (S_4, S_3),
    (D_n, reflection) for n=3..6."""
    spaces = [cyclic_space(n) for n in range(2, 13)]
    spaces.append(symmetric_space(3, fixed_point=2))
    spaces.append(symmetric_space(4, fixed_point=3))
    spaces.extend(dihedral_space(n) for n in range(3, 7))
    return spaces


@pytest.fixture(scope="session")
def z8_space():
    return cyclic_space(8)


@pytest.fixture(scope="session")
def s3_space():
    return symmetric_space(3, fixed_point=2)


@pytest.fixture(scope="session")
def s4_space():
    return symmetric_space(4, fixed_point=3)


@pytest.fixture(scope="session")
def d6_space():
    return dihedral_space(6)
