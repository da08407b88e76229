import itertools

import pytest

from gcompat.perms import (
    StabilizerChain,
    closure,
    cycles,
    identity_perm,
    inv,
    mul,
    perm_from_cycles,
    perm_order,
    perm_pow,
)


def test_mul_applies_left_factor_first():
    p = (1, 0, 2)
    q = (0, 2, 1)
    # x^(pq) = (x^p)^q
    for x in range(3):
        assert mul(p, q)[x] == q[p[x]]


def test_inverse_and_power():
    p = perm_from_cycles(5, [(0, 1, 2, 3, 4)])
    assert mul(p, inv(p)) == identity_perm(5)
    assert perm_pow(p, 5) == identity_perm(5)
    assert perm_pow(p, -2) == perm_pow(inv(p), 2)
    assert perm_order(p) == 5


def test_cycles_round_trip():
    p = perm_from_cycles(6, [(0, 3), (1, 4, 5)])
    assert perm_from_cycles(6, cycles(p)) == p
    assert perm_order(p) == 6


def test_closure_of_s3():
    a = perm_from_cycles(3, [(0, 1)])
    b = perm_from_cycles(3, [(0, 1, 2)])
    assert len(closure([a, b])) == 6
    assert len(closure([b])) == 3


def test_closure_bound():
    from gcompat.bounds import UndecidedError

    a = perm_from_cycles(7, [(0, 1, 2, 3, 4, 5, 6)])
    with pytest.raises(UndecidedError):
        closure([a], bound=3)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_chain_order_matches_enumeration_symmetric(n):
    gens = [perm_from_cycles(n, [(0, 1)]),
            tuple((i + 1) % n for i in range(n))]
    chain = StabilizerChain(n, gens)
    assert chain.order == len(closure(gens))


def test_chain_membership():
    gens = [perm_from_cycles(4, [(0, 1, 2)]), perm_from_cycles(4, [(1, 2, 3)])]
    chain = StabilizerChain(4, gens)
    assert chain.order == 12
    elems = closure(gens)
    for p in itertools.permutations(range(4)):
        assert chain.contains(tuple(p)) == (tuple(p) in elems)


def test_chain_on_direct_product_style_generators(rng):
    # random small groups: chain order must equal closure size
    for _ in range(20):
        deg = rng.randint(3, 7)
        gens = []
        for _ in range(rng.randint(1, 3)):
            pts = list(range(deg))
            rng.shuffle(pts)
            gens.append(tuple(pts))
        chain = StabilizerChain(deg, gens)
        assert chain.order == len(closure(gens))
