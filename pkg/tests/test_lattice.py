import random

import pytest

from placeforge import lattice

from oracles import brute_member, fraction_rank


def mat_mul(u, rows):
    return [
        [sum(u[i][k] * rows[k][j] for k in range(len(rows))) for j in range(len(rows[0]))]
        for i in range(len(u))
    ]


def det3(m):
    if len(m) == 1:
        return m[0][0]
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(len(m)):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * det3(minor)
    return total


def random_matrix(rng, m, n, span=6):
    return [[rng.randint(-span, span) for _ in range(n)] for _ in range(m)]


def test_hnf_transform_reconstructs():
    rng = random.Random(1)
    for _ in range(200):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        rows = random_matrix(rng, m, n)
        h, u, pivots = lattice.hnf_transform(rows)
        assert mat_mul(u, rows) == h
        if m <= 3:
            assert abs(det3(u)) == 1
        # echelon shape with positive pivots, reduced above
        last = -1
        for r, c in pivots:
            assert c > last
            last = c
            assert h[r][c] > 0
            for i in range(r):
                assert 0 <= h[i][c] < h[r][c]


def test_row_kernel_annihilates_and_is_saturated():
    rng = random.Random(2)
    for _ in range(200):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        rows = random_matrix(rng, m, n)
        kern = lattice.row_kernel(rows)
        for z in kern:
            assert all(
                sum(z[i] * rows[i][j] for i in range(m)) == 0 for j in range(n)
            )
        assert len(kern) == m - lattice.int_rank(rows)


def test_express_int_matches_brute_force():
    rng = random.Random(3)
    for _ in range(300):
        m, n = rng.randint(1, 3), rng.randint(1, 3)
        rows = random_matrix(rng, m, n, span=3)
        basis = lattice.hnf(rows)
        target = tuple(rng.randint(-5, 5) for _ in range(n))
        got = lattice.express_int(basis, target) is not None
        want = brute_member(basis, target, box=14)
        assert got == want, (basis, target)


def test_int_rank_matches_fraction_elimination():
    rng = random.Random(4)
    for _ in range(200):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        rows = random_matrix(rng, m, n)
        assert lattice.int_rank(rows) == fraction_rank(rows)


def test_reduce_mod_lattice_balanced_and_canonical():
    basis = [(3, -2)]
    assert lattice.reduce_mod_lattice((-1, 1), basis) == (-1, 1)
    assert lattice.reduce_mod_lattice((-2, 2), basis) == (1, 0)
    assert lattice.reduce_mod_lattice((2, -1), basis) == (-1, 1)
    # equivalent inputs land on the same representative
    rng = random.Random(5)
    for _ in range(100):
        base = (rng.randint(-4, 4), rng.randint(-4, 4))
        k = rng.randint(-3, 3)
        shifted = (base[0] + 3 * k, base[1] - 2 * k)
        assert lattice.reduce_mod_lattice(base, basis) == lattice.reduce_mod_lattice(
            shifted, basis
        )


def test_membership_invariant_under_unimodular_moves():
    rng = random.Random(6)
    for _ in range(100):
        rows = random_matrix(rng, 3, 3, span=4)
        basis = lattice.hnf(rows)
        # elementary row operations on the generators leave the lattice alone
        moved = [list(r) for r in rows]
        i, j = rng.sample(range(3), 2)
        c = rng.randint(-3, 3)
        moved[i] = [x + c * y for x, y in zip(moved[i], moved[j])]
        assert lattice.hnf(moved) == basis


def test_clear_denominators():
    from fractions import Fraction

    rows, den = lattice.clear_denominators([[Fraction(1, 2), Fraction(1, 3)]])
    assert den == 6 and rows == [(3, 2)]
