import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monodromy.cyclo import (
    CycMatrix,
    CycNumber,
    CycPoly,
    detect_power_factor,
    minpoly_matrix,
    poly_divides,
    theta,
    zeta,
)
from monodromy.errors import CapacityError, DomainError


def rat(x):
    return CycNumber.rational(x)


# ---------------------------------------------------------------------------
# oracles


def char_poly_2x2(m: CycMatrix) -> CycPoly:
    """Independent characteristic polynomial for 2x2 matrices."""
    (a, b), (c, d) = m.entries
    return CycPoly([a * d - b * c, -(a + d), rat(1)])


def monic_linear_divisors(p: CycPoly):
    """Linear divisors z - r of p, with r searched over roots of unity of
    order <= 12 and small rationals.  Covers every test case used here."""
    candidates = [rat(q) for q in (0, 1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2))]
    for n in range(1, 13):
        for k in range(n):
            candidates.append(zeta(n, k))
    seen = set()
    out = []
    for r in candidates:
        if r in seen:
            continue
        seen.add(r)
        if p.evaluate(r).is_zero():
            out.append(CycPoly([-r, rat(1)]))
    return out


def krylov_rank(m: CycMatrix) -> int:
    """Independent minimality witness: rank of the stacked powers of m."""
    n = m.rows
    rows = []
    power = CycMatrix.identity(n)
    for _ in range(n + 1):
        rows.append(tuple(x for row in power.entries for x in row))
        power = power * m
    return CycMatrix(rows).rank()


# ---------------------------------------------------------------------------
# scalars


def test_root_of_unity_squares():
    assert zeta(4) * zeta(4) == rat(-1)


def test_vanishing_sum_of_cube_roots():
    assert (rat(1) + zeta(3) + zeta(3, 2)).is_zero()


def test_rational_inverse():
    assert rat(2).inverse() == rat(Fraction(1, 2))


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        rat(0).inverse()


def test_order_capacity_bound():
    with pytest.raises(CapacityError):
        zeta(127)


def test_canonical_form_is_unique_across_constructions():
    a = zeta(12, 4)  # a primitive cube root
    b = zeta(3)
    assert a == b and hash(a) == hash(b) and a.order == 3
    assert zeta(6) == rat(1) + zeta(3)  # zeta_6 = 1 + zeta_3
    assert zeta(2) == rat(-1) and zeta(2).order == 1


def test_full_turn_is_identity():
    for n in (1, 2, 3, 4, 5, 8, 9, 12, 15):
        assert (zeta(n) ** n).is_one()
        assert not any((zeta(n) ** k).is_one() for k in range(1, n))


def test_conjugate_inverts_roots_of_unity():
    for n in (3, 4, 5, 8, 12):
        z = zeta(n)
        assert z.conjugate() == z.inverse()
        assert (z * z.conjugate()).is_one()


def test_root_of_unity_order_detection():
    assert zeta(8, 3).root_of_unity_order() == 8
    assert (-zeta(3)).root_of_unity_order() == 6
    assert rat(1).root_of_unity_order() == 1
    assert rat(2).root_of_unity_order() is None
    assert (zeta(3) + 1).root_of_unity_order() == 6  # zeta_6 again
    assert rat(0).root_of_unity_order() is None


def test_json_round_trip_canonicalizes():
    x = zeta(12, 7) + rat(Fraction(3, 4))
    back = CycNumber.from_json(x.to_json())
    assert back == x
    # a non-minimal encoding canonicalizes on load
    y = CycNumber.from_json({"order": 12, "terms": [[1, 1, 4]]})
    assert y == zeta(3) and y.order == 3


small_rationals = st.fractions(
    min_value=-3, max_value=3, max_denominator=4
)


def cyc_numbers():
    return st.builds(
        lambda q, n, k: rat(q) + zeta(n, k),
        small_rationals,
        st.sampled_from([1, 2, 3, 4, 6, 8, 12]),
        st.integers(min_value=0, max_value=11),
    )


@settings(max_examples=60, deadline=None)
@given(cyc_numbers(), cyc_numbers(), cyc_numbers())
def test_field_axioms_on_sampled_triples(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    if not a.is_zero():
        assert (a * a.inverse()).is_one()


# ---------------------------------------------------------------------------
# involution


def test_theta_linear_example():
    r = CycPoly([rat(-2), rat(1)])  # z - 2
    assert theta(r) == CycPoly([rat(Fraction(-1, 2)), rat(1)])


def test_theta_quadratic_example():
    r = CycPoly([rat(2), rat(3), rat(1)])  # z^2 + 3z + 2
    assert theta(r) == CycPoly([rat(Fraction(1, 2)), rat(Fraction(3, 2)), rat(1)])


def test_theta_is_involutive_on_cyclotomic_example():
    r = CycPoly([rat(5), zeta(3), rat(0), rat(1)])  # z^3 + zeta_3 z + 5
    assert theta(theta(r)) == r


def test_theta_rejects_zero_constant_term():
    with pytest.raises(DomainError):
        theta(CycPoly([rat(0), rat(1)]))


def test_theta_involution_and_degree_on_random_polys():
    rng = random.Random(7)
    roots_of_unity = [zeta(n, k) for n in (1, 2, 3, 4, 6, 12) for k in range(n)]
    for _ in range(200):
        deg = rng.randint(1, 6)
        coeffs = []
        for i in range(deg):
            c = rat(Fraction(rng.randint(-4, 4), rng.choice([1, 2, 3])))
            c = c + rng.choice(roots_of_unity) * rng.randint(0, 2)
            coeffs.append(c)
        if coeffs[0].is_zero():
            coeffs[0] = rat(1)
        p = CycPoly(coeffs + [rat(1)])
        q = theta(p)
        assert q.degree == p.degree
        assert not q.constant_term.is_zero()
        assert theta(q) == p


def test_theta_of_theta_matches_inverse_minpoly():
    # theta sends the minimal polynomial of an operator to that of its inverse
    m = CycMatrix([[zeta(4), rat(1)], [rat(0), zeta(3)]])
    r = minpoly_matrix(m)
    assert theta(r) == minpoly_matrix(m.inverse())


# ---------------------------------------------------------------------------
# exponent-support factor


def test_power_factor_even_support():
    r = CycPoly([rat(-1), rat(0), rat(0), rat(0), rat(1)])  # z^4 - 1
    assert detect_power_factor(r, 2) == CycPoly([rat(-1), rat(0), rat(1)])


def test_power_factor_absent_for_odd_support():
    r = CycPoly([rat(1), rat(1), rat(1)])  # z^2 + z + 1
    assert detect_power_factor(r, 2) is None


def test_power_factor_identity_exponent():
    r = CycPoly([zeta(3), rat(2), rat(1)])
    assert detect_power_factor(r, 1) == r


def test_power_factor_rejects_bad_exponent():
    with pytest.raises(DomainError):
        detect_power_factor(CycPoly([rat(1), rat(1)]), 0)


def test_power_factor_degree_division():
    r = CycPoly([rat(2), rat(0), rat(0), rat(1)])  # z^3 + 2, e=3
    rb = detect_power_factor(r, 3)
    assert rb == CycPoly([rat(2), rat(1)]) and rb.degree == r.degree // 3


# ---------------------------------------------------------------------------
# minimal polynomials


def test_minpoly_identity():
    assert minpoly_matrix(CycMatrix.identity(2)) == CycPoly([rat(-1), rat(1)])


def test_minpoly_companion():
    # companion matrix of z^2 - z - 1
    m = CycMatrix([[rat(0), rat(1)], [rat(1), rat(1)]])
    assert minpoly_matrix(m) == CycPoly([rat(-1), rat(-1), rat(1)])


def test_minpoly_swap_with_divisor_oracle():
    swap = CycMatrix([[rat(0), rat(1)], [rat(1), rat(0)]])
    p = char_poly_2x2(swap)
    # brute-force: no monic divisor of the characteristic polynomial of
    # degree < 2 annihilates the matrix
    annihilating = [
        d for d in monic_linear_divisors(p) if d.evaluate(swap).is_zero()
    ]
    assert annihilating == []
    expected = CycPoly([rat(-1), rat(0), rat(1)])  # frozen: z^2 - 1
    assert p == expected
    assert minpoly_matrix(swap) == expected


@pytest.mark.parametrize(
    "entries",
    [
        [[0, 1], [1, 0]],
        [[0, 1], [1, 1]],
        [[1, 1, 0], [0, 1, 0], [0, 0, 2]],
        [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
    ],
)
def test_minpoly_annihilates_and_is_minimal(entries):
    m = CycMatrix([[rat(x) for x in row] for row in entries])
    p = minpoly_matrix(m)
    assert p.evaluate(m).is_zero()
    assert p.degree == krylov_rank(m)


def test_minpoly_with_cyclotomic_entries():
    m = CycMatrix([[zeta(3), rat(0)], [rat(0), zeta(4)]])
    p = minpoly_matrix(m)
    assert p.degree == 2
    assert p.evaluate(m).is_zero()
    assert p.evaluate(zeta(3)).is_zero() and p.evaluate(zeta(4)).is_zero()


def test_minpoly_divisor_search_small_dims():
    rng = random.Random(3)
    for dim in (2, 3, 4):
        base = [[rat(0)] * dim for _ in range(dim)]
        # random monomial matrix with root-of-unity entries: minpoly has
        # root-of-unity roots, so the linear-divisor oracle is exhaustive
        perm = list(range(dim))
        rng.shuffle(perm)
        for i, j in enumerate(perm):
            base[j][i] = zeta(rng.choice([1, 2, 3, 4, 6]), rng.randint(0, 3))
        m = CycMatrix(base)
        p = minpoly_matrix(m)
        assert p.evaluate(m).is_zero()
        for d in monic_linear_divisors(p):
            if d.degree < p.degree:
                assert not d.evaluate(m).is_zero() or poly_divides(p, d)


# ---------------------------------------------------------------------------
# matrices


def test_matrix_inverse_round_trip():
    m = CycMatrix([[zeta(4), rat(1)], [rat(0), zeta(3, 2)]])
    assert m * m.inverse() == CycMatrix.identity(2)
    assert m.inverse() * m == CycMatrix.identity(2)


def test_singular_matrix_rejected():
    with pytest.raises(DomainError):
        CycMatrix([[rat(1), rat(1)], [rat(1), rat(1)]]).inverse()


def test_matrix_rank():
    assert CycMatrix([[rat(1), rat(1)], [rat(1), rat(1)]]).rank() == 1
    assert CycMatrix.identity(3).rank() == 3
    assert CycMatrix([[rat(0)]]).rank() == 0


def test_matrix_hash_consistency():
    a = CycMatrix([[zeta(12, 4)]])
    b = CycMatrix([[zeta(3)]])
    assert a == b and hash(a) == hash(b)
