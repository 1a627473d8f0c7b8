from fractions import Fraction

import pytest

from georoots.arith import sqrt_mod
from georoots.forms import disc, is_primitive
from georoots.orders import (
    IdealHNF,
    OrderMismatch,
    OrderTag,
    class_shift_representative,
    fits_order,
    form_of_root,
    ideal_conjugate,
    ideal_from_root,
    ideal_mul,
    is_invertible,
    narrow_class_group,
    root_from_ideal,
    root_of_form,
    totally_positive_fundamental_unit,
    unit_ideal,
    unit_relation,
    validate_discriminant,
)
from georoots.quadnum import QuadNum

O1, O2 = OrderTag.O1, OrderTag.O2


def all_roots(D, mmax):
    for m in range(1, mmax + 1):
        for mu in sqrt_mod(D, m):
            yield m, mu


def test_validate_discriminant():
    for D in (5, 13, 17, 21, 65, 4001):
        validate_discriminant(D)
    for bad in (6, 9, 45, 25, 8, 1):
        with pytest.raises(ValueError):
            validate_discriminant(bad)


def test_ideal_from_root_pinned():
    assert ideal_from_root(5, 11, 4, O1).basis_rows() == ((1, 4), (0, 11))
    assert ideal_from_root(5, 2, 1, O2).basis_rows() == ((1, 0), (0, 1))
    u = ideal_from_root(5, 1, 0, O1)
    assert u == unit_ideal(5, O1) and u.norm() == 1
    with pytest.raises(OrderMismatch):
        ideal_from_root(5, 11, 4, O2)
    with pytest.raises(ValueError):
        ideal_from_root(5, 7, 1, O1)  # 1 != 5 mod 7


def test_root_round_trip():
    for D in (5, 13, 17, 21, 65):
        for m, mu in all_roots(D, 60):
            order = O1 if is_invertible(D, m, mu) else O2
            assert root_from_ideal(ideal_from_root(D, m, mu, order)) == (m, mu)


def test_is_invertible_pinned():
    assert is_invertible(5, 11, 4)
    assert not is_invertible(5, 2, 1)
    assert is_invertible(5, 1, 0)


def test_every_root_fits_exactly_one_order():
    for D in (5, 13, 17, 21, 65):
        for m, mu in all_roots(D, 80):
            assert fits_order(D, m, mu, O1) != fits_order(D, m, mu, O2)


def test_ideal_mul_pinned():
    A = ideal_from_root(5, 11, 4, O1)
    B = ideal_from_root(5, 11, 7, O1)
    P = ideal_mul(A, B)
    assert (P.m, P.mu, P.scalar) == (1, 0, 11)
    assert ideal_mul(A, unit_ideal(5, O1)) == A
    I0 = ideal_from_root(5, 2, 1, O1)
    Q = ideal_mul(I0, I0)
    assert (Q.m, Q.mu, Q.scalar) == (2, 1, 2)  # I0^2 = 2*I0
    with pytest.raises(OrderMismatch):
        ideal_mul(A, ideal_from_root(5, 2, 1, O2))


def test_ideal_conjugate():
    assert ideal_conjugate(ideal_from_root(5, 11, 4, O1)).mu == 7
    u = ideal_from_root(5, 1, 0, O1)
    assert ideal_conjugate(u) == u
    assert ideal_conjugate(ideal_from_root(5, 4, 1, O1)).mu == 3


def test_invertibility_against_mul_oracle():
    """I * conj(I) = m * O1 exactly for the invertible roots."""
    for D in (5, 13, 17, 21, 65):
        unit = unit_ideal(D, O1)
        for m, mu in all_roots(D, 200):
            I = ideal_from_root(D, m, mu, O1)
            P = ideal_mul(I, ideal_conjugate(I))
            is_norm_ideal = (P.m, P.mu, P.scalar) == (1, 0, m)
            assert is_norm_ideal == is_invertible(D, m, mu), (D, m, mu)
            assert ideal_mul(I, unit) == I


def test_invertibility_shortcut_5_mod_8():
    for D in (5, 13, 29, 37):
        for m, mu in all_roots(D, 3000):
            assert is_invertible(D, m, mu) == (m % 4 != 2), (D, m, mu)


def test_o2_ideals_always_invertible():
    """J * conj(J) = (m/2) * O2 for every O2 root (the order is maximal)."""
    for D in (5, 17, 65):
        for m, mu in all_roots(D, 120):
            if is_invertible(D, m, mu):
                continue
            J = ideal_from_root(D, m, mu, O2)
            P = ideal_mul(J, ideal_conjugate(J))
            assert (P.m, P.mu) == (2, 1) and P.scalar == Fraction(m, 2)


def test_ideal_mul_commutative_associative():
    roots = [(m, mu) for m, mu in all_roots(13, 40)]
    ideals = [ideal_from_root(13, m, mu, O1) for m, mu in roots][:12]
    for A in ideals[:6]:
        for B in ideals[6:]:
            assert ideal_mul(A, B) == ideal_mul(B, A)
    for A in ideals[:4]:
        for B in ideals[4:8]:
            for C in ideals[8:12]:
                assert ideal_mul(ideal_mul(A, B), C) == \
                    ideal_mul(A, ideal_mul(B, C))


def test_norm_multiplicative_with_invertible_factor():
    for D in (5, 17):
        for m, mu in all_roots(D, 50):
            I = ideal_from_root(D, m, mu, O1)
            for m2, mu2 in [(1, 0), (11, sqrt_mod(D, 11)[0] if sqrt_mod(D, 11) else None)]:
                if mu2 is None:
                    continue
                J = ideal_from_root(D, m2, mu2, O1)
                assert ideal_mul(I, J).norm() == I.norm() * J.norm()


def test_units_pinned():
    assert totally_positive_fundamental_unit(5, O1) == QuadNum(5, 9, 4)
    assert totally_positive_fundamental_unit(5, O2) == QuadNum(5, 3, 1, 2)
    assert totally_positive_fundamental_unit(17, O2) == QuadNum(17, 33, 8)
    assert totally_positive_fundamental_unit(13, O2) == QuadNum(13, 11, 3, 2)
    assert totally_positive_fundamental_unit(21, O2) == QuadNum(21, 5, 1, 2)


def test_unit_properties():
    for D in (5, 13, 17, 21, 29, 33, 37, 41, 65, 73, 89, 101):
        for order in (O1, O2):
            e = totally_positive_fundamental_unit(D, order)
            assert e.norm() == 1
            assert e > 1
            assert e.is_totally_positive()
            if order is O1:
                assert e.c == 1  # lies in Z[sqrt(D)]


def test_unit_relation():
    for D, rel in [(5, "Cube"), (13, "Cube"), (21, "Cube"), (29, "Cube"),
                   (17, "Equal"), (33, "Equal"), (37, "Equal"),
                   (41, "Equal"), (65, "Equal")]:
        u = unit_relation(D)
        assert u.relation == rel, D
        if rel == "Cube":
            assert u.eps2**3 == u.eps1 and D % 8 == 5
        else:
            assert u.eps1 == u.eps2
    assert unit_relation(5).eps2 == QuadNum(5, 3, 1, 2)
    assert unit_relation(5).eps1 == QuadNum(5, 9, 4)


def test_narrow_class_numbers():
    for D, order, h in [(5, O1, 1), (5, O2, 1), (17, O1, 1), (17, O2, 1),
                        (13, O1, 1), (13, O2, 1), (65, O1, 2), (65, O2, 2),
                        (21, O1, 2), (21, O2, 2), (37, O1, 3), (37, O2, 1)]:
        g = narrow_class_group(D, order)
        assert g.h_plus == h == len(g.reps)
        assert g.reps[0] == unit_ideal(D, order)
        for i, rep in enumerate(g.reps):
            assert g.class_of_ideal(rep) == i
            assert rep.scalar == 1


def test_class_count_relation_between_orders():
    # counts tie to the unit relation: equal when D=1 mod 8 or relation
    # is Cube; ratio 3 when D=5 mod 8 with equal units
    for D in (5, 13, 17, 21, 29, 33, 37, 41, 65):
        h1 = narrow_class_group(D, O1).h_plus
        h2 = narrow_class_group(D, O2).h_plus
        rel = unit_relation(D).relation
        if D % 8 == 1 or rel == "Cube":
            assert h1 == h2, D
        else:
            assert h1 == 3 * h2, D


def test_cayley_totality():
    for D, order in [(65, O1), (65, O2), (37, O1), (21, O1)]:
        g = narrow_class_group(D, order)
        h = g.h_plus
        table = [[g.class_of_ideal(ideal_mul(a, b)) for b in g.reps]
                 for a in g.reps]
        assert table[0] == list(range(h))
        for row in table:
            assert sorted(row) == list(range(h))
        for j in range(h):
            assert sorted(t[j] for t in table) == list(range(h))


def test_form_dictionary_round_trip():
    for D in (5, 17, 65):
        for m, mu in all_roots(D, 60):
            order = O1 if is_invertible(D, m, mu) else O2
            f = form_of_root(D, m, mu, order)
            assert disc(f) == (4 * D if order is O1 else D)
            assert is_primitive(f)
            assert root_of_form(D, f, order) == (m, mu)


def test_class_shift_spec_examples():
    g1 = narrow_class_group(5, O1)
    out = class_shift_representative(5, O1, g1.reps[0], 1, 0, g1)
    assert (out.m, out.mu) == (1, 0)

    out = class_shift_representative(5, O1, g1.reps[0], 4, 1, g1)
    assert out.m % 4 == 0 and out.mu % 4 == 1
    assert is_invertible(5, out.m, out.mu) and out.scalar == 1

    g2 = narrow_class_group(5, O2)
    out = class_shift_representative(5, O2, g2.reps[0], 2, 1, g2)
    assert out.m % 2 == 0 and out.mu % 2 == 1
    assert not is_invertible(5, out.m, out.mu)


@pytest.mark.parametrize("D,order,n,nu", [
    (17, O1, 4, 1),    # n even, (D-nu^2)/n even: carrier is widened
    (17, O2, 4, 1),
    (17, O1, 8, 3),    # n even, quotient odd
    (5, O1, 2, 1),
    (5, O2, 5, 0),     # odd n, even nu
    (65, O1, 4, 1),
    (65, O2, 7, 3),    # 9 = 65 mod 7? 65 mod 7 = 2; 3^2=9=2 mod 7
    (37, O1, 3, 1),
    (21, O2, 3, 0),
])
def test_class_shift_all_classes(D, order, n, nu):
    g = narrow_class_group(D, order)
    seen = set()
    for k, rep in enumerate(g.reps):
        out = class_shift_representative(D, order, rep, n, nu, g)
        assert out.scalar == 1
        assert out.m % n == 0 and (out.mu - nu) % n == 0
        assert g.class_of_ideal(out) == k
        assert fits_order(D, out.m, out.mu, order)
        seen.add((out.m, out.mu))
    assert len(seen) == g.h_plus  # distinct classes give distinct roots


def test_class_shift_empty_filter():
    g = narrow_class_group(17, O2)
    with pytest.raises(OrderMismatch):
        class_shift_representative(17, O2, g.reps[0], 8, 3, g)
