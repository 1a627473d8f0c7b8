from fractions import Fraction

import numpy as np
import pytest

from georoots.orders import OrderTag
from georoots.roots import (
    Root,
    RootFilter,
    classify_root,
    roots_mod_m,
    sieve_roots,
    take_n,
)


def brute(D, M, n=1, nu=0):
    out = []
    for m in range(1, M + 1):
        if m % n:
            continue
        for mu in range(m):
            if (mu * mu - D) % m == 0 and mu % n == nu:
                out.append((m, mu))
    return out


def test_roots_mod_m_pinned():
    assert roots_mod_m(5, 11) == [4, 7]
    assert roots_mod_m(5, 3) == []
    assert roots_mod_m(5, 1) == [0]


@pytest.mark.parametrize("D", [5, 13, 17, 21, 65])
def test_roots_mod_m_brute(D):
    for m in range(1, 400):
        assert roots_mod_m(D, m) == [mu for mu in range(m)
                                     if (mu * mu - D) % m == 0]


def test_classify_root_pinned():
    assert classify_root(5, 10, 5) is OrderTag.O2
    assert classify_root(17, 8, 3) is OrderTag.O1
    assert classify_root(17, 8, 1) is OrderTag.O2


def test_classify_shortcut_5_mod_8():
    for D in (5, 13, 29):
        s = sieve_roots(D, 500)
        for m, mu in zip(s.ms, s.mus):
            want = OrderTag.O1 if m % 4 != 2 else OrderTag.O2
            assert classify_root(D, int(m), int(mu)) is want


@pytest.mark.parametrize("D,n,nu", [(5, 1, 0), (5, 4, 1), (5, 2, 1),
                                    (13, 1, 0), (13, 4, 1), (13, 2, 1),
                                    (17, 1, 0), (17, 4, 1), (17, 2, 1),
                                    (21, 1, 0), (21, 4, 1), (21, 2, 1),
                                    (65, 1, 0), (65, 4, 1), (65, 2, 1)])
def test_sieve_matches_brute(D, n, nu):
    M = 800
    s = sieve_roots(D, M, RootFilter(n, nu))
    assert list(zip(s.ms.tolist(), s.mus.tolist())) == brute(D, M, n, nu)


def test_sieve_ordering_and_range():
    s = sieve_roots(17, 3000)
    key = s.ms * (s.ms.max() + 1) + s.mus
    assert (np.diff(key) > 0).all()           # strictly (m, mu)-ascending
    assert (s.mus >= 0).all() and (s.mus < s.ms).all()
    x = s.normalized()
    assert (x >= 0).all() and (x < 1).all()


def test_sieve_empty_and_tiny():
    assert len(sieve_roots(5, 0)) == 0
    s = sieve_roots(5, 1)
    assert list(zip(s.ms, s.mus)) == [(1, 0)]


def test_filter_validation():
    with pytest.raises(ValueError):
        sieve_roots(5, 100, RootFilter(3, 1))   # 1 != 5 mod 3
    with pytest.raises(ValueError):
        RootFilter(0, 0)
    with pytest.raises(ValueError):
        sieve_roots(6, 100)                      # D = 2 mod 4
    with pytest.raises(ValueError):
        sieve_roots(45, 100)                     # not squarefree


def test_take_n_pinned():
    seq = take_n(5, 8)
    assert [Fraction(int(mu), int(m)) for m, mu in zip(seq.ms, seq.mus)] == [
        Fraction(0), Fraction(1, 2), Fraction(1, 4), Fraction(3, 4),
        Fraction(0), Fraction(1, 2), Fraction(4, 11), Fraction(7, 11)]
    assert len(take_n(5, 1)) == 1
    assert take_n(5, 1).normalized().tolist() == [0.0]


def test_take_n_first_four_d17():
    # brute-force small-m scan: m=1:(0); m=2:(1); m=4:(1,3)
    seq = take_n(17, 4)
    assert list(zip(seq.ms.tolist(), seq.mus.tolist())) == \
        [(1, 0), (2, 1), (4, 1), (4, 3)]


def test_take_n_filtered():
    seq = take_n(5, 10, RootFilter(4, 1))
    assert (seq.ms % 4 == 0).all() and (seq.mus % 4 == 1).all()
    assert len(seq) == 10
    first = brute(5, 200, 4, 1)[:10]
    assert list(zip(seq.ms.tolist(), seq.mus.tolist())) == first


def test_root_records():
    s = sieve_roots(5, 12)
    recs = list(s)
    assert recs[0] == Root(1, 0, OrderTag.O1, None)
    assert Root(10, 5, OrderTag.O2, 0) in recs
    assert all((r.cofactor_parity is None) == (r.m % 2 == 1) for r in recs)
    tags = s.class_tags()
    assert [bool(t) for t in tags] == \
        [r.order_class is OrderTag.O1 for r in recs]


def test_iter_rows():
    rows = list(sieve_roots(5, 5).iter_rows())
    assert rows == [(1, 0, "O1"), (2, 1, "O2"), (4, 1, "O1"), (4, 3, "O1"),
                    (5, 0, "O1")]


def test_class_partition_counts():
    s = sieve_roots(13, 2000)
    tags = s.class_tags()
    assert tags.sum() + (~tags).sum() == len(s)
    # D = 5 mod 8: O1 roots outnumber O2 roots 3:1 asymptotically
    ratio = tags.sum() / (~tags).sum()
    assert 2.7 < ratio < 3.3
