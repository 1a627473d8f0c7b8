"""Shared fixtures.

The million-point statistics tests all draw from the same two sieved
sequences, so those are built once per session.  The bounds are sized so
that the smaller order-class subsequence still holds 10**6 roots.
"""

import pytest

from georoots.roots import sieve_roots


@pytest.fixture(scope="session")
def pool_d5():
    return sieve_roots(5, 9_000_000)


@pytest.fixture(scope="session")
def pool_d17():
    return sieve_roots(17, 3_600_000)
