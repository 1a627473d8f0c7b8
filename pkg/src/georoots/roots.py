"""Enumeration of normalized roots x = mu/m of mu^2 = D (mod m).

The sequence is ordered by modulus m ascending (mu ascending within a
modulus), optionally filtered by congruences m = 0 (mod n) and
mu = nu (mod n), and every root is tagged with the order it belongs to:
O1 when the ideal (m, mu + sqrt(D)) is invertible in Z[sqrt(D)], O2 when
both m and (D - mu^2)/m are even.

The sieve walks m = 2..M once, splitting off the full power q = p^e of
the smallest prime factor and combining cached local solutions mod q with
the already-computed solutions mod m/q by CRT, so the per-modulus cost is
a handful of integer operations.
"""

from array import array
from dataclasses import dataclass

import numpy as np

from .arith import SpfTable, sqrt_mod, sqrt_mod_prime_power
from .orders import OrderTag, is_invertible, validate_discriminant


class SequenceExhausted(RuntimeError):
    """take_n could not reach N roots (finite or absurdly sparse sequence)."""


def roots_mod_m(D: int, m: int) -> list:
    """Sorted solutions mu in [0, m) of mu^2 = D (mod m)."""
    return sqrt_mod(D, m)


def classify_root(D: int, m: int, mu: int) -> OrderTag:
    return OrderTag.O1 if is_invertible(D, m, mu) else OrderTag.O2


@dataclass(frozen=True)
class Root:
    m: int
    mu: int
    order_class: OrderTag
    cofactor_parity: int = None  # parity of (D - mu^2)/m, None for odd m


@dataclass(frozen=True)
class RootFilter:
    n: int = 1
    nu: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")
        object.__setattr__(self, "nu", self.nu % self.n)

    def accepts(self, m: int, mu: int) -> bool:
        return m % self.n == 0 and mu % self.n == self.nu

    def validate_for(self, D: int):
        if (self.nu * self.nu - D) % self.n:
            raise ValueError(f"nu^2 = D (mod n) fails for {self}")


@dataclass(frozen=True, eq=False)
class RootSequence:
    """Roots ordered by (m, mu), held columnwise for bulk statistics."""

    D: int
    filter: RootFilter
    ms: np.ndarray    # int64, ascending
    mus: np.ndarray   # int64

    def __len__(self):
        return len(self.ms)

    def normalized(self) -> np.ndarray:
        """x_j = mu_j / m_j as float64 in [0, 1)."""
        return self.mus / self.ms

    def class_tags(self) -> np.ndarray:
        """True where the root belongs to O1."""
        q = (self.D - self.mus * self.mus) // self.ms
        return (self.ms % 2 == 1) | (q % 2 != 0)

    def root(self, i: int) -> Root:
        m = int(self.ms[i])
        mu = int(self.mus[i])
        parity = None if m % 2 else ((self.D - mu * mu) // m) % 2
        return Root(m, mu, classify_root(self.D, m, mu), parity)

    def __iter__(self):
        return (self.root(i) for i in range(len(self)))

    def head(self, N: int) -> "RootSequence":
        return RootSequence(self.D, self.filter, self.ms[:N], self.mus[:N])

    def subset(self, keep) -> "RootSequence":
        """Subsequence selected by a boolean mask (order preserved)."""
        keep = np.asarray(keep, dtype=bool)
        return RootSequence(self.D, self.filter, self.ms[keep],
                            self.mus[keep])

    def iter_rows(self):
        """(m, mu, 'O1'|'O2') rows, e.g. for CSV output."""
        tags = self.class_tags()
        for m, mu, t in zip(self.ms, self.mus, tags):
            yield int(m), int(mu), "O1" if t else "O2"


def sieve_roots(D: int, M: int, filt: RootFilter = RootFilter(),
                spf: SpfTable = None) -> RootSequence:
    """All filtered roots with modulus m <= M, ordered by (m, mu)."""
    validate_discriminant(D)
    return _sieve(D, M, filt, spf)


def _sieve(D, M, filt, spf):
    # sign-agnostic core: the local solvers take D mod p^e, so the
    # negative-discriminant module reuses this directly
    filt.validate_for(D)
    if M >= 2**31:
        raise ValueError("modulus bound too large for 64-bit root math")
    if M < 1:
        return RootSequence(D, filt, np.empty(0, np.int64),
                            np.empty(0, np.int64))
    if spf is None or spf.limit < M:
        spf = SpfTable(max(M, 2))
    spf_arr = spf.spf

    offsets = array("q", [0, 0, 1])  # roots(1) = [0]
    flat = array("q", [0])
    local_cache = {}
    append = flat.extend
    off_append = offsets.append

    for m in range(2, M + 1):
        p = int(spf_arr[m])
        q = p
        m2 = m // p
        while m2 % p == 0:
            q *= p
            m2 //= p
        key = (p, q)
        loc = local_cache.get(key)
        if loc is None:
            e = 0
            t = q
            while t > 1:
                t //= p
                e += 1
            loc = local_cache[key] = sqrt_mod_prime_power(D, p, e)
        if not loc:
            off_append(offsets[-1])
            continue
        if m2 == 1:
            rs = loc
        else:
            lo, hi = offsets[m2], offsets[m2 + 1]
            if lo == hi:
                off_append(offsets[-1])
                continue
            prev = flat[lo:hi]
            inv = pow(m2, -1, q)
            rs = sorted(r2 + m2 * ((r - r2) * inv % q)
                        for r in loc for r2 in prev)
        append(array("q", rs))
        off_append(offsets[-1] + len(rs))

    counts = np.diff(np.frombuffer(offsets, np.int64))[1:]
    ms = np.repeat(np.arange(1, M + 1, dtype=np.int64), counts)
    mus = np.frombuffer(flat, np.int64).copy()
    if filt.n > 1:
        keep = (ms % filt.n == 0) & (mus % filt.n == filt.nu)
        ms, mus = ms[keep], mus[keep]
    return RootSequence(D, filt, ms, mus)


def take_n(D: int, N: int, filt: RootFilter = None,
           spf: SpfTable = None) -> RootSequence:
    """The first N filtered roots (ordered by modulus), however far that is."""
    if N < 1:
        raise ValueError("N >= 1 required")
    if filt is None:
        filt = RootFilter()
    M = max(32, 2 * N * filt.n)
    for _ in range(24):
        seq = sieve_roots(D, M, filt, spf)
        if len(seq) >= N:
            return seq.head(N)
        M *= 2
    raise SequenceExhausted(
        f"fewer than {N} roots below m = {M} for D={D}, filter {filt}")
