"""Integer and modular arithmetic kernels.

Factorization (smallest-prime-factor table, trial division, Pollard rho with
a deterministic Miller-Rabin backstop), square roots modulo prime powers,
CRT combination of residue lists, and the continued fraction of sqrt(D).
Everything here is exact integer arithmetic; residue lists are always sorted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

Factorization = list[tuple[int, int]]  # [(prime, exponent)], primes ascending

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (full witness set)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    # Brent's cycle variant; n must be odd, composite, not a prime power check
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
        c += 1


class SpfTable:
    """Smallest-prime-factor table for 2..limit, numpy-backed."""

    def __init__(self, limit: int):
        if limit < 1:
            limit = 1
        self.limit = limit
        spf = np.zeros(limit + 1, dtype=np.int64)
        for i in range(2, math.isqrt(limit) + 1):
            if spf[i] == 0:
                seg = spf[i * i :: i]
                seg[seg == 0] = i
        unset = spf == 0
        spf[unset] = np.arange(limit + 1, dtype=np.int64)[unset]
        spf[:2] = (0, 1)
        self.spf = spf

    def factorize(self, n: int) -> Factorization:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside table range 1..{self.limit}")
        out: Factorization = []
        spf = self.spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        return out


def factorize(n: int, spf: SpfTable | None = None) -> Factorization:
    """Exact factorization of n >= 1 as a sorted list of (prime, exponent).

    Uses the SPF table when given and applicable, otherwise trial division
    by small primes, then Miller-Rabin with Pollard rho for what remains.
    """
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    if n == 1:
        return []
    if spf is not None and n <= spf.limit:
        return spf.factorize(n)
    counts: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)  # 7,11,13,17,19,23,29,31 mod 30 steps
    i = 0
    while f * f <= n and f < (1 << 16):
        while n % f == 0:
            counts[f] = counts.get(f, 0) + 1
            n //= f
        f += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            counts[m] = counts.get(m, 0) + 1
            continue
        s = math.isqrt(m)
        if s * s == m:
            stack += [s, s]
            continue
        d = _pollard_rho(m)
        stack += [d, m // d]
    return sorted(counts.items())


def _sqrt_mod_odd_prime(a: int, p: int) -> list[int]:
    """Roots of x^2 = a (mod p) for odd prime p, via Tonelli-Shanks."""
    a %= p
    if a == 0:
        return [0]
    if pow(a, (p - 1) // 2, p) != 1:
        return []
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        # Tonelli-Shanks
        q = p - 1
        s = 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            t2 = t
            i = 0
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return sorted({r, p - r})


def sqrt_mod_prime_power(D: int, p: int, e: int) -> list[int]:
    """Sorted solutions of x^2 = D (mod p^e). D may be negative.

    D is assumed squarefree when p divides D (the ramified branch relies on
    p^2 not dividing D).
    """
    if e < 1:
        raise ValueError("e >= 1 required")
    pe = p**e
    a = D % pe
    if p == 2:
        # explicit case analysis at 2
        if e == 1:
            return [a % 2]
        if a % 2 == 0:
            # squarefree D: D = 2 mod 4, no solutions mod 4 or higher
            return [0, 2] if (e == 2 and a % 4 == 0) else []
        if e == 2:
            return [1, 3] if a % 4 == 1 else []
        if D % 8 != 1:
            return []
        roots = [1, 3, 5, 7]
        mod = 8
        while mod < pe:
            mod *= 2
            roots = sorted(
                x
                for r in roots
                for x in (r, r + mod // 2)
                if (x * x - D) % mod == 0
            )
        return roots
    if D % p == 0:
        if e == 1:
            return [0]
        return []  # needs p^2 | D, impossible for squarefree D
    base = _sqrt_mod_odd_prime(D, p)
    if not base:
        return []
    # Hensel: 2x invertible mod p, each root lifts uniquely
    out = []
    for r in base:
        mod = p
        while mod < pe:
            mod_next = min(mod * mod, pe) if mod * mod <= pe else pe
            # lift r from mod to mod_next: r -= (r^2-D) * (2r)^-1
            inv = pow(2 * r % mod_next, -1, mod_next)
            r = (r - (r * r - D) * inv) % mod_next
            mod = mod_next
        out.append(r)
    return sorted(out)


def crt_combine(parts: list[tuple[list[int], int]]) -> tuple[list[int], int]:
    """Combine residue lists: parts [(residues_i, mod_i)] with coprime mods.

    Returns (sorted residues, product modulus). An empty parts list is the
    trivial congruence mod 1, i.e. ([0], 1).
    """
    total = math.prod(m for _, m in parts)
    if any(not rs for rs, _ in parts):
        return ([], total)
    residues = [0]
    modulus = 1
    for rs, m in parts:
        if m == 1:
            continue
        inv = pow(modulus % m, -1, m)
        residues = [
            x + modulus * ((r - x) * inv % m) for x in residues for r in rs
        ]
        modulus *= m
    return (sorted(residues), modulus)


def sqrt_mod(D: int, m: int, spf: SpfTable | None = None) -> list[int]:
    """All x in [0, m) with x^2 = D (mod m), via factor / local-solve / CRT."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return [0]
    parts = [(sqrt_mod_prime_power(D, p, e), p**e)
             for p, e in factorize(m, spf)]
    return crt_combine(parts)[0]


@dataclass(frozen=True)
class CFExpansion:
    """Continued fraction of sqrt(D): a0 followed by the periodic block."""

    D: int
    a0: int
    period: tuple[int, ...]


def cf_sqrt(D: int) -> CFExpansion:
    if D <= 0:
        raise ValueError("cf_sqrt requires D > 0")
    a0 = math.isqrt(D)
    if a0 * a0 == D:
        raise ValueError("D must not be a perfect square")
    period = []
    m, d, a = 0, 1, a0
    while True:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        period.append(a)
        if a == 2 * a0:
            return CFExpansion(D, a0, tuple(period))


def cf_convergents(exp: CFExpansion):
    """Yield convergents (p, q) of sqrt(D), indefinitely."""
    p0, q0 = exp.a0, 1
    p1, q1 = 1, 0
    yield p0, q0
    i = 0
    per = exp.period
    while True:
        a = per[i % len(per)]
        p0, p1 = a * p0 + p1, p0
        q0, q1 = a * q0 + q1, q0
        yield p0, q0
        i += 1


def pell_fundamental(D: int) -> tuple[int, int, int]:
    """Minimal (x, y, n) with x^2 - D y^2 = n, n = +-1, x, y > 0."""
    exp = cf_sqrt(D)
    L = len(exp.period)
    gen = cf_convergents(exp)
    p = q = 0
    for _ in range(L):
        p, q = next(gen)
    n = p * p - D * q * q
    assert n in (1, -1), (D, p, q, n)
    return p, q, n
