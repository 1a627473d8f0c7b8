"""Closed geodesics attached to roots, their Gamma_0(n) orbits, and tops.

A root (m, mu) of mu^2 = D (mod m) gives the semicircle geodesic with
endpoints (mu -+ sqrt(D))/m; its highest point ("top") sits at
mu/m + i sqrt(D)/m, so the normalized root mu/m is read off a geodesic by
taking the top modulo horizontal integer translation.  This module makes
that correspondence executable in both directions: build geodesics from
the narrow-class machinery, then enumerate every top of bounded modulus
in their Gamma_0(n) orbits by exact breadth-first search over binary
quadratic forms.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .forms import (
    MAT_ID,
    MAT_S,
    MAT_T,
    act,
    form_value,
    mat_det,
    mat_inv,
    mat_mul,
    tshift,
    tshift_canonical,
)
from .orders import (
    OrderTag,
    class_shift_representative,
    form_of_root,
    is_invertible,
    narrow_class_group,
    totally_positive_fundamental_unit,
    unit_relation,
)
from .quadnum import QuadNum
from .roots import RootFilter


class NotRootGeodesic(ValueError):
    """Positively oriented geodesic whose top is not at a root of D."""


class IntegralityFailure(RuntimeError):
    """A stabilizer matrix came out non-integral where theory forbids it."""


class BudgetExceeded(RuntimeError):
    """Orbit search grew past its node budget before closing."""


class NegativeOrientation(ValueError):
    """Coset parametrization hit m <= 0 (image geodesic runs right to left)."""


@dataclass(frozen=True)
class GammaElement:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, other):
        return GammaElement(*mat_mul(self.as_tuple(), other.as_tuple()))

    def inverse(self):
        return GammaElement(self.d, -self.b, -self.c, self.a)

    def trace(self):
        return self.a + self.d


IDENTITY = GammaElement(1, 0, 0, 1)


@dataclass(frozen=True)
class Geodesic:
    """Oriented geodesic with exact endpoints; None stands for infinity."""

    D: int
    minus: QuadNum  # backward endpoint (or None)
    plus: QuadNum   # forward endpoint (or None)

    def __post_init__(self):
        if self.minus is not None and self.plus is not None \
                and self.minus == self.plus:
            raise ValueError("endpoints must be distinct")

    def is_positively_oriented(self) -> bool:
        return (self.minus is not None and self.plus is not None
                and self.minus < self.plus)

    def reversed(self) -> "Geodesic":
        return Geodesic(self.D, self.plus, self.minus)


@dataclass(frozen=True)
class TopPoint:
    """Top of a root geodesic: x = mu/m, imaginary part sqrt(D)/m."""

    x: Fraction
    m: int

    def root(self):
        mu = self.x * self.m
        return (self.m, int(mu) % self.m)


def geodesic_from_root(D: int, m: int, mu: int) -> Geodesic:
    if (mu * mu - D) % m:
        raise ValueError("mu^2 = D (mod m) violated")
    return Geodesic(D, QuadNum(D, mu, -1, m), QuadNum(D, mu, 1, m))


def _mobius_endpoint(g, z, D):
    p, q, r, s = g
    if z is None:  # infinity
        if r == 0:
            return None
        return QuadNum.from_fraction(D, Fraction(p, r))
    den = z * r + s
    if den == 0:
        return None
    return (z * p + q) / den


def apply_gamma(g, c: Geodesic) -> Geodesic:
    """Exact Mobius image of a geodesic; accepts GammaElement or 4-tuple."""
    if isinstance(g, GammaElement):
        g = g.as_tuple()
    return Geodesic(c.D, _mobius_endpoint(g, c.minus, c.D),
                    _mobius_endpoint(g, c.plus, c.D))


def top_of(c: Geodesic):
    """TopPoint of a positively oriented root geodesic, else None.

    Returns None for vertical or right-to-left geodesics (no top in the
    convention used here); raises NotRootGeodesic when the geodesic has a
    top but it does not sit at mu/m + i sqrt(D)/m for a root (m, mu).
    """
    if not c.is_positively_oriented():
        return None
    half = (c.plus - c.minus) * Fraction(1, 2)
    if half.a != 0 or half.b != 1:
        raise NotRootGeodesic(f"half-width {half} is not sqrt(D)/m")
    m = half.c
    mid = (c.plus + c.minus) * Fraction(1, 2)
    if not mid.is_rational():
        raise NotRootGeodesic("top is not at a rational abscissa")
    x = mid.as_fraction()
    mu = x * m
    if mu.denominator != 1:
        raise NotRootGeodesic(f"mu = {mu} is not integral")
    if (int(mu) ** 2 - c.D) % m:
        raise NotRootGeodesic(f"({m}, {int(mu) % m}) is not a root of D={c.D}")
    return TopPoint(x, m)


# ----------------------------------------------------------------------
# stabilizers

def _unit_xy(eps: QuadNum):
    """Write a unit as (x + y sqrt(D))/2, so x, y may be doubled ints."""
    if eps.c == 2:
        return eps.a, eps.b
    if eps.c == 1:
        return 2 * eps.a, 2 * eps.b
    raise ValueError("unit denominator must be 1 or 2")


def _stabilizer_matrix(D, m, mu, order, eps_power):
    """Conjugate of diag(eps, eps^-1) into SL(2,Z) fixing the root geodesic."""
    x, y = _unit_xy(eps_power)  # eps = (x + y sqrt(D))/2
    if order is OrderTag.O1:
        if x % 2 or y % 2:
            raise IntegralityFailure("O1 unit with half-integral coordinates")
        x, y = x // 2, y // 2
        return (x + y * mu, y * (D - mu * mu) // m, y * m, x - y * mu)
    num_p, num_s = x + y * mu, x - y * mu
    cc = m * y
    if num_p % 2 or num_s % 2 or cc % 2 or (D - mu * mu) % (2 * m):
        raise IntegralityFailure("O2 stabilizer parity broke down")
    return (num_p // 2, y * (D - mu * mu) // (2 * m), cc // 2, num_s // 2)


def stabilizer_generator(D: int, m: int, mu: int, n: int = 1):
    """Generator of the geodesic's stabilizer inside Gamma_0(n).

    Returns (GammaElement, j) where the matrix realizes eps^j for the
    order's totally positive fundamental unit eps and j in {1, 3} is
    minimal with the matrix in Gamma_0(n).  The geodesic's length in
    Gamma_0(n)\\H is 2 j log(eps).
    """
    order = OrderTag.O1 if is_invertible(D, m, mu) else OrderTag.O2
    eps = totally_positive_fundamental_unit(D, order)
    for j in (1, 3):
        mat = _stabilizer_matrix(D, m, mu, order, eps**j)
        if mat_det(mat) != 1:
            raise IntegralityFailure("stabilizer determinant is not 1")
        if mat[2] % n == 0:
            return GammaElement(*mat), j
    raise RuntimeError(
        f"no stabilizer power j in {{1,3}} lands in Gamma_0({n}) "
        f"for root ({m},{mu}) of D={D}")


# ----------------------------------------------------------------------
# Gamma_0(n): coset structure and generators

def _p1_normalize(c, d, n):
    """Canonical representative of the projective point (c : d) mod n."""
    if n == 1:
        return (0, 0)
    best = None
    for lam in range(1, n):
        if math.gcd(lam, n) != 1:
            continue
        cand = (lam * c % n, lam * d % n)
        if best is None or cand < best:
            best = cand
    return best


def gamma0_coset_transversal(n: int):
    """dict P1-point -> SL(2,Z) matrix whose coset realizes the point."""
    start = _p1_normalize(0, 1, n)
    reps = {start: MAT_ID}
    queue = [start]
    row = {start: (0, 1)}
    moves = [MAT_T, MAT_S, mat_inv(MAT_T), mat_inv(MAT_S)]
    while queue:
        pt = queue.pop()
        c, d = row[pt]
        g = reps[pt]
        for mv in moves:
            p, q, r, s = mv
            c2, d2 = c * p + d * r, c * q + d * s
            pt2 = _p1_normalize(c2, d2, n)
            if pt2 not in reps:
                reps[pt2] = mat_mul(g, mv)
                row[pt2] = (c2 % n, d2 % n) if n > 1 else (0, 1)
                queue.append(pt2)
    return reps


def _sign_canon(g):
    p, q, r, s = g
    if p < 0 or (p == 0 and q < 0):
        return (-p, -q, -r, -s)
    return g


def gamma0_generators(n: int):
    """Schreier generating set of Gamma_0(n) (with inverses), from the
    coset graph of the transversal under S and T."""
    reps = gamma0_coset_transversal(n)
    inv_reps = {pt: mat_inv(g) for pt, g in reps.items()}
    bottom = {pt: g[2:] for pt, g in reps.items()}
    gens = set()
    for pt, g in reps.items():
        c, d = bottom[pt]
        for mv in (MAT_T, MAT_S):
            p, q, r, s = mv
            pt2 = _p1_normalize(c * p + d * r, c * q + d * s, n)
            w = mat_mul(mat_mul(g, mv), inv_reps[pt2])
            if w[2] % n:
                raise RuntimeError("Schreier element escaped Gamma_0(n)")
            for cand in (w, mat_inv(w)):
                cand = _sign_canon(cand)
                if cand != MAT_ID:
                    gens.add(cand)
    return sorted(gens)


def extra_coset_copies(n: int, count: int):
    """First `count` matrices of Gamma_0(n/2) in distinct nontrivial
    right cosets of Gamma_0(n), scanned in a fixed deterministic order."""
    if n % 2:
        raise ValueError("n must be even")
    half = n // 2
    found = []
    seen_pts = {_p1_normalize(0, 1, n)}
    for k in range(1, 8):
        c = half * k
        for d in range(1, 4 * n + 2):
            if math.gcd(c, d) != 1:
                continue
            pt = _p1_normalize(c, d, n)
            if pt in seen_pts:
                continue
            g, u, v = _xgcd(d, c)
            if g != 1:
                continue
            seen_pts.add(pt)
            found.append(GammaElement(u, -v, c, d))
            if len(found) == count:
                return found
    raise RuntimeError(f"could not find {count} coset copies for n={n}")


def _xgcd(a, b):
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


# ----------------------------------------------------------------------
# the base set of geodesics for a congruence filter

@dataclass(frozen=True)
class BaseGeodesic:
    source: tuple          # ("I", k) or ("J", l): order side and class index
    m: int                 # root of the shifted class representative
    mu: int
    conjugator: GammaElement
    geodesic: Geodesic     # conjugator applied to the root geodesic
    stabilizer: GammaElement  # generates its Gamma_0(n) stabilizer, up to sign
    j_stab: int            # stabilizer realizes eps_order^j_stab
    length_mult: int       # geodesic length = 2 * length_mult * log(eps2)


@dataclass(frozen=True, eq=False)
class BaseGeodesicSet:
    D: int
    n: int
    nu: int
    s: int                  # splitting number of the wider-order classes
    geodesics: tuple        # BaseGeodesic entries, I side first
    eps2: QuadNum
    unit_relation: str      # "Equal" or "Cube"

    @property
    def h(self):
        return len(self.geodesics)

    def lengths(self):
        le = 2.0 * math.log(float(self.eps2))
        return [le * g.length_mult for g in self.geodesics]

    def total_length(self) -> float:
        le = 2.0 * math.log(float(self.eps2))
        return le * sum(g.length_mult for g in self.geodesics)


def _splitting_number(D, n, relation):
    if n % 2 == 1:
        return 1
    if D % 8 == 5 and relation == "Cube" and n % 4 == 2:
        return 1
    if n % 4 == 0:
        return 2
    return 3


def base_geodesic_set(D: int, n: int = 1, nu: int = 0) -> BaseGeodesicSet:
    """One base geodesic per narrow class of each order, with the copies
    the congruence group demands for even n.

    The O1 side contributes h1 geodesics.  For odd n the O2 side
    contributes one geodesic per class; for even n it contributes s
    copies per class (s = 2 when 4 | n, else 3, except that a cube unit
    relation at n = 2 mod 4 folds the three copies into a single
    geodesic of tripled length), and none at all when (D - nu^2)/n is
    odd, since no root of the wider order satisfies such a filter.
    """
    filt = RootFilter(n, nu % n)
    filt.validate_for(D)
    nu %= n
    rel = unit_relation(D)
    cube = rel.relation == "Cube"
    geos = []

    g1 = narrow_class_group(D, OrderTag.O1)
    for k, rep in enumerate(g1.reps):
        shifted = class_shift_representative(D, OrderTag.O1, rep, n, nu, g1)
        m, mu = shifted.m, shifted.mu
        stab, j = stabilizer_generator(D, m, mu, n)
        geos.append(BaseGeodesic(("I", k), m, mu, IDENTITY,
                                 geodesic_from_root(D, m, mu), stab, j,
                                 j * (3 if cube else 1)))

    s = _splitting_number(D, n, rel.relation)
    j_side_exists = n % 2 == 1 or ((D - nu * nu) // n) % 2 == 0
    if j_side_exists:
        if n % 2 == 1 or s == 1:
            copies = [IDENTITY]
        else:
            copies = [IDENTITY] + extra_coset_copies(n, s - 1)
        g2 = narrow_class_group(D, OrderTag.O2)
        for l, rep in enumerate(g2.reps):
            shifted = class_shift_representative(D, OrderTag.O2, rep, n, nu,
                                                 g2)
            m, mu = shifted.m, shifted.mu
            base = geodesic_from_root(D, m, mu)
            for conj in copies:
                stab, j = _conjugated_stabilizer(D, m, mu, n, conj)
                geos.append(BaseGeodesic(("J", l), m, mu, conj,
                                         apply_gamma(conj, base), stab, j, j))

    out = BaseGeodesicSet(D, n, nu, s, tuple(geos), rel.eps2, rel.relation)
    _check_base_tops(out, filt)
    return out


def _conjugated_stabilizer(D, m, mu, n, conj):
    eps = totally_positive_fundamental_unit(D, OrderTag.O2)
    ct = conj.as_tuple()
    cti = mat_inv(ct)
    for j in (1, 3):
        mat = _stabilizer_matrix(D, m, mu, OrderTag.O2, eps**j)
        w = mat_mul(mat_mul(ct, mat), cti)
        if w[2] % n == 0:
            return GammaElement(*w), j
    raise RuntimeError("conjugated stabilizer escaped {1,3} (theory bug)")


def _check_base_tops(base: BaseGeodesicSet, filt: RootFilter):
    for g in base.geodesics:
        top = top_of(g.geodesic)
        if top is None:
            continue
        m, mu = top.root()
        if not filt.accepts(m, mu):
            raise RuntimeError(
                f"base geodesic {g.source} top ({m},{mu}) violates {filt}")
        st = apply_gamma(g.stabilizer, g.geodesic)
        if st != g.geodesic:
            raise RuntimeError(f"stabilizer does not fix {g.source}")


# ----------------------------------------------------------------------
# orbit enumeration: every top of modulus <= M, exactly

@dataclass
class EnumerationResult:
    roots: set        # {(m, mu)}
    produced: int     # tops encountered, duplicates included
    duplicates: int   # produced - len(roots)
    visited: int      # BFS states expanded over all base geodesics

    def as_sorted_list(self):
        return sorted(self.roots)


def start_form(D, g: BaseGeodesic):
    """Form of a base geodesic (conjugator applied) and its modulus
    multiplier: the root modulus is mult * a for a top with coefficient a."""
    order = OrderTag.O1 if g.source[0] == "I" else OrderTag.O2
    f = form_of_root(D, g.m, g.mu, order)
    return act(g.conjugator.as_tuple(), f), (1 if order is OrderTag.O1 else 2)


def enumerate_tops(base: BaseGeodesicSet, M: int, safety: int = 4,
                   budget: int = 10_000_000) -> EnumerationResult:
    """Exact BFS over each base geodesic's Gamma_0(n) orbit.

    States are T-orbit-canonical forms; a state with leading coefficient
    a > 0 and modulus (a or 2a, by order side) at most M contributes the
    top root read off its coefficients.  States whose modulus exceeds
    safety*M times a corridor factor are not expanded.  The corridor
    factor max(1, n^2/4) accounts for the group's generators: hopping
    between two moderate states of a Gamma_0(n) orbit can force an
    intermediate state roughly n^2/4 times larger (measured up to
    n = 16; plain safety*M is enough for n <= 6).
    """
    if M < 1:
        raise ValueError("M >= 1 required")
    gens = [g for g in gamma0_generators(base.n) if g[2] != 0]
    corridor = safety * M * max(1, base.n * base.n // 4)
    produced = 0
    counts = {}
    visited_total = 0
    for bg in base.geodesics:
        f0, mult = start_form(base.D, bg)
        amax = max(corridor, mult * abs(f0[0])) // mult
        start = tshift_canonical(f0)
        seen = {start}
        stack = [start]
        while stack:
            visited_total += 1
            if visited_total > budget:
                raise BudgetExceeded(
                    f"orbit of {bg.source} passed {budget} states")
            F = stack.pop()
            a, b, c = F
            if a > 0 and mult * a <= M:
                mroot = mult * a
                mu = (-b // 2) % mroot if mult == 1 else (-b) % mroot
                produced += 1
                counts[(mroot, mu)] = counts.get((mroot, mu), 0) + 1
            if abs(a) > amax:
                continue
            for g in gens:
                p, q, r, s = g
                A = a * r * r
                B = 2 * a * s * r - b * r * r
                C = a * s * s - b * s * r + c * r * r
                for t in _window(A, B, C, amax):
                    G = tshift_canonical(act(g, tshift(F, t)))
                    if G not in seen:
                        seen.add(G)
                        stack.append(G)
    roots = set(counts)
    return EnumerationResult(roots, produced, produced - len(roots),
                             visited_total)


def _window(A, B, C, amax):
    """Integer t with |A t^2 + B t + C| <= amax (A != 0): bounded band."""
    # outermost crossings of the parabola with +-amax
    lim = amax if A > 0 else -amax
    disc = B * B - 4 * A * (C - lim)
    if disc < 0:
        return
    rad = math.sqrt(disc)
    lo = math.floor((-B - rad) / (2 * A) if A > 0 else (-B + rad) / (2 * A))
    hi = math.ceil((-B + rad) / (2 * A) if A > 0 else (-B - rad) / (2 * A))
    for t in range(lo - 1, hi + 2):
        if abs((A * t + B) * t + C) <= amax:
            yield t


# ----------------------------------------------------------------------
# direct parametrization of tops over a coset of the class stabilizer

def coset_parametrization(D: int, m_k: int, mu_k: int, order: OrderTag,
                          gamma) -> tuple:
    """(mu, m) of the top of gamma applied to the class geodesic.

    Exact linear formula in the entries of gamma: with (r, s) the bottom
    row, m is the value of the class's norm form at (r, s) and mu rides
    along in the same matrix product.  Agrees with the geometric
    top_of(apply_gamma(...)) whenever m > 0; raises NegativeOrientation
    otherwise (the image then has no top).
    """
    if isinstance(gamma, GammaElement):
        gamma = gamma.as_tuple()
    p, q, r, s = gamma
    if order is OrderTag.O1:
        Mk = ((mu_k * mu_k - D) // m_k, mu_k, mu_k, m_k)
    else:
        if m_k % 2 or (mu_k * mu_k - D) % (2 * m_k):
            raise ValueError("root does not fit O2")
        Mk = ((mu_k * mu_k - D) // (2 * m_k), (mu_k - 1) // 2,
              (mu_k + 1) // 2, m_k // 2)
    u = Mk[0] * r + Mk[1] * s
    v = Mk[2] * r + Mk[3] * s
    mu_out = p * u + q * v
    m_out = r * u + s * v
    if order is OrderTag.O2:
        mu_out = 2 * mu_out + 1
        m_out = 2 * m_out
    if m_out <= 0:
        raise NegativeOrientation(f"image modulus {m_out} <= 0")
    return mu_out, m_out
