"""Limiting pair-correlation density of root sequences.

The density is a sum over pairs of base geodesics and double cosets of
their stabilizers: each coset contributes (1/v^2) H(q, v/kappa), where q
is a projective invariant of the two geodesics (a normalized cross
ratio) and H comes in two signed flavours with explicit piecewise
closed forms.  Everything here feeds on the exact geodesic machinery;
floats appear only in the final H evaluations.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import factorize
from .forms import act, mat_inv
from .geodesics import (
    BaseGeodesicSet,
    BudgetExceeded,
    gamma0_generators,
    start_form,
)
from .quadnum import QuadNum


class DomainError(ValueError):
    """H evaluated on a boundary locus where the piecewise form is silent."""


class SharedEndpoint(ValueError):
    """Cross-ratio of two geodesics with a common endpoint."""


# ----------------------------------------------------------------------
# the H functions: raw transcription and simplified closed forms

def h_raw(q: float, s: float) -> float:
    """log((s+q)/(1-s^2)), the building block of the raw H formulas."""
    den = 1.0 - s * s
    if den == 0.0:
        raise DomainError("1 - s^2 = 0")
    val = (s + q) / den
    if val <= 0.0:
        raise DomainError("log of a nonpositive value")
    return math.log(val)


def _y(q, v):
    return math.sqrt(v * v + q * q - 1.0)


def _s1(q, v):
    if v == -1.0:
        raise DomainError("s1 undefined at v = -1")
    return (-q + _y(q, v)) / (v + 1.0)


def _s2(q, v):
    return v - q - _y(q, v)


def _check_off_boundary(q, v):
    if abs(q) == 1.0:
        raise DomainError("|q| = 1")
    if q < 1.0 and v * v == 2.0 - 2.0 * q:
        raise DomainError("v = +-sqrt(2-2q)")


def H_raw_plus(q: float, v: float) -> float:
    _check_off_boundary(q, v)
    if q < -1.0:
        return 0.0
    if abs(q) < 1.0:
        if v < math.sqrt(2.0 - 2.0 * q):
            return 0.0
        return h_raw(q, _s1(q, v)) - h_raw(q, _s2(q, v))
    return h_raw(q, _s1(q, v)) - h_raw(q, -q + math.sqrt(q * q - 1.0))


def H_raw_minus(q: float, v: float) -> float:
    _check_off_boundary(q, v)
    if q < -1.0:
        if abs(v) < math.sqrt(2.0 - 2.0 * q):
            return 0.0
        return h_raw(q, _s1(q, v)) - h_raw(q, _s2(q, v))
    if abs(q) < 1.0:
        if v > -math.sqrt(2.0 - 2.0 * q):
            return 0.0
        return h_raw(q, _s1(q, v)) - h_raw(q, _s2(q, v))
    return h_raw(q, -q - math.sqrt(q * q - 1.0)) - h_raw(q, _s2(q, v))


def H_plus(q: float, v: float) -> float:
    """Simplified H_+: see H_raw_plus for the unsimplified original."""
    _check_off_boundary(q, v)
    if q < -1.0:
        return 0.0
    if abs(q) < 1.0:
        if v < math.sqrt(2.0 - 2.0 * q):
            return 0.0
        return 2.0 * math.log(q + _y(q, v))
    return math.log((q + _y(q, v)) * (q - math.sqrt(q * q - 1.0)))


def H_minus(q: float, v: float) -> float:
    _check_off_boundary(q, v)
    if q < -1.0:
        if abs(v) < math.sqrt(2.0 - 2.0 * q):
            return 0.0
        return 2.0 * math.log(q + _y(q, v))
    if abs(q) < 1.0:
        if v > -math.sqrt(2.0 - 2.0 * q):
            return 0.0
        return 2.0 * math.log(q + _y(q, v))
    return math.log((q + _y(q, v)) * (q - math.sqrt(q * q - 1.0)))


def _H_on_grid(sign: int, q: float, v: np.ndarray) -> np.ndarray:
    """Vectorized simplified H for a fixed coset term (grid off-boundary)."""
    out = np.zeros_like(v)
    if q > 1.0:
        y = np.sqrt(v * v + q * q - 1.0)
        out[:] = np.log((q + y) * (q - math.sqrt(q * q - 1.0)))
        return out
    thr = math.sqrt(2.0 - 2.0 * q)
    if q < -1.0:
        mask = (np.abs(v) > thr) if sign < 0 else np.zeros(v.shape, bool)
    else:
        mask = (v > thr) if sign > 0 else (v < -thr)
    if mask.any():
        vm = v[mask]
        out[mask] = 2.0 * np.log(q + np.sqrt(vm * vm + q * q - 1.0))
    return out


# ----------------------------------------------------------------------
# pair invariants

def _flavour_sign(c1, beta):
    """+1 when beta lands positive under the map sending c1 to the
    standard vertical geodesic (0 -> infinity), -1 when negative."""
    am, ap = c1.minus, c1.plus
    if am is None:                      # c1 runs from infinity down to ap
        return (ap - beta).sign()
    if ap is None:                      # c1 runs from am up to infinity
        return (beta - am).sign()
    t = (ap - am).sign()
    if beta is None:
        return -t
    return t * (beta - am).sign() * (ap - beta).sign()


def cross_ratio_q(c1, c2):
    """Pair invariant (q, sign) of two geodesics, exact over Q(sqrt D).

    q = (r+1)/(r-1) with r the cross ratio of the four endpoints
    (c2.plus, c1.minus; c2.minus, c1.plus); infinite endpoints are
    evaluated as limits.  |q| < 1 for crossing geodesics, |q| > 1 for
    disjoint ones; a shared endpoint would give q = +-1 and raises
    SharedEndpoint instead.  sign selects which H flavour the pair
    feeds: +1 when the backward endpoint of c2 lies on the positive
    side of c1.
    """
    v1 = c1.minus is None or c1.plus is None
    v2 = c2.minus is None or c2.plus is None
    if v1 and v2:
        raise SharedEndpoint("two vertical geodesics meet at infinity")
    num = [(c2.plus, c1.minus), (c2.minus, c1.plus)]
    den = [(c2.plus, c1.plus), (c2.minus, c1.minus)]
    num = [a - b for a, b in num if a is not None and b is not None]
    den = [a - b for a, b in den if a is not None and b is not None]
    rn = num[0] if len(num) == 1 else num[0] * num[1]
    rd = den[0] if len(den) == 1 else den[0] * den[1]
    if rn == 0 or rd == 0:
        raise SharedEndpoint("geodesics share an endpoint")
    r = rn / rd
    q = (r + 1) / (r - 1)
    sgn = _flavour_sign(c1, c2.minus)
    if sgn == 0:
        raise SharedEndpoint("backward endpoint lies on an endpoint of c1")
    return q, sgn


def form_pair_q(f1, s1: int, f2, s2: int, D: int) -> Fraction:
    """q of two form-geodesics, exactly: (b1 b2 - 2 a1 c2 - 2 a2 c1)/(s1 s2 D).

    s_i is the sqrt-scale of the form's discriminant: disc = (s_i)^2 D.
    Orientation-sensitive: replacing a form by its negative negates q.
    """
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    return Fraction(b1 * b2 - 2 * a1 * c2 - 2 * a2 * c1, s1 * s2 * D)


# ----------------------------------------------------------------------
# kappa and volume

def gamma0_index(n: int) -> int:
    idx = n
    for p, _ in factorize(n):
        idx += idx // p
    return idx


def kappa_and_vol(base: BaseGeodesicSet, mask=None):
    """(kappa, vol): vol of the quotient surface and the length scale
    kappa = (total length of the selected geodesics)/(2 pi vol)."""
    vol = (math.pi / 3.0) * gamma0_index(base.n)
    lengths = base.lengths()
    if mask is not None:
        lengths = [lengths[i] for i in mask]
    return sum(lengths) / (2.0 * math.pi * vol), vol


# ----------------------------------------------------------------------
# double-coset enumeration

@dataclass(frozen=True)
class CosetTerm:
    q: float
    sign: int       # which H flavour the term feeds
    k: int          # index of the reference base geodesic
    l: int          # index of the translated base geodesic
    state: tuple    # canonical form triple of gamma c_l (dedup witness)


def _size_key(f):
    a, b, c = f
    return (a * a + b * b + c * c, f)


def _sigma_canonical(G, sig, sig_inv, window: int = 16):
    """Unique representative of {sigma^t G}: global minimum of the
    coefficient size along the (bitonic) stabilizer orbit, walked until
    `window` consecutive non-improvements in both directions."""
    best, bestk = G, _size_key(G)
    for mat in (sig, sig_inv):
        cur, bad = G, 0
        while bad < window:
            cur = act(mat, cur)
            k = _size_key(cur)
            if k < bestk:
                best, bestk, bad = cur, k, 0
            else:
                bad += 1
    return best


def _geodesic_data(base):
    """Per base geodesic: (form, sqrt scale s, stabilizer pair, endpoints)."""
    out = []
    for g in base.geodesics:
        f, mult = start_form(base.D, g)
        s = 2 if mult == 1 else 1
        sig = g.stabilizer.as_tuple()
        a, b, _ = f
        minus = QuadNum(base.D, -b, -s, 2 * a)
        plus = QuadNum(base.D, -b, s, 2 * a)
        out.append((f, s, (sig, mat_inv(sig)), minus, plus))
    return out


def enumerate_coset_terms(base: BaseGeodesicSet, q_max: float,
                          mask=None, margin: float = 2.0,
                          budget: int = 2_000_000,
                          t_cap: int = 64):
    """All double-coset terms with |q| <= q_max for pairs of base geodesics.

    For each ordered pair (k, l), walks the congruence-group orbit of
    c_l with states reduced modulo the stabilizer of c_k (so states are
    double cosets), keeping terms with |q| <= q_max and expanding while
    |q| stays under margin*q_max.  Identity/reversal cosets
    (gamma c_l = c_k or its reverse) are excluded per the sum's side
    condition.  Returns (terms, skipped) where skipped counts boundary
    hits |q| = 1 (shared endpoints; none expected for distinct
    primitive geodesics).
    """
    if q_max <= 1.0:
        raise ValueError("q_max must exceed 1")
    data = _geodesic_data(base)
    idx = range(len(data)) if mask is None else sorted(mask)
    gens = gamma0_generators(base.n)
    prune = margin * q_max + 25.0
    terms = []
    skipped = 0
    visited_total = 0
    for k in idx:
        fk, sk, (sig_k, sig_k_inv), minus_k, plus_k = data[k]
        pos_k = fk[0] > 0
        canon_self = _sigma_canonical(fk, sig_k, sig_k_inv)
        canon_rev = _sigma_canonical(
            (-fk[0], -fk[1], -fk[2]), sig_k, sig_k_inv)
        for l in idx:
            fl, sl, _, _, _ = data[l]
            den_kl = sk * sl * base.D
            ak, bk, ck = fk

            def qval(G):
                return (bk * G[1] - 2 * ak * G[2] - 2 * G[0] * ck) / den_kl

            start = _sigma_canonical(fl, sig_k, sig_k_inv)
            seen = {start}
            stack = [start]
            while stack:
                visited_total += 1
                if visited_total > budget:
                    raise BudgetExceeded(
                        f"coset walk for pair ({k},{l}) passed {budget}")
                G = stack.pop()
                B = bk * G[1] - 2 * ak * G[2] - 2 * G[0] * ck
                q = B / den_kl
                if abs(q) <= q_max and G != canon_self and G != canon_rev:
                    if abs(B) == den_kl:
                        skipped += 1
                    else:
                        beta = QuadNum(base.D, -G[1], -sl, 2 * G[0])
                        sgn = (beta - minus_k).sign() * (plus_k - beta).sign()
                        if not pos_k:
                            sgn = -sgn
                        if sgn == 0:
                            skipped += 1
                        else:
                            terms.append(CosetTerm(q, sgn, k, l, G))
                if abs(q) > prune:
                    continue
                for g in gens:
                    for Gt in _stab_translates(G, g, sig_k, sig_k_inv,
                                               qval, prune, t_cap):
                        C = _sigma_canonical(Gt, sig_k, sig_k_inv)
                        if C not in seen:
                            seen.add(C)
                            stack.append(C)
    return terms, skipped


def _stab_translates(G, g, sig, sig_inv, qval, prune, t_cap):
    """Neighbors act(g, sigma^t G) for t around 0, adaptively windowed:
    a direction stops after three consecutive |q| > prune misses."""
    for mat, first in ((sig, True), (sig_inv, False)):
        cur = G
        misses = 0
        for t in range(t_cap + 1):
            if t > 0 or first:
                cand = act(g, cur)
                if abs(qval(cand)) <= prune:
                    misses = 0
                    yield cand
                else:
                    misses += 1
                    if misses >= 3:
                        break
            cur = act(mat, cur)


# ----------------------------------------------------------------------
# the density itself

@dataclass
class DensityTable:
    """Density values on a v grid.  omega includes the tail correction
    (a v-independent estimate of the mass beyond q_max, also reported
    separately as tail_estimate) unless it was disabled."""

    grid: np.ndarray
    omega: np.ndarray
    kappa: float
    vol: float
    q_max: float
    terms_used: int
    class_mask: tuple
    tail_estimate: float
    skipped: int = 0

    def at(self, v: float) -> float:
        i = int(np.argmin(np.abs(self.grid - v)))
        return float(self.omega[i])


def default_grid(lo: float = -5.0, hi: float = 5.0, step: float = 0.01,
                 v_min: float = 0.01) -> np.ndarray:
    g = np.arange(lo, hi + step / 2, step)
    return g[np.abs(g) >= v_min - 1e-12]


def omega(base: BaseGeodesicSet, grid: np.ndarray = None,
          q_max: float = 50.0, mask=None, terms=None,
          allow_nonunit_level: bool = False,
          tail_correction: bool = True,
          budget: int = 2_000_000) -> DensityTable:
    """Truncated density sum on a v grid, plus a tail estimate.

    mask selects a subset of base geodesics (indices): both the (k,l)
    pairs of the sum and the length scale kappa are restricted to it,
    which is how the partial densities of class subsequences arise.

    Convergence: a term with q > q_max still contributes ~1/(8 pi vol
    kappa^2 q^2) at every v, and terms with q < -q_max matter once
    |v| > kappa*sqrt(2+2*q_max).  Choose q_max of order (v_max/kappa)^2/2
    to resolve the whole grid; the flat positive-q remainder is
    estimated and folded into the returned values (tail_correction).

    Only the full modular group (n=1) is enabled by default: for proper
    congruence levels the geodesic lengths entering kappa can differ
    between the two orders and the formula's status there is unsettled.
    """
    if base.n != 1 and not allow_nonunit_level:
        raise ValueError("density validated for n=1 only; "
                         "pass allow_nonunit_level=True to experiment")
    if grid is None:
        grid = default_grid()
    grid = np.asarray(grid, dtype=np.float64)
    if np.any(np.abs(grid) < 1e-9):
        raise ValueError("grid must exclude v = 0")
    kappa, vol = kappa_and_vol(base, mask)
    if terms is None:
        terms, skipped = enumerate_coset_terms(base, q_max, mask,
                                               budget=budget)
    else:
        skipped = 0
    total = np.zeros_like(grid)
    vk = grid / kappa
    for t in terms:
        total += _H_on_grid(t.sign, t.q, vk)
    # the sum normalizes by the volume of the unit tangent bundle,
    # 2 pi times the surface area
    total /= 2.0 * math.pi * vol * grid * grid
    # tail: H(q, v/kappa) ~ (v/kappa)^2/(4 q^2) for q beyond the cut, so
    # each missing term adds ~ 1/(8 pi vol kappa^2 q^2); extrapolate the
    # positive-q term density seen near the edge
    edge = [t for t in terms if t.q >= q_max / 2]
    dens = len(edge) / (q_max / 2)
    tail = dens / (8.0 * math.pi * vol * kappa * kappa * q_max)
    if tail_correction:
        total += tail
    return DensityTable(grid, total, kappa, vol, q_max, len(terms),
                        None if mask is None else tuple(sorted(mask)),
                        tail, skipped)
