"""Integer binary quadratic forms (a, b, c) and 2x2 integer matrices.

Forms are plain tuples so they can be hashed and pushed through searches
cheaply.  Matrices are tuples (p, q, r, s) read row-major.  The group
action used throughout is the *left* action

    (g . Q)(x, y) = Q(s x - q y, -r x + p y)       g = (p, q, r, s), det 1

under which the first root of Q (the solution w of Q(w,1)=0 carrying the
sign convention +sqrt(disc)) transforms as w -> (p w + q)/(r w + s).
"""

from math import gcd, isqrt

Form = tuple  # (a, b, c)
Mat = tuple   # (p, q, r, s)

MAT_ID = (1, 0, 0, 1)
MAT_T = (1, 1, 0, 1)
MAT_S = (0, -1, 1, 0)


def mat_mul(g: Mat, h: Mat) -> Mat:
    return (g[0] * h[0] + g[1] * h[2], g[0] * h[1] + g[1] * h[3],
            g[2] * h[0] + g[3] * h[2], g[2] * h[1] + g[3] * h[3])


def mat_det(g: Mat) -> int:
    return g[0] * g[3] - g[1] * g[2]


def mat_inv(g: Mat) -> Mat:
    """Inverse of a determinant +-1 integer matrix."""
    d = mat_det(g)
    if d == 1:
        return (g[3], -g[1], -g[2], g[0])
    if d == -1:
        return (-g[3], g[1], g[2], -g[0])
    raise ValueError("matrix is not unimodular")


def mat_pow(g: Mat, k: int) -> Mat:
    if k < 0:
        return mat_pow(mat_inv(g), -k)
    out = MAT_ID
    while k:
        if k & 1:
            out = mat_mul(out, g)
        g = mat_mul(g, g)
        k >>= 1
    return out


def disc(f: Form) -> int:
    a, b, c = f
    return b * b - 4 * a * c


def form_value(f: Form, x: int, y: int) -> int:
    a, b, c = f
    return a * x * x + b * x * y + c * y * y


def content(f: Form) -> int:
    return gcd(gcd(abs(f[0]), abs(f[1])), abs(f[2]))


def is_primitive(f: Form) -> bool:
    return content(f) == 1


def act(g: Mat, f: Form) -> Form:
    """Left action of det-1 g on f; disc is preserved."""
    p, q, r, s = g
    a, b, c = f
    a2 = a * s * s - b * s * r + c * r * r
    c2 = a * q * q - b * q * p + c * p * p
    mid = (a * (s - q) * (s - q) + b * (s - q) * (p - r)
           + c * (p - r) * (p - r))
    return (a2, mid - a2 - c2, c2)


def tshift(f: Form, j: int) -> Form:
    """Apply T^j:  (a, b, c) -> (a, b - 2aj, a j^2 - b j + c)."""
    a, b, c = f
    return (a, b - 2 * a * j, a * j * j - b * j + c)


def tshift_canonical(f: Form) -> Form:
    """Unique T-orbit representative with b in (-|a|, |a|]."""
    a, b, c = f
    if a == 0:
        raise ValueError("degenerate form (a=0)")
    # want b - 2aj in (-|a|, |a|]
    t = 2 * abs(a)
    bstar = (abs(a) - b) % t          # in [0, 2|a|)
    bstar = abs(a) - bstar            # in (-|a|, |a|]
    j = (b - bstar) // (2 * a)
    return tshift(f, j)


def principal_form(delta: int) -> Form:
    if delta % 4 == 0:
        return (1, 0, -delta // 4)
    if delta % 4 == 1:
        return (1, 1, (1 - delta) // 4)
    raise ValueError("discriminant must be 0 or 1 mod 4")


def automorph(f: Form, t: int, u: int) -> Mat:
    """Generator of the proper automorphism group of f.

    (t, u) must solve t^2 - disc(f) u^2 = 4; the returned matrix has
    determinant 1 and fixes f under the left action.
    """
    a, b, c = f
    if (t - b * u) % 2 or (t + b * u) % 2:
        raise ValueError("parity: t and b*u must agree mod 2")
    return ((t - b * u) // 2, -c * u, a * u, (t + b * u) // 2)


# ----------------------------------------------------------------------
# indefinite reduction (positive non-square discriminant)

def is_reduced_indefinite(f: Form) -> bool:
    a, b, c = f
    d = disc(f)
    if d <= 0 or b <= 0:
        return False
    # 0 < b < sqrt(d)  and  sqrt(d) - b < 2|a| < sqrt(d) + b, all strict;
    # with d non-square, integer comparisons via squares are exact.
    if b * b >= d:
        return False
    ta = 2 * abs(a)
    lo, hi = ta - b, ta + b  # need lo < sqrt(d) < hi... rearranged below
    # sqrt(d) - b < 2|a|  <=>  sqrt(d) < 2|a| + b  <=>  d < (2|a|+b)^2
    if d >= hi * hi:
        return False
    # 2|a| < sqrt(d) + b  <=>  2|a| - b < sqrt(d); if lo <= 0 trivially true
    if lo > 0 and lo * lo >= d:
        return False
    return True


def rho_step(f: Form) -> Form:
    """One step of the classical reduction operator for indefinite forms."""
    a, b, c = f
    d = disc(f)
    ac = abs(c)
    if ac == 0:
        raise ValueError("degenerate form (c=0)")
    rt = isqrt(d)
    if ac > rt:
        # choose r = -b mod 2|c| in (-|c|, |c|]
        r = (ac - (-b)) % (2 * ac)
        r = ac - r
    else:
        # choose r = -b mod 2|c| in (sqrt(d) - 2|c|, sqrt(d));
        # rt = floor(sqrt(d)) is the largest integer below sqrt(d)
        # because d is never a perfect square here.
        r = rt - ((rt + b) % (2 * ac))
    return (c, r, (r * r - d) // (4 * c))


def reduce_indefinite(f: Form) -> Form:
    """Iterate rho_step until a reduced form appears."""
    seen = 0
    while not is_reduced_indefinite(f):
        f = rho_step(f)
        seen += 1
        if seen > 10_000:
            raise RuntimeError("reduction failed to terminate")
    return f


def cycle_of_reduced(f: Form):
    """The full rho-cycle through a reduced form, as a tuple."""
    if not is_reduced_indefinite(f):
        raise ValueError("start form must be reduced")
    out = [f]
    g = rho_step(f)
    while g != f:
        out.append(g)
        g = rho_step(g)
    return tuple(out)


def reduced_forms_indefinite(delta: int, primitive_only=True):
    """All reduced forms of positive non-square discriminant delta."""
    rt = isqrt(delta)
    if rt * rt == delta:
        raise ValueError("square discriminant")
    out = []
    for b in range(1, rt + 1):
        if (delta - b) % 2:
            continue
        n = (delta - b * b) // 4  # = |a c|, with a c < 0
        if n <= 0:
            continue
        for aa in range(1, n + 1):
            if n % aa:
                continue
            ta = 2 * aa
            if (ta - b) > 0 and (ta - b) ** 2 >= delta:
                continue
            if (ta + b) ** 2 <= delta:
                continue
            cc = n // aa
            for a, c in ((aa, -cc), (-aa, cc)):
                f = (a, b, c)
                if primitive_only and not is_primitive(f):
                    continue
                out.append(f)
    return sorted(out)


def reduction_cycles(delta: int):
    """Partition of the reduced primitive forms of disc delta into cycles."""
    remaining = set(reduced_forms_indefinite(delta))
    cycles = []
    while remaining:
        f = min(remaining)
        cyc = cycle_of_reduced(f)
        cycles.append(cyc)
        remaining -= set(cyc)
    return cycles


def equivalent_indefinite(f: Form, g: Form) -> bool:
    """Proper (SL2) equivalence test via the reduction cycle."""
    if disc(f) != disc(g):
        return False
    return reduce_indefinite(g) in cycle_of_reduced(reduce_indefinite(f))


# ----------------------------------------------------------------------
# definite reduction (negative discriminant, positive definite a > 0)

def reduce_definite(f: Form) -> Form:
    a, b, c = f
    if disc(f) >= 0 or a <= 0:
        raise ValueError("expected a positive definite form")
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if b <= -a or b > a:
            # normalize b into (-a, a]
            k = (a - b) // (2 * a)
            b2 = b + 2 * a * k
            c = a * k * k + b * k + c
            b = b2
            continue
        break
    if (a == c and b < 0) or b == -a:
        b = -b
    return (a, b, c)


def is_reduced_definite(f: Form) -> bool:
    a, b, c = f
    if not (-a < b <= a <= c):
        return False
    return not (a == c and b < 0)


def reduced_forms_definite(delta: int, primitive_only=True):
    """All reduced positive definite forms of discriminant delta < 0."""
    if delta >= 0:
        raise ValueError("discriminant must be negative")
    out = []
    a = 1
    while 3 * a * a <= -delta:
        for b in range(-a + 1, a + 1):
            num = b * b - delta
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            f = (a, b, c)
            if primitive_only and not is_primitive(f):
                continue
            out.append(f)
        a += 1
    return sorted(out)
