"""Characteristic polynomials, dominant roots and corona series."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

SPECTRAL = "Spectral"
CLOSED_FORM = "ClosedForm"
EDGE = "EdgeHomogeneous"
SIMULATOR = "SimulatorEstimate"

DK_MAX_ITER = 500
DK_TOL = 1e-13
CERT_WIDTH = Fraction(1, 10**12)


class SpectralError(ArithmeticError):
    pass


# polynomials ------------------------------------------------------------------

class RationalPolynomial:
    """Exact polynomial c_0 + c_1 z + ... + c_d z^d."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = [Fraction(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c) if c else (Fraction(0),)

    @classmethod
    def from_high(cls, coeffs):
        return cls(list(reversed(list(coeffs))))

    @property
    def degree(self):
        return len(self.coeffs) - 1 if any(self.coeffs) else -1

    def lead(self):
        return self.coeffs[-1]

    def is_zero(self):
        return self.degree < 0

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + (c if isinstance(z, Fraction) or isinstance(z, int) else float(c))
        return acc

    def __eq__(self, other):
        if not isinstance(other, RationalPolynomial):
            other = RationalPolynomial([other])
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RationalPolynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return RationalPolynomial([-x for x in self.coeffs])

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        other = _poly(other)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = RationalPolynomial([1])
        for _ in range(n):
            out = out * self
        return out

    def divmod(self, other):
        other = _poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        dq = len(r) - len(other.coeffs)
        if dq < 0:
            return RationalPolynomial([0]), self
        q = [Fraction(0)] * (dq + 1)
        lead = other.lead()
        for i in range(dq, -1, -1):
            c = r[i + len(other.coeffs) - 1] / lead
            q[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    r[i + j] -= c * b
        return RationalPolynomial(q), RationalPolynomial(r[:len(other.coeffs) - 1] or [0])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        return RationalPolynomial([c / self.lead() for c in self.coeffs])

    def derivative(self):
        return RationalPolynomial([i * c for i, c in enumerate(self.coeffs)][1:] or [0])

    def is_palindromic(self):
        return self.coeffs == tuple(reversed(self.coeffs))

    def reversed(self):
        """z^d p(1/z)."""
        return RationalPolynomial(list(reversed(self.coeffs)))

    def __repr__(self):
        return f"RationalPolynomial({str(self)!r})"

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            cs = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            if i == 0:
                body = cs
            else:
                zs = "z" if i == 1 else f"z^{i}"
                body = zs if a == 1 else f"{cs} {zs}"
            terms.append((sign, body))
        if not terms:
            return "0"
        first = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return " ".join([first] + [f"{s} {b}" for s, b in terms[1:]])


def _poly(x):
    return x if isinstance(x, RationalPolynomial) else RationalPolynomial([x])


Z = RationalPolynomial([0, 1])


def poly_gcd(a, b):
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def squarefree_part(p):
    g = poly_gcd(p, p.derivative())
    return (p // g).monic() if g.degree > 0 else p.monic()


# characteristic polynomial -----------------------------------------------------

def char_poly(m):
    """det(zI - M) by Faddeev-LeVerrier.

    M is scaled by the lcm d of its denominators so the recursion runs on
    integers; the divisions by k are exact there.  det(zI - M) is then
    d^-n det(dz I - dM).
    """
    a = [list(map(Fraction, r)) for r in (m.entries if hasattr(m, "entries") else m)]
    n = len(a)
    d = 1
    for r in a:
        for x in r:
            d = math.lcm(d, x.denominator)
    ai = [[int(x * d) for x in r] for r in a]
    c = [0] * (n + 1)
    c[n] = 1
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = _matmul(ai, mk)
        for i in range(n):
            prod[i][i] += c[n - k + 1]
        mk = prod
        am = _matmul(ai, mk)
        tr = -sum(am[i][i] for i in range(n))
        if tr % k:
            raise SpectralError("Faddeev-LeVerrier: inexact division")
        c[n - k] = tr // k
    return RationalPolynomial([Fraction(c[j], d ** (n - j)) for j in range(n + 1)])


def _matmul(a, b):
    n = len(a)
    bt = list(zip(*b)) if b else []
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def det_cofactor(a):
    """Cofactor expansion; used as an independent check."""
    n = len(a)
    if n == 0:
        return RationalPolynomial([1])
    if n == 1:
        return _poly(a[0][0])
    total = RationalPolynomial([0])
    for j in range(n):
        if a[0][j] == 0 or (isinstance(a[0][j], RationalPolynomial) and a[0][j].is_zero()):
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = _poly(a[0][j]) * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def char_poly_cofactor(m):
    a = [list(map(Fraction, r)) for r in (m.entries if hasattr(m, "entries") else m)]
    n = len(a)
    zi = [[(Z if i == j else RationalPolynomial([0])) - a[i][j] for j in range(n)] for i in range(n)]
    return det_cofactor(zi)


# roots ------------------------------------------------------------------------

def durand_kerner(p, max_iter=DK_MAX_ITER, tol=DK_TOL):
    """All complex roots of p (simple roots expected)."""
    p = p.monic()
    d = p.degree
    if d < 1:
        return []
    c = [float(x) for x in p.coeffs]
    bound = 1 + max(abs(x) for x in c[:-1])
    z = [bound * 0.5 * (0.4 + 0.9j) ** i for i in range(d)]

    def ev(x):
        acc = 0j
        for a in reversed(c):
            acc = acc * x + a
        return acc

    for _ in range(max_iter):
        moved = 0.0
        new = []
        for i, zi in enumerate(z):
            den = 1 + 0j
            for j, zj in enumerate(z):
                if i != j:
                    den *= zi - zj
            if den == 0:
                den = 1e-300
            step = ev(zi) / den
            new.append(zi - step)
            moved = max(moved, abs(step) / max(1.0, abs(zi)))
        z = new
        if moved < tol:
            return z
    raise SpectralError(f"Durand-Kerner did not converge in {max_iter} iterations")


def roots(p):
    """Roots of p with multiplicity stripped (the square-free part)."""
    sf = squarefree_part(p)
    zs = []
    # strip the root at 0 exactly
    while sf.degree > 0 and sf.coeffs[0] == 0:
        zs.append(0j)
        sf = RationalPolynomial(sf.coeffs[1:])
    return zs + durand_kerner(sf)


def certify_real_root(p, approx, width=CERT_WIDTH):
    """Exact rational bracket [lo, hi] of a simple real root near approx."""
    p = squarefree_part(p)
    for eps in (1e-9, 1e-7, 1e-5, 1e-3):
        lo = Fraction(approx - eps * max(1.0, abs(approx)))
        hi = Fraction(approx + eps * max(1.0, abs(approx)))
        slo, shi = _sign(p(lo)), _sign(p(hi))
        if slo == 0:
            return lo, lo
        if shi == 0:
            return hi, hi
        if slo != shi:
            break
    else:
        raise SpectralError(f"no sign change of {p} near {approx}")
    while hi - lo > width:
        mid = (lo + hi) / 2
        # keep dyadic denominators small
        sm = _sign(p(mid))
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _sign(x):
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class GrowthRate:
    value: float
    lo: Fraction
    hi: Fraction
    source: str
    note: str = ""

    @property
    def certified_interval(self):
        return (self.lo, self.hi)

    def width(self):
        return self.hi - self.lo

    def to_dict(self):
        return {
            "value": self.value,
            "certified_interval": [str(self.lo), str(self.hi)],
            "interval_float": [float(self.lo), float(self.hi)],
            "source": self.source,
            "note": self.note,
        }

    def truncated(self, places=4):
        return truncate(self.value, places, self.lo, self.hi)


def truncate(x, places=4, lo=None, hi=None):
    """x truncated (not rounded) to `places` decimals, as a string.

    When an exact bracket is given the digits are taken from it, so a value
    sitting just below a decimal boundary is not pushed across it by float
    error.
    """
    scale = 10**places
    if lo is not None and hi is not None:
        a = math.floor(Fraction(lo) * scale)
        b = math.floor(Fraction(hi) * scale)
        n = a if a == b else math.floor(x * scale)
    else:
        n = math.floor(Fraction(x) * scale)
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // scale}.{n % scale:0{places}d}"


def max_modulus_root(p, source=SPECTRAL, note=""):
    if p.degree < 1:
        raise SpectralError("polynomial has no roots")
    zs = roots(p)
    best = max(zs, key=abs)
    mod = abs(best)
    if abs(best.imag) <= 1e-9 * max(1.0, mod):
        lo, hi = certify_real_root(p, best.real)
        val = float((lo + hi) / 2)
        # the modulus of a negative dominant root
        if val < 0:
            lo, hi, val = -hi, -lo, -val
        return GrowthRate(val, lo, hi, source, note)
    # complex dominant root: bracket the modulus numerically
    err = max(1e-12, 1e-12 * mod)
    return GrowthRate(mod, Fraction(mod - err), Fraction(mod + err), source,
                      (note + "; " if note else "") + "dominant root not real, interval not certified")


# palindromic quartic ----------------------------------------------------------

def palindromic_quartic(a, b):
    a, b = Fraction(a), Fraction(b)
    return RationalPolynomial([1, -a, -b, -a, 1])


def _on_unit_circle(a, b):
    # w* < 2 exactly when chi(1) = 2 - 2a - b > 0 (for a < 4); with a >= 0 the
    # other w root is smaller in modulus, so every root then has |z| = 1
    a, b = Fraction(a), Fraction(b)
    return 0 <= a < 4 and 2 - 2 * a - b > 0


def palindromic_quartic_value(a, b):
    """Closed form for the largest modulus of a root of z^4 - a z^3 - b z^2 - a z + 1."""
    if _on_unit_circle(a, b):
        return 1.0
    a, b = float(a), float(b)
    disc = a * a + 4 * b + 8
    if disc < 0:
        raise ValueError(f"a^2 + 4b + 8 = {disc} < 0: no real w")
    w = (a + math.sqrt(disc)) / 2
    if w < 2:
        raise ValueError(f"w* = {w} < 2: the dominant roots are not real")
    return (w + math.sqrt(w * w - 4)) / 2


def palindromic_quartic_root(a, b):
    """Max-modulus root of z^4 - a z^3 - b z^2 - a z + 1 via w = z + 1/z.

    Real and certified when w* >= 2; for a >= 0 and 2a + b < 2 all roots
    lie on the unit circle and the modulus is exactly 1.
    """
    a, b = Fraction(a), Fraction(b)
    if _on_unit_circle(a, b):
        return GrowthRate(1.0, Fraction(1), Fraction(1), CLOSED_FORM, "all roots on the unit circle")
    val = palindromic_quartic_value(a, b)
    lo, hi = certify_real_root(palindromic_quartic(a, b), val)
    return GrowthRate(val, lo, hi, CLOSED_FORM)


def uncorrected_palindromic_value(a, b):
    """The palindromic-root expression with radicand 4b - 8 + a(a + s),
    which drops a factor 2; kept only for side-by-side diagnostics."""
    a, b = float(a), float(b)
    s = math.sqrt(a * a + 4 * b + 8)
    return 0.25 * (a + s + math.sqrt(4 * b - 8 + a * (a + s)))


# series ----------------------------------------------------------------------

@dataclass
class CoronaSeries:
    counts: list
    violations: list

    @property
    def tau(self):
        out, acc = [], 0
        for x in self.counts:
            acc += x
            out.append(acc)
        return out

    def to_dict(self):
        return {"counts": [str(x) for x in self.counts], "violations": self.violations}


def corona_series(m, v1, n):
    """|F_1|..|F_n| from j . M^{k-1} v1, checked against χ's recurrence."""
    counts = v1.counts if hasattr(v1, "counts") else v1
    w = m.weights
    v = [Fraction(x) for x in counts]
    out = []
    for _ in range(n):
        out.append(sum(a * b for a, b in zip(w, v)))
        v = m.apply(v)
    rec = recurrence_series(char_poly(m), out[:m.order], n)
    if rec != out:
        raise SpectralError("matrix series disagrees with the characteristic recurrence")
    bad = [i + 1 for i, x in enumerate(out) if x <= 0]
    return CoronaSeries(out, bad)


def recurrence_series(chi, first, n):
    """Extend `first` by the linear recurrence with characteristic poly chi.

    Cayley-Hamilton gives sum c_i a_{m+i} = 0 for every m >= 1.
    """
    c = chi.monic().coeffs
    d = len(c) - 1
    out = list(first[:n])
    while len(out) < n:
        m = len(out) - d
        out.append(-sum(c[i] * out[m + i] for i in range(d)))
    return out


def ogf(m, v1):
    """(numerator, denominator) of φ(z) = Σ |F_n| z^n."""
    chi = char_poly(m)
    d = chi.degree
    den = chi.reversed()  # z^d χ(1/z) = det(I - zM)
    first = corona_series(m, v1, d).counts
    series = RationalPolynomial([0] + first)
    num = RationalPolynomial((series * den).coeffs[:d + 1])
    return num, den


def series_from_ogf(num, den, n):
    """Coefficients 1..n of num/den by power-series division."""
    c0 = den.coeffs[0]
    out = []
    for k in range(n + 1):
        acc = num.coeffs[k] if k < len(num.coeffs) else Fraction(0)
        for i in range(1, min(k, den.degree) + 1):
            acc -= den.coeffs[i] * out[k - i]
        out.append(acc / c0)
    return out[1:]


# dispatch --------------------------------------------------------------------

def spectral_growth(m):
    return max_modulus_root(char_poly(m), SPECTRAL, m.name)


def growth_rate(s, variant=None):
    """Growth rate of s: spectral when a matrix exists, else edge-homogeneous."""
    from .classification import classify
    from .cyclic import HYPERBOLIC, as_sequence
    from .transition import TransitionError, is_4468, matrix_for, printed_chi

    s = as_sequence(s)
    if is_4468(s):
        return spectral_growth(matrix_for(s, variant or ""))
    c = classify(s)
    if c.growth_class != HYPERBOLIC:
        raise SpectralError(f"{s} does not grow exponentially")
    chi = printed_chi(s)
    if chi is not None:
        return max_modulus_root(chi, note="printed characteristic polynomial")
    try:
        return spectral_growth(matrix_for(s, variant))
    except TransitionError as exc:
        from .formulas import edge_symbol_for, edge_homogeneous_growth

        e = edge_symbol_for(s)
        if e is not None:
            return edge_homogeneous_growth(e)
        raise SpectralError(f"{s}: {exc}") from None
