"""Zeta functions of curves from point counts, and derived exact invariants.

The zeta function of a curve of genus g over F_q is
``Z(T) = P(T) / ((1 - T)(1 - qT))`` with ``P`` of degree 2g,
``P(0) = 1`` and the functional equation ``a_(2g-i) = q^(g-i) a_i``.
``P`` is reconstructed from the minimal data N_1..N_g in exact rational
power-series arithmetic; any redundant counts the caller has are
cross-checks, not inputs.  Inconsistent inputs fail loudly with the first
violated identity; there are no repair heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import divisors, is_prime_power, moebius
from .curves import PointCounts


class InconsistentCountsError(ValueError):
    """Point-count data does not come from a curve of the stated (q, g)."""


# -- exact power-series helpers (coefficient lists of Fractions) -------------


def _series_mul(a, b, order):
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[:order + 1]):
        if not ai:
            continue
        for j, bj in enumerate(b[:order + 1 - i]):
            out[i + j] += ai * bj
    return out

def _series_exp(s, order):
    """exp of a series with zero constant term, to the given order."""
    assert not s[0]
    e = [Fraction(0)] * (order + 1)
    e[0] = Fraction(1)
    for k in range(1, order + 1):
        acc = Fraction(0)
        for j in range(1, k + 1):
            if j < len(s) and s[j]:
                acc += j * s[j] * e[k - j]
        e[k] = acc / k
    return e

def _series_log(z, order):
    """log of a series with constant term 1, to the given order."""
    assert z[0] == 1
    lg = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1):
        acc = z[k] if k < len(z) else Fraction(0)
        for j in range(1, k):
            if k - j < len(z):
                acc -= Fraction(j, k) * lg[j] * z[k - j]
        lg[k] = acc
    return lg


@dataclass(frozen=True)
class ZetaData:
    """q, genus, and the exact integer coefficients a_0..a_2g of P(T)."""

    q: int
    g: int
    a: tuple[int, ...]

    def __post_init__(self):
        q, g, a = self.q, self.g, self.a
        if not is_prime_power(q):
            raise InconsistentCountsError(f"q = {q} is not a prime power")
        if len(a) != 2 * g + 1:
            raise InconsistentCountsError(
                f"P(T) must have degree 2g = {2 * g}, got {len(a) - 1}")
        if a[0] != 1:
            raise InconsistentCountsError(f"a_0 = {a[0]} != 1")
        # i <= g keeps the exponent nonnegative; the i > g half of the
        # functional equation is the same identity read backwards
        for i in range(g + 1):
            if a[2 * g - i] != q ** (g - i) * a[i]:
                raise InconsistentCountsError(
                    f"functional equation fails at i = {i}: "
                    f"a_{2 * g - i} = {a[2 * g - i]} != q^{g - i} * a_{i}")
        if sum(a) <= 0:
            raise InconsistentCountsError(f"P(1) = {sum(a)} <= 0")
        # Weil-interval sanity on the counts this P regenerates
        for m, n_m in enumerate(regenerate_counts(self, 2 * g + 4,
                                                  _validate=False), start=1):
            dev = n_m - q ** m - 1
            if dev * dev > 4 * g * g * q ** m:
                raise InconsistentCountsError(
                    f"regenerated N_{m} = {n_m} violates the Weil bound")

    def p_at(self, t: Fraction) -> Fraction:
        """P(t), exactly."""
        acc = Fraction(0)
        for c in reversed(self.a):
            acc = acc * t + c
        return acc

    def to_json_dict(self) -> dict:
        return {"q": self.q, "g": self.g, "a": [str(c) for c in self.a]}


@dataclass(frozen=True)
class DegreeSpectrum:
    """B_m = number of closed points of degree m, for m = 1..M."""

    q: int
    g: int
    B: tuple[int, ...]

    def b(self, m: int) -> int:
        return self.B[m - 1]

    def __len__(self):
        return len(self.B)


def zeta_from_counts(q: int, g: int, counts) -> ZetaData:
    """Reconstruct P(T) from exactly N_1..N_g.

    a_0..a_g are the degree-<=g truncation of
    ``(1 - T)(1 - qT) exp(sum N_m T^m / m)``; a_(g+1)..a_(2g) come from the
    functional equation.  Noninteger coefficients or P(1) <= 0 mean the
    counts are not the counts of a genus-g curve over F_q.
    """
    counts = list(counts)
    if g < 0:
        raise ValueError("genus must be >= 0")
    if len(counts) != g:
        raise ValueError(f"need exactly g = {g} leading counts, got {len(counts)}")
    if any(n < 0 for n in counts):
        raise InconsistentCountsError("negative point count")
    s = [Fraction(0)] * (g + 1)
    for m in range(1, g + 1):
        s[m] = Fraction(counts[m - 1], m)
    e = _series_exp(s, g)
    pref = [Fraction(1), Fraction(-(q + 1)), Fraction(q)]  # (1-T)(1-qT)
    p = _series_mul(pref, e, g)
    a = []
    for k in range(g + 1):
        if p[k].denominator != 1:
            raise InconsistentCountsError(
                f"coefficient a_{k} = {p[k]} is not an integer; "
                "counts are inconsistent")
        a.append(p[k].numerator)
    for k in range(g + 1, 2 * g + 1):
        a.append(q ** (k - g) * a[2 * g - k])
    return ZetaData(q=q, g=g, a=tuple(a))


def regenerate_counts(z: ZetaData, M: int, _validate: bool = True) -> list[int]:
    """N_1..N_M predicted by Z(T) = P(T)/((1-T)(1-qT)), exactly."""
    q = z.q
    zser = [Fraction(c) for c in z.a] + [Fraction(0)] * max(0, M + 1 - len(z.a))
    geom1 = [Fraction(1)] * (M + 1)
    geomq = [Fraction(q) ** k for k in range(M + 1)]
    zser = _series_mul(_series_mul(zser, geom1, M), geomq, M)
    lg = _series_log(zser, M)
    out = []
    for m in range(1, M + 1):
        n_m = m * lg[m]
        if n_m.denominator != 1:
            raise InconsistentCountsError(f"regenerated N_{m} is not an integer")
        if _validate and n_m < 0:
            raise InconsistentCountsError(f"regenerated N_{m} = {n_m} < 0")
        out.append(n_m.numerator)
    return out


def class_number(z: ZetaData) -> int:
    """h = #Pic^0(X)(F_q) = P(1)."""
    return sum(z.a)


def quasi_residue(z: ZetaData) -> Fraction:
    """q^(1-g) h / (q - 1): the scaled leading value at the s = 1 pole."""
    return Fraction(z.q) ** (1 - z.g) * class_number(z) / (z.q - 1)


def special_value(z: ZetaData, s: int) -> Fraction:
    """Zeta value at an integer s >= 2: P(q^-s) / ((1 - q^-s)(1 - q^(1-s)))."""
    if s <= 1:
        raise ValueError("special_value needs s >= 2 (s = 1 is the pole; "
                         "use quasi_residue)")
    t = Fraction(1, z.q ** s)
    return z.p_at(t) / ((1 - t) * (1 - Fraction(1, z.q ** (s - 1))))


def degree_spectrum(counts: PointCounts) -> DegreeSpectrum:
    """Closed points by degree: B_m = (1/m) sum_(d|m) mu(m/d) N_d."""
    bs = []
    for m in range(1, len(counts) + 1):
        s = sum(moebius(m // d) * counts.n(d) for d in divisors(m))
        if s % m != 0:
            raise InconsistentCountsError(
                f"B_{m} = {s}/{m} is not an integer; counts are inconsistent")
        b = s // m
        if b < 0:
            raise InconsistentCountsError(f"B_{m} = {b} < 0; counts are inconsistent")
        bs.append(b)
    return DegreeSpectrum(q=counts.q, g=counts.g, B=tuple(bs))
