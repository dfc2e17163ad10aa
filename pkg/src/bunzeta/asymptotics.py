"""Limit densities of closed points, the evaluated limit formulas with
certified truncation tails, finite-genus left-hand sides, and reports.

The per-degree limit densities beta_m (one nonnegative rational per
degree, finitely supported) feed three right-hand-side evaluators:

* :func:`rhs_pic`   -- ``1 - sum_m beta_m log_q((q^m - 1)/q^m)``
* :func:`rhs_group` -- ``dim G - sum_r beta_r log_q(|G(F_(q^r))|/q^(r dim G))``
* :func:`rhs_general` -- ``-sum_r gamma_r log_q L(r)`` for user-supplied
  local values.

All binary64 values are computed with ``math.fsum`` over terms listed in
increasing degree order, so specializations that produce identical exact
term lists (the rank-1 torus versus the Picard form, the constant-sheaf
instance of the general form) are bit-identical.  Reported tails are
certified upper bounds on the discarded part of the sum, derived in
exact rational arithmetic (see docs/tail_bounds.md) and only then
rounded outward to binary64.

Square roots of non-square integers are handled by outward-rounded
rational enclosures, never floating point, so the feasibility bound
``sum_m m beta_m / (q^(m/2) - 1) <= 1`` is exact at perfect squares and
certified from above otherwise.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Sequence

from .arith import (
    DEFAULT_ENUM_BUDGET,
    format_rational,
    is_prime_power,
    parse_rational,
)
from .curves import CurveModel, PointCounts, count_series, genus_of
from .groups import GroupSpec, builtin_group, mass_ratio
from .mass import compositions, hn_ss_mass, mass_bun, zagier_ss_mass
from .zeta import (
    DegreeSpectrum,
    ZetaData,
    degree_spectrum,
    regenerate_counts,
    zeta_from_counts,
)

_SQRT_BITS = 64
# Reported tails get a tiny outward nudge, plus an absolute floor whenever
# something nonzero was actually discarded, to absorb binary64 evaluation
# noise on the value itself.
_TAIL_SLACK = Fraction(1_000_000_001, 1_000_000_000)
_TAIL_FLOOR = Fraction(1, 1 << 40)


def sqrt_enclosure(n: int, bits: int = _SQRT_BITS) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(n) <= hi with hi - lo <= 2^-bits; lo == hi exactly
    when n is a perfect square."""
    if n < 0:
        raise ValueError("negative argument")
    s = isqrt(n << (2 * bits))
    lo = Fraction(s, 1 << bits)
    if lo * lo == n:
        return lo, lo
    return lo, Fraction(s + 1, 1 << bits)


@functools.lru_cache(maxsize=None)
def ln_lower(q: int, tol: Fraction = Fraction(1, 1 << 60)) -> Fraction:
    """Rational lower bound of ln(q) via the atanh series (all terms > 0),
    summed until the next term drops below ``tol``."""
    if q < 2:
        raise ValueError("q must be >= 2")
    u = Fraction(q - 1, q + 1)
    acc = Fraction(0)
    power = u
    u2 = u * u
    j = 0
    while True:
        term = power / (2 * j + 1)
        acc += term
        if term < tol or j > 4000:
            break
        power *= u2
        j += 1
    return 2 * acc


@dataclass(frozen=True)
class TVData:
    """Per-degree limit densities of closed points along a family.

    ``beta`` maps a degree m to the nonnegative rational density beta_m
    (finitely supported).  ``groups`` optionally lists
    (degree, weight, local value at the edge) triples for the general
    evaluator.  Feasibility with respect to the square-root bound is a
    flag, not a hard error.
    """

    q: int
    beta: tuple[tuple[int, Fraction], ...]
    groups: Optional[tuple[tuple[int, Fraction, Fraction], ...]] = None

    def __post_init__(self):
        if not is_prime_power(self.q):
            raise ValueError(f"q = {self.q} is not a prime power")
        seen = set()
        for m, b in self.beta:
            if m < 1:
                raise ValueError(f"degree {m} < 1 in beta")
            if m in seen:
                raise ValueError(f"duplicate degree {m} in beta")
            if b < 0:
                raise ValueError(f"beta_{m} = {b} < 0")
            seen.add(m)
        object.__setattr__(
            self, "beta", tuple(sorted((m, Fraction(b)) for m, b in self.beta)))
        if self.groups is not None:
            object.__setattr__(
                self, "groups",
                tuple((int(r), Fraction(gam), Fraction(L))
                      for r, gam, L in self.groups))

    @classmethod
    def from_map(cls, q: int, beta_map: dict, groups=None) -> "TVData":
        beta = tuple((int(m), parse_rational(b)) for m, b in beta_map.items()
                     if parse_rational(b) != 0)
        gs = None
        if groups is not None:
            gs = tuple((int(e["deg"]), parse_rational(e["gamma"]),
                        parse_rational(e["L"])) for e in groups)
        return cls(q=q, beta=beta, groups=gs)

    def beta_at(self, m: int) -> Fraction:
        for deg, b in self.beta:
            if deg == m:
                return b
        return Fraction(0)

    def support(self) -> list[int]:
        return [m for m, b in self.beta if b]

    def feasible(self) -> bool:
        return tv_bound(self) <= 1

    def to_json_dict(self) -> dict:
        out = {"q": self.q,
               "beta": {str(m): format_rational(b) for m, b in self.beta}}
        if self.groups is not None:
            out["groups"] = [{"deg": r, "gamma": format_rational(g),
                              "L": format_rational(L)}
                             for r, g, L in self.groups]
        return out


def tv_bound(tv: TVData) -> Fraction:
    """Certified upper bound of ``sum_m m beta_m / (q^(m/2) - 1)``.

    Exact where q^(m/2) is an integer; elsewhere the square root is
    replaced by a rational lower enclosure (giving an upper bound on the
    term).  The feasibility condition is ``tv_bound(tv) <= 1``.
    """
    total = Fraction(0)
    for m, b in tv.beta:
        if not b:
            continue
        lo, hi = sqrt_enclosure(tv.q ** m)
        root_lower = lo
        if root_lower <= 1:
            raise AssertionError("q^(m/2) enclosure degenerate")
        total += Fraction(m) * b / (root_lower - 1)
    return total


def _neglog_q_terms(q: int, pairs) -> list[float]:
    """Per-term binary64 values of weight * (-log_q ratio)."""
    ln_q = math.log(q)
    out = []
    for weight, ratio in pairs:
        if ratio <= 0:
            raise ValueError(f"nonpositive local value {ratio}")
        t = (math.log(ratio.denominator) - math.log(ratio.numerator)) / ln_q
        out.append(float(weight) * t)
    return out


def _neglog_upper(q: int, x: Fraction, lnq_lower: Fraction) -> Fraction:
    """Rational upper bound of -log_q(1 - x) for 0 < x < 1:
    -ln(1-x) <= x/(1-x), so -log_q(1-x) <= x / ((1-x) ln q)."""
    return x / ((1 - x) * lnq_lower)


def _finite_tail(tv: TVData, M: int, spec_degrees: Sequence[int]) -> Fraction:
    """Certified rational bound on the discarded terms (degrees > M) of the
    group sum with the given invariant degrees ((1,) for the Picard form)."""
    support_beyond = [m for m in tv.support() if m > M]
    if not support_beyond:
        return Fraction(0)
    q = tv.q
    lnq = ln_lower(q)
    # exact-support bound: sum the actual discarded terms, bounded above
    support_bound = Fraction(0)
    for m in support_beyond:
        b = tv.beta_at(m)
        per_degree = Fraction(0)
        for dj in spec_degrees:
            per_degree += _neglog_upper(q, Fraction(1, q ** (m * dj)), lnq)
        support_bound += b * per_degree
    bound = support_bound
    # feasibility-envelope bound: beta_m <= (q^(m/2) - 1)/m termwise, and
    # -log_q(1 - q^(-m d_j)) <= -log_q(1 - q^(-m)); summing the envelope
    # over all m > M gives (see docs/tail_bounds.md)
    #   k * q^(-(M+1)/2) / ((M+1) (1 - q^(-(M+1))) (1 - q^(-1/2)) ln q).
    # Only sound when the discarded densities do satisfy the envelope
    # (an infeasible input need not).
    if all(tv.beta_at(m) * m <= _sqrt_lower(q ** m) - 1 for m in support_beyond):
        k = len(spec_degrees)
        inv_sqrt_upper = Fraction(1) / _sqrt_lower(q)  # >= q^(-1/2)
        qm1_pow = _sqrt_lower(q ** (M + 1))            # <= q^((M+1)/2)
        envelope = (Fraction(k) / ((M + 1) * lnq)) \
            * (Fraction(1) / qm1_pow) \
            / (1 - Fraction(1, q ** (M + 1))) \
            / (1 - inv_sqrt_upper)
        bound = min(support_bound, envelope)
    return bound * _TAIL_SLACK + _TAIL_FLOOR


def _sqrt_lower(n: int) -> Fraction:
    lo, _ = sqrt_enclosure(n)
    return lo


class RhsResult(tuple):
    """(value, tail) pair of binary64 numbers."""

    __slots__ = ()

    def __new__(cls, value: float, tail: float):
        return super().__new__(cls, (value, tail))

    @property
    def value(self) -> float:
        return self[0]

    @property
    def tail(self) -> float:
        return self[1]


def tv_sum_term(tv: TVData, trunc: int) -> float:
    """The summed part ``-sum_(m<=trunc) beta_m log_q((q^m - 1)/q^m)``,
    binary64; shared verbatim by rhs_pic and the constant-sheaf instance
    of rhs_general."""
    q = tv.q
    pairs = [(b, Fraction(q ** m - 1, q ** m))
             for m, b in tv.beta if b and m <= trunc]
    return math.fsum(_neglog_q_terms(q, pairs))


def rhs_pic(tv: TVData, trunc: int) -> RhsResult:
    """``1 - sum_(m<=trunc) beta_m log_q((q^m - 1)/q^m)`` with certified tail."""
    value = 1.0 + tv_sum_term(tv, trunc)
    tail = float(_finite_tail(tv, trunc, (1,)))
    return RhsResult(value, tail)


def rhs_group(tv: TVData, spec: GroupSpec, trunc: int) -> RhsResult:
    """``dim G - sum_(r<=trunc) beta_r log_q(mass_ratio(G, q, r))`` with tail.

    For the one-dimensional torus this reproduces rhs_pic bit-exactly:
    the term lists coincide as exact rationals and are summed by the same
    code path.
    """
    q = tv.q
    pairs = [(b, mass_ratio(spec, q, r)) for r, b in tv.beta if b and r <= trunc]
    value = float(spec.dim) + math.fsum(_neglog_q_terms(q, pairs))
    tail = float(_finite_tail(tv, trunc, spec.degrees))
    return RhsResult(value, tail)


class GeneralResult(tuple):
    """(value, weight_envelope_ok) pair."""

    __slots__ = ()

    def __new__(cls, value: float, envelope_ok: bool):
        return super().__new__(cls, (value, envelope_ok))

    @property
    def value(self) -> float:
        return self[0]

    @property
    def envelope_ok(self) -> bool:
        return self[1]


def rhs_general(groups, q: int, d_bound: int) -> GeneralResult:
    """``-sum_r gamma_r log_q L(r)`` for (degree, weight, local value) triples.

    The flag reports whether every |log_q L(r)| respects the decay
    envelope ``3 d_bound q^(-deg/2)`` expected of stalks with weights
    <= 1/2 and total dimension < d_bound; a False flag is a warning that
    the supplied local data is inconsistent with those hypotheses.
    """
    if d_bound < 1:
        raise ValueError("d_bound must be >= 1")
    triples = [(int(r), Fraction(gam), Fraction(L)) for r, gam, L in groups]
    for r, _, L in triples:
        if L <= 0:
            raise ValueError(f"nonpositive local value L({r}) = {L}")
    pairs = [(gam, L) for _, gam, L in triples]
    value = math.fsum(_neglog_q_terms(q, pairs))
    ln_q = math.log(q)
    ok = True
    for r, _, L in triples:
        logval = abs((math.log(L.numerator) - math.log(L.denominator)) / ln_q)
        if logval > 3.0 * d_bound * float(Fraction(1) / _sqrt_lower(q ** r)):
            ok = False
    return GeneralResult(value, ok)


def log_q_fraction(x: Fraction, q: int) -> float:
    """log_q of a positive rational in binary64 (handles huge num/den)."""
    if x <= 0:
        raise ValueError("log of a nonpositive value")
    return (math.log(x.numerator) - math.log(x.denominator)) / math.log(q)


def lhs_sequence(family: Sequence[ZetaData], spec: GroupSpec):
    """[(g_i, log_q mass / g_i)] for each member; exact mass, binary64 log."""
    out = []
    for z in family:
        if z.g < 1:
            raise ValueError("genus-0 member: the normalized log is undefined")
        mass = mass_bun(spec, z).value
        out.append((z.g, log_q_fraction(mass, z.q) / z.g))
    return out


def empirical_tv(family: Sequence[tuple[DegreeSpectrum, int]], M: int) -> TVData:
    """Finite-index estimate of the limit densities: beta_m from the last
    family member's spectrum divided by its genus.

    Per-member quotient sequences (to judge convergence) are retained by
    :func:`convergence_report`.
    """
    family = list(family)
    if not family:
        raise ValueError("empty family")
    for spec_, g in family:
        if g < 1:
            raise ValueError("genus-0 member: density quotients are undefined")
    spectrum, g_last = family[-1]
    beta = tuple((m, Fraction(spectrum.b(m), g_last))
                 for m in range(1, min(M, len(spectrum)) + 1)
                 if spectrum.b(m))
    return TVData(q=spectrum.q, beta=beta)


def beta_quotients(family: Sequence[tuple[DegreeSpectrum, int]], M: int):
    """Per-member {m: B_m/g} maps, the raw sequences behind empirical_tv."""
    out = []
    for spectrum, g in family:
        if g < 1:
            raise ValueError("genus-0 member: density quotients are undefined")
        out.append({m: Fraction(spectrum.b(m), g)
                    for m in range(1, min(M, len(spectrum)) + 1)})
    return out


@dataclass(frozen=True)
class DominanceRow:
    composition: tuple[int, ...]
    exponent: float


@dataclass(frozen=True)
class DominanceResult:
    rows: tuple[DominanceRow, ...]
    dominant: bool

    def to_json_dict(self) -> dict:
        return {"rows": [{"composition": list(r.composition),
                          "exponent": f"{r.exponent:.17g}"}
                         for r in self.rows],
                "dominant": self.dominant}


def dominance_check(tv: TVData, n: int, trunc: int) -> DominanceResult:
    """Growth exponents of the composition terms of the rank-n semistable
    sum: ``sum_(i<j) n_i n_j + sum_j rhs_group(GL_(n_j))``.

    ``dominant`` is True iff the one-part composition (n) attains the
    strict maximum ((n) having the largest exponent is what makes the
    semistable and total masses grow at the same rate).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > 6:
        raise ValueError("composition table limited to n <= 6")
    values = {m: rhs_group(tv, builtin_group("GL", m), trunc).value
              for m in range(1, n + 1)}
    rows = []
    for comp in compositions(n):
        cross = sum(comp[i] * comp[j]
                    for i in range(len(comp)) for j in range(i + 1, len(comp)))
        expo = float(cross) + math.fsum(values[p] for p in comp)
        rows.append(DominanceRow(tuple(comp), expo))
    trivial = next(r.exponent for r in rows if r.composition == (n,))
    others = [r.exponent for r in rows if r.composition != (n,)]
    dominant = all(x < trivial for x in others)
    return DominanceResult(tuple(rows), dominant)


@dataclass(frozen=True)
class ReportRow:
    index: int
    genus: int
    lhs: float
    gap: float
    ss_lhs: Optional[float] = None
    ss_gap: Optional[float] = None


@dataclass(frozen=True)
class ConvergenceReport:
    """Finite-level comparison of both sides of the limit formula.

    The rows carry log_q(mass)/g per member; rhs/tail come from the last
    member's empirical densities.  Finite gaps at finite genus are data,
    not a verification of the limit: the limit statement itself concerns
    genus going to infinity and is out of reach of any fixed family.
    """

    q: int
    group: GroupSpec
    rows: tuple[ReportRow, ...]
    rhs_value: float
    rhs_tail: float
    tv: TVData
    tv_bound_value: Fraction
    tv_feasible: bool
    member_quotients: tuple
    dominance: Optional[DominanceResult]
    note: str = ("finite-genus data only; the genus-to-infinity limit is not "
                 "verifiable at this scale")

    def to_json_dict(self) -> dict:
        rows = []
        for r in self.rows:
            entry = {"index": r.index, "genus": r.genus,
                     "lhs": f"{r.lhs:.17g}", "gap": f"{r.gap:.17g}"}
            if r.ss_lhs is not None:
                entry["ss_lhs"] = f"{r.ss_lhs:.17g}"
                entry["ss_gap"] = f"{r.ss_gap:.17g}"
            rows.append(entry)
        return {
            "q": self.q,
            "group": self.group.to_json_dict(),
            "rows": rows,
            "rhs": {"value": f"{self.rhs_value:.17g}",
                    "tail": f"{self.rhs_tail:.17g}"},
            "tv": self.tv.to_json_dict(),
            "tv_bound": format_rational(self.tv_bound_value),
            "tv_feasible": self.tv_feasible,
            "member_quotients": [
                {str(m): format_rational(b) for m, b in quo.items()}
                for quo in self.member_quotients],
            "dominance": self.dominance.to_json_dict() if self.dominance else None,
            "note": self.note,
        }


def convergence_report(family, spec: GroupSpec, trunc: int,
                       budget: int | None = None) -> ConvergenceReport:
    """Full pipeline: counts -> zeta -> spectra -> empirical densities ->
    rhs with tail, per-member lhs and gaps, plus the dominance table for
    GL-type groups (with the degree-0 semistable mass per member)."""
    budget = DEFAULT_ENUM_BUDGET if budget is None else budget
    members = list(family)
    if not members:
        raise ValueError("empty family")
    zetas: list[ZetaData] = []
    spectra: list[DegreeSpectrum] = []
    q = None
    for item in members:
        if isinstance(item, CurveModel):
            g = genus_of(item, budget)
            if g < 1:
                raise ValueError(f"{item.name}: genus-0 member not allowed")
            counts = count_series(item, g, budget)
            z = zeta_from_counts(item.q, g, counts.counts)
        elif isinstance(item, PointCounts):
            g = item.g
            if g < 1:
                raise ValueError("genus-0 member not allowed")
            if len(item) < g:
                raise ValueError(f"need N_1..N_{g}, got {len(item)} counts")
            z = zeta_from_counts(item.q, g, item.counts[:g])
        else:
            raise TypeError(f"family members must be curve models or point "
                            f"counts, not {type(item).__name__}")
        if q is None:
            q = z.q
        elif q != z.q:
            raise ValueError("family members live over different base fields")
        full = PointCounts(q=z.q, g=z.g,
                           counts=tuple(regenerate_counts(z, trunc)))
        zetas.append(z)
        spectra.append(degree_spectrum(full))
    genera = [z.g for z in zetas]
    if genera != sorted(genera):
        raise ValueError("family must be sorted by genus")
    pairs = list(zip(spectra, genera))
    tv = empirical_tv(pairs, trunc)
    quotients = beta_quotients(pairs, trunc)
    bound = tv_bound(tv)
    rhs = rhs_group(tv, spec, trunc)
    gl_rank = spec.is_gl()
    rows = []
    for i, z in enumerate(zetas):
        total = mass_bun(spec, z).value
        lhs = log_q_fraction(total, q) / z.g
        row = {"index": i, "genus": z.g, "lhs": lhs,
               "gap": abs(lhs - rhs.value)}
        if gl_rank is not None:
            ss = zagier_ss_mass(gl_rank, 0, z)
            assert ss.value == hn_ss_mass(gl_rank, 0, z).value
            if ss.value > 0:
                ss_lhs = log_q_fraction(ss.value, q) / z.g
                row["ss_lhs"] = ss_lhs
                row["ss_gap"] = abs(ss_lhs - lhs)
        rows.append(ReportRow(**row))
    dom = dominance_check(tv, gl_rank, trunc) if gl_rank else None
    return ConvergenceReport(
        q=q, group=spec, rows=tuple(rows), rhs_value=rhs.value,
        rhs_tail=rhs.tail, tv=tv, tv_bound_value=bound,
        tv_feasible=bound <= 1, member_quotients=tuple(quotients),
        dominance=dom)
