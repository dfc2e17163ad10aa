"""Explicit curve models over finite fields and exhaustive point counting.

Three kinds of models are supported, each with a bit-exact rule for the
points at infinity of the smooth projective model:

* the projective line (``N_m = q^m + 1``),
* hyperelliptic models ``y^2 + h(x) y = f(x)`` with ``deg f in {2g+1, 2g+2}``
  (one ramified point at infinity for odd ``deg f``; for even ``deg f`` the
  number of points at infinity over F_(q^m) is the number of roots of
  ``z^2 + h_(g+1) z = f_(2g+2)`` there),
* smooth plane models given by a homogeneous form, counted directly on
  projective points.

Counting is exhaustive.  Smoothness is verified by bounded exhaustive
search over extension fields rather than symbolic elimination; the bound
is configurable.  All counts are deterministic and independent of how the
affine domain is chunked.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import (
    DEFAULT_ENUM_BUDGET,
    BudgetExceededError,
    DensePoly,
    FiniteField,
    poly_over,
)

# Plane smoothness default: extensions scanned by the Jacobian criterion.
DEFAULT_PLANE_SMOOTHNESS_BOUND = 4

_TABLE_BUILD_MAX = 1 << 16


class SingularModelError(ValueError):
    """A model failed its smoothness invariant; carries a witness point."""

    def __init__(self, model_name: str, witness, message: str | None = None):
        self.witness = witness
        msg = message or f"{model_name} is singular; witness common zero {witness}"
        super().__init__(msg)


class WeilViolationError(RuntimeError):
    """A computed point count left the Weil interval (bad model or bug)."""

    def __init__(self, m: int, n_m: int, q: int, g: int):
        self.m = m
        super().__init__(
            f"N_{m} = {n_m} violates the Weil bound |N - q^m - 1| <= 2g q^(m/2) "
            f"for q={q}, g={g}")


@dataclass(frozen=True)
class PointCounts:
    """Counts N_m = #X(F_(q^m)) for m = 1..M, with the Weil bound enforced."""

    q: int
    g: int
    counts: tuple[int, ...]

    def __post_init__(self):
        for i, n_m in enumerate(self.counts):
            m = i + 1
            if n_m < 0:
                raise WeilViolationError(m, n_m, self.q, self.g)
            # |N - q^m - 1|^2 <= 4 g^2 q^m, kept in integers (exact)
            dev = n_m - self.q ** m - 1
            if dev * dev > 4 * self.g * self.g * self.q ** m:
                raise WeilViolationError(m, n_m, self.q, self.g)

    def n(self, m: int) -> int:
        """N_m (1-based)."""
        return self.counts[m - 1]

    def __len__(self):
        return len(self.counts)


def _eval_codes(E: FiniteField, cs, x: int) -> int:
    acc = 0
    for c in reversed(cs):
        acc = E.add_c(E.mul_c(acc, x), c)
    return acc


class CurveModel:
    """Base class for curve models; subclasses implement the counting rules."""

    kind: str
    base: FiniteField

    def __init__(self, base: FiniteField, name: str | None = None):
        self.base = base
        self.name = name or f"{self.kind}/GF({base.order})"
        self._validated_to = 0  # smoothness verified over extensions <= this
        self._count_cache: dict[int, int] = {}  # counts are immutable facts

    @property
    def q(self) -> int:
        return self.base.order

    def extension(self, m: int) -> FiniteField:
        E = FiniteField.extension(self.base, m) if m > 1 else self.base
        if E.order <= _TABLE_BUILD_MAX:
            E.build_tables()
        return E

    # subclass hooks -------------------------------------------------------

    def genus(self) -> int:
        raise NotImplementedError

    def _smoothness_bound(self) -> int:
        raise NotImplementedError

    def _scan_singular(self, m: int, budget: int):
        """Return a witness of a singular point over F_(q^m), or None."""
        raise NotImplementedError

    def _check_budget(self, m: int, budget: int) -> None:
        pass

    def _count(self, m: int, budget: int) -> int:
        raise NotImplementedError

    # public API -----------------------------------------------------------

    def validate(self, budget: int = DEFAULT_ENUM_BUDGET,
                 bound: int | None = None) -> None:
        """Verify smoothness exhaustively over extensions up to ``bound``."""
        bound = self._smoothness_bound() if bound is None else bound
        if self._validated_to >= bound:
            return
        for m in range(self._validated_to + 1, bound + 1):
            witness = self._scan_singular(m, budget)
            if witness is not None:
                raise SingularModelError(self.name, witness)
            self._validated_to = m

    def count_points(self, m: int, budget: int = DEFAULT_ENUM_BUDGET) -> int:
        self.validate(budget)
        self._check_budget(m, budget)  # the budget caps work, cached or not
        n = self._count_cache.get(m)
        if n is None:
            n = self._count(m, budget)
            self._count_cache[m] = n
        return n

    def __repr__(self):
        return f"<{self.kind} {self.name}>"


class ProjectiveLine(CurveModel):
    kind = "projective-line"

    def genus(self) -> int:
        return 0

    def _smoothness_bound(self) -> int:
        return 0

    def _scan_singular(self, m, budget):
        return None

    def _count(self, m: int, budget: int) -> int:
        return self.q ** m + 1


class HyperellipticCurve(CurveModel):
    """y^2 + h(x) y = f(x) over the base field, deg f in {2g+1, 2g+2}."""

    kind = "hyperelliptic"

    def __init__(self, base: FiniteField, h: DensePoly, f: DensePoly,
                 name: str | None = None):
        super().__init__(base, name)
        self.h = h
        self.f = f
        if f.is_zero() or f.degree < 3:
            raise ValueError(f"{self.name}: deg f must be >= 3 (got {f.degree})")
        g = (f.degree - 1) // 2
        if h.degree > g + 1:
            raise ValueError(
                f"{self.name}: deg h = {h.degree} exceeds g+1 = {g + 1}")
        if base.char == 2 and h.is_zero():
            raise SingularModelError(
                self.name, None,
                f"{self.name}: h = 0 in characteristic 2 is inseparable, never smooth")
        self._h_codes = tuple(c.code for c in h.coeffs)
        self._f_codes = tuple(c.code for c in f.coeffs)

    @classmethod
    def from_ints(cls, base: FiniteField, h_coeffs, f_coeffs,
                  name: str | None = None) -> "HyperellipticCurve":
        return cls(base, poly_over(base, h_coeffs), poly_over(base, f_coeffs),
                   name=name)

    def genus(self) -> int:
        return (self.f.degree - 1) // 2

    def _smoothness_bound(self) -> int:
        return 2 * self.genus() + 2

    def _infinity_coeffs(self) -> tuple[int, int]:
        """(h_(g+1), f_(2g+2)) codes for the model at infinity."""
        g = self.genus()
        h_inf = self.h.coefficient(g + 1)
        h_code = h_inf.code if not isinstance(h_inf, int) else 0
        f_inf = self.f.coefficient(2 * g + 2)
        f_code = f_inf.code if not isinstance(f_inf, int) else 0
        return h_code, f_code

    def _scan_singular(self, m: int, budget: int):
        E = self.extension(m)
        if E.order > budget:
            raise BudgetExceededError(E.order, budget,
                                      f"smoothness scan for {self.name}")
        h_cs, f_cs = self._h_codes, self._f_codes
        hp = tuple(c.code for c in self.h.derivative().coeffs)
        fp = tuple(c.code for c in self.f.derivative().coeffs)
        if E.char == 2:
            if self.h.degree == 0:
                return None  # F_y = h is a nonzero constant: no critical points
            half = None
        else:
            half = E.inv_c(E.embed_int(2))
        for x in range(E.order):
            a = _eval_codes(E, h_cs, x)
            if E.char == 2:
                if a != 0:
                    continue
                # unique y with y^2 = f(x)
                y = E.pow_c(_eval_codes(E, f_cs, x), E.order // 2)
                fx = E.add_c(E.mul_c(_eval_codes(E, hp, x), y),
                             _eval_codes(E, fp, x))
                if fx == 0:
                    return (m, x, y)
            else:
                y = E.neg_c(E.mul_c(a, half))  # zero of F_y = 2y + h(x)
                fval = E.sub_c(E.add_c(E.mul_c(y, y), E.mul_c(a, y)),
                               _eval_codes(E, f_cs, x))
                if fval != 0:
                    continue
                fx = E.sub_c(E.mul_c(_eval_codes(E, hp, x), y),
                             _eval_codes(E, fp, x))
                if fx == 0:
                    return (m, x, y)
        return None

    def _affine_count_range(self, E: FiniteField, lo: int, hi: int) -> int:
        """Affine solutions with x-code in [lo, hi); chunking-invariant."""
        h_cs, f_cs = self._h_codes, self._f_codes
        total = 0
        for x in range(lo, hi):
            total += E.quadratic_root_count(_eval_codes(E, h_cs, x),
                                            _eval_codes(E, f_cs, x))
        return total

    def _check_budget(self, m: int, budget: int) -> None:
        if self.q ** m > budget:
            raise BudgetExceededError(self.q ** m, budget,
                                      f"point count for {self.name}")

    def _count(self, m: int, budget: int) -> int:
        E = self.extension(m)
        if E.order > budget:
            raise BudgetExceededError(E.order, budget,
                                      f"point count for {self.name}")
        n = self._affine_count_range(E, 0, E.order)
        if self.f.degree % 2 == 1:
            n += 1
        else:
            h_inf, f_inf = self._infinity_coeffs()
            n += E.quadratic_root_count(h_inf, f_inf)
        return n


class PlaneCurve(CurveModel):
    """Smooth plane model: homogeneous form F(x, y, z) of the given degree."""

    kind = "plane"

    def __init__(self, base: FiniteField, monomials: dict, degree: int,
                 name: str | None = None,
                 smoothness_bound: int = DEFAULT_PLANE_SMOOTHNESS_BOUND):
        super().__init__(base, name)
        self.degree = degree
        self.monomials = {}
        for (i, j, k), c in monomials.items():
            code = c.code if hasattr(c, "code") else base.embed_int(c)
            if i + j + k != degree:
                raise ValueError(
                    f"{self.name}: monomial x^{i} y^{j} z^{k} is not of degree {degree}")
            if code:
                self.monomials[(i, j, k)] = code
        if not self.monomials:
            raise ValueError(f"{self.name}: the zero form does not define a curve")
        self.smoothness_bound = smoothness_bound
        self._partials = [self._derive(axis) for axis in range(3)]

    @classmethod
    def from_list(cls, base: FiniteField, entries, degree: int,
                  name: str | None = None, **kw) -> "PlaneCurve":
        monos = {(i, j, k): c for i, j, k, c in entries}
        return cls(base, monos, degree, name=name, **kw)

    def _derive(self, axis: int) -> dict:
        out = {}
        B = self.base
        for expo, c in self.monomials.items():
            e = expo[axis]
            if e == 0:
                continue
            coeff = B.mul_c(c, B.embed_int(e))
            if coeff == 0:
                continue
            new = list(expo)
            new[axis] -= 1
            out[tuple(new)] = B.add_c(out.get(tuple(new), 0), coeff)
        return out

    def genus(self) -> int:
        return (self.degree - 1) * (self.degree - 2) // 2

    def _smoothness_bound(self) -> int:
        return self.smoothness_bound

    def _eval_form(self, E: FiniteField, monos: dict, px, py, pz) -> int:
        acc = 0
        for (i, j, k), c in monos.items():
            acc = E.add_c(acc, E.mul_c(E.mul_c(c, px[i]), E.mul_c(py[j], pz[k])))
        return acc

    def _powers(self, E: FiniteField, v: int):
        out = [1]
        for _ in range(self.degree):
            out.append(E.mul_c(out[-1], v))
        return out

    def _projective_points(self, E: FiniteField):
        one = self._powers(E, 1)
        for x in range(E.order):
            px = self._powers(E, x)
            for y in range(E.order):
                yield px, self._powers(E, y), one, (x, y, 1)
        zero = self._powers(E, 0)
        for x in range(E.order):
            yield self._powers(E, x), one, zero, (x, 1, 0)
        yield one, zero, zero, (1, 0, 0)

    def _domain_size(self, E: FiniteField) -> int:
        return E.order ** 2 + E.order + 1

    def _check_budget(self, m: int, budget: int) -> None:
        size = self.q ** (2 * m) + self.q ** m + 1
        if size > budget:
            raise BudgetExceededError(size, budget,
                                      f"point count for {self.name}")

    def _scan_singular(self, m: int, budget: int):
        E = self.extension(m)
        if self._domain_size(E) > budget:
            raise BudgetExceededError(self._domain_size(E), budget,
                                      f"smoothness scan for {self.name}")
        for px, py, pz, pt in self._projective_points(E):
            if self._eval_form(E, self.monomials, px, py, pz) != 0:
                continue
            if all(self._eval_form(E, d, px, py, pz) == 0 for d in self._partials):
                return (m,) + pt
        return None

    def _count(self, m: int, budget: int) -> int:
        E = self.extension(m)
        if self._domain_size(E) > budget:
            raise BudgetExceededError(self._domain_size(E), budget,
                                      f"point count for {self.name}")
        n = 0
        for px, py, pz, _ in self._projective_points(E):
            if self._eval_form(E, self.monomials, px, py, pz) == 0:
                n += 1
        return n


# ---------------------------------------------------------------------------
# free-function API
# ---------------------------------------------------------------------------


def genus_of(model: CurveModel, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Genus of a validated model (raises SingularModelError with a witness)."""
    model.validate(budget)
    return model.genus()


def count_points(model: CurveModel, m: int,
                 budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """#X(F_(q^m)) of the smooth projective model, by exhaustive enumeration."""
    return model.count_points(m, budget)


def count_series(model: CurveModel, M: int,
                 budget: int = DEFAULT_ENUM_BUDGET) -> PointCounts:
    """N_1..N_M as a PointCounts (Weil bound checked on construction)."""
    g = genus_of(model, budget)
    counts = tuple(model.count_points(m, budget) for m in range(1, M + 1))
    return PointCounts(q=model.q, g=g, counts=counts)
