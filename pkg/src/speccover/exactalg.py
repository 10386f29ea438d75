"""Exact arithmetic kernel: rationals, polynomials, binary forms, resultants,
characteristic/minimal polynomials of polynomial matrices, and quotient-ring
elements for certifying facts at non-rational points.

Everything here is exact. There are no floats anywhere; coefficients are
`fractions.Fraction` throughout, and every division is checked.

Conventions used by the whole package:

* `UniPoly` is a dense univariate polynomial over Q, coefficients ascending.
  The variable is called `w` in chart 0 (where w = s/t) and `v` in chart 1
  (v = t/s), but the type itself is variable-agnostic.
* `BinForm` is a homogeneous binary form of a fixed degree in (s, t);
  coefficient i multiplies s^i t^(degree-i).  The zero form keeps its nominal
  degree so that degree bookkeeping never degrades.
* `EtaPoly` is a polynomial in the fiber coordinate eta with `UniPoly`
  coefficients, i.e. an element of Q[w][eta].
* `resultant(f, g)` equals the determinant of the Sylvester matrix of f and g,
  i.e. lc(f)^deg(g) * prod g(alpha) over the roots alpha of f.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from .errors import (
    DegreeError,
    InfiniteOrderError,
    InternalCheckError,
    InvalidPointError,
    ModulusError,
    NotInvertibleError,
    ShapeError,
    UndefinedResultantError,
)

Rat = Fraction


def as_rat(x) -> Fraction:
    """Coerce ints, strings like '2/3', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _fmt_rat(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# univariate polynomials over Q


class UniPoly:
    """Dense univariate polynomial over Q, coefficients ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):  # trailing zeros are stripped
        cs = [as_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def zero(cls) -> UniPoly:
        return cls(())

    @classmethod
    def one(cls) -> UniPoly:
        return cls((1,))

    @classmethod
    def const(cls, c) -> UniPoly:
        return cls((as_rat(c),))

    @classmethod
    def x(cls) -> UniPoly:
        return cls((0, 1))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree, with the zero polynomial reported as -1."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        if not self.coeffs:
            raise DegreeError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = UniPoly.const(other)
        if not isinstance(other, UniPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("UniPoly", self.coeffs))

    def __add__(self, other) -> UniPoly:
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return UniPoly(a)

    __radd__ = __add__

    def __neg__(self) -> UniPoly:
        return UniPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> UniPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> UniPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> UniPoly:
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> UniPoly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = UniPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @staticmethod
    def _coerce(other) -> UniPoly:
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly.const(other)
        raise TypeError(f"cannot combine UniPoly with {other!r}")

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return UniPoly.zero(), self
        quo = [Fraction(0)] * (dq + 1)
        dlead = other.lead
        for k in range(dq, -1, -1):
            c = rem[k + other.degree()] / dlead
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(quo), UniPoly(rem[: other.degree()] if other.degree() > 0 else ())

    def __mod__(self, other: UniPoly) -> UniPoly:
        return self.divmod(other)[1]

    def exact_div(self, other: UniPoly) -> UniPoly:
        q, r = self.divmod(other)
        if not r.is_zero():
            raise DegreeError(f"inexact division: {self} by {other}")
        return q

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        inv = 1 / self.lead
        return UniPoly(tuple(c * inv for c in self.coeffs))

    def derivative(self) -> UniPoly:
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def evaluate(self, x) -> Fraction:
        x = as_rat(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, inner: UniPoly) -> UniPoly:
        """self(inner(w)), exact."""
        acc = UniPoly.zero()
        for c in reversed(self.coeffs):
            acc = acc * inner + UniPoly.const(c)
        return acc

    def shift(self, c) -> UniPoly:
        """Taylor shift: returns p(w + c)."""
        return self.compose(UniPoly((as_rat(c), 1)))

    def str_in(self, var: str) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                term = _fmt_rat(c)
            else:
                mag = "" if abs(c) == 1 else _fmt_rat(abs(c)) + "*"
                if c < 0:
                    mag = "-" + mag
                term = mag + (var if i == 1 else f"{var}^{i}")
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.str_in("w")

    def __repr__(self) -> str:
        return f"UniPoly({list(self.coeffs)!r})"


def _int_primitive(coeffs: list) -> list:
    from math import gcd

    g = 0
    for c in coeffs:
        g = gcd(g, c)
        if g == 1:
            return coeffs
    return [c // g for c in coeffs]


def _to_int_poly(p: UniPoly) -> list:
    from math import lcm

    den = 1
    for c in p.coeffs:
        den = lcm(den, c.denominator)
    return _int_primitive([int(c * den) for c in p.coeffs])


def _int_prem(f: list, g: list) -> list:
    """Pseudo-remainder of trimmed integer coefficient lists, up to units."""
    dg = len(g) - 1
    lc = g[-1]
    rem = list(f)
    while True:
        while rem and rem[-1] == 0:
            rem.pop()
        if not rem or len(rem) - 1 < dg:
            return rem
        lead = rem[-1]
        shift = len(rem) - 1 - dg
        rem = [c * lc for c in rem[:-1]]
        for j in range(dg):
            rem[shift + j] -= lead * g[j]


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q; gcd(0, 0) = 0.

    Runs a primitive pseudo-remainder sequence over the integers, which keeps
    coefficients small where plain Euclid over Q blows up.
    """
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    fa, fb = _to_int_poly(a), _to_int_poly(b)
    if len(fa) < len(fb):
        fa, fb = fb, fa
    while True:
        if len(fb) == 1:
            return UniPoly.one()
        rem = _int_prem(fa, fb)
        if not rem:
            return UniPoly(fb).monic()
        fa, fb = fb, _int_primitive(rem)


def poly_xgcd(a: UniPoly, b: UniPoly) -> tuple[UniPoly, UniPoly, UniPoly]:
    """Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = a, b
    u0, u1 = UniPoly.one(), UniPoly.zero()
    v0, v1 = UniPoly.zero(), UniPoly.one()
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if r0.is_zero():
        return r0, u0, v0
    scale = 1 / r0.lead
    return r0.monic(), u0 * scale, v0 * scale


def squarefree_decompose(f: UniPoly) -> tuple[Fraction, list[tuple[UniPoly, int]]]:
    """Yun's algorithm over Q.

    Returns (unit, [(monic squarefree factor, multiplicity), ...]) with the
    factors pairwise coprime and unit * prod factor^mult == f exactly.
    """
    if f.is_zero():
        raise DegreeError("squarefree decomposition of the zero polynomial")
    unit = f.lead
    g = f.monic()
    out: list[tuple[UniPoly, int]] = []
    if g.degree() > 0:
        gp = g.derivative()
        a0 = poly_gcd(g, gp)
        b = g.exact_div(a0)
        d = gp.exact_div(a0) - b.derivative()
        i = 1
        while b.degree() > 0:
            a = poly_gcd(b, d)
            if a.degree() > 0:
                out.append((a, i))
            b = b.exact_div(a)
            d = d.exact_div(a) - b.derivative()
            i += 1
    check = UniPoly.const(unit)
    for p, m in out:
        check = check * p**m
    if check != f:
        raise InternalCheckError("squarefree decomposition failed to reconstruct input")
    return unit, out


_SYMPY_W = sympy.Symbol("w")


def factor_rational(f: UniPoly) -> tuple[Fraction, list[tuple[UniPoly, int]]]:
    """Irreducible factorization over Q (monic factors, canonical order).

    Backed by sympy for the factor search; the result is verified here by
    exact reconstruction and pairwise-coprimality before being returned.
    """
    if f.is_zero():
        raise DegreeError("factorization of the zero polynomial")
    if f.degree() == 0:
        return f.lead, []
    expr = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) for c in reversed(f.coeffs)],
        _SYMPY_W,
        domain="QQ",
    )
    s_unit, pairs = expr.factor_list()
    s_unit = sympy.Rational(s_unit)
    unit = Fraction(int(s_unit.p), int(s_unit.q))
    factors: list[tuple[UniPoly, int]] = []
    for poly, mult in pairs:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
        q = UniPoly(coeffs)
        unit *= q.lead ** mult
        factors.append((q.monic(), int(mult)))
    factors.sort(key=lambda pm: (pm[0].degree(), pm[0].coeffs))
    check = UniPoly.const(unit)
    for p, m in factors:
        check = check * p**m
    if check != f:
        raise InternalCheckError("irreducible factorization failed to reconstruct input")
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            if poly_gcd(factors[i][0], factors[j][0]).degree() != 0:
                raise InternalCheckError("irreducible factors are not pairwise coprime")
    return unit, factors


def rational_roots(f: UniPoly) -> list[tuple[Fraction, int]]:
    """Rational roots with multiplicities, sorted."""
    _, factors = factor_rational(f)
    roots = [(-p.coeffs[0], m) for p, m in factors if p.degree() == 1]
    roots.sort()
    return roots


# ---------------------------------------------------------------------------
# projective points and binary forms


@dataclass(frozen=True)
class ProjPoint:
    """Rational point [a : b] of the projective line, normalized so that a, b
    are coprime integers and the first nonzero entry is positive."""

    a: int
    b: int

    @classmethod
    def of(cls, a, b) -> ProjPoint:
        a, b = as_rat(a), as_rat(b)
        if a == 0 and b == 0:
            raise InvalidPointError("[0:0] is not a projective point")
        from math import gcd, lcm

        scale = lcm(a.denominator, b.denominator)
        ia, ib = int(a * scale), int(b * scale)
        g = gcd(ia, ib)
        ia, ib = ia // g, ib // g
        lead = ia if ia else ib
        if lead < 0:
            ia, ib = -ia, -ib
        return cls(ia, ib)

    def __str__(self) -> str:
        return f"[{self.a}:{self.b}]"


class BinForm:
    """Homogeneous binary form in (s, t); coefficient i multiplies s^i t^(d-i).

    The zero form carries a nominal degree so that sums and products keep
    exact degree bookkeeping. Arithmetic on mismatched degrees raises.
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, degree: int, coeffs: Iterable = ()):
        if degree < 0:
            raise DegreeError("binary form degree must be >= 0")
        cs = [as_rat(c) for c in coeffs]
        if len(cs) != degree + 1:
            raise ShapeError(
                f"form of degree {degree} needs {degree + 1} coefficients, got {len(cs)}"
            )
        self.degree = degree
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def zero(cls, degree: int) -> BinForm:
        return cls(degree, (0,) * (degree + 1))

    @classmethod
    def const(cls, c) -> BinForm:
        return cls(0, (as_rat(c),))

    @classmethod
    def s(cls) -> BinForm:
        return cls(1, (0, 1))

    @classmethod
    def t(cls) -> BinForm:
        return cls(1, (1, 0))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinForm):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.degree == other.degree
        return self.degree == other.degree and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("BinForm", self.degree, self.coeffs))

    def _check_same_degree(self, other: BinForm):
        if self.degree != other.degree:
            raise DegreeError(
                f"cannot combine forms of degree {self.degree} and {other.degree}"
            )

    def __add__(self, other: BinForm) -> BinForm:
        self._check_same_degree(other)
        return BinForm(self.degree, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: BinForm) -> BinForm:
        self._check_same_degree(other)
        return BinForm(self.degree, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> BinForm:
        return BinForm(self.degree, tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> BinForm:
        if isinstance(other, (int, Fraction)):
            c = as_rat(other)
            return BinForm(self.degree, tuple(c * a for a in self.coeffs))
        if not isinstance(other, BinForm):
            raise TypeError(f"cannot multiply BinForm by {other!r}")
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return BinForm(self.degree + other.degree, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> BinForm:
        if n < 0:
            raise ValueError("negative power of a form")
        out = BinForm.const(1)
        for _ in range(n):
            out = out * self
        return out

    def evaluate(self, s0, t0) -> Fraction:
        s0, t0 = as_rat(s0), as_rat(t0)
        total = Fraction(0)
        for i, c in enumerate(self.coeffs):
            if c:
                total += c * s0**i * t0 ** (self.degree - i)
        return total

    def evaluate_point(self, p: ProjPoint) -> Fraction:
        return self.evaluate(p.a, p.b)

    def dehomogenize(self, chart: int) -> UniPoly:
        """Chart 0: F(w, 1) in w = s/t.  Chart 1: F(1, v) in v = t/s."""
        if chart == 0:
            return UniPoly(self.coeffs)
        if chart == 1:
            return UniPoly(tuple(reversed(self.coeffs)))
        raise ValueError("chart must be 0 or 1")

    def derivative_s(self) -> BinForm:
        if self.degree == 0:
            return BinForm.zero(0)
        return BinForm(self.degree - 1, tuple((i + 1) * self.coeffs[i + 1] for i in range(self.degree)))

    def derivative_t(self) -> BinForm:
        if self.degree == 0:
            return BinForm.zero(0)
        return BinForm(
            self.degree - 1,
            tuple((self.degree - i) * self.coeffs[i] for i in range(self.degree)),
        )

    def str_in(self, u: str, v: str) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            j = self.degree - i
            factors = []
            if i:
                factors.append(u if i == 1 else f"{u}^{i}")
            if j:
                factors.append(v if j == 1 else f"{v}^{j}")
            mono = "*".join(factors)
            if not mono:
                term = _fmt_rat(c)
            else:
                mag = "" if abs(c) == 1 else _fmt_rat(abs(c)) + "*"
                term = ("-" if c < 0 else "") + mag + mono
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.str_in("s", "t")

    def __repr__(self) -> str:
        return f"BinForm({self.degree}, {list(self.coeffs)!r})"


def homogenize(poly: UniPoly, degree: int, chart: int = 0) -> BinForm:
    """Inverse of BinForm.dehomogenize; raises if poly.degree() > degree."""
    if poly.degree() > degree:
        raise DegreeError(
            f"cannot homogenize degree-{poly.degree()} polynomial to form degree {degree}"
        )
    coeffs = [Fraction(0)] * (degree + 1)
    for i, c in enumerate(poly.coeffs):
        if chart == 0:
            coeffs[i] = c
        elif chart == 1:
            coeffs[degree - i] = c
        else:
            raise ValueError("chart must be 0 or 1")
    return BinForm(degree, coeffs)


def vanishing_order(form: BinForm, point: ProjPoint) -> int:
    """Multiplicity of the linear form vanishing at `point` inside `form`."""
    if form.is_zero():
        raise InfiniteOrderError(f"zero form vanishes to infinite order at {point}")
    if point.b == 0:  # [1:0], the zero locus of t
        top = max(i for i, c in enumerate(form.coeffs) if c)
        return form.degree - top
    poly = form.dehomogenize(0)
    w0 = Fraction(point.a, point.b)
    order = 0
    while poly.evaluate(w0) == 0:
        poly = poly.exact_div(UniPoly((-w0, 1)))
        order += 1
    return order


def order_at_modulus(form: BinForm, modulus: UniPoly, chart: int = 0) -> int:
    """Multiplicity of an irreducible chart polynomial inside a form.

    The locus is the zero set of `modulus` in the given affine chart; for
    chart 0 the point [1:0] is invisible (use vanishing_order for it).
    """
    if form.is_zero():
        raise InfiniteOrderError("zero form vanishes to infinite order everywhere")
    if modulus.degree() < 1:
        raise DegreeError("modulus must have degree >= 1")
    poly = form.dehomogenize(chart)
    order = 0
    while not poly.is_zero():
        q, r = poly.divmod(modulus)
        if not r.is_zero():
            break
        poly = q
        order += 1
    return order


# ---------------------------------------------------------------------------
# polynomials in eta over Q[w]


class EtaPoly:
    """Polynomial in the fiber coordinate with UniPoly coefficients, ascending."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, UniPoly):
                cs.append(c)
            else:
                cs.append(UniPoly.const(as_rat(c)))
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[UniPoly, ...] = tuple(cs)

    @classmethod
    def zero(cls) -> EtaPoly:
        return cls(())

    @classmethod
    def one(cls) -> EtaPoly:
        return cls((UniPoly.one(),))

    @classmethod
    def const(cls, p) -> EtaPoly:
        if not isinstance(p, UniPoly):
            p = UniPoly.const(as_rat(p))
        return cls((p,))

    @classmethod
    def eta(cls) -> EtaPoly:
        return cls((UniPoly.zero(), UniPoly.one()))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> UniPoly:
        if not self.coeffs:
            raise DegreeError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, j: int) -> UniPoly:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else UniPoly.zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, EtaPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("EtaPoly", self.coeffs))

    @staticmethod
    def _coerce(other) -> EtaPoly:
        if isinstance(other, EtaPoly):
            return other
        if isinstance(other, (UniPoly, int, Fraction)):
            return EtaPoly.const(other)
        raise TypeError(f"cannot combine EtaPoly with {other!r}")

    def __add__(self, other) -> EtaPoly:
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        out = [self.coeff(i) + other.coeff(i) for i in range(n)]
        return EtaPoly(out)

    __radd__ = __add__

    def __neg__(self) -> EtaPoly:
        return EtaPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> EtaPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> EtaPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> EtaPoly:
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return EtaPoly.zero()
        out = [UniPoly.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
        return EtaPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> EtaPoly:
        if n < 0:
            raise ValueError("negative power")
        out = EtaPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def exact_div(self, other: EtaPoly) -> EtaPoly:
        """Exact division in Q[w][eta]; raises DegreeError if not divisible."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return EtaPoly.zero()
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            raise DegreeError("inexact division: degree too small")
        quo = [UniPoly.zero()] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + other.degree()].exact_div(other.lead)
            quo[k] = c
            if not c.is_zero():
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        if any(not r.is_zero() for r in rem[: other.degree()]):
            raise DegreeError("inexact division: nonzero remainder")
        return EtaPoly(quo)

    def deta(self) -> EtaPoly:
        """Derivative with respect to eta."""
        return EtaPoly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def dw(self) -> EtaPoly:
        """Derivative of every coefficient with respect to the base variable."""
        return EtaPoly(tuple(c.derivative() for c in self.coeffs))

    def at_base(self, w0) -> UniPoly:
        """Evaluate the base variable, leaving a polynomial in eta over Q."""
        w0 = as_rat(w0)
        return UniPoly(tuple(c.evaluate(w0) for c in self.coeffs))

    def eval_poly(self, lam: UniPoly) -> UniPoly:
        """Substitute eta = lam(w); returns an element of Q[w]."""
        acc = UniPoly.zero()
        for c in reversed(self.coeffs):
            acc = acc * lam + c
        return acc

    def content(self) -> UniPoly:
        g = UniPoly.zero()
        for c in self.coeffs:
            g = poly_gcd(g, c)
        return g

    def primitive(self) -> EtaPoly:
        if self.is_zero():
            return self
        c = self.content()
        return EtaPoly(tuple(p.exact_div(c) for p in self.coeffs))

    def scale(self, r) -> EtaPoly:
        r = as_rat(r)
        return EtaPoly(tuple(c * r for c in self.coeffs))

    def str_in(self, base: str, fiber: str) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c.is_zero():
                continue
            mono = fiber if j == 1 else (f"{fiber}^{j}" if j else "")
            if c == UniPoly.one() and mono:
                term = mono
            else:
                cs = c.str_in(base)
                if ("+" in cs or "- " in cs) and mono:
                    cs = f"({cs})"
                term = cs + ("*" + mono if mono else "")
            parts.append(term)
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.str_in("w", "eta")

    def __repr__(self) -> str:
        return f"EtaPoly({list(self.coeffs)!r})"


# ---------------------------------------------------------------------------
# resultants (pseudo-division remainder sequence over any exact ring)


def _pl_trim(cs: list) -> list:
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def _pl_pseudo_rem(f: list, g: list) -> list:
    """lc(g)^(deg f - deg g + 1) * f  mod  g, over a commutative exact ring."""
    dg = len(g) - 1
    lc = g[-1]
    e = len(f) - 1 - dg + 1
    rem = list(f)
    steps = 0
    while len(rem) - 1 >= dg and rem:
        steps += 1
        lead = rem[-1]
        shift = len(rem) - 1 - dg
        new = [c * lc for c in rem[:-1]]
        for j in range(dg):
            if not g[j].is_zero():
                new[shift + j] = new[shift + j] - lead * g[j]
        rem = _pl_trim(new)
    if steps < e and rem:
        factor = lc
        for _ in range(e - steps - 1):
            factor = factor * lc
        rem = [c * factor for c in rem]
    return rem


def resultant_coeffs(fc: Sequence, gc: Sequence):
    """Resultant of two polynomials given as ascending coefficient lists over
    UniPoly or EtaPoly entries.  Equals the Sylvester determinant of (f, g)
    with the convention Res(f, g) = lc(f)^deg(g) * prod g(alpha_i)."""
    f = _pl_trim(list(fc))
    g = _pl_trim(list(gc))
    if not f and not g:
        raise UndefinedResultantError("resultant of two zero polynomials")
    ring = type((f or g)[0])
    if not f or not g:
        return ring.zero()
    df, dg = len(f) - 1, len(g) - 1
    if df == 0:
        out = ring.one()
        for _ in range(dg):
            out = out * f[0]
        return out
    if dg == 0:
        out = ring.one()
        for _ in range(df):
            out = out * g[0]
        return out
    if df < dg:
        r = resultant_coeffs(g, f)
        return -r if (df * dg) % 2 else r
    rem = _pl_pseudo_rem(f, g)
    if not rem:
        return ring.zero()
    e = df - dg + 1
    dr = len(rem) - 1
    sub = resultant_coeffs(g, rem)
    k = dr + e * dg - df
    lc = g[-1]
    for _ in range(k):
        sub = sub.exact_div(lc)
    return -sub if (df * dg) % 2 else sub


def resultant(f: EtaPoly, g: EtaPoly) -> UniPoly:
    """Resultant in eta of two elements of Q[w][eta]; an element of Q[w]."""
    if f.is_zero() and g.is_zero():
        raise UndefinedResultantError("resultant of two zero polynomials")
    if f.is_zero() or g.is_zero():
        return UniPoly.zero()
    out = resultant_coeffs(list(f.coeffs), list(g.coeffs))
    return out


def sylvester_matrix(fc: Sequence, gc: Sequence) -> list[list]:
    """Sylvester matrix (descending-coefficient layout) for cross-checks."""
    f = _pl_trim(list(fc))
    g = _pl_trim(list(gc))
    if not f or not g:
        raise UndefinedResultantError("Sylvester matrix needs two nonzero polynomials")
    ring = type(f[0])
    df, dg = len(f) - 1, len(g) - 1
    n = df + dg
    fdesc = list(reversed(f))
    gdesc = list(reversed(g))
    rows = []
    for i in range(dg):
        row = [ring.zero()] * n
        for j, c in enumerate(fdesc):
            row[i + j] = c
        rows.append(row)
    for i in range(df):
        row = [ring.zero()] * n
        for j, c in enumerate(gdesc):
            row[i + j] = c
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# determinants of EtaPoly matrices

def det_cofactor(mat: list[list[EtaPoly]]) -> EtaPoly:
    """Cofactor expansion with memoization on column subsets."""
    n = len(mat)
    if n == 0 or any(len(row) != n for row in mat):
        raise ShapeError("determinant needs a nonempty square matrix")
    cache: dict[tuple[int, int], EtaPoly] = {}

    def minor(row: int, colmask: int) -> EtaPoly:
        if row == n:
            return EtaPoly.one()
        key = (row, colmask)
        got = cache.get(key)
        if got is not None:
            return got
        total = EtaPoly.zero()
        pos = 0
        for col in range(n):
            if not (colmask >> col) & 1:
                continue
            entry = mat[row][col]
            if not entry.is_zero():
                sub = minor(row + 1, colmask & ~(1 << col))
                term = entry * sub
                total = total + (term if pos % 2 == 0 else -term)
            pos += 1
        cache[key] = total
        return total

    return minor(0, (1 << n) - 1)


def det_bareiss(mat: list[list[EtaPoly]]) -> EtaPoly:
    """Fraction-free Bareiss elimination; exact over Q[w][eta]."""
    n = len(mat)
    if n == 0 or any(len(row) != n for row in mat):
        raise ShapeError("determinant needs a nonempty square matrix")
    m = [list(row) for row in mat]
    sign = 1
    prev = EtaPoly.one()
    for k in range(n - 1):
        if m[k][k].is_zero():
            pivot_row = next((i for i in range(k + 1, n) if not m[i][k].is_zero()), None)
            if pivot_row is None:
                return EtaPoly.zero()
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
            m[i][k] = EtaPoly.zero()
        prev = m[k][k]
    out = m[n - 1][n - 1]
    return -out if sign < 0 else out


def eta_det(mat: list[list[EtaPoly]], method: str = "auto") -> EtaPoly:
    if method == "auto":
        method = "cofactor" if len(mat) <= 6 else "bareiss"
    if method == "cofactor":
        return det_cofactor(mat)
    if method == "bareiss":
        return det_bareiss(mat)
    raise ValueError(f"unknown determinant method {method!r}")


# ---------------------------------------------------------------------------
# matrices over Q[w] and their characteristic / minimal polynomials


class PolyMatrix:
    """Square matrix with UniPoly entries."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence[UniPoly]]):
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ShapeError("PolyMatrix must be square and nonempty")
        fixed = []
        for r in rows:
            fixed.append(tuple(e if isinstance(e, UniPoly) else UniPoly.const(as_rat(e)) for e in r))
        self.n = n
        self.rows: tuple[tuple[UniPoly, ...], ...] = tuple(fixed)

    @classmethod
    def identity(cls, n: int) -> PolyMatrix:
        return cls([[UniPoly.one() if i == j else UniPoly.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> PolyMatrix:
        return cls([[UniPoly.zero()] * n for _ in range(n)])

    def entry(self, i: int, j: int) -> UniPoly:
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, other: PolyMatrix) -> PolyMatrix:
        if self.n != other.n:
            raise ShapeError("matrix size mismatch")
        return PolyMatrix(
            [[self.rows[i][j] + other.rows[i][j] for j in range(self.n)] for i in range(self.n)]
        )

    def __sub__(self, other: PolyMatrix) -> PolyMatrix:
        if self.n != other.n:
            raise ShapeError("matrix size mismatch")
        return PolyMatrix(
            [[self.rows[i][j] - other.rows[i][j] for j in range(self.n)] for i in range(self.n)]
        )

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            if self.n != other.n:
                raise ShapeError("matrix size mismatch")
            n = self.n
            out = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc = UniPoly.zero()
                    for k in range(n):
                        a = self.rows[i][k]
                        if not a.is_zero():
                            acc = acc + a * other.rows[k][j]
                    row.append(acc)
                out.append(row)
            return PolyMatrix(out)
        if isinstance(other, (UniPoly, int, Fraction)):
            p = other if isinstance(other, UniPoly) else UniPoly.const(as_rat(other))
            return PolyMatrix([[e * p for e in row] for row in self.rows])
        raise TypeError(f"cannot multiply PolyMatrix by {other!r}")

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def __repr__(self) -> str:
        body = "; ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows)
        return f"PolyMatrix({body})"


def char_poly_matrix(a: PolyMatrix, method: str = "auto") -> EtaPoly:
    """det(eta * id - A), monic of degree n in eta."""
    n = a.n
    mat = []
    for i in range(n):
        row = []
        for j in range(n):
            entry = a.rows[i][j]
            if i == j:
                row.append(EtaPoly((-entry, UniPoly.one())))
            else:
                row.append(EtaPoly((-entry,)) if not entry.is_zero() else EtaPoly.zero())
        mat.append(row)
    out = eta_det(mat, method=method)
    if out.degree() != n or out.lead != UniPoly.one():
        raise InternalCheckError("characteristic polynomial is not monic of the right degree")
    return out


def _eta_pseudo_rem(f: EtaPoly, g: EtaPoly) -> EtaPoly:
    rem = _pl_pseudo_rem(list(f.coeffs), list(g.coeffs))
    return EtaPoly(rem)


def eta_gcd(f: EtaPoly, g: EtaPoly) -> EtaPoly:
    """Gcd in Q[w][eta] via the subresultant pseudo-remainder sequence.

    Contents are extracted once at the end, not per step, which keeps the
    coefficient growth polynomial.  Result is primitive with monic leading
    UniPoly coefficient (so it is the monic gcd in Q(w)[eta] scaled into
    Q[w][eta]).
    """
    a, b = f.primitive(), g.primitive()
    if a.is_zero():
        a, b = b, a
    if b.is_zero():
        return a if a.is_zero() else a.scale(1 / a.lead.lead)
    if a.degree() < b.degree():
        a, b = b, a
    scale_g, scale_h = UniPoly.one(), UniPoly.one()
    while True:
        if b.degree() == 0:
            # coprime in Q(w)[eta]
            a = EtaPoly.one()
            break
        delta = a.degree() - b.degree()
        rem = _eta_pseudo_rem(a, b)
        a, prev = b, b
        if rem.is_zero():
            break
        div = scale_g * scale_h**delta
        b = EtaPoly(tuple(c.exact_div(div) for c in rem.coeffs))
        scale_g = prev.lead
        if delta == 1:
            scale_h = scale_g
        elif delta > 1:
            scale_h = (scale_g**delta).exact_div(scale_h ** (delta - 1))
    a = a.primitive()
    return a.scale(1 / a.lead.lead)


def min_poly_matrix(a: PolyMatrix, method: str = "auto") -> EtaPoly:
    """Squarefree part of the characteristic polynomial, verified to
    annihilate the matrix exactly."""
    char = char_poly_matrix(a, method=method)
    g = eta_gcd(char, char.deta())
    if g.degree() == 0:
        minimal = char
    else:
        minimal = (char * g.lead).exact_div(g)
    if minimal.lead != UniPoly.one():
        raise InternalCheckError("minimal polynomial came out non-monic")
    # exact annihilation check: evaluate via Horner at the matrix
    acc = PolyMatrix.zeros(a.n)
    ident = PolyMatrix.identity(a.n)
    for c in reversed(minimal.coeffs):
        acc = acc * a + ident * c
    if not acc.is_zero():
        raise InternalCheckError(
            f"minimal polynomial fails to annihilate the matrix: got {acc!r}"
        )
    return minimal


# ---------------------------------------------------------------------------
# quotient-ring elements over Q[w]/(modulus)


@dataclass(frozen=True)
class ExtElem:
    """Element of Q[w]/(modulus); modulus monic of degree >= 1.

    For irreducible moduli this is a number field; the package only builds
    them with irreducible moduli, which makes `inv` total on nonzero elements.
    """

    modulus: UniPoly
    value: UniPoly

    @classmethod
    def make(cls, value: UniPoly, modulus: UniPoly) -> ExtElem:
        if modulus.degree() < 1:
            raise ModulusError("modulus must have degree >= 1")
        if modulus.lead != 1:
            modulus = modulus.monic()
        return cls(modulus, value % modulus)

    def _check(self, other: ExtElem):
        if self.modulus != other.modulus:
            raise ModulusError("mixed moduli in quotient-ring arithmetic")

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __add__(self, other) -> ExtElem:
        other = self._coerce(other)
        self._check(other)
        return ExtElem(self.modulus, (self.value + other.value) % self.modulus)

    __radd__ = __add__

    def __neg__(self) -> ExtElem:
        return ExtElem(self.modulus, -self.value % self.modulus)

    def __sub__(self, other) -> ExtElem:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> ExtElem:
        return self._coerce(other) - self

    def __mul__(self, other) -> ExtElem:
        other = self._coerce(other)
        self._check(other)
        return ExtElem(self.modulus, (self.value * other.value) % self.modulus)

    __rmul__ = __mul__

    def _coerce(self, other) -> ExtElem:
        if isinstance(other, ExtElem):
            return other
        if isinstance(other, (int, Fraction)):
            return ExtElem(self.modulus, UniPoly.const(as_rat(other)))
        if isinstance(other, UniPoly):
            return ExtElem(self.modulus, other % self.modulus)
        raise TypeError(f"cannot combine ExtElem with {other!r}")

    def inv(self) -> ExtElem:
        if self.is_zero():
            raise NotInvertibleError("zero is not invertible")
        g, u, _ = poly_xgcd(self.value, self.modulus)
        if g.degree() != 0:
            raise NotInvertibleError(
                f"{self.value} shares factor {g} with modulus {self.modulus}"
            )
        return ExtElem(self.modulus, u % self.modulus)

    def __truediv__(self, other) -> ExtElem:
        other = self._coerce(other)
        return self * other.inv()

    def __str__(self) -> str:
        return f"({self.value.str_in('w')} mod {self.modulus.str_in('w')})"


def ext_reduce(x: ExtElem, y: ExtElem | None, op: str) -> ExtElem:
    """Quotient-ring arithmetic entry point: op in {'add', 'mul', 'inv'}."""
    if op == "add":
        if y is None:
            raise ValueError("add needs two operands")
        return x + y
    if op == "mul":
        if y is None:
            raise ValueError("mul needs two operands")
        return x * y
    if op == "inv":
        return x.inv()
    raise ValueError(f"unknown quotient-ring operation {op!r}")


def reduce_mod(p: UniPoly, modulus: UniPoly) -> ExtElem:
    return ExtElem.make(p, modulus)


# polynomials in eta over a residue field K = Q[w]/(p): plain lists of ExtElem


def kpoly_trim(cs: list[ExtElem]) -> list[ExtElem]:
    while cs and cs[-1].is_zero():
        cs.pop()
    return cs


def kpoly_from_etapoly(f: EtaPoly, modulus: UniPoly) -> list[ExtElem]:
    return kpoly_trim([reduce_mod(c, modulus) for c in f.coeffs])


def kpoly_gcd(a: list[ExtElem], b: list[ExtElem]) -> list[ExtElem]:
    """Monic gcd of eta-polynomials over the residue field."""
    a, b = kpoly_trim(list(a)), kpoly_trim(list(b))
    while b:
        # a mod b
        rem = list(a)
        lb = b[-1].inv()
        while len(rem) >= len(b):
            c = rem[-1] * lb
            shift = len(rem) - len(b)
            for j in range(len(b)):
                rem[shift + j] = rem[shift + j] - c * b[j]
            rem.pop()
            rem = kpoly_trim(rem)
            if not rem:
                break
        a, b = b, rem
    if a:
        la = a[-1].inv()
        a = [c * la for c in a]
    return a


def kpoly_eval(cs: Sequence[ExtElem], x: ExtElem) -> ExtElem:
    acc = ExtElem(x.modulus, UniPoly.zero())
    for c in reversed(list(cs)):
        acc = acc * x + c
    return acc
