"""Spectral curves of the induced twisted endomorphism.

Multiplication by a decomposed section, pushed down to the base, is a matrix
of binary forms.  This module extracts its characteristic and annihilating
data as honest homogeneous objects, locates the singular points of the curve
those cut out, and carries the specialized double- and triple-cover
singularity criteria.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .covers import SectionData, make_double_cover, mult_matrix
from .errors import (
    DegreeError,
    InternalCheckError,
    NonDepressedCubicError,
    NonReducedCurveError,
    PullbackSectionError,
    ShapeError,
    SingularityNotRepresentableError,
)
from .exactalg import (
    BinForm,
    EtaPoly,
    ExtElem,
    ProjPoint,
    UniPoly,
    char_poly_matrix,
    eta_gcd,
    factor_rational,
    homogenize,
    kpoly_from_etapoly,
    kpoly_gcd,
    kpoly_trim,
    min_poly_matrix,
    poly_gcd,
    rational_roots,
    reduce_mod,
    resultant,
    vanishing_order,
)


@dataclass(frozen=True)
class EtaForm:
    """Monomial-graded polynomial in the fiber coordinate eta.

    The coefficient of eta^j is a binary form of degree (n - j) * twist,
    where n is the eta-degree; a point of the total space of O(twist) over
    [s0:t0] can be substituted exactly.
    """

    twist: int
    coeffs: tuple

    def __init__(self, twist: int, coeffs: Sequence[BinForm]):
        coeffs = tuple(coeffs)
        if not coeffs or coeffs[-1].is_zero():
            raise ShapeError("leading eta coefficient must be nonzero")
        n = len(coeffs) - 1
        for j, c in enumerate(coeffs):
            if c.degree != (n - j) * twist:
                raise DegreeError(
                    f"eta^{j} coefficient has degree {c.degree}, expected {(n - j) * twist}"
                )
        object.__setattr__(self, "twist", int(twist))
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_chart(cls, poly: EtaPoly, twist: int, chart: int) -> EtaForm:
        n = poly.degree()
        if n < 0:
            raise ShapeError("cannot homogenize the zero polynomial")
        coeffs = []
        for j in range(n + 1):
            coeffs.append(homogenize(poly.coeff(j), (n - j) * twist, chart))
        return cls(twist, coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, j: int) -> BinForm:
        n = self.degree
        if 0 <= j <= n:
            return self.coeffs[j]
        return BinForm.zero(max((n - j) * self.twist, 0))

    def is_monic(self) -> bool:
        return self.coeffs[-1] == BinForm.const(1)

    def dehomogenize(self, chart: int) -> EtaPoly:
        return EtaPoly([c.dehomogenize(chart) for c in self.coeffs])

    def evaluate(self, s0, t0, eta0) -> Fraction:
        total = Fraction(0)
        power = Fraction(1)
        for c in self.coeffs:
            total += c.evaluate(s0, t0) * power
            power *= Fraction(eta0)
        return total

    def eta_derivative(self) -> EtaForm:
        if self.degree == 0:
            raise DegreeError("derivative of an eta-constant is not a valid form here")
        coeffs = [self.coeffs[j + 1] * (j + 1) for j in range(self.degree)]
        return EtaForm(self.twist, coeffs)

    def __mul__(self, other: EtaForm) -> EtaForm:
        if self.twist != other.twist:
            raise DegreeError("eta forms carry different twists")
        n, m = self.degree, other.degree
        out = [BinForm.zero((n + m - j) * self.twist) for j in range(n + m + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return EtaForm(self.twist, out)

    def __pow__(self, k: int) -> EtaForm:
        if k < 1:
            raise DegreeError("only positive powers are meaningful for eta forms")
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def str_in(self, u: str, v: str, fiber: str) -> str:
        parts = []
        for j in range(self.degree, -1, -1):
            c = self.coeff(j)
            if c.is_zero():
                continue
            if j == 0:
                parts.append(f"({c.str_in(u, v)})")
            elif c == BinForm.const(1):
                parts.append(fiber if j == 1 else f"{fiber}^{j}")
            else:
                head = f"({c.str_in(u, v)})*{fiber}"
                parts.append(head if j == 1 else f"{head}^{j}")
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.str_in("s", "t", "eta")


@dataclass(frozen=True)
class CharData:
    """Characteristic data of the induced endomorphism.

    ``elementary[i-1]`` is the i-th elementary symmetric function of the
    fiber eigenvalues, a form of degree i*twist; the polynomial itself uses
    the signed versions.
    """

    rank: int
    twist: int
    elementary: tuple

    def __init__(self, rank: int, twist: int, elementary: Sequence[BinForm]):
        elementary = tuple(elementary)
        if len(elementary) != rank:
            raise ShapeError(f"need {rank} elementary forms, got {len(elementary)}")
        for i, e in enumerate(elementary, start=1):
            if e.degree != i * twist:
                raise DegreeError(
                    f"e_{i} has degree {e.degree}, expected {i * twist}"
                )
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "twist", int(twist))
        object.__setattr__(self, "elementary", elementary)

    def signed_coefficient(self, i: int) -> BinForm:
        """Coefficient of eta^(rank-i) in the characteristic polynomial."""
        e = self.elementary[i - 1]
        return e if i % 2 == 0 else -e

    def char_form(self) -> EtaForm:
        r, d = self.rank, self.twist
        coeffs = [BinForm.zero((r - j) * d) for j in range(r)] + [BinForm.const(1)]
        for i in range(1, r + 1):
            coeffs[r - i] = self.signed_coefficient(i)
        return EtaForm(d, coeffs)


@dataclass(frozen=True)
class SpectralCurve:
    """Curve data: characteristic polynomial plus its reduced part.

    ``integral`` means certified integral; False is "not certified", not a
    proof of reducibility.
    """

    char: CharData
    annihilating: EtaForm
    integral: bool = False


@dataclass(frozen=True)
class SingularPoint:
    """A certified singular point of the reduced curve.

    Rational base points are stored as projective points; conjugate orbits
    carry the monic irreducible minimal polynomial of the base coordinate on
    the chart where it was found (always chart 0, since the point at
    infinity is rational).  The eta value lives in the matching residue
    field.
    """

    chart: int
    point: ProjPoint = None
    modulus: UniPoly = None
    eta: Union[Fraction, ExtElem] = Fraction(0)
    certificate: str = "jacobian"

    def is_rational(self) -> bool:
        return self.point is not None

    def locus_key(self):
        """Canonical sort/set key: chart, factor degree, coefficients, eta."""
        if self.point is not None:
            if self.point.b != 0:
                base = (0, 1, (Fraction(self.point.a, self.point.b),))
            else:
                base = (1, 1, (Fraction(0),))
        else:
            base = (0, self.modulus.degree(), tuple(self.modulus.coeffs))
        if isinstance(self.eta, ExtElem):
            eta_key = (1, tuple(self.eta.value.coeffs))
        else:
            eta_key = (0, (Fraction(self.eta),))
        return base + (eta_key,)

    def __str__(self) -> str:
        if self.point is not None:
            where = str(self.point)
        else:
            where = f"{{{self.modulus.str_in('w')} = 0}}"
        if isinstance(self.eta, ExtElem):
            eta = self.eta.value.str_in("w")
        else:
            eta = str(self.eta)
        return f"({where}, eta = {eta})"


@dataclass(frozen=True)
class TripleTestResult:
    status: str  # smooth | singular-case-a | singular-case-b
    point: SingularPoint = None


# ---------------------------------------------------------------------------
# characteristic and annihilating data


def _homogenized_eta(poly: EtaPoly, twist: int, chart: int, what: str) -> EtaForm:
    try:
        return EtaForm.from_chart(poly, twist, chart)
    except DegreeError as exc:
        raise InternalCheckError(
            f"{what} does not fit its degree pattern on chart {chart}: {exc}"
        )


def invariant_sections(sec: SectionData) -> CharData:
    """Characteristic coefficients of the pushed-forward multiplication map.

    Computed independently on both affine charts; the two homogenizations
    must agree form by form.
    """
    r = sec.cover.degree
    d = sec.twist_degree
    forms = []
    for chart in (0, 1):
        cp = char_poly_matrix(mult_matrix(sec, chart))
        forms.append(_homogenized_eta(cp, d, chart, "characteristic polynomial"))
    if forms[0].coeffs != forms[1].coeffs:
        raise InternalCheckError("charts disagree on the characteristic polynomial")
    char = forms[0]
    elementary = []
    for i in range(1, r + 1):
        c = char.coeff(r - i)
        elementary.append(c if i % 2 == 0 else -c)
    return CharData(r, d, elementary)


def annihilating_poly(sec: SectionData) -> EtaForm:
    """Reduced (squarefree) part of the characteristic polynomial."""
    d = sec.twist_degree
    forms = []
    for chart in (0, 1):
        mp = min_poly_matrix(mult_matrix(sec, chart))
        forms.append(_homogenized_eta(mp, d, chart, "annihilating polynomial"))
    if forms[0].coeffs != forms[1].coeffs:
        raise InternalCheckError("charts disagree on the annihilating polynomial")
    return forms[0]


def spectral_curve(sec: SectionData) -> SpectralCurve:
    """Bundle the characteristic data with its reduced part.

    Rank-1 input always gives the graph of a section, which is integral;
    otherwise the integrality flag starts out uncertified.
    """
    char = invariant_sections(sec)
    annih = annihilating_poly(sec)
    quotient = char.char_form().dehomogenize(0)
    reduced = annih.dehomogenize(0)
    try:
        while quotient.degree() > 0:
            quotient = quotient.exact_div(reduced)
    except DegreeError:
        raise InternalCheckError("annihilating polynomial does not divide f")
    if quotient != EtaPoly.one():
        raise InternalCheckError("annihilating polynomial does not divide f")
    return SpectralCurve(char, annih, integral=(char.rank == 1))


# ---------------------------------------------------------------------------
# discriminants


def eta_discriminant(form: EtaForm) -> BinForm:
    """Resultant of the form with its eta-derivative, as a binary form.

    Both charts are computed and homogenized to degree n(n-1)*twist; they
    must agree.
    """
    n = form.degree
    if n < 1:
        raise DegreeError("discriminant needs eta-degree at least 1")
    target = n * (n - 1) * form.twist
    out = []
    for chart in (0, 1):
        f = form.dehomogenize(chart)
        res = resultant(f, f.deta())
        try:
            out.append(homogenize(res, target, chart))
        except DegreeError as exc:
            raise InternalCheckError(f"discriminant overflows its degree: {exc}")
    if out[0] != out[1]:
        raise InternalCheckError("charts disagree on the discriminant")
    return out[0]


def discriminant_eta(curve: SpectralCurve) -> BinForm:
    return eta_discriminant(curve.annihilating)


def cubic_delta(a: BinForm, b: BinForm) -> BinForm:
    """The combination 4a^3 + 27b^2 for a depressed cubic eta^3 + a eta + b."""
    if 3 * a.degree != 2 * b.degree:
        raise DegreeError(
            f"degrees ({a.degree}, {b.degree}) do not fit a depressed cubic"
        )
    return a**3 * 4 + b**2 * 27


def depressed_cubic_parts(form: EtaForm):
    """Shift a monic cubic to kill its eta^2 term.

    Returns (shift, a, b) with the original eta equal to the depressed one
    plus shift, and the depressed polynomial equal to eta^3 + a eta + b.
    """
    if form.degree != 3 or not form.is_monic():
        raise DegreeError("need a monic cubic in eta")
    c2, c1, c0 = form.coeff(2), form.coeff(1), form.coeff(0)
    third = Fraction(1, 3)
    shift = c2 * (-third)
    a = c1 - c2 * c2 * third
    b = c0 - c1 * c2 * third + c2**3 * Fraction(2, 27)
    return shift, a, b


# ---------------------------------------------------------------------------
# singular locus


def _local_order(h: UniPoly, w0: Fraction):
    """Multiplicity of w0 as a root; None stands for infinite order."""
    if h.is_zero():
        return None
    order = 0
    while h.evaluate(w0) == 0:
        h, rem = h.divmod(UniPoly((-w0, 1)))
        assert rem.is_zero()
        order += 1
    return order


def _modulus_order(h: UniPoly, p: UniPoly):
    if h.is_zero():
        return None
    order = 0
    while (h % p).is_zero():
        h = h.exact_div(p)
        order += 1
    return order


def _at_least(order, k: int) -> bool:
    return order is None or order >= k


def _kpoly_divmod(a: list, b: list):
    """Long division in K[eta]; the divisor must have invertible lead."""
    a = list(a)
    inv_lead = b[-1].inv()
    zero = reduce_mod(UniPoly.zero(), b[-1].modulus)
    quot = [zero] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        if a[-1].value.is_zero():
            a.pop()
            continue
        shift = len(a) - len(b)
        factor = a[-1] * inv_lead
        quot[shift] = factor
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - factor * c
        a.pop()
    return kpoly_trim(quot), kpoly_trim(a)


def _kpoly_derivative(a: list) -> list:
    return kpoly_trim([a[j] * j for j in range(1, len(a))])


def _rational_singular_etas(f: EtaPoly, w0: Fraction) -> list:
    """Exact eta values where the curve is singular above a rational w0."""
    at = poly_gcd(f.at_base(w0), f.deta().at_base(w0))
    at = poly_gcd(at, f.dw().at_base(w0))
    if at.degree() <= 0:
        return []
    roots = rational_roots(at)
    if sum(m for _, m in roots) < at.degree():
        raise SingularityNotRepresentableError(
            f"singular eta values over w = {w0} generate a field extension"
        )
    return [root for root, _ in roots]


def _extension_singular_eta(f: EtaPoly, p: UniPoly):
    """Eta value (in the residue field of p) where the curve is singular.

    Returns None when the Jacobian refutes the candidate.  Only a single
    residue-field value can be represented; genuinely split singular fibers
    over one conjugacy class raise instead of guessing.
    """
    fk = kpoly_from_etapoly(f, p)
    dk = kpoly_from_etapoly(f.deta(), p)
    wk = kpoly_from_etapoly(f.dw(), p)
    g = kpoly_gcd(kpoly_gcd(fk, dk), wk)
    if len(g) <= 1:
        return None
    if len(g) > 2:
        h = kpoly_gcd(g, _kpoly_derivative(g))
        if len(h) > 1:
            g, rem = _kpoly_divmod(g, h)
            if rem:
                raise InternalCheckError("squarefree reduction left a remainder")
    if len(g) != 2:
        raise SingularityNotRepresentableError(
            f"several singular eta values over the divisor {p.str_in('w')} = 0"
        )
    return -g[0] * g[1].inv()


def singular_locus(curve: SpectralCurve) -> list:
    """All singular points of the curve cut out by the reduced polynomial.

    Candidates are the base loci where the eta-discriminant vanishes to
    order at least two; each is then certified or refuted by evaluating the
    polynomial and both partial derivatives exactly, over the rationals or
    over the residue field of the locus.
    """
    if all(e.is_zero() for e in curve.char.elementary):
        raise NonReducedCurveError(
            "the zero section cuts a non-reduced scheme; nothing to report"
        )
    form = curve.annihilating
    f0 = form.dehomogenize(0)
    if eta_gcd(f0, f0.deta()).degree() > 0:
        raise NonReducedCurveError("polynomial is not squarefree; reduce it first")
    n = form.degree
    if n == 1:
        return []
    found = []
    for chart in (0, 1):
        f = form.dehomogenize(chart)
        disc = resultant(f, f.deta())
        if disc.is_zero():
            raise NonReducedCurveError("identically vanishing discriminant")
        _, factors = factor_rational(disc)
        for p, mult in factors:
            if mult < 2:
                continue
            if chart == 1 and p != UniPoly.x():
                continue  # only the point at infinity is new on the second chart
            if p.degree() == 1:
                w0 = -p.coeffs[0]
                point = ProjPoint.of(w0, 1) if chart == 0 else ProjPoint.of(1, w0)
                for eta in _rational_singular_etas(f, w0):
                    found.append(SingularPoint(chart, point=point, eta=eta))
            else:
                eta = _extension_singular_eta(f, p)
                if eta is not None:
                    found.append(SingularPoint(0, modulus=p, eta=eta))
    found.sort(key=lambda sp: sp.locus_key())
    return found


# ---------------------------------------------------------------------------
# specialized criteria


def triple_singularity_test(a, b, locus, chart: int = 0) -> TripleTestResult:
    """Local singularity test for a depressed cubic eta^3 + a eta + b.

    ``a`` and ``b`` are chart polynomials (binary forms are dehomogenized on
    the given chart); ``locus`` is a rational base value or a monic
    irreducible polynomial in the chart coordinate.  The curve is singular
    above the locus exactly when either a vanishes there and b doubly so
    (then eta = 0), or a does not vanish but 4a^3 + 27b^2 doubly does (then
    eta = -3b/2a).
    """
    if isinstance(a, BinForm):
        a = a.dehomogenize(chart)
    if isinstance(b, BinForm):
        b = b.dehomogenize(chart)
    if isinstance(locus, UniPoly):
        if locus.degree() == 1:
            return triple_singularity_test(a, b, -locus.coeffs[0], chart)
        order_a = _modulus_order(a, locus)
        if _at_least(order_a, 1):
            if _at_least(_modulus_order(b, locus), 2):
                eta = reduce_mod(UniPoly.zero(), locus)
                pt = SingularPoint(0, modulus=locus, eta=eta, certificate="lemma-case-a")
                return TripleTestResult("singular-case-a", pt)
            return TripleTestResult("smooth")
        delta = a**3 * 4 + b**2 * 27
        if _at_least(_modulus_order(delta, locus), 2):
            eta = reduce_mod(b * -3, locus) * reduce_mod(a * 2, locus).inv()
            pt = SingularPoint(0, modulus=locus, eta=eta, certificate="lemma-case-b")
            return TripleTestResult("singular-case-b", pt)
        return TripleTestResult("smooth")
    w0 = Fraction(locus)
    point = ProjPoint.of(w0, 1) if chart == 0 else ProjPoint.of(1, w0)
    order_a = _local_order(a, w0)
    if _at_least(order_a, 1):
        if _at_least(_local_order(b, w0), 2):
            pt = SingularPoint(chart, point=point, eta=Fraction(0), certificate="lemma-case-a")
            return TripleTestResult("singular-case-a", pt)
        return TripleTestResult("smooth")
    delta = a**3 * 4 + b**2 * 27
    if _at_least(_local_order(delta, w0), 2):
        eta = Fraction(-3) * b.evaluate(w0) / (2 * a.evaluate(w0))
        pt = SingularPoint(chart, point=point, eta=eta, certificate="lemma-case-b")
        return TripleTestResult("singular-case-b", pt)
    return TripleTestResult("smooth")


def triple_test_cubic(cubic: EtaPoly, locus, chart: int = 0) -> TripleTestResult:
    """Entry point for a full monic cubic chart polynomial.

    Refuses cubics that still carry an eta^2 term; complete the cube first
    (depressed_cubic_parts does this at the level of forms).
    """
    if cubic.degree() != 3 or cubic.lead != UniPoly.one():
        raise DegreeError("need a monic cubic in eta")
    if not cubic.coeff(2).is_zero():
        raise NonDepressedCubicError("eta^2 coefficient is nonzero; complete the cube")
    return triple_singularity_test(cubic.coeff(1), cubic.coeff(0), locus, chart)


def double_cover_singularities(f: BinForm, g: BinForm, branch: BinForm) -> list:
    """Predicted singular set of (eta - f)^2 - branch * g^2.

    The points are the zeros of g, each at height eta = f; the prediction is
    cross-checked against the Jacobian search before being returned.
    """
    if g.is_zero():
        raise PullbackSectionError("g = 0 gives a scalar field; nothing to predict")
    if branch.is_zero() or branch.degree % 2 != 0:
        raise DegreeError("branch form must be nonzero of even degree")
    if f.degree != g.degree + branch.degree // 2:
        raise DegreeError("degrees of f, g, branch are inconsistent")
    b0 = branch.dehomogenize(0)
    if branch.degree > 0 and vanishing_order(branch, ProjPoint.of(1, 0)) > 1:
        raise ShapeError("branch form must be squarefree")
    if b0.degree() > 0 and any(m > 1 for _, m in factor_rational(b0)[1]):
        raise ShapeError("branch form must be squarefree")

    predicted = []
    g0 = g.dehomogenize(0)
    if g0.degree() < g.degree:  # the missing degree sits at [1:0]
        eta = f.dehomogenize(1).evaluate(Fraction(0))
        predicted.append(
            SingularPoint(1, point=ProjPoint.of(1, 0), eta=eta, certificate="prop-gen-double")
        )
    if g0.degree() > 0:
        for p, _ in factor_rational(g0)[1]:
            if p.degree() == 1:
                w0 = -p.coeffs[0]
                eta = f.dehomogenize(0).evaluate(w0)
                predicted.append(
                    SingularPoint(
                        0, point=ProjPoint.of(w0, 1), eta=eta, certificate="prop-gen-double"
                    )
                )
            else:
                eta = reduce_mod(f.dehomogenize(0), p)
                predicted.append(
                    SingularPoint(0, modulus=p, eta=eta, certificate="prop-gen-double")
                )
    predicted.sort(key=lambda sp: sp.locus_key())

    d = f.degree
    cover = make_double_cover(branch)
    sec = SectionData(cover, d, {0: f, 1: g})
    certified = singular_locus(spectral_curve(sec))
    if [sp.locus_key() for sp in certified] != [sp.locus_key() for sp in predicted]:
        raise InternalCheckError(
            "predicted singular set disagrees with the Jacobian search"
        )
    return predicted


def arithmetic_genus(r: int, d: int) -> int:
    """Arithmetic genus of an integral spectral curve of rank r, twist d."""
    r, d = int(r), int(d)
    if r < 1 or d < 1:
        raise DegreeError("need r >= 1 and d >= 1")
    return r * (r - 1) * d // 2 - r + 1
