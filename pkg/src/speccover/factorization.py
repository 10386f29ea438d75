"""Detecting when a section factors through an intermediate cover.

Over the standard cyclic cover the character support of a section decides
everything: the section is pulled back from the quotient by the subgroup
generated by the support, the reduced curve equation lives on that quotient,
and the full equation is an exact power of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .covers import SectionData, is_standard_cyclic, make_standard_cyclic
from .errors import InternalCheckError, UnsupportedCoverError
from .exactalg import ProjPoint
from .spectral import SpectralCurve, annihilating_poly, invariant_sections, spectral_curve

PULLBACK = "pullback"
BIRATIONAL = "birational"
PROPER = "proper-factorization"


@dataclass(frozen=True)
class FactorizationReport:
    """How multiplication by the section sits over the base.

    ``subcover_index`` is the degree with which the source wraps the reduced
    curve; ``quotient_degree`` is the degree of the intermediate cover that
    carries the factored section ``tau``.
    """

    subcover_index: int
    quotient_degree: int
    tau: SectionData
    verdict: str

    def is_birational(self) -> bool:
        return self.subcover_index == 1


@dataclass(frozen=True)
class BirationalityVerdict:
    kind: str
    justification: str
    tau: SectionData = None
    witness_base: Fraction = None
    sampling_complete: bool = True


def _require_standard(sec: SectionData) -> int:
    if not is_standard_cyclic(sec.cover):
        raise UnsupportedCoverError(
            "factorization is computed for the standard cyclic cover only"
        )
    return sec.cover.degree


def intermediate_factorization(sec: SectionData) -> FactorizationReport:
    """Factor the section through the smallest cover that carries it.

    The subcover index is gcd(r, support); the factored section tau keeps
    the same twist and reads off every g-th component.  Two exact identities
    are checked before returning: tau re-expands to the original section,
    and the full characteristic polynomial is the g-th power of tau's.
    """
    r = _require_standard(sec)
    support = [rho[0] for rho in sec.components if rho and rho[0] != 0]
    g = math.gcd(r, *support) if support else r
    r_prime = r // g
    quotient = make_standard_cyclic(r_prime)
    comps = {}
    for rho, form in sec.components.items():
        k = rho[0] if rho else 0
        if k % g != 0:
            raise InternalCheckError("support is not divisible by its own gcd")
        comps[k // g] = form
    tau = SectionData(quotient, sec.twist_degree, comps)

    pulled = {}
    for rho, form in tau.components.items():
        k = rho[0] if rho else 0
        pulled[k * g] = form
    if SectionData(sec.cover, sec.twist_degree, pulled) != sec:
        raise InternalCheckError("pulled-back tau does not reproduce the section")

    char = invariant_sections(sec).char_form()
    reduced = annihilating_poly(sec)
    if (reduced**g).coeffs != char.coeffs:
        raise InternalCheckError(
            "characteristic polynomial is not the expected power of the reduced one"
        )
    if reduced.degree != r_prime:
        raise InternalCheckError("reduced degree disagrees with the support gcd")

    if g == r:
        verdict = PULLBACK
    elif g == 1:
        verdict = BIRATIONAL
    else:
        verdict = PROPER
    return FactorizationReport(g, r_prime, tau, verdict)


def eval_spectral_point(sec: SectionData, x: ProjPoint):
    """Image of a source point on the curve: (base point, fiber value).

    The fiber value follows the chart conventions: it is the section's value
    at the point divided by the chart trivialization, chart 0 when the base
    point has a nonzero second coordinate and chart 1 otherwise.
    """
    r = _require_standard(sec)
    d = sec.twist_degree
    x0, y0 = Fraction(x.a), Fraction(x.b)
    base = ProjPoint.of(x0**r, y0**r)
    sigma = Fraction(0)
    for rho, form in sec.components.items():
        k = rho[0] if rho else 0
        xi = x0**k * y0 ** (r - k) if k else Fraction(1)
        sigma += xi * form.evaluate(x0**r, y0**r)
    scale = y0 ** (r * d) if y0 != 0 else x0 ** (r * d)
    eta = sigma / scale
    check = invariant_sections(sec).char_form()
    chart = 0 if y0 != 0 else 1
    w0 = Fraction(base.a, base.b) if chart == 0 else Fraction(base.b, base.a)
    if check.dehomogenize(chart).at_base(w0).evaluate(eta) != 0:
        raise InternalCheckError("spectral point fails its own curve equation")
    return base, eta


def _distinct_fiber_base(curve: SpectralCurve):
    """A rational base value where the fiber values are pairwise distinct.

    Scans a fixed small list; returns None when every sample is ramified,
    which callers must report as incomplete sampling rather than a verdict.
    """
    from .exactalg import resultant

    f = curve.annihilating.dehomogenize(0)
    disc = resultant(f, f.deta())
    for k in range(5):
        w0 = Fraction(k)
        if disc.evaluate(w0) != 0:
            return w0
    return None


def birationality_verdict(sec: SectionData) -> BirationalityVerdict:
    """Classify the induced map from the source onto the curve."""
    report = intermediate_factorization(sec)
    if report.verdict == PULLBACK:
        if sec.is_zero():
            note = "the zero section gives the zero field"
        else:
            note = "multiplication acts as the scalar h_0"
        return BirationalityVerdict(PULLBACK, note, tau=report.tau)
    if report.verdict == BIRATIONAL:
        base = _distinct_fiber_base(spectral_curve(sec))
        if base is None:
            return BirationalityVerdict(
                BIRATIONAL,
                "support gcd is 1; no unramified sample point found",
                witness_base=None,
                sampling_complete=False,
            )
        return BirationalityVerdict(
            BIRATIONAL,
            f"support gcd is 1; fiber values are distinct over w = {base}",
            witness_base=base,
        )
    return BirationalityVerdict(
        PROPER,
        f"section factors through the degree-{report.quotient_degree} cover",
        tau=report.tau,
    )
