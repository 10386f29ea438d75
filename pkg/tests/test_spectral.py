"""Tests for curve extraction, discriminants, and singularity detection."""

from fractions import Fraction

import pytest

from conftest import F, bf, char_poly_by_elimination, ep, rand_binform, rng_for, up
from speccover.covers import SectionData, decompose_section, make_cyclic_triple, make_standard_cyclic
from speccover.errors import (
    DegreeError,
    NonDepressedCubicError,
    NonReducedCurveError,
    PullbackSectionError,
    ShapeError,
    SingularityNotRepresentableError,
)
from speccover.exactalg import BinForm, ExtElem, ProjPoint, UniPoly
from speccover.spectral import (
    CharData,
    EtaForm,
    SingularPoint,
    SpectralCurve,
    annihilating_poly,
    arithmetic_genus,
    cubic_delta,
    depressed_cubic_parts,
    discriminant_eta,
    double_cover_singularities,
    eta_discriminant,
    invariant_sections,
    singular_locus,
    spectral_curve,
    triple_singularity_test,
    triple_test_cubic,
)

S, T = BinForm.s(), BinForm.t()


def section(r, d, comps):
    return SectionData(make_standard_cyclic(r), d, comps)


def conic_form(f: BinForm) -> EtaForm:
    d = f.degree + 1
    return EtaForm(d, [-(S * T * f * f), BinForm.zero(d), BinForm.const(1)])


def point_set(points):
    return {sp.locus_key() for sp in points}


# ---------------------------------------------------------------------------
# characteristic data


def test_eta_form_degree_checks():
    with pytest.raises(DegreeError):
        EtaForm(1, [BinForm.const(1), BinForm.const(1)])
    with pytest.raises(ShapeError):
        EtaForm(1, [bf(1, [1, 0]), bf(0, [0])])


def test_eta_form_roundtrip_and_product():
    f = conic_form(bf(1, [1, 1]))
    assert EtaForm.from_chart(f.dehomogenize(0), f.twist, 0).coeffs == f.coeffs
    assert EtaForm.from_chart(f.dehomogenize(1), f.twist, 1).coeffs == f.coeffs
    square = f * f
    assert square.degree == 4
    assert square.coeff(0) == (S * T * bf(1, [1, 1]) ** 2) ** 2
    assert (f**2).coeffs == square.coeffs


def test_conic_invariant_sections():
    rng = rng_for("conic")
    for d in range(1, 5):
        f = rand_binform(rng, d - 1, nonzero=True)
        data = invariant_sections(section(2, d, {1: f}))
        assert data.elementary[0] == BinForm.zero(d)
        assert data.elementary[1] == -(S * T * f * f)
        assert data.char_form().coeffs == conic_form(f).coeffs


def test_general_double_invariant_sections():
    f = bf(2, [1, -2, 3])
    g = bf(1, [1, 1])
    data = invariant_sections(section(2, 2, {0: f, 1: g}))
    # (eta - f)^2 - st g^2
    assert data.signed_coefficient(1) == -(f * 2)
    assert data.signed_coefficient(2) == f * f - S * T * g * g


def test_triple_invariant_sections():
    f = bf(1, [2, 1])
    g = bf(1, [1, -1])
    data = invariant_sections(section(3, 2, {1: f, 2: g}))
    assert data.elementary[0] == BinForm.zero(2)
    assert data.elementary[1] == -(S * T * f * g * 3)
    assert data.elementary[2] == S * T * T * f**3 + S * S * T * g**3


def test_general_cyclic_triple_curve():
    a = bf(1, [1, 2])
    b = bf(1, [1, -1])
    alg = make_cyclic_triple(a, b)
    g = bf(1, [1, 3])
    h = bf(1, [0, 1])
    sec = SectionData(alg, 2, {1: g, 2: h})
    data = invariant_sections(sec)
    assert data.elementary[1] == -(a * b * g * h * 3)
    assert data.elementary[2] == a * a * b * g**3 + a * b * b * h**3
    delta = eta_discriminant(data.char_form())
    assert delta == (a * b) ** 2 * (a * g**3 - b * h**3) ** 2 * 27


def test_char_oracle_elimination_small():
    rng = rng_for("elim")
    for _ in range(15):
        r = rng.randint(1, 4)
        d = rng.randint(1, 3)
        sec = decompose_section(r, d, rand_binform(rng, r * d))
        data = invariant_sections(sec)
        assert data.char_form().dehomogenize(0) == char_poly_by_elimination(sec)


def test_invariant_sections_rank_one():
    h = bf(2, [1, 0, 4])
    data = invariant_sections(section(1, 2, {0: h}))
    assert data.elementary == (h,)
    assert data.char_form().coeffs == (-h, BinForm.const(1))


# ---------------------------------------------------------------------------
# annihilating polynomials


def test_annihilating_pullback():
    h0 = bf(2, [1, 2, 3])
    out = annihilating_poly(section(2, 2, {0: h0}))
    assert out.degree == 1
    assert out.coeffs == (-h0, BinForm.const(1))


def test_annihilating_degree4_support2():
    g = bf(1, [1, 1])
    out = annihilating_poly(section(4, 2, {2: g}))
    assert out.degree == 2
    assert out.coeffs == (-(S * T * g * g), BinForm.zero(2), BinForm.const(1))


def test_annihilating_generic_triple_is_char():
    sec = section(3, 2, {1: bf(1, [2, 1]), 2: bf(1, [1, -1])})
    assert annihilating_poly(sec).coeffs == invariant_sections(sec).char_form().coeffs


def test_spectral_curve_bundles_consistently():
    sec = section(4, 2, {2: bf(1, [1, 1])})
    curve = spectral_curve(sec)
    assert curve.char.rank == 4
    assert curve.annihilating.degree == 2
    assert not curve.integral
    assert spectral_curve(section(1, 2, {0: bf(2, [1, 0, 1])})).integral


def test_spectral_curve_zero_section():
    curve = spectral_curve(section(3, 2, {}))
    assert curve.annihilating.degree == 1
    with pytest.raises(NonReducedCurveError):
        singular_locus(curve)


# ---------------------------------------------------------------------------
# discriminants


def test_discriminant_conic_unit():
    # Res(eta^2 + c, 2 eta) = 4c, so the conic discriminant is -4st f^2
    f = bf(1, [1, 2])
    curve = spectral_curve(section(2, 2, {1: f}))
    assert discriminant_eta(curve) == S * T * f * f * -4


def test_discriminant_triple_matches_printed_form():
    f = bf(1, [2, 1])
    g = bf(1, [1, -1])
    curve = spectral_curve(section(3, 2, {1: f, 2: g}))
    delta = discriminant_eta(curve)
    assert delta == (S * T) ** 2 * (T * f**3 - S * g**3) ** 2 * 27


def test_discriminant_eta_degree_zero_rejected():
    with pytest.raises(DegreeError):
        eta_discriminant(EtaForm(2, [BinForm.const(5)]))


def test_cubic_delta_examples():
    f = bf(1, [2, 1])
    g = bf(1, [1, -1])
    a = -(S * T * f * g * 3)
    b = -(S * T * T * f**3 + S * S * T * g**3)
    assert cubic_delta(a, b) == (S * T) ** 2 * (T * f**3 - S * g**3) ** 2 * 27
    assert cubic_delta(BinForm.zero(2), BinForm.zero(3)) == BinForm.zero(6)
    c = bf(1, [1, 1])
    assert cubic_delta(c * c * -3, c**3 * 2) == BinForm.zero(6)
    with pytest.raises(DegreeError):
        cubic_delta(bf(1, [1, 0]), bf(1, [0, 1]))


def test_depressed_cubic_parts():
    # (eta - c)^3 depresses to mu^3 with shift c
    c = bf(1, [1, 2])
    cubic = EtaForm(1, [-(c**3), c * c * 3, -(c * 3), BinForm.const(1)])
    shift, a, b = depressed_cubic_parts(cubic)
    assert shift == c
    assert a == BinForm.zero(2)
    assert b == BinForm.zero(3)
    with pytest.raises(DegreeError):
        depressed_cubic_parts(conic_form(bf(0, [1])))


# ---------------------------------------------------------------------------
# singular locus


def test_singular_locus_conic_node():
    # eta^2 - st(s+t)^2: one node over [1:-1] at height 0
    curve = spectral_curve(section(2, 2, {1: bf(1, [1, 1])}))
    pts = singular_locus(curve)
    assert len(pts) == 1
    assert pts[0].point == ProjPoint.of(1, -1)
    assert pts[0].eta == 0


def test_singular_locus_smooth_conic():
    curve = spectral_curve(section(2, 1, {1: bf(0, [1])}))
    assert singular_locus(curve) == []


def test_singular_locus_point_at_infinity():
    # g = t makes [1:0] the only zero of g
    curve = spectral_curve(section(2, 2, {1: bf(1, [1, 0])}))
    pts = singular_locus(curve)
    assert len(pts) == 1
    assert pts[0].point == ProjPoint.of(1, 0)
    assert pts[0].chart == 1
    assert pts[0].eta == 0


def test_singular_locus_extension_point():
    # g = s^2 + t^2 vanishes on a conjugate pair; the node sits over w^2 + 1
    f = bf(3, [1, 0, 0, 0])
    g = bf(2, [1, 0, 1])
    curve = spectral_curve(section(2, 3, {0: f, 1: g}))
    pts = singular_locus(curve)
    assert len(pts) == 1
    assert pts[0].modulus == up(1, 0, 1)
    assert isinstance(pts[0].eta, ExtElem)
    # eta = f at the locus: f = t^3 reduces to 1 mod w^2+1 on chart 0
    assert pts[0].eta.value == UniPoly.one()


def test_singular_locus_unrepresentable_eta():
    # (eta^2 - 2t^2)^2 - s^3 t is singular at w = 0 with eta = +-sqrt(2)
    coeffs = [
        T**4 * 4 - S**3 * T,
        BinForm.zero(3),
        T * T * -4,
        BinForm.zero(1),
        BinForm.const(1),
    ]
    form = EtaForm(1, coeffs)
    e2 = form.coeff(2)
    char = CharData(4, 1, [BinForm.zero(1), e2, BinForm.zero(3), form.coeff(0)])
    curve = SpectralCurve(char, form)
    with pytest.raises(SingularityNotRepresentableError):
        singular_locus(curve)


def test_singular_locus_refutes_colliding_branch_points():
    # ((eta - t)^2 - st)((eta + t)^2 - st): both components branch over
    # [0:1], so the discriminant picks up w^2 there, yet the Jacobian check
    # refutes that candidate.  The components actually cross at ([1:1], 0)
    # and ([1:0], 0) only.

    one = BinForm.const(1)
    t = T
    left = EtaForm(1, [t * t - S * T, t * -2, one])
    right = EtaForm(1, [t * t - S * T, t * 2, one])
    form = left * right
    coeffs = [form.coeff(4 - i) for i in range(1, 5)]
    elem = [c if i % 2 == 0 else -c for i, c in enumerate(coeffs, start=1)]
    curve = SpectralCurve(CharData(4, 1, elem), form)
    pts = singular_locus(curve)
    assert [sp.point for sp in pts] == [ProjPoint.of(1, 1), ProjPoint.of(1, 0)]
    assert all(sp.eta == 0 for sp in pts)
    assert ProjPoint.of(0, 1) not in {sp.point for sp in pts}


def test_singular_points_sorted_canonically():
    # two nodes: g = (s - t)(s - 2t) gives rational points [1:1] and [2:1]
    g = bf(2, [2, -3, 1])
    curve = spectral_curve(section(2, 3, {1: g}))
    pts = singular_locus(curve)
    keys = [sp.locus_key() for sp in pts]
    assert keys == sorted(keys)
    assert [sp.point for sp in pts] == [ProjPoint.of(1, 1), ProjPoint.of(2, 1)]


# ---------------------------------------------------------------------------
# specialized criteria


def test_triple_test_case_a():
    out = triple_singularity_test(up(0, 1), up(0, 0, 1), 0)
    assert out.status == "singular-case-a"
    assert out.point.point == ProjPoint.of(0, 1)
    assert out.point.eta == 0


def test_triple_test_smooth():
    out = triple_singularity_test(up(1, 1), up(0, 1), 0)
    assert out.status == "smooth"
    assert out.point is None


def test_triple_test_case_b():
    # eta^3 - 3(1+w)^2 eta + 2(1+w)^3 = (eta - (1+w))^2 (eta + 2(1+w))
    a = up(1, 1) ** 2 * -3
    b = up(1, 1) ** 3 * 2
    out = triple_singularity_test(a, b, 0)
    assert out.status == "singular-case-b"
    assert out.point.eta == 1


def test_triple_test_over_modulus():
    # same double-root pattern centered at the conjugate pair w^2 + 1 = 0
    p = up(1, 0, 1)
    a = p * p * -3
    b = p**3 * 2
    out = triple_singularity_test(a, b, p)
    assert out.status == "singular-case-a" or out.status == "singular-case-b"
    # a vanishes at the locus, b vanishes triply: case (a)
    assert out.status == "singular-case-a"
    assert out.point.modulus == p
    assert out.point.eta.value.is_zero()


def test_triple_test_case_b_extension_eta():
    # shift the case-b pattern so eta = w is only defined mod w^2 + 1
    p = up(1, 0, 1)
    w = up(0, 1)
    a = w * w * -3
    b = w**3 * 2
    # delta vanishes identically, a(w) != 0 mod p
    out = triple_singularity_test(a, b, p)
    assert out.status == "singular-case-b"
    assert out.point.eta.value == w


def test_triple_test_cubic_gate():
    with pytest.raises(NonDepressedCubicError):
        triple_test_cubic(ep(0, up(0, 1), 1, 1), 0)
    with pytest.raises(DegreeError):
        triple_test_cubic(ep(1, 1), 0)
    out = triple_test_cubic(ep(up(0, 0, 1), up(0, 1), 0, 1), 0)
    assert out.status == "singular-case-a"


def test_triple_test_agrees_with_locus():
    rng = rng_for("lemma")
    hits = 0
    for _ in range(25):
        d = rng.randint(1, 3)
        f = rand_binform(rng, d - 1)
        g = rand_binform(rng, d - 1)
        sec = section(3, d, {1: f, 2: g})
        if sec.is_zero():
            continue
        curve = spectral_curve(sec)
        if curve.annihilating.degree != 3:
            continue
        pts = singular_locus(curve)
        rational = {
            sp.point: sp.eta for sp in pts if sp.is_rational() and sp.point.b != 0
        }
        shift, a, b = depressed_cubic_parts(curve.annihilating)
        assert shift.is_zero()  # traceless multiplication matrix
        for w0 in (F(0), F(1), F(-1), F(2), F(1, 2)):
            out = triple_singularity_test(a, b, w0)
            point = ProjPoint.of(w0, 1)
            if out.status == "smooth":
                assert point not in rational
            else:
                hits += 1
                assert rational[point] == out.point.eta
    assert hits > 0


def test_double_cover_predictor_examples():
    st = S * T
    f = bf(2, [1, 1, 1])
    pts = double_cover_singularities(f, bf(1, [1, 1]), st)
    assert len(pts) == 1
    assert pts[0].point == ProjPoint.of(1, -1)
    assert pts[0].eta == f.dehomogenize(0).evaluate(-1)
    assert pts[0].certificate == "prop-gen-double"
    assert double_cover_singularities(bf(1, [1, 2]), BinForm.const(3), st) == []


def test_double_cover_predictor_worse_than_node():
    st = S * T
    g = bf(2, [1, 2, 1])  # (s + t)^2, double zero but a single point
    f = bf(3, [0, 1, 0, 0])
    pts = double_cover_singularities(f, g, st)
    assert len(pts) == 1
    assert pts[0].point == ProjPoint.of(1, -1)


def test_double_cover_predictor_guards():
    st = S * T
    with pytest.raises(PullbackSectionError):
        double_cover_singularities(bf(1, [1, 0]), bf(0, [0]), st)
    with pytest.raises(ShapeError):
        double_cover_singularities(bf(2, [1, 1, 1]), bf(1, [1, 1]), S * S)
    with pytest.raises(DegreeError):
        double_cover_singularities(bf(2, [1, 1, 1]), bf(1, [1, 1]), S * T * S * T)


def test_double_cover_predictor_random_cross_validation():
    rng = rng_for("gendouble")
    st = S * T
    done = 0
    while done < 25:
        d = rng.randint(1, 4)
        f = rand_binform(rng, d)
        g = rand_binform(rng, d - 1, nonzero=True)
        pts = double_cover_singularities(f, g, st)
        sec = SectionData(make_standard_cyclic(2), d, {0: f, 1: g})
        assert point_set(pts) == point_set(singular_locus(spectral_curve(sec)))
        done += 1


# ---------------------------------------------------------------------------
# genus


def test_genus_values():
    assert [arithmetic_genus(3, d) for d in range(1, 11)] == [3 * d - 2 for d in range(1, 11)]
    assert [arithmetic_genus(2, d) for d in range(1, 6)] == [d - 1 for d in range(1, 6)]
    assert all(arithmetic_genus(1, d) == 0 for d in range(1, 6))
    with pytest.raises(DegreeError):
        arithmetic_genus(0, 1)


def test_genus_counts_conic_nodes():
    # g with d-1 distinct rational zeros gives exactly d-1 nodes
    for d, g in [(2, bf(1, [1, 1])), (3, bf(2, [0, 1, 1])), (4, bf(3, [0, -1, 0, 1]))]:
        curve = spectral_curve(section(2, d, {1: g}))
        pts = singular_locus(curve)
        total = sum(1 if sp.is_rational() else sp.modulus.degree() for sp in pts)
        assert total == d - 1 == arithmetic_genus(2, d)
