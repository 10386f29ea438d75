"""JSON codecs for the domain types.

Conventions, shared with the CLI report format:

* rationals are strings, "p" or "p/q" in lowest terms;
* binary forms are {"degree": d, "coeffs": [...]} with coefficients listed
  by ascending s-exponent (coeffs[i] multiplies s^i t^(d-i));
* one-variable polynomials are {"coeffs": [...]} ascending in the variable;
* every encoder has a matching parser and parse(serialize(x)) == x exactly.

Parsers ignore unknown keys (encoders add "printed" strings for humans) and
raise JobError on anything structurally wrong, so the CLI can map bad input
to its own exit code.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .covers import (
    AbelianGroup,
    CoverAlgebra,
    SectionData,
    SplitBundle,
    is_standard_cyclic,
    make_cyclic_triple,
    make_double_cover,
    make_standard_cyclic,
)
from .errors import JobError, SpecCoverError
from .exactalg import BinForm, ExtElem, ProjPoint, UniPoly
from .factorization import BirationalityVerdict, FactorizationReport
from .spectral import CharData, EtaForm, SingularPoint, SpectralCurve
from .stability import (
    HilbertPoly,
    IntegralityReport,
    RelationReport,
    StabilityVerdict,
    SubsheafRecord,
)

_RAT_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def rat_to_json(x) -> str:
    x = Fraction(x)
    return str(x)


def rat_from_json(v, where: str = "value") -> Fraction:
    if isinstance(v, bool):
        raise JobError(f"{where}: expected a rational, got a boolean")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str) and _RAT_RE.match(v):
        return Fraction(v)
    raise JobError(f'{where}: expected an integer or "p/q" string, got {v!r}')


def _need_dict(obj, where: str) -> dict:
    if not isinstance(obj, dict):
        raise JobError(f"{where}: expected an object, got {type(obj).__name__}")
    return obj

def _need_list(obj, where: str) -> list:
    if not isinstance(obj, list):
        raise JobError(f"{where}: expected an array, got {type(obj).__name__}")
    return obj


def _need_int(obj, where: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise JobError(f"{where}: expected an integer, got {obj!r}")
    return obj


# ---------------------------------------------------------------------------
# coefficient containers


def form_to_json(form: BinForm) -> dict:
    return {
        "degree": form.degree,
        "coeffs": [rat_to_json(c) for c in form.coeffs],
        "printed": form.str_in("s", "t"),
    }


def form_from_json(obj, where: str = "form") -> BinForm:
    obj = _need_dict(obj, where)
    degree = _need_int(obj.get("degree"), f"{where}.degree")
    coeffs = _need_list(obj.get("coeffs"), f"{where}.coeffs")
    if degree < 0:
        raise JobError(f"{where}.degree: must be non-negative, got {degree}")
    if len(coeffs) != degree + 1:
        raise JobError(
            f"{where}.coeffs: degree {degree} needs {degree + 1} entries, got {len(coeffs)}"
        )
    vals = [rat_from_json(c, f"{where}.coeffs[{i}]") for i, c in enumerate(coeffs)]
    return BinForm(degree, vals)


def unipoly_to_json(p: UniPoly) -> dict:
    return {"coeffs": [rat_to_json(c) for c in p.coeffs]}


def unipoly_from_json(obj, where: str = "poly") -> UniPoly:
    obj = _need_dict(obj, where)
    coeffs = _need_list(obj.get("coeffs"), f"{where}.coeffs")
    return UniPoly([rat_from_json(c, f"{where}.coeffs[{i}]") for i, c in enumerate(coeffs)])


def point_to_json(pt: ProjPoint) -> dict:
    return {"coords": [pt.a, pt.b], "printed": str(pt)}


def point_from_json(obj, where: str = "point") -> ProjPoint:
    obj = _need_dict(obj, where)
    coords = _need_list(obj.get("coords"), f"{where}.coords")
    if len(coords) != 2:
        raise JobError(f"{where}.coords: expected [a, b], got {coords!r}")
    a = rat_from_json(coords[0], f"{where}.coords[0]")
    b = rat_from_json(coords[1], f"{where}.coords[1]")
    try:
        return ProjPoint.of(a, b)
    except SpecCoverError as exc:
        raise JobError(f"{where}: {exc}") from exc


def ext_to_json(x: ExtElem) -> dict:
    return {
        "modulus": unipoly_to_json(x.modulus),
        "value": unipoly_to_json(x.value),
        "printed": x.value.str_in("w"),
    }


def ext_from_json(obj, where: str = "ext") -> ExtElem:
    obj = _need_dict(obj, where)
    return ExtElem(
        unipoly_from_json(obj.get("modulus"), f"{where}.modulus"),
        unipoly_from_json(obj.get("value"), f"{where}.value"),
    )


# ---------------------------------------------------------------------------
# covers and sections


def _char_to_json(rho) -> list:
    return [int(v) for v in rho]


def cover_to_json(alg: CoverAlgebra) -> dict:
    if is_standard_cyclic(alg):
        return {"r": alg.degree}
    twists = [
        {"char": _char_to_json(rho), "degree": alg.twist(rho)}
        for rho in alg.characters()
        if rho != alg.group.identity()
    ]
    forms = [
        {"chars": [_char_to_json(a), _char_to_json(b)], "form": form_to_json(f)}
        for (a, b), f in sorted(alg.structure_forms.items())
    ]
    return {
        "group": list(alg.group.factors),
        "twists": twists,
        "forms": forms,
    }


def cover_from_json(obj, where: str = "cover") -> CoverAlgebra:
    obj = _need_dict(obj, where)
    try:
        if "r" in obj:
            return make_standard_cyclic(_need_int(obj["r"], f"{where}.r"))
        if "cyclic_triple" in obj:
            inner = _need_dict(obj["cyclic_triple"], f"{where}.cyclic_triple")
            return make_cyclic_triple(
                form_from_json(inner.get("a"), f"{where}.cyclic_triple.a"),
                form_from_json(inner.get("b"), f"{where}.cyclic_triple.b"),
            )
        if "double" in obj:
            inner = _need_dict(obj["double"], f"{where}.double")
            return make_double_cover(
                form_from_json(inner.get("branch"), f"{where}.double.branch")
            )
        if "group" in obj:
            group = AbelianGroup(
                tuple(_need_int(n, f"{where}.group[]") for n in _need_list(obj["group"], f"{where}.group"))
            )
            twists = {}
            for i, row in enumerate(_need_list(obj.get("twists", []), f"{where}.twists")):
                row = _need_dict(row, f"{where}.twists[{i}]")
                rho = tuple(_need_list(row.get("char"), f"{where}.twists[{i}].char"))
                twists[rho] = _need_int(row.get("degree"), f"{where}.twists[{i}].degree")
            forms = {}
            for i, row in enumerate(_need_list(obj.get("forms", []), f"{where}.forms")):
                row = _need_dict(row, f"{where}.forms[{i}]")
                pair = _need_list(row.get("chars"), f"{where}.forms[{i}].chars")
                if len(pair) != 2:
                    raise JobError(f"{where}.forms[{i}].chars: expected two characters")
                key = (tuple(pair[0]), tuple(pair[1]))
                forms[key] = form_from_json(row.get("form"), f"{where}.forms[{i}].form")
            return CoverAlgebra(group, twists, forms)
    except JobError:
        raise
    except SpecCoverError as exc:
        raise JobError(f"{where}: {exc}") from exc
    raise JobError(
        f'{where}: need one of "r", "cyclic_triple", "double", or explicit "group" data'
    )


def section_to_json(sec: SectionData) -> dict:
    comps = [
        {"char": _char_to_json(rho), "form": form_to_json(f)}
        for rho, f in sorted(sec.components.items())
    ]
    return {
        "cover": cover_to_json(sec.cover),
        "twist_degree": sec.twist_degree,
        "components": comps,
    }


def section_from_json(obj, where: str = "section") -> SectionData:
    obj = _need_dict(obj, where)
    cover = cover_from_json(obj.get("cover"), f"{where}.cover")
    d = _need_int(obj.get("twist_degree"), f"{where}.twist_degree")
    comps = {}
    for i, row in enumerate(_need_list(obj.get("components"), f"{where}.components")):
        row = _need_dict(row, f"{where}.components[{i}]")
        rho = tuple(_need_list(row.get("char"), f"{where}.components[{i}].char"))
        form = form_from_json(row.get("form"), f"{where}.components[{i}].form")
        if rho in comps:
            raise JobError(f"{where}.components[{i}].char: duplicate character {list(rho)}")
        comps[rho] = form
    try:
        return SectionData(cover, d, comps)
    except SpecCoverError as exc:
        raise JobError(f"{where}: {exc}") from exc


def bundle_to_json(bundle: SplitBundle) -> dict:
    return {"degrees": list(bundle.degrees)}


def bundle_from_json(obj, where: str = "bundle") -> SplitBundle:
    obj = _need_dict(obj, where)
    degs = _need_list(obj.get("degrees"), f"{where}.degrees")
    try:
        return SplitBundle([_need_int(a, f"{where}.degrees[]") for a in degs])
    except SpecCoverError as exc:
        raise JobError(f"{where}: {exc}") from exc


# ---------------------------------------------------------------------------
# curves and singular points


def etaform_to_json(f: EtaForm) -> dict:
    return {
        "twist": f.twist,
        "coeffs": [form_to_json(c) for c in f.coeffs],
        "printed": f.str_in("s", "t", "eta"),
    }


def etaform_from_json(obj, where: str = "curve") -> EtaForm:
    obj = _need_dict(obj, where)
    twist = _need_int(obj.get("twist"), f"{where}.twist")
    coeffs = [
        form_from_json(c, f"{where}.coeffs[{i}]")
        for i, c in enumerate(_need_list(obj.get("coeffs"), f"{where}.coeffs"))
    ]
    try:
        return EtaForm(twist, coeffs)
    except SpecCoverError as exc:
        raise JobError(f"{where}: {exc}") from exc


def chardata_to_json(c: CharData) -> dict:
    return {
        "rank": c.rank,
        "twist": c.twist,
        "elementary": [form_to_json(e) for e in c.elementary],
        "printed": c.char_form().str_in("s", "t", "eta"),
    }


def chardata_from_json(obj, where: str = "char") -> CharData:
    obj = _need_dict(obj, where)
    rank = _need_int(obj.get("rank"), f"{where}.rank")
    twist = _need_int(obj.get("twist"), f"{where}.twist")
    elem = [
        form_from_json(e, f"{where}.elementary[{i}]")
        for i, e in enumerate(_need_list(obj.get("elementary"), f"{where}.elementary"))
    ]
    try:
        return CharData(rank, twist, elem)
    except SpecCoverError as exc:
        raise JobError(f"{where}: {exc}") from exc


def curve_to_json(curve: SpectralCurve) -> dict:
    return {
        "char": chardata_to_json(curve.char),
        "annihilating": etaform_to_json(curve.annihilating),
        "integral": curve.integral,
    }


def curve_from_json(obj, where: str = "curve") -> SpectralCurve:
    obj = _need_dict(obj, where)
    return SpectralCurve(
        chardata_from_json(obj.get("char"), f"{where}.char"),
        etaform_from_json(obj.get("annihilating"), f"{where}.annihilating"),
        bool(obj.get("integral", False)),
    )


def singular_point_to_json(pt: SingularPoint) -> dict:
    out = {"chart": pt.chart, "certificate": pt.certificate, "printed": str(pt)}
    if pt.point is not None:
        out["point"] = point_to_json(pt.point)
    if pt.modulus is not None:
        out["modulus"] = unipoly_to_json(pt.modulus)
    if isinstance(pt.eta, ExtElem):
        out["eta"] = ext_to_json(pt.eta)
    else:
        out["eta"] = rat_to_json(pt.eta)
    return out


def singular_point_from_json(obj, where: str = "singular") -> SingularPoint:
    obj = _need_dict(obj, where)
    chart = _need_int(obj.get("chart"), f"{where}.chart")
    point = None
    if obj.get("point") is not None:
        point = point_from_json(obj["point"], f"{where}.point")
    modulus = None
    if obj.get("modulus") is not None:
        modulus = unipoly_from_json(obj["modulus"], f"{where}.modulus")
    eta = obj.get("eta")
    if isinstance(eta, dict):
        eta = ext_from_json(eta, f"{where}.eta")
    else:
        eta = rat_from_json(eta, f"{where}.eta")
    cert = obj.get("certificate", "jacobian")
    if not isinstance(cert, str):
        raise JobError(f"{where}.certificate: expected a string")
    return SingularPoint(chart, point, modulus, eta, cert)


# ---------------------------------------------------------------------------
# factorization reports


def birationality_to_json(v: BirationalityVerdict) -> dict:
    out = {
        "kind": v.kind,
        "justification": v.justification,
        "sampling_complete": v.sampling_complete,
    }
    if v.tau is not None:
        out["tau"] = section_to_json(v.tau)
    if v.witness_base is not None:
        out["witness_base"] = rat_to_json(v.witness_base)
    return out


def birationality_from_json(obj, where: str = "birationality") -> BirationalityVerdict:
    obj = _need_dict(obj, where)
    kind = obj.get("kind")
    if not isinstance(kind, str):
        raise JobError(f"{where}.kind: expected a string")
    tau = None
    if obj.get("tau") is not None:
        tau = section_from_json(obj["tau"], f"{where}.tau")
    witness = None
    if obj.get("witness_base") is not None:
        witness = rat_from_json(obj["witness_base"], f"{where}.witness_base")
    return BirationalityVerdict(
        kind,
        str(obj.get("justification", "")),
        tau=tau,
        witness_base=witness,
        sampling_complete=bool(obj.get("sampling_complete", True)),
    )


def factorization_to_json(rep: FactorizationReport) -> dict:
    return {
        "subcover_index": rep.subcover_index,
        "quotient_degree": rep.quotient_degree,
        "tau": section_to_json(rep.tau),
        "verdict": rep.verdict,
    }


def factorization_from_json(obj, where: str = "factorization") -> FactorizationReport:
    obj = _need_dict(obj, where)
    verdict = obj.get("verdict")
    if not isinstance(verdict, str):
        raise JobError(f"{where}.verdict: expected a string")
    return FactorizationReport(
        _need_int(obj.get("subcover_index"), f"{where}.subcover_index"),
        _need_int(obj.get("quotient_degree"), f"{where}.quotient_degree"),
        section_from_json(obj.get("tau"), f"{where}.tau"),
        verdict,
    )


# ---------------------------------------------------------------------------
# stability reports


def hilbert_to_json(p: HilbertPoly) -> dict:
    return {
        "linear": rat_to_json(p.linear),
        "constant": rat_to_json(p.constant),
        "printed": str(p),
    }


def hilbert_from_json(obj, where: str = "hilbert") -> HilbertPoly:
    obj = _need_dict(obj, where)
    return HilbertPoly(
        rat_from_json(obj.get("linear"), f"{where}.linear"),
        rat_from_json(obj.get("constant"), f"{where}.constant"),
    )


def relation_to_json(rep: RelationReport) -> dict:
    return {
        "ok": rep.ok,
        "lhs": hilbert_to_json(rep.lhs),
        "rhs": hilbert_to_json(rep.rhs),
    }


def record_to_json(rec: SubsheafRecord) -> dict:
    out = {
        "kind": rec.kind,
        "rank": rec.rank,
        "degrees": list(rec.degrees),
        "hilbert": hilbert_to_json(rec.hilbert),
        "indices": list(rec.indices),
    }
    if rec.eigenvalue is not None:
        out["eigenvalue"] = unipoly_to_json(rec.eigenvalue)
        out["eigenvalue_printed"] = rec.eigenvalue.str_in("w")
    if rec.vector:
        out["vector"] = [unipoly_to_json(v) for v in rec.vector]
    return out


def record_from_json(obj, where: str = "record") -> SubsheafRecord:
    obj = _need_dict(obj, where)
    kind = obj.get("kind")
    if not isinstance(kind, str):
        raise JobError(f"{where}.kind: expected a string")
    eigenvalue = None
    if obj.get("eigenvalue") is not None:
        eigenvalue = unipoly_from_json(obj["eigenvalue"], f"{where}.eigenvalue")
    vector = tuple(
        unipoly_from_json(v, f"{where}.vector[{i}]")
        for i, v in enumerate(obj.get("vector", []))
    )
    return SubsheafRecord(
        kind,
        _need_int(obj.get("rank"), f"{where}.rank"),
        tuple(_need_int(a, f"{where}.degrees[]") for a in _need_list(obj.get("degrees"), f"{where}.degrees")),
        hilbert_from_json(obj.get("hilbert"), f"{where}.hilbert"),
        indices=tuple(_need_int(i, f"{where}.indices[]") for i in obj.get("indices", [])),
        eigenvalue=eigenvalue,
        vector=vector,
    )


def verdict_to_json(v: StabilityVerdict) -> dict:
    out = {"status": v.status, "method": v.method, "notes": list(v.notes)}
    if v.witness is not None:
        out["witness"] = record_to_json(v.witness)
    return out


def verdict_from_json(obj, where: str = "verdict") -> StabilityVerdict:
    obj = _need_dict(obj, where)
    status = obj.get("status")
    if not isinstance(status, str):
        raise JobError(f"{where}.status: expected a string")
    witness = None
    if obj.get("witness") is not None:
        witness = record_from_json(obj["witness"], f"{where}.witness")
    return StabilityVerdict(
        status,
        witness=witness,
        method=str(obj.get("method", "direct-search")),
        notes=tuple(str(n) for n in obj.get("notes", [])),
    )


def integrality_to_json(rep: IntegralityReport) -> dict:
    return {"certified": rep.certified, "reasons": list(rep.reasons)}
