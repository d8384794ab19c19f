"""HTTP service exposing the verification library.

Every endpoint follows the same contract: malformed or mathematically
inadmissible input (bad field shapes, singular h, a form violating the
twist condition, non-coprime lens parameters) is an HTTP 400 with a
message naming the problem; a request that parses fine but whose checks
fail numerically is a 200 whose body carries ``ok: false`` and the
offending residuals.
"""

import math

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import __version__
from ..families import FamilyParams, embed, eq22_residual, family, system23_residuals, trivial
from ..frobenius import (
    BilinearForm,
    FrobeniusAlgebra,
    build_full,
    compatibility_residual,
    derive_m,
    equivalence_suite,
    form_condition_residual,
    full_consistency_residuals,
)
from ..io import algebra_to_dict, algebra_from_dict, format_complex, from_pairs, to_pairs
from ..lawrence import AXIOM_IDS, M_DEPENDENT, ResidualReport, ThreeAlgebra, axiom_residual
from ..lens import build_lens, evaluate, network_dump
from ..pentagon import (
    cubic_residual,
    pachner14_residual,
    pentagon_residual,
    projector_matrix,
    projector_residual,
)
from ..tensor_core import BasisPermutation
from .schemas import (
    AlgebraPayload,
    CheckRequest,
    CheckResponse,
    FamilyRequest,
    FamilyResponse,
    FullRequest,
    FullResponse,
    LensRequest,
    LensResponse,
    PentagonRequest,
    PentagonResponse,
)

app = FastAPI(title="triqal", version=__version__)

DEFAULT_TOL = 1e-9

EXTRA_CHECKS = ("compatibility", "form", "pentagon", "pachner", "cubic", "projector")
CHECK_TOKENS = AXIOM_IDS + EXTRA_CHECKS

SYSTEM_READING_NOTE = ("the symbol h appearing in the defining polynomial system "
                       "is read as the variable y, not as the bilinear form")


def _parse_algebra(payload: AlgebraPayload) -> tuple[ThreeAlgebra, np.ndarray | None]:
    try:
        return algebra_from_dict(payload.model_dump())
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _resolve_form(n: int, request_h, file_h, notes: list[str]) -> BilinearForm:
    """Pick h from the request, else the algebra file, else the identity."""
    try:
        if request_h is not None:
            return BilinearForm.from_matrix(from_pairs(request_h, (n, n), "h"))
        if file_h is not None:
            return BilinearForm.from_matrix(file_h)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    notes.append("h defaulted to identity")
    return BilinearForm.identity(n)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/check", response_model=CheckResponse)
def check(req: CheckRequest) -> CheckResponse:
    alg, file_h = _parse_algebra(req.algebra)
    tokens = tuple(req.checks) if req.checks else CHECK_TOKENS
    unknown = [t for t in tokens if t not in CHECK_TOKENS]
    if unknown:
        raise HTTPException(status_code=400,
                            detail=f"unknown check name(s): {', '.join(unknown)}")
    tol = req.tol if req.tol is not None else DEFAULT_TOL
    notes: list[str] = []
    form = _resolve_form(alg.n, req.h, file_h, notes)
    if alg.Qm is None and any(t in M_DEPENDENT or t == "compatibility" for t in tokens):
        alg = ThreeAlgebra(n=alg.n, P=alg.P, Qbar=alg.Qbar,
                           Qm=derive_m(alg.Qbar, form))
        notes.append("Qm derived from Qbar and h")
    residuals: dict[str, float] = {}
    for t in tokens:
        if t in AXIOM_IDS:
            residuals[f"axiom {t}"] = axiom_residual(alg, t)
        elif t == "compatibility":
            residuals["compatibility"] = compatibility_residual(alg, form)
        elif t == "form":
            residuals["form condition"] = form_condition_residual(form, alg.P)
        elif t == "pentagon":
            residuals["pentagon"] = pentagon_residual(alg.Qbar)
        elif t == "pachner":
            residuals["pachner 1-4"] = pachner14_residual(alg.Qbar)
        elif t == "cubic":
            residuals["cubic"] = cubic_residual(alg.Qbar)
        elif t == "projector":
            residuals["projector"] = projector_residual(projector_matrix(alg.Qbar))
    report = ResidualReport.from_residuals(residuals, tol, notes)
    return CheckResponse(command="check", tol=tol, residuals=report.residuals,
                         flags=report.flags, ok=report.ok, notes=list(report.notes))


@app.post("/family", response_model=FamilyResponse)
def family_solution(req: FamilyRequest) -> FamilyResponse:
    notes = [SYSTEM_READING_NOTE]
    if req.trivial:
        v = trivial()
        notes.append("trivial solution")
    else:
        if req.d is None or req.alpha is None:
            raise HTTPException(status_code=400,
                                detail="d and alpha are required unless trivial is set")
        try:
            params = FamilyParams(d=complex(*req.d), alpha=complex(*req.alpha),
                                  sign=req.sign, branch=req.branch)
            v = family(params)
        except (TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
    qbar = embed(v)
    alg = ThreeAlgebra(n=2, P=BasisPermutation.identity(2), Qbar=qbar)
    names = ("a", "b", "c", "d", "f", "y")
    return FamilyResponse(
        command="family",
        vars={k: [z.real, z.imag] for k, z in zip(names, v.astuple())},
        algebra=AlgebraPayload(**algebra_to_dict(alg)),
        system_residuals=system23_residuals(v),
        quadratic_residual=eq22_residual(v),
        pentagon_residual=pentagon_residual(qbar),
        notes=notes,
    )


@app.post("/full", response_model=FullResponse)
def full(req: FullRequest) -> FullResponse:
    alg, file_h = _parse_algebra(req.algebra)
    notes: list[str] = []
    form = _resolve_form(alg.n, req.h, file_h, notes)
    try:
        fa = FrobeniusAlgebra(base=alg, h=form)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    built = build_full(fa)
    return FullResponse(
        command="full",
        n=alg.n,
        m22=to_pairs(built.m22.data),
        m31=to_pairs(built.m31.data),
        m13=to_pairs(built.m13.data),
        m04=to_pairs(built.m04.data),
        m40=to_pairs(built.m40.data),
        round_trips=full_consistency_residuals(built, form),
        notes=notes,
    )


@app.post("/pentagon", response_model=PentagonResponse)
def pentagon(req: PentagonRequest) -> PentagonResponse:
    alg, file_h = _parse_algebra(req.algebra)
    tol = req.tol if req.tol is not None else DEFAULT_TOL
    notes: list[str] = []
    form = _resolve_form(alg.n, None, file_h, notes)
    try:
        report = equivalence_suite(alg.Qbar, form, alg.P, tol=tol)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    b = projector_matrix(alg.Qbar)
    residuals = dict(report.residuals)
    residuals["projector"] = projector_residual(b)
    merged = ResidualReport.from_residuals(residuals, tol,
                                           notes + list(report.notes))
    return PentagonResponse(command="pentagon", tol=tol,
                            residuals=merged.residuals, flags=merged.flags,
                            ok=merged.ok, projector=to_pairs(b.B),
                            notes=list(merged.notes))


@app.post("/lens", response_model=LensResponse)
def lens(req: LensRequest) -> LensResponse:
    alg, file_h = _parse_algebra(req.algebra)
    notes: list[str] = []
    form = _resolve_form(alg.n, req.h, file_h, notes)
    try:
        net = build_lens(req.p, req.q)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    try:
        value = evaluate(net, alg.Qbar, form)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    if math.gcd(req.q, req.p) == 1 and req.q % req.p != 1 % req.p:
        notes.append("twisted gluing uses h and its inverse as bond mediators")
    return LensResponse(
        command="lens", p=req.p, q=req.q,
        value=[value.real, value.imag],
        text=format_complex(value),
        tetrahedra=len(net.tetras),
        bonds=len(net.bonds),
        network=network_dump(net) if req.dump_network else None,
        notes=notes,
    )
