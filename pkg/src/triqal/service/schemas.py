from typing import Optional

from pydantic import BaseModel


class AlgebraPayload(BaseModel):
    """Wire form of an algebra; complex entries are [re, im] pairs."""

    n: int
    P: list[int]
    Qbar: list
    Qm: Optional[list] = None
    h: Optional[list] = None


class CheckRequest(BaseModel):
    algebra: AlgebraPayload
    checks: Optional[list[str]] = None
    h: Optional[list] = None
    tol: Optional[float] = None


class CheckResponse(BaseModel):
    command: str
    tol: float
    residuals: dict[str, float]
    flags: dict[str, bool]
    ok: bool
    notes: list[str]


class FamilyRequest(BaseModel):
    d: Optional[list[float]] = None       # [re, im]
    alpha: Optional[list[float]] = None   # [re, im]
    sign: int = 1
    branch: int = 1
    trivial: bool = False


class FamilyResponse(BaseModel):
    command: str
    vars: dict[str, list[float]]
    algebra: AlgebraPayload
    system_residuals: list[float]
    quadratic_residual: float
    pentagon_residual: float
    notes: list[str]


class FullRequest(BaseModel):
    algebra: AlgebraPayload
    h: Optional[list] = None


class FullResponse(BaseModel):
    command: str
    n: int
    m22: list
    m31: list
    m13: list
    m04: list
    m40: list
    round_trips: dict[str, float]
    notes: list[str]


class PentagonRequest(BaseModel):
    algebra: AlgebraPayload
    tol: Optional[float] = None


class PentagonResponse(BaseModel):
    command: str
    tol: float
    residuals: dict[str, float]
    flags: dict[str, bool]
    ok: bool
    projector: list
    notes: list[str]


class LensRequest(BaseModel):
    p: int
    q: int
    algebra: AlgebraPayload
    h: Optional[list] = None
    dump_network: bool = False


class LensResponse(BaseModel):
    command: str
    p: int
    q: int
    value: list[float]        # [re, im]
    text: str
    tetrahedra: int
    bonds: int
    network: Optional[dict] = None
    notes: list[str]
