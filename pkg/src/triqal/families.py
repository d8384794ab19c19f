"""Explicit n = 2 solution data for the pentagon equation.

For n = 2 the comultiplication tensor Qbar is pinned down by six variables
(a, b, c, d, f, y) once the forced-entry pattern is imposed.  This module
builds that embedding, the trivial solution, and the two-parameter solution
families, and evaluates the defining polynomial system.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from itertools import product

import numpy as np

from .tensor_core import LOWER, UPPER, DenseTensor

Scalar = complex


@dataclass(frozen=True)
class SixVars:
    """The six independent structure constants of an n = 2 comultiplication."""

    a: Scalar
    b: Scalar
    c: Scalar
    d: Scalar
    f: Scalar
    y: Scalar

    def astuple(self) -> tuple[Scalar, ...]:
        return (self.a, self.b, self.c, self.d, self.f, self.y)


@dataclass(frozen=True)
class FamilyParams:
    """Parameters (d, alpha) of the solution families, with sign and branch."""

    d: Scalar
    alpha: Scalar
    sign: int = 1
    branch: int = 1

    def __post_init__(self):
        if self.d == 0:
            raise ValueError("d must be nonzero")
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.branch not in (1, 2):
            raise ValueError("branch must be 1 or 2")


def trivial() -> SixVars:
    """The identity comultiplication: a = b = d = f = y = 0, c = 1."""
    return SixVars(a=0, b=0, c=1, d=0, f=0, y=0)


def embed(v: SixVars) -> DenseTensor:
    """Build the 2x2x2x2 Qbar with legs (lower i, lower j, upper s, upper t).

    Entry table (indices 0-based):

        Q[0,0,0,1] = Q[0,0,1,0] =  a      Q[0,0,1,1] = f
        Q[0,1,0,0] = Q[1,0,0,0] =  b      Q[1,1,0,0] = y
        Q[0,1,0,1] = Q[1,0,1,0] =  c      Q[0,1,1,1] = Q[1,0,1,1] = -a
        Q[0,1,1,0] = Q[1,0,0,1] =  d      Q[1,1,1,0] = Q[1,1,0,1] = -b
        Q[0,0,0,0] = Q[1,1,1,1] = 1 - d
    """
    a, b, c, d, f, y = v.astuple()
    q = np.zeros((2, 2, 2, 2), dtype=np.complex128)
    q[0, 0, 0, 1] = q[0, 0, 1, 0] = a
    q[0, 1, 0, 0] = q[1, 0, 0, 0] = b
    q[0, 1, 0, 1] = q[1, 0, 1, 0] = c
    q[0, 1, 1, 0] = q[1, 0, 0, 1] = d
    q[0, 0, 1, 1] = f
    q[1, 1, 0, 0] = y
    q[0, 1, 1, 1] = q[1, 0, 1, 1] = -a
    q[1, 1, 1, 0] = q[1, 1, 0, 1] = -b
    q[0, 0, 0, 0] = q[1, 1, 1, 1] = 1 - d
    return DenseTensor(n=2, legs=(LOWER, LOWER, UPPER, UPPER), data=q)


def extract(qbar: DenseTensor, tol: float = 1e-9) -> SixVars:
    """Read the six variables back off a tensor in the embedded pattern.

    Raises ValueError if the tensor is not n = 2 with legs (lower, lower,
    upper, upper), or if any forced relation between entries is violated by
    more than ``tol``.
    """
    if qbar.n != 2 or qbar.legs != (LOWER, LOWER, UPPER, UPPER):
        raise ValueError("expected an n=2 tensor with legs (lower, lower, upper, upper)")
    q = qbar.data
    v = SixVars(a=q[0, 0, 0, 1], b=q[0, 1, 0, 0], c=q[0, 1, 0, 1],
                d=q[0, 1, 1, 0], f=q[0, 0, 1, 1], y=q[1, 1, 0, 0])
    expected = embed(v)
    err = float(np.max(np.abs(q - expected.data)))
    if err > tol:
        raise ValueError(
            f"tensor violates the six-variable pattern (max deviation {err:.3g})")
    return v


def family(params: FamilyParams) -> SixVars:
    """One member of the two solution families.

    Branch 1:  r = d/(2α) − d²/α,  a = ±α√r, b = ±√r, c = d, f = αd,  y = d/α.
    Branch 2:  r = d²/α − d/(2α),  a = ∓α√r, b = ±√r, c = d, f = −αd, y = −d/α.

    √ is the principal complex square root; ``sign`` picks the overall ± on b.
    """
    d = complex(params.d)
    alpha = complex(params.alpha)
    sgn = params.sign
    if params.branch == 1:
        r = d / (2 * alpha) - d * d / alpha
        s = cmath.sqrt(r)
        return SixVars(a=sgn * alpha * s, b=sgn * s, c=d, d=d,
                       f=alpha * d, y=d / alpha)
    r = d * d / alpha - d / (2 * alpha)
    s = cmath.sqrt(r)
    return SixVars(a=-sgn * alpha * s, b=sgn * s, c=d, d=d,
                   f=-alpha * d, y=-d / alpha)


def system23_residuals(v: SixVars) -> list[float]:
    """Absolute values of the twelve polynomial constraints, in listed order:

        a(c−d), b(c−d), (c−1)(c−d), d(c−d), f(c−d), y(c−d),
        ad−bf, ay−bc, d²−fy, 2ab+2d²−d, 2a²+2df−f, 2b²+2dy−y.
    """
    a, b, c, d, f, y = v.astuple()
    exprs = [
        a * (c - d),
        b * (c - d),
        (c - 1) * (c - d),
        d * (c - d),
        f * (c - d),
        y * (c - d),
        a * d - b * f,
        a * y - b * c,
        d * d - f * y,
        2 * a * b + 2 * d * d - d,
        2 * a * a + 2 * d * f - f,
        2 * b * b + 2 * d * y - y,
    ]
    return [abs(e) for e in exprs]


def eq22_residual(v: SixVars) -> float:
    """|4ab + 2cd + (1−d)² + fy − 1| (the quadratic normalisation constraint)."""
    a, b, c, d, f, y = v.astuple()
    return abs(4 * a * b + 2 * c * d + (1 - d) ** 2 + f * y - 1)


#: d-values used by the acceptance sweep (the property grid adds -1/4).
ACCEPTANCE_D_VALUES: tuple[Scalar, ...] = (0.25, 0.5, -0.5, 1 + 1j)
PROPERTY_D_VALUES: tuple[Scalar, ...] = (0.25, -0.25, 0.5, -0.5, 1 + 1j)
GRID_ALPHA_VALUES: tuple[Scalar, ...] = (1, 4, -2, 1j)


def parameter_grid(d_values=ACCEPTANCE_D_VALUES,
                   alpha_values=GRID_ALPHA_VALUES) -> list[FamilyParams]:
    """Cartesian sweep over d, alpha, both signs, and both branches."""
    return [FamilyParams(d=d, alpha=al, sign=s, branch=br)
            for d, al, s, br in product(d_values, alpha_values, (1, -1), (1, 2))]
