"""The 3-algebra (A, P, m, m̄) and residuals of its seven defining axioms.

Axioms are evaluated in operator form: each side is an explicit composition
of m, m̄, slot swaps σ_{uv}, and basis-permutation factors acting on a tensor
power of A, composed right to left exactly as written.  The composition is
materialised as a single coefficient array and the two sides compared
entrywise.

Conventions
-----------
* Tensor slots are counted 1..k left to right; σ_{uv} swaps slots u and v.
* P acts on basis vectors, P(e_i) = e_{P(i)}; P^{-1} = P² since P³ = id.
* m(e_i ⊗ e_j ⊗ e_k) = Σ_t Q_{ijk}^t e_t  (Qm legs: lower i, j, k, upper t).
* m̄(e_i ⊗ e_j) = Σ_{s,t} Q_{ij}^{st} e_s ⊗ e_t  (Qbar legs: lower i, j,
  upper s, t).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .tensor_core import LOWER, UPPER, BasisPermutation, DenseTensor

AXIOM_IDS = ("i", "ii", "iii", "iv", "v", "vi", "vii")

#: Axioms whose statement involves the triple product m.
M_DEPENDENT = frozenset({"i", "ii", "iii", "v", "vi"})

_QBAR_LEGS = (LOWER, LOWER, UPPER, UPPER)
_QM_LEGS = (LOWER, LOWER, LOWER, UPPER)


@dataclass(frozen=True)
class ThreeAlgebra:
    """A 3-algebra: dimension, labelling permutation, m̄, and optionally m."""

    n: int
    P: BasisPermutation
    Qbar: DenseTensor
    Qm: DenseTensor | None = None

    def __post_init__(self):
        if self.P.n != self.n:
            raise ValueError("P acts on a different dimension than n")
        if self.Qbar.n != self.n or self.Qbar.legs != _QBAR_LEGS:
            raise ValueError("Qbar must be (lower, lower, upper, upper) with matching n")
        if self.Qm is not None:
            if self.Qm.n != self.n or self.Qm.legs != _QM_LEGS:
                raise ValueError("Qm must be (lower, lower, lower, upper) with matching n")


@dataclass(frozen=True)
class ResidualReport:
    """Named residuals plus pass flags at a fixed tolerance."""

    residuals: dict[str, float]
    tol: float
    flags: dict[str, bool]
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        for name, r in self.residuals.items():
            if r < 0 or not np.isfinite(r):
                raise ValueError(f"residual {name} is not a finite non-negative real")

    @classmethod
    def from_residuals(cls, residuals: dict[str, float], tol: float,
                       notes: Sequence[str] = ()) -> "ResidualReport":
        flags = {k: (v <= tol) for k, v in residuals.items()}
        return cls(residuals=dict(residuals), tol=tol, flags=flags,
                   notes=tuple(notes))

    @property
    def ok(self) -> bool:
        return all(self.flags.values())


# ---------------------------------------------------------------------------
# Composition engine.
#
# A composite map A^{⊗k} → A^{⊗w} is held as:
#   * an "active" coefficient array whose axes are tagged either
#     ("lower", s) — an input slot already consumed by some operation — or
#     ("upper", tok) — a current output produced by some operation;
#   * a set of "passive" outputs: current outputs that are still untouched
#     copies of an input slot, possibly relabelled by a power of P.  These
#     never enter the array until an operation consumes them or finalize()
#     runs, which keeps intermediate ranks small (≤ 8 for every axiom).
# ---------------------------------------------------------------------------

class _Composite:
    def __init__(self, n: int, k: int, p: BasisPermutation):
        self.n = n
        self.k = k
        self.p = p
        self.active: np.ndarray | None = None
        self.axes: list[tuple[str, int]] = []
        self.tokens: list[int] = list(range(1, k + 1))
        self.passive: dict[int, tuple[int, int]] = {t: (t, 0) for t in self.tokens}
        self._next_token = k + 1

    def swap(self, s1: int, s2: int) -> None:
        i, j = s1 - 1, s2 - 1
        self.tokens[i], self.tokens[j] = self.tokens[j], self.tokens[i]

    def perm(self, assignments: Sequence[tuple[int, int]]) -> None:
        """Apply P^power to the output at each given (position, power)."""
        for pos, power in assignments:
            power %= 3
            if power == 0:
                continue
            tok = self.tokens[pos - 1]
            if tok in self.passive:
                s, tw = self.passive[tok]
                self.passive[tok] = (s, (tw + power) % 3)
            else:
                ax = self.axes.index((UPPER, tok))
                # upper legs relabel through the inverse permutation
                idx = self.p.power_array(-power)
                self.active = np.take(self.active, idx, axis=ax)

    def apply_op(self, op: np.ndarray, arity_in: int, pos: int) -> None:
        """Feed the outputs at positions pos..pos+arity_in−1 into an operation.

        ``op`` has ``arity_in`` lower legs followed by its upper legs.
        """
        toks = self.tokens[pos - 1: pos - 1 + arity_in]
        if len(toks) != arity_in:
            raise ValueError("operation does not fit at this position")
        T = op
        passive_bindings: dict[int, int] = {}   # op lower leg -> input slot
        contract_pairs: list[tuple[int, int]] = []  # (active axis, op leg)
        for leg, tok in enumerate(toks):
            if tok in self.passive:
                s, tw = self.passive.pop(tok)
                if tw % 3:
                    # pre-compose with P^tw on this input: relabel the lower leg
                    T = np.take(T, self.p.power_array(tw), axis=leg)
                passive_bindings[leg] = s
            else:
                contract_pairs.append((self.axes.index((UPPER, tok)), leg))
        arity_out = T.ndim - arity_in
        new_tokens = list(range(self._next_token, self._next_token + arity_out))
        self._next_token += arity_out
        if self.active is None:
            new_active = T
            new_axes: list[tuple[str, int]] = []
            consumed_op_legs: set[int] = set()
        else:
            a_axes = [pr[0] for pr in contract_pairs]
            t_axes = [pr[1] for pr in contract_pairs]
            new_active = np.tensordot(self.active, T, axes=(a_axes, t_axes))
            new_axes = [ax for i, ax in enumerate(self.axes) if i not in set(a_axes)]
            consumed_op_legs = set(t_axes)
        for leg in range(T.ndim):
            if leg in consumed_op_legs:
                continue
            if leg < arity_in:
                new_axes.append((LOWER, passive_bindings[leg]))
            else:
                new_axes.append((UPPER, new_tokens[leg - arity_in]))
        self.active = new_active
        self.axes = new_axes
        self.tokens[pos - 1: pos - 1 + arity_in] = new_tokens

    def finalize(self) -> np.ndarray:
        """One array, axes ordered: lower legs for input slots 1..k, then
        upper legs for the current outputs left to right."""
        arr = self.active if self.active is not None else np.ones((), dtype=np.complex128)
        axes = list(self.axes)
        for tok in self.tokens:
            if tok in self.passive:
                s, tw = self.passive[tok]
                rows = list(self.p.power_array(tw))
                mat = np.eye(self.n, dtype=np.complex128)[rows]  # mat[i,t] = δ_{t,P^tw(i)}
                arr = np.tensordot(arr, mat, axes=0)
                axes.append((LOWER, s))
                axes.append((UPPER, tok))
        order = [axes.index((LOWER, s)) for s in range(1, self.k + 1)]
        order += [axes.index((UPPER, t)) for t in self.tokens]
        return np.transpose(arr, order)


# Stage lists per axiom, in application order (leftmost stage applies first,
# i.e. the rightmost factor of the printed composition).  Stage kinds:
#   ("m", pos)    — triple product on outputs pos..pos+2
#   ("mbar", pos) — comultiplication on outputs pos, pos+1
#   ("swap", u, v)
#   ("perm", ((pos, power), ...)) — P^power on the output at pos
#
# The printed axioms, right-hand factors first:
#   (i)   m(m⊗1⊗1) = m(1⊗1⊗m)σ₃₄(1⊗m̄⊗1⊗1)σ₃₄                       on A^{⊗5}
#   (ii)  (1⊗m)σ₂₃(m̄⊗1⊗1)
#           = m̄(1⊗m)σ₁₂(P⁻¹⊗1⊗1⊗1)(m̄⊗1⊗1)(P⊗P⊗1⊗1)σ₂₃             on A^{⊗4}
#   (iii) m̄(m⊗1) = (1⊗m)σ₁₂(P²⊗m̄⊗1)(1⊗1⊗m̄)σ₁₂σ₂₃                   on A^{⊗4}
#   (iv)  (1⊗m̄)σ₁₂(1⊗m̄) = (m̄⊗1)(1⊗m̄)(P⊗P⊗1)(m̄⊗1)(1⊗P⁻¹⊗1)        on A^{⊗3}
#   (v)   (1⊗m)σ₂₃(m̄⊗P²⊗1) = (m⊗1)(1⊗1⊗m̄)                          on A^{⊗4}
#   (vi)  Pm = m(P⊗P⊗P)σ₂₃σ₁₂                                        on A^{⊗3}
#   (vii) m̄(P²⊗P)σ₁₂ = σ₁₂m̄(P²⊗P)                                   on A^{⊗2}
_AXIOM_STAGES: dict[str, tuple[int, tuple, tuple]] = {
    "i": (5,
          (("m", 1), ("m", 1)),
          (("swap", 3, 4), ("mbar", 2), ("swap", 3, 4), ("m", 3), ("m", 1))),
    "ii": (4,
           (("mbar", 1), ("swap", 2, 3), ("m", 2)),
           (("swap", 2, 3), ("perm", ((1, 1), (2, 1))), ("mbar", 1),
            ("perm", ((1, 2),)), ("swap", 1, 2), ("m", 2), ("mbar", 1))),
    "iii": (4,
            (("m", 1), ("mbar", 1)),
            (("swap", 2, 3), ("swap", 1, 2), ("mbar", 3), ("perm", ((1, 2),)),
             ("mbar", 2), ("swap", 1, 2), ("m", 2))),
    "iv": (3,
           (("mbar", 2), ("swap", 1, 2), ("mbar", 2)),
           (("perm", ((2, 2),)), ("mbar", 1), ("perm", ((1, 1), (2, 1))),
            ("mbar", 2), ("mbar", 1))),
    "v": (4,
          (("mbar", 1), ("perm", ((3, 2),)), ("swap", 2, 3), ("m", 2)),
          (("mbar", 3), ("m", 1))),
    "vi": (3,
           (("m", 1), ("perm", ((1, 1),))),
           (("swap", 1, 2), ("swap", 2, 3), ("perm", ((1, 1), (2, 1), (3, 1))),
            ("m", 1))),
    "vii": (2,
            (("swap", 1, 2), ("perm", ((1, 2), (2, 1))), ("mbar", 1)),
            (("perm", ((1, 2), (2, 1))), ("mbar", 1), ("swap", 1, 2))),
}


def _run_stages(alg: ThreeAlgebra, k: int, stages: tuple) -> np.ndarray:
    c = _Composite(alg.n, k, alg.P)
    for stage in stages:
        kind = stage[0]
        if kind == "swap":
            c.swap(stage[1], stage[2])
        elif kind == "perm":
            c.perm(stage[1])
        elif kind == "m":
            c.apply_op(alg.Qm.data, 3, stage[1])
        elif kind == "mbar":
            c.apply_op(alg.Qbar.data, 2, stage[1])
        else:  # pragma: no cover - table is static
            raise AssertionError(f"unknown stage {stage!r}")
    return c.finalize()


def axiom_residual(alg: ThreeAlgebra, which: str) -> float:
    """Max-abs difference between the two sides of one axiom, operator form."""
    if which not in AXIOM_IDS:
        raise ValueError(f"unknown axiom {which!r}")
    if which in M_DEPENDENT and alg.Qm is None:
        raise ValueError(f"axiom ({which}) involves m but Qm is absent")
    k, lhs_stages, rhs_stages = _AXIOM_STAGES[which]
    lhs = _run_stages(alg, k, lhs_stages)
    rhs = _run_stages(alg, k, rhs_stages)
    return float(np.max(np.abs(lhs - rhs)))


def axiom_report(alg: ThreeAlgebra, axioms: Sequence[str] = AXIOM_IDS,
                 tol: float = 1e-9, notes: Sequence[str] = ()) -> ResidualReport:
    """Residuals for several axioms at once."""
    residuals = {ax: axiom_residual(alg, ax) for ax in axioms}
    return ResidualReport.from_residuals(residuals, tol, notes)


# ---------------------------------------------------------------------------
# Coordinate forms of the labelling axioms and their symmetrizers.
#
#   (vi)  Q_{ijk}^s  = Q_{P(j)P(k)P(i)}^{P(s)}        (transform of order 3)
#   (vii) Q_{ij}^{st} = Q_{P²(j)P(i)}^{P²(t)P(s)}     (an involution)
# ---------------------------------------------------------------------------

def _transform_vii(arr: np.ndarray, p: BasisPermutation) -> np.ndarray:
    p1 = list(p.power_array(1))
    p2 = list(p.power_array(2))
    # U[j,i,t,s] = arr[P²(j), P(i), P²(t), P(s)], then reorder to [i,j,s,t]
    u = arr[np.ix_(p2, p1, p2, p1)]
    return u.transpose(1, 0, 3, 2)


def _transform_vi(arr: np.ndarray, p: BasisPermutation) -> np.ndarray:
    p1 = list(p.power_array(1))
    # U[j,k,i,s] = arr[P(j), P(k), P(i), P(s)], then reorder to [i,j,k,s]
    u = arr[np.ix_(p1, p1, p1, p1)]
    return u.transpose(2, 0, 1, 3)


def coordinate_axiom_residual(alg: ThreeAlgebra, which: str) -> float:
    """Residual of the coordinate identity for axiom (vi) or (vii)."""
    if which == "vi":
        if alg.Qm is None:
            raise ValueError("axiom (vi) involves m but Qm is absent")
        arr = alg.Qm.data
        return float(np.max(np.abs(arr - _transform_vi(arr, alg.P))))
    if which == "vii":
        arr = alg.Qbar.data
        return float(np.max(np.abs(arr - _transform_vii(arr, alg.P))))
    raise ValueError("coordinate form available for axioms 'vi' and 'vii' only")


def symmetrize(tensor: DenseTensor, p: BasisPermutation, rule: str) -> DenseTensor:
    """Average a tensor over the orbit of one coordinate transform.

    rule "vii" takes a Qbar-shaped tensor and averages with its single
    transform (the transform is an involution); rule "vi" takes a Qm-shaped
    tensor and averages over the three iterates of the order-3 transform.
    The output satisfies the corresponding coordinate identity exactly and
    the operation is idempotent.
    """
    if rule == "vii":
        if tensor.legs != _QBAR_LEGS:
            raise ValueError("rule 'vii' needs legs (lower, lower, upper, upper)")
        arr = tensor.data
        out = 0.5 * (arr + _transform_vii(arr, p))
    elif rule == "vi":
        if tensor.legs != _QM_LEGS:
            raise ValueError("rule 'vi' needs legs (lower, lower, lower, upper)")
        arr = tensor.data
        t1 = _transform_vi(arr, p)
        t2 = _transform_vi(t1, p)
        out = (arr + t1 + t2) / 3.0
    else:
        raise ValueError("rule must be 'vi' or 'vii'")
    return DenseTensor(n=tensor.n, legs=tensor.legs, data=out)
