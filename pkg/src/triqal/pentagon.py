"""Pentagon identity and its relatives for trivial edge labelling (P = id).

All operations here act on a comultiplication tensor Qbar with signature
(lower i, lower j, upper s, upper t), i.e. m̄(e_i ⊗ e_j) = Σ Q_{ij}^{st}
e_s ⊗ e_t, and none of them move basis labels through P: this is the
calculus available once the labelling permutation is trivial.

Index dictionaries for each contraction are given in the docstrings; primed
dummy indices of the source identities are capitalised in the einsum strings.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_core import LOWER, UPPER, DenseTensor

_MBAR_LEGS = (LOWER, LOWER, UPPER, UPPER)


def _q(qbar: DenseTensor) -> np.ndarray:
    if qbar.legs != _MBAR_LEGS:
        raise ValueError("expected a comultiplication tensor "
                         "(lower, lower, upper, upper)")
    return qbar.data


def swap_symmetrize(qbar: DenseTensor) -> DenseTensor:
    """Project onto tensors commuting with the flip: Q_{ij}^{st} = Q_{ji}^{ts}.

    Replaces Q by (Q + Q with both index pairs swapped)/2; idempotent.
    """
    q = _q(qbar)
    return DenseTensor(n=qbar.n, legs=_MBAR_LEGS,
                       data=0.5 * (q + q.transpose(1, 0, 3, 2)))


def swap_symmetry_residual(qbar: DenseTensor) -> float:
    """Max-abs of Q_{ij}^{st} − Q_{ji}^{ts}."""
    q = _q(qbar)
    return float(np.max(np.abs(q - q.transpose(1, 0, 3, 2))))


def pentagon_operator_sides(qbar: DenseTensor) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the operator pentagon identity on A^{⊗3}.

    With (m̄)_{uv} meaning m̄ applied to tensor slots (u, v) — first m̄ leg on
    slot u, second on slot v, outputs written back in that slot order — the
    identity is

        (m̄)_{12} (m̄)_{23}  =  (m̄)_{23} (m̄)_{13} (m̄)_{21},

    composition read right to left.  Slot letters below: inputs a,b,c (LHS)
    / x,y,z (RHS), outputs u,v,w, capitals summed.

    LHS: (m̄)_{23} sends (a,b,c) → Σ Q[b,c,A,w] (a,A,w); then (m̄)_{12} gives
    Σ Q[a,A,u,v] (u,v,w).

    RHS: (m̄)_{21} reads slots in the order (2,1): Σ Q[y,x,A,B] with first
    output A back into slot 2 and second output B into slot 1, state (B,A,z);
    then (m̄)_{13}: Σ Q[B,z,u,D] → (u,A,D); then (m̄)_{23}: Σ Q[A,D,v,w].
    """
    q = _q(qbar)
    lhs = np.einsum('bcAw,aAuv->abcuvw', q, q)
    rhs = np.einsum('yxAB,BzuD,ADvw->xyzuvw', q, q, q)
    return lhs, rhs


def pentagon_residual(qbar: DenseTensor) -> float:
    """Max-abs residual of the operator pentagon identity."""
    lhs, rhs = pentagon_operator_sides(qbar)
    return float(np.max(np.abs(lhs - rhs)))


def pentagon_coordinate_residual(qbar: DenseTensor) -> float:
    """Coordinate form of the pentagon identity:

        Q_{rl'}^{ts} Q_{ji}^{l'k}  =  Q_{j't'}^{sk} Q_{i'i}^{tt'} Q_{jr}^{j'i'}

    summed over primed indices; free (r,j,i,t,s,k).  Agrees with
    :func:`pentagon_residual` identically (same multiset of entries).
    """
    return float(np.max(np.abs(pentagon_coordinate_tensor(qbar))))


def pentagon_coordinate_tensor(qbar: DenseTensor) -> np.ndarray:
    """LHS − RHS of the coordinate pentagon identity, free legs (r,j,i,t,s,k).

    Dictionary: l'→L, j'→J, t'→T, i'→I.
    """
    q = _q(qbar)
    lhs = np.einsum('rLts,jiLk->rjitsk', q, q)
    rhs = np.einsum('JTsk,IitT,jrJI->rjitsk', q, q, q)
    return lhs - rhs


def pachner14_residual(qbar: DenseTensor) -> float:
    """Quartic one-to-four subdivision identity:

        Q_{ij}^{kl} = Q_{ij'}^{k'l'} Q_{jr'}^{s'j'} Q_{k's'}^{kp'} Q_{l'p'}^{lr'}

    (sum over the six primed indices; dictionary j'→J, k'→K, l'→L, r'→R,
    s'→S, p'→P).  Returns max over (i,j,k,l) of |LHS − RHS|.
    """
    q = _q(qbar)
    rhs = np.einsum('iJKL,jRSJ,KSkP,LPlR->ijkl', q, q, q, q)
    return float(np.max(np.abs(q - rhs)))


def cubic_residual(qbar: DenseTensor) -> float:
    """Cubic reduction of the subdivision identity:

        Q_{ij}^{kl} = Q_{r'z'}^{l'p'} Q_{ji}^{z'k} Q_{l'p'}^{lr'}

    (dictionary r'→R, z'→Z, l'→L, p'→P).  Max-abs over (i,j,k,l).
    """
    q = _q(qbar)
    rhs = np.einsum('RZLP,jiZk,LPlR->ijkl', q, q, q)
    return float(np.max(np.abs(q - rhs)))


@dataclass(frozen=True)
class ProjectorMatrix:
    """The matrix B_{jk} = Σ_{i'} Q_{i'j}^{k i'} of partial self-contraction."""

    B: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "B", np.asarray(self.B, dtype=np.complex128))


def projector_matrix(qbar: DenseTensor) -> ProjectorMatrix:
    """Contract the first lower leg against the second upper leg."""
    return ProjectorMatrix(B=np.einsum('ijki->jk', _q(qbar)))


def projector_residual(b: ProjectorMatrix) -> float:
    """Max-abs of B² − B; zero exactly when B is a projector."""
    return float(np.max(np.abs(b.B @ b.B - b.B)))


# ---------------------------------------------------------------------------
# Residual tensors of the raised axiom identities (P = id).
#
# When every structure constant is raised to the all-between-neighbours form
# with a bilinear form, axioms (i)-(iv) become quadratic-equals-cubic
# coordinate identities in Qbar alone.  The builders below return LHS − RHS
# as a rank-6 array; axioms are named by their roman numeral in the
# 3-algebra definition (see the lawrence module), plus "pentagon".
# ---------------------------------------------------------------------------

RAISED_IDENTITY_NAMES = ("i", "ii", "iii", "iv", "pentagon")


def raised_identity_residual_tensor(qbar: DenseTensor, name: str) -> np.ndarray:
    """LHS − RHS of one raised coordinate identity, as a rank-6 array.

    Index dictionaries (capitals summed):

    * "i":   Q_{tl'}^{ru} Q_{jk}^{l'q} − Q_{j'l'}^{rq} Q_{k'j}^{j'u} Q_{kt}^{k'l'},
             free (t,j,k,r,u,q); l'→L, j'→J, k'→K.
    * "ii":  Q_{ij}^{tj'} Q_{kj'}^{sq} − Q_{k's'}^{ts} Q_{ik}^{i'k'} Q_{i'j}^{s'q},
             free (i,j,k,t,s,q); j'→J, k'→K, s'→S, i'→I.
    * "iii": Q_{s'l}^{qr} Q_{ij}^{s't} − Q_{t'l'}^{rt} Q_{ij'}^{qt'} Q_{jl}^{j'l'},
             free (l,i,j,q,r,t); s'→S, t'→T, l'→L, j'→J.
    * "iv":  Q_{ik'}^{st} Q_{jk}^{rk'} − Q_{i'p'}^{rs} Q_{j'k}^{p't} Q_{ij}^{i'j'},
             free (i,j,k,r,s,t); k'→K, i'→I, p'→M, j'→J.
    * "pentagon": see :func:`pentagon_coordinate_tensor`.
    """
    q = _q(qbar)
    if name == "i":
        lhs = np.einsum('tLru,jkLq->tjkruq', q, q)
        rhs = np.einsum('JLrq,KjJu,ktKL->tjkruq', q, q, q)
    elif name == "ii":
        lhs = np.einsum('ijtJ,kJsq->ijktsq', q, q)
        rhs = np.einsum('KSts,ikIK,IjSq->ijktsq', q, q, q)
    elif name == "iii":
        lhs = np.einsum('Slqr,ijSt->lijqrt', q, q)
        rhs = np.einsum('TLrt,iJqT,jlJL->lijqrt', q, q, q)
    elif name == "iv":
        lhs = np.einsum('iKst,jkrK->ijkrst', q, q)
        rhs = np.einsum('IMrs,JkMt,ijIJ->ijkrst', q, q, q)
    elif name == "pentagon":
        return pentagon_coordinate_tensor(qbar)
    else:
        raise ValueError(f"unknown raised identity {name!r}")
    return lhs - rhs


#: Leg renamings between raised-identity residual tensors verified to hold
#: entrywise on every flip-symmetric Qbar (Q_{ij}^{st} = Q_{ji}^{ts}):
#: RESIDUAL_RENAMINGS[(target, source)] = axes such that
#: residual(target) == residual(source).transpose(axes).
#: Every ordered pair among the four raised identities has one (found by
#: exhaustive search over the 720 leg permutations, unique in each case).
#: No such renaming exists between any of them and "pentagon" (same
#: exhaustive search comes up empty; the identity comultiplication separates
#: them — its pentagon residual vanishes while its "iv" residual does not).
RESIDUAL_RENAMINGS: dict[tuple[str, str], tuple[int, ...]] = {
    ("i", "ii"): (2, 1, 0, 4, 5, 3),
    ("i", "iii"): (0, 1, 2, 4, 3, 5),
    ("i", "iv"): (0, 2, 1, 4, 5, 3),
    ("ii", "i"): (2, 1, 0, 5, 3, 4),
    ("ii", "iii"): (2, 1, 0, 5, 4, 3),
    ("ii", "iv"): (1, 2, 0, 3, 4, 5),
    ("iii", "i"): (0, 1, 2, 4, 3, 5),
    ("iii", "ii"): (2, 1, 0, 5, 4, 3),
    ("iii", "iv"): (0, 2, 1, 5, 4, 3),
    ("iv", "i"): (0, 2, 1, 5, 3, 4),
    ("iv", "ii"): (2, 0, 1, 3, 4, 5),
    ("iv", "iii"): (0, 2, 1, 5, 4, 3),
}
