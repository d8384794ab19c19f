"""Dense complex tensor arithmetic used by every other module.

A :class:`DenseTensor` is a rank-r complex array whose axes all have the same
dimension ``n`` and carry a tag: ``"lower"`` for input legs (subscripts) or
``"upper"`` for output legs (superscripts).  Row-major storage; leg order is
authoritative: leg ``k`` is the ``k``-th index of the underlying array.

Indices are 0-based everywhere; 1-based subscripts from the literature map by
subtracting one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

LOWER = "lower"
UPPER = "upper"

#: Hard caps; all concrete instances in scope are n = 2 or 3.
MAX_N = 8
MAX_RANK = 8

DEFAULT_TOL = 1e-9


def _as_complex_array(data, shape) -> np.ndarray:
    arr = np.asarray(data, dtype=np.complex128)
    if arr.shape != shape:
        arr = arr.reshape(shape)
    return arr


@dataclass(frozen=True)
class DenseTensor:
    """Rank-r complex tensor, all dimensions ``n``, legs tagged lower/upper."""

    n: int
    legs: tuple[str, ...]
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1 or self.n > MAX_N:
            raise ValueError(f"dimension n={self.n} outside supported range 1..{MAX_N}")
        if len(self.legs) > MAX_RANK:
            raise ValueError(f"rank {len(self.legs)} exceeds cap {MAX_RANK}")
        for tag in self.legs:
            if tag not in (LOWER, UPPER):
                raise ValueError(f"bad leg tag {tag!r}")
        shape = (self.n,) * len(self.legs)
        arr = _as_complex_array(self.data, shape)
        object.__setattr__(self, "legs", tuple(self.legs))
        object.__setattr__(self, "data", arr)
        if arr.size and not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ValueError("tensor entries must be finite")

    @property
    def rank(self) -> int:
        return len(self.legs)

    @classmethod
    def from_array(cls, data, legs: Sequence[str], n: int | None = None) -> "DenseTensor":
        arr = np.asarray(data, dtype=np.complex128)
        if n is None:
            n = arr.shape[0] if arr.ndim else 1
        return cls(n=n, legs=tuple(legs), data=arr)

    @classmethod
    def identity_map(cls, n: int) -> "DenseTensor":
        """Identity A -> A as a (lower, upper) tensor."""
        return cls(n=n, legs=(LOWER, UPPER), data=np.eye(n, dtype=np.complex128))


@dataclass(frozen=True)
class BasisPermutation:
    """A bijection of basis indices with the order-3 constraint built in."""

    n: int
    map: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(x) for x in self.map)
        object.__setattr__(self, "map", m)
        if sorted(m) != list(range(self.n)):
            raise ValueError("map is not a bijection on 0..n-1")
        # power_array reduces exponents mod 3, so cube explicitly here.
        if tuple(m[m[m[i]]] for i in range(self.n)) != tuple(range(self.n)):
            raise ValueError("permutation does not satisfy P^3 = id")

    @classmethod
    def identity(cls, n: int) -> "BasisPermutation":
        return cls(n=n, map=tuple(range(n)))

    @classmethod
    def three_cycle(cls, n: int) -> "BasisPermutation":
        """The cycle 0 -> 1 -> 2 -> 0 on the first three indices (n >= 3)."""
        if n < 3:
            raise ValueError("a 3-cycle needs n >= 3")
        m = list(range(n))
        m[0], m[1], m[2] = 1, 2, 0
        return cls(n=n, map=tuple(m))

    def __call__(self, i: int) -> int:
        return self.map[i]

    def power_array(self, k: int) -> tuple[int, ...]:
        """The permutation p^k as an index array (k taken mod 3)."""
        k = k % 3
        out = list(range(self.n))
        for _ in range(k):
            out = [self.map[i] for i in out]
        return tuple(out)

    def inverse_array(self) -> tuple[int, ...]:
        return self.power_array(2)  # P^-1 = P^2


def contract(a: DenseTensor, b: DenseTensor,
             pairs: Iterable[tuple[int, int]]) -> DenseTensor:
    """Contract paired legs of ``a`` and ``b``.

    Each pair is ``(leg-of-a, leg-of-b)`` and must join one lower and one
    upper leg.  The result carries a's unpaired legs followed by b's unpaired
    legs, in their original order.
    """
    pairs = list(pairs)
    if a.n != b.n:
        raise ValueError("dimension mismatch between operands")
    a_axes = [p[0] for p in pairs]
    b_axes = [p[1] for p in pairs]
    if len(set(a_axes)) != len(a_axes) or len(set(b_axes)) != len(b_axes):
        raise ValueError("a leg appears twice in pairs")
    for ia, ib in pairs:
        if not (0 <= ia < a.rank and 0 <= ib < b.rank):
            raise ValueError(f"pair ({ia},{ib}) out of range")
        if a.legs[ia] == b.legs[ib]:
            raise ValueError(
                f"pair ({ia},{ib}) joins two {a.legs[ia]} legs; "
                "contraction needs one lower and one upper")
    out_rank = a.rank + b.rank - 2 * len(pairs)
    if out_rank > MAX_RANK:
        raise ValueError(f"result rank {out_rank} exceeds cap {MAX_RANK}")
    data = np.tensordot(a.data, b.data, axes=(a_axes, b_axes))
    legs = tuple(t for i, t in enumerate(a.legs) if i not in set(a_axes)) + \
        tuple(t for i, t in enumerate(b.legs) if i not in set(b_axes))
    if not legs:
        # scalar result; keep it as a rank-0 tensor
        return DenseTensor(n=a.n, legs=(), data=data)
    return DenseTensor(n=a.n, legs=legs, data=data)


def permute_legs(t: DenseTensor, perm: Sequence[int]) -> DenseTensor:
    """Reorder legs so that new leg ``k`` is old leg ``perm[k]``; tags travel."""
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(t.rank)):
        raise ValueError("perm is not a bijection on the legs")
    data = np.transpose(t.data, perm)
    legs = tuple(t.legs[p] for p in perm)
    return DenseTensor(n=t.n, legs=legs, data=data)


def apply_basis_perm(t: DenseTensor, p: BasisPermutation, leg: int,
                     power: int = 1) -> DenseTensor:
    """Apply P^power to one leg.

    A lower leg is relabelled through ``p^power``; an upper leg through the
    inverse, so that composing maps built from these tensors matches operator
    composition (P applied to an output index is the inverse relabelling of
    the coefficient array).
    """
    if not (0 <= leg < t.rank):
        raise ValueError(f"leg {leg} out of range")
    if power % 3 == 0:
        return t
    if t.legs[leg] == LOWER:
        idx = p.power_array(power)
    else:
        idx = p.power_array(-power)
    data = np.take(t.data, idx, axis=leg)
    return DenseTensor(n=t.n, legs=t.legs, data=data)


def max_abs_diff(a: DenseTensor, b: DenseTensor) -> float:
    if a.n != b.n or a.legs != b.legs:
        raise ValueError("tensor signatures do not match")
    if a.data.size == 0:
        return 0.0
    return float(np.max(np.abs(a.data - b.data)))
