"""Lens-space L(p,q) triangulations as closed contraction networks.

The space is triangulated as a bipyramid over a p-gon A_1..A_p with poles N
and S: the polygon is split into triangles A_l A_{l+1} A_p by diagonals from
A_p (l = 1..p−2), and each triangle is coned to both poles, giving 2(p−2)
tetrahedra.  Gluing the boundary identifies the northern lateral face over
polygon edge l with the southern lateral face over edge l+q (indices cyclic,
A_{p+1} = A_1), which encodes the twist q.

Every tetrahedron carries the comultiplication tensor (two inputs, two
outputs).  A face shared by an input slot and an output slot contracts
directly; when the twist pairs two inputs the bond is mediated by the
bilinear form h, and two outputs by h_inv — the raising/lowering that the
full-algebra structure exists to provide.  For q = 1 every bond is direct.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass

import numpy as np

from .frobenius import BilinearForm
from .tensor_core import LOWER, UPPER, DenseTensor

_QBAR_LEGS = (LOWER, LOWER, UPPER, UPPER)

SIGN_IN = "-"
SIGN_OUT = "+"

#: Slot order within a tetrahedron record.
SLOT_NAMES = ("input1", "input2", "output1", "output2")
_SLOT_SIGNS = (SIGN_IN, SIGN_IN, SIGN_OUT, SIGN_OUT)


@dataclass(frozen=True)
class Face:
    """One triangular face of a tetrahedron, tagged by gluing data."""

    vertices: tuple[str, str, str]
    sign: str
    bond: int


@dataclass(frozen=True)
class Tetra:
    """A cone tetrahedron; faces ordered (input1, input2, output1, output2)."""

    kind: str      # "N" or "S"
    index: int     # l in 1..p−2
    faces: tuple[Face, Face, Face, Face]


@dataclass(frozen=True)
class Bond:
    """A glued face pair.  ends = ((tetra, slot), (tetra, slot)) ordered by
    (tetra position in the network, slot); for a mediated bond the mediator
    matrix's first index pairs with the first end."""

    id: int
    ends: tuple[tuple[int, int], tuple[int, int]]
    mediator: str  # "direct" | "h" | "h_inv"


@dataclass(frozen=True)
class ContractionNetwork:
    p: int
    q: int
    tetras: tuple[Tetra, ...]
    bonds: tuple[Bond, ...]

    def __post_init__(self):
        seen: set[tuple[int, int]] = set()
        for b in self.bonds:
            for end in b.ends:
                if end in seen:
                    raise ValueError(f"slot {end} appears in two bonds")
                seen.add(end)
        expected = {(t, s) for t in range(len(self.tetras)) for s in range(4)}
        if seen != expected:
            raise ValueError("network has open legs; every slot must be bonded")


def _vertex_key(name: str):
    if name.startswith("A"):
        return (0, int(name[1:]))
    return (1, name)


def _sorted_face(*names: str) -> tuple[str, str, str]:
    return tuple(sorted(names, key=_vertex_key))  # type: ignore[return-value]


def build_lens(p: int, q: int) -> ContractionNetwork:
    """The L(p,q) network.

    Tetrahedra are listed N_1..N_{p−2} then S_1..S_{p−2}, with faces

        N_l: inputs (A_lA_{l+1}N, A_lA_pN), outputs (A_{l+1}A_pN, A_lA_{l+1}A_p)
        S_l: inputs (A_lA_pS, A_lA_{l+1}A_p), outputs (A_lA_{l+1}S, A_{l+1}A_pS)

    Bonds, in id order: the p lateral identifications (northern edge l glued
    to southern edge l+q, cyclically), the polar diagonals A_lA_pN and
    A_lA_pS for l = 2..p−2, and the p−2 base triangles.  Only a lateral bond
    can pair equal signs, and only when q ≠ 1: the one northern output edge
    (l = p−1) then meets a southern output (mediator h_inv) and the edge
    landing on the southern input (l = p−q) pairs two inputs (mediator h).
    """
    if p < 3:
        raise ValueError("p must be at least 3")
    if not 1 <= q < p:
        raise ValueError("q must satisfy 1 <= q < p")
    if math.gcd(p, q) != 1:
        raise ValueError("q must be coprime to p")

    def edge(l: int) -> tuple[int, int]:
        # polygon edge l = (A_l, A_{l+1}) with A_{p+1} = A_1
        return l, (l % p) + 1

    # where each lateral face lives: edge -> (tetra position, slot)
    north_lat: dict[int, tuple[int, int]] = {}
    south_lat: dict[int, tuple[int, int]] = {}
    for l in range(1, p - 1):          # N_l at position l−1
        north_lat[l] = (l - 1, 0)
    north_lat[p - 1] = (p - 3, 2)      # output1 of the last northern tet
    north_lat[p] = (0, 1)              # input2 of the first northern tet
    for l in range(1, p - 1):          # S_l at position p−2 + l−1
        south_lat[l] = (p - 2 + l - 1, 2)
    south_lat[p - 1] = (2 * p - 5, 3)  # output2 of the last southern tet
    south_lat[p] = (p - 2, 0)          # input1 of the first southern tet

    bonds: list[Bond] = []
    bond_at: dict[tuple[int, int], int] = {}

    def add_bond(end_a: tuple[int, int], end_b: tuple[int, int], mediator: str):
        ends = tuple(sorted((end_a, end_b)))
        bid = len(bonds)
        bonds.append(Bond(id=bid, ends=ends, mediator=mediator))
        bond_at[ends[0]] = bid
        bond_at[ends[1]] = bid

    for l in range(1, p + 1):
        m = ((l + q - 1) % p) + 1
        n_end, s_end = north_lat[l], south_lat[m]
        n_sign = _SLOT_SIGNS[n_end[1]]
        s_sign = _SLOT_SIGNS[s_end[1]]
        if n_sign != s_sign:
            mediator = "direct"
        elif n_sign == SIGN_IN:
            mediator = "h"
        else:
            mediator = "h_inv"
        add_bond(n_end, s_end, mediator)
    for l in range(2, p - 1):
        add_bond((l - 2, 2), (l - 1, 1), "direct")            # A_lA_pN
    for l in range(2, p - 1):
        add_bond((p - 2 + l - 2, 3), (p - 2 + l - 1, 0), "direct")  # A_lA_pS
    for l in range(1, p - 1):
        add_bond((l - 1, 3), (p - 2 + l - 1, 1), "direct")    # A_lA_{l+1}A_p

    tetras: list[Tetra] = []
    for l in range(1, p - 1):
        e1, e2 = edge(l)
        pos = l - 1
        faces = (
            Face(_sorted_face(f"A{e1}", f"A{e2}", "N"), SIGN_IN, bond_at[(pos, 0)]),
            Face(_sorted_face(f"A{l}", f"A{p}", "N"), SIGN_IN, bond_at[(pos, 1)]),
            Face(_sorted_face(f"A{l + 1}", f"A{p}", "N"), SIGN_OUT, bond_at[(pos, 2)]),
            Face(_sorted_face(f"A{e1}", f"A{e2}", f"A{p}"), SIGN_OUT, bond_at[(pos, 3)]),
        )
        tetras.append(Tetra(kind="N", index=l, faces=faces))
    for l in range(1, p - 1):
        e1, e2 = edge(l)
        pos = p - 2 + l - 1
        faces = (
            Face(_sorted_face(f"A{l}", f"A{p}", "S"), SIGN_IN, bond_at[(pos, 0)]),
            Face(_sorted_face(f"A{e1}", f"A{e2}", f"A{p}"), SIGN_IN, bond_at[(pos, 1)]),
            Face(_sorted_face(f"A{e1}", f"A{e2}", "S"), SIGN_OUT, bond_at[(pos, 2)]),
            Face(_sorted_face(f"A{l + 1}", f"A{p}", "S"), SIGN_OUT, bond_at[(pos, 3)]),
        )
        tetras.append(Tetra(kind="S", index=l, faces=faces))

    return ContractionNetwork(p=p, q=q, tetras=tuple(tetras), bonds=tuple(bonds))


def _prepare_tensors(net: ContractionNetwork, qbar: DenseTensor,
                     h: BilinearForm) -> tuple[list[np.ndarray], list[list[int]]]:
    """Assign Qbar to every tetra and absorb bond mediators.

    Returns per-tetra arrays and, parallel to each array's axes, the bond id
    each axis belongs to.  A mediated bond multiplies the mediator matrix
    into its first end (the matrix's second index replaces the leg, moving
    to the last axis position).
    """
    if qbar.legs != _QBAR_LEGS:
        raise ValueError("expected a comultiplication tensor")
    if h.n != qbar.n:
        raise ValueError("form dimension differs from tensor dimension")
    arrays = [qbar.data for _ in net.tetras]
    axis_bonds: list[list[int]] = [[-1] * 4 for _ in net.tetras]
    for b in net.bonds:
        for t, s in b.ends:
            axis_bonds[t][s] = b.id
    for b in net.bonds:
        if b.mediator == "direct":
            continue
        mat = h.h if b.mediator == "h" else h.h_inv
        t0, _ = b.ends[0]
        ax = axis_bonds[t0].index(b.id)
        arrays[t0] = np.tensordot(arrays[t0], mat, axes=([ax], [0]))
        axis_bonds[t0] = [x for i, x in enumerate(axis_bonds[t0]) if i != ax] + [b.id]
    return arrays, axis_bonds


def evaluate(net: ContractionNetwork, qbar: DenseTensor,
             h: BilinearForm) -> complex:
    """Contract the closed network to its scalar value.

    Greedy schedule: repeatedly contract the bond whose contraction yields
    the smallest intermediate tensor rank (merging two pieces contracts all
    bonds between them at once; a bond inside one piece is a trace), ties
    broken by lowest bond id.  The result is schedule-independent and is
    cross-checked against full summation in the test suite.
    """
    arrays, axis_bonds = _prepare_tensors(net, qbar, h)
    comp_of = list(range(len(net.tetras)))

    def bond_comps(b: Bond) -> tuple[int, int]:
        return comp_of[b.ends[0][0]], comp_of[b.ends[1][0]]

    remaining: dict[int, Bond] = {b.id: b for b in net.bonds}
    # component id -> (array, axis bond ids); components are keyed by the
    # smallest tetra they contain
    comp_data: dict[int, tuple[np.ndarray, list[int]]] = {
        i: (arrays[i], axis_bonds[i]) for i in range(len(net.tetras))}

    while remaining:
        best_key = None
        best_bond = None
        for b in remaining.values():
            c0, c1 = bond_comps(b)
            if c0 == c1:
                new_rank = len(comp_data[c0][1]) - 2
            else:
                between = sum(1 for x in remaining.values()
                              if set(bond_comps(x)) == {c0, c1})
                new_rank = (len(comp_data[c0][1]) + len(comp_data[c1][1])
                            - 2 * between)
            key = (new_rank, b.id)
            if best_key is None or key < best_key:
                best_key, best_bond = key, b
        b = best_bond
        c0, c1 = bond_comps(b)
        if c0 == c1:
            arr, bonds_ax = comp_data[c0]
            i = bonds_ax.index(b.id)
            j = bonds_ax.index(b.id, i + 1)
            arr = np.trace(arr, axis1=i, axis2=j)
            comp_data[c0] = (arr, [x for k, x in enumerate(bonds_ax)
                                   if k not in (i, j)])
            del remaining[b.id]
        else:
            c0, c1 = min(c0, c1), max(c0, c1)
            a0, ax0 = comp_data[c0]
            a1, ax1 = comp_data[c1]
            joining = [x for x in remaining.values()
                       if set(bond_comps(x)) == {c0, c1}]
            # each joining bond has one axis in each component
            left = [ax0.index(x.id) for x in joining]
            right = [ax1.index(x.id) for x in joining]
            merged = np.tensordot(a0, a1, axes=(left, right))
            new_ax = ([x for i, x in enumerate(ax0) if i not in set(left)]
                      + [x for i, x in enumerate(ax1) if i not in set(right)])
            comp_data[c0] = (merged, new_ax)
            del comp_data[c1]
            for t in range(len(comp_of)):
                if comp_of[t] == c1:
                    comp_of[t] = c0
            for x in joining:
                del remaining[x.id]

    (final_arr, final_ax), = comp_data.values()
    if final_ax:
        raise AssertionError("network closed but legs remain")
    return complex(final_arr)


def brute_force_value(net: ContractionNetwork, qbar: DenseTensor,
                      h: BilinearForm) -> complex:
    """Independent oracle: one flat sum over an index per bond.

    Each bond gets a summation symbol (two symbols plus a mediator-matrix
    factor when the bond is not direct); every tetra contributes its tensor
    with its slots' symbols.  Evaluated as a single einsum.
    """
    if qbar.legs != _QBAR_LEGS:
        raise ValueError("expected a comultiplication tensor")
    if h.n != qbar.n:
        raise ValueError("form dimension differs from tensor dimension")
    letters = iter(string.ascii_letters)
    end_symbol: dict[tuple[int, int], str] = {}
    extra_terms: list[str] = []
    extra_arrays: list[np.ndarray] = []
    for b in net.bonds:
        if b.mediator == "direct":
            s = next(letters)
            end_symbol[b.ends[0]] = s
            end_symbol[b.ends[1]] = s
        else:
            s0, s1 = next(letters), next(letters)
            end_symbol[b.ends[0]] = s0
            end_symbol[b.ends[1]] = s1
            extra_terms.append(s0 + s1)
            extra_arrays.append(h.h if b.mediator == "h" else h.h_inv)
    terms = []
    for t in range(len(net.tetras)):
        terms.append(''.join(end_symbol[(t, s)] for s in range(4)))
    subscript = ','.join(terms + extra_terms) + '->'
    operands = [qbar.data] * len(net.tetras) + extra_arrays
    return complex(np.einsum(subscript, *operands))


def invariant(p: int, q: int, qbar: DenseTensor, h: BilinearForm) -> complex:
    """The L(p,q) value for one comultiplication tensor and form."""
    return evaluate(build_lens(p, q), qbar, h)


def network_dump(net: ContractionNetwork) -> dict:
    """JSON-ready description of the network (used by the CLI)."""
    return {
        "p": net.p,
        "q": net.q,
        "tetras": [
            {
                "kind": t.kind,
                "l": t.index,
                "faces": [
                    {"vertices": list(f.vertices), "sign": f.sign, "bond": f.bond}
                    for f in t.faces
                ],
            }
            for t in net.tetras
        ],
        "bonds": [{"id": b.id, "mediator": b.mediator} for b in net.bonds],
    }
