import math
from collections import Counter

import numpy as np
import pytest

from conftest import random_qbar, swap_symmetric_qbar, twist_symmetric_form
from triqal.families import FamilyParams, embed, family, parameter_grid, trivial
from triqal.frobenius import BilinearForm
from triqal.lens import (
    brute_force_value,
    build_lens,
    evaluate,
    invariant,
    network_dump,
)
from triqal.tensor_core import BasisPermutation


def coprime_qs(p):
    return [q for q in range(1, p) if math.gcd(p, q) == 1]


class TestBuild:
    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            build_lens(2, 1)
        with pytest.raises(ValueError):
            build_lens(4, 0)
        with pytest.raises(ValueError):
            build_lens(4, 4)
        with pytest.raises(ValueError, match="coprime"):
            build_lens(4, 2)

    def test_counts(self):
        for p in range(3, 8):
            for q in coprime_qs(p):
                net = build_lens(p, q)
                assert len(net.tetras) == 2 * (p - 2)
                assert len(net.bonds) == 4 * (p - 2)

    def test_untwisted_gluing_needs_no_mediators(self):
        for p in range(3, 7):
            net = build_lens(p, 1)
            assert all(b.mediator == "direct" for b in net.bonds)

    def test_twisted_gluing_uses_one_mediator_pair(self):
        for p in range(4, 8):
            for q in coprime_qs(p):
                if q == 1:
                    continue
                counts = Counter(b.mediator for b in build_lens(p, q).bonds)
                assert counts["h"] == 1
                assert counts["h_inv"] == 1

    def test_every_slot_bonded_exactly_once(self):
        net = build_lens(5, 2)
        ends = [end for bond in net.bonds for end in bond.ends]
        assert sorted(ends) == [(t, s) for t in range(len(net.tetras))
                                for s in range(4)]

    def test_face_signs(self):
        net = build_lens(3, 1)
        for tet in net.tetras:
            assert [f.sign for f in tet.faces] == ["-", "-", "+", "+"]

    def test_bond_ends_are_sorted(self):
        for bond in build_lens(5, 3).bonds:
            assert bond.ends == tuple(sorted(bond.ends))


class TestPrintedPatterns:
    """The two smallest networks reduce to closed-form contractions."""

    def test_l31_equals_closed_form(self, rng):
        for n in (2, 3):
            qt = random_qbar(n, rng)
            q = qt.data
            expected = complex(np.einsum('abcd,cdba->', q, q))
            got = invariant(3, 1, qt, BilinearForm.identity(n))
            assert got == pytest.approx(expected, abs=1e-12)

    def test_l41_equals_closed_form(self, rng):
        for n in (2, 3):
            qt = random_qbar(n, rng)
            q = qt.data
            expected = complex(np.einsum('abcd,ecfg,fdbh,hgae->', q, q, q, q))
            got = invariant(4, 1, qt, BilinearForm.identity(n))
            assert got == pytest.approx(expected, abs=1e-12)


class TestGreedyAgainstBruteForce:
    def test_untwisted(self, rng):
        for p in (3, 4, 5):
            net = build_lens(p, 1)
            for _ in range(2):
                qt = random_qbar(2, rng)
                h = BilinearForm.identity(2)
                assert evaluate(net, qt, h) == pytest.approx(
                    brute_force_value(net, qt, h), abs=1e-10)

    def test_twisted_with_generic_form(self, rng):
        p_id = BasisPermutation.identity(2)
        for p, q in ((4, 3), (5, 2), (5, 3)):
            net = build_lens(p, q)
            for _ in range(2):
                qt = random_qbar(2, rng)
                h = twist_symmetric_form(2, p_id, rng)
                assert evaluate(net, qt, h) == pytest.approx(
                    brute_force_value(net, qt, h), abs=1e-10)


class TestAnchorValues:
    def test_l31_is_two_on_grid_and_trivial(self):
        h = BilinearForm.identity(2)
        for params in parameter_grid():
            value = invariant(3, 1, embed(family(params)), h)
            assert value == pytest.approx(2.0, abs=1e-12), params
        assert invariant(3, 1, embed(trivial()), h) == pytest.approx(2.0,
                                                                     abs=1e-12)

    def test_l41_values(self):
        h = BilinearForm.identity(2)
        member = embed(family(FamilyParams(d=0.25, alpha=4.0)))
        assert invariant(4, 1, member, h) == pytest.approx(2.0, abs=1e-12)
        assert invariant(4, 3, member, h) == pytest.approx(2.5625, abs=1e-12)
        assert invariant(4, 1, embed(trivial()), h) == pytest.approx(
            2.0, abs=1e-12)

    def test_alpha_one_collapses_the_mirror_pair(self):
        h = BilinearForm.identity(2)
        member = embed(family(FamilyParams(d=0.25, alpha=1.0)))
        assert invariant(4, 1, member, h) == pytest.approx(2.0, abs=1e-12)
        assert invariant(4, 3, member, h) == pytest.approx(2.0, abs=1e-12)

    def test_mirror_values_differ_off_alpha_one(self):
        h = BilinearForm.identity(2)
        member = embed(family(FamilyParams(d=0.25, alpha=4.0)))
        a = invariant(4, 1, member, h)
        b = invariant(4, 3, member, h)
        assert abs(a - b) > 0.5

    def test_untwisted_value_is_p_independent_on_family(self):
        h = BilinearForm.identity(2)
        member = embed(family(FamilyParams(d=0.25, alpha=4.0)))
        for p in range(3, 7):
            assert invariant(p, 1, member, h) == pytest.approx(2.0, abs=1e-11)


class TestDump:
    def test_shape(self):
        net = build_lens(4, 3)
        doc = network_dump(net)
        assert doc["p"] == 4 and doc["q"] == 3
        assert len(doc["tetras"]) == 4
        assert len(doc["bonds"]) == 8
        assert [b["id"] for b in doc["bonds"]] == list(range(8))
        for tet in doc["tetras"]:
            assert tet["kind"] in ("N", "S")
            assert len(tet["faces"]) == 4
            for face in tet["faces"]:
                assert set(face) == {"vertices", "sign", "bond"}

    def test_dump_is_json_ready(self):
        import json
        json.dumps(network_dump(build_lens(5, 2)))


def test_mediator_orientation_regression(rng):
    """The mediated lateral pair must contract h against the network the
    same way the independent summation does; a transposed h would slip
    through symmetric test forms, so use an asymmetric one here."""
    net = build_lens(4, 3)
    qt = swap_symmetric_qbar(2, rng)
    h = BilinearForm.from_matrix(np.array([[1.0, 0.7], [0.7, 2.0]]))
    assert evaluate(net, qt, h) == pytest.approx(
        brute_force_value(net, qt, h), abs=1e-10)
