import numpy as np
import pytest

from triqal.frobenius import BilinearForm, symmetrize_form
from triqal.lawrence import ThreeAlgebra, symmetrize
from triqal.tensor_core import LOWER, UPPER, BasisPermutation, DenseTensor

QBAR_LEGS = (LOWER, LOWER, UPPER, UPPER)
QM_LEGS = (LOWER, LOWER, LOWER, UPPER)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_qbar(n, rng):
    data = rng.standard_normal((n,) * 4) + 1j * rng.standard_normal((n,) * 4)
    return DenseTensor(n=n, legs=QBAR_LEGS, data=data)


def random_qm(n, rng):
    data = rng.standard_normal((n,) * 4) + 1j * rng.standard_normal((n,) * 4)
    return DenseTensor(n=n, legs=QM_LEGS, data=data)


def swap_symmetric_qbar(n, rng):
    """Random Qbar with Q_{ji}^{st} = Q_{ij}^{ts}."""
    raw = random_qbar(n, rng).data
    return DenseTensor(n=n, legs=QBAR_LEGS,
                       data=0.5 * (raw + raw.transpose(1, 0, 3, 2)))


def twist_symmetric_qbar(n, p, rng):
    """Random Qbar satisfying the coordinate twist identity for P = p."""
    return symmetrize(random_qbar(n, rng), p, "vii")


def twist_symmetric_form(n, p, rng, min_det=1e-6):
    """Random non-singular form with h_{jk} = h_{P(k) P^2(j)}; redraws until
    the determinant is comfortably away from zero."""
    while True:
        raw = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = symmetrize_form(raw, p)
        if abs(np.linalg.det(h)) >= min_det:
            return BilinearForm.from_matrix(h)


def standard_instances():
    """The (n, P) pairs exercised throughout: both trivial labellings and
    the 3-cycle."""
    return [
        (2, BasisPermutation.identity(2)),
        (3, BasisPermutation.identity(3)),
        (3, BasisPermutation.three_cycle(3)),
    ]


def make_algebra(qbar, p, qm=None):
    return ThreeAlgebra(n=qbar.n, P=p, Qbar=qbar, Qm=qm)
