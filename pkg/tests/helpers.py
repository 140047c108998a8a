"""
Random state generators shared by the test modules.
"""

import numpy as np

from qcmm.core.cmm_geometry import CmmCoords, d7_from_coords
from qcmm.core.state_core import D7Params, DensityMatrix4


def _ball_point(rng: np.random.Generator, radius: float) -> np.ndarray:
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    return direction * radius * rng.uniform() ** (1 / 3)


def random_valid_d7(rng: np.random.Generator) -> D7Params:
    """D-7 state drawn by placing both branch points inside their forward cones."""
    mzz = rng.uniform(-1.0, 1.0)
    t_minus, t_plus = (1.0 - mzz) / 2, (1.0 + mzz) / 2
    u_minus, v_plus, w_minus = _ball_point(rng, t_minus)
    u_plus, v_minus, w_plus = _ball_point(rng, t_plus)
    return d7_from_coords(CmmCoords(t_minus, u_minus, v_plus, w_minus, t_plus, u_plus, v_minus, w_plus))


def ginibre_state(rng: np.random.Generator, dim: int = 4) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def product_mixture(rng: np.random.Generator, max_terms: int = 8) -> DensityMatrix4:
    """Convex mixture of up to max_terms product states; separable by construction."""
    k = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(k))
    rho = sum(w * np.kron(ginibre_state(rng, 2), ginibre_state(rng, 2)) for w in weights)
    return DensityMatrix4(rho)


def concurrence_of_ket(psi: np.ndarray) -> float:
    return float(2 * abs(psi[0] * psi[3] - psi[1] * psi[2]))


def entangled_pure_state(rng: np.random.Generator, min_concurrence: float = 0.01) -> DensityMatrix4:
    while True:
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        if concurrence_of_ket(psi) > min_concurrence:
            return DensityMatrix4(np.outer(psi, psi.conj()))


def bew_s_closed_forms(x: float):
    """(s1^2, s2^2, s1t^2, s2t^2) of the BEW family."""
    return (
        (1 - x) * (1 + 3 * x) / 4,
        ((1 - x) / 2) ** 2,
        ((1 + x) / 2) ** 2,
        (x + 1) * (1 - 3 * x) / 4,
    )
