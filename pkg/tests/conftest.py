import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from phlab.lattice import (
    quartic_companion_example,
    quartic_symplectic_example,
    cat_map_example,
    spectral_splitting,
)
from phlab.torus_maps import PerturbedDiffeo, Shear, TrigPoly, symplectic_double_shear, translation_family


@pytest.fixture(scope="session")
def quartic():
    return quartic_companion_example()


@pytest.fixture(scope="session")
def quartic_symplectic():
    return quartic_symplectic_example()


@pytest.fixture(scope="session")
def cat():
    return cat_map_example()


@pytest.fixture(scope="session")
def quartic_split(quartic):
    return spectral_splitting(quartic)


@pytest.fixture(scope="session")
def symp_split(quartic_symplectic):
    return spectral_splitting(quartic_symplectic)


@pytest.fixture(scope="session")
def cat_split(cat):
    return spectral_splitting(cat)


@pytest.fixture(scope="session")
def linear_map(quartic_symplectic):
    return PerturbedDiffeo(quartic_symplectic, (), 0.0, "volume_preserving")


@pytest.fixture(scope="session")
def small_symplectic(quartic_symplectic):
    return symplectic_double_shear(quartic_symplectic, 1e-3)


@pytest.fixture(scope="session")
def translation_conjugate(quartic_symplectic):
    v = np.random.default_rng(2024).random(4)
    return translation_family(quartic_symplectic, v), v


@pytest.fixture(scope="session")
def gentle_symplectic(quartic_symplectic):
    """Symplectic eps = 0.05 with unit-amplitude shear displacements."""
    inv2pi = 1.0 / (2 * np.pi)
    h = TrigPoly(4, (((1, 0, 0, 0), inv2pi, 0.0),))
    g = TrigPoly(4, (((0, 0, 0, 1), 0.0, inv2pi),))
    return symplectic_double_shear(quartic_symplectic, 0.05, h, g)


@pytest.fixture(scope="session")
def cat_shear(cat):
    return PerturbedDiffeo(cat, (Shear(0, TrigPoly(2, (((0, 1), 0.0, 1.0),))),), 0.05, "volume_preserving")
