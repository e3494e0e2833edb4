"""phlab: a desk-scale laboratory for perturbations of partially hyperbolic
toral automorphisms.

Exact integer classification of lattice automorphisms, explicit shear
perturbations with certified cone fields, contraction-series conjugacy
solvers, QR Lyapunov diagnostics, and su-quadrilateral holonomy probes.
"""

__version__ = "0.1.0"

from .intpoly import IntPoly
from .lattice import (
    ClassificationReport,
    LatticeAutomorphism,
    SpectralSplitting,
    cat_map_example,
    classify,
    quartic_companion_example,
    quartic_symplectic_example,
    spectral_splitting,
)
from .torus_maps import (
    ConeCertificate,
    PerturbedDiffeo,
    Shear,
    TrigPoly,
    certify_partial_hyperbolicity,
    symplectic_double_shear,
    translation_family,
)
from .conjugacy import (
    ConjugacyField,
    SolverConfig,
    TestFunction,
    center_partial_sums,
    conjugacy_residual,
    holder_exponent,
    mollifier_report,
    pair_against_test_function,
    solve_conjugacy,
    solve_stable_component,
    solve_unstable_component,
)
from .lyapunov import (
    ExponentConfig,
    ExponentReport,
    center_growth_profile,
    dichotomy_classify,
    entropy_chain_report,
    oseledets_qr,
)
from .foliation import (
    FoliationConfig,
    FoliationLab,
    integrability_score,
    local_invariant_leaf,
)
