"""Harmonic surfaces in R^3 through the Enneper representation X = (L + conj(P), h)."""
from . import analytic
from .analytic import evaluate, deriv
from .domain import Domain, Puncture, Cut
from .elliptic import EllipticModulus, complete_elliptic_K, complete_elliptic_Kprime, jacobi_sn, jacobi_cn, jacobi_dn
from .errors import *  # noqa: F401,F403
from .harmonic import HarmonicScalar
from .immersion import (
    EnneperImmersion,
    Part,
    dilatation,
    hopf_differential,
    immersion_map,
    is_harmonic_graph,
    is_immersion_at,
    superpose,
    unchecked_sum,
)
from .motifs import Motif, MotifConfiguration, dipole, helicoid, log_membrane, motif_field
from .multipole import MultipoleExpansion, exact_field, multipole_coeffs, multipole_eval, truncation_error_estimate
from .parse import parse_expression
from .decompose import CATALOG, HarmonicPair, WeierstrassData, decompose_maximal, decompose_minimal, weierstrass_minimal
from .mesh import SurfaceMesh, export_csv, export_obj, read_obj, sample_graph
from .verify import VerificationReport, discrete_laplacian_residual, gauged_distance, winding_integral

__version__ = "0.1.0"
