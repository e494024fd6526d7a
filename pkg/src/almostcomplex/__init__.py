"""Exact invariants of almost-complex structures on R^{2n}.

Submodules: :mod:`~almostcomplex.polynomial` and :mod:`~almostcomplex.linalg`
(exact core), :mod:`~almostcomplex.jets`, :mod:`~almostcomplex.diffeo`,
:mod:`~almostcomplex.spencer`, :mod:`~almostcomplex.invariants`,
:mod:`~almostcomplex.corpus`, :mod:`~almostcomplex.io` and
:mod:`~almostcomplex.cli`.
"""

from .diffeo import (
    Diffeo2Jet,
    PolyDiffeo,
    VFJet1,
    compose_2jets,
    diffeo_2jet,
    invert_2jet,
    lift0,
    lift0_vf,
    lift1,
    pullback_acs,
    pushforward_vfjet,
)
from .invariants import (
    ChiClass,
    NijTensor,
    bracket_1jets,
    chi,
    chi_transport_check,
    horizontal_subspace,
    integrability_report,
    isotropy_space,
    naturality_check,
    nijenhuis,
    omega_H,
    omega_H_transport_check,
    omega_field,
    omega_pipeline,
    omega_point,
)
from .jets import ACS, Chart, Jet1, TensorField, acs_verify, jet1_at, jet1_in_J1pi, standard_structure
from .linalg import SubspaceBasis, kernel_basis, solve_linear, subspace_intersect
from .polynomial import Polynomial, parse_polynomial, poly_diff, poly_eval
from .spencer import (
    Hom1,
    Splitting,
    TwoForm,
    build_splitting,
    h02_dimension,
    hat_map,
    isotropy_algebra,
    project_two_form,
    prolongation,
    spencer_delta,
    split_endo,
)

__version__ = "0.1.0"
