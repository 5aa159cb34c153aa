"""Exact rational computations for atomic objects on hyper-Kahler fourfolds:
extended Mukai lattices, Verbitsky-component Mukai vectors, cohomological
actions of derived equivalences, Lagrangian Ext bookkeeping and slopes.
"""

from .config import ConfigError, ScenarioConfig, default_manifold, load_config
from .equivalences import (
    ConstructionError,
    ExtIsometry,
    act_line,
    compose,
    poincare_isometry,
    ptwist_action,
    tensor_action,
    verify_isometry,
)
from .extended_mukai import (
    ExtendedVector,
    ManifoldData,
    MukaiLine,
    NotNormalizableError,
    e_operator,
    normalize_line,
    r_x_lookup,
    tilde_q,
    twist,
)
from .lagrangian_ext import (
    BettiVector,
    LagrangianPair,
    complete_by_duality,
    euler_from_dims,
    mixed_ext,
    ptwist_transport,
    reducible_ext,
    sym2_curve_betti,
    yoneda_form,
)
from .lattice_core import BilinearSpace, EpsPolynomial, LatticeError, LatticeVector, pair
from .mukai_calculus import (
    bogomolov_ok,
    discriminant_coeff,
    euler_self,
    mukai_vector,
    mukai_vector_by_projection,
    t_project,
)
from .report import ReportEntry, ScenarioReport
from .scenario import run_og10_scenario
from .sh_fourfold import SHClass, fujiki4, mukai_pairing, q2_square, structure_sheaf_class
from .stability import (
    SheafNumerics,
    Verdict,
    compare_slopes,
    destabilizer_c1_verdict,
    divisor_square_div,
    slope_poly,
)

__version__ = "0.1.0"
