"""Exact truncated models of deformed Brieskorn lattices.

Modules:

* :mod:`~brieskorn.series`: truncated multivariate series over QQ or QQ[x...]
* :mod:`~brieskorn.gmsystem`: the weight-graded ambient system and its operators
* :mod:`~brieskorn.lattice`: lattice families, membership, stability
* :mod:`~brieskorn.opposite`: frames and opposite filtrations
* :mod:`~brieskorn.canonical`: canonical elements, invariants, period support
* :mod:`~brieskorn.gamma`: the parameter-group action on ``h``
* :mod:`~brieskorn.cli`: the ``verify`` driver
"""

from .canonical import (
    CanonicalSolution,
    InvariantTuple,
    PeriodSupport,
    canonical_element,
    canonical_generators,
    extract_invariants,
    period_support,
    residual_law,
)
from .errors import BrieskornError, DomainError, InsufficientPrecision, SeriesParseError, StructuralError
from .gamma import (
    GammaParams,
    OrbitPoint,
    act_on_h,
    act_on_orbit,
    compose_params,
    full_pipeline_action,
    inverse_params,
    orbit_jacobian,
    orbit_rank,
    project_orbit,
    symbolic_orbit,
)
from .gmsystem import GMElement, GMSystem, HVector
from .lattice import (
    Lattice,
    MembershipWitness,
    NotMember,
    RelativeFamilySpec,
    SpecialDeformation,
    hodge_filtration,
    nilpotent_family,
    reduce,
    relative_family,
    special_deformation,
    stability_check,
)
from .opposite import Frame, SplitResult, frame_from_matrix, is_opposite, split, u_subspace
from .series import QQ, MultiSeries, PolyRing, compositional_inverse, format_series, parse_series

__version__ = "0.1.0"
