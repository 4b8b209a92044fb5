"""Gelfand spectrum bundles over finite context posets.

Typical use::

    from gelspec import data_path, load_poset, enumerate_frame, ks_certify

    poset = load_poset(data_path("mermin_peres.json"))
    ks_certify(poset).section_count   # 0
"""
from importlib import resources

from .config import Tolerances, override, tol
from .contexts import (
    CharacterRef,
    Context,
    ContextPoset,
    build_poset,
    context_from_basis,
    context_from_observable,
    context_from_projections,
    context_leq,
    context_meet,
    load_poset,
    poset_from_json,
    restrict_character,
    trivial_context,
    upset,
)
from .errors import GelspecError
from .kernels import BACKEND
from .lattice import (
    build_L,
    d_of,
    f_map,
    ideal_completion,
    iota,
    is_regular,
    spectral_iso,
    waybelow,
)
from .linalg import hermitian_eig, projection_leq, support_projection
from .sections import (
    CrossSection,
    Valuation,
    find_sections,
    ks_certify,
    section_to_valuation,
    valuation_to_section,
)
from .spectrum import (
    SigmaOpen,
    build_sigma,
    check_sober,
    enumerate_frame,
    from_projection_valued,
    heyting_implies,
    heyting_not,
    is_open,
    point_eval,
    saturate,
    sigma_hausdorffify,
    theta,
    theta_inverse,
    to_projection_valued,
)
from .topology import FiniteSpace, frame_points, hausdorffify, soberify
from .transform import bohr_section, gelfand, gelfand_inverse

__version__ = "0.1.0"


def data_path(name: str) -> str:
    """Path of a bundled example input."""
    return str(resources.files("gelspec") / "data" / name)
