"""Two-phase quantum walk with one defect."""

from ._core import (
    SUPPORT_EDGE,
    BinError,
    BranchError,
    CoinParameters,
    DegenerateError,
    DomainError,
    InitialState,
    QuadratureError,
    QWError,
    ResourceError,
    ZeroStateError,
    ac_mass,
    assemble_density,
    convergence_report,
    example_parameters,
    gf_at,
    konno_density,
    limit_density,
    loc_mass,
    mass_check,
    one_defect_weight,
    residue_theorem_check,
    run_mass_suite,
    simulate,
    time_averaged_measure,
    weight,
)

__all__ = [name for name in dir() if not name.startswith("_")]
