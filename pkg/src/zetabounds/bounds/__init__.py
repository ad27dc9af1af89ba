"""Certified constants for |zeta|, |zeta'/zeta| and |1/zeta|."""
from .logderiv import (
    StripZetaBound,
    a_terms,
    beta_floor,
    beta_for_w,
    c0_strip,
    c3,
    c_backlund,
    half_line_kparams,
    plp_cor_bound,
    plp_strip_bound,
    q_h,
    q_one,
    q_rh,
    v_factor,
)
from .phi import PhiCheck, phi2, phi_family, run_phi_checks
from .reciprocal import ladder_sum, y0, yprime0
from .regimes import aleks_bound, combine_regimes, reexpress_log_power, rescale_loglog, trivial_bounds
from .types import (
    Condition,
    ConditionedBound,
    ConditionReport,
    HParams,
    KParams,
    LadderTable,
    ReciprocalParams,
    Region,
    RhParams,
)

__all__ = [name for name in dir() if not name.startswith("_")]
