"""Bell tests on twin-beam and photon-subtracted Gaussian states.

States are sums of Gaussians in phase space (``GaussianSumWigner``).  A twin
beam evolved through symmetric loss and thermal noise is a single term;
inconclusive photon subtraction turns it into four.  Three CHSH-type tests act
on them: displaced parity, homodyne sign binning and pseudospin.
"""

from .bell import LOCAL_BOUND, TSIRELSON_BOUND, BellResult
from .errors import (
    ConfigError,
    DomainError,
    FockConvergenceError,
    NoClickError,
    OutsideStudiedRegimeWarning,
    QuadratureError,
)
from .gaussian import (
    ChannelParams,
    GaussianSumWigner,
    GaussianTerm,
    TwbParams,
    TwoModeCovariance,
    effective_decomposition,
    evolve_cov,
    make_twb_cov,
    twb_wigner,
    wigner_of_cov,
)
from .homodyne import HdSettings, bell_hd, sign_correlator
from .ips import IpsParams, double_click_probability, ips_state
from .parity import DpGeometry, bell_dp, parity_correlator
from .pseudospin import PsAngles, bell_ps, correlator_generic, e_ips, e_twb
from .sweeps import PRESETS, SweepConfig, maximize_over_r, run_preset, sweep

__all__ = [
    "LOCAL_BOUND", "TSIRELSON_BOUND", "BellResult",
    "ConfigError", "DomainError", "FockConvergenceError", "NoClickError", "OutsideStudiedRegimeWarning",
    "QuadratureError",
    "ChannelParams", "GaussianSumWigner", "GaussianTerm", "TwbParams", "TwoModeCovariance",
    "effective_decomposition", "evolve_cov", "make_twb_cov", "twb_wigner", "wigner_of_cov",
    "HdSettings", "bell_hd", "sign_correlator",
    "IpsParams", "double_click_probability", "ips_state",
    "DpGeometry", "bell_dp", "parity_correlator",
    "PsAngles", "bell_ps", "correlator_generic", "e_ips", "e_twb",
    "PRESETS", "SweepConfig", "maximize_over_r", "run_preset", "sweep",
]
