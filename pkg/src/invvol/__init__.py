"""Implied volatility of Inverse and Quanto-Inverse options under stochastic volatility."""

from .asymptotics import SkewLimit, approx_smile, atm_level_limit, skew_integral, skew_limit
from .black_scholes import BsPoint, atm_digital, atm_dk, atm_price, atm_vega, bs_price
from .iv_solver import MonotoneDomain, implied_vol, implied_vol_atm, monotone_domain, turning_point
from .market import PowerLawFit, QuoteRow, SkewPoint, delta_skew, fit_power_law, load_quotes
from .mc import (
    McEstimate,
    OptionSpec,
    SimConfig,
    atm_iv_mc,
    atm_skew_mc,
    digital_term,
    fd_skew_mc,
    price_option,
    simulate_terminal_logprice,
)
from .models import (
    Bergomi,
    ConstVol,
    Sabr,
    TimeGrid,
    bergomi_joint_covariance,
    malliavin_kernel,
    simulate_vol_and_noise,
)

__version__ = "0.1.0"
