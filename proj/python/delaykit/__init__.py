"""Transmission delay distributions, moments and violation probabilities
for multi-antenna Rayleigh-faded links."""

from ._core import (
    ChannelModel,
    FblConfig,
    LinkConfig,
    MomentReport,
    RateMoments,
    SeriesParams,
    approx_validity_threshold,
    delay_highsnr,
    delay_upper,
    exact_delay_sample,
    fbl_delay_cdf,
    fbl_delay_cdf_highsnr,
    fbl_delay_moments,
    fbl_delay_pdf,
    fbl_delay_violation,
    gaussian_q,
    gaussian_q_inv,
    ibl_delay_cdf,
    ibl_delay_moments,
    ibl_delay_pdf,
    ibl_delay_violation,
    lambert_w0,
    rate_moments_exact,
    rate_moments_highsnr,
    regularized_lower_gamma,
    regularized_upper_gamma,
    run_cli,
    simulate_fbl,
    simulate_ibl,
    snr_cdf,
    snr_pdf,
    validate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
