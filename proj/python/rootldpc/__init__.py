"""Root-LDPC codes on nonergodic block-fading channels.

Thin re-export of the compiled core: code construction, iterative decoding
simulation, density evolution and outage analysis.
"""

from ._core import (  # noqa: F401
    BinaryMatrix,
    DegreeDistribution,
    DiversityResult,
    RootLdpcCode,
    ThresholdReport,
    WerPoint,
    awgn_threshold,
    bpsk_awgn_mi,
    bpsk_capacity_ebn0,
    build_root_irregular,
    build_root_regular,
    build_wstar2,
    build_wstar3,
    chi2_cdf,
    chi2_coding_loss_db,
    chi2_pdf,
    de_asymptotic_wer,
    diversity_analysis,
    g_function,
    is_ml_full_diversity,
    load_code,
    multiedge_fraction,
    outage_probability,
    outage_probability_quadrature,
    random_regular_ldpc,
    rank,
    read_alist,
    read_alist_file,
    save_code,
    simulate_wer,
    singleton_bound,
    write_alist_file,
)

__all__ = [n for n in dir() if not n.startswith("_")]
