"""Causal discovery for multivariate time series via SVAR-LiNGAM.

A reduced-form VAR captures the lagged dynamics; independent component
analysis of its residuals identifies the instantaneous causal structure
when the shocks are non-Gaussian; bootstrap resampling attaches
significance; impulse responses trace the structural shocks forward.
"""

from .cointegration import CointReport, johansen_test
from .diagnostics import (
    DiagnosticsReport,
    diagnose_residuals,
    jarque_bera,
    ljung_box,
    shapiro_francia,
    shapiro_wilk,
)
from .exceptions import SvarLingamError
from .ica import FastICA, IcaResult, WhitenedData, fastica, mutual_information_estimate, whiten
from .ingest import (
    Panel,
    RawSeries,
    StatsTable,
    align_panel,
    compute_cer,
    load_price_csv,
    log_transform,
    read_panel_csv,
    slice_period,
    summary_stats,
    weekend_fill,
    write_panel_csv,
)
from .irf import IrfResult, compare_subperiods, irf_bootstrap_bands, ma_coefficients, structural_irf
from .lingam import (
    ICALiNGAM,
    LingamResult,
    brute_force_order,
    find_causal_order,
    ica_lingam,
    lingam_loglik,
    normalize_and_extract_b,
    prune_edges,
    row_permute_nonzero_diag,
)
from .svar import (
    SVARLiNGAM,
    BootstrapSummary,
    CausalGraph,
    GraphEdge,
    SvarLingamModel,
    bootstrap_significance,
    fit_svar_lingam,
    reduced_to_structural,
    structural_to_reduced,
    to_causal_graph,
)
from .synthetic import GroundTruthSpec, draw_shocks, generate_lingam, generate_svar
from .unitroot import AdfReport, adf_test, select_lag_sic
from .var import VarModel, companion_matrix, fit_var, select_var_lag_sic

__version__ = "0.1.0"

__all__ = [
    "AdfReport",
    "BootstrapSummary",
    "CausalGraph",
    "CointReport",
    "DiagnosticsReport",
    "FastICA",
    "GraphEdge",
    "GroundTruthSpec",
    "ICALiNGAM",
    "IcaResult",
    "IrfResult",
    "LingamResult",
    "Panel",
    "RawSeries",
    "StatsTable",
    "SVARLiNGAM",
    "SvarLingamError",
    "SvarLingamModel",
    "VarModel",
    "WhitenedData",
    "adf_test",
    "align_panel",
    "bootstrap_significance",
    "brute_force_order",
    "companion_matrix",
    "compare_subperiods",
    "compute_cer",
    "diagnose_residuals",
    "draw_shocks",
    "fastica",
    "find_causal_order",
    "fit_svar_lingam",
    "fit_var",
    "generate_lingam",
    "generate_svar",
    "ica_lingam",
    "irf_bootstrap_bands",
    "jarque_bera",
    "johansen_test",
    "lingam_loglik",
    "ljung_box",
    "load_price_csv",
    "log_transform",
    "ma_coefficients",
    "mutual_information_estimate",
    "normalize_and_extract_b",
    "prune_edges",
    "read_panel_csv",
    "reduced_to_structural",
    "row_permute_nonzero_diag",
    "select_lag_sic",
    "select_var_lag_sic",
    "shapiro_francia",
    "shapiro_wilk",
    "slice_period",
    "structural_irf",
    "structural_to_reduced",
    "summary_stats",
    "to_causal_graph",
    "weekend_fill",
    "whiten",
    "write_panel_csv",
]
