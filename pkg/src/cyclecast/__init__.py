"""Quarterly macro forecasting with financial-cycle indicators.

Core layers: calendar/series primitives, shared estimators, model families
(distributed-lag regressions, small and high-dimensional VARs), the
pseudo-out-of-sample harness, and CSV/SVG reporting with a CLI on top.
"""

from .quarters import Quarter, parse_quarter, quarter_range
from .series import (
    Series,
    TransformCode,
    apply_transform,
    capr,
    cumulative_log_growth,
    splice_backward,
)
from .dataset import Dataset, DatasetEntry
from .estimation import (
    DesignMatrix,
    LsFit,
    bic,
    dummy_obs_bayes_fit,
    lasso_fit,
    ols_fit,
    pca,
)
from .ardl import ArdlSpec, FittedArdl, fit_ardl, forecast_direct, select_lags_ardl
from .var import (
    FittedVar,
    VarSpec,
    cumulate_log_levels,
    cumulate_to_level,
    fit_var,
    iterate_var_forecast,
    select_var_lags,
)
from .highdim import FactorVarFit, fit_factor_var, fit_lasso_var, fit_lbvar
from .evaluation import (
    CombinationScheme,
    EvaluationReport,
    ForecastRecord,
    InsampleReport,
    OosResult,
    WindowScheme,
    bma_combination,
    bma_weights,
    build_report,
    combine_forecasts,
    convert_annual_forecasts,
    enc_f,
    equal_combination,
    msfe,
    rank_insample,
    recursive_scheme,
    relative_msfe,
    rmsfe,
    run_pseudo_oos,
)
from .forecasters import (
    DirectArdlForecaster,
    FactorVarForecaster,
    IteratedVarForecaster,
    LassoVarForecaster,
    LbvarForecaster,
    direct_model_set,
    iterated_model_set,
)
from .ingest import ingest, read_panel_csv, read_transform_spec
from .simulate import SimulatedPanel, simulate_panel

__version__ = "0.1.0"

__all__ = [
    "ArdlSpec",
    "CombinationScheme",
    "Dataset",
    "DatasetEntry",
    "DesignMatrix",
    "DirectArdlForecaster",
    "EvaluationReport",
    "FactorVarFit",
    "FactorVarForecaster",
    "FittedArdl",
    "FittedVar",
    "ForecastRecord",
    "InsampleReport",
    "IteratedVarForecaster",
    "LassoVarForecaster",
    "LbvarForecaster",
    "LsFit",
    "OosResult",
    "Quarter",
    "Series",
    "SimulatedPanel",
    "TransformCode",
    "VarSpec",
    "WindowScheme",
    "apply_transform",
    "bic",
    "bma_combination",
    "bma_weights",
    "build_report",
    "capr",
    "combine_forecasts",
    "convert_annual_forecasts",
    "cumulate_log_levels",
    "cumulate_to_level",
    "cumulative_log_growth",
    "direct_model_set",
    "dummy_obs_bayes_fit",
    "enc_f",
    "equal_combination",
    "fit_ardl",
    "fit_factor_var",
    "fit_lasso_var",
    "fit_lbvar",
    "fit_var",
    "forecast_direct",
    "ingest",
    "iterate_var_forecast",
    "iterated_model_set",
    "lasso_fit",
    "msfe",
    "ols_fit",
    "parse_quarter",
    "pca",
    "quarter_range",
    "rank_insample",
    "read_panel_csv",
    "read_transform_spec",
    "recursive_scheme",
    "relative_msfe",
    "rmsfe",
    "run_pseudo_oos",
    "select_lags_ardl",
    "select_var_lags",
    "simulate_panel",
    "splice_backward",
]
