"""Joint target prediction and nonnegative source detection over
geospatial-temporal chemistry data, with graph-Laplacian regularization.

The heavy lifting lives in the compiled ``_tsd`` extension; this package
re-exports its surface.
"""

from ._tsd import (
    ChemDataset,
    Factorization,
    FitReport,
    GraphLaplacian,
    Hyperparams,
    InputError,
    SolverError,
    SynthSpec,
    circular_day_distance,
    encode,
    fit,
    generate,
    haversine_m,
    match_sources,
    nmf,
    objective,
    predict,
    ridge,
    rmse,
    soft_threshold,
    spatial_laplacian,
    temporal_laplacian,
)

__all__ = [
    "ChemDataset",
    "Factorization",
    "FitReport",
    "GraphLaplacian",
    "Hyperparams",
    "InputError",
    "SolverError",
    "SynthSpec",
    "circular_day_distance",
    "encode",
    "fit",
    "generate",
    "haversine_m",
    "match_sources",
    "nmf",
    "objective",
    "predict",
    "ridge",
    "rmse",
    "soft_threshold",
    "spatial_laplacian",
    "temporal_laplacian",
]

__version__ = "0.1.0"
