"""Regularized kernel canonical correlation analysis and its linear baseline."""

from .cca import (
    CorrelationTable,
    KccaConfig,
    KccaModel,
    LinearCcaModel,
    build_mln,
    correlation_table,
    fit_kcca,
    fit_linear_cca,
    load_model,
    project,
    project_linear,
    save_model,
)
from .datagen import PairedDataset, SimSpec, gen_sim1, gen_sim2
from .errors import (
    DegenerateFeatureError,
    InputError,
    NotPositiveDefiniteError,
    NumericalError,
    SingularRegularizationError,
)
from .kernels import GramMatrix, KernelSpec, centering_matrix, gram_matrix, kernel_eval, parse_kernel_spec

__all__ = [
    "CorrelationTable",
    "DegenerateFeatureError",
    "GramMatrix",
    "InputError",
    "KccaConfig",
    "KccaModel",
    "KernelSpec",
    "LinearCcaModel",
    "NotPositiveDefiniteError",
    "NumericalError",
    "PairedDataset",
    "SimSpec",
    "SingularRegularizationError",
    "build_mln",
    "centering_matrix",
    "correlation_table",
    "fit_kcca",
    "fit_linear_cca",
    "gen_sim1",
    "gen_sim2",
    "gram_matrix",
    "kernel_eval",
    "load_model",
    "parse_kernel_spec",
    "project",
    "project_linear",
    "save_model",
]

__version__ = "0.1.0"
