from src.services.nnk.kernels import kernel_eval, kernel_matrix
from src.services.nnk.models import (
    Explanation,
    KernelKind,
    KernelSpec,
    NeighborAttribution,
    NnkDecision,
    NnkProblem,
    NnkSolution,
)
from src.services.nnk.service import (
    NnkClassifier,
    build_problem,
    explain,
    kri_check,
    kri_diagnostics,
    nnk_predict,
)
from src.services.nnk.solver import kkt_residual, objective_value, solve_nnqp

__all__ = [
    'Explanation',
    'KernelKind',
    'KernelSpec',
    'NeighborAttribution',
    'NnkClassifier',
    'NnkDecision',
    'NnkProblem',
    'NnkSolution',
    'build_problem',
    'explain',
    'kernel_eval',
    'kernel_matrix',
    'kkt_residual',
    'kri_check',
    'kri_diagnostics',
    'nnk_predict',
    'objective_value',
    'solve_nnqp',
]
