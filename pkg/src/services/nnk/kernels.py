import numpy as np
from scipy.spatial.distance import cdist

from src.exceptions import NumericError, ShapeError
from src.services.nnk.models import KernelKind, KernelSpec


def _unit_rows(matrix: np.ndarray, role: str) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    zero = np.flatnonzero(norms[:, 0] == 0)
    if zero.size:
        raise NumericError(f'Zero {role} vector at row {int(zero[0])} is undefined under the cosine kernel')
    return matrix / norms


def kernel_matrix(spec: KernelSpec, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Kernel values between every row of ``left`` and every row of ``right``, all in [0, 1]."""
    left = np.atleast_2d(np.asarray(left, dtype=np.float64))
    right = np.atleast_2d(np.asarray(right, dtype=np.float64))
    if left.shape[1] != right.shape[1]:
        raise ShapeError(f'Kernel inputs differ in dimension: {left.shape[1]} vs {right.shape[1]}')

    if spec.kind == KernelKind.cosine_shifted:
        cosine = _unit_rows(left, 'left') @ _unit_rows(right, 'right').T
        values = (1.0 + cosine) / 2.0
    else:
        values = np.exp(-cdist(left, right, metric='sqeuclidean') / (2.0 * spec.bandwidth**2))
    return np.clip(values, 0.0, 1.0)


def kernel_eval(spec: KernelSpec, a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f'Kernel inputs differ in shape: {a.shape} vs {b.shape}')
    return float(kernel_matrix(spec, a.reshape(1, -1), b.reshape(1, -1))[0, 0])
