import logging


class BaseGraphNnkError(Exception):
    level = logging.NOTSET
    exit_code: int
    message: str | None
    code: str | None

    def __init__(
        self,
        message: str | None = None,
        *,
        code: str | None = None,
        level: int | None = None,
        exit_code: int | None = None,
    ):
        super().__init__(message or self.message)
        self.message = message or self.message
        self.code = code or self.code
        self.level = level or self.level
        self.exit_code = exit_code or self.exit_code


class ServerError(BaseGraphNnkError):
    level = logging.ERROR
    exit_code = 3
    code = 'runtime_error'
    message = 'Runtime failure'


class ClientError(BaseGraphNnkError):
    level = logging.WARNING
    exit_code = 2
    code = 'input_error'
    message = 'Invalid input or configuration'


class InvalidInput(ClientError):
    code = 'invalid_input'
    message = 'Invalid input'


class LookupFailure(ClientError):
    code = 'not_found'
    message = 'The requested item is not found'


# --------- DATASET ---------
class DatasetLoadError(ClientError):
    code = 'dataset_load_error'
    message = 'Dataset file could not be loaded'


class DatasetFormatError(ClientError):
    code = 'dataset_format_error'
    message = 'Dataset file is malformed'

    def __init__(self, message: str | None = None, *, path: str | None = None, line: int | None = None):
        location = f'{path}:{line}: ' if path is not None and line is not None else ''
        super().__init__(f'{location}{message or self.message}')
        self.path = path
        self.line = line


# --------- MODEL ---------
class ShapeError(ServerError):
    code = 'shape_error'
    message = 'Array shapes do not match'


class NumericError(ServerError):
    code = 'numeric_error'
    message = 'Non-finite or undefined numeric value'


class DivergenceError(NumericError):
    code = 'divergence'
    message = 'Training loss became non-finite'

    def __init__(self, epoch: int, batch: int):
        super().__init__(f'Training loss became non-finite at epoch {epoch}, batch {batch}')
        self.epoch = epoch
        self.batch = batch


class StateError(ServerError):
    code = 'state_error'
    message = 'Requested state is not available'


# --------- NEIGHBORS / NNK ---------
class IndexBuildError(ClientError):
    code = 'index_build_error'
    message = 'Neighbor index cannot be built'


class SolverError(ServerError):
    code = 'solver_error'
    message = 'Cholesky factorization failed'

    def __init__(self, message: str | None = None, *, working_set: list[int] | None = None):
        super().__init__(message)
        self.working_set = working_set or []


class ConvergenceError(ServerError):
    code = 'convergence_error'
    message = 'Active-set solver exceeded its iteration cap'

    def __init__(self, message: str | None = None, *, kkt_residual: float = float('nan')):
        super().__init__(message)
        self.kkt_residual = kkt_residual


class UndefinedRatioError(NumericError):
    code = 'undefined_ratio'
    message = 'Kernel ratio is undefined for a zero denominator'


class EmptyActiveSetError(ServerError):
    level = logging.WARNING
    code = 'empty_active_set'
    message = 'No neighbor kept a positive weight'
