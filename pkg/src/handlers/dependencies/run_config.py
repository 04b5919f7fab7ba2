import json
from argparse import SUPPRESS, ArgumentParser, Namespace
from pathlib import Path
from typing import Any

from src.core.config import config as app_config
from src.exceptions import InvalidInput
from src.services.gin.models import ActivationKind, EpsilonMode, PoolingKind
from src.services.graphs.models import FeatureMode
from src.services.neighbors.models import DistanceMetric
from src.services.nnk.models import KernelKind
from src.services.pipeline.models import RunConfig

# flag destination -> path inside the RunConfig document
OVERRIDES: dict[str, tuple[str, ...]] = {
    'dataset': ('dataset_path',),
    'output_dir': ('output_dir',),
    'layers': ('gin', 'num_layers'),
    'hidden_dim': ('gin', 'hidden_dim'),
    'mlp_depth': ('gin', 'mlp_depth'),
    'dropout': ('gin', 'dropout'),
    'epsilon_mode': ('gin', 'epsilon_mode'),
    'epsilon_value': ('gin', 'epsilon_value'),
    'pooling': ('gin', 'pooling'),
    'activation': ('gin', 'activation'),
    'lr': ('gin', 'learning_rate'),
    'batch_size': ('gin', 'batch_size'),
    'epochs': ('gin', 'epochs'),
    'seed': ('gin', 'seed'),
    'kernel': ('kernel', 'kind'),
    'bandwidth': ('kernel', 'bandwidth'),
    'jitter': ('kernel', 'jitter'),
    'k': ('k_neighbors',),
    'tau_edge': ('tau_edge',),
    'tolerance': ('solver_tolerance',),
    'metric': ('metric',),
    'feature_mode': ('feature_mode',),
    'split_ratios': ('split_ratios',),
    'split_seed': ('split_seed',),
    'checkpoint': ('checkpoint',),
    'workers': ('workers',),
    'nnk_every': ('nnk_every',),
}


def _choices(enum: type) -> list[str]:
    return [member.value for member in enum]


def add_run_config_arguments(parser: ArgumentParser, *, require_seed: bool = False) -> None:
    """Flags default to SUPPRESS so only the ones given on the command line override the config file."""
    parser.add_argument('--config', type=Path, default=SUPPRESS, help='JSON file mirroring RunConfig')
    parser.add_argument('--dataset', type=Path, default=SUPPRESS, help='TU dataset directory')
    parser.add_argument('--output-dir', type=Path, default=SUPPRESS)

    gin = parser.add_argument_group('encoder')
    if require_seed:
        gin.add_argument('--seed', type=int, required=True)
    else:
        gin.add_argument('--seed', type=int, default=SUPPRESS)
    gin.add_argument('--layers', type=int, default=SUPPRESS)
    gin.add_argument('--hidden-dim', type=int, default=SUPPRESS)
    gin.add_argument('--mlp-depth', type=int, default=SUPPRESS)
    gin.add_argument('--dropout', type=float, default=SUPPRESS)
    gin.add_argument('--epsilon-mode', choices=_choices(EpsilonMode), default=SUPPRESS)
    gin.add_argument('--epsilon-value', type=float, default=SUPPRESS)
    gin.add_argument('--pooling', choices=_choices(PoolingKind), default=SUPPRESS)
    gin.add_argument('--activation', choices=_choices(ActivationKind), default=SUPPRESS)
    gin.add_argument('--lr', type=float, default=SUPPRESS)
    gin.add_argument('--batch-size', type=int, default=SUPPRESS)
    gin.add_argument('--epochs', type=int, default=SUPPRESS)
    gin.add_argument('--nnk-every', type=int, default=SUPPRESS, help='evaluate NNK on the test split every N epochs')

    nnk = parser.add_argument_group('nnk')
    nnk.add_argument('--kernel', choices=_choices(KernelKind), default=SUPPRESS)
    nnk.add_argument('--bandwidth', type=float, default=SUPPRESS)
    nnk.add_argument('--jitter', type=float, default=SUPPRESS)
    nnk.add_argument('-k', '--k', dest='k', type=int, default=SUPPRESS, help='candidate neighbors per query')
    nnk.add_argument('--tau-edge', type=float, default=SUPPRESS)
    nnk.add_argument('--tolerance', type=float, default=SUPPRESS)
    nnk.add_argument('--metric', choices=_choices(DistanceMetric), default=SUPPRESS)
    nnk.add_argument('--workers', type=int, default=SUPPRESS)

    data = parser.add_argument_group('data')
    data.add_argument('--feature-mode', choices=_choices(FeatureMode), default=SUPPRESS)
    data.add_argument('--split-ratios', type=float, nargs=3, default=SUPPRESS, metavar=('TRAIN', 'VAL', 'TEST'))
    data.add_argument('--split-seed', type=int, default=SUPPRESS)


def _read_document(path: Path) -> dict[str, Any]:
    try:
        document = json.loads(path.read_text(encoding='utf-8'))
    except FileNotFoundError as e:
        raise InvalidInput(f'Config file {path} does not exist') from e
    except json.JSONDecodeError as e:
        raise InvalidInput(f'Config file {path} is not valid JSON: {e}') from e
    if not isinstance(document, dict):
        raise InvalidInput(f'Config file {path} must hold a JSON object')
    return document


def resolve_run_config(args: Namespace) -> RunConfig:
    """
    Config file first, then the run's own config.json when no file is given
    and the output directory already holds one, then command-line flags.
    """
    flags = vars(args)
    if 'config' in flags:
        document = _read_document(flags['config'])
    else:
        output_dir = flags.get('output_dir', app_config.DEFAULT_OUTPUT_DIR)
        echoed = Path(output_dir) / 'config.json'
        document = _read_document(echoed) if echoed.is_file() else {}
    # a split_seed echoed by an earlier run never pins the split
    pinned_split_seed = 'split_seed' in flags or ('config' in flags and 'split_seed' in document)

    for dest, path in OVERRIDES.items():
        if dest not in flags:
            continue
        target = document
        for key in path[:-1]:
            target = target.setdefault(key, {})
        target[path[-1]] = str(flags[dest]) if isinstance(flags[dest], Path) else flags[dest]

    if 'seed' in flags and not pinned_split_seed:
        document['split_seed'] = flags['seed']
    if 'dataset_path' not in document:
        raise InvalidInput('A dataset directory is required (--dataset or dataset_path in --config)')
    return RunConfig.model_validate(document)
