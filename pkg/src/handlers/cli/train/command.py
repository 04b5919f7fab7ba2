import sys
from argparse import ArgumentParser, Namespace

from src.handlers.cli.base import BaseCommand
from src.handlers.dependencies import add_run_config_arguments, resolve_run_config
from src.services.pipeline import PipelineService


class TrainCommand(BaseCommand):
    name = 'train'
    help = 'Parse, featurize and split the dataset, then train the GIN encoder'

    def add_arguments(self, parser: ArgumentParser) -> None:
        add_run_config_arguments(parser, require_seed=True)

    def handle(self, args: Namespace) -> int:
        service = PipelineService(resolve_run_config(args))
        state = service.cmd_train()
        best = 'none' if state.best_val_metric is None else f'{state.best_val_metric:.4f}'
        sys.stdout.write(
            f'trained {state.epoch} epochs; best epoch {state.best_epoch} (val accuracy {best})\n'
            f'checkpoints: {service.layout.checkpoints_dir}\n'
            f'curve: {service.layout.curve_file}\n'
        )
        return 0
