import sys
from argparse import SUPPRESS, ArgumentParser, Namespace

from src.handlers.cli.base import BaseCommand
from src.handlers.dependencies import add_run_config_arguments, resolve_run_config
from src.services.pipeline import CheckpointSelector, PipelineService, render_metrics


class EvalCommand(BaseCommand):
    name = 'eval'
    help = 'Export embeddings and compare the supervised head with NNK on the test split'

    def add_arguments(self, parser: ArgumentParser) -> None:
        add_run_config_arguments(parser)
        choices = [selector.value for selector in CheckpointSelector]
        parser.add_argument('--checkpoint', choices=choices, default=SUPPRESS)

    def handle(self, args: Namespace) -> int:
        service = PipelineService(resolve_run_config(args))
        report = service.cmd_eval()
        sys.stdout.write(render_metrics(report) + '\n')
        sys.stdout.write(f'report: {service.layout.metrics_file}\n')
        return 0
