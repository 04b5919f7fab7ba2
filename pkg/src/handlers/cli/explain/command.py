import sys
from argparse import SUPPRESS, ArgumentParser, Namespace

from src.handlers.cli.base import BaseCommand
from src.handlers.dependencies import add_run_config_arguments, resolve_run_config
from src.services.gin.models import CheckpointKind
from src.services.pipeline import PipelineService, render_explanation


class ExplainCommand(BaseCommand):
    name = 'explain'
    help = 'Write the NNK neighbor attribution for one test graph'

    def add_arguments(self, parser: ArgumentParser) -> None:
        add_run_config_arguments(parser)
        parser.add_argument('--id', dest='graph_id', type=int, required=True, help='graph id (0-based dataset order)')
        parser.add_argument('--checkpoint', choices=[kind.value for kind in CheckpointKind], default=SUPPRESS)

    def handle(self, args: Namespace) -> int:
        service = PipelineService(resolve_run_config(args))
        explanation, path = service.cmd_explain(args.graph_id)
        sys.stdout.write(f'{render_explanation(explanation)}\nexplanation: {path}\n')
        return 0
