import sys
from argparse import ArgumentParser, Namespace

from src.handlers.cli.base import BaseCommand
from src.handlers.dependencies import add_run_config_arguments, resolve_run_config
from src.services.pipeline import PipelineService, render_summary


class InfoCommand(BaseCommand):
    name = 'info'
    help = 'Print dataset statistics'

    def add_arguments(self, parser: ArgumentParser) -> None:
        add_run_config_arguments(parser)
        parser.add_argument('--json', action='store_true', help='print the summary as JSON instead of a table')

    def handle(self, args: Namespace) -> int:
        summary = PipelineService(resolve_run_config(args)).cmd_info()
        sys.stdout.write((summary.model_dump_json(indent=2) if args.json else render_summary(summary)) + '\n')
        return 0
