import sys

from src.app_factory import CliFactory
from src.core.config import config
from src.handlers import COMMANDS
from src.middlewares import MIDDLEWARES

if __name__ == '__main__':
    cli = CliFactory(
        title=config.APP_NAME,
        version=config.APP_VERSION,
        commands=COMMANDS,
        middlewares=MIDDLEWARES,
    )

    sys.exit(cli.run(sys.argv[1:]))
