from abc import ABC, abstractmethod
from argparse import ArgumentParser, Namespace


class BaseCommand(ABC):
    name: str
    help: str

    @abstractmethod
    def add_arguments(self, parser: ArgumentParser) -> None:
        raise NotImplementedError

    @abstractmethod
    def handle(self, args: Namespace) -> int:
        raise NotImplementedError
