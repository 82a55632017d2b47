"""Console entry point."""

import sys

from shapeopt.cli import run


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
