"""
jcwitness - Main Entry Point

Runs the click command group. Usage:

    python -m src.cli.main figure1 --out fig1.csv
    python -m src.cli.main verify --report verification.md
"""

import logging
import sys

from colorama import Fore, Style, init

from src.cli.interface import cli, print_error

# Initialize colorama for cross-platform colored output
init(autoreset=True)


def main():
    """Main entry point."""
    try:
        cli(obj={})
    except KeyboardInterrupt:
        print(f"\n{Fore.YELLOW}Operation cancelled by user{Style.RESET_ALL}", file=sys.stderr)
        sys.exit(130)
    except Exception as e:
        print_error(f"Unexpected error: {e}")
        logging.exception("Unexpected error in main")
        sys.exit(1)


if __name__ == "__main__":
    main()
