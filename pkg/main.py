from __future__ import annotations

import sys

from filtersem.cli.main import run as run_cli

if __name__ == '__main__':
    run_cli(*sys.argv[1:])
