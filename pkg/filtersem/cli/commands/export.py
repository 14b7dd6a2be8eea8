"""Models and functions for CLI exports."""
import argparse
import sys
from pathlib import Path

from filtersem.cli.commands.configuration import load_run_configuration
from filtersem.cli.listener import CliExportListener
from filtersem.core.core import write_message
from filtersem.core.export.sheets import SheetExporter
from filtersem.core.pipeline.report import write_report


def export_top_k(
    args: argparse.Namespace,
) -> None:
    """
    Write the top activation sheets of a pipeline run.

    Args:
        args: command line arguments
    """
    SheetExporter(
        configuration=load_run_configuration(args),
        listener=CliExportListener(),
    ).run(
        k=args.k,
    )


def report(
    args: argparse.Namespace,
) -> None:
    """
    Render the results of a pipeline run as Markdown.

    Args:
        args: command line arguments
    """
    configuration = load_run_configuration(args)
    path = write_report(Path(configuration.require_output()))
    write_message(
        stream=sys.stdout,
        message=path.read_text(encoding="utf-8"),
        end="",
    )
