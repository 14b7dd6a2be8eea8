"""Models and functions for the CLI analysis commands."""
import argparse

from filtersem.cli.commands.configuration import load_run_configuration
from filtersem.cli.listener import (
    CliGAListener,
    CliPipelineListener,
)
from filtersem.core.pipeline.discrimination import DiscriminationStudy
from filtersem.core.pipeline.pipeline import Pipeline


def _pipeline(
    args: argparse.Namespace,
) -> Pipeline:
    return Pipeline(
        configuration=load_run_configuration(args),
        listener=CliPipelineListener(),
        ga_listener=CliGAListener() if getattr(args, "verbose", False) else None,
    )


def run_pipeline(
    args: argparse.Namespace,
) -> None:
    """
    Analyze every part class in every layer.

    Args:
        args: command line arguments
    """
    _pipeline(args).run()


def run_ga(
    args: argparse.Namespace,
) -> None:
    """
    Run the genetic search for some layers and part classes.

    Args:
        args: command line arguments
    """
    _pipeline(args).run_ga(
        layers=args.layers or (),
        parts=args.parts or (),
    )


def run_top_filters(
    args: argparse.Namespace,
) -> None:
    """
    Score the combinations of the best single filters.

    Args:
        args: command line arguments
    """
    _pipeline(args).run_top_filters(
        max_filters=args.max_filters,
        layers=args.layers or (),
        parts=args.parts or (),
    )


def run_discrim(
    args: argparse.Namespace,
) -> None:
    """
    Measure filter and part discriminativeness next to the results of a pipeline run.

    Args:
        args: command line arguments
    """
    DiscriminationStudy(
        configuration=load_run_configuration(args),
        listener=CliPipelineListener(),
    ).run()
