"""Models and functions for CLI synthetic corpus generation."""
import argparse
import sys
from pathlib import Path

from filtersem.cli.commands.configuration import load_run_configuration
from filtersem.cli.error import CliError
from filtersem.cli.listener import CliGeneratorListener
from filtersem.core.core import write_message
from filtersem.core.corpus.io import save_corpus
from filtersem.core.corpus.matched import matched_filter_report
from filtersem.core.corpus.synthetic import (
    generate_synthetic,
    layout_from_configuration,
)
from filtersem.core.pipeline.manifest import (
    create_manifest,
    write_manifest,
)


def generate(
    args: argparse.Namespace,
) -> None:
    """
    Draw a synthetic corpus in the corpus directory of the configuration.

    Args:
        args: command line arguments

    Raises:
        CliError: if no corpus directory is configured
    """
    configuration = load_run_configuration(args)
    if not configuration.corpus.path:
        raise CliError("A corpus directory is required (corpus.path)")
    directory = Path(configuration.corpus.path)
    layout = layout_from_configuration(configuration.synthetic)
    write_manifest(
        directory=directory,
        manifest=create_manifest(
            command="gen-synth",
            configuration=configuration,
            outputs=["*.json", "*.ppm"],
        ),
    )
    images = generate_synthetic(
        seed=configuration.seed,
        n_images=configuration.synthetic.images,
        layout=layout,
        listener=CliGeneratorListener(),
    )
    save_corpus(
        directory=directory,
        images=images,
    )
    if not args.baseline or not images:
        return
    for object_class, obj in sorted(layout.objects.items()):
        for part_class, part in sorted(obj.parts.items()):
            report = matched_filter_report(
                images=images,
                object_class=object_class,
                part_class=part_class,
                pattern=part.pattern,
                channel=part.channel,
            )
            write_message(
                stream=sys.stdout,
                message=f"  Matched-filter baseline {object_class}/{part_class}: AP {report.ap * 100:.1f}, "
                + f"{report.n_gt} instance(s)",
            )
