"""CLI arguments parsing and execution."""
import argparse
import sys
from typing import (
    TYPE_CHECKING,
    Callable,
)

from filtersem.cli.commands.analyze import (
    run_discrim,
    run_ga,
    run_pipeline,
    run_top_filters,
)
from filtersem.cli.commands.export import (
    export_top_k,
    report,
)
from filtersem.cli.commands.generate import generate
from filtersem.cli.commands.schema import dump_schema
from filtersem.cli.commands.validate import validate
from filtersem.cli.error import exit_code
from filtersem.core.core import (
    AVAILABLE_FORMATS,
    AVAILABLE_SCHEMA_DUMP_FORMATS,
)
from filtersem.core.error import (
    print_error,
    print_error_message,
)
from filtersem.core.exceptions import CoreException
from filtersem.version import __VERSION__


DEFAULT_FORMATTER_CLASS = argparse.ArgumentDefaultsHelpFormatter
CONFIGURATION_FORMATS = list(AVAILABLE_FORMATS.keys())
SCHEMA_DUMP_FORMATS = list(AVAILABLE_SCHEMA_DUMP_FORMATS.keys())

if TYPE_CHECKING:
    SubParsersActionType = argparse._SubParsersAction[argparse.ArgumentParser]
else:
    SubParsersActionType = argparse._SubParsersAction


def run(
    *args: str,
) -> None:
    """
    Run the CLI.

    Args:
        args: command line arguments
    """
    if not args:
        args = tuple(sys.argv[1:])
    parsed = _parse_args(*args)
    try:
        parsed.func(parsed)
    except CoreException as e:
        print_error(
            error=e,
        )
        sys.exit(exit_code(e))
    except KeyboardInterrupt:
        print_error_message(
            message="Interrupted by user.",
        )
        sys.exit(130)
    sys.exit(0)


def _parse_args(
    *args: str,
) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="filtersem",
        formatter_class=DEFAULT_FORMATTER_CLASS,
    )
    parser.add_argument(
        "--version",
        "-V",
        action="version",
        version=f"%(prog)s {__VERSION__} (python {'.'.join(map(str, sys.version_info[:3]))})",  # noqa: C812
    )
    parser.set_defaults(func=lambda _: parser.print_help())

    commands = parser.add_subparsers(dest="command")

    validate_parser = _add_run_command(
        parent_parser=commands,
        name="validate",
        help_text="Validate a configuration file and its overrides",
        func=validate,
    )
    validate_parser.add_argument(
        "--dump",
        dest="dump",
        help="print the effective configuration, defaults included, instead of a confirmation",
        action="store_true",
    )
    gen_parser = _add_run_command(
        parent_parser=commands,
        name="gen-synth",
        help_text="Draw a synthetic annotated corpus in the configured corpus directory",
        func=generate,
    )
    gen_parser.add_argument(
        "--baseline",
        dest="baseline",
        help="score the matched-filter baseline on every planted part",
        action="store_true",
    )
    pipeline_parser = _add_run_command(
        parent_parser=commands,
        name="pipeline",
        help_text="Score every filter and filter combination of the analyzed layers as part detectors",
        func=run_pipeline,
    )
    _add_verbose(
        parser=pipeline_parser,
    )
    ga_parser = _add_run_command(
        parent_parser=commands,
        name="ga",
        help_text="Run the genetic search of filter combinations only",
        func=run_ga,
    )
    _add_selection(
        parser=ga_parser,
    )
    _add_verbose(
        parser=ga_parser,
    )
    top_parser = _add_run_command(
        parent_parser=commands,
        name="topfilters",
        help_text="Score the combinations of the n best single filters",
        func=run_top_filters,
    )
    _add_selection(
        parser=top_parser,
    )
    top_parser.add_argument(
        "--max-filters",
        "-n",
        dest="max_filters",
        help="largest combination",
        type=int,
        default=10,
    )
    _add_run_command(
        parent_parser=commands,
        name="discrim",
        help_text="Measure how discriminative filters and parts are for object classification",
        func=run_discrim,
    )
    export_parser = _add_run_command(
        parent_parser=commands,
        name="export-topk",
        help_text="Write the top activation sheets of every filter for external annotation",
        func=export_top_k,
    )
    export_parser.add_argument(
        "-k",
        dest="k",
        help="panels per sheet (export.top_k by default)",
        type=int,
        default=None,
    )
    _add_run_command(
        parent_parser=commands,
        name="report",
        help_text="Render the results of a pipeline run as Markdown",
        func=report,
    )
    _add_schema_command(
        parent_parser=commands,
    )

    return parser.parse_args(
        args,
    )


def _add_run_command(
    parent_parser: SubParsersActionType,
    name: str,
    help_text: str,
    func: Callable[[argparse.Namespace], None],
) -> argparse.ArgumentParser:
    command_parser = parent_parser.add_parser(
        formatter_class=DEFAULT_FORMATTER_CLASS,
        name=name,
        help=help_text,
    )
    _add_config_file_format(
        parser=command_parser,
    )
    _add_overrides(
        parser=command_parser,
    )
    command_parser.set_defaults(func=func)
    return command_parser


def _add_schema_command(
    parent_parser: SubParsersActionType,
) -> None:
    schema_parser = parent_parser.add_parser(
        formatter_class=DEFAULT_FORMATTER_CLASS,
        name="schema",
        help="Dump a schema of the structure of the configuration files in JSON Schema or plaintext",
    )
    schema_parser.add_argument(
        "--format",
        "-f",
        dest="output_format",
        help="format",
        type=str,
        required=False,
        default=SCHEMA_DUMP_FORMATS[0],
        choices=SCHEMA_DUMP_FORMATS,
    )
    schema_parser.set_defaults(func=dump_schema)


def _add_overrides(
    parser: argparse.ArgumentParser,
) -> None:
    parser.add_argument(
        "--seed",
        dest="seed",
        help="seed overriding the configured one",
        type=int,
        default=None,
    )
    parser.add_argument(
        "--workers",
        dest="workers",
        help="worker count overriding FS_WORKERS and the configured one ; never changes the results",
        type=int,
        default=None,
    )
    parser.add_argument(
        "--output-dir",
        "-o",
        dest="output_dir",
        help="output directory overriding the configured one",
        type=str,
        default=None,
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        help="override a configuration key (section.key=value, value read as YAML) ; repeatable",
        action="append",
        default=[],
        metavar="KEY=VALUE",
    )


def _add_selection(
    parser: argparse.ArgumentParser,
) -> None:
    parser.add_argument(
        "--layer",
        "-l",
        dest="layers",
        help="analyzed layer ; repeatable, all analyzed layers by default",
        action="append",
        default=[],
    )
    parser.add_argument(
        "--part",
        "-p",
        dest="parts",
        help="part class as object/part ; repeatable, all retained part classes by default",
        action="append",
        default=[],
    )


def _add_verbose(
    parser: argparse.ArgumentParser,
) -> None:
    parser.add_argument(
        "--verbose",
        "-v",
        dest="verbose",
        help="print the outcome of every genetic search",
        action="store_true",
    )


def _add_config_file(
    parser: argparse.ArgumentParser,
) -> None:
    parser.add_argument(
        "--config-file",
        "-c",
        dest="config_file",
        help="path to configuration file",
        required=True,
        type=str,
        default=argparse.SUPPRESS,
    )


def _add_config_format(
    parser: argparse.ArgumentParser,
    required: bool = False,
) -> None:
    parser.add_argument(
        "--config-format",
        "-f",
        dest="config_format",
        help="format of configuration file ; guessed from its extension by default, yaml otherwise",
        type=str,
        required=required,
        default=None,
        choices=CONFIGURATION_FORMATS,
    )


def _add_config_file_format(
    parser: argparse.ArgumentParser,
    format_required: bool = False,
) -> None:
    _add_config_file(
        parser=parser,
    )
    _add_config_format(
        parser=parser,
        required=format_required,
    )


if __name__ == "__main__":
    run(
        *sys.argv[1:],
    )
