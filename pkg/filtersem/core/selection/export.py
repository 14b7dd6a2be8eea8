"""Search log and chromosome files."""
import json
from pathlib import Path
from typing import Sequence

from filtersem.core.selection.fitness import Chromosome
from filtersem.core.selection.ga import GenerationRecord
from filtersem.core.table import write_table


GA_LOG_COLUMNS = (
    "generation",
    "best_fitness",
    "mean_fitness",
    "bits_set_of_best",
)


def write_ga_log(
    path: Path,
    log: Sequence[GenerationRecord],
) -> Path:
    """
    Write the log of a search as CSV.

    Args:
        path: the destination file
        log: the generation records

    Returns:
        the path of the written file
    """
    return write_table(
        path=path,
        rows=(
            {
                "generation": record.generation,
                "best_fitness": record.best_fitness,
                "mean_fitness": record.mean_fitness,
                "bits_set_of_best": record.bits_set,
            }
            for record in log
        ),
        columns=GA_LOG_COLUMNS,
    )


def write_chromosome(
    path: Path,
    chromosome: Chromosome,
    layer: str,
    part_class: str,
) -> Path:
    """
    Write a chromosome as JSON: its bit string, its filter indices and its fitness.

    Args:
        path: the destination file
        chromosome: the chromosome
        layer: the layer of the filters
        part_class: the part class the chromosome was searched for

    Returns:
        the path of the written file
    """
    path.parent.mkdir(
        parents=True,
        exist_ok=True,
    )
    data = {
        "layer": layer,
        "part_class": part_class,
        "n_filters": int(chromosome.bits.shape[0]),
        "bits": chromosome.as_string(),
        "filters": chromosome.filters,
        "fitness": chromosome.fitness,
    }
    path.write_text(
        json.dumps(
            data,
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return path
