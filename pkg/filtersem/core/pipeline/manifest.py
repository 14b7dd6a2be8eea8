"""Run manifests: what produced a result directory."""
import hashlib
import json
from dataclasses import (
    asdict,
    dataclass,
    field,
)
from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
    Optional,
)

from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.pipeline.error import PipelineError
from filtersem.version import __VERSION__


MANIFEST_NAME = "manifest.json"

# keys that never change the results
_UNHASHED_KEYS = (
    "workers",
    "output",
)


@dataclass(frozen=True)
class RunManifest:
    """The identity of a run ; two runs with equal manifests write identical results."""

    command: str
    config_hash: str
    corpus: Optional[str]
    network: Optional[str]
    seed: int
    version: str
    outputs: List[str] = field(default_factory=list)


def config_hash(
    configuration: RootConfiguration,
) -> str:
    """
    Hash the parts of a configuration that determine the results.

    Args:
        configuration: a configuration

    Returns:
        the hex SHA-256 of the canonical JSON form, the worker count and the output directory left out
    """
    exported: Dict[str, Any] = {
        key: value for key, value in configuration.export_effective().items() if key not in _UNHASHED_KEYS
    }
    canonical = json.dumps(
        exported,
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def create_manifest(
    command: str,
    configuration: RootConfiguration,
    outputs: List[str],
) -> RunManifest:
    """
    Describe a run.

    Args:
        command: the command name
        configuration: the effective configuration
        outputs: the result paths, relative to the output directory

    Returns:
        the manifest
    """
    return RunManifest(
        command=command,
        config_hash=config_hash(configuration),
        corpus=configuration.corpus.path if configuration.corpus else None,
        network=configuration.network.spec if configuration.network else None,
        seed=configuration.seed,
        version=__VERSION__,
        outputs=sorted(outputs),
    )


def write_manifest(
    directory: Path,
    manifest: RunManifest,
) -> Path:
    """
    Write a manifest in a result directory.

    Args:
        directory: the result directory ; created when missing
        manifest: the manifest

    Returns:
        the path of the written file
    """
    directory.mkdir(
        parents=True,
        exist_ok=True,
    )
    path = directory / MANIFEST_NAME
    path.write_text(
        json.dumps(
            asdict(manifest),
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    return path


def read_manifest(
    directory: Path,
) -> RunManifest:
    """
    Read the manifest of a result directory.

    Args:
        directory: the result directory

    Returns:
        the manifest

    Raises:
        PipelineError: if the directory has no readable manifest
    """
    path = directory / MANIFEST_NAME
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        return RunManifest(**data)
    except (OSError, ValueError, TypeError) as e:
        raise PipelineError(f"No readable manifest in {directory}") from e
