from pathlib import Path
from typing import (
    Any,
    Dict,
    List,
)

from filtersem.core.configuration.root import RootConfiguration
from filtersem.core.corpus.io import save_corpus
from filtersem.core.corpus.synthetic import (
    SyntheticLayout,
    default_layout,
    generate_synthetic,
)
from filtersem.core.pipeline.listener import (
    PipelineEvent,
    PipelineListener,
    PipelineWarningEvent,
)
from filtersem.tests.resource import resource


class RecordingPipelineListener(PipelineListener):
    events: List[PipelineEvent]

    def __init__(self) -> None:
        self.events = []

    def on_event(
        self,
        event: PipelineEvent,
    ) -> None:
        self.events.append(event)

    @property
    def warnings(self) -> List[str]:
        return [event.message for event in self.events if isinstance(event, PipelineWarningEvent)]


def write_corpus(
    directory: Path,
    n_images: int = 18,
) -> Path:
    save_corpus(
        directory=directory,
        images=generate_synthetic(
            seed=7,
            n_images=n_images,
            layout=SyntheticLayout(
                objects=default_layout().objects,
                image_size=48,
            ),
        ),
    )
    return directory


def run_configuration(
    directory: Path,
    output: str = "out",
    **sections: Any,
) -> RootConfiguration:
    corpus = directory / "corpus"
    if not corpus.is_dir():
        write_corpus(corpus)
    data: Dict[str, Any] = {
        "seed": 7,
        "output": str(directory / output),
        "network": {
            "spec": resource("networks/toy.json"),
        },
        "corpus": {
            "path": str(corpus),
            "min_samples": 2,
            "min_size": 3.0,
        },
        "ga": {
            "population": 6,
            "generations": 2,
        },
        "export": {
            "top_k": 3,
        },
    }
    data.update(sections)
    return RootConfiguration(**data)
