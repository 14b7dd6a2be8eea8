from __future__ import annotations

import io
from contextlib import (
    ExitStack,
    redirect_stderr,
    redirect_stdout,
)
from types import TracebackType
from typing import (
    List,
    Optional,
    Type,
)


class StdRedirect:
    _stdout: io.StringIO
    _stderr: io.StringIO
    _stack: ExitStack

    def __init__(self) -> None:
        self._stdout = io.StringIO()
        self._stderr = io.StringIO()
        self._stack = ExitStack()

    def __enter__(self) -> StdRedirect:
        self._stack.enter_context(redirect_stdout(self._stdout))
        self._stack.enter_context(redirect_stderr(self._stderr))
        return self

    def __exit__(
        self,
        exc_type: Optional[Type[BaseException]],
        exc_inst: Optional[BaseException],
        exc_tb: Optional[TracebackType],
    ) -> None:
        self._stack.close()

    def get_stdout(self) -> str:
        return self._stdout.getvalue()

    def get_stderr(self) -> str:
        return self._stderr.getvalue()

    def get_stderr_lines(self) -> List[str]:
        return [line for line in self.get_stderr().splitlines() if line.strip()]

    @classmethod
    def redirect(cls) -> StdRedirect:
        return StdRedirect()
