import logging
import time
import uuid
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any, Optional

from core.exceptions import EXIT_OK, command_exception_handler


logger = logging.getLogger('audit')


class RunRecord:
    """Provenance of one command run, logged when the run ends."""

    def __init__(self, command: str, seed: Optional[int], options: dict[str, Any]) -> None:
        self.run_id = str(uuid.uuid4())
        self.command = command
        self.seed = seed
        self.options = options
        self.exit_status = EXIT_OK
        self.started = time.perf_counter()

    def context(self) -> dict[str, Any]:
        return {
            'run_id': self.run_id,
            'command': self.command,
            'seed': self.seed,
            'exit_status': self.exit_status,
            'duration_s': round(time.perf_counter() - self.started, 6),
            'options': self.options,
        }


@contextmanager
def audit_run(command: str, seed: Optional[int], options: dict[str, Any]) -> Iterator[RunRecord]:
    """
    Record one command run. Library exceptions are converted to
    CommandError with the matching exit status before leaving the block.
    """
    record = RunRecord(command, seed, options)
    try:
        yield record
    except Exception as exc:
        error = command_exception_handler(exc)
        record.exit_status = error.returncode
        if error is exc:
            raise
        raise error from exc
    finally:
        logger.info('run', extra={'audit': record.context()})
