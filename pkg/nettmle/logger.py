"""Run logger"""

import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any

from pydantic import BaseModel


class RunLogger:
    """Run logger

    Records one CLI run per file: the resolved config, per-replication results,
    aggregated metrics or estimates, and every warning raised by the library.
    """

    def __init__(self, log_dir: str | Path | None = None):
        """Initialize logger

        Logs are stored in ~/.nettmle/log/ unless ``log_dir`` is given
        """
        self.log_dir = Path(log_dir).expanduser() if log_dir else Path.home() / ".nettmle" / "log"
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.log_file: Path | None = None
        self.log_index = 0
        self._handler: logging.Handler | None = None

    def start_new_run(self, command: str):
        """Start new run, create new log file and capture library warnings into it"""
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        self.log_file = self.log_dir / f"{command}_run_{timestamp}.log"
        self.log_index = 0

        with open(self.log_file, "w", encoding="utf-8") as f:
            f.write("=" * 80 + "\n")
            f.write(f"nettmle {command} - {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n")
            f.write("=" * 80 + "\n\n")

        if self._handler is None:
            self._handler = _WarningForwarder(self)
            logging.getLogger("nettmle").addHandler(self._handler)

    def finish(self):
        """Detach the warning handler"""
        if self._handler is not None:
            logging.getLogger("nettmle").removeHandler(self._handler)
            self._handler = None

    def log_config(self, config: BaseModel):
        self._write_json("CONFIG", "Resolved configuration", config.model_dump(mode="json"))

    def log_replication(self, result: BaseModel):
        self._write_json("REPLICATION", "Replication result", result.model_dump(mode="json"))

    def log_metrics(self, metrics: BaseModel):
        self._write_json("METRICS", "Study metrics", metrics.model_dump(mode="json"))

    def log_estimate(self, result: BaseModel):
        self._write_json("ESTIMATE", "Estimation result", result.model_dump(mode="json"))

    def log_warning(self, message: str, source: str | None = None):
        self._write_json("WARNING", "Warning", {"message": message, "source": source})

    def _write_json(self, log_type: str, title: str, data: dict[str, Any]):
        self.log_index += 1
        content = f"{title}:\n\n" + json.dumps(data, indent=2, ensure_ascii=False)
        self._write_log(log_type, content)

    def _write_log(self, log_type: str, content: str):
        """Write log entry

        Args:
            log_type: Log type (CONFIG, REPLICATION, METRICS, ESTIMATE, WARNING)
            content: Log content
        """
        if self.log_file is None:
            return

        with open(self.log_file, "a", encoding="utf-8") as f:
            f.write("\n" + "-" * 80 + "\n")
            f.write(f"[{self.log_index}] {log_type}\n")
            f.write(f"Timestamp: {datetime.now().strftime('%Y-%m-%d %H:%M:%S.%f')[:-3]}\n")
            f.write("-" * 80 + "\n")
            f.write(content + "\n")

    def get_log_file_path(self) -> Path | None:
        """Get current log file path"""
        return self.log_file


class _WarningForwarder(logging.Handler):
    def __init__(self, run_logger: RunLogger):
        super().__init__(level=logging.WARNING)
        self.run_logger = run_logger

    def emit(self, record: logging.LogRecord):
        self.run_logger.log_warning(record.getMessage(), source=record.name)
