import datetime
import json
import os
from collections import Counter
from pydantic import BaseModel, Field
from typing import Any, Dict, Iterable, Optional

from landau_kernels.utilities.utilities import ensure_directory

LOG_FILENAME = "log.txt"


class Logger(BaseModel):
  """
  Run log for one command: echoes to stdout with a [key] prefix and, when
  dirname is set, appends to dirname/log.txt. Row flags reported through
  count_flags accumulate over the run.
  """
  key: Optional[str] = None
  dirname: Optional[str] = None
  flag_counts: Dict[str, int] = Field(default_factory=dict)

  @classmethod
  def construct(cls, dirname: Optional[str] = None, key: Optional[str] = None, metadata: Optional[Dict[str, Any]] = None) -> "Logger":
    """Opens the run log; the header line records the start time and the run metadata as JSON."""
    logger = cls(key=key, dirname=dirname)
    if dirname is not None:
      ensure_directory(dirname)
      header = {"command": key, "started": datetime.datetime.now().isoformat(timespec="seconds")}
      header.update({} if metadata is None else metadata)
      logger._append("# " + json.dumps(header, sort_keys=True, default=str))
    return logger

  def _append(self, line: str):
    with open(os.path.join(self.dirname, LOG_FILENAME), "a") as f:
      f.write(line + "\n")

  def log(self, msg: str):
    print(msg if self.key is None else f"[{self.key}]" + msg)
    if self.dirname is not None:
      self._append(msg)

  def count_flags(self, flags: Iterable[str], ok_flag: str = "ok") -> Dict[str, int]:
    """Adds a batch of row flags to the run totals and logs the non-ok ones."""
    batch = Counter(flags)
    for flag, count in batch.items():
      self.flag_counts[flag] = self.flag_counts.get(flag, 0) + count
    flagged = {flag: count for flag, count in batch.items() if flag != ok_flag}
    if len(flagged) > 0:
      self.log(" flagged rows: " + ", ".join(f"{count} {flag}" for flag, count in sorted(flagged.items())))
    return dict(batch)
