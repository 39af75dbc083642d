import math
import os
from typing import Any, Callable, Dict, Generic, Optional, Tuple, TypeVar
from dataclasses import dataclass
import yaml


T = TypeVar('T')
@dataclass
class Maybe(Generic[T]):
  content: Optional[T] = None
  error: Optional[str] = None

  def unwrap(self) -> T:
    if self.content is None:
      raise ValueError(f"Cannot unwrap Maybe with error: {self.error}")
    else:
      return self.content


def maybe_call(fn: Callable[..., T], *args, catch: Tuple[type, ...] = (ValueError,), **kwargs) -> Maybe[T]:
  """
  Calls fn and wraps the result. Exceptions listed in `catch` become Maybe.error.
  """
  try:
    return Maybe(content=fn(*args, **kwargs))
  except catch as e:
    return Maybe(error=f"{e.__class__.__name__}: {e}")


def read_yaml_file(file_path: str) -> Dict[str, Any]:
  with open(file_path, 'r') as file:
    data = yaml.safe_load(file)
  return data


def format_float(value: float) -> str:
  # 17 significant digits round-trip every IEEE double
  if value is None or (isinstance(value, float) and math.isnan(value)):
    return ""
  return f"{float(value):.17g}"


def ensure_directory(path: Optional[str]) -> Optional[str]:
  if path is not None and len(path) > 0:
    os.makedirs(path, exist_ok=True)
  return path
