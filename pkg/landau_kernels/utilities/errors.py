from typing import Optional


class LandauKernelError(ValueError):
  pass


class DomainError(LandauKernelError):
  """Argument outside the mathematical domain of the requested quantity."""
  pass


class UnsupportedIndexPair(LandauKernelError):
  def __init__(self, m: int, n: int):
    super().__init__(f"Lambda_(m,n) has no closed form for (m, n) = ({m}, {n})")
    self.m = m
    self.n = n


class NonConvergent(LandauKernelError):
  def __init__(self, msg: str, best: Optional[complex] = None, estimate: Optional[float] = None):
    super().__init__(f"{msg} (best={best}, estimate={estimate})")
    self.best = best
    self.estimate = estimate
