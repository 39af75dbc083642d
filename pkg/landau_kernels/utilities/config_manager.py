import os
from typing import Any, Dict, Optional

from landau_kernels.quad.datamodel import QuadConfig, SeriesPolicy
from landau_kernels.utilities.utilities import read_yaml_file

CONFIG_ROOT_PATH = os.path.join(os.path.dirname(__file__), "../../configs")
SERIES_POLICY_CONFIG_PATH = os.path.join(CONFIG_ROOT_PATH, "series_policy.yaml")
QUADRATURE_CONFIG_PATH = os.path.join(CONFIG_ROOT_PATH, "quadrature.yaml")
FIGURES_CONFIG_PATH = os.path.join(CONFIG_ROOT_PATH, "figures.yaml")


class ConfigManager:

  def __init__(self, config_root_path: Optional[str] = None):
    root = CONFIG_ROOT_PATH if config_root_path is None else config_root_path
    self.series_policy_config = self._read_optional(os.path.join(root, os.path.basename(SERIES_POLICY_CONFIG_PATH)))
    self.quadrature_config = self._read_optional(os.path.join(root, os.path.basename(QUADRATURE_CONFIG_PATH)))
    self.figures_config = self._read_optional(os.path.join(root, os.path.basename(FIGURES_CONFIG_PATH)))

  @staticmethod
  def _read_optional(path: str) -> Dict[str, Any]:
    # A missing file falls back to the model defaults
    if not os.path.exists(path):
      return {}
    return read_yaml_file(path) or {}

  def series_policy(self, **overrides) -> SeriesPolicy:
    values = {**self.series_policy_config, **{k: v for k, v in overrides.items() if v is not None}}
    return SeriesPolicy(**values)

  def quad_config(self, **overrides) -> QuadConfig:
    values = {**self.quadrature_config, **{k: v for k, v in overrides.items() if v is not None}}
    return QuadConfig(**values)

  def figure_defaults(self, name: str) -> Dict[str, Any]:
    return dict(self.figures_config.get(name, {}))
