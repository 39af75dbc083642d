import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd
import tqdm

from landau_kernels.cli.run_config import OutputFormat, RunConfig
from landau_kernels.kernel2d.kernel2d import Point2, g1_integral, g_values, kernel2d_matrix
from landau_kernels.kernel3d.constants import KernelSign
from landau_kernels.kernel3d.field import Point3
from landau_kernels.kernel3d.gamma import gamma_grid, gamma_values
from landau_kernels.kernel3d.kernel_matrix import kernel_matrix_from_gamma
from landau_kernels.moments.moments import w1
from landau_kernels.transform.gaussian import GaussianSpec
from landau_kernels.transform.variance import variance_pm
from landau_kernels.utilities.config_manager import ConfigManager
from landau_kernels.utilities.errors import DomainError
from landau_kernels.utilities.logger import Logger
from landau_kernels.utilities.utilities import ensure_directory, format_float, maybe_call


class RowFlag:
  OK = "ok"
  TRUNCATED = "truncated"
  DOMAIN_SKIPPED = "domain-skipped"


FIG1_COLUMNS = ["beta", "x", "z", "gamma1_re", "gamma1_im", "terms_used", "flags"]
FIG2_COLUMNS = ["beta", "w1", "w1_rho", "w1_z", "w1_tilde", "method", "flags"]
FIG3_COLUMNS = ["beta", "d", "z_plus", "z_minus", "z_g", "flags"]
FIG4_COLUMNS = ["beta", "rho", "g1_abs", "flags"]


def parallel_map(fn: Callable[[Any], Any], items: Sequence[Any], threads: int, desc: str) -> List[Any]:
  """fn over items on a thread pool; results come back in item order."""
  if threads <= 1:
    return [fn(item) for item in tqdm.tqdm(items, desc=desc)]
  with ThreadPoolExecutor(max_workers=threads) as executor:
    return list(tqdm.tqdm(executor.map(fn, items), total=len(items), desc=desc))


def log_spaced(low: float, high: float, points: int) -> np.ndarray:
  return np.logspace(math.log10(low), math.log10(high), points)


def _flag(truncated: bool) -> str:
  return RowFlag.TRUNCATED if truncated else RowFlag.OK


def _format_cell(value: Any) -> str:
  if isinstance(value, (bool, np.bool_)):
    return str(bool(value)).lower()
  if isinstance(value, (int, np.integer)):
    return str(int(value))
  if isinstance(value, (float, np.floating)):
    return format_float(value)
  return "" if value is None else str(value)


def format_dataset(df: pd.DataFrame) -> pd.DataFrame:
  """Every cell as the exact text written to disk: floats with 17 significant digits."""
  return df.apply(lambda column: column.map(_format_cell))


def write_dataset(df: pd.DataFrame, path: str, output_format: str) -> str:
  formatted = format_dataset(df)
  ensure_directory(os.path.dirname(path))
  if output_format == OutputFormat.CSV:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
      formatted.to_csv(f, index=False, lineterminator="\n")
  elif output_format == OutputFormat.JSON:
    payload = {"columns": list(formatted.columns), "rows": formatted.values.tolist()}
    with open(path, "w", encoding="utf-8", newline="\n") as f:
      f.write(json.dumps(payload, indent=2))
      f.write("\n")
  else:
    raise ValueError(f"Unknown output format {output_format}")
  return path


def emit(df: pd.DataFrame, cfg: RunConfig, logger: Logger) -> pd.DataFrame:
  if "flags" in df.columns:
    logger.count_flags(df["flags"], ok_flag=RowFlag.OK)
  if cfg.output_path is not None:
    write_dataset(df, cfg.output_path, cfg.output_format)
    logger.log(f" wrote {len(df)} rows to {cfg.output_path}")
  else:
    print(format_dataset(df).to_csv(index=False, lineterminator="\n"), end="")
  return df


def _quick_or(defaults: Dict[str, Any], quick: Dict[str, Any], use_quick: bool, key: str, quick_key: str) -> Any:
  return quick[quick_key] if use_quick and quick_key in quick else defaults[key]


def cmd_fig1(cfg: RunConfig, config_manager: Optional[ConfigManager] = None, logger: Optional[Logger] = None) -> pd.DataFrame:
  """|Gamma1| data on the y = 0 plane for each beta; z = 0 is kept off the grid."""
  config_manager = ConfigManager() if config_manager is None else config_manager
  logger = Logger(key="fig1") if logger is None else logger
  defaults = config_manager.figure_defaults("fig1")
  quick = config_manager.figure_defaults("quick")
  xs = cfg.grid(0, _quick_or(defaults, quick, cfg.quick, "x_grid", "fig1_x_grid")).values()
  zs = cfg.grid(1, _quick_or(defaults, quick, cfg.quick, "z_grid", "fig1_z_grid")).values(avoid_zero=True)
  X, Z = np.meshgrid(xs, zs, indexing="ij")
  X, Z = X.ravel(), Z.ravel()
  policy = cfg.series_policy(config_manager)
  betas = cfg.betas(defaults["betas"])

  def rows_for(beta: float) -> List[Dict[str, Any]]:
    fp = cfg.field_params(beta)
    allowed = Z != 0.0
    grid = gamma_grid(X[allowed], np.zeros(int(np.sum(allowed))), Z[allowed], fp, policy)
    rows = []
    j = 0
    for x, z, ok in zip(X, Z, allowed):
      if not ok:
        rows.append({"beta": beta, "x": x, "z": z, "gamma1_re": math.nan, "gamma1_im": math.nan, "terms_used": 0, "flags": RowFlag.DOMAIN_SKIPPED})
        continue
      g1 = complex(grid.g1[j])
      rows.append({
        "beta": beta, "x": x, "z": z,
        "gamma1_re": g1.real, "gamma1_im": g1.imag,
        "terms_used": int(grid.terms_used[j]),
        "flags": _flag(bool(grid.truncated[j]))
      })
      j += 1
    return rows

  per_beta = parallel_map(rows_for, betas, cfg.threads, "fig1")
  df = pd.DataFrame([row for rows in per_beta for row in rows], columns=FIG1_COLUMNS)
  return emit(df, cfg, logger)


def cmd_fig2(cfg: RunConfig, config_manager: Optional[ConfigManager] = None, logger: Optional[Logger] = None) -> pd.DataFrame:
  """W1 and its parts over a log-spaced beta sweep."""
  config_manager = ConfigManager() if config_manager is None else config_manager
  logger = Logger(key="fig2") if logger is None else logger
  defaults = config_manager.figure_defaults("fig2")
  quick = config_manager.figure_defaults("quick")
  points = _quick_or(defaults, quick, cfg.quick, "points", "fig2_points")
  fixed = cfg.fixed_beta()
  betas = [fixed] if fixed is not None else list(log_spaced(defaults["beta_min"], defaults["beta_max"], points))
  policy = cfg.series_policy(config_manager)
  quad_cfg = cfg.quad_config(config_manager)
  method = cfg.method

  def row_for(beta: float) -> Dict[str, Any]:
    result = maybe_call(w1, cfg.field_params(beta), policy, method, quad_cfg, catch=(DomainError,))
    if result.content is None:
      return {"beta": beta, "w1": math.nan, "w1_rho": math.nan, "w1_z": math.nan, "w1_tilde": math.nan, "method": method, "flags": RowFlag.DOMAIN_SKIPPED}
    m = result.content
    return {"beta": beta, "w1": m.w1, "w1_rho": m.w1_rho, "w1_z": m.w1_z, "w1_tilde": m.w1_t, "method": m.method, "flags": _flag(m.truncated)}

  df = pd.DataFrame(parallel_map(row_for, betas, cfg.threads, "fig2"), columns=FIG2_COLUMNS)
  return emit(df, cfg, logger)


def cmd_fig3(cfg: RunConfig, config_manager: Optional[ConfigManager] = None, logger: Optional[Logger] = None) -> pd.DataFrame:
  """Variances of the transformed Gaussians for each width over a log-spaced beta sweep."""
  config_manager = ConfigManager() if config_manager is None else config_manager
  logger = Logger(key="fig3") if logger is None else logger
  defaults = config_manager.figure_defaults("fig3")
  quick = config_manager.figure_defaults("quick")
  points = _quick_or(defaults, quick, cfg.quick, "points", "fig3_points")
  fixed = cfg.fixed_beta()
  betas = [fixed] if fixed is not None else list(log_spaced(defaults["beta_min"], defaults["beta_max"], points))
  widths = cfg.widths if cfg.widths is not None else defaults["widths"]
  quad_cfg = cfg.quad_config(config_manager)
  items = [(float(d), float(beta)) for d in widths for beta in betas]

  def row_for(item) -> Dict[str, Any]:
    d, beta = item
    result = maybe_call(variance_pm, GaussianSpec(d=d), cfg.field_params(beta), quad_cfg, catch=(DomainError,))
    if result.content is None:
      return {"beta": beta, "d": d, "z_plus": math.nan, "z_minus": math.nan, "z_g": 1.5 * d * d, "flags": RowFlag.DOMAIN_SKIPPED}
    v = result.content
    return {"beta": beta, "d": d, "z_plus": v.z_plus, "z_minus": v.z_minus, "z_g": v.z_g, "flags": RowFlag.OK}

  df = pd.DataFrame(parallel_map(row_for, items, cfg.threads, "fig3"), columns=FIG3_COLUMNS)
  return emit(df, cfg, logger)


def cmd_fig4(cfg: RunConfig, config_manager: Optional[ConfigManager] = None, logger: Optional[Logger] = None) -> pd.DataFrame:
  """Gauge-independent |G1| along a radial ray in the plane."""
  config_manager = ConfigManager() if config_manager is None else config_manager
  logger = Logger(key="fig4") if logger is None else logger
  defaults = config_manager.figure_defaults("fig4")
  quick = config_manager.figure_defaults("quick")
  rhos = cfg.grid(0, _quick_or(defaults, quick, cfg.quick, "rho_grid", "fig4_rho_grid")).values()
  betas = cfg.betas(defaults["betas"])
  quad_cfg = cfg.quad_config(config_manager)
  items = [(float(beta), float(rho)) for beta in betas for rho in rhos]

  def row_for(item) -> Dict[str, Any]:
    beta, rho = item
    result = maybe_call(g1_integral, Point2(x=rho, y=0.0), cfg.field_params(beta), quad_cfg, catch=(DomainError,))
    if result.content is None:
      return {"beta": beta, "rho": rho, "g1_abs": math.nan, "flags": RowFlag.DOMAIN_SKIPPED}
    return {"beta": beta, "rho": rho, "g1_abs": abs(result.content), "flags": RowFlag.OK}

  df = pd.DataFrame(parallel_map(row_for, items, cfg.threads, "fig4"), columns=FIG4_COLUMNS)
  return emit(df, cfg, logger)


def _complex_entry(value: complex) -> Dict[str, str]:
  return {"re": format_float(value.real), "im": format_float(value.imag)}


def evaluate_point(cfg: RunConfig, config_manager: Optional[ConfigManager] = None) -> Dict[str, Any]:
  """Kernel elements, kernel matrix (both signs) and moments at one point and one beta."""
  config_manager = ConfigManager() if config_manager is None else config_manager
  beta = cfg.fixed_beta()
  if beta is None:
    raise ValueError("eval needs --beta or --tesla")
  fp = cfg.field_params(beta)
  policy = cfg.series_policy(config_manager)
  quad_cfg = cfg.quad_config(config_manager)
  out: Dict[str, Any] = {"beta": format_float(beta), "point": [format_float(v) for v in cfg.point]}

  if cfg.plane:
    p2 = Point2(x=cfg.point[0], y=cfg.point[1])
    g = g_values(p2, fp, quad_cfg)
    out["elements"] = {name: _complex_entry(getattr(g, name)) for name in ["g1", "g2", "g1_t", "g2_t"]}
    matrices = {sign: kernel2d_matrix(p2, fp, quad_cfg, sign) for sign in KernelSign.all()}
  else:
    p3 = Point3(x=cfg.point[0], y=cfg.point[1], z=cfg.point[2])
    g = gamma_values(p3, fp, policy)
    out["elements"] = {name: _complex_entry(getattr(g, name)) for name in ["g1", "g2", "g3_regular", "g1_t", "g2_t", "g3_t_regular"]}
    out["g3_delta_coeff"] = format_float(g.g3_delta_coeff)
    out["terms_used"] = g.terms_used
    out["truncated"] = g.truncated
    matrices = {sign: kernel_matrix_from_gamma(g, sign) for sign in KernelSign.all()}
    moments = w1(fp, policy, cfg.method, quad_cfg)
    out["moments"] = {name: format_float(getattr(moments, name)) for name in ["w1", "w1_rho", "w1_z", "w1_t", "w1_rho_t", "w1_z_t"]}

  out["kernel_matrix"] = {
    sign: [[_complex_entry(complex(v)) for v in row] for row in m.regular]
    for sign, m in matrices.items()
  }
  return out


def cmd_eval(cfg: RunConfig, config_manager: Optional[ConfigManager] = None, logger: Optional[Logger] = None) -> Dict[str, Any]:
  logger = Logger(key="eval") if logger is None else logger
  out = evaluate_point(cfg, config_manager)
  if cfg.output_path is not None and cfg.output_format == OutputFormat.JSON:
    ensure_directory(os.path.dirname(cfg.output_path))
    with open(cfg.output_path, "w", encoding="utf-8", newline="\n") as f:
      f.write(json.dumps(out, indent=2))
      f.write("\n")
    logger.log(f" wrote evaluation to {cfg.output_path}")
    return out

  for name, entry in out["elements"].items():
    print(f"{name:>14} {entry['re']:>26} {entry['im']:>26}")
  if "moments" in out:
    for name, value in out["moments"].items():
      print(f"{name:>14} {value:>26}")
  return out
