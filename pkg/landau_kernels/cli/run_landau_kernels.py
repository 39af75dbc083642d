import argparse
import sys
import os
from typing import List, Optional

sys.path.append(os.path.join(os.path.dirname(__file__), '..', '..'))

from landau_kernels.cli.datasets import cmd_eval, cmd_fig1, cmd_fig2, cmd_fig3, cmd_fig4
from landau_kernels.cli.run_config import Command, GridAxis, OutputFormat, RunConfig
from landau_kernels.cli.validation import cmd_validate
from landau_kernels.kernel3d.constants import MomentMethod
from landau_kernels.utilities.config_manager import ConfigManager
from landau_kernels.utilities.logger import Logger

COMMANDS = {
  Command.FIG1: cmd_fig1,
  Command.FIG2: cmd_fig2,
  Command.FIG3: cmd_fig3,
  Command.FIG4: cmd_fig4,
  Command.EVAL: cmd_eval,
}


def _float_list(text: Optional[str]) -> Optional[List[float]]:
  if text is None:
    return None
  return [float(v) for v in text.split(",") if v.strip() != ""]


def build_parser() -> argparse.ArgumentParser:
  parser = argparse.ArgumentParser(description="Transformation kernels for Dirac electrons in a magnetic field")
  parser.add_argument("command", type=str, choices=Command.all())
  field = parser.add_mutually_exclusive_group()
  field.add_argument("--beta", type=float, default=None)
  field.add_argument("--tesla", type=float, default=None)
  parser.add_argument("--grid", type=str, action="append", default=[], help="min:max:steps; repeat once per axis")
  parser.add_argument("--d", type=str, default=None, help="comma separated Gaussian widths for fig3")
  parser.add_argument("--tol", type=float, default=None)
  parser.add_argument("--nmax", type=int, default=None)
  parser.add_argument("--method", type=str, default=MomentMethod.INTEGRAL, choices=[MomentMethod.INTEGRAL, MomentMethod.DIRECT_SUM])
  parser.add_argument("--plane", action="store_true", help="eval: 2D kernel at (x, y)")
  parser.add_argument("--point", type=str, default="0.5,0,0.5")
  parser.add_argument("--format", type=str, default=OutputFormat.CSV, choices=OutputFormat.all())
  parser.add_argument("--out", type=str, default=None)
  parser.add_argument("--threads", type=int, default=None)
  parser.add_argument("--quick", action="store_true")
  parser.add_argument("--log_dir", type=str, default=None)
  parser.add_argument("--perturb_a0", action="store_true", help="validate: shift a_0 to check that the suite can fail")
  return parser


def run_config_from_args(args) -> RunConfig:
  return RunConfig(
    command=args.command,
    beta=args.beta,
    tesla=args.tesla,
    grids=[GridAxis.parse(g) for g in args.grid],
    widths=_float_list(args.d),
    term_tol=args.tol,
    n_max=args.nmax,
    method=args.method,
    plane=args.plane,
    point=_float_list(args.point),
    output_path=args.out,
    output_format=args.format,
    threads=RunConfig.threads_from_env(args.threads),
    quick=args.quick,
    log_dir=args.log_dir,
    perturb_a0=args.perturb_a0
  )


def main(args) -> int:
  cfg = run_config_from_args(args)
  logger = Logger.construct(dirname=cfg.log_dir, key=cfg.command, metadata=cfg.model_dump(mode="json", exclude_none=True))
  if cfg.command == Command.VALIDATE:
    return cmd_validate(cfg, logger=logger)
  COMMANDS[cfg.command](cfg, config_manager=ConfigManager(), logger=logger)
  return 0


if __name__ == "__main__":
  """

  python landau_kernels/cli/run_landau_kernels.py fig1 --grid=-4:4:41 --grid=-2:2:40 --out=out/fig1.csv

  python landau_kernels/cli/run_landau_kernels.py fig3 --d=0.25,0.5,1.0 --threads=4 --format=json --out=out/fig3.json

  python landau_kernels/cli/run_landau_kernels.py eval --tesla=1e11 --point=0.3,0.1,0.5

  python landau_kernels/cli/run_landau_kernels.py validate --quick --log_dir=logs/validate
  """

  parser = build_parser()
  args = parser.parse_args()

  sys.exit(main(args=args))
