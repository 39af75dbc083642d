import math
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
import tqdm
from scipy import integrate, special
from termcolor import colored

from landau_kernels.cli.run_config import RunConfig
from landau_kernels.kernel2d.kernel2d import Point2, g1_integral, g1_series, half_max_radius_2d
from landau_kernels.kernel3d.field import FieldParams, Point3
from landau_kernels.kernel3d.gamma import gamma_values, gamma_values_highfield, level_set_extents
from landau_kernels.kernel3d.kernel_matrix import kernel_matrix
from landau_kernels.kernel3d.kz_integrals import d1, d1_numeric, d2, d3_closed, d3_damped, d3_regular
from landau_kernels.kernel3d.landau import hermite_overlap_closed, hermite_overlap_numeric, lambda_closed, lambda_numeric, sum_rule_reproduction
from landau_kernels.moments.moments import appendix_integrals, moment_sums, moment_sums_integral, w1
from landau_kernels.quad.datamodel import SeriesPolicy
from landau_kernels.quad.oscillatory import oscillatory_abel
from landau_kernels.quad.series import sum_series_array
from landau_kernels.special.bessel import bessel_k, bessel_k_integral
from landau_kernels.special.polynomials import PolyOrder, laguerre, laguerre_table, legendre_p_zero_even
from landau_kernels.transform.gaussian import PI_34, GaussianSpec, f_rho_closed, f_rho_numeric, f_z
from landau_kernels.transform.variance import variance_pm
from landau_kernels.transform.wavefunction import psi_pm_general, psi_pm_highfield
from landau_kernels.utilities.logger import Logger

# Shift applied to a_0 by the mutation hook
A0_PERTURBATION = 1e-3
LAMBDA_SEED = 7
LAMBDA_POINT_PAIRS = 20

CheckOutcome = Tuple[bool, str]
FieldFactory = Callable[[float], FieldParams]


class PerturbedFieldParams(FieldParams):
  """FieldParams with a_0 moved by A0_PERTURBATION; a fresh build must fail validation under it."""

  def a(self, n: Union[int, np.ndarray]) -> Union[float, np.ndarray]:
    value = super().a(n)
    if np.ndim(n) > 0:
      return np.where(np.asarray(n) == 0, value + A0_PERTURBATION, value)
    return value + A0_PERTURBATION if n == 0 else value


@dataclass(frozen=True)
class ValidationCheck:
  name: str
  quick: bool
  run: Callable[[FieldFactory], CheckOutcome]


@dataclass(frozen=True)
class CheckReport:
  name: str
  passed: bool
  detail: str
  seconds: float


def _relative(a: complex, b: complex) -> float:
  return abs(a - b) / max(abs(b), 1e-300)


def _within(name: str, value: float, tol: float) -> CheckOutcome:
  return value <= tol, f"{name}={value:.3g} (tol {tol:.1g})"


def check_d1_closed_form(field: FieldFactory) -> CheckOutcome:
  fp = field(1.0)
  worst = 0.0
  for zeta in [0.3, 0.7, 2.0]:
    # a_0 = 1 for every field strength
    worst = max(worst, _relative(d1(0, zeta, fp), special.k0(zeta) / math.pi))
    worst = max(worst, _relative(d1(0, zeta, fp), d1_numeric(0, zeta, fp)))
  return _within("max rel err", worst, 1e-8)


def check_d2_over_d1(field: FieldFactory) -> CheckOutcome:
  fp = field(2.5)
  worst = max(abs(d2(n, 0.4, fp) / d1(n, 0.4, fp) - fp.eta) for n in [0, 1, 5, 40])
  return _within("max |d2/d1 - eta|", worst, 1e-12)


def check_d3_abel(field: FieldFactory) -> CheckOutcome:
  fp = field(1.0)
  lobes_err, damped_err = 0.0, 0.0
  for n, zeta in [(0, 0.8), (2, -0.5)]:
    closed = d3_closed(n, zeta, fp)
    lobes_err = max(lobes_err, abs(d3_regular(n, zeta, fp) - closed))
    damped_err = max(damped_err, abs(d3_damped(n, zeta, fp) - closed))
  return lobes_err < 1e-6 and damped_err < 1e-6, f"lobes err={lobes_err:.3g} damped err={damped_err:.3g}"


def check_lambda_closed_form(field: FieldFactory) -> CheckOutcome:
  rng = np.random.default_rng(LAMBDA_SEED)
  pairs = [(k, k) for k in range(9)] + [(k - 1, k) for k in range(1, 9)] + [(k, k - 1) for k in range(1, 9)]
  worst = 0.0
  for beta in [0.1, 1.0, 10.0]:
    fp = field(beta)
    for _ in range(LAMBDA_POINT_PAIRS):
      x1, y1, x2, y2 = rng.uniform(-1.0, 1.0, 4)
      p1, p2 = Point3(x=x1, y=y1, z=0.0), Point3(x=x2, y=y2, z=0.0)
      for m, n in pairs:
        expected = lambda_numeric(m, n, p1, p2, fp)
        worst = max(worst, abs(lambda_closed(m, n, p1, p2, fp) - expected) / max(1.0, abs(expected)))
  return _within("max scaled err", worst, 1e-8)


def check_hermite_overlap(field: FieldFactory) -> CheckOutcome:
  worst = max(
    _relative(hermite_overlap_closed(m, n, 0.3, -0.7), hermite_overlap_numeric(m, n, 0.3, -0.7))
    for m, n in [(0, 0), (1, 3), (4, 6)]
  )
  return _within("max rel err", worst, 1e-8)


def check_sum_rule(field: FieldFactory) -> CheckOutcome:
  points = sum_rule_reproduction([0.0, 0.0], 2.0, [8, 16, 32, 64], field(1.0))
  errors = [p.error for p in points]
  decreasing = all(later < earlier for earlier, later in zip(errors, errors[1:]))
  return decreasing and errors[-1] < 1e-2, "errors " + " ".join(f"{e:.2g}" for e in errors)


def check_low_field_moment(field: FieldFactory) -> CheckOutcome:
  return _within("|w1 / 3 - 1|", abs(w1(field(1e-6)).w1 / 3.0 - 1.0), 1e-2)


def check_high_field_moment(field: FieldFactory) -> CheckOutcome:
  fp = field(1e4)
  result = w1(fp)
  z_err = abs(result.w1_z - 1.0)
  rho_err = abs(result.w1_rho / (2.0 * fp.L2) - 1.0)
  return z_err < 2e-2 and rho_err < 0.2, f"w1_z err={z_err:.3g} w1_rho/2L^2 err={rho_err:.3g}"


def check_moment_methods(field: FieldFactory) -> CheckOutcome:
  worst = 0.0
  for beta in [1e-3, 1e-1, 1.0, 10.0, 1e3]:
    direct = moment_sums(field(beta))
    integral = moment_sums_integral(field(beta))
    for name in ["s00", "s20", "s02"]:
      worst = max(worst, _relative(getattr(direct, name), getattr(integral, name)))
  return _within("max rel diff", worst, 1e-6)


def check_appendix_limits(field: FieldFactory) -> CheckOutcome:
  low_first, low_second = appendix_integrals(1e-4)
  high_first, _ = appendix_integrals(100.0)
  errors = [abs(low_first - 1.0 / math.sqrt(2.0)), abs(low_second + 1.0 / math.sqrt(8.0))]
  ok = max(errors) < 1e-6 and abs(high_first - 1.0) < 2e-2
  return ok, f"low-eta errs {errors[0]:.2g} {errors[1]:.2g}, I1(100)={high_first:.4g}"


def check_nonrelativistic_moment(field: FieldFactory) -> CheckOutcome:
  fp = FieldParams(beta=1.0, nonrelativistic=True)
  return _within("|s02|", abs(moment_sums_integral(fp).s02), 1e-10)


def check_high_field_collapse(field: FieldFactory) -> CheckOutcome:
  fp = field(1e4)
  worst = 0.0
  for x, y, z in [(0.003, 0.0, 0.5), (0.0, 0.005, 1.0), (0.004, -0.002, -0.3)]:
    p = Point3(x=x, y=y, z=z)
    worst = max(worst, _relative(gamma_values(p, fp).g1, gamma_values_highfield(p, fp).g1))
  return _within("max rel err", worst, 1e-4)


def check_tilde_suppression(field: FieldFactory) -> CheckOutcome:
  g = gamma_values(Point3(x=0.003, y=0.0, z=0.5), field(1e4))
  return _within("|g1_t| / |g1|", abs(g.g1_t) / abs(g.g1), 1e-6)


def _variance_widening(field: FieldFactory, betas: List[float]) -> CheckOutcome:
  worst = math.inf
  for d in [0.25, 0.5, 1.0]:
    for beta in betas:
      v = variance_pm(GaussianSpec(d=d), field(beta))
      worst = min(worst, v.z_plus / v.z_g, v.z_minus / v.z_g)
  return worst >= 1.0 - 1e-9, f"min Z/Z_G={worst:.6g}"


def check_variance_widening_quick(field: FieldFactory) -> CheckOutcome:
  return _variance_widening(field, [1.0, 100.0, 1e4])


def check_variance_widening(field: FieldFactory) -> CheckOutcome:
  return _variance_widening(field, [1.0, 10.0, 100.0, 1e3, 1e4])


def check_variance_near_limit(field: FieldFactory) -> CheckOutcome:
  # B = 1e11 T
  v = variance_pm(GaussianSpec(d=1.0), field(22.7))
  ratio = v.z_plus / v.z_g
  return abs(ratio - 1.0) < 0.1, f"Z+/Z_G={ratio:.4g} Z-/Z_G={v.z_minus / v.z_g:.4g}"


def check_general_vs_highfield(field: FieldFactory) -> CheckOutcome:
  fp = field(100.0)
  spec = GaussianSpec(d=1.0)
  worst = 0.0
  for x, y, z in [(0.2, 0.1, 0.3), (-0.4, 0.3, -0.6)]:
    p = Point3(x=x, y=y, z=z)
    general = psi_pm_general(p, spec, fp, normalize=False).components[1]
    high = psi_pm_highfield(p, spec, fp, normalize=False)[1]
    worst = max(worst, _relative(general, high))
  return _within("max rel diff", worst, 3e-2)


def check_f_rho_closed_form(field: FieldFactory) -> CheckOutcome:
  fp = field(1.0)
  return _within("abs err", abs(f_rho_closed(0.3, -0.2, 1.0, fp) - f_rho_numeric(0.3, -0.2, 1.0, fp)), 1e-8)


def check_plane_series_integral(field: FieldFactory) -> CheckOutcome:
  fp = field(1.0)
  p = Point2(x=math.sqrt(2.0), y=0.0)
  series = g1_series(p, fp, SeriesPolicy(n_max=1_000_000))
  return _within("rel diff", _relative(series.value, g1_integral(p, fp)), 1e-4)


def check_plane_high_field(field: FieldFactory) -> CheckOutcome:
  return _within("|G1| at rho=0.5", abs(g1_integral(Point2(x=0.5, y=0.0), field(1e6))), 1e-10)


def check_fig1_trends(field: FieldFactory) -> CheckOutcome:
  x_low, z_low = level_set_extents(field(1e-2), 0.05)
  x_high, z_high = level_set_extents(field(1e4), 0.05)
  ellipticity = max(x_low, z_low) / min(x_low, z_low)
  elongation = z_high / x_high
  return ellipticity < 1.3 and elongation > 3.0, f"ellipticity={ellipticity:.3g} elongation={elongation:.3g}"


def check_fig4_trends(field: FieldFactory) -> CheckOutcome:
  widths = {beta: half_max_radius_2d(field(beta)) for beta in [1e-4, 1e-2, 10.0, 1e4]}
  flat = abs(widths[1e-4] / widths[1e-2] - 1.0) < 0.1
  grows = widths[10.0] > widths[1e-2]
  shrinks = widths[1e4] < widths[1e-2] / 3.0
  detail = " ".join(f"{beta:g}:{w:.3g}" for beta, w in widths.items())
  return flat and grows and shrinks, detail


def check_laguerre_recurrence(field: FieldFactory) -> CheckOutcome:
  worst = 0.0
  for x in [0.5, 3.0, 10.0]:
    for alpha in [0, 1]:
      table = laguerre_table(x, alpha, 40)
      k = np.arange(1, 39)
      residual = (k + 1) * table[2:] - (2 * k + 1 + alpha - x) * table[1:-1] + (k + alpha) * table[:-2]
      scale = max(1.0, float(np.max(np.abs(table))))
      exact = math.exp(-0.5 * x) * special.eval_genlaguerre(np.arange(40), alpha, x)
      worst = max(worst, float(np.max(np.abs(residual))) / scale, float(np.max(np.abs(table - exact))) / scale)
      worst = max(worst, abs(laguerre(PolyOrder(n=25, alpha=alpha), x) - special.eval_genlaguerre(25, alpha, x)) / max(1.0, abs(special.eval_genlaguerre(25, alpha, x))))
  return _within("max scaled residual", worst, 1e-10)


def check_legendre_zero_sum(field: FieldFactory) -> CheckOutcome:
  # sum_m P_{2m}(0) t^m = (1 + t)^{-1/2}, summed at t = 1
  result = sum_series_array(legendre_p_zero_even(4000), SeriesPolicy(n_max=4001), alternating=True)
  return _within("|sum - 1/sqrt(2)|", abs(result.value - 1.0 / math.sqrt(2.0)), 1e-6)


def check_bessel_integral(field: FieldFactory) -> CheckOutcome:
  worst = max(
    _relative(bessel_k(order, x), bessel_k_integral(order, x))
    for order in [0, 1] for x in [1e-3, 0.1, 1.0, 5.0, 30.0]
  )
  return _within("max rel err", worst, 1e-10)


def check_abel_linearity(field: FieldFactory) -> CheckOutcome:
  g_a = lambda k: k / math.sqrt(1.0 + k * k)
  g_b = lambda k: -math.expm1(-k)
  zeta = 0.7
  value_a, value_b = oscillatory_abel(g_a, zeta), oscillatory_abel(g_b, zeta)
  mixed = oscillatory_abel(lambda k: 0.25 * g_a(k) + 0.75 * g_b(k), zeta)
  oddness = abs(oscillatory_abel(g_a, -zeta) + value_a)
  linearity = abs(mixed - 0.25 * value_a - 0.75 * value_b)
  return oddness < 1e-12 and linearity < 1e-7, f"oddness err={oddness:.3g} linearity err={linearity:.3g}"


def check_gauge_modulus(field: FieldFactory) -> CheckOutcome:
  fp = field(1.0)
  worst = 0.0
  for x, y, z in [(0.3, 0.4, 0.5), (-0.7, 0.2, -1.1), (0.1, -0.9, 0.3)]:
    above = gamma_values(Point3(x=x, y=y, z=z), fp)
    below = gamma_values(Point3(x=x, y=-y, z=z), fp)
    worst = max(worst, _relative(abs(above.g1), abs(below.g1)), _relative(abs(above.g2), abs(below.g2)))
  return _within("max rel diff", worst, 1e-8)


def check_tilde_low_field(field: FieldFactory) -> CheckOutcome:
  result = w1(field(1e-4))
  return _within("|w1_t - w1|", abs(result.w1_t - result.w1), 0.02)


def check_f_z_trapezoid(field: FieldFactory) -> CheckOutcome:
  worst = 0.0
  for d in [0.5, 1.0]:
    k = np.linspace(-14.0 / d, 14.0 / d, 28_001)
    envelope = np.exp(-0.5 * k * k * d * d) / np.sqrt(1.0 + k * k)
    for z in [0.0, 0.4, -1.3]:
      integrand = (np.cos(k * z) + k * np.sin(k * z)) * envelope
      oracle = math.sqrt(2.0 * d) / (2.0 * PI_34) * integrate.trapezoid(integrand, k)
      worst = max(worst, abs(f_z(z, d).real - oracle))
  return _within("max abs err", worst, 1e-8)


def check_variance_decreasing(field: FieldFactory) -> CheckOutcome:
  spec = GaussianSpec(d=1.0)
  results = [variance_pm(spec, field(beta)) for beta in [1.0, 10.0, 100.0, 1e3, 1e4]]
  plus = [r.z_plus for r in results]
  minus = [r.z_minus for r in results]
  ok = all(b <= a * (1.0 + 1e-9) for series in (plus, minus) for a, b in zip(series, series[1:]))
  return ok, "Z+ " + " ".join(f"{z:.4g}" for z in plus) + " Z- " + " ".join(f"{z:.4g}" for z in minus)


def check_kernel_sparsity(field: FieldFactory) -> CheckOutcome:
  m = kernel_matrix(Point3(x=0.3, y=-0.2, z=0.4), field(1.0))
  zeros = [(0, 0), (0, 1), (1, 0), (1, 1), (2, 2), (2, 3), (3, 2), (3, 3)]
  worst = max(abs(m.block[i, j]) for i, j in zeros)
  return _within("max |block| at zero entries", worst, 0.0)


VALIDATION_CHECKS = [
  ValidationCheck("d1 closed form", True, check_d1_closed_form),
  ValidationCheck("d2/d1 = eta", True, check_d2_over_d1),
  ValidationCheck("d3 Abel value", True, check_d3_abel),
  ValidationCheck("Lambda closed form", False, check_lambda_closed_form),
  ValidationCheck("Hermite overlap identity", True, check_hermite_overlap),
  ValidationCheck("Landau projector sum rule", True, check_sum_rule),
  ValidationCheck("W1 low-field limit", True, check_low_field_moment),
  ValidationCheck("W1 high-field limit", True, check_high_field_moment),
  ValidationCheck("W1 sum vs integral", False, check_moment_methods),
  ValidationCheck("generating integral limits", True, check_appendix_limits),
  ValidationCheck("nonrelativistic W1_rho", True, check_nonrelativistic_moment),
  ValidationCheck("high-field collapse", True, check_high_field_collapse),
  ValidationCheck("tilde suppression", True, check_tilde_suppression),
  ValidationCheck("variance widening (subset)", True, check_variance_widening_quick),
  ValidationCheck("variance widening", False, check_variance_widening),
  ValidationCheck("variance near B = 1e11 T", True, check_variance_near_limit),
  ValidationCheck("F_rho closed form", True, check_f_rho_closed_form),
  ValidationCheck("general vs high-field spinor", False, check_general_vs_highfield),
  ValidationCheck("2D series vs integral", False, check_plane_series_integral),
  ValidationCheck("2D high-field locality", True, check_plane_high_field),
  ValidationCheck("fig1 level-set trends", False, check_fig1_trends),
  ValidationCheck("fig4 width trends", False, check_fig4_trends),
  ValidationCheck("Laguerre recurrence", True, check_laguerre_recurrence),
  ValidationCheck("sum P_2m(0) = 1/sqrt(2)", True, check_legendre_zero_sum),
  ValidationCheck("Bessel K integral form", True, check_bessel_integral),
  ValidationCheck("Abel integral odd and linear", True, check_abel_linearity),
  ValidationCheck("3D gauge modulus", True, check_gauge_modulus),
  ValidationCheck("tilde W1 at low field", True, check_tilde_low_field),
  ValidationCheck("F_z trapezoid oracle", True, check_f_z_trapezoid),
  ValidationCheck("Z+- decreasing in beta", False, check_variance_decreasing),
  ValidationCheck("kernel block sparsity", True, check_kernel_sparsity),
]


def field_factory(perturb_a0: bool) -> FieldFactory:
  cls = PerturbedFieldParams if perturb_a0 else FieldParams
  return lambda beta: cls(beta=beta)


def run_checks(checks: List[ValidationCheck], field: FieldFactory) -> List[CheckReport]:
  reports = []
  for check in tqdm.tqdm(checks, desc="validate"):
    start = time.time()
    try:
      passed, detail = check.run(field)
    except Exception as e:
      passed, detail = False, f"{e.__class__.__name__}: {e}"
    report = CheckReport(name=check.name, passed=bool(passed), detail=detail, seconds=time.time() - start)
    status = colored("PASS", "green") if report.passed else colored("FAIL", "red", attrs=["bold"])
    tqdm.tqdm.write(f"{status} {report.name:<30} {report.detail} [{report.seconds:.1f}s]")
    reports.append(report)
  return reports


def cmd_validate(cfg: RunConfig, logger: Optional[Logger] = None) -> int:
  """Runs the oracle and invariant checks; the return value is the process exit code."""
  logger = Logger(key="validate") if logger is None else logger
  checks = [c for c in VALIDATION_CHECKS if c.quick or not cfg.quick]
  if cfg.perturb_a0:
    logger.log(f" a_0 perturbed by {A0_PERTURBATION}; failures are expected")
  reports = run_checks(checks, field_factory(cfg.perturb_a0))
  failed = [r for r in reports if not r.passed]
  logger.count_flags(["passed" if r.passed else "failed" for r in reports], ok_flag="passed")
  logger.log(f" {len(reports) - len(failed)}/{len(reports)} checks passed")
  return 1 if len(failed) > 0 else 0
