"""Command-line front end: kernel and density tables, figure data, checks and sweeps."""

import argparse
import asyncio
import json
import logging
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, TextIO

from . import __version__
from .config import config
from .errors import ValidationError, ZastavnyiError, exit_code_for
from .middleware.tracking import get_tracker, setup_logging
from .pdcheck.verdicts import SCHEMA_VERSION
from .tools.evaluate import evaluate_kernel, evaluate_operator, spectral_density
from .tools.figure import figure1
from .tools.verify import CHECK_METHODS, lemma_bounds, pd_check, theorem_sweep
from .utils.output import columns_of, render_csv, render_json_lines, write_text

logger = logging.getLogger(__name__)

COMMANDS = ("eval", "spectral", "operator", "pd-check", "theorem-sweep", "figure1", "bounds", "serve")
# Exit status of a member claim refuted by a numerical check
EXIT_COHERENCE_VIOLATION = 3

_DISTANCE_GRID = (0.0, 1.0, 512)
_FREQUENCY_GRID = (1e-3, 1e3, 400)
_TABLE_COMMANDS = ("eval", "spectral", "operator", "figure1")
_RESULT_PAYLOAD_KEYS = ("rows", "columns", "records", "verdicts", "claim")


@dataclass
class RunConfig:
    """One validated command-line invocation."""

    command: str
    family: Optional[str] = None
    params: Dict[str, Optional[float]] = field(default_factory=dict)
    eps: Optional[float] = None
    beta1: Optional[float] = None
    beta2: Optional[float] = None
    beta: float = 1.0
    d: Optional[int] = None
    grid_min: Optional[float] = None
    grid_max: Optional[float] = None
    grid_n: Optional[int] = None
    seed: Optional[int] = None
    out: Optional[str] = None
    format: Optional[str] = None
    n_points: Optional[int] = None
    k_max: int = 8
    extend: bool = False
    methods: Sequence[str] = CHECK_METHODS
    eps_values: Sequence[float] = ()
    dims: Sequence[Optional[int]] = ()
    sweep_param: Optional[str] = None
    sweep_values: Sequence[float] = ()
    claims_only: bool = False
    panels: Sequence[str] = ()
    nu_values: Sequence[float] = (0.5, 1.5, 3.0)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"Unknown command '{self.command}'")
        if self.format is None:
            self.format = "csv" if self.command in _TABLE_COMMANDS else "json"
        if self.format not in ("csv", "json"):
            raise ValidationError(f"Output format must be csv or json, got '{self.format}'")
        needs_family = self.command in ("eval", "spectral", "operator", "pd-check", "theorem-sweep")
        if needs_family and not self.family:
            raise ValidationError(f"Command '{self.command}' needs --family")
        if self.command in ("spectral", "pd-check") and self.d is None:
            raise ValidationError(f"Command '{self.command}' needs --dim")
        if self.command == "operator" and (self.eps is None or self.beta1 is None or self.beta2 is None):
            raise ValidationError("Command 'operator' needs --eps, --beta1 and --beta2")
        if self.command == "theorem-sweep" and (not self.eps_values or self.beta1 is None or self.beta2 is None):
            raise ValidationError("Command 'theorem-sweep' needs --eps-values, --beta1 and --beta2")

        default_grid = _FREQUENCY_GRID if self.command in ("spectral", "pd-check") else _DISTANCE_GRID
        self.grid_min = default_grid[0] if self.grid_min is None else self.grid_min
        self.grid_max = default_grid[1] if self.grid_max is None else self.grid_max
        self.grid_n = default_grid[2] if self.grid_n is None else self.grid_n

    def describe(self) -> Dict[str, Any]:
        """Configuration as recorded in output metadata (output path excluded)."""
        described = asdict(self)
        described.pop("out")
        return {key: list(value) if isinstance(value, tuple) else value for key, value in described.items()}


def _parse_dimension(raw: str) -> Optional[int]:
    if raw.lower() in ("inf", "infinity", "none"):
        return None
    try:
        return int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dimension must be an integer or 'inf', got '{raw}'")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="python -m src",
        description="Zastavnyi operator kernels: evaluation, spectral densities and positive-definiteness checks.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", help="Kernel family: matern, cauchy or wendland.")
    common.add_argument("--nu", type=float, help="Matern smoothness nu > 0.")
    common.add_argument("--delta", type=float, help="Cauchy shape 0 < delta <= 2.")
    common.add_argument("--lambda", type=float, dest="lam", help="Cauchy decay lambda > 0.")
    common.add_argument("--kappa", type=float, help="Wendland smoothness kappa >= 0.")
    common.add_argument("--mu", type=float, help="Wendland exponent mu > 0.")
    common.add_argument("--eps", type=float, help="Operator exponent, non-zero.")
    common.add_argument("--beta1", type=float, help="Smaller operator scale.")
    common.add_argument("--beta2", type=float, help="Larger operator scale.")
    common.add_argument("--beta", type=float, default=1.0, help="Scale of a bare kernel (default: 1).")
    common.add_argument("--dim", type=int, dest="d", help="Dimension d.")
    common.add_argument("--grid-min", type=float, dest="grid_min", help="First grid point.")
    common.add_argument("--grid-max", type=float, dest="grid_max", help="Last grid point.")
    common.add_argument("--grid-n", type=int, dest="grid_n", help="Number of grid points.")
    common.add_argument("--seed", type=int, help=f"Gram point seed (default: {config.seed}).")
    common.add_argument("--out", help="Output path (default: stdout).")
    common.add_argument("--format", choices=["csv", "json"], help="Output format.")

    checks = argparse.ArgumentParser(add_help=False)
    checks.add_argument("--points", type=int, dest="n_points", help=f"Gram matrix size (default: {config.gram_points}).")
    checks.add_argument("--k-max", type=int, dest="k_max", default=8, help="Highest monotonicity order (default: 8).")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("eval", parents=[common], help="Tabulate phi(t / beta).")
    commands.add_parser("spectral", parents=[common], help="Tabulate the spectral density of a kernel or operator.")
    commands.add_parser("operator", parents=[common], help="Tabulate the operator and both rescaled kernels.")

    check = commands.add_parser("pd-check", parents=[common, checks], help="Run positive-definiteness checks.")
    check.add_argument("--methods", nargs="+", choices=list(CHECK_METHODS), default=list(CHECK_METHODS))
    check.add_argument("--extend", action="store_true", help="Extend the spectral search up to 1e6.")

    sweep = commands.add_parser("theorem-sweep", parents=[common, checks], help="Confront membership claims with checks.")
    sweep.add_argument("--eps-values", type=float, nargs="+", dest="eps_values", default=[])
    sweep.add_argument("--dims", type=_parse_dimension, nargs="+", default=None,
                       help="Dimensions; 'inf' stands for Phi_inf (default: --dim, else inf).")
    sweep.add_argument("--sweep-param", dest="sweep_param", help="Family parameter to vary (e.g. nu).")
    sweep.add_argument("--sweep-values", type=float, nargs="+", dest="sweep_values", default=[])
    sweep.add_argument("--claims-only", action="store_true", dest="claims_only", help="Report claims without checks.")

    figure = commands.add_parser("figure1", parents=[common], help="Curve data of the three comparison panels.")
    figure.add_argument("--panel", nargs="+", dest="panels", default=[], choices=["A", "B", "C", "a", "b", "c"])

    bounds = commands.add_parser("bounds", parents=[common], help="Bessel ratio bounds and monotonicity check.")
    bounds.add_argument("--nu-values", type=float, nargs="+", dest="nu_values", default=[0.5, 1.5, 3.0])

    commands.add_parser("serve", help="Start the MCP tool server on stdio.")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Validated RunConfig from parsed arguments."""
    values = vars(args)
    params = {
        "nu": values.get("nu"),
        "delta": values.get("delta"),
        "lambda": values.get("lam"),
        "kappa": values.get("kappa"),
        "mu": values.get("mu"),
    }
    dims = values.get("dims")
    if dims is None:
        dims = [values.get("d")]
    return RunConfig(
        command=args.command,
        family=values.get("family"),
        params=params,
        eps=values.get("eps"),
        beta1=values.get("beta1"),
        beta2=values.get("beta2"),
        beta=values.get("beta", 1.0),
        d=values.get("d"),
        grid_min=values.get("grid_min"),
        grid_max=values.get("grid_max"),
        grid_n=values.get("grid_n"),
        seed=values.get("seed"),
        out=values.get("out"),
        format=values.get("format"),
        n_points=values.get("n_points"),
        k_max=values.get("k_max", 8),
        extend=values.get("extend", False),
        methods=tuple(values.get("methods") or CHECK_METHODS),
        eps_values=tuple(values.get("eps_values") or ()),
        dims=tuple(dims),
        sweep_param=values.get("sweep_param"),
        sweep_values=tuple(values.get("sweep_values") or ()),
        claims_only=values.get("claims_only", False),
        panels=tuple(p.upper() for p in values.get("panels") or ()),
        nu_values=tuple(values.get("nu_values") or (0.5, 1.5, 3.0)),
    )


def _compute(run_config: RunConfig) -> Dict[str, Any]:
    c = run_config
    distance_grid = {"grid_min": c.grid_min, "grid_max": c.grid_max, "grid_n": c.grid_n}
    if c.command == "eval":
        return evaluate_kernel(c.family, c.params, beta=c.beta, **distance_grid)
    if c.command == "operator":
        return evaluate_operator(c.family, c.params, c.eps, c.beta1, c.beta2, **distance_grid)
    if c.command == "spectral":
        return spectral_density(
            c.family, c.params, c.d, eps=c.eps, beta=c.beta, beta1=c.beta1, beta2=c.beta2, **distance_grid
        )
    if c.command == "pd-check":
        if c.eps is None:
            beta1, beta2 = c.beta, None
        else:
            beta1, beta2 = c.beta1, c.beta2
            if beta1 is None or beta2 is None:
                raise ValidationError("An operator check needs --beta1 and --beta2")
        return pd_check(
            c.family,
            c.params,
            c.d,
            eps=c.eps,
            beta1=beta1,
            beta2=beta2,
            methods=c.methods,
            n_points=c.n_points,
            seed=c.seed,
            k_max=c.k_max,
            extend=c.extend,
            **distance_grid,
        )
    if c.command == "theorem-sweep":
        return theorem_sweep(
            c.family,
            c.params,
            c.eps_values,
            c.beta1,
            c.beta2,
            dims=c.dims,
            sweep_param=c.sweep_param,
            sweep_values=c.sweep_values,
            n_points=c.n_points,
            seed=c.seed,
            k_max=c.k_max,
            run_checks=not c.claims_only,
        )
    if c.command == "figure1":
        n = c.grid_n if c.grid_n is not None else _DISTANCE_GRID[2]
        return figure1(panels=list(c.panels) or None, n=n)
    if c.command == "bounds":
        return lemma_bounds(
            nu_values=c.nu_values,
            eps=-1.5 if c.eps is None else c.eps,
            lam=2.0 if c.params.get("lambda") is None else c.params["lambda"],
            d=4 if c.d is None else c.d,
        )
    raise ValidationError(f"Command '{c.command}' produces no table")


def _summary_rows(command: str, result: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Flat rows for the record-producing commands when CSV is requested."""
    if command == "pd-check":
        return [
            {key: verdict.get(key) for key in ("method", "verdict", "witness_location", "witness_value", "tolerance")}
            for verdict in result["verdicts"]
        ]
    if command == "theorem-sweep":
        rows = []
        for record in result["records"]:
            claim = record["claim"]
            rows.append(
                {
                    "theorem_id": claim["theorem_id"],
                    "family": claim["family"],
                    **claim["params"],
                    "eps": claim["eps"],
                    "d": claim["d"],
                    "expected": claim["expected"],
                    "checks": len(record["verdicts"]),
                    "refuted": sum(1 for v in record["verdicts"] if v["verdict"] == "refuted"),
                    "coherent": record["coherent"],
                }
            )
        return rows
    return [
        {"record": r["record"], "nu": r.get("nu"), "eps": r.get("eps"), "passed": r.get("passed")}
        for r in result["records"]
    ]


def _metadata(run_config: RunConfig, result: Dict[str, Any]) -> Dict[str, Any]:
    described = {k: v for k, v in result.items() if k not in _RESULT_PAYLOAD_KEYS}
    return {
        "schema_version": SCHEMA_VERSION,
        "record": "metadata",
        "version": __version__,
        "command": run_config.command,
        "config": run_config.describe(),
        **described,
    }


def render(run_config: RunConfig, result: Dict[str, Any]) -> str:
    """Output text for a successful result."""
    if run_config.format == "csv":
        if run_config.command in _TABLE_COMMANDS:
            return render_csv(result["rows"], result["columns"])
        rows = _summary_rows(run_config.command, result)
        return render_csv(rows, columns_of(rows))

    if run_config.command in _TABLE_COMMANDS:
        payload = result["rows"]
    elif run_config.command == "pd-check":
        payload = result["verdicts"] + [result["claim"]]
    else:
        payload = result["records"]
    return render_json_lines([_metadata(run_config, result)] + payload)


def _write_sidecar(run_config: RunConfig, result: Dict[str, Any]) -> None:
    if run_config.command == "figure1" and run_config.format == "csv" and run_config.out:
        text = json.dumps(_metadata(run_config, result), indent=2, sort_keys=True) + "\n"
        write_text(text, f"{run_config.out}.meta.json", sys.stdout)


def run(run_config: RunConfig, stream: Optional[TextIO] = None) -> int:
    """
    Execute one invocation and write its output.

    Args:
        run_config: Validated configuration
        stream: Destination when no output path is set (default: stdout)

    Returns:
        Exit status: 0 success, 1 validation error, 2 numerical failure,
        3 member claim refuted by a numerical check, either on the claimed
        kernel or on the requested one when the claim names another member
    """
    stream = stream or sys.stdout
    invalid_settings = config.get_invalid_settings()
    if invalid_settings:
        logger.error(f"Invalid configuration for: {', '.join(invalid_settings)}")
        return 1

    if run_config.command == "serve":
        from .server import main as serve

        asyncio.run(serve())
        return 0

    logger.info(f"Running {run_config.command}")
    get_tracker().reset_stats()
    try:
        result = _compute(run_config)
    except ZastavnyiError as e:
        logger.error(f"{run_config.command} failed: {e}")
        return exit_code_for(e)
    if "error" in result:
        logger.error(f"{run_config.command} failed ({result['error_type']}): {result['error']}")
        return result["exit_code"]

    write_text(render(run_config, result), run_config.out, stream)
    _write_sidecar(run_config, result)
    logger.info(f"Finished {run_config.command}: {get_tracker().get_stats()}")

    if result.get("coherence_violation"):
        logger.error("A member claim was refuted by a numerical check")
        return EXIT_COHERENCE_VIOLATION
    if result.get("subject_mismatch"):
        logger.error("The requested member is refuted; the member claim is about another kernel")
        return EXIT_COHERENCE_VIOLATION
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the command and return its exit status."""
    setup_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # --help and --version exit with 0; usage errors are validation errors
        return 0 if e.code in (0, None) else 1
    try:
        run_config = config_from_args(args)
    except ValidationError as e:
        logger.error(str(e))
        sys.stderr.write(f"error: {e}\n")
        return 1
    try:
        return run(run_config)
    except ZastavnyiError as e:
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Unexpected failure: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
