"""MCP server exposing kernel evaluation, spectral densities and positive-definiteness checks."""

import asyncio
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict

from mcp.server import Server
from mcp.server.stdio import stdio_server
from mcp.types import Resource, TextContent, TextResourceContents, Tool

from .config import config
from .middleware.tracking import get_tracker, setup_logging
from .services.result_cache import cache_key_for_panel, get_cache
from .tools.evaluate import evaluate_kernel, evaluate_operator, spectral_density
from .tools.figure import FIGURE1_PANELS, figure1
from .tools.verify import lemma_bounds, pd_check, predicate
from .utils.output import render_json

logger = logging.getLogger(__name__)

# Initialize the MCP server
app = Server("zastavnyi-kernels")

# Thread pool executor for the blocking numerical tools
_executor = ThreadPoolExecutor(max_workers=4, thread_name_prefix="mcp-worker")

PANEL_URI_PREFIX = "figure1://panel/"

_FAMILY_PROPERTIES: Dict[str, Any] = {
    "family": {
        "type": "string",
        "description": "Kernel family",
        "enum": ["matern", "cauchy", "wendland"],
    },
    "nu": {"type": "number", "description": "Matern smoothness (nu > 0)"},
    "delta": {"type": "number", "description": "Cauchy shape (0 < delta <= 2)"},
    "lambda": {"type": "number", "description": "Cauchy decay (lambda > 0)"},
    "kappa": {"type": "number", "description": "Wendland smoothness (kappa >= 0)"},
    "mu": {"type": "number", "description": "Wendland exponent (mu > 0)"},
}

_OPERATOR_PROPERTIES: Dict[str, Any] = {
    "eps": {"type": "number", "description": "Operator exponent, non-zero"},
    "beta1": {"type": "number", "description": "Smaller scale (beta1 < beta2)"},
    "beta2": {"type": "number", "description": "Larger scale"},
}

_GRID_PROPERTIES: Dict[str, Any] = {
    "grid_min": {"type": "number", "description": "First grid point"},
    "grid_max": {"type": "number", "description": "Last grid point"},
    "grid_n": {"type": "integer", "description": "Number of grid points"},
}


def _family_params(arguments: Dict[str, Any]) -> Dict[str, Any]:
    return {key: arguments.get(key) for key in ("nu", "delta", "lambda", "kappa", "mu")}


def _grid_args(arguments: Dict[str, Any], defaults: Dict[str, Any]) -> Dict[str, Any]:
    return {key: arguments.get(key, value) for key, value in defaults.items()}


@app.list_tools()
async def list_tools() -> list[Tool]:
    """List all available tools."""
    return [
        Tool(
            name="evaluate_kernel",
            description="Evaluate a Matern, Generalized Cauchy or Generalized Wendland kernel phi(t/beta) on a uniform distance grid.",
            inputSchema={
                "type": "object",
                "properties": {
                    **_FAMILY_PROPERTIES,
                    "beta": {"type": "number", "description": "Scale (default: 1)", "default": 1.0},
                    **_GRID_PROPERTIES,
                },
                "required": ["family"],
            },
        ),
        Tool(
            name="evaluate_operator",
            description=(
                "Evaluate the Zastavnyi operator (beta2^eps phi(t/beta2) - beta1^eps phi(t/beta1)) / "
                "(beta2^eps - beta1^eps) together with both rescaled kernels."
            ),
            inputSchema={
                "type": "object",
                "properties": {**_FAMILY_PROPERTIES, **_OPERATOR_PROPERTIES, **_GRID_PROPERTIES},
                "required": ["family", "eps", "beta1", "beta2"],
            },
        ),
        Tool(
            name="spectral_density",
            description=(
                "Evaluate the d-dimensional radial spectral density of a kernel (or of an operator "
                "when eps is given) on a geometric frequency grid, with series diagnostics."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    **_FAMILY_PROPERTIES,
                    **_OPERATOR_PROPERTIES,
                    "d": {"type": "integer", "description": "Dimension"},
                    "beta": {"type": "number", "description": "Scale of the bare kernel (default: 1)"},
                    **_GRID_PROPERTIES,
                },
                "required": ["family", "d"],
            },
        ),
        Tool(
            name="pd_check",
            description=(
                "Run spectral, Gram-eigenvalue and complete-monotonicity checks on a kernel or operator "
                "and report the verdicts next to the expected membership."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    **_FAMILY_PROPERTIES,
                    **_OPERATOR_PROPERTIES,
                    "d": {"type": "integer", "description": "Dimension"},
                    "methods": {
                        "type": "array",
                        "items": {"type": "string", "enum": ["spectral", "gram", "monotonicity"]},
                        "description": "Checks to run (default: all)",
                    },
                    "n_points": {"type": "integer", "description": "Gram matrix size (at most 500)"},
                    "seed": {"type": "integer", "description": "Gram point seed"},
                    "k_max": {"type": "integer", "description": "Highest monotonicity order (default: 8)"},
                    "extend": {"type": "boolean", "description": "Extend the spectral search up to 1e6"},
                    **_GRID_PROPERTIES,
                },
                "required": ["family", "d"],
            },
        ),
        Tool(
            name="theorem_predicate",
            description="Expected membership in Phi_d or Phi_inf derived from the parameter conditions alone.",
            inputSchema={
                "type": "object",
                "properties": {
                    **_FAMILY_PROPERTIES,
                    "eps": {"type": "number", "description": "Operator exponent (omit for the bare kernel)"},
                    "d": {"type": "integer", "description": "Dimension (omit for Phi_inf)"},
                    "positive_eps_condition": {
                        "type": "boolean",
                        "description": "Use the positive-eps Wendland condition set",
                    },
                },
                "required": ["family"],
            },
        ),
        Tool(
            name="lemma_bounds",
            description=(
                "Verify the Bessel ratio bounds on z K_nu'(z)/K_nu(z) and the monotonicity of "
                "beta^a K_nu(beta) used for the delta = 2 Cauchy operator."
            ),
            inputSchema={
                "type": "object",
                "properties": {
                    "nu_values": {"type": "array", "items": {"type": "number"}, "description": "Bessel orders"},
                    "eps": {"type": "number", "description": "Operator exponent (default: -1.5)"},
                    "lambda": {"type": "number", "description": "Cauchy decay (default: 2)"},
                    "d": {"type": "integer", "description": "Dimension (default: 4)"},
                },
            },
        ),
        Tool(
            name="figure1",
            description="Curve data of the Matern, Cauchy and Wendland operator comparison panels.",
            inputSchema={
                "type": "object",
                "properties": {
                    "panels": {
                        "type": "array",
                        "items": {"type": "string", "enum": list(FIGURE1_PANELS)},
                        "description": "Panels to emit (default: all)",
                    },
                    "n": {"type": "integer", "description": "Points on [0, 1] (default: 512)", "default": 512},
                },
            },
        ),
        Tool(
            name="run_statistics",
            description="Counters of Hankel transforms, series evaluations, delegations and verdicts, plus cache statistics.",
            inputSchema={"type": "object", "properties": {}},
        ),
    ]


@app.list_resources()
async def list_resources() -> list[Resource]:
    """List the cached figure panels."""
    return [
        Resource(
            uri=f"{PANEL_URI_PREFIX}{key}",
            name=f"Figure 1 panel {key}",
            description=f"Operator curves for the {FIGURE1_PANELS[key]['family']} panel on 512 points of [0, 1]",
            mimeType="application/json",
        )
        for key in FIGURE1_PANELS
    ]


def _panel_data(panel: str) -> Dict[str, Any]:
    cache = get_cache()
    key = cache_key_for_panel(panel, 512)
    cached = cache.get(key)
    if cached is not None:
        return cached
    result = figure1(panels=[panel])
    if "error" not in result:
        cache.set(key, result)
    return result


@app.read_resource()
async def read_resource(uri: str) -> TextResourceContents:
    """Read a figure panel, computing it once and serving it from the cache afterwards."""
    uri_str = str(uri)
    if not uri_str.startswith(PANEL_URI_PREFIX):
        raise ValueError(f"Unknown resource: {uri_str}")
    panel = uri_str[len(PANEL_URI_PREFIX):].strip().upper()
    if panel not in FIGURE1_PANELS:
        raise ValueError(f"Unknown figure panel: {panel}")

    loop = asyncio.get_running_loop()
    data = await loop.run_in_executor(_executor, lambda: _panel_data(panel))
    return TextResourceContents(
        uri=uri_str,
        text=render_json(data),
        mimeType="application/json",
    )


def _dispatch(name: str, arguments: Dict[str, Any]) -> Dict[str, Any]:
    if name == "evaluate_kernel":
        return evaluate_kernel(
            family=arguments["family"],
            params=_family_params(arguments),
            beta=arguments.get("beta", 1.0),
            **_grid_args(arguments, {"grid_min": 0.0, "grid_max": 1.0, "grid_n": 512}),
        )
    if name == "evaluate_operator":
        return evaluate_operator(
            family=arguments["family"],
            params=_family_params(arguments),
            eps=arguments["eps"],
            beta1=arguments["beta1"],
            beta2=arguments["beta2"],
            **_grid_args(arguments, {"grid_min": 0.0, "grid_max": 1.0, "grid_n": 512}),
        )
    if name == "spectral_density":
        return spectral_density(
            family=arguments["family"],
            params=_family_params(arguments),
            d=arguments["d"],
            eps=arguments.get("eps"),
            beta=arguments.get("beta", 1.0),
            beta1=arguments.get("beta1"),
            beta2=arguments.get("beta2"),
            **_grid_args(arguments, {"grid_min": 1e-3, "grid_max": 1e3, "grid_n": 400}),
        )
    if name == "pd_check":
        return pd_check(
            family=arguments["family"],
            params=_family_params(arguments),
            d=arguments["d"],
            eps=arguments.get("eps"),
            beta1=arguments.get("beta1", 1.0),
            beta2=arguments.get("beta2"),
            methods=tuple(arguments.get("methods") or ("spectral", "gram", "monotonicity")),
            n_points=arguments.get("n_points"),
            seed=arguments.get("seed"),
            k_max=arguments.get("k_max", 8),
            extend=arguments.get("extend", False),
            **_grid_args(arguments, {"grid_min": 1e-3, "grid_max": 1e3, "grid_n": 400}),
        )
    if name == "theorem_predicate":
        return predicate(
            family=arguments["family"],
            params=_family_params(arguments),
            eps=arguments.get("eps"),
            d=arguments.get("d"),
            positive_eps_condition=arguments.get("positive_eps_condition", False),
        )
    if name == "lemma_bounds":
        return lemma_bounds(
            nu_values=tuple(arguments.get("nu_values") or (0.5, 1.5, 3.0)),
            eps=arguments.get("eps", -1.5),
            lam=arguments.get("lambda", 2.0),
            d=arguments.get("d", 4),
        )
    if name == "figure1":
        return figure1(panels=arguments.get("panels"), n=arguments.get("n", 512))
    if name == "run_statistics":
        return {"tracker": get_tracker().get_stats(), "cache": get_cache().get_stats()}
    raise ValueError(f"Unknown tool: {name}")


@app.call_tool()
async def call_tool(name: str, arguments: Any) -> list[TextContent]:
    """Handle tool execution."""
    try:
        # Numerical tools block; keep them off the event loop
        loop = asyncio.get_running_loop()
        result = await loop.run_in_executor(_executor, lambda: _dispatch(name, arguments or {}))
        return [TextContent(type="text", text=render_json(result))]
    except Exception as e:
        logger.error(f"Tool {name} failed: {e}")
        return [TextContent(type="text", text=json.dumps({"error": str(e), "tool": name}, indent=2))]


async def main():
    """Run the MCP server."""
    setup_logging()
    invalid_settings = config.get_invalid_settings()
    if invalid_settings:
        logger.warning(f"Invalid configuration for: {', '.join(invalid_settings)}")

    async with stdio_server() as (read_stream, write_stream):
        await app.run(
            read_stream,
            write_stream,
            app.create_initialization_options(),
        )


if __name__ == "__main__":
    asyncio.run(main())
