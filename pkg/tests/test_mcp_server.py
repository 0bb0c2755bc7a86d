#!/usr/bin/env python3
"""
Tests for the MCP server: handlers called directly, then one round trip
over the MCP protocol with the server running as a subprocess.
"""

import asyncio
import json
import os
import sys
from pathlib import Path
from unittest import mock

# Add project root to path
PROJECT_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from mcp import ClientSession, StdioServerParameters, stdio_client

from helpers import main_guard
from src import server
from src.server import call_tool, list_resources, list_tools, read_resource
from src.services.result_cache import cache_key_for_panel, get_cache

EXPECTED_TOOLS = {
    "evaluate_kernel",
    "evaluate_operator",
    "spectral_density",
    "pd_check",
    "theorem_predicate",
    "lemma_bounds",
    "figure1",
    "run_statistics",
}


def _call(name, arguments):
    contents = asyncio.run(call_tool(name, arguments))
    return json.loads(contents[0].text)


def test_list_tools():
    tools = asyncio.run(list_tools())
    assert {tool.name for tool in tools} == EXPECTED_TOOLS
    for tool in tools:
        assert tool.inputSchema["type"] == "object"


def test_evaluate_operator_tool():
    data = _call(
        "evaluate_operator",
        {"family": "matern", "nu": 0.5, "eps": -2.0, "beta1": 0.075, "beta2": 0.15, "grid_n": 32},
    )
    assert data["columns"] == ["t", "K", "phi_beta1", "phi_beta2"]
    assert data["rows"][0]["K"] == 1.0
    assert data["minimum"] < 0.0


def test_spectral_density_tool():
    data = _call("spectral_density", {"family": "cauchy", "delta": 0.6, "lambda": 2.5, "d": 2, "grid_n": 8})
    assert len(data["rows"]) == 8
    assert all(row["density"] > 0.0 for row in data["rows"])
    assert {row["method"] for row in data["rows"]} <= {"CauchySeries", "NumericHankel"}


def test_predicate_and_bounds_tools():
    claim = _call("theorem_predicate", {"family": "wendland", "kappa": 0.0, "mu": 4.5, "eps": -2.0, "d": 2})["claim"]
    assert claim["expected"] == "member"
    assert claim["iff"] is True
    bounds = _call("lemma_bounds", {"nu_values": [1.5]})
    assert bounds["passed"] is True


def test_tool_errors_are_reported():
    invalid = _call("evaluate_kernel", {"family": "matern", "nu": -1.0})
    assert invalid["error_type"] == "ValidationError"
    unknown = _call("no_such_tool", {})
    assert unknown["tool"] == "no_such_tool"
    assert "error" in unknown


def test_non_finite_results_are_strict_json():
    def reject(constant):
        raise ValueError(f"non-standard JSON constant {constant}")

    result = {"minimum": float("-inf"), "values": [float("nan"), 1.0]}
    with mock.patch.object(server, "_dispatch", return_value=result):
        contents = asyncio.run(call_tool("evaluate_kernel", {}))
    assert json.loads(contents[0].text, parse_constant=reject) == {"minimum": "-inf", "values": ["nan", 1.0]}


def test_run_statistics_tool():
    _call("pd_check", {"family": "matern", "nu": 0.5, "d": 2, "methods": ["spectral"], "grid_n": 16})
    stats = _call("run_statistics", {})
    assert stats["tracker"]["verdicts_issued"] >= 1
    assert "hit_rate" in stats["cache"]


def test_panel_resources_are_cached():
    resources = asyncio.run(list_resources())
    assert [str(r.uri) for r in resources] == [f"figure1://panel/{key}" for key in "ABC"]

    get_cache().clear()
    first = asyncio.run(read_resource("figure1://panel/C"))
    data = json.loads(first.text)
    assert {row["panel"] for row in data["rows"]} == {"C"}
    assert get_cache().get(cache_key_for_panel("C", 512)) is not None
    second = asyncio.run(read_resource("figure1://panel/c"))
    assert second.text == first.text

    for uri in ("figure1://panel/D", "kernels://matern"):
        try:
            asyncio.run(read_resource(uri))
        except ValueError:
            continue
        raise AssertionError(f"{uri} was served")


async def _protocol_round_trip():
    server_params = StdioServerParameters(
        command=sys.executable,
        args=["-m", "src.server"],
        env=os.environ.copy(),
        cwd=str(PROJECT_ROOT),
    )
    async with stdio_client(server_params) as (read, write):
        async with ClientSession(read, write) as session:
            await session.initialize()
            tools = await session.list_tools()
            assert {tool.name for tool in tools.tools} == EXPECTED_TOOLS
            result = await session.call_tool(
                "theorem_predicate", arguments={"family": "matern", "nu": 0.5, "eps": 1.0}
            )
            return json.loads(result.content[0].text)


def test_protocol_round_trip():
    claim = asyncio.run(_protocol_round_trip())["claim"]
    assert claim["theorem_id"] == "T2_matern"
    assert claim["expected"] == "member"


if __name__ == "__main__":
    main_guard(globals(), "MCP server")
