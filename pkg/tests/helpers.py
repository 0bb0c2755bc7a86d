"""Shared script runner for the test modules (pytest collects the same functions)."""

import sys
import time
import traceback
from typing import Dict


def log_test(test_name: str):
    """Log test start."""
    print(f"\n{'='*60}")
    print(f"TEST: {test_name}")
    print(f"{'='*60}")


def run_module_tests(namespace: Dict[str, object], title: str) -> int:
    """
    Run every test_* function of a module and print a summary.

    Args:
        namespace: The module's globals()
        title: Heading for the summary

    Returns:
        0 when all tests pass, 1 otherwise
    """
    tests = {name: func for name, func in namespace.items() if name.startswith("test_") and callable(func)}
    results: Dict[str, bool] = {}
    for name, func in tests.items():
        log_test(name)
        start = time.perf_counter()
        try:
            func()
            results[name] = True
            print(f"✓ passed in {time.perf_counter() - start:.2f}s")
        except Exception as e:
            results[name] = False
            print(f"✗ ERROR: {e}")
            traceback.print_exc()

    print("\n" + "=" * 60)
    print(f"TEST SUMMARY: {title}")
    print("=" * 60)
    for name, passed in results.items():
        print(f"  {'✓ PASS' if passed else '✗ FAIL'}: {name}")
    failed = sum(1 for passed in results.values() if not passed)
    print(f"\n  Total: {len(results)} tests")
    print(f"  Passed: {len(results) - failed}")
    print(f"  Failed: {failed}")
    return 0 if failed == 0 else 1


def main_guard(namespace: Dict[str, object], title: str) -> None:
    """Script entry point shared by the test modules."""
    try:
        sys.exit(run_module_tests(namespace, title))
    except KeyboardInterrupt:
        print("\n\n⚠ Tests interrupted by user")
        sys.exit(1)


def approx_rel(actual: float, expected: float, rtol: float) -> bool:
    """Relative comparison that tolerates expected == 0 only for actual == 0."""
    if expected == 0:
        return actual == 0
    return abs(actual - expected) <= rtol * abs(expected)


def check_rel(actual: float, expected: float, rtol: float, label: str = "") -> None:
    """Assert a relative agreement with a readable message."""
    assert approx_rel(actual, expected, rtol), (
        f"{label} actual={actual!r} expected={expected!r} rel={abs(actual - expected) / abs(expected) if expected else actual!r}"
    )

