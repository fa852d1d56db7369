"""Python bindings for the bubblelab C++ core."""

import json as _json

from ._core import (
    Error,
    bewley_invest,
    ces_verdict,
    crra_steady_state,
    diamond_shoot,
    liquidity_premium,
    montrucchio_test,
    olg_necessity,
    savings_wedge,
    solve_olg,
    spectral_radius,
    textbook_price,
)
from ._core import run_scenario as _run_scenario


def run_scenario(config_text):
    """Run a scenario given as config text. Returns (csv, verdict dict, exit code)."""
    csv, js, code = _run_scenario(config_text)
    return csv, _json.loads(js), code


def run_scenario_file(path):
    with open(path) as fh:
        return run_scenario(fh.read())


__all__ = [
    "Error",
    "bewley_invest",
    "ces_verdict",
    "crra_steady_state",
    "diamond_shoot",
    "liquidity_premium",
    "montrucchio_test",
    "olg_necessity",
    "run_scenario",
    "run_scenario_file",
    "savings_wedge",
    "solve_olg",
    "spectral_radius",
    "textbook_price",
]
