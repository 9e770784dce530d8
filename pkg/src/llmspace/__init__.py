"""Carbon, power and latency modeling for LLM serving on LEO satellites."""

from llmspace.catalog import TechnologyCatalog, load_catalog
from llmspace.scenario import (
    CarbonReport,
    Scenario,
    annualize,
    compare,
    evaluate,
    golden_scenarios,
    per_request_carbon,
    sweep,
)

__all__ = [
    "CarbonReport",
    "Scenario",
    "TechnologyCatalog",
    "annualize",
    "compare",
    "evaluate",
    "golden_scenarios",
    "load_catalog",
    "per_request_carbon",
    "sweep",
]
