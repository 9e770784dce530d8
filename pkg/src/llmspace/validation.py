"""Golden-scenario check against the published Starlink-V1 + DGX-H100 breakdown."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from llmspace.catalog import TechnologyCatalog
from llmspace.scenario import (
    BATTERY_LABEL,
    COMPUTE_LABEL,
    COOLING_LABEL,
    PLATFORM_LABEL,
    SOLAR_LABEL,
    CarbonReport,
    evaluate,
    golden_scenarios,
)

# tCO2e: (label, column) -> (reference, relative tolerance or None for report-only rows)
REFERENCE = {
    "cots": {
        "scenario": "starlink_v1_cots",
        "rows": {
            (SOLAR_LABEL, "manu"): (3.25, 0.10),
            (SOLAR_LABEL, "launch"): (0.59, 0.10),
            (BATTERY_LABEL, "manu"): (0.63, 0.10),
            (BATTERY_LABEL, "launch"): (0.51, 0.10),
            (COOLING_LABEL, "manu"): (2.29, 0.03),
            (COOLING_LABEL, "launch"): (2.41, 0.03),
            (COMPUTE_LABEL, "manu"): (0.96, 0.02),
            (COMPUTE_LABEL, "launch"): (1.89, 0.02),
            (PLATFORM_LABEL, "manu"): (1.63, 0.02),
            (PLATFORM_LABEL, "launch"): (2.41, 0.02),
        },
        "total": (16.57, 0.03),
        "constructed_reference": 18.3,
    },
    "radhard": {
        "scenario": "starlink_v1_radhard",
        "rows": {
            (SOLAR_LABEL, "manu"): (6.5, None),
            (SOLAR_LABEL, "launch"): (1.18, None),
            (BATTERY_LABEL, "manu"): (1.26, None),
            (BATTERY_LABEL, "launch"): (1.03, None),
            (COOLING_LABEL, "manu"): (4.58, None),
            (COOLING_LABEL, "launch"): (4.81, None),
            (COMPUTE_LABEL, "manu"): (5.16, None),
            (COMPUTE_LABEL, "launch"): (1.89, None),
            (PLATFORM_LABEL, "manu"): (1.63, None),
            (PLATFORM_LABEL, "launch"): (2.41, None),
        },
        "total": (30.45, 0.05),
        "constructed_reference": 32.5,
    },
}


@dataclass(frozen=True)
class ValidationRow:
    profile: str
    label: str
    column: str
    model_t: float
    reference_t: float
    tolerance: Optional[float]

    @property
    def delta(self) -> float:
        return (self.model_t - self.reference_t) / self.reference_t

    @property
    def passed(self) -> bool:
        return self.tolerance is None or abs(self.delta) <= self.tolerance


@dataclass(frozen=True)
class ValidationResult:
    profile: str
    report: CarbonReport
    rows: tuple[ValidationRow, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def breaches(self) -> list[ValidationRow]:
        return [r for r in self.rows if not r.passed]


def validate_profile(profile: str, catalog: TechnologyCatalog) -> ValidationResult:
    ref = REFERENCE[profile]
    report = evaluate(golden_scenarios()[ref["scenario"]], catalog)
    rows = []
    for (label, column), (expected, tol) in ref["rows"].items():
        item = report.item(label)
        value = item.manu if column == "manu" else item.launch
        rows.append(ValidationRow(profile, label, column, value / 1000.0, expected, tol))
    expected, tol = ref["total"]
    rows.append(ValidationRow(profile, "total", "embodied", report.embodied_total / 1000.0, expected, tol))
    return ValidationResult(profile, report, tuple(rows))
