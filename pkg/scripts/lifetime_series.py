"""Annualized emissions over lifetime for several scenarios, as CSV on stdout.

    python3 scripts/lifetime_series.py > series.csv
    python3 scripts/lifetime_series.py jetson_terrestrial_clean jetson_orbital_radhard jetson_terrestrial_dirty
"""

import csv
import sys

from llmspace import compare, golden_scenarios, load_catalog

DEFAULT = ("terrestrial_clean", "starlink_v1_cots", "starlink_v1_radhard", "starlink_v1_radopt", "terrestrial_dirty")


def main(names):
    golden = golden_scenarios()
    result = compare([golden[n] for n in names or DEFAULT], load_catalog())
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["scenario", "lifetime_years", "embodied_share_kg", "operational_kg", "annualized_kg"])
    for entry in result.entries:
        for years, value in entry.series:
            writer.writerow([entry.scenario.name, years, entry.report.embodied_total / years,
                             entry.report.operational_annual, value])


if __name__ == "__main__":
    main(sys.argv[1:])
