"""Print the Starlink-V1 + DGX-H100 breakdown next to the published figures.

    python3 scripts/reproduce_table.py [--catalog override.json]
"""

import argparse

from llmspace import load_catalog
from llmspace.validation import REFERENCE, validate_profile


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--catalog")
    args = parser.parse_args()
    catalog = load_catalog(args.catalog)
    for profile in REFERENCE:
        result = validate_profile(profile, catalog)
        print(f"== {profile} ({result.report.scenario})")
        print(f"{'item':<16}{'column':<10}{'model t':>10}{'ref t':>10}{'delta':>9}  status")
        for r in result.rows:
            status = "info" if r.tolerance is None else ("ok" if r.passed else "BREACH")
            print(f"{r.label:<16}{r.column:<10}{r.model_t:>10.3f}{r.reference_t:>10.2f}{r.delta:>+9.1%}  {status}")
        for note in result.report.notes:
            print(f"note: {note}")
        print()


if __name__ == "__main__":
    main()
