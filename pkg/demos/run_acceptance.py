"""Run the full verification suite on the acceptance configuration.

Writes a JSON report (default acceptance_report.json, redirectable with
SPINCM_OUTPUT_DIR) and prints one line per check plus one line per
acceptance criterion.  Equivalent to

    spincm verify --config demos/configs/acceptance.json --out acceptance_report.json
"""

import argparse
import sys

from spincm.harness import acceptance_config, run_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="acceptance_report.json")
    args = ap.parse_args()
    rep = run_suite(acceptance_config(seed=args.seed), out=args.out)
    print(rep.to_text())
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
