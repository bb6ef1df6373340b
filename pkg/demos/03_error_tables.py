"""Rerun one of the four reference error tables and compare.

Run:  python3 demos/03_error_tables.py [1|2|3|4]

LAPACK is used for the dense solves to keep this quick; the command-line
equivalent with the self-contained solver is
    matrixless reproduce --paper-table 1
"""
import dataclasses
import sys

import matrixless as ml
from matrixless.harness import compare_with_reference, format_reports

table_id = int(sys.argv[1]) if len(sys.argv) > 1 else 1
cfg = dataclasses.replace(ml.PRESETS[table_id], eig_method="lapack")
print(f"symbol {cfg.symbol}, methods {cfg.methods}, max error over the lowest {cfg.window:.0%} of j\n")

reports = ml.run_experiment(cfg)
print(format_reports(reports, "table"))
print(compare_with_reference(reports, table_id))

# The normalized rows (n+1)^k eps are flat across n: error ~ h^k.
