"""Where the errors live: NAS (angle expansion) against NA (additive expansion).

For f = (2 - 2cos)^2 the symbol is flat at theta = 0, which is outside the
simple-loop setting. Both expansions struggle for the first few
eigenvalues, but very differently.

Run:  python3 demos/04_extreme_eigenvalues.py [out.csv]
"""
import sys

import numpy as np

import matrixless as ml
from matrixless.harness import ExperimentConfig, emit

cfg = ExperimentConfig("rctp:l=2", ns=(1024,), levels=(2, 4), methods=("NAS", "NA"), eig_method="lapack")
reports = ml.run_experiment(cfg)

for r in reports:
    e = r.errors
    print(f"{r.method:>3} level {r.level}: max {e.max():.2e} at j={np.argmax(e) + 1:<4d}"
          f" first-10 max {e[:10].max():.2e}  middle max {e[256:768].max():.2e}")

# NA adds c_k(theta) h^k to f(theta); near theta = 0 the additive
# coefficients change fastest and interpolation suffers. NAS corrects the
# angle and evaluates f afterwards, so the flatness of f near 0 damps
# angle errors instead of amplifying them.

# Per-eigenvalue data for plotting log10 errors against j:
if len(sys.argv) > 1:
    emit(reports, "plotdata", sys.argv[1])
    print("wrote", sys.argv[1])
