#!/usr/bin/env python3
"""Contour verdicts vs truncated-matrix eigenvalues on 3 spectra x 2 intensities x 2 lengths."""

import argparse
import os
import time

from alberlab import experiments as ex
from alberlab.alber import KernelParams, eigenvalue_oracle
from alberlab.io import write_csv
from alberlab.spectrum import discretize, gaussian_spectrum, jonswap_spectrum

CASES = [
    ("gaussian(w=0.02)", lambda a: gaussian_spectrum(a, 1.0, 0.02), (1.0, 0.01)),
    ("gaussian(w=0.05)", lambda a: gaussian_spectrum(a, 1.0, 0.05), (0.5, 0.05)),
    ("jonswap(gamma=10, kp=1, kmax=1.6)", lambda a: jonswap_spectrum(a, 10.0, 1.0, k_max=1.6),
     (100.0, 5.0)),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=float, nargs="+", default=[50.0, 100.0])
    ap.add_argument("--output", default=os.environ.get("ALBERLAB_OUTPUT_ROOT", "runs"))
    a = ap.parse_args()

    rows = []
    t0 = time.perf_counter()
    for name, make, intensities in CASES:
        for amp in intensities:
            for L in a.L:
                S = make(amp)
                res = ex.run_stability_pipeline(S, L, 1.0, 1.0)
                g2 = None
                if res.oracle.unstable:
                    kp = KernelParams(1.0, 1.0, discretize(S, L))
                    K2 = 2 * res.oracle.parameters["K_trunc"]
                    g2 = eigenvalue_oracle(kp, K_trunc=K2).diagnostics["max_real_eigenvalue"]
                conv = res.convergence
                row = [name, amp, L, res.contour.status, res.oracle.status, res.agree,
                       res.contour.max_growth_rate, res.oracle.max_growth_rate, g2,
                       conv[-1]["error"], ";".join(res.flags)]
                rows.append(row)
                print(" | ".join(str(v) for v in row), flush=True)
    header = ["spectrum", "intensity", "L", "contour", "oracle", "agree", "contour_growth",
              "oracle_growth", "oracle_growth_2K", "riemann_error_last", "flags"]
    config = {"experiment": "stability_matrix", "L": a.L, "p": 1.0, "q": 1.0,
              "cases": [(n, list(i)) for n, _, i in CASES]}
    d = ex.write_record(ex.RunRecord("stability_matrix", config,
                                     {"all_agree": all(r[5] for r in rows)}, ["matrix.csv"],
                                     time.perf_counter() - t0), a.output)
    write_csv(d / "matrix.csv", header, rows)
    print(d)


if __name__ == "__main__":
    main()
