#!/usr/bin/env python3
"""Self-convergence of the periodized kernel towards its infinite-line limit."""

import argparse
import os
import time

from alberlab import experiments as ex
from alberlab.alber import riemann_convergence_study
from alberlab.io import write_csv
from alberlab.spectrum import gaussian_spectrum

# off-lattice X (error O(1/L)) and one lattice point (error at round-off)
POINTS = [(0.5 + 1 / 150, 0.3), (0.2 + 1 / 150, 1.0), (0.3 + 1 / 150, 0.5 + 0.2j),
          (0.1 + 1 / 150, 0.2), (0.4 + 2 / 150, 0.7 - 1.0j), (0.5, 0.3)]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--L", type=float, nargs="+", default=[50.0, 100.0, 200.0, 400.0])
    ap.add_argument("--width", type=float, default=0.1)
    ap.add_argument("--output", default=os.environ.get("ALBERLAB_OUTPUT_ROOT", "runs"))
    a = ap.parse_args()

    S = gaussian_spectrum(1.0, 1.0, a.width)
    rows = []
    t0 = time.perf_counter()
    for X, w in POINTS:
        prev = None
        for r in riemann_convergence_study(S, X, w, 1.0, 1.0, a.L):
            ratio = prev / r["error"] if prev and r["error"] > 0 else None
            rows.append([X, w.real if isinstance(w, complex) else w, complex(w).imag, r["L"],
                         r["xi"], r["error"], ratio])
            prev = r["error"]
            print(f"X={X:.5f} omega={complex(w)} L={r['L']:5.0f} error={r['error']:.3e}"
                  + (f" ratio={ratio:.3f}" if ratio else ""))
    config = {"experiment": "kernel_convergence", "L": a.L, "width": a.width,
              "points": [(X, [complex(w).real, complex(w).imag]) for X, w in POINTS]}
    d = ex.write_record(ex.RunRecord("kernel_convergence", config, {"n_rows": len(rows)},
                                     ["convergence.csv"], time.perf_counter() - t0), a.output)
    write_csv(d / "convergence.csv", ["X", "re_omega", "im_omega", "L", "xi", "error", "ratio"], rows)
    print(d)


if __name__ == "__main__":
    main()
