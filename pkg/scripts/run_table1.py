#!/usr/bin/env python3
"""Plane-wave MI bifurcation matrix: max |delta| for j = 1..5, L = N L_c."""

import argparse
import os
import time

from alberlab import experiments as ex
from alberlab.io import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--j", type=int, nargs="+", default=list(ex.TABLE1))
    ap.add_argument("--N", type=float, nargs="+", default=list(ex.TABLE1_N))
    ap.add_argument("--dt", type=float, default=ex.DT)
    ap.add_argument("--dx", type=float, default=ex.DX)
    ap.add_argument("--store-every", type=int, default=25)
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--sensitivity", action="store_true",
                    help="rerun with a denser nested snapshot cadence and with dt, dx halved")
    ap.add_argument("--output", default=os.environ.get("ALBERLAB_OUTPUT_ROOT", "runs"))
    a = ap.parse_args()

    cells = [(j, N) for j in a.j for N in a.N]
    config = {"experiment": "table1", "cells": cells, "dt": a.dt, "dx": a.dx,
              "store_every": a.store_every, "sensitivity": a.sensitivity}
    t0 = time.perf_counter()
    base = ex.run_table1_matrix(cells, a.workers, dt=a.dt, dx=a.dx, store_every=a.store_every)
    extra = {}
    if a.sensitivity:
        # the denser cadence must contain every original snapshot time
        div = next((k for k in range(2, a.store_every + 1) if a.store_every % k == 0), 1)
        extra["cadence"] = ex.run_table1_matrix(cells, a.workers, dt=a.dt, dx=a.dx,
                                                store_every=a.store_every // div)
        extra["refined"] = ex.run_table1_matrix(cells, a.workers, dt=a.dt / 2, dx=a.dx / 2,
                                                store_every=2 * a.store_every)

    header = ["j", "N", "L", "max_delta", "reference_value", "within_tolerance", "mass_drift",
              "runtime_s"] + [f"max_delta_{k}" for k in extra]
    rows = []
    for i, r in enumerate(base):
        rows.append([r.j, r.N, r.L, r.max_delta, r.reference_value, r.within_tolerance(),
                     r.mass_drift, round(r.runtime_s, 2)] + [extra[k][i].max_delta for k in extra])
        print(" ".join(f"{v}" for v in rows[-1]))
    rec = ex.RunRecord("table1", config, {"cells": [r.summary() for r in base]}, ["table1.csv"],
                       time.perf_counter() - t0)
    d = ex.write_record(rec, a.output)
    write_csv(d / "table1.csv", header, rows)
    for j in sorted({j for j, _ in cells}):
        v = {r.N: r.max_delta for r in base if r.j == j}
        if 0.98 in v and 1.3 in v:
            print(f"j={j}: bifurcation factor {v[1.3] / v[0.98]:.1f}")
    print(d)


if __name__ == "__main__":
    main()
