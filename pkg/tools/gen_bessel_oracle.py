#!/usr/bin/env python3
"""Generate the frozen arbitrary-precision Bessel oracle tables used by tests.

Writes tests/data/bessel_oracle_grid.csv with 50-digit mpmath values of
J_nu(z) and Y_nu(z) on the acceptance grid

    nu in {0, 0.5, ..., 50},   z in {0.1 * 1.2**n : z <= 200}.

Values are stored as (sign, log10(|value|)) pairs plus the double rounding,
so the table stays exact even where a double would under/overflow.  Rerun
this script only to regenerate the table; tests read the CSV.
"""

import csv
import pathlib

from mpmath import mp

mp.dps = 50

OUT = pathlib.Path(__file__).resolve().parents[1] / "tests" / "data" / "bessel_oracle_grid.csv"


def z_grid():
    # Grid points are double-precision values (the exact inputs the tests
    # feed the implementation); the oracle is evaluated at exactly these.
    z = 0.1
    while z <= 200.0:
        yield z
        z = z * 1.2


def main():
    rows = []
    nus = [i / 2.0 for i in range(0, 101)]
    zs = list(z_grid())
    for nu in nus:
        for z in zs:
            zm = mp.mpf(z)
            j = mp.besselj(mp.mpf(nu), zm)
            y = mp.bessely(mp.mpf(nu), zm)
            rows.append(
                (
                    repr(nu),
                    repr(z),
                    repr(float(j)),
                    repr(float(y)),
                    mp.nstr(mp.log(abs(j)), 22),
                    mp.nstr(mp.log(abs(y)), 22),
                )
            )
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["nu", "z", "j", "y", "log_abs_j", "log_abs_y"])
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {OUT}")


if __name__ == "__main__":
    main()
