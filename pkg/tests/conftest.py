import csv
import pathlib

import pytest
from mpmath import mp

from helmstab import far2near as f2n
from helmstab.experiments import default_report

DATA = pathlib.Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def oracle_grid():
    """Frozen 50-digit oracle for J/Y on the acceptance grid."""
    rows = []
    with open(DATA / "bessel_oracle_grid.csv") as fh:
        for row in csv.DictReader(fh):
            rows.append(
                {
                    "nu": float(row["nu"]),
                    "z": float(row["z"]),
                    "j": float(row["j"]),
                    "y": float(row["y"]),
                    "log_abs_j": float(row["log_abs_j"]),
                    "log_abs_y": float(row["log_abs_y"]),
                }
            )
    return rows


@pytest.fixture(scope="session")
def report():
    return default_report()


@pytest.fixture(scope="session")
def envelope(report):
    return report.envelope()


@pytest.fixture(scope="session")
def narrow_constants(envelope):
    """Stability constants on the thin annulus used for bounded/high trials."""
    geometry = f2n.AnnulusGeometry(r0=1.0, b0=1.5, b1=2.0)
    return f2n.derive_constants(envelope, geometry)


@pytest.fixture(scope="session")
def wide_constants(envelope):
    """Constants on the wide annulus required by the extreme regime."""
    geometry = f2n.AnnulusGeometry(r0=1.0, b0=8.5, b1=9.5)
    return f2n.derive_constants(envelope, geometry)


@pytest.fixture()
def mp50():
    old = mp.dps
    mp.dps = 50
    yield mp
    mp.dps = old
