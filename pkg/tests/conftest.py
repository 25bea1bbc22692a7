import math
import os
from pathlib import Path

import pytest

from pntap.zeros import load_zero_table

DATA_DIR = Path(__file__).parent / "data"
ZEROS_FILE = DATA_DIR / "zeta_zeros.txt"
ZEROS_SMALL_FILE = DATA_DIR / "zeta_zeros_first100.txt"

# first 30 ordinates to 9 decimals, standard published values; these pin the
# bundled data file to the literature
KNOWN_FIRST_ZEROS = [
    14.134725142, 21.022039639, 25.010857580, 30.424876126, 32.935061588,
    37.586178159, 40.918719012, 43.327073281, 48.005150881, 49.773832478,
    52.970321478, 56.446247697, 59.347044003, 60.831778525, 65.112544048,
    67.079810529, 69.546401711, 72.067157674, 75.704690699, 77.144840069,
    79.337375020, 82.910380854, 84.735492981, 87.425274613, 88.809111208,
    92.491899271, 94.651344041, 95.870634228, 98.831194218, 101.317851006,
]


@pytest.fixture(scope="session")
def zeta_table():
    if not ZEROS_FILE.exists():
        pytest.skip(f"zero table {ZEROS_FILE} not generated")
    return load_zero_table(ZEROS_FILE, kind="zeta")


@pytest.fixture(scope="session")
def zeta_table_small():
    if not ZEROS_SMALL_FILE.exists():
        pytest.skip(f"fixture {ZEROS_SMALL_FILE} missing")
    return load_zero_table(ZEROS_SMALL_FILE, kind="zeta")
