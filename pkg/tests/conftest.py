import numpy as np
import pytest

from ghostbench import (ScanWindow, default_bench, make_grid, run_coincidence_scan)

WAVELENGTH = 702.2e-9


@pytest.fixture(scope="session")
def grid():
    return make_grid()


@pytest.fixture(scope="session")
def scan_window():
    return ScanWindow(-4e-3, 4e-3, 161)


@pytest.fixture(scope="session")
def scan_m1(grid, scan_window):
    """Default Measurement-1 scan (slit B = 0.16 mm)."""
    return run_coincidence_scan(default_bench(slit_b_width_m=0.16e-3), scan_window, grid)


@pytest.fixture(scope="session")
def scan_m2(grid, scan_window):
    """Default Measurement-2 scan (slit B open)."""
    return run_coincidence_scan(default_bench(slit_b_width_m=None), scan_window, grid)


def gaussian_field(grid, waist_m, wavelength_m=WAVELENGTH, center_m=0.0):
    from ghostbench import Field1D
    amps = np.exp(-((grid.positions - center_m) / waist_m) ** 2).astype(complex)
    return Field1D(grid, amps, wavelength_m)
