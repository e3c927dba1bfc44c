import time

import numpy as np
import pytest

from core.errors import InputError
from core.type_system import Region
from dynamics.scanner import (
    CellKind,
    ScanGrid,
    ScanOptions,
    classify_parameter,
    extract_centers,
    scan_grid,
    write_pgm,
)

HEADER = b"P5\n"


def filled_grid(nx, ny, kind, period=0):
    shape = (ny, nx)
    return ScanGrid(
        region=Region(center=0.5 + 0j, width=1.0, height=1.0),
        nx=nx,
        ny=ny,
        kind=np.full(shape, int(kind), dtype=np.int8),
        period=np.full(shape, period, dtype=np.int32),
        limit=np.zeros(shape, dtype=np.complex128),
        multiplier=np.zeros(shape),
        escape_step=np.zeros(shape, dtype=np.int32),
    )


class TestClassifyParameter:
    def test_punctured_disk(self):
        cell = classify_parameter(0.5)
        assert cell.kind == CellKind.ATTRACTING
        assert cell.period == 1
        assert abs(cell.limit) < 1e-12

    def test_super_attracting_fixed_point(self):
        cell = classify_parameter(np.pi / 2)
        assert cell.kind == CellKind.ATTRACTING
        assert cell.period == 1
        assert cell.limit == pytest.approx(np.pi / 2)
        assert cell.multiplier < 1e-12

    def test_period_two_center(self, period2_root):
        cell = classify_parameter(period2_root)
        assert cell.kind == CellKind.ATTRACTING
        assert cell.period == 2

    def test_escape(self):
        cell = classify_parameter(1 + 5j)
        assert cell.kind == CellKind.ESCAPED
        assert cell.escape_step == 1

    def test_zero_is_excluded(self):
        assert classify_parameter(0).kind == CellKind.UNRESOLVED

    def test_deterministic(self):
        opts = ScanOptions(max_iter=500, period_cap=8)
        assert classify_parameter(2.0 + 0.05j, opts) == classify_parameter(2.0 + 0.05j, opts)

    @pytest.mark.parametrize("lam", [0.5, np.pi / 2, 2.4434, 0.8 + 0.3j, 1 + 5j])
    def test_mirror_orbit_gives_same_class(self, lam):
        direct = classify_parameter(lam)
        mirrored = classify_parameter(lam, mirror=True)
        assert direct.kind == mirrored.kind
        assert direct.period == mirrored.period
        if direct.limit is not None:
            assert mirrored.limit == pytest.approx(-direct.limit, abs=1e-9)

    def test_rejects_bad_options(self):
        with pytest.raises(InputError):
            classify_parameter(1.0, ScanOptions(period_cap=0))


class TestScanGrid:
    def test_small_grid_near_fixed_center(self):
        region = Region(center=1.6 + 0j, width=0.2, height=0.2)
        grid = scan_grid(region, (3, 3))
        assert grid.kind.shape == (3, 3)
        assert np.all(grid.kind == int(CellKind.ATTRACTING))
        assert np.all(grid.period == 1)
        for j in range(3):
            for i in range(3):
                cell = grid.cell(i, j)
                single = classify_parameter(grid.cell_center(i, j))
                assert cell.kind == single.kind
                assert cell.period == single.period
                assert cell.limit == single.limit
                # numpy's vector loops may round |lambda*cos z| differently for a band and a single cell
                assert cell.multiplier == pytest.approx(single.multiplier, rel=1e-12)

    def test_single_cell(self):
        grid = scan_grid(Region(center=0.5 + 0j, width=0.1, height=0.1), (1, 1))
        assert grid.cell(0, 0).kind == CellKind.ATTRACTING
        assert grid.cell(0, 0).period == 1

    def test_cell_containing_zero_is_unresolved(self):
        grid = scan_grid(Region(center=0j, width=2.0, height=2.0), (2, 2))
        assert grid.cell_of(0j) == (1, 1)
        assert grid.cell(1, 1).kind == CellKind.UNRESOLVED
        for i, j in [(0, 0), (1, 0), (0, 1)]:
            assert grid.cell(i, j).kind == CellKind.ATTRACTING

    def test_row_zero_is_the_top_row(self):
        grid = scan_grid(Region(center=0j, width=2.0, height=2.0), (2, 2))
        assert grid.cell_center(0, 0) == pytest.approx(-0.5 + 0.5j)
        assert grid.cell_center(1, 1) == pytest.approx(0.5 - 0.5j)

    def test_bands_do_not_change_the_result(self, monkeypatch):
        from core.config import config

        region = Region(center=2.0 + 0j, width=1.0, height=0.4)
        opts = ScanOptions(max_iter=300, period_cap=4)
        monkeypatch.setattr(config, "BAND_ROWS", 1)
        a = scan_grid(region, (12, 5), opts)
        monkeypatch.setattr(config, "BAND_ROWS", 16)
        b = scan_grid(region, (12, 5), opts)
        assert np.array_equal(a.kind, b.kind)
        assert np.array_equal(a.period, b.period)


class TestExtractCenters:
    @pytest.mark.slow
    def test_reference_window(self, period2_root):
        opts = ScanOptions(period_cap=4)
        started = time.perf_counter()
        grid = scan_grid(Region(center=2.0 + 0j, width=2.0, height=0.4), (256, 64), opts)
        found = extract_centers(grid, opts)
        assert time.perf_counter() - started < 30
        centers = [c for c in found if c.converged]
        by_period = {}
        for c in centers:
            by_period.setdefault(c.period, []).append(c.lambda_star)
        assert any(abs(z - np.pi / 2) < 1e-6 for z in by_period[1])
        assert any(abs(z - period2_root) < 1e-6 for z in by_period[2])
        for c in centers:
            assert c.certificate.clause("a").passed
            assert c.certificate.clause("b").passed
            assert c.certificate.clause("d").passed

    def test_centers_are_distinct(self):
        opts = ScanOptions(period_cap=4, max_iter=1000)
        grid = scan_grid(Region(center=2.0 + 0j, width=2.0, height=0.4), (64, 16), opts)
        found = [c.lambda_star for c in extract_centers(grid, opts) if c.converged]
        for a in range(len(found)):
            for b in range(a + 1, len(found)):
                assert abs(found[a] - found[b]) >= 1e-6

    def test_punctured_disk_is_reported_unrefined(self):
        opts = ScanOptions(period_cap=4, max_iter=1000)
        grid = scan_grid(Region(center=0j, width=1.0, height=1.0), (8, 8), opts)
        centers = extract_centers(grid, opts)
        assert centers
        disk = [c for c in centers if c.period == 1]
        assert disk and not any(c.converged for c in disk)

    def test_empty_grid(self):
        grid = filled_grid(1, 1, CellKind.UNRESOLVED)
        assert extract_centers(grid) == []
        empty = ScanGrid(region=Region(0j, 1.0, 1.0), nx=0, ny=0, kind=np.zeros((0, 0), dtype=np.int8),
                         period=np.zeros((0, 0), dtype=np.int32), limit=np.zeros((0, 0), dtype=complex),
                         multiplier=np.zeros((0, 0)), escape_step=np.zeros((0, 0), dtype=np.int32))
        assert extract_centers(empty) == []


class TestWritePgm:
    def test_all_escaped(self, tmp_path):
        path = tmp_path / "esc.pgm"
        write_pgm(filled_grid(2, 2, CellKind.ESCAPED), str(path))
        assert path.read_bytes() == HEADER + b"2 2\n255\n" + b"\xff\xff\xff\xff"

    def test_unresolved(self, tmp_path):
        path = tmp_path / "unres.pgm"
        write_pgm(filled_grid(1, 1, CellKind.UNRESOLVED), str(path))
        assert path.read_bytes() == HEADER + b"1 1\n255\n" + b"\x00"

    def test_period_one(self, tmp_path):
        path = tmp_path / "p1.pgm"
        write_pgm(filled_grid(1, 1, CellKind.ATTRACTING, period=1), str(path))
        assert path.read_bytes() == HEADER + b"1 1\n255\n" + bytes([32])

    def test_shades_wrap_every_thirteen_periods(self, tmp_path):
        grid = filled_grid(3, 1, CellKind.ATTRACTING)
        grid.period[0, :] = [2, 13, 14]
        path = tmp_path / "wrap.pgm"
        write_pgm(grid, str(path))
        assert path.read_bytes()[-3:] == bytes([48, 32 + 16 * 12, 32])

    def test_row_major_top_to_bottom(self, tmp_path):
        grid = filled_grid(2, 2, CellKind.UNRESOLVED)
        grid.kind[0, 1] = int(CellKind.ESCAPED)
        path = tmp_path / "order.pgm"
        write_pgm(grid, str(path))
        assert path.read_bytes()[-4:] == b"\x00\xff\x00\x00"
