"""Tests for the report tables and the PDF renderer."""

import pytest
import tempfile
import shutil
import sys
from pathlib import Path

# Add parent to path
sys.path.insert(0, str(Path(__file__).parent.parent))

import mpmath

import db
import report


# z: (W_-1(z), transformed, untransformed), to four decimals
EXPECTED_BRANCH_TABLE = {
    '-0.01': (-6.4728, -6.4640, complex(-6.3210, -0.04815)),
    '-0.1': (-3.5772, -3.4988, complex(-3.4124, -0.3223)),
    '-0.2': (-2.5426, -2.3810, complex(-2.5182, -0.5153)),
    '-0.3': (-1.7813, -1.5438, complex(-2.0087, -0.6621)),
    '-1/e': (-1.0, -1.0, complex(-1.7597, -0.7450)),
}


@pytest.fixture(autouse=True)
def temp_settings():
    """Point settings lookups at an empty temporary directory."""
    temp_dir = tempfile.mkdtemp()
    original_get_app_dir = db.get_app_dir
    db.get_app_dir = lambda: Path(temp_dir)
    db.DB_PATH = None

    yield temp_dir

    db.get_app_dir = original_get_app_dir
    db.DB_PATH = None
    shutil.rmtree(temp_dir, ignore_errors=True)


class TestConstants:
    """Test the constants table."""

    def test_names(self):
        names = [row['name'] for row in report.constants_rows()]
        assert names == ['sigma_1', 'x_1', 'sigma_c', 'alpha_c', 'sigma_1_approx', 'alpha_star',
                         'x_star', 'wright_radius', 'inv_W_inv_e', 'omega_0']

    def test_residuals_are_small(self):
        for row in report.constants_rows():
            if row['name'] == 'sigma_1_approx':
                # Distance to the exact sigma_1, not an equation residual
                assert row['residual'] < 2
            else:
                assert row['residual'] < 1e-9, row['name']


class TestBranchTable:
    """Test the W_-1 comparison rows."""

    def test_rows(self):
        rows = report.branch_table_rows()
        assert [r['z'] for r in rows] == list(report.BRANCH_TABLE_POINTS)
        for row in rows:
            oracle, transformed, untransformed = EXPECTED_BRANCH_TABLE[row['z']]
            assert abs(row['oracle'] - oracle) < 1e-4, row['z']
            assert abs(row['transformed'] - transformed) < 1e-4, row['z']
            assert abs(row['untransformed'] - untransformed) < 1e-4, row['z']

    def test_transformed_exact_at_branch_point(self):
        last = report.branch_table_rows()[-1]
        assert abs(last['transformed'] - last['oracle']) < 1e-6


class TestIdentityMatrix:
    """Test the identity suite summary."""

    def test_all_suites_pass(self):
        rows = report.identity_matrix(8)
        assert [r['suite'] for r in rows] == ['carlitz_riordan', 'binomial_transform', 'alternating_sum_2assoc',
                                              'euler_d_2assoc', 'euler_d_2assoc_omega0']
        for row in rows:
            assert row['success'], row['error']
            assert row['passed'] == row['checked'] > 0

    def test_failures_are_counted(self, monkeypatch):
        import combinatorics
        monkeypatch.setattr(combinatorics, 'stirling2_assoc2', lambda n, k: 1)
        rows = {r['suite']: r for r in report.identity_matrix(3)}
        assert not rows['alternating_sum_2assoc']['success']
        assert rows['alternating_sum_2assoc']['passed'] < rows['alternating_sum_2assoc']['checked']
        assert 'm=' in rows['alternating_sum_2assoc']['error']


class TestPdf:
    """Test the PDF renderer."""

    def test_generate(self, temp_settings):
        pytest.importorskip('reportlab')
        path = report.generate_report_pdf(Path(temp_settings) / 'out' / 'report.pdf', max_n=4)
        assert path.exists()
        assert path.read_bytes().startswith(b'%PDF')

    def test_missing_reportlab(self, temp_settings, monkeypatch):
        monkeypatch.setattr(report, 'REPORTLAB_AVAILABLE', False)
        with pytest.raises(ImportError, match="reportlab"):
            report.generate_report_pdf(Path(temp_settings) / 'report.pdf')


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
