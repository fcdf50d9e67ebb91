import json

import pytest

from src.acceptance import CheckResult, VerificationSuite
from src.config_manager import VerifySettings
from src.exceptions import CheckFailedError

QUICK = VerifySettings(coords_points=100, helmholtz_points=8, dims=(2, 5))


@pytest.fixture
def suite():
    return VerificationSuite(QUICK)


def assert_all_pass(results):
    failed = [(r.name, r.details) for r in results if not r.passed]
    assert not failed


def test_coords_suite(suite):
    results = suite.run('coords')
    names = {r.name for r in results}
    assert {'round_trip_hs_N2', 'round_trip_hs_N5', 'round_trip_hc_N3', 'frame_laws_hc_N5'} <= names
    assert 'round_trip_hc_N2' not in names
    assert_all_pass(results)


def test_specfun_suite(suite):
    assert_all_pass(suite.run('specfun'))


def test_legendre_suite(suite):
    results = suite.run('legendre')
    assert len([r for r in results if r.name.startswith('ode_residual[')]) == 27
    assert_all_pass(results)


def test_erratum_controls(suite):
    printed, derived, sine = suite.erratum_controls()
    assert printed.passed and printed.details['relative_residual'] > 0.1
    assert printed.details['beta'] == pytest.approx(0.0, abs=1e-15)
    assert derived.passed and derived.details['relative_residual'] < 1e-6
    assert sine.passed


def test_physics_suite(suite):
    results = suite.run('physics')
    assert len([r for r in results if r.name.startswith('helmholtz[')]) == 4
    assert_all_pass(results)


def test_unknown_suite(suite):
    with pytest.raises(CheckFailedError):
        suite.run('topology')


def test_require_all_names_failures(suite):
    results = [CheckResult('demo', 'good', True), CheckResult('demo', 'bad', False)]
    assert suite.failures(results) == [results[1]]
    with pytest.raises(CheckFailedError, match='demo.bad'):
        suite.require_all(results)
    suite.require_all(results[:1])


def test_results_serialize_to_json(suite):
    results = suite.erratum_controls()
    data = json.loads(json.dumps([r.to_dict() for r in results], default=str))
    assert data[0]['pass'] is True
    assert data[0]['reports'][0]['name'] == 'printed_radical'
