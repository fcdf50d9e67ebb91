import json

import pytest

import cli
from src.coords import HypersphericalPoint
from src.physics import ModeSpec, mode_eval, mode_spec_to_json
from src.specfun import bessel_j


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_legendre(capsys):
    code, out, _ = run(capsys, 'eval', 'legendre', '--nu', '2', '--x', '0.5')
    assert code == 0
    assert out.strip() == '-0.125'


def test_eval_hyper_assoc_midpoint(capsys):
    code, out, _ = run(capsys, 'eval', 'hyper-assoc', '--nu', '1', '--mu', '1.4142135624',
                       '--lambda', '0.5', '--branch', 'plus', '--x', '0')
    assert code == 0
    assert out.strip() == '1'


def test_eval_mode_matches_library(capsys):
    code, out, _ = run(capsys, 'eval', 'mode', '--system', 'hs', '--dim', '4', '--chain', '1,1',
                       '--m', '0', '--k', '1', '--kind', 'J', '--point', '2,1.0,1.2,0.5', '--t', '0')
    assert code == 0
    expected = mode_eval(ModeSpec('hs', 4, 0, (1, 1), 1.0), HypersphericalPoint(4, 2.0, (1.0, 1.2), 0.5))
    assert out.strip() == cli.format_value(expected)
    assert out.strip().endswith('j')


def test_eval_mode_phi_sign(capsys):
    point = HypersphericalPoint(4, 2.0, (1.0, 1.2), 0.5)
    code, out, _ = run(capsys, 'eval', 'mode', '--system', 'hs', '--dim', '4', '--chain', '1,1',
                       '--m', '1', '--k', '1', '--kind', 'J', '--phi-sign', '-', '--point', '2,1.0,1.2,0.5')
    assert code == 0
    expected = mode_eval(ModeSpec('hs', 4, 1, (1, 1), 1.0, phi_sign='-'), point)
    assert out.strip() == cli.format_value(expected)
    assert out.strip() != cli.format_value(mode_eval(ModeSpec('hs', 4, 1, (1, 1), 1.0), point))


def test_eval_mode_from_spec_file(capsys, tmp_path):
    spec = ModeSpec('hc', 4, 1, (1,), 1.0, k_axial=0.5)
    path = tmp_path / 'mode.json'
    path.write_text(mode_spec_to_json(spec))
    code, out, _ = run(capsys, 'eval', 'mode', '--spec', str(path), '--point', '1.5,0.8,2.0,0.3')
    assert code == 0
    assert complex(out.strip()) != 0


def test_eval_mode_requires_kind(capsys):
    with pytest.raises(SystemExit) as excinfo:
        cli.main(['eval', 'mode', '--system', 'hs', '--dim', '4', '--chain', '1,1', '--m', '0',
                  '--k', '1', '--point', '2,1.0,1.2,0.5'])
    assert excinfo.value.code == 2


def test_eval_bessel(capsys):
    code, out, _ = run(capsys, 'eval', 'bessel', '--kind', 'J', '--sigma', '0', '--x', '1')
    assert code == 0
    assert out.strip() == f"{bessel_j(0.0, 1.0):.15g}"
    code, out, _ = run(capsys, 'eval', 'bessel', '--kind', 'J', '--spherical', '--q', '0', '--x', '1')
    assert code == 0
    assert float(out) == pytest.approx(0.8414709848078965)


def test_domain_error_exits_one(capsys):
    code, out, err = run(capsys, 'eval', 'legendre', '--nu', '2', '--x', '2')
    assert code == 1
    assert out == ''
    assert 'Error' in err


def test_usage_errors_exit_two(capsys):
    assert cli.main([]) == 2
    with pytest.raises(SystemExit) as excinfo:
        cli.main(['eval', 'legendre', '--x', '0.5'])
    assert excinfo.value.code == 2


def test_table_fig0(capsys, tmp_path):
    path = tmp_path / 'fig0.csv'
    code, _, _ = run(capsys, 'table', 'fig0', '--q', '1', '--s', '1', '--out', str(path))
    assert code == 0
    raw = path.read_bytes()
    assert b'\r' not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == 'x,value_plus,value_minus'
    rows = [[float(v) for v in line.split(',')] for line in lines[1:]]
    assert len(rows) == 201
    assert rows[100][1] == pytest.approx(1.0, abs=1e-12)
    for i in range(len(rows)):
        assert rows[i][1] == pytest.approx(rows[-1 - i][1], abs=1e-10)
        assert rows[i][1] == pytest.approx(rows[i][2], rel=1e-9)
    assert abs(rows[0][1]) > abs(rows[100][1])


def test_table_to_stdout(capsys):
    code, out, _ = run(capsys, 'table', 'hyper-assoc', '--nu', '2', '--mu', '2.449489742783178',
                       '--lambda', '1', '--start', '0.5', '--stop', '2.5', '--count', '5')
    assert code == 0
    assert len(out.strip().split('\n')) == 6


def test_table_rejects_bad_request(capsys):
    code, _, _ = run(capsys, 'table', 'fig0', '--q', '1', '--s', '1', '--count', '1')
    assert code == 1
    code, _, _ = run(capsys, 'table', 'fig0', '--q', '1', '--s', '1', '--start', '0')
    assert code == 1


def test_verify_specfun_json(capsys):
    code, out, _ = run(capsys, 'verify', 'specfun', '--json')
    assert code == 0
    report = json.loads(out)
    assert report['pass'] is True
    assert report['suite'] == 'specfun'
    assert all(check['pass'] for check in report['checks'])


def test_verify_coords_dims_and_out(capsys, tmp_path):
    path = tmp_path / 'report.json'
    code, out, _ = run(capsys, 'verify', 'coords', '--dims', '2..3', '--seed', '5', '--out', str(path))
    assert code == 0
    report = json.loads(path.read_text())
    assert report['settings']['seed'] == 5
    names = [check['name'] for check in report['checks']]
    assert 'round_trip_hs_N3' in names and 'round_trip_hs_N4' not in names
    assert 'PASS coords.round_trip_hs_N2' in out


def test_verify_erratum_check(capsys):
    code, out, _ = run(capsys, 'verify', 'coords', '--dims', '2..2', '--erratum-check')
    assert code == 0
    assert 'FAIL (expected)' in out
    assert 'erratum_derived_radical_passes' in out
