# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import json

import numpy as np
import pandas as pd
import pytest

from nlwaves import NoRoot
from nlwaves.cli import main, load_scenario, parse_scenario, list_scenarios, verify_manifest, run_criterion, \
                        ConfigError
from nlwaves.cli.acceptance import CRITERIA, run_acceptance
from nlwaves.cli.config import OUTPUT_ROOT_ENV


EXP1 = [{'family': 'two_sided_exponential', 'parameters': {'rate': 1.}, 'coefficient': 1.}]


def write_config(path, record):
    path.write_text(json.dumps(record))
    return str(path)


# Configs
# =======

def test_list_scenarios():
    names = list_scenarios()
    for name in ['exp2-wavetrain', 'weighted-front-index', 'exp-roots', 'kawahara', 'exp2-manifold']:
        assert name in names
    for name in names:
        assert load_scenario(name).name == name


def test_malformed_json(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"name": "broken",\n "task": }')
    with pytest.raises(ConfigError, match="line 2, column"):
        load_scenario(str(path))
    assert main(['run', str(path)]) == 2


def test_config_field_errors():
    with pytest.raises(ConfigError, match="unknown task 'fly'"):
        parse_scenario({'name': 'x', 'task': 'fly'})
    with pytest.raises(ConfigError, match="name: required"):
        parse_scenario({'task': 'roots'})
    with pytest.raises(ConfigError, match="kernel: Unknown kernel family"):
        parse_scenario({'name': 'x', 'task': 'roots', 'kernel': [{'family': 'box'}]})
    with pytest.raises(ConfigError, match="A: expected a 1×1 matrix"):
        parse_scenario({'name': 'x', 'task': 'roots', 'kernel': EXP1, 'A': [[1., 0.], [0., 1.]]})
    with pytest.raises(ConfigError, match="operator.profile"):
        parse_scenario({'name': 'x', 'task': 'weyl', 'kernel': EXP1,
                        'operator': {'type': 'principal_profile', 'profile': 'sawtooth'}})
    with pytest.raises(ConfigError, match="No config file"):
        load_scenario('no-such-scenario')


def test_parameter_validation(tmp_path):
    config = write_config(tmp_path / 'steps.json', {'name': 'steps', 'task': 'wavetrain', 'A': 2., 'kernel': EXP1,
                                                    'nonlinearity': {'form': 'quadratic'},
                                                    'parameters': {'steps': 0}})
    assert main(['run', config, '--output', str(tmp_path / 'out')]) == 2


def test_output_root(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_ROOT_ENV, str(tmp_path))
    sc = load_scenario('exp-roots')
    assert sc.output_dir() == tmp_path / 'exp-roots'
    assert sc.output_dir(tmp_path / 'other') == tmp_path / 'other'


# Runs
# ====

def test_run_roots(tmp_path):
    assert main(['run', 'exp-roots', '--output', str(tmp_path)]) == 0
    roots = pd.read_csv(tmp_path / 'roots.csv')
    assert len(roots) == 2
    assert np.allclose(sorted(roots['im']), [-1., 1.], atol=1e-10)
    assert verify_manifest(tmp_path) == []


def test_run_wavetrain_deterministic(tmp_path):
    first, second = tmp_path / 'first', tmp_path / 'second'
    assert main(['run', 'exp2-wavetrain', '--output', str(first)]) == 0
    assert main(['run', 'exp2-wavetrain', '--output', str(second)]) == 0
    branch = pd.read_csv(first / 'branch.csv')
    assert branch['a'].iloc[0] == 0
    assert abs(branch['omega'].iloc[0] - 1.) < 1e-8
    assert len(branch) == 11
    for name in ['branch.csv', 'uniqueness.csv']:
        assert (first / name).read_bytes() == (second / name).read_bytes()
    manifest = json.loads((first / 'manifest.json').read_text(encoding='utf-8'))
    assert set(manifest['files']) == {'branch.csv', 'branch_coefficients.json', 'plot_branch.py',
                                      'uniqueness.csv'}
    assert manifest['scenario']['name'] == 'exp2-wavetrain'
    assert verify_manifest(first) == []
    (first / 'branch.csv').write_text('tampered\n')
    assert verify_manifest(first) == ['branch.csv']


def test_weighted_front_index(tmp_path, capsys):
    assert main(['run', 'weighted-front-index', '--output', str(tmp_path)]) == 0
    printed = capsys.readouterr().out
    assert "spectral_flow_index: +1" in printed
    assert "grid_index: +1" in printed
    assert "agree: True" in printed
    trajectories = pd.read_csv(tmp_path / 'trajectories.csv')
    assert list(trajectories.columns) == ['crossing', 'root', 'rho', 're_nu', 'im_nu']
    assert len(trajectories) > 1
    assert verify_manifest(tmp_path) == []


def test_front_index_without_gap_fails(tmp_path, capsys):
    config = write_config(tmp_path / 'short.json', {'name': 'short', 'task': 'index', 'kernel': EXP1,
                                                     'operator': {'type': 'front', 'a_minus': 0.5, 'a_plus': 2.},
                                                     'parameters': {'eta': 0.3, 'strip_half_width': 0.6,
                                                                    'L': 40., 'N': 800}})
    assert main(['run', config, '--output', str(tmp_path / 'out')]) == 1
    assert "NoSpectralGap" in capsys.readouterr().out


def test_task_error_exit(tmp_path, capsys):
    config = write_config(tmp_path / 'none.json', {'name': 'none', 'task': 'manifold', 'A': 0.5, 'kernel': EXP1,
                                                   'nonlinearity': {'form': 'quadratic'},
                                                   'parameters': {'periods': 8, 'N': 1024}})
    assert main(['run', config, '--output', str(tmp_path / 'out')]) == 1
    assert "NoRoot" in capsys.readouterr().out


# Acceptance
# ==========

def test_acceptance_single(tmp_path):
    assert main(['acceptance', 'kawahara', '--output', str(tmp_path)]) == 0
    report = json.loads((tmp_path / 'acceptance_report.json').read_text(encoding='utf-8'))
    assert report['passed']
    assert [cc['name'] for cc in report['criteria']] == ['kawahara']
    criterion = report['criteria'][0]
    assert criterion['measured']['error'] < criterion['tolerances']['error']
    assert json.loads(json.dumps(report)) == report
    assert list(pd.read_csv(tmp_path / 'acceptance.csv')['name']) == ['kawahara']


def test_acceptance_unknown_criterion():
    assert main(['acceptance', 'nonsense']) == 2
    with pytest.raises(KeyError, match="Unknown acceptance criterion"):
        run_criterion('nonsense')


def test_acceptance_records_failures(monkeypatch):
    def broken():
        raise NoRoot("No root of d on i·[0.01, 5].")

    monkeypatch.setitem(CRITERIA, 'broken', broken)
    result = run_criterion('broken')
    assert not result.passed
    assert result.error.startswith("NoRoot: No root")
    report = run_acceptance(['kawahara', 'broken'])
    assert not report['passed']
    assert [cc['passed'] for cc in report['criteria']] == [True, False]


def test_acceptance_scenario(tmp_path):
    assert main(['run', 'acceptance-quick', '--output', str(tmp_path)]) == 0
    report = json.loads((tmp_path / 'acceptance_report.json').read_text(encoding='utf-8'))
    assert [cc['name'] for cc in report['criteria']] == ['characteristic-roots', 'kawahara', 'path-algebra']
    assert all(cc['passed'] for cc in report['criteria'])
