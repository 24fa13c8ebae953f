import json
import os

import pandas as pd
import pytest

from pshopt.cli.main import EXIT_BUDGET, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_OK, exit_code, main
from pshopt.errors import Infeasible, MissingField, NumericalFailure, TimeBudgetExceeded

from conftest import DATA, document


def _write(tmp_path, doc, name='instance.json'):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def _toy(tmp_path, **overrides):
    doc = document(horizon=2, prices=[100.0, 200.0], j_max=2,
                   grids={'reservoir': [0, 100, 200, 300, 400, 450, 500, 600, 700, 800, 900],
                          'ramp': [0, 40, 50, 90, 100, 130]})
    doc.update(overrides)
    return _write(tmp_path, doc)


def test_exit_codes():
    assert exit_code(Infeasible()) == EXIT_INFEASIBLE
    assert exit_code(TimeBudgetExceeded(1.0)) == EXIT_BUDGET
    assert exit_code(MissingField('horizon')) == EXIT_INPUT
    assert exit_code(NumericalFailure('singular basis')) == 1


def test_validate(capsys):
    assert main(['validate', '--instance', os.path.join(DATA, 'baseline.json')]) == EXIT_OK
    out = capsys.readouterr().out
    assert 'T=24' in out
    assert 'modes GPO' in out


def test_validate_reports_violations(tmp_path, capsys):
    path = _write(tmp_path, document(min_up=0, ramp_limit=-1))
    assert main(['validate', '-i', path]) == EXIT_INPUT
    assert capsys.readouterr().out.count('invalid:') >= 2


def test_missing_field(tmp_path, capsys):
    doc = document()
    del doc['horizon']
    assert main(['validate', '-i', _write(tmp_path, doc)]) == EXIT_INPUT
    assert 'horizon' in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(['solve', '-i', str(tmp_path / 'nowhere.json'), '--no-cache']) == EXIT_INPUT


def test_solve_writes_schedule(tmp_path, capsys):
    out = tmp_path / 'out'
    code = main(['solve', '-i', _toy(tmp_path), '--method', 'bnb', '--out', str(out), '--no-cache', '--plot'])
    assert code == EXIT_OK
    assert 'objective -25000.000000' in capsys.readouterr().out
    frame = pd.read_csv(out / 'bnb_schedule.csv')
    assert list(frame['mode']) == ['G', 'G']


@pytest.mark.parametrize('method', ['milp', 'dp', 'gridlp', 'bnb_grid', 'oracle'])
def test_solve_methods(tmp_path, capsys, method):
    assert main(['solve', '-i', _toy(tmp_path), '-m', method, '--no-cache']) == EXIT_OK
    assert 'net profit 25000.00' in capsys.readouterr().out


def test_solve_infeasible(tmp_path):
    path = _toy(tmp_path, reservoir={'capacity': 900, 'initial': 450, 'terminal': 900})
    assert main(['solve', '-i', path, '-m', 'milp', '--no-cache']) == EXIT_INFEASIBLE


def test_solve_jmax_override_rejected(tmp_path):
    assert main(['solve', '-i', _toy(tmp_path), '--jmax', '0', '--no-cache']) == EXIT_INPUT


def test_bnb_log(tmp_path):
    log = tmp_path / 'trace.csv'
    assert main(['solve', '-i', _toy(tmp_path), '--bnb-log', str(log), '--no-cache']) == EXIT_OK
    assert pd.read_csv(log)['status'].iloc[0] == 'root'


def test_dump_lp(tmp_path):
    dump = tmp_path / 'model.lp'
    assert main(['solve', '-i', _toy(tmp_path), '-m', 'milp', '--dump-lp', str(dump), '--no-cache']) == EXIT_OK
    assert dump.read_text().startswith('\\')


def test_oracle_command(tmp_path, capsys):
    assert main(['oracle', '-i', _toy(tmp_path)]) == EXIT_OK
    assert 'oracle (9 sequences)' in capsys.readouterr().out


def test_oracle_limits(tmp_path):
    assert main(['oracle', '-i', _toy(tmp_path), '--max-horizon', '1']) == EXIT_INPUT


def test_experiment_command(tmp_path, capsys):
    instance = _toy(tmp_path)
    spec = _write(tmp_path, {'kind': 'exactness', 'instance': instance, 'methods': ['dp', 'bnb']}, 'spec.json')
    assert main(['experiment', '--spec', spec, '--out', str(tmp_path / 'res'), '--no-cache']) == EXIT_OK
    assert capsys.readouterr().out.strip() == str(tmp_path / 'res' / 'exactness.csv')
