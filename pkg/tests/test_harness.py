import json

import numpy as np
import pytest

from pshopt.errors import Infeasible, LimitsExceeded, MalformedDocument, MissingField
from pshopt.events import SharedArcCosts
from pshopt.harness import (ExperimentSpec, MethodResult, OracleLimits, admissible, brute_force_oracle,
                            experiment_from_dict, fuzz_agreement, gap_percent, mode_sequences, read_table,
                            run_experiment, run_method, scale_volatility, terminal_plot)
from pshopt.instance import random_instance
from pshopt.modes import Mode
from pshopt.settings import Settings

from conftest import document, toy_instance, zero_price_instance

SETTINGS = Settings(use_cache=False)

G, P, O = Mode.G, Mode.P, Mode.O


def test_oracle_toy(toy):
    result = brute_force_oracle(toy)
    assert result.value == pytest.approx(-25000)
    assert result.schedule.modes == (G, G)
    assert result.schedule.levels == pytest.approx([450, 400, 300])
    assert result.sequences == 9


def test_oracle_zero_prices():
    assert brute_force_oracle(zero_price_instance()).value == pytest.approx(0.0, abs=1e-9)


def test_oracle_limits():
    with pytest.raises(LimitsExceeded):
        brute_force_oracle(toy_instance().with_horizon(30))
    with pytest.raises(LimitsExceeded):
        brute_force_oracle(zero_price_instance(6), OracleLimits(seq_max=10))


def test_oracle_infeasible():
    inst = toy_instance(reservoir={'capacity': 900, 'initial': 450, 'terminal': 900})
    with pytest.raises(Infeasible):
        brute_force_oracle(inst)


def test_oracle_prefix(toy):
    result = brute_force_oracle(toy, prefix=(P,))
    assert result.schedule.modes[0] is P
    assert result.value > -25000


def test_admissible():
    inst = zero_price_instance()
    assert admissible(inst, (O, G, G, O))
    assert admissible(inst, (G, P, P, P))
    assert not admissible(inst, (G, O, G, G))
    assert not admissible(inst, (O, O, G, O))
    # min-up clipped at the horizon end
    assert admissible(inst, (O, O, O, G))


def test_initial_counter_sequences():
    inst = toy_instance(horizon=4, prices=[0.0] * 4, initial_counter=2)
    sequences = list(mode_sequences(inst))
    assert sequences
    assert all(m[0] is O and m[1] is O for m in sequences)


def test_run_method_ok(toy):
    result = run_method('bnb', toy, SETTINGS)
    assert result.ok
    assert result.audited == pytest.approx(-25000)
    assert result.seconds >= 0
    row = result.row()
    assert row['method'] == 'B&B-continuous'
    assert row['modes'] == 'GG'
    assert row['switches'] == 0


def test_run_method_statuses(toy):
    infeasible = toy_instance(reservoir={'capacity': 900, 'initial': 450, 'terminal': 900})
    assert run_method('dp', infeasible, SETTINGS).status == 'infeasible'
    assert run_method('gridlp', infeasible, SETTINGS).status == 'infeasible'
    assert run_method('oracle', toy.with_horizon(30), SETTINGS).status == 'limits'
    assert run_method('bnb', toy, Settings(use_cache=False, time_budget=0.0)).status == 'budget'
    with pytest.raises(ValueError):
        run_method('simulated_annealing', toy, SETTINGS)


@pytest.mark.parametrize('method', ['milp', 'dp', 'gridlp', 'bnb_grid', 'oracle'])
def test_methods_agree_on_toy(toy, method):
    result = run_method(method, toy, SETTINGS)
    assert result.status == 'ok'
    assert result.audited == pytest.approx(-25000)


@pytest.mark.parametrize('seed', range(3))
def test_continuous_methods_agree(seed):
    inst = random_instance(seed, horizon=3)
    results = [run_method(m, inst, SETTINGS) for m in ('oracle', 'milp', 'bnb', 'dp', 'gridlp')]
    checks = fuzz_agreement(results)
    assert checks.get('continuous_equal') is not False
    assert checks.get('grid_equal') is not False
    assert checks.get('grid_restriction') is not False


@pytest.mark.slow
@pytest.mark.parametrize('hsc', [False, True])
@pytest.mark.parametrize('seed', range(50))
def test_continuous_methods_agree_sweep(seed, hsc):
    inst = random_instance(seed, horizon=4 + seed % 3, j_max=1 + seed % 3, hsc=hsc)
    results = [run_method(m, inst, SETTINGS) for m in ('oracle', 'milp', 'bnb', 'dp', 'gridlp')]
    oracle, milp, bnb = results[:3]
    assert oracle.status in ('ok', 'infeasible')
    assert milp.status == bnb.status == oracle.status
    checks = fuzz_agreement(results)
    assert checks.get('continuous_equal') is not False
    assert checks.get('grid_equal') is not False
    assert checks.get('grid_restriction') is not False


@pytest.mark.slow
@pytest.mark.parametrize('name', ['baseline', 'hsc_baseline'])
def test_full_instance_exactness(name, request):
    inst = request.getfixturevalue(name)
    with SharedArcCosts():
        results = {m: run_method(m, inst, SETTINGS) for m in ('dp', 'gridlp', 'bnb_grid', 'bnb', 'milp')}
    assert {m: r.status for m, r in results.items()} == dict.fromkeys(results, 'ok')
    grid = results['dp'].audited
    assert results['gridlp'].audited == pytest.approx(grid, rel=1e-6)
    assert results['bnb_grid'].audited == pytest.approx(grid, rel=1e-6)
    assert results['bnb'].audited == pytest.approx(results['milp'].audited, rel=1e-6)
    assert results['milp'].audited <= grid + 1e-6 * abs(grid)


@pytest.mark.parametrize('method', ['dp', 'gridlp', 'bnb_grid'])
def test_worker_count_does_not_change_results(method):
    inst = random_instance(3, horizon=4)
    serial = run_method(method, inst, Settings(use_cache=False, threads=1))
    pooled = run_method(method, inst, Settings(use_cache=False, threads=8))
    assert pooled.status == serial.status
    if serial.ok:
        assert pooled.objective == serial.objective
        assert pooled.schedule.modes == serial.schedule.modes
        assert np.array_equal(pooled.schedule.levels, serial.schedule.levels)


def test_fuzz_agreement():
    def ok(method, value):
        return MethodResult(method, 'ok', value, audited=value)

    checks = fuzz_agreement([ok('oracle', -10.0), ok('milp', -10.0), ok('bnb', -10.0),
                             ok('dp', -8.0), ok('gridlp', -8.0)])
    assert checks == {'continuous_equal': True, 'grid_equal': True, 'grid_restriction': True}
    checks = fuzz_agreement([ok('oracle', -10.0), ok('milp', -9.0), ok('gridlp', -11.0)])
    assert checks == {'continuous_equal': False, 'grid_restriction': False}
    assert fuzz_agreement([MethodResult('oracle', 'limits')]) == {}


def test_scale_volatility():
    prices = [10.0, 20.0, 30.0]
    assert scale_volatility(prices, 1.0) == pytest.approx(prices)
    assert scale_volatility(prices, 2.0) == pytest.approx([0.0, 20.0, 40.0])
    assert np.mean(scale_volatility(prices, 0.5)) == pytest.approx(20.0)


def test_gap_percent():
    assert gap_percent(-90.0, -100.0) == pytest.approx(10.0)
    assert gap_percent(None, -100.0) is None
    assert gap_percent(0.5, 0.0) == pytest.approx(50.0)


def test_experiment_spec_validation():
    with pytest.raises(MalformedDocument):
        ExperimentSpec('speedup', instance='x.json')
    with pytest.raises(MalformedDocument):
        ExperimentSpec('exactness', instance='x.json', methods=['cplex'])
    with pytest.raises(MalformedDocument):
        ExperimentSpec('volatility', instance='x.json', ladder=[1.0, -1.0])
    with pytest.raises(MissingField):
        ExperimentSpec('exactness')
    assert ExperimentSpec('oracle_fuzz').selected_methods[0] == 'oracle'
    assert ExperimentSpec('jmax_sweep', instance='x.json').rungs == (1, 2, 3, 4, 6)


def test_experiment_from_dict(tmp_path):
    spec = experiment_from_dict({'kind': 'hsc', 'instance': 'hsc.json', 'out': 'out'}, str(tmp_path))
    assert spec.instance == str(tmp_path / 'hsc.json')
    assert spec.out == str(tmp_path / 'out')
    with pytest.raises(MissingField):
        experiment_from_dict({'instance': 'hsc.json'})
    with pytest.raises(MalformedDocument):
        experiment_from_dict({'kind': 'hsc', 'instance': 'hsc.json', 'seeds': 3})
    with pytest.raises(MalformedDocument):
        experiment_from_dict(['hsc'])


def _toy_file(tmp_path):
    path = tmp_path / 'toy.json'
    doc = document(horizon=2, prices=[100.0, 200.0], j_max=2,
                   grids={'reservoir': [0, 100, 200, 300, 400, 450, 500, 600, 700, 800, 900],
                          'ramp': [0, 40, 50, 90, 100, 130]})
    path.write_text(json.dumps(doc))
    return str(path)


def test_exactness_experiment(tmp_path):
    spec = ExperimentSpec('exactness', instance=_toy_file(tmp_path), out=str(tmp_path / 'results'),
                          methods=('dp', 'gridlp', 'bnb_grid', 'bnb', 'milp'))
    paths = run_experiment(spec, SETTINGS)
    assert paths == [str(tmp_path / 'results' / 'exactness.csv')]
    frame = read_table(paths[0])
    assert list(frame['method']) == ['DP', 'LP', 'B&B-grid', 'B&B-continuous', 'MILP']
    assert (frame['status'] == 'ok').all()
    assert frame['objective'].to_numpy() == pytest.approx([-25000] * 5)
    assert frame['gap_pct'].abs().max() < 1e-6


def test_grid_refinement_experiment(tmp_path):
    spec = ExperimentSpec('grid_refinement', instance=_toy_file(tmp_path), out=str(tmp_path),
                          ladder=(1, 2, 4))
    frame = read_table(run_experiment(spec, SETTINGS)[0])
    assert list(frame['refinement']) == [1, 2, 4]
    assert frame['nested'].all()
    assert frame['monotone'].all()


def test_grid_refinement_checks_every_method(tmp_path):
    spec = ExperimentSpec('grid_refinement', instance=_toy_file(tmp_path), out=str(tmp_path),
                          methods=('dp', 'gridlp', 'bnb_grid'), ladder=(1, 2))
    frame = read_table(run_experiment(spec, SETTINGS)[0])
    assert list(frame['method']) == ['DP', 'LP', 'B&B-grid'] * 2
    assert frame[['nested', 'monotone']].notna().all().all()
    assert frame['nested'].all()
    assert frame['monotone'].all()


def test_horizon_scaling_experiment(tmp_path):
    spec = ExperimentSpec('horizon_scaling', instance=_toy_file(tmp_path), out=str(tmp_path),
                          methods=('gridlp', 'bnb'), ladder=(2, 4))
    csv, svg = run_experiment(spec, SETTINGS)
    assert sorted(read_table(csv)['horizon'].unique()) == [2, 4]
    with open(svg, encoding='utf-8') as f:
        assert '<svg' in f.read()


def test_oracle_fuzz_experiment(tmp_path):
    spec = ExperimentSpec('oracle_fuzz', out=str(tmp_path), count=2, horizon=2, seed=7,
                          methods=('oracle', 'bnb', 'dp', 'gridlp'))
    frame = read_table(run_experiment(spec, SETTINGS)[0])
    assert len(frame) == 8
    assert sorted(frame['seed'].unique()) == [7, 8]


def test_terminal_plot(toy):
    text = terminal_plot(run_method('oracle', toy, SETTINGS).schedule)
    assert isinstance(text, str) and text


def test_sweeps(tmp_path):
    instance = _toy_file(tmp_path)
    frame = read_table(run_experiment(ExperimentSpec('volatility', instance=instance, out=str(tmp_path),
                                                     methods=('bnb',), ladder=(0.5, 1.0)), SETTINGS)[0])
    assert list(frame['scale']) == [0.5, 1.0]
    assert (frame['milp_relaxation'] <= frame['objective'] + 1e-6).all()
    frame = read_table(run_experiment(ExperimentSpec('jmax_sweep', instance=instance, out=str(tmp_path),
                                                     ladder=(1, 2)), SETTINGS)[0])
    assert list(frame['jmax']) == [1, 2]
    assert frame['time_ratio_pct'].iloc[0] == pytest.approx(100.0)
    frame = read_table(run_experiment(ExperimentSpec('hsc', instance=instance, out=str(tmp_path),
                                                     methods=('milp', 'bnb')), SETTINGS)[0])
    assert list(frame['variant']) == ['with SC'] * 2 + ['without SC'] * 2
    with_sc = frame[frame['variant'] == 'with SC']['objective']
    assert with_sc.max() - with_sc.min() < 1e-6
