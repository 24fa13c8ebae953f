import pytest

from pshopt.errors import BoundaryContract, ModeDisabled
from pshopt.events import (BlockBoundary, RampRule, ramp_end_rule, solve_block, solve_generating_block,
                           solve_hsc_block, solve_offline_block, solve_pumping_block, stitch)
from pshopt.modes import Mode

from conftest import make_instance


def test_generating_block():
    inst = make_instance()
    result = solve_generating_block(BlockBoundary(1, 2, Mode.G, 450, 90, 350, 100), inst)
    assert result.feasible
    assert result.cost == pytest.approx(-10000)
    assert result.h_out == pytest.approx([100])
    assert result.levels == pytest.approx([450, 350])


def test_generating_block_over_capacity():
    inst = make_instance()
    assert not solve_generating_block(BlockBoundary(1, 2, Mode.G, 450, 90, 250, 100), inst).feasible


def test_generating_block_ramp_violation():
    inst = make_instance()
    assert not solve_generating_block(BlockBoundary(1, 2, Mode.G, 450, 40, 350, 100), inst).feasible


def test_generating_block_shutdown_cap():
    inst = make_instance(horizon=2, prices=[100.0, 100.0])
    capped = BlockBoundary(1, 2, Mode.G, 450, 90, 350, 0.0, successor=Mode.O)
    # 100 MW exceeds the ramp limit before shutting down
    assert not solve_generating_block(capped, inst).feasible
    capped = BlockBoundary(1, 2, Mode.G, 450, 40, 400, 0.0, successor=Mode.O)
    assert solve_generating_block(capped, inst).cost == pytest.approx(-5000)


def test_pumping_block():
    inst = make_instance(efficiency_pump=0.75)
    result = solve_pumping_block(BlockBoundary(1, 2, Mode.P, 300, 0, 360), inst)
    assert result.feasible
    assert result.h_in == pytest.approx([80])
    assert result.cost == pytest.approx(8000)


def test_idle_pump():
    inst = make_instance(efficiency_pump=0.75)
    result = solve_pumping_block(BlockBoundary(1, 2, Mode.P, 300, 0, 300), inst)
    assert result.feasible
    assert result.h_in == pytest.approx([0])
    assert result.cost == pytest.approx(0)


def test_pumping_block_boundary_contract():
    inst = make_instance()
    with pytest.raises(BoundaryContract):
        solve_pumping_block(BlockBoundary(1, 2, Mode.P, 300, 0, 360, ramp_end=50), inst)


def test_offline_block_zero_drift():
    inst = make_instance(horizon=4, prices=[0.0] * 4)
    result = solve_offline_block(BlockBoundary(1, 4, Mode.O, 450, level_end=450), inst)
    assert result.feasible
    assert result.cost == 0


def test_offline_block_drift_mismatch():
    inst = make_instance(horizon=4, prices=[0.0] * 4)
    assert not solve_offline_block(BlockBoundary(1, 4, Mode.O, 450, level_end=400), inst).feasible


def test_offline_block_overflow():
    inst = make_instance(horizon=2, prices=[0.0, 0.0], inflow=10.0)
    assert not solve_offline_block(BlockBoundary(1, 3, Mode.O, 895), inst).feasible


def test_hsc_block():
    inst = make_instance(prices=[200.0], efficiency_pump=1.2, hsc=True,
                         reservoir={'capacity': 900, 'initial': 100})
    result = solve_hsc_block(BlockBoundary(1, 2, Mode.SC, 100, 80, 100, 130), inst)
    assert result.feasible
    assert result.h_out == pytest.approx([130])
    assert result.h_in == pytest.approx([130 / 1.2])
    assert result.cost == pytest.approx(-200 * 130 + 200 * 130 / 1.2)


def test_hsc_block_disabled():
    inst = make_instance()
    with pytest.raises(ModeDisabled):
        solve_hsc_block(BlockBoundary(1, 2, Mode.SC, 100, 80, 100, 130), inst)


def test_hsc_block_ramp_violation():
    inst = make_instance(prices=[200.0], efficiency_pump=1.2, hsc=True,
                         reservoir={'capacity': 900, 'initial': 100})
    assert not solve_hsc_block(BlockBoundary(1, 2, Mode.SC, 100, 0, 100, 130), inst).feasible


def test_dispatch():
    inst = make_instance(horizon=4, prices=[0.0] * 4)
    assert solve_block(BlockBoundary(1, 4, Mode.O, 450, level_end=450), inst).feasible
    with pytest.raises(BoundaryContract):
        solve_block(BlockBoundary(1, 4, Mode.O, 450, level_end=450, ramp_end=40), inst)


def test_ramp_end_rules():
    inst = make_instance(terminal_offline=True)
    assert ramp_end_rule(Mode.G, Mode.G, inst) is RampRule.PIN
    assert ramp_end_rule(Mode.G, Mode.P, inst) is RampRule.CAP
    assert ramp_end_rule(Mode.G, Mode.P, inst, strict=True) is RampRule.PIN
    assert ramp_end_rule(Mode.G, Mode.END, inst) is RampRule.CAP
    assert ramp_end_rule(Mode.P, Mode.G, inst) is RampRule.FREE
    assert ramp_end_rule(Mode.G, Mode.END, make_instance()) is RampRule.FREE


def test_stitch_blocks():
    inst = make_instance(horizon=3, prices=[0.0, 100.0, 0.0])
    offline = solve_offline_block(BlockBoundary(1, 2, Mode.O, 450, level_end=450), inst)
    generating = solve_generating_block(BlockBoundary(2, 3, Mode.G, 450, 0, 410, 0.0, successor=Mode.O), inst)
    tail = solve_offline_block(BlockBoundary(3, 4, Mode.O, 410, level_end=410), inst)
    schedule = stitch(inst, [(Mode.O, 1, 2, offline), (Mode.G, 2, 3, generating), (Mode.O, 3, 4, tail)], False)
    assert schedule.mode_string() == 'OGO'
    assert schedule.h_out == pytest.approx([0, 40, 0])
    assert schedule.cost == pytest.approx(-4000)
