import csv
import io
import json

import pytest

from xchannel.errors import UnsupportedConfigError
from xchannel.planner import AntennaConfig
from xchannel.sim import TrialConfig, run_trials


def test_trial_config_validation():
    c = AntennaConfig(2, 2, 2, 1)
    with pytest.raises(ValueError):
        TrialConfig(c, trials=0)
    with pytest.raises(ValueError):
        TrialConfig(c, snr_db_list=())
    with pytest.raises(ValueError):
        TrialConfig(c, snr_db_list=(20, 10))
    with pytest.raises(ValueError):
        TrialConfig(c, Q=0)


def test_trial_config_from_dict():
    tc = TrialConfig.from_dict({"m1": 2, "m2": 2, "n1": 2, "n2": 1, "Q": 2,
                                "snr_db": [10, 20], "trials": 3, "seed": 9})
    assert tc.cfg == AntennaConfig(2, 2, 2, 1)
    assert (tc.Q, tc.snr_db_list, tc.trials, tc.seed) == (2, (10.0, 20.0), 3, 9)


def test_high_snr_small_config_error_free():
    r = run_trials(TrialConfig(AntennaConfig(2, 2, 2, 1), Q=1, snr_db_list=(60,), trials=100, seed=0))
    clean = sum(1 for e in r.per_trial_errors if e[0] == 0)
    assert clean >= 99


def test_slope_close_to_planner_dof():
    r = run_trials(TrialConfig(AntennaConfig(4, 4, 3, 2), Q=1,
                               snr_db_list=(30, 40, 50, 60), trials=40, seed=1))
    assert abs(r.slope - 5) <= 0.15 * 5


def test_deterministic_and_worker_independent():
    tc = TrialConfig(AntennaConfig(5, 4, 4, 3), snr_db_list=(0, 10, 20), trials=6, seed=4)
    a = run_trials(tc)
    b = run_trials(tc)
    c = run_trials(tc, workers=2)
    assert a.to_dict() == b.to_dict() == c.to_dict()


def test_ser_monotone_and_bounded():
    r = run_trials(TrialConfig(AntennaConfig(7, 6, 6, 5), Q=2,
                               snr_db_list=(0, 10, 20, 30, 40), trials=20, seed=2))
    for series in list(r.ser.values()) + [r.ser_total]:
        assert all(0.0 <= x <= 1.0 for x in series)
        assert all(b <= a for a, b in zip(series, series[1:]))
    assert r.ser_total[0] > 0.0


def test_outputs():
    r = run_trials(TrialConfig(AntennaConfig(3, 3, 4, 4), snr_db_list=(20, 40), trials=3, seed=0))
    data = json.loads(r.to_json())
    assert data["planner_dof"] == "5"
    assert "rate proxy" in data["slope_note"]
    rows = list(csv.reader(io.StringIO(r.to_csv())))
    assert rows[0] == ["m1", "m2", "n1", "n2", "snr_db", "ser", "slope"]
    assert len(rows) == 3


def test_unsupported_config():
    with pytest.raises(UnsupportedConfigError):
        run_trials(TrialConfig(AntennaConfig(1, 1, 1, 1), trials=1))
