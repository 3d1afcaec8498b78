import math

import numpy as np
import pytest

import mzfid


def test_single_photon_fock_value():
    report = mzfid.mutual_information(mzfid.likelihood_table(mzfid.StateCoefficients.fock(1)))
    assert report.h_bits == pytest.approx(1 / math.log(2) - 1, abs=1e-9)
    assert report.photons == 1


def test_table_shape_and_normalization():
    table = mzfid.likelihood_table(mzfid.StateCoefficients.fock(3), grid_size=256)
    assert table.values.shape == (4, 256)
    assert len(table.phi) == 256
    assert len(table.outcomes) == 4
    assert np.allclose(table.values.sum(axis=0), 1.0, atol=1e-12)


def test_output_probs_sum_to_one():
    rng = np.random.default_rng(5)
    raw = rng.normal(size=7) + 1j * rng.normal(size=7)
    state = mzfid.project_normalize(list(raw))
    for phi in (-2.5, 0.0, 1.1):
        probs = mzfid.state_output_probs(state, phi)
        assert len(probs) == 7
        assert sum(probs) == pytest.approx(1.0, abs=1e-12)


def test_noon_balanced_outcome_is_impossible():
    table = mzfid.likelihood_table(mzfid.StateCoefficients.noon(2), grid_size=128)
    with pytest.raises(mzfid.ImpossibleOutcome):
        mzfid.posterior_density(table, mzfid.Outcome(1, 1))


def test_closed_forms_agree_with_general_state():
    state = mzfid.StateCoefficients.fock(4)
    outcome = mzfid.Outcome(1, 3)
    for phi in (0.2, 1.7):
        assert mzfid.state_outcome_prob(state, phi, mzfid.InterferometerGeometry(), outcome) == pytest.approx(
            mzfid.fock_outcome_prob(4, outcome, phi), abs=1e-14)


def test_optimizer_is_deterministic():
    config = mzfid.OptimizerConfig()
    config.restarts = 2
    config.max_iterations = 100
    config.search_grid = 256
    config.report_grid = 512
    config.seed = 9
    a = mzfid.optimize_input_state(2, config)
    b = mzfid.optimize_input_state(2, config)
    assert a.best_h == b.best_h
    assert list(a.best_state.coeffs) == list(b.best_state.coeffs)
