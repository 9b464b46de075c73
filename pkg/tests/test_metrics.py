"""Packet reception ratio accounting and cross-seed aggregation."""

import math

import numpy as np
import pytest

from sidelink_sim import (ChannelParams, ConfigError, DropChannel,
                          LinkBudgetRecord, McsEntry, MetricsConfig,
                          MetricsError, PrrSample, RadioParams, Vehicle,
                          WarningCounters, aggregate, build_link_budgets,
                          prr_for_tx)

MCS = McsEntry(index=1, spectral_efficiency=1.0,
               bler_threshold_db=2.0, bler_slope_db=2.0)
_LN99 = math.log(99.0)


def budget_at_sinr(rx_id, sinr_db, skipped=False):
    nan = math.nan
    return LinkBudgetRecord(tx_id=0, rx_id=rx_id, distance_m=100.0,
                            pathloss_db=nan if skipped else 100.0,
                            rx_power_dbm=nan if skipped else -73.0,
                            interference_dbm=-math.inf, noise_dbm=-95.0,
                            sinr_db=nan if skipped else sinr_db,
                            half_duplex_skipped=skipped)


def sinr_for_bler(target_bler, mcs=MCS):
    """Invert the logistic curve: the SINR at which BLER = target."""
    return mcs.bler_threshold_db \
        + mcs.bler_slope_db * math.log((1.0 - target_bler) / target_bler) \
        / _LN99


class TestMetricsConfig:
    @pytest.mark.parametrize("key,value", [
        ("bler_success_threshold", 0.0),
        ("bler_success_threshold", 1.0),
        ("prr_mode", "always"),
        ("num_seeds", 0),
    ])
    def test_validation(self, key, value):
        with pytest.raises(ConfigError) as exc:
            MetricsConfig(**{key: value})
        assert key in str(exc.value)


class TestPrrForTx:
    def test_strong_links_all_succeed(self):
        budgets = [budget_at_sinr(i, 60.0) for i in range(1, 5)]
        sample = prr_for_tx(budgets, MCS)
        assert sample == PrrSample(tx_id=0, num_in_range=4, num_success=4,
                                   prr=1.0)

    def test_weak_links_all_fail(self):
        budgets = [budget_at_sinr(i, -40.0) for i in range(1, 5)]
        assert prr_for_tx(budgets, MCS).prr == 0.0

    def test_threshold_counts_strictly_below(self):
        """Receivers at BLER 0.001, 0.5 and 0.009 against a 0.01
        threshold: exactly the two sub-threshold ones succeed."""
        blers = [0.001, 0.5, 0.009]
        budgets = [budget_at_sinr(i + 1, sinr_for_bler(b))
                   for i, b in enumerate(blers)]
        sample = prr_for_tx(budgets, MCS, bler_threshold=0.01)
        assert (sample.num_in_range, sample.num_success) == (3, 2)
        assert sample.prr == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_empty_budget_list_has_undefined_prr(self):
        sample = prr_for_tx([], MCS)
        assert sample.num_in_range == 0
        assert sample.prr is None

    def test_all_skipped_receivers_leave_prr_undefined(self):
        budgets = [budget_at_sinr(1, 0.0, skipped=True)]
        assert prr_for_tx(budgets, MCS).prr is None

    def test_skipped_receivers_leave_the_denominator_by_default(self):
        budgets = [budget_at_sinr(1, 60.0), budget_at_sinr(2, 60.0),
                   budget_at_sinr(3, 0.0, skipped=True)]
        sample = prr_for_tx(budgets, MCS)
        assert (sample.num_in_range, sample.num_success) == (2, 2)
        assert sample.prr == 1.0

    def test_skipped_receivers_count_as_losses_on_request(self):
        budgets = [budget_at_sinr(1, 60.0), budget_at_sinr(2, 60.0),
                   budget_at_sinr(3, 0.0, skipped=True)]
        sample = prr_for_tx(budgets, MCS, count_half_duplex_as_loss=True)
        assert (sample.num_in_range, sample.num_success) == (3, 2)
        assert sample.prr == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_invariant_under_receiver_relabeling(self):
        sinrs = [60.0, -40.0, 10.0, 3.0]
        budgets = [budget_at_sinr(i + 1, s) for i, s in enumerate(sinrs)]
        reference = prr_for_tx(budgets, MCS)
        shuffled = prr_for_tx(list(reversed(budgets)), MCS)
        assert shuffled.prr == reference.prr
        assert shuffled.num_success == reference.num_success

    def test_unknown_mode_rejected(self):
        with pytest.raises(MetricsError):
            prr_for_tx([budget_at_sinr(1, 0.0)], MCS, mode="oracle")

    def test_bernoulli_mode_needs_rng(self):
        with pytest.raises(MetricsError):
            prr_for_tx([budget_at_sinr(1, 0.0)], MCS, mode="bernoulli")

    def test_bernoulli_converges_to_expected_reception(self):
        """Law of large numbers: 2000 receivers pinned at BLER 0.3 give
        a PRR within 3 sigma = 3*sqrt(0.3*0.7/2000) of 0.7."""
        s = sinr_for_bler(0.3)
        budgets = [budget_at_sinr(i, s) for i in range(1, 2001)]
        sample = prr_for_tx(budgets, MCS, mode="bernoulli",
                            rng=np.random.default_rng(11))
        assert abs(sample.prr - 0.7) <= 3.0 * math.sqrt(0.3 * 0.7 / 2000)

    def test_interference_cannot_raise_prr(self):
        """Engaging an interferer lowers every SINR, so the deterministic
        success set can only shrink."""
        def vehicle(vid, x):
            return Vehicle(id=vid, x=x, y=2.0, lane_index=0,
                           attached_cell=0)
        tx = vehicle(0, 0.0)
        receivers = [vehicle(i, 120.0 * i) for i in range(1, 4)]
        itx = vehicle(9, 500.0)
        chan = DropChannel([tx, itx] + receivers, 1.5,
                           ChannelParams(shadowing_enabled=False),
                           np.random.default_rng(0))
        mcs = McsEntry(1, 4.5234, 15.4237, 2.0)
        quiet = build_link_budgets(tx, receivers, [], chan, RadioParams())
        noisy = build_link_budgets(tx, receivers, [itx], chan,
                                   RadioParams())
        assert prr_for_tx(noisy, mcs).prr <= prr_for_tx(quiet, mcs).prr


class TestAggregate:
    def test_single_seed_mean(self):
        samples = [[PrrSample(0, 2, 2, 1.0), PrrSample(1, 2, 1, 0.5)]]
        result = aggregate(samples)
        assert result.mean_prr == pytest.approx(0.75, abs=1e-12)
        assert result.stderr_prr == 0.0
        assert result.num_seeds == 1

    def test_two_seed_stderr(self):
        samples = [[PrrSample(0, 10, 8, 0.8)], [PrrSample(0, 10, 9, 0.9)]]
        result = aggregate(samples)
        assert result.mean_prr == pytest.approx(0.85, abs=1e-12)
        assert result.stderr_prr == pytest.approx(0.05, abs=1e-12)
        assert result.per_seed_prr == (0.8, 0.9)

    def test_identical_seeds_have_zero_spread(self):
        samples = [[PrrSample(0, 4, 3, 0.75)] for _ in range(5)]
        result = aggregate(samples)
        assert result.mean_prr == 0.75
        assert result.stderr_prr == 0.0

    def test_undefined_samples_are_excluded_not_zero_filled(self):
        samples = [[PrrSample(0, 0, 0, None), PrrSample(1, 2, 2, 1.0)]]
        assert aggregate(samples).mean_prr == 1.0

    def test_seed_with_no_defined_samples_contributes_nothing(self):
        samples = [[PrrSample(0, 0, 0, None)], [PrrSample(0, 2, 1, 0.5)]]
        result = aggregate(samples)
        assert result.per_seed_prr == (0.5,)
        assert result.stderr_prr == 0.0

    def test_no_defined_samples_anywhere_raises(self):
        with pytest.raises(MetricsError):
            aggregate([[PrrSample(0, 0, 0, None)]])

    def test_warnings_are_carried_through(self):
        w = WarningCounters(clamped_distances=3, half_duplex_skips=7)
        result = aggregate([[PrrSample(0, 1, 1, 1.0)]], warnings=w)
        assert result.warnings.as_dict() \
            == {"clamped_distances": 3, "half_duplex_skips": 7}


class TestWarningCounters:
    def test_merge_accumulates(self):
        a = WarningCounters(clamped_distances=1, half_duplex_skips=2)
        a.merge(WarningCounters(clamped_distances=10, half_duplex_skips=20))
        assert a.as_dict() == {"clamped_distances": 11,
                               "half_duplex_skips": 22}
