"""Duane point sets and failure histograms."""
from __future__ import annotations

import math

import numpy as np
import pytest

from plpcr.data import FailureHistory, FailureRecord, harvester_fixture
from plpcr.diagnostics import (
    duane_csv,
    duane_fit,
    duane_points,
    failure_histogram,
    histogram_csv,
)
from plpcr.errors import DiagnosticError, DomainError
from plpcr.montecarlo import make_scenario, simulate_history
from plpcr.numerics import RandomSource

E = math.e


def _single_cause(times: list[float], T: float) -> FailureHistory:
    return FailureHistory(tuple(FailureRecord(t, 1) for t in times), T, 1)


class TestDuanePoints:
    def test_log_log_mapping(self):
        history = _single_cause([1.0, E, E**2], 10.0)
        series = duane_points(history, 1)
        expected = ((0.0, 0.0), (1.0, math.log(2.0)), (2.0, math.log(3.0)))
        for got, want in zip(series.points, expected):
            np.testing.assert_allclose(got, want, atol=1e-14)

    def test_harvester_cause1(self):
        series = duane_points(harvester_fixture(), 1)
        assert len(series.points) == 10
        np.testing.assert_allclose(series.points[0], (math.log(4.987), 0.0), atol=1e-12)

    def test_log_count_strictly_increasing(self):
        series = duane_points(harvester_fixture(), 2)
        counts = [lc for _, lc in series.points]
        assert all(b > a for a, b in zip(counts, counts[1:]))

    def test_empty_cause_rejected(self):
        history = _single_cause([1.0], 10.0)
        with pytest.raises(DiagnosticError):
            duane_points(history, 2)  # cause id out of range
        two_cause = FailureHistory((FailureRecord(1.0, 1),), 10.0, 2)
        with pytest.raises(DiagnosticError, match="no failures"):
            duane_points(two_cause, 2)

    def test_slope_approximates_shape(self):
        # Long simulated series: least-squares slope within 0.1 of beta.
        for beta in (0.8, 1.5):
            scenario = make_scenario((beta,), (600.0,), 5.0, seed=101)
            history = simulate_history(scenario, RandomSource(101, 0))
            series = duane_points(history, 1)
            assert len(series.points) >= 500
            slope, _ = duane_fit(series)
            assert abs(slope - beta) < 0.1

    def test_time_rescaling_shifts_log_time_only(self):
        history = harvester_fixture()
        c = 2.0
        scaled = FailureHistory(
            tuple(FailureRecord(c * r.time, r.cause) for r in history.records),
            c * history.truncation_time, history.num_causes)
        base = duane_points(history, 3)
        shifted = duane_points(scaled, 3)
        for (lt0, lc0), (lt1, lc1) in zip(base.points, shifted.points):
            assert abs((lt1 - lt0) - math.log(c)) < 1e-12
            assert lc1 == lc0


class TestFailureHistogram:
    def test_empty_history(self):
        bins = failure_histogram(FailureHistory((), 100.0, 1), 20.0)
        assert len(bins) == 5
        assert all(count == 0 for _, count in bins)

    def test_harvester_20_day_bins(self):
        bins = failure_histogram(harvester_fixture(), 20.0)
        assert len(bins) == 13
        assert sum(count for _, count in bins) == 48
        # First interval holds the three earliest failures plus 15.850.
        assert bins[0][1] == 4

    def test_single_failure(self):
        bins = failure_histogram(_single_cause([5.0], 100.0), 20.0)
        assert bins[0] == (0.0, 1)
        assert sum(c for _, c in bins) == 1

    def test_counts_total_n_generic(self):
        history = harvester_fixture()
        for width in (1.0, 7.0, 20.0, 53.0, 300.0):
            bins = failure_histogram(history, width)
            assert sum(c for _, c in bins) == history.n

    def test_partial_final_bin_included(self):
        history = _single_cause([24.9], 25.0)
        bins = failure_histogram(history, 10.0)
        assert len(bins) == 3
        assert bins[-1] == (20.0, 1)

    def test_bad_width(self):
        with pytest.raises(DomainError):
            failure_histogram(harvester_fixture(), 0.0)


class TestCsvEmission:
    def test_duane_csv_layout(self):
        series = duane_points(harvester_fixture(), 1)
        text = duane_csv([series])
        lines = text.strip().splitlines()
        assert lines[0] == "cause,log_time,log_count"
        assert len(lines) == 11
        cause, log_time, log_count = lines[1].split(",")
        assert cause == "1"
        assert float(log_count) == 0.0
        assert abs(float(log_time) - math.log(4.987)) < 1e-12

    def test_histogram_csv_layout(self):
        bins = failure_histogram(harvester_fixture(), 20.0)
        lines = histogram_csv(bins).strip().splitlines()
        assert lines[0] == "bin_start,count"
        assert len(lines) == 14
        start, count = lines[-1].split(",")
        assert float(start) == 240.0
