"""Sliding-window derivation over trace-ordered logs."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_log
from procdrift.windows import (
    SubLogWindow,
    WindowConfig,
    WindowError,
    default_window_config,
    make_windows,
    window_count,
)


class TestDefaults:
    def test_sepsis_scale_defaults(self):
        cfg = default_window_config(1050)
        assert (cfg.win_size, cfg.win_step) == (34, 17)

    def test_small_log_fallback(self):
        # 61 traces would give step 1; fall back to a tenth of the log
        cfg = default_window_config(61)
        assert (cfg.win_size, cfg.win_step) == (12, 6)

    def test_tiny_log_fallback_floor(self):
        cfg = default_window_config(15)
        assert cfg.win_step >= 1
        assert cfg.win_size == 2 * cfg.win_step

    def test_single_trace_rejected(self):
        with pytest.raises(WindowError):
            default_window_config(1)


class TestWindowCount:
    def test_reference_case(self):
        assert window_count(1050, WindowConfig(50, 25)) == 39

    def test_short_log_fallback_formula(self):
        assert window_count(100, WindowConfig(50, 50)) == 2

    def test_degenerate_single_window(self):
        assert window_count(10, WindowConfig(10, 10)) == 1

    def test_default_config_count(self):
        cfg = default_window_config(1050)
        assert window_count(1050, cfg) == len(make_windows(_log(1050), cfg))


def _log(n):
    return make_log(["ab"] * n)


class TestMakeWindows:
    def test_window_geometry(self):
        log = _log(200)
        cfg = WindowConfig(win_size=50, win_step=25)
        windows = make_windows(log, cfg)
        assert len(windows) == window_count(200, cfg)
        for i, w in enumerate(windows):
            assert isinstance(w, SubLogWindow)
            assert w.index == i
            assert w.first == i * 25
            assert w.last == w.first + 50 - 1
            assert w.size == 50
            assert w.last < len(log)

    def test_spans_are_trace_start_times(self):
        log = _log(10)
        (w,) = make_windows(log, WindowConfig(10, 10))
        assert w.span == (log.traces[0].start, log.traces[9].start)

    def test_step_larger_than_size_rejected(self):
        with pytest.raises(WindowError):
            WindowConfig(10, 20).validate(100)

    def test_size_larger_than_log_rejected(self):
        with pytest.raises(WindowError):
            WindowConfig(200, 10).validate(100)

    def test_nonpositive_step_rejected(self):
        with pytest.raises(WindowError):
            WindowConfig(10, 0).validate(100)

    @settings(max_examples=60, deadline=None)
    @given(
        n=st.integers(min_value=4, max_value=300),
        size=st.integers(min_value=1, max_value=300),
        step=st.integers(min_value=1, max_value=300),
    )
    def test_count_matches_enumeration(self, n, size, step):
        if step > size or size > n:
            return
        cfg = WindowConfig(size, step)
        windows = make_windows(_log(n), cfg)
        assert len(windows) == window_count(n, cfg)
        assert len(windows) >= 1
        # windows tile the log at fixed stride and never overrun it
        for a, b in zip(windows, windows[1:]):
            assert b.first - a.first == step
        assert windows[-1].last <= n - 1
