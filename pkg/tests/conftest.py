"""Shared fixtures.

The benchmark scenarios are expensive (a full quantum-regression grid each),
so they are computed once per session and shared between the acceptance
checks that quote them.
"""

from __future__ import annotations

from dataclasses import replace

import pytest

from qnmsps import figure_config, run_scenario, sweep


@pytest.fixture(scope="session")
def fig1_result():
    return run_scenario(figure_config("fig1"))


@pytest.fixture(scope="session")
def fig2_result():
    return run_scenario(figure_config("fig2"))


@pytest.fixture(scope="session")
def half_pulse_result():
    return run_scenario(replace(figure_config("fig1"), tau_p_factor=0.5))


@pytest.fixture(scope="session")
def fig4_result():
    return run_scenario(figure_config("fig4"))


@pytest.fixture(scope="session")
def fig4_long_pulse_result():
    return run_scenario(replace(figure_config("fig4"), tau_p_factor=1.0))


@pytest.fixture(scope="session")
def fig3_sweep_result():
    return sweep(figure_config("fig3"))
