"""Shared fixtures: one power-grid model, reusable simulation runs."""

import pytest

from cyberomr.sim import AttackScenario, build_site, inject_attack, run

ABNORMAL_START = 7200
ABNORMAL_DURATION = 300
SURGE_START = 10800
SURGE_DURATION = 300
SCENARIO_DURATION = 14400


@pytest.fixture(scope="session")
def grid_model():
    return build_site("power-grid", 42)


@pytest.fixture(scope="session")
def clean_run_2h(grid_model):
    return run(grid_model, 7200, 1)


@pytest.fixture(scope="session")
def scenario_model(grid_model):
    model = inject_attack(
        grid_model,
        AttackScenario("abnormal-control", "gen1-plc-1", ABNORMAL_START, ABNORMAL_DURATION),
    )
    return inject_attack(
        model,
        AttackScenario("traffic-surge", "off-gw->cc-fw", SURGE_START, SURGE_DURATION, 10),
    )


@pytest.fixture(scope="session")
def scenario_run(scenario_model):
    return run(scenario_model, SCENARIO_DURATION, 1)


@pytest.fixture(scope="session")
def scenario_results(scenario_run, grid_model):
    from cyberomr.sensor import run_site_pipelines

    return run_site_pipelines(scenario_run, grid_model.host_aors(), grid_model.roles())


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\n[ACCEPTANCE] {name}: {outcome}", flush=True)
