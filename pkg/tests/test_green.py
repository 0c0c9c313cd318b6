import json

import numpy as np
import pytest

from quadrantwalk import (SolverConvergenceError, TruncationPolicy,
                          absorption_profile, continuation_identity_check,
                          generating_function_check, make_model, solve_green,
                          solve_green_box, solve_green_stepwise)
from quadrantwalk.green import exit_mass, _absorption_from_green


def test_policy_validation():
    with pytest.raises(ValueError):
        TruncationPolicy(tolerance=0.0)
    with pytest.raises(ValueError):
        TruncationPolicy(initial_radius=2)


def test_green_basic_values():
    g = solve_green_box(make_model(4), 1, 1, 64)
    assert g[1, 1] >= 1.0          # the start is visited at least once
    assert g[2, 1] > 0.0           # one-step reachability through p10
    assert g[0, 5] == 0.0          # axes carry no visits
    assert np.all(g >= 0.0)


def test_linear_vs_stepwise_oracles():
    # two independent routes to the same box-truncated field
    for n in (3, 4):
        model = make_model(n)
        lin = solve_green_box(model, 1, 1, 64)
        step = solve_green_stepwise(model, 1, 1, 64, rel_tol=1e-10)
        mask = lin > 1e-12
        worst = np.max(np.abs(lin[mask] - step[mask]) / lin[mask])
        assert worst < 1e-8


def test_monotone_in_radius():
    model = make_model(3)
    g1 = solve_green_box(model, 1, 1, 32)
    g2 = solve_green_box(model, 1, 1, 64)
    assert np.all(g2[:33, :33] >= g1 - 1e-14)


def test_solve_green_with_policy():
    model = make_model(3)
    field = solve_green(model, 1, 1,
                        TruncationPolicy(initial_radius=16, tolerance=1e-6,
                                         max_doublings=4))
    assert field.kind == "green"
    assert field.radius >= 32
    assert field.error_estimate <= 1e-6
    assert field.value(1, 1) == pytest.approx(1.21727811852, rel=1e-8)


def test_solve_green_failure_signalled():
    with pytest.raises(SolverConvergenceError):
        solve_green(make_model(3), 1, 1,
                    TruncationPolicy(initial_radius=8, tolerance=1e-300,
                                     max_doublings=1))


def test_absorption_total_mass_and_asymmetry():
    model = make_model(4)
    fx, fy = absorption_profile(model, 1, 1, radius=128)
    ax, ay = fx.values.ravel(), fy.values.ravel()
    assert np.all(ax >= 0) and np.all(ay >= 0)
    assert ax[1] == 0.0            # (1,0) is unreachable from the interior
    total = ax.sum() + ay.sum()
    deficit = fx.error_estimate
    # absorbed mass plus cutoff flux accounts for everything the solver moved
    assert total + deficit == pytest.approx(1.0, abs=1e-12)
    assert deficit < 1e-4
    # the diagonal jumps break x/y symmetry
    assert abs(ax.sum() - ay.sum()) > 1e-3


def test_absorption_identity_route_matches_direct():
    # absorption_profile raises ConsistencyError if the Green-identity route
    # and the per-site hitting solves disagree beyond 1e-10
    for n in (3, 4):
        absorption_profile(make_model(n), 2, 3, radius=96)


def test_generating_function_identity():
    check = generating_function_check(make_model(3), 1, 1, 0.5, 0.5, radius=128)
    assert check.residual < 1e-6
    assert check.ok
    check = generating_function_check(make_model(4), 1, 1, 0.9j, 0.3, radius=128)
    assert check.ok
    check = generating_function_check(make_model(4), 1, 1, 0.0, 0.0, radius=64)
    assert check.residual == 0.0
    with pytest.raises(ValueError):
        generating_function_check(make_model(4), 1, 1, 1.2, 0.1)


def test_generating_function_budget_scales_with_radius():
    small = generating_function_check(make_model(3), 1, 1, 0.8, 0.7j, radius=64)
    large = generating_function_check(make_model(3), 1, 1, 0.8, 0.7j, radius=128)
    assert large.budget < small.budget
    assert large.ok and small.ok


def test_continuation_identity():
    from quadrantwalk import Uniformization
    u4 = Uniformization(make_model(4))
    check = continuation_identity_check(u4, 1, 1, 0.4 * np.exp(1j * np.pi / 8),
                                        radius=128)
    assert check.ok
    u3 = Uniformization(make_model(3))
    check = continuation_identity_check(u3, 1, 1, 0.2, radius=128)
    assert check.ok
    # toward z = 0 the residual tends to the truncation deficit (total
    # absorbed mass is 1 in the full quarter plane)
    check = continuation_identity_check(u3, 1, 1, 1e-3, radius=128)
    assert 0.25 * check.deficit < check.residual < check.deficit
    assert check.ok
    # the negative real axis maps into the branch cut [1, x4]: outside the cone
    with pytest.raises(ValueError):
        continuation_identity_check(u3, 1, 1, -2.0)


def test_field_export_roundtrip(tmp_path):
    model = make_model(3)
    field = solve_green(model, 1, 1, TruncationPolicy(initial_radius=8,
                                                      tolerance=1e-3,
                                                      max_doublings=3))
    csv_path = tmp_path / "field.csv"
    json_path = tmp_path / "field.json"
    field.to_csv(str(csv_path))
    field.to_json(str(json_path))
    text = csv_path.read_text().splitlines()
    assert text[0] == "i,j,value"
    assert len(text) == (field.imax + 1) * (field.jmax + 1) + 1
    payload = json.loads(json_path.read_text())
    assert payload["meta"]["n"] == 3
    assert payload["meta"]["radius"] == field.radius
    by_site = {(i, j): v for i, j, v in payload["data"]}
    assert by_site[(1, 1)] == field.value(1, 1)
    # deterministic output: identical bytes on a second write
    first = json_path.read_bytes()
    field.to_json(str(json_path))
    assert json_path.read_bytes() == first


def test_exit_mass_is_the_absorption_deficit():
    model = make_model(3)
    R = 64
    g = solve_green_box(model, 1, 1, R)
    ax, ay = _absorption_from_green(model, g, R)
    assert ax.sum() + ay.sum() + exit_mass(model, g, R) == pytest.approx(1.0, abs=1e-12)
