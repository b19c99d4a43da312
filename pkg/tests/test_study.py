import json
import math

import numpy as np
import pytest

from wall_limits.morse import NEUMANN, FineTuning, MorseParams, psi_unbound
from wall_limits.wigner import align, convergence_study, limit_phase, morse_wigner_grid
from wall_limits.wigner.study import dump_report, thread_count


def test_limit_phase():
    assert limit_phase(FineTuning(0, 1.0), 1.0) == pytest.approx(math.pi / 4)
    assert limit_phase(FineTuning(0, NEUMANN), 1.0) == pytest.approx(math.pi / 2)
    assert limit_phase(FineTuning(0, 1.0), 1.0, b=2.0) == 0.0


def test_align_recovers_constant():
    rng = np.random.default_rng(1)
    t = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    c, aligned = align(t / (2 - 0.5j), t)
    assert c == pytest.approx(2 - 0.5j, rel=1e-14)
    np.testing.assert_allclose(aligned, t, rtol=1e-14)
    with pytest.raises(ZeroDivisionError):
        align(np.zeros(3), t.ravel()[:3])


def test_thread_count(monkeypatch):
    monkeypatch.setenv("WALL_LIMITS_THREADS", "3")
    assert thread_count() == 3
    monkeypatch.setenv("WALL_LIMITS_THREADS", "zero")
    assert thread_count() == 1
    monkeypatch.delenv("WALL_LIMITS_THREADS")
    assert thread_count(2) == 2


def test_grid_is_real_and_thread_independent():
    params = MorseParams(20.0, 20.0, 0.9)
    xs, ps = np.linspace(0.5, 1.5, 3), np.linspace(-2, 2, 4)
    a = morse_wigner_grid(params, 1.0, 1.0, xs, ps, workers=1)
    b = morse_wigner_grid(params, 1.0, 1.0, xs, ps, workers=3)
    assert np.array_equal(a.values, b.values)
    assert np.max(np.abs(a.values.imag)) < 1e-10 * a.sup_norm()


def test_grid_hermiticity():
    params = MorseParams(4.0, 4.0, 0.9)
    xs, ps = np.array([0.7, 1.3]), np.array([-1.0, 0.4])
    ab = morse_wigner_grid(params, 1.0, 1.4, xs, ps).values
    ba = morse_wigner_grid(params, 1.4, 1.0, xs, ps).values
    np.testing.assert_allclose(ab, np.conj(ba), atol=1e-9)


def test_small_study_report(tmp_path):
    xs, ps = np.linspace(0.5, 2.5, 4), np.linspace(-3, 3, 4)
    rep = convergence_study(FineTuning(0, 1.0), 1.0, [20.0, 40.0], xs, ps)
    assert rep["monotone"]
    assert [r["alpha"] for r in rep["per_alpha"]] == [20.0, 40.0]
    assert rep["final_sup_distance"] == rep["per_alpha"][-1]["sup_distance"]
    path = tmp_path / "r.json"
    dump_report(rep, path)
    assert json.loads(path.read_text())["schema_version"] == 1


def test_study_rejects_nonpositive_x():
    with pytest.raises(ValueError):
        convergence_study(FineTuning(0, 1.0), 1.0, [20.0], [0.0, 1.0], [0.0])
