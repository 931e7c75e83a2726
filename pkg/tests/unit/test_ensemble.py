import numpy as np
import pytest
from dataclasses import replace

from tlsnoise.ensemble import (
    Ensemble,
    QTlsRecord,
    build_ensemble,
    coupling_field,
    ensemble_summary,
    generate_qtls_ensemble,
    generate_ttls_set,
    interaction_region_radius,
    qtls_area_density,
    ttls_density,
    ttls_interaction_volume,
)
from tlsnoise.errors import GenerationError
from tlsnoise.options import EnsembleConfig, MaterialParams
from tlsnoise.random_streams import CANDIDATE_STREAM, RandomStream
from tlsnoise.tls_physics import pair_splitting, switching_rate, thermal_energy

# A sparse population keeps these tests fast
SMALL = EnsembleConfig(density=5.0)


def _small_ensemble(seed: int = 7, workers: int = 1) -> Ensemble:
    return build_ensemble(SMALL, seed, workers=workers)


###################################
# Testing: generate_qtls_ensemble #
###################################


def test_coupled_defects_respect_cutoff_and_band():
    records = generate_qtls_ensemble(
        SMALL, coupling_field(SMALL), RandomStream(3).child(CANDIDATE_STREAM)
    )
    assert len(records) > 0
    lo, hi = SMALL.band
    for q in records:
        assert q.g >= SMALL.g_cutoff
        assert lo <= q.f <= hi
        assert abs(q.x) <= SMALL.geometry.half_span
        assert 0 < q.z <= SMALL.geometry.oxide_thickness
        assert q.f / 10 <= q.delta0 <= q.f
        assert q.gamma1 == pytest.approx(SMALL.gamma1_qtls_max * (q.delta0 / q.f) ** 2)
        assert q.ttls_set == ()


def test_interfaces_follow_position():
    for q in _small_ensemble():
        in_gap = SMALL.geometry.strip_edge < abs(q.x) < SMALL.geometry.ground_edge
        assert q.interface == ("SA" if in_gap else "MA")


def test_zero_density_gives_empty_ensemble():
    ensemble = build_ensemble(replace(SMALL, density=0.0), seed=1)
    assert len(ensemble) == 0
    assert ensemble.n_candidates == 0


def test_default_density_gives_hundreds_of_coupled_defects():
    cfg = EnsembleConfig()
    records = generate_qtls_ensemble(
        cfg, coupling_field(cfg), RandomStream(0).child(CANDIDATE_STREAM)
    )
    assert 450 <= len(records) <= 700


##############################
# Testing: generate_ttls_set #
##############################


def test_thermal_defects_are_active():
    threshold = thermal_energy(SMALL.material.temperature) / 2
    for q in _small_ensemble():
        assert len(q.ttls_set) == SMALL.n_ttls
        for t in q.ttls_set:
            assert pair_splitting(t.e_t, t.delta, t.u) < threshold
            assert SMALL.r_min <= t.r <= SMALL.r_max
            assert t.gamma == pytest.approx(switching_rate(t.barrier, SMALL.material))
            assert t.delta_f < 0 or t.delta == 0


def test_thermal_defects_need_a_warm_enough_bath():
    cold = replace(
        SMALL, material=MaterialParams(temperature=0.001), max_ttls_attempts=200
    )
    q = QTlsRecord(f=4.5e9, g=100e3, gamma1=1e7)
    with pytest.raises(GenerationError, match="acceptance ratio"):
        generate_ttls_set(q, cold, RandomStream(1))


def test_no_thermal_defects_requested():
    q = QTlsRecord(f=4.5e9, g=100e3, gamma1=1e7)
    assert generate_ttls_set(q, replace(SMALL, n_ttls=0), RandomStream(1)) == ()


###########################
# Testing: build_ensemble #
###########################


def test_same_seed_same_ensemble():
    assert _small_ensemble(7) == _small_ensemble(7)


def test_different_seed_different_ensemble():
    assert _small_ensemble(7) != _small_ensemble(8)


def test_threads_do_not_change_the_ensemble():
    assert _small_ensemble(7, workers=4) == _small_ensemble(7)


def test_ensemble_remembers_seed_and_candidates():
    ensemble = _small_ensemble(7)
    assert ensemble.seed == 7
    assert ensemble.n_candidates >= len(ensemble)
    assert ensemble[0] is ensemble.qtls[0]


def test_ensemble_summary():
    ensemble = _small_ensemble()
    summary = ensemble_summary(ensemble)
    assert summary["n_qtls"] == len(ensemble)
    assert summary["n_MA"] + summary["n_SA"] == len(ensemble)
    assert summary["g_min"] >= SMALL.g_cutoff
    assert summary["g_min"] <= summary["g_median"] <= summary["g_max"]
    assert "ttls_barrier_median" in summary


def test_summary_of_empty_ensemble():
    assert ensemble_summary(Ensemble()) == {
        "n_qtls": 0,
        "n_candidates": 0,
        "n_MA": 0,
        "n_SA": 0,
    }


##############################
# Testing: density estimates #
##############################


def test_thermal_interaction_volume():
    assert ttls_interaction_volume(60.0, 3.0) == pytest.approx(3.4e-5, rel=0.03)


def test_thermal_density():
    density = ttls_density(10, 60.0, 3.0, 125e6, 625e6)
    assert density == pytest.approx(6e5, rel=0.05)


def test_coupled_defect_area_density_and_radius():
    assert qtls_area_density(200.0, 1e9, 3.0) == pytest.approx(0.6)
    radius = interaction_region_radius(200.0, 1e9, 3.0)
    assert radius == pytest.approx(0.645, rel=1e-2)
    assert radius * 1e3 > SMALL.r_max
