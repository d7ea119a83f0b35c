"""Chain complexes, homology, mod-p dimensions, suspension, result cache."""

import json

import pytest

from repspace.abelian import AbelianGroup, GradedGroup, IntMatrix
from repspace.engine import (
    ENGINE_VERSION,
    ChainComplex,
    cached_homology,
    homology,
    homology_mod_p,
    reduced_homology,
    suspend,
    universal_coefficients_check,
    _cache_path,
)
from repspace.errors import CompositionNotZero, NotPrime

Z = AbelianGroup.free


def T(r, *ds):
    return AbelianGroup.from_factors(r, ds)


def rp_complex(n):
    """Cellular chains of RP^n: one cell per degree, boundaries 0, 2, 0, ..."""
    ranks = [1] * (n + 1)
    diffs = [IntMatrix.from_rows([[1 + (-1) ** j]]) for j in range(1, n + 1)]
    return ChainComplex(ranks, diffs)


def torus_complex():
    """Cellular T^2: one 0-cell, two 1-cells, one 2-cell, zero boundaries."""
    return ChainComplex(
        [1, 2, 1], [IntMatrix.zero(1, 2), IntMatrix.zero(2, 1)]
    )


def test_validation_rejects_nonzero_composition():
    d1 = IntMatrix.from_rows([[1, -1]])
    d2 = IntMatrix.from_rows([[1], [0]])
    with pytest.raises(CompositionNotZero):
        ChainComplex([1, 2, 1], [d1, d2])


def test_validation_rejects_shape_mismatch():
    with pytest.raises(ValueError, match="shape"):
        ChainComplex([1, 2], [IntMatrix.zero(2, 2)])
    with pytest.raises(ValueError, match="negative"):
        ChainComplex([1, -1], [IntMatrix.zero(1, 0)])


def test_boundary_outside_range_is_zero():
    C = torus_complex()
    assert C.d(0).shape == (0, 1)
    assert C.d(3).shape == (1, 0)
    assert C.d(7).is_zero()


def test_classical_homology_fixtures():
    assert homology(rp_complex(2)) == GradedGroup.of(Z(1), T(0, 2))
    assert homology(rp_complex(3)) == GradedGroup.of(Z(1), T(0, 2), Z(0), Z(1))
    assert homology(rp_complex(4)) == GradedGroup.of(
        Z(1), T(0, 2), Z(0), T(0, 2), Z(0)
    )
    assert homology(torus_complex()) == GradedGroup.of(Z(1), Z(2), Z(1))


def test_reduced_homology_strips_one_z():
    h = reduced_homology(torus_complex())
    assert h == GradedGroup.of(Z(0), Z(2), Z(1))
    with pytest.raises(ValueError):
        reduced_homology(ChainComplex([], []))


def test_homology_mod_p_fixtures():
    assert homology_mod_p(rp_complex(2), 2) == [1, 1, 1]
    assert homology_mod_p(rp_complex(2), 3) == [1, 0, 0]
    assert homology_mod_p(torus_complex(), 5) == [1, 2, 1]
    with pytest.raises(NotPrime):
        homology_mod_p(torus_complex(), 4)
    with pytest.raises(NotPrime):
        homology_mod_p(torus_complex(), 1)


def test_universal_coefficients_on_fixtures():
    for C in (rp_complex(2), rp_complex(4), torus_complex()):
        for p in (2, 3, 5):
            assert universal_coefficients_check(C, p)


def test_mod_p_dimensions_see_torsion_twice():
    # a Z/2 in degree k contributes to the mod-2 dimensions in k and k+1
    C = rp_complex(2)
    assert homology_mod_p(C, 2) == [1, 1, 1]
    h = homology(C)
    assert homology_mod_p(C, 2)[2] == h[1].torsion_rank(2)


def test_euler_characteristic():
    assert rp_complex(2).euler_characteristic() == 1
    assert rp_complex(3).euler_characteristic() == 0
    assert torus_complex().euler_characteristic() == 0


def test_suspend_shifts_homology():
    S = suspend(torus_complex())
    assert homology(S) == GradedGroup.of(Z(1), Z(0), Z(2), Z(1))
    # suspending the 2-point complex gives a circle
    S0 = ChainComplex([2], [])
    assert homology(suspend(S0)) == GradedGroup.of(Z(1), Z(1))


def test_suspend_rejects_non_augmentable():
    C = ChainComplex([1, 1], [IntMatrix.from_rows([[2]])])
    with pytest.raises(ValueError, match="augment"):
        suspend(C)
    with pytest.raises(ValueError, match="empty"):
        suspend(ChainComplex([], []))


def test_chain_complex_json_round_trip():
    C = rp_complex(3)
    D = ChainComplex.from_json(C.to_json())
    assert D.ranks == C.ranks
    assert all(D.d(k) == C.d(k) for k in range(1, 4))


# -- result cache ------------------------------------------------------------

RP3_HOMOLOGY = GradedGroup.of(Z(1), T(0, 2), Z(0), Z(1))


def test_cached_homology_writes_and_reads(tmp_path):
    h = cached_homology("rp(n=3)", cache_dir=tmp_path)
    assert h == RP3_HOMOLOGY
    path = _cache_path(tmp_path, "rp(n=3)")
    assert path.exists()
    doc = json.loads(path.read_text("utf-8"))
    assert doc["key"] == "rp(n=3)"
    assert doc["engine_version"] == ENGINE_VERSION
    # second call is served from the file; poison the value to prove it
    doc["graded_group"] = GradedGroup.of(Z(7)).to_json()
    path.write_text(json.dumps(doc), "utf-8")
    assert cached_homology("rp(n=3)", cache_dir=tmp_path) == GradedGroup.of(Z(7))


def test_cached_homology_recovers_from_corruption(tmp_path):
    path = _cache_path(tmp_path, "rp(n=2)")
    path.write_text("{ not json", "utf-8")
    h = cached_homology("rp(n=2)", cache_dir=tmp_path)
    assert h == GradedGroup.of(Z(1), T(0, 2))
    assert json.loads(path.read_text("utf-8"))["key"] == "rp(n=2)"


def test_cached_homology_rejects_stale_engine_version(tmp_path):
    cached_homology("rp(n=3)", cache_dir=tmp_path)
    path = _cache_path(tmp_path, "rp(n=3)")
    doc = json.loads(path.read_text("utf-8"))
    doc["engine_version"] = "0"
    doc["graded_group"] = GradedGroup.of(Z(9)).to_json()
    path.write_text(json.dumps(doc), "utf-8")
    # stale version is ignored and overwritten with a fresh computation
    assert cached_homology("rp(n=3)", cache_dir=tmp_path) == RP3_HOMOLOGY
    assert (
        json.loads(path.read_text("utf-8"))["engine_version"] == ENGINE_VERSION
    )


def test_cached_homology_env_var_and_flag_priority(tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    flag_dir = tmp_path / "flag"
    monkeypatch.setenv("REPSPACE_CACHE", str(env_dir))
    cached_homology("sphere(n=2)")
    assert _cache_path(env_dir, "sphere(n=2)").exists()
    cached_homology("sphere(n=3)", cache_dir=flag_dir)
    assert _cache_path(flag_dir, "sphere(n=3)").exists()
    assert not _cache_path(env_dir, "sphere(n=3)").exists()


def test_cached_homology_without_cache(monkeypatch):
    monkeypatch.delenv("REPSPACE_CACHE", raising=False)
    assert cached_homology("sphere(n=0)") == GradedGroup.of(Z(2))
