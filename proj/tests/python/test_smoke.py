import json
import os
import pathlib

import numpy as np
import pytest

import gpcpd

ROOT = pathlib.Path(__file__).resolve().parents[2]
FIXTURES = pathlib.Path(os.environ.get("GPCPD_FIXTURE_DIR", ROOT / "fixtures"))


def rel_resid(f, factors):
    return np.linalg.norm(f - gpcpd.expand(factors)) / np.linalg.norm(f)


def random_factors(dims, r, seed):
    rng = np.random.default_rng(seed)
    return [rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r)) for n in dims]


def test_expand_matches_einsum():
    a, b, c = random_factors((4, 3, 2), 3, 0)
    np.testing.assert_allclose(gpcpd.expand([a, b, c]), np.einsum("is,js,ks->ijk", a, b, c), rtol=1e-13)


def test_fixture_rank_and_decompose():
    f = gpcpd.read_tensor(str(FIXTURES / "rank4_4x4x3.json"))
    assert f.shape == (4, 4, 3)
    assert gpcpd.estimate_rank(f) == 4
    cp = gpcpd.decompose(f, 4, seed=7)
    assert rel_resid(f, cp) <= 1e-8
    assert gpcpd.cp_equivalent(cp, gpcpd.read_factors(str(FIXTURES / "rank4_4x4x3_factors.json")), 1e-6)
    assert gpcpd.cp_equivalent(cp, gpcpd.gevd_decompose(f, 4), 1e-6)


def test_reshaped_fixture():
    f = gpcpd.read_tensor(str(FIXTURES / "rank5_5x4x3x3.json"))
    assert rel_resid(f, gpcpd.decompose(f, 5, reshape=True)) <= 1e-8


def test_random_exact_roundtrip():
    factors = random_factors((9, 7, 5), 5, 3)
    f = gpcpd.expand(factors)
    assert gpcpd.cp_equivalent(gpcpd.decompose(f, 5), factors, 1e-6)


def test_sqrt_sum_spectrum_and_approximation():
    f = gpcpd.sqrt_sum_tensor()
    s = gpcpd.flattening_singular_values(f)
    assert abs(s[0] - 109.7393) < 1e-4
    res = gpcpd.approximate(f, 3, refine=True, max_iter=20000)
    assert res["resid_opt"] <= res["resid_gp"]
    assert res["resid_opt"] <= 2 * 1.3754e-2


def test_rank1_matrix_is_truncated_svd():
    m = random_factors((5, 4), 4, 9)
    a = gpcpd.expand(m)
    s = np.linalg.svd(a, compute_uv=False)
    x = gpcpd.expand(gpcpd.rank1_approx(a))
    assert np.linalg.norm(a - x) ** 2 == pytest.approx(np.sum(s[1:] ** 2), rel=1e-10)


def test_gen_instance_noise_norm():
    inst = gpcpd.gen_instance([6, 5, 4], 2, 1e-3, 4)
    assert np.linalg.norm(inst["e"]) == pytest.approx(1e-3, rel=1e-12)
    np.testing.assert_array_equal(inst["r"], gpcpd.gen_instance([6, 5, 4], 2, 1e-3, 4)["r"])


def test_errors_raise():
    f = gpcpd.sqrt_sum_tensor()
    with pytest.raises(gpcpd.GpcpdError, match="rank_bound"):
        gpcpd.decompose(f, 9)
    with pytest.raises(gpcpd.GpcpdError):
        gpcpd.read_tensor("/nonexistent.json")


def test_file_roundtrip(tmp_path):
    t = np.arange(24, dtype=complex).reshape(2, 3, 4) / 7 + 1j / 3
    gpcpd.write_tensor(str(tmp_path / "t.json"), t)
    np.testing.assert_array_equal(gpcpd.read_tensor(str(tmp_path / "t.json")), t)


def test_bench_report_schema():
    jsonschema = pytest.importorskip("jsonschema")
    schema = json.loads((ROOT / "schema" / "benchreport-v1.schema.json").read_text())
    rep = gpcpd.bench([8, 7, 6], 3, [1e-2, 1e-4], trials=2, seed=5, method="both")
    jsonschema.validate(rep, schema)
    assert len(rep["records"]) == 4
    assert all(r["rho_opt"] <= 1.1 for r in rep["records"])
    assert all(c["completed"] == 2 for c in rep["cells"])
    empty = gpcpd.bench([6, 5, 4], 2, [1e-3], trials=0)
    jsonschema.validate(empty, schema)
    assert empty["records"] == []
