import cmath
import math

import numpy as np
import pytest

import expsum


def test_gauss_sum_modulus():
    for p in (5, 7, 11):
        for k in range(1, p - 1):
            assert abs(abs(expsum.gauss_sum(p, p - 1, k)) - math.sqrt(p)) < 1e-9


def test_quadratic_gauss_sum_value():
    r = expsum.eval_sum(3, 1, f="x1^2")
    assert r["points"] == 3
    assert abs(r["value"] - 1j * math.sqrt(3)) < 1e-12
    assert r["exact"] == [1, 2, 0]


def test_linear_space_sum():
    r = expsum.eval_sum(5, 3, variety=["x1", "x2"], h=[1, 0, 0])
    assert abs(r["value"] - 5) < 1e-12


def test_grid_matches_single_sums():
    g = expsum.complete_grid(5, 2, variety=["x1^2 + x2^2 - 1"], f="x1*x2")
    assert g.shape == (5, 5)
    for h1 in range(5):
        for h2 in range(5):
            r = expsum.eval_sum(5, 2, variety=["x1^2 + x2^2 - 1"], f="x1*x2", h=[h1, h2])
            assert abs(g[h1, h2] - r["value"]) < 1e-9


def test_parseval():
    g = expsum.complete_grid(7, 2, variety=["x2^2 - x1^3 - 1"])
    points = expsum.eval_sum(7, 2, variety=["x2^2 - x1^3 - 1"])["value"].real
    assert np.sum(np.abs(g) ** 2) == pytest.approx(49 * points)


def test_verify_catalog():
    reports = expsum.verify_catalog("diagonal_quadratic", 7, n=3)
    assert len(reports) == 1
    assert reports[0]["pass"]
    assert reports[0]["schema"] == 1


def test_kloosterman_weights():
    prof = expsum.weights(5, 6, weight="kloosterman")
    assert prof["rank"] == 2
    assert prof["weights"] == [1.0, 1.0]
    for root in prof["roots"]:
        assert abs(complex(root["re"], root["im"])) == pytest.approx(math.sqrt(5), abs=1e-6)


def test_family_identity():
    r = expsum.family_identity(1, 3)
    assert r["checked"] == 27
    assert r["mismatches"] == 0


def test_errors():
    with pytest.raises(expsum.ParseError):
        expsum.eval_sum(5, 1, f="x^^2")
    with pytest.raises(expsum.DomainError):
        expsum.eval_sum(6, 1, f="x1")
    with pytest.raises(expsum.RankError):
        expsum.weights(5, 3, weight="kloosterman")
    assert issubclass(expsum.CapExceeded, expsum.ExpsumError)


def test_cli_exit_codes():
    code, out, _ = expsum.run_cli(["sum", "--p", "5", "--variety", "x1,x2", "--n", "3", "--h", "1,0,0"])
    assert code == 0
    assert "integer = 5" in out
    assert expsum.run_cli(["sum", "--p", "5", "--f", "x^^2"])[0] == 2
    assert expsum.run_cli(["weights", "--p", "5", "--weight", "kloosterman", "--N", "3"])[0] == 5
