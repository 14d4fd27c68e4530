import json
import random
from fractions import Fraction

import pytest

from qrt.certify import (
    BUILTIN,
    Certificate,
    CertificateFormatError,
    bound_values,
    builtin_certificate,
    builtin_certificates,
    uniqueness_identity_check,
    verify,
)
from qrt.density import t_inj
from qrt.flags import product_coefficients
from qrt.tournamenton import random_regular_step, t_step

TINY = Fraction(1, 10**6)


def _sym(cert, q, i, j, delta):
    cert = cert.with_entry(q, i, j, delta)
    return cert.with_entry(q, j, i, delta) if i != j else cert


@pytest.fixture(scope="module")
def certs():
    return builtin_certificates()


def test_builtins_verify(certs):
    assert set(certs) == set(BUILTIN)
    dims = {"h10": [1, 1], "h11": [1, 1], "h13": [2], "h14": [3, 2]}
    for name, cert in certs.items():
        rep = verify(cert)
        assert rep.passed, rep.first_failure()
        assert rep.minimum >= cert.constant
        assert [f.kernel_dim for f in rep.families] == dims[name]
        assert all(f.kernel_ok is not False for f in rep.families)


def test_statements(certs):
    assert verify(certs["h10"]).statement == "256*H10 + 8*C3 <= 5/4"
    assert verify(certs["h13"]).statement == "1024/7*H13 + 8*TT3 >= 8/7"


def test_psd_spot_check(certs):
    rng = random.Random(99)
    for cert in certs.values():
        for cf in cert.families:
            n = len(cf.rows)
            for _ in range(100):
                v = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n)]
                q = sum(v[i] * cf.rows[i][j] * v[j] for i in range(n) for j in range(n))
                assert q >= 0


def test_bound_values_by_definition(certs):
    # c(J) = t_inj(target, J) - sum_q sum_ij A_ij b(F_i, F_j; J), recomputed naively for two classes
    cert = certs["h13"]
    values = bound_values(cert)
    for j in list(values)[:: max(1, len(values) // 2)]:
        c = t_inj(cert.target, j)
        for cf in cert.families:
            for a, fa in enumerate(cf.family):
                for b, fb in enumerate(cf.family):
                    c -= cf.rows[a][b] * product_coefficients(fa, fb, cert.m)[j]
        assert c == values[j]


def test_dropping_a_family_fails(certs):
    for cert in certs.values():
        for q in range(len(cert.families)):
            assert not verify(cert.without_family(q)).passed


@pytest.mark.parametrize("name", BUILTIN)
def test_perturbing_any_entry_fails(certs, name):
    cert = certs[name]
    for q, cf in enumerate(cert.families):
        n = len(cf.rows)
        for i in range(n):
            for j in range(i, n):
                for delta in (TINY, -TINY):
                    assert not verify(_sym(cert, q, i, j, delta)).passed, (q, i, j, delta)


def test_asymmetric_entry_reported(certs):
    rep = verify(certs["h10"].with_entry(0, 0, 1, 1))
    assert not rep.passed
    assert "not symmetric at (1,2)" in rep.first_failure()


def test_json_round_trip(certs):
    for cert in certs.values():
        text = cert.to_json()
        again = Certificate.from_json(text)
        assert again.to_json() == text
        assert verify(again).passed


def test_format_errors(certs):
    base = json.loads(certs["h10"].to_json())
    cases = []
    d = json.loads(json.dumps(base)); del d["constant"]; cases.append((d, "$"))
    d = json.loads(json.dumps(base)); d["constant"] = "x/y"; cases.append((d, "$.constant"))
    d = json.loads(json.dumps(base)); d["families"][0]["matrix"][1][2] = 1.5
    cases.append((d, "$.families[0].matrix[1][2]"))
    d = json.loads(json.dumps(base)); d["families"][0]["matrix"].pop(); cases.append((d, "$.families[0].matrix"))
    d = json.loads(json.dumps(base)); d["families"][0]["flags"][0] = "f2:t3:111"
    cases.append((d, "$.families[0].flags[0]"))
    d = json.loads(json.dumps(base)); d["m"] = 9; cases.append((d, "$.m"))
    for data, where in cases:
        with pytest.raises(CertificateFormatError) as err:
            Certificate.from_dict(data)
        assert str(err.value).startswith(where + ":"), str(err.value)
    with pytest.raises(CertificateFormatError):
        Certificate.from_json("{not json")
    with pytest.raises(KeyError):
        builtin_certificate("h12")


def test_bounds_hold_on_regular_tournamentons(certs):
    rng = random.Random(31)
    ws = [random_regular_step(rng, max_blocks=5) for _ in range(25)]
    for cert in certs.values():
        for w in ws:
            val = sum(c * t_step(t, w) for c, t in cert.target.terms)
            assert val >= cert.constant


def test_uniqueness_identity():
    assert uniqueness_identity_check(count=100, seed=2024)
