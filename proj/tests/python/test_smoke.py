# Copyright 2026 The qselftest Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import os
from pathlib import Path

import numpy as np
import pytest

import qselftest as q

FIXTURES = Path(os.environ.get("QST_FIXTURE_DIR", Path(__file__).resolve().parents[1] / "fixtures"))


def fixture(name):
    return str(FIXTURES / name)


def epr_model():
    m = q.QuantumModel()
    m.scenario = q.Scenario(2, 2, 2, 2)
    m.dimA = m.dimB = 2
    z = np.diag([1.0, -1.0]).astype(complex)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    eye = np.eye(2, dtype=complex)
    binary = lambda obs: [(eye + obs) / 2, (eye - obs) / 2]
    r = 1 / math.sqrt(2)
    m.M = [binary(z), binary(x)]
    m.N = [binary(r * (z + x)), binary(r * (z - x))]
    m.psi = np.array([r, 0, 0, r], dtype=complex)
    return m


def test_correlation_matches_closed_form():
    p = q.correlation_of(epr_model()).to_array()
    assert p.shape == (2, 2, 2, 2)
    for a in range(2):
        for b in range(2):
            for x in range(2):
                for y in range(2):
                    sign = 1 if (a + b + x * y) % 2 == 0 else -1
                    assert abs(p[a, b, x, y] - (1 + sign / math.sqrt(2)) / 4) < 1e-12


def test_validation_reports_violations():
    m = epr_model()
    assert q.validate_quantum_model(m) == []
    m.M = [[np.eye(2, dtype=complex), np.eye(2, dtype=complex)], m.M[1]]
    (invariant, location, residual), *_ = q.validate_quantum_model(m)
    assert invariant == "POVM completeness"
    assert location == "M[0]"
    assert residual == pytest.approx(1.0)


def test_xor_certificate_and_schmidt():
    c, rank, unbiased = q.xor_of(q.correlation_of(epr_model()))
    r = 1 / math.sqrt(2)
    assert np.allclose(c, [[r, r], [r, -r]], atol=1e-12)
    assert rank == 2 and unbiased
    cert = q.xor_selftest_certificate(q.read_correlation(fixture("chsh.corr.json")), True)
    assert cert["summary"] == "commuting operator self-test: granted (rank 2, unbiased, extremality asserted)"
    sd = q.schmidt_decompose(q.read_model(fixture("exA_S.model.json")).psi, 3, 3)
    assert sd.rank == 3
    assert np.allclose(sd.coefficients, [r, 0.5, 0.5])


def test_dilation_round_trip():
    ideal = epr_model()
    source = q.tensor_with_aux(ideal, np.array([math.sqrt(0.7), 0, 0, math.sqrt(0.3)], dtype=complex), 2, 2)
    w = q.find_local_dilation(source, ideal)
    report = q.verify_local_dilation(source, ideal, w)
    assert report.passed and report.max_residual < 1e-8
    with pytest.raises(q.NotDilatable):
        q.find_local_dilation(q.read_model(fixture("exA_S.model.json")), q.read_model(fixture("exA_Shat.model.json")))


def test_naimark_and_irreps():
    g = np.array([[2, 1], [1, 1]], dtype=complex) / 3
    n = q.naimark_dilate([g, np.eye(2) - g])
    assert n.reproduction_residual < 1e-12
    z = np.diag([1.0, -1.0]).astype(complex)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    d = q.irrep_decompose([np.kron(z, np.eye(2)), np.kron(x, np.eye(2))])
    assert [(b.irrep_dim, b.multiplicity) for b in d.blocks] == [(2, 2)]
    assert d.commutant_dimension() == len(q.commutant_basis([np.kron(z, np.eye(2)), np.kron(x, np.eye(2))]))


def test_binary_round_raises_on_violation():
    with pytest.raises(q.LemmaViolated):
        q.binary_round(q.read_model(fixture("binary_violating.model.json")))


def test_tilted_sos():
    model, value = q.optimize_tilted_chsh(0.0)
    assert abs(value - 2 * math.sqrt(2)) < 1e-6
    cert = q.verify_tilted_sos(model, 0.0)
    assert cert["optimal"]
    assert max(cert["identity_defects"]) < 1e-8


def test_cli_in_process():
    code, report = q.run("state-equal", fixture("exA_S.model.json"), fixture("exA_Shat.model.json"))
    assert code == 0
    assert report["result"]["equal"] is True
    code, report = q.run("validate", "/nonexistent.json")
    assert code == 2
    assert "error" in report
