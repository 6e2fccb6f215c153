import json
import math

import pytest

import isingdual as idl


def test_version():
    assert idl.__version__ == "0.1.0"


def test_models_and_weights():
    g = idl.build_grid_model(2, [1.0] * 4)
    assert g.site_count == 4 and g.edge_count == 4
    assert idl.log_weight(g, [0, 0, 0, 0]) == 4.0
    assert idl.energy(g, [1, 0, 0, 0]) == 0.0
    assert idl.kernel_value(0.75, 0, 1) == pytest.approx(math.exp(-0.75))
    with pytest.raises(ValueError):
        idl.build_grid_model(3, [1.0] * 5)
    j = idl.sample_couplings_uniform(10, 1.0, 1.5, 7)
    assert len(j) == 180 and all(1.0 <= v <= 1.5 for v in j)


def test_exact_oracles_agree():
    g = idl.build_grid_model(2, [1.0] * 4)
    z = math.log(4 * math.cosh(4) + 12)
    assert idl.brute_force_ln_Z(g) == pytest.approx(z, rel=1e-14)
    assert idl.brute_force_dual_ln_Z(g) == pytest.approx(z, rel=1e-14)
    assert idl.transfer_matrix_2d_ln_Z(g) == pytest.approx(z, rel=1e-14)
    ring = idl.build_chain_model(3, "periodic", [1.0, 1.0, 1.0])
    assert idl.closed_form_ln_Z(ring) == pytest.approx(math.log(8 * (math.cosh(1) ** 3 + math.sinh(1) ** 3)))


def test_dual_objects():
    g = idl.build_grid_model(3, [1.0] * 12)
    dual = idl.build_modified_dual(g)
    assert dual.face_count == 4
    w = idl.expand_faces(dual, [1, 1, 0, 0])
    assert sum(w) == 6
    f = idl.dft_pair_kernel(0.75)
    assert math.exp(f.log_even) == pytest.approx(4 * math.cosh(0.75))


def test_chains_are_deterministic():
    g = idl.build_grid_model(5, [1.25] * 40)
    a = idl.run_chains(g, "uniform", "dual", samples=20000, chains=3, seed=4, stride=5000)
    b = idl.run_chains(g, "uniform", "dual", samples=20000, chains=3, seed=4, stride=5000, threads=2)
    assert [p.ln_z for p in a] == [p.ln_z for p in b]
    exact = idl.transfer_matrix_2d_ln_Z(g) / (25 * math.log(2))
    for p in a:
        assert abs(p.final_per_site - exact) < 5 * p.per_site_std_error


def test_verify_and_config(tmp_path):
    passed, worst, comparisons = idl.verify(max_m=3, max_n=8, trials=3)
    assert passed and worst < 1e-9 and comparisons > 0
    passed, _, _ = idl.verify(max_m=3, max_n=4, trials=2, tamper_bits=1.0)
    assert not passed

    cfg = {"model": {"type": "grid", "size": 5, "coupling": {"constant": 0.75}},
           "method": {"exact": "transfer"},
           "output": {"path": str(tmp_path / "o.csv")}}
    manifest = json.loads(idl.run_config(json.dumps(cfg)))
    assert manifest["results"][0]["per_site_log2_Z"] == pytest.approx(1.8023671706, abs=1e-9)
    with pytest.raises(idl.ConfigError):
        idl.run_config(json.dumps({"model": {}, "method": {}}))
