import json

from driftlab.cli import main
from driftlab.enlargement import validate_enlargement
from driftlab.models import worked_four_point, worked_six_point
from driftlab.rational import Q, rat
from driftlab.serialize import (
    basis_to_json,
    dumps,
    instance_from_json,
    instance_to_json,
    process_to_json,
)


def write(path, doc):
    path.write_text(dumps(doc), encoding="utf-8")
    return str(path)


def read(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_validate_basis(tmp_path):
    six = worked_six_point()
    inp = write(tmp_path / "b.json", basis_to_json(six["eb"].space, six["eb"].base))
    out = tmp_path / "r.json"
    assert main(["validate", "--input", inp, "--output", str(out)]) == 0
    assert read(out)["ok"] is True


def test_validate_instance(tmp_path):
    six = worked_six_point()
    inp = write(tmp_path / "i.json", instance_to_json(six["eb"]))
    out = tmp_path / "r.json"
    assert main(["validate", "--input", inp, "--output", str(out)]) == 0
    assert read(out)["ok"] is True


def test_validate_flags_broken_instance(tmp_path):
    six = worked_six_point()
    doc = instance_to_json(six["eb"])
    doc["prob"] = ["1/2"] * 6  # mass 3, not 1
    inp = write(tmp_path / "bad.json", doc)
    out = tmp_path / "r.json"
    assert main(["validate", "--input", inp, "--output", str(out)]) == 3
    assert read(out)["ok"] is False


def test_schema_errors_exit_2(tmp_path):
    out = tmp_path / "r.json"
    assert main(["validate", "--output", str(out)]) == 2
    assert read(out)["error"] == "SCHEMA_ERROR"
    bad = tmp_path / "x.json"
    bad.write_text("{{{", encoding="utf-8")
    assert main(["validate", "--input", str(bad), "--output", str(out)]) == 2


def test_drift_command(tmp_path):
    six = worked_six_point()
    doc = instance_to_json(six["eb"])
    X = six["asset"]  # positive martingale on this instance
    doc["process"] = process_to_json(X)
    inp = write(tmp_path / "d.json", doc)
    out = tmp_path / "r.json"
    assert main(["drift", "--input", inp, "--output", str(out)]) == 0
    got = read(out)["drift"]
    assert got["dim"] == 1
    from driftlab.enlargement import drift_operator
    want = drift_operator(six["eb"], X)
    import driftlab.serialize as ser
    assert ser.process_from_json(got, n=6, ticks=1) == want


def test_factors_command(tmp_path):
    six = worked_six_point()
    inp = write(tmp_path / "i.json", instance_to_json(six["eb"]))
    out = tmp_path / "r.json"
    assert main(["factors", "--input", inp, "--output", str(out)]) == 0
    rep = read(out)
    assert rep["support"]["ok"] is True
    assert rep["positivity"] is True
    assert rep["width"] == 2


def test_check_viability_six_point(tmp_path):
    six = worked_six_point()
    inp = write(tmp_path / "i.json", instance_to_json(six["eb"]))
    out = tmp_path / "r.json"
    assert main(["check-viability", "--input", inp, "--output", str(out)]) == 0
    rep = read(out)
    assert rep["verdict"] is True
    vals = {v for row in rep["deflator"]["values"] for vs in row for v in vs}
    assert vals == {"1/1", "3/4", "3/2"}


def test_check_viability_four_point(tmp_path):
    four = worked_four_point()
    inp = write(tmp_path / "i.json", instance_to_json(four["eb"]))
    out = tmp_path / "r.json"
    assert main(["check-viability", "--input", inp, "--output", str(out)]) == 0
    rep = read(out)
    assert rep["verdict"] is False
    assert rep["witness"]["atom"] == [3]
    assert rep["witness"]["certificate"]["status"] == "no-deflator"


def test_deflator_command(tmp_path):
    six = worked_six_point()
    doc = basis_to_json(six["eb"].space, six["eb"].base)
    doc["asset"] = process_to_json(six["asset"])
    inp = write(tmp_path / "a.json", doc)
    out = tmp_path / "r.json"
    assert main(["deflator", "--input", inp, "--output", str(out)]) == 0
    rep = read(out)
    assert rep["found"] is True
    assert "deflator" in rep
    assert rep["oracle"]["status"] == "deflator"


def test_verify_theorems_deterministic(tmp_path):
    a, b, c = (tmp_path / n for n in ("a.json", "b.json", "c.json"))
    argv = ["verify-theorems", "--seed", "9", "--instances", "16"]
    assert main(argv + ["--output", str(a)]) == 0
    assert main(argv + ["--output", str(b)]) == 0
    assert main(argv + ["--workers", "2", "--output", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()
    rep = read(a)
    assert rep["ok"] is True
    assert rep["instances"] == 16


def test_verify_theorems_forced(tmp_path):
    out = tmp_path / "f.json"
    assert main(["verify-theorems", "--seed", "4", "--instances", "8",
                 "--force-failure", "--output", str(out)]) == 0
    assert read(out)["force_failure"] is True


def test_generate_round_trips(tmp_path):
    out = tmp_path / "g.json"
    assert main(["generate", "--seed", "21", "--instances", "6",
                 "--output", str(out)]) == 0
    rep = read(out)
    assert len(rep["instances"]) == 6
    for doc in rep["instances"]:
        eb = instance_from_json(doc)
        assert validate_enlargement(eb).ok


def test_kernel_eval_accessible(tmp_path):
    doc = {"accessible": {
        "p": ["1/2", "1/2"],
        "pbar": ["3/4", "1/4"],
        "n_vals": [["1/1"], ["-1/1"]],
        "d_vals": ["0/1", "0/1"],
        "phi": ["1/2"],
        "weight": "1/1",
    }}
    inp = write(tmp_path / "k.json", doc)
    out = tmp_path / "r.json"
    assert main(["kernel-eval", "--input", inp, "--output", str(out)]) == 0
    rep = read(out)
    assert rep["kind"] == "accessible"
    assert [rat(v) for v in rep["values"]] == [Q(1, 3), Q(-1)]


def test_kernel_eval_rejects_tampered_data(tmp_path):
    doc = {"accessible": {
        "p": ["1/2", "1/2"],
        "pbar": ["1/4", "3/4"],  # tilt identity broken on purpose
        "n_vals": [["1/1"], ["-1/1"]],
        "d_vals": ["0/1", "0/1"],
        "phi": ["1/2"],
        "weight": "1/1",
    }}
    inp = write(tmp_path / "k.json", doc)
    out = tmp_path / "r.json"
    assert main(["kernel-eval", "--input", inp, "--output", str(out)]) == 3
    rep = read(out)
    assert rep["error"] == "DATA_INVARIANT_VIOLATED"


def test_kernel_eval_continuous(tmp_path):
    doc = {"continuous": {
        "base_coeff": ["1/1", "2/1"],
        "pair_rows": [["1/1", "0/1"], ["0/1", "3/1"]],
        "phi": ["1/2", "1/3"],
    }}
    inp = write(tmp_path / "c.json", doc)
    out = tmp_path / "r.json"
    assert main(["kernel-eval", "--input", inp, "--output", str(out)]) == 0
    rep = read(out)
    assert [rat(v) for v in rep["values"]] == [Q(3, 2), Q(3)]


def test_diagnose_series(tmp_path):
    levels = []
    for m in range(1, 6):
        top = 1.0 - 2.0 ** (-m)
        npts = 2 ** (m + 2) + 1
        t = [top * j / (npts - 1) for j in range(npts)]
        levels.append({"t": t, "y": [1.0 / (1.0 - v) ** 2 for v in t]})
    inp = write(tmp_path / "s.json", {"levels": levels})
    out = tmp_path / "r.json"
    assert main(["diagnose-series", "--input", inp, "--output", str(out)]) == 0
    rep = read(out)
    assert rep["approximate"] is True
    assert rep["verdict"] == "divergent"
