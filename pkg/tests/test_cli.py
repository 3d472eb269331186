import io
import json
import math

import pytest

from betacharpoly.cli import main


def run(argv):
    out = io.StringIO()
    status = main(argv, stdout=out)
    return status, out.getvalue()


def test_constants_gamma():
    status, text = run(["constants", "--name", "Gamma", "--beta", "2", "--n", "1"])
    assert status == 0
    payload = json.loads(text)
    assert payload["value_re"] == pytest.approx(math.sqrt(2 * math.pi))
    assert payload["config"]["subcommand"] == "constants"
    assert payload["config"]["options"]["name"] == "Gamma"


def test_expect_laguerre():
    status, text = run(["expect", "--ensemble", "l", "--N", "1", "--beta", "2", "--s", "0.5"])
    assert status == 0
    payload = json.loads(text)
    assert payload["K_re"] == pytest.approx(0.5)
    assert payload["method"] == "exact_series"
    assert payload["config"]["seed"] == 0


def test_output_is_reproducible():
    argv = ["expect", "--ensemble", "j", "--N", "3", "--beta", "1", "--s", "0.4", "--mc", "2000", "--seed", "5"]
    assert run(argv) == run(argv)


def test_limit_check_csv():
    status, text = run(
        [
            "limit-check",
            "--ensemble", "l",
            "--regime", "hard",
            "--n", "1",
            "--beta", "2",
            "--N-list", "20,40,80",
            "--s", "1",
            "--format", "csv",
        ]
    )
    assert status == 0
    lines = text.splitlines()
    assert lines[0].startswith("# config: ")
    assert json.loads(lines[0][len("# config: "):])["fmt"] == "csv"
    assert lines[1] == "N,point,rescaled_re,rescaled_im,rel_error"
    rows = [line.split(",") for line in lines[2:5]]
    assert [row[0] for row in rows] == ["20", "40", "80"]
    errors = [float(row[-1]) for row in rows]
    assert errors[0] > errors[1] > errors[2]
    assert lines[-1].startswith("# summary: ")
    assert "fitted_order" in json.loads(lines[-1][len("# summary: "):])


def test_library_error_exit_status():
    status, text = run(["expect", "--ensemble", "l", "--N", "0", "--beta", "2", "--s", "0.5"])
    assert status == 1
    record = json.loads(text)["error"]
    assert record["kind"] == "domain_error"
    assert set(record) == {"kind", "module", "message", "details"}


def test_config_error_exit_status(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("colour: blue\n")
    status, text = run(["constants", "--name", "Gamma", "--beta", "2", "--n", "1", "--config", str(path)])
    assert status == 1
    assert json.loads(text)["error"]["module"] == "config"


def test_missing_constant_arguments():
    status, text = run(["constants", "--name", "W", "--beta", "2"])
    assert status == 1
    assert "--N" in json.loads(text)["error"]["message"]


def test_argument_errors_exit_with_two():
    with pytest.raises(SystemExit) as info:
        main(["expect", "--ensemble", "l", "--N", "3"], stdout=io.StringIO())
    assert info.value.code == 2


def test_expect_at_origin_is_xi():
    status, text = run(["expect", "--ensemble", "l", "--N", "1", "--beta", "2", "--lambda1", "0", "--s", "0"])
    assert status == 0
    assert json.loads(text)["K_re"] == pytest.approx(1.0)
