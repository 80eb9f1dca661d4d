from __future__ import annotations

import json
from pathlib import Path

from implang.cli import main
from tests.conftest import ASSETS


MBPP = str(ASSETS / "mbpp_962.imp")


def run_cli(capsys, *argv) -> tuple[int, str]:
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_run_prints_final_store(capsys):
    code, out = run_cli(capsys, "run", MBPP, "--style", "sos")
    assert code == 0
    assert "sum -> 18" in out


def test_run_k_style_json(capsys):
    code, out = run_cli(capsys, "run", MBPP, "--style", "k", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["final_store"]["sum"] == 18
    assert payload["outcome"] == "normal"


def test_run_trace_xml_shape(capsys, tmp_path):
    loop = tmp_path / "loop.imp"
    loop.write_text("int i;\ni = 0;\nwhile (i < 2)\n{\n    halt;\n};\n")
    code, out = run_cli(capsys, "run", str(loop), "--trace", "xml")
    assert code == 0
    assert out.startswith("<answer>")
    assert "<rule>67</rule>" in out


def test_run_debug_trace(capsys):
    code, out = run_cli(capsys, "run", MBPP, "--trace", "debug")
    assert code == 0
    assert out.splitlines()[0].startswith("step 1: rule 3; sigma = ")


def test_missing_file_is_input_error(capsys):
    assert main(["run", "no-such-file.imp"]) == 2


def test_parse_error_is_input_error(tmp_path):
    bad = tmp_path / "bad.imp"
    bad.write_text("int ;")
    assert main(["run", str(bad)]) == 2


def test_usage_error_exit_code():
    assert main(["run"]) == 1


def test_fuzz_count_zero(capsys, tmp_path):
    code, out = run_cli(capsys, "fuzz", "--count", "0", "--out", str(tmp_path / "c"))
    assert code == 0
    manifest = json.loads((tmp_path / "c" / "manifest.json").read_text())
    assert manifest["count"] == 0 and manifest["programs"] == []


def test_fuzz_writes_corpus(capsys, tmp_path):
    out_dir = tmp_path / "corpus"
    code, _ = run_cli(capsys, "fuzz", "--count", "3", "--seed", "5", "--out", str(out_dir))
    assert code == 0
    files = sorted(p.name for p in out_dir.glob("*.imp"))
    assert files == ["fuzz_0.imp", "fuzz_1.imp", "fuzz_2.imp"]


def test_metrics_single_file(capsys):
    code, out = run_cli(capsys, "metrics", MBPP)
    assert code == 0
    record = json.loads(out)
    assert record["loc"] == 19 and record["dep_degree"] == 12


def test_mutate_swap(capsys, tmp_path):
    src = tmp_path / "p.imp"
    src.write_text("int a;\na = a + 1;\n")
    code, out = run_cli(capsys, "mutate", str(src), "--kind", "swap")
    assert code == 0
    assert "a = a - 1;" in out


def test_mutate_obf(capsys, tmp_path):
    src = tmp_path / "p.imp"
    src.write_text("int a;\na = a + 1;\n")
    code, out = run_cli(capsys, "mutate", str(src), "--kind", "obf")
    assert code == 0
    assert "\U00010550" in out


def test_gen_tasks_then_score_round_trip(capsys, tmp_path):
    from implang.scoring import gold_response_text
    from implang.tasks import TaskInstance

    programs = tmp_path / "programs"
    programs.mkdir()
    (programs / "p0.imp").write_text("int a;\na = 1;\na = a + 2;\n")
    (programs / "p1.imp").write_text(Path(MBPP).read_text())
    out_dir = tmp_path / "tasks"
    code, out = run_cli(
        capsys, "gen-tasks", str(programs), "--task", "rule",
        "--style", "sos", "--out", str(out_dir),
    )
    assert code == 0
    dataset = out_dir / "rule.sos.std.jsonl"
    instances = [TaskInstance.from_json(l) for l in dataset.read_text().splitlines()]
    responses = tmp_path / "responses.jsonl"
    responses.write_text(
        "\n".join(
            json.dumps({"instance_id": i.instance_id,
                        "response_text": gold_response_text(i)})
            for i in instances
        )
    )
    report_path = tmp_path / "report.json"
    code, out = run_cli(
        capsys, "score", "--task", "rule", "--gold", str(dataset),
        "--responses", str(responses), "--report", str(report_path),
        "--csv", str(tmp_path / "rates.csv"),
    )
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["accuracy"] == 1.0
    assert (tmp_path / "rates.csv").read_text().startswith("category,")


def test_gen_tasks_trace_writes_xml_files(capsys, tmp_path):
    programs = tmp_path / "programs"
    programs.mkdir()
    (programs / "p0.imp").write_text("int a;\na = 1;\n")
    out_dir = tmp_path / "tasks"
    code, _ = run_cli(
        capsys, "gen-tasks", str(programs), "--task", "trace",
        "--style", "k", "--out", str(out_dir),
    )
    assert code == 0
    xmls = list(out_dir.glob("*.xml"))
    assert len(xmls) == 1
    assert xmls[0].read_text().startswith("<answer>")
