"""Command line behavior: the documented exit codes, the teaching pipeline,
and byte-level determinism of generated artifacts."""

import json
import subprocess
import sys

import pytest

from gridloom.cli import main

CHECKER = "AB\nBA\n"


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main([str(a) for a in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return _run


@pytest.fixture
def checker_file(tmp_path):
    path = tmp_path / "checker.txt"
    path.write_text(CHECKER)
    return path


def _init_trained(run, tmp_path, checker_file, name="sess"):
    sess = tmp_path / name
    assert run("session", "init", "--session", sess, "--n", 2)[0] == 0
    assert run("session", "add-positive", "--session", sess, checker_file)[0] == 0
    assert run("train", "--session", sess)[0] == 0
    return sess


# -- exit codes ---------------------------------------------------------------


def test_usage_errors_exit_1(run):
    assert run()[0] == 1
    assert run("no-such-command")[0] == 1
    assert run("session", "init")[0] == 1  # --session is required
    code, _, err = run(
        "session", "crop-negative", "--session", "x", "--from", "s0001",
        "--rect", "1,2,3",
    )
    assert code == 1
    assert "rect" in err


def test_help_exits_0(run):
    code, out, _ = run("--help")
    assert code == 0
    assert "session" in out and "generate" in out


def test_data_errors_exit_2(run, tmp_path, checker_file):
    sess = tmp_path / "sess"
    # session directory does not exist yet
    code, _, err = run("train", "--session", sess)
    assert code == 2 and "error:" in err

    assert run("session", "init", "--session", sess, "--n", 2)[0] == 0
    # double init
    code, _, err = run("session", "init", "--session", sess)
    assert code == 2 and "already exists" in err
    # missing example file
    code, _, err = run(
        "session", "add-positive", "--session", sess, tmp_path / "nope.png"
    )
    assert code == 2
    # training without positives
    code, _, err = run("train", "--session", sess)
    assert code == 2 and "positive" in err

    assert run("session", "add-positive", "--session", sess, checker_file)[0] == 0
    # generating before training
    code, _, err = run("generate", "--session", sess)
    assert code == 2
    # cropping a sample that does not exist
    assert run("train", "--session", sess)[0] == 0
    code, _, err = run(
        "session", "crop-negative", "--session", sess, "--from", "s0404",
        "--rect", "0,0,2,3",
    )
    assert code == 2

    # negative example below the minimum size
    tiny = tmp_path / "tiny.txt"
    tiny.write_text("AB\n")
    code, _, err = run("session", "add-negative", "--session", sess, tiny)
    assert code == 2 and "negative example" in err


def test_exhausted_portfolio_exits_3(run, tmp_path, checker_file):
    sess = _init_trained(run, tmp_path, checker_file)
    # a checkerboard cannot tile an odd torus: every sample contradicts
    code, out, err = run(
        "generate", "--session", sess, "--count", 2, "--seed", 1,
        "--width", 5, "--height", 5, "--max-restarts", 1,
    )
    assert code == 3
    assert "exhausted" in err
    assert out.count("contradiction") == 2


# -- pipeline -----------------------------------------------------------------


def test_teaching_pipeline(run, tmp_path, checker_file):
    sess = tmp_path / "sess"
    code, out, _ = run("session", "init", "--session", sess, "--n", 2)
    assert code == 0 and "initialized" in out

    code, out, _ = run("session", "add-positive", "--session", sess, checker_file)
    assert code == 0 and out.startswith("added e0001 (positive, 2x2)")

    code, out, _ = run("train", "--session", sess)
    assert code == 0
    assert "iteration 1" in out
    assert "patterns" in out and "valid triples" in out
    digest_line = [l for l in out.splitlines() if l.startswith("validity digest ")]
    assert len(digest_line) == 1

    code, out, _ = run(
        "generate", "--session", sess, "--count", 2, "--seed", 7,
        "--width", 4, "--height", 4,
    )
    assert code == 0
    assert out.count("status=solved") == 2
    assert "wrote" in out
    assert (sess / "samples" / "s0001.txt").exists()

    code, out, _ = run(
        "session", "crop-negative", "--session", sess, "--from", "s0001",
        "--rect", "0,0,2,3",
    )
    assert code == 0 and "added e0002 (negative, 2x3 crop of s0001)" in out

    code, out, _ = run("train", "--session", sess)
    assert code == 0 and "iteration 2" in out

    code, out, _ = run("inspect", "diff", "--session", sess, "--a", 1, "--b", 2)
    assert code == 0
    assert "added 0" in out


def test_train_flag_overrides(run, tmp_path):
    stripes = tmp_path / "stripes.txt"
    stripes.write_text("AAB\nABB\nABA\n")
    sess = tmp_path / "sess"
    assert run("session", "init", "--session", sess, "--n", 2)[0] == 0
    assert run("session", "add-positive", "--session", sess, stripes)[0] == 0
    assert run("train", "--session", sess)[0] == 0
    base = json.loads((sess / "trained" / "validity.json").read_text())
    assert base["strategy"] == "mgg-neg"

    code, out, _ = run("train", "--session", sess, "--strategy", "lgg")
    assert code == 0
    doc = json.loads((sess / "trained" / "validity.json").read_text())
    assert doc["strategy"] == "lgg"
    assert len(doc["triples"]) < len(base["triples"])

    code, out, _ = run("train", "--session", sess, "--symmetry", "rotations")
    assert code == 0
    doc = json.loads((sess / "trained" / "catalog.json").read_text())
    assert len(doc["patterns"]) > len(
        json.loads((sess / "trained" / "validity-0001.json").read_text())["patterns"]
    )


# -- inspect diff -------------------------------------------------------------


@pytest.fixture
def diffable_session(run, tmp_path, checker_file):
    sess = _init_trained(run, tmp_path, checker_file)
    stripes = tmp_path / "stripes.txt"
    stripes.write_text("AAB\nABB\nABA\n")
    assert run("session", "add-positive", "--session", sess, stripes)[0] == 0
    assert run("train", "--session", sess)[0] == 0
    return sess


def test_inspect_diff_text_and_json(run, diffable_session):
    sess = diffable_session
    code, out, _ = run("inspect", "diff", "--session", sess, "--a", 1, "--b", 2)
    assert code == 0
    assert out.splitlines()[0].startswith("added ")
    assert "removed 0" in out

    code, out, _ = run(
        "inspect", "diff", "--session", sess, "--a", 1, "--b", 2, "--json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["removed"] == []
    assert len(doc["added"]) > 0


def test_inspect_diff_accepts_file_paths(run, diffable_session):
    sess = diffable_session
    a = sess / "trained" / "validity-0001.json"
    b = sess / "trained" / "validity-0002.json"
    code, out_by_file, _ = run("inspect", "diff", "--a", a, "--b", b, "--json")
    assert code == 0
    code, out_by_iter, _ = run(
        "inspect", "diff", "--session", sess, "--a", 1, "--b", 2, "--json"
    )
    assert code == 0
    assert json.loads(out_by_file) == json.loads(out_by_iter)

    # iteration numbers make no sense without a session
    code, _, err = run("inspect", "diff", "--a", 1, "--b", 2)
    assert code == 2 and "--session" in err


# -- determinism --------------------------------------------------------------


def test_generated_samples_are_byte_identical(run, tmp_path, checker_file):
    blobs = []
    for name in ("one", "two"):
        sess = _init_trained(run, tmp_path, checker_file, name=name)
        code, out, _ = run(
            "generate", "--session", sess, "--count", 2, "--seed", 42,
            "--width", 6, "--height", 4,
        )
        assert code == 0
        blobs.append(
            {
                p.name: p.read_bytes()
                for p in sorted((sess / "samples").iterdir())
            }
        )
    assert blobs[0] == blobs[1]
    assert set(blobs[0]) == {"s0001.txt", "s0001.json", "s0002.txt", "s0002.json"}


def test_module_entry_point(tmp_path, checker_file):
    sess = tmp_path / "sess"
    cli = [sys.executable, "-m", "gridloom"]
    subprocess.run(
        cli + ["session", "init", "--session", str(sess), "--n", "2"],
        check=True, capture_output=True,
    )
    subprocess.run(
        cli + ["session", "add-positive", "--session", str(sess), str(checker_file)],
        check=True, capture_output=True,
    )
    out = subprocess.run(
        cli + ["train", "--session", str(sess)],
        check=True, capture_output=True, text=True,
    ).stdout
    assert "iteration 1" in out
    bad = subprocess.run(
        cli + ["train", "--session", str(tmp_path / "missing")],
        capture_output=True, text=True,
    )
    assert bad.returncode == 2


def test_serve_mounts_ui_dir(run, tmp_path, monkeypatch):
    import uvicorn

    ui = tmp_path / "dist"
    ui.mkdir()
    (ui / "index.html").write_text("<!doctype html><title>ok</title>")
    captured = {}
    monkeypatch.setattr(
        uvicorn, "run", lambda app, **kw: captured.update(app=app, **kw)
    )
    code, _, _ = run(
        "serve", "--session-root", tmp_path / "root", "--port", 8123,
        "--ui-dir", ui,
    )
    assert code == 0
    assert captured["port"] == 8123
    routes = {getattr(r, "path", None) for r in captured["app"].routes}
    assert "/ui" in routes

    # without the flag there is no static mount
    code, _, _ = run("serve", "--session-root", tmp_path / "root2")
    assert code == 0
    routes = {getattr(r, "path", None) for r in captured["app"].routes}
    assert "/ui" not in routes
