import json

import numpy as np
import pytest

from kcca.cli import main, read_dataset, write_dataset
from kcca.datagen import PairedDataset


def run(argv, capsys=None):
    return main(argv)


def simulate(tmp_path, scenario="sim1", train=40, test=100, seed=7, extra=()):
    tmp_path.mkdir(parents=True, exist_ok=True)
    tr = tmp_path / "train.csv"
    te = tmp_path / "test.csv"
    rc = main(
        [
            "simulate",
            "--scenario", scenario,
            "--train", str(train),
            "--test", str(test),
            "--seed", str(seed),
            "--out-train", str(tr),
            "--out-test", str(te),
            *extra,
        ]
    )
    assert rc == 0
    return tr, te


class TestSimulate:
    def test_row_counts(self, tmp_path):
        tr, te = simulate(tmp_path)
        assert len(tr.read_text().splitlines()) == 41
        assert len(te.read_text().splitlines()) == 101

    def test_byte_identical_rerun(self, tmp_path):
        tr1, te1 = simulate(tmp_path / "a", seed=5)
        tr2, te2 = simulate(tmp_path / "b", seed=5)
        assert tr1.read_bytes() == tr2.read_bytes()
        assert te1.read_bytes() == te2.read_bytes()

    def test_zero_train_is_usage_error(self, tmp_path, capsys):
        rc = main(
            [
                "simulate", "--scenario", "sim1", "--train", "0", "--test", "5",
                "--seed", "1", "--out-train", str(tmp_path / "a"), "--out-test", str(tmp_path / "b"),
            ]
        )
        assert rc == 64
        assert capsys.readouterr().err.startswith("error[usage]:")

    def test_unwritable_path(self, tmp_path, capsys):
        rc = main(
            [
                "simulate", "--scenario", "sim1", "--train", "5", "--test", "5",
                "--seed", "1",
                "--out-train", str(tmp_path / "missing" / "a.csv"),
                "--out-test", str(tmp_path / "b.csv"),
            ]
        )
        assert rc == 2
        assert capsys.readouterr().err.startswith("error[io]:")

    def test_sim2_has_label_column(self, tmp_path):
        _, te = simulate(tmp_path, scenario="sim2", train=10, test=20)
        header = te.read_text().splitlines()[0]
        assert header == "x1,x2,y1,y2,label"

    def test_missing_flag_is_usage_error(self, capsys):
        assert main(["simulate", "--scenario", "sim1"]) == 64


class TestCsvRoundTrip:
    def test_exact_values(self, tmp_path):
        rng = np.random.default_rng(0)
        ds = PairedDataset(x=rng.normal(size=(7, 3)), y=rng.normal(size=(7, 2)))
        path = tmp_path / "d.csv"
        write_dataset(path, ds)
        back = read_dataset(path)
        assert np.array_equal(back.x, ds.x)
        assert np.array_equal(back.y, ds.y)
        assert back.labels is None

    def test_labels_preserved(self, tmp_path):
        ds = PairedDataset(
            x=np.zeros((3, 1)), y=np.ones((3, 1)), labels=np.array([2, 0, 1])
        )
        path = tmp_path / "d.csv"
        write_dataset(path, ds)
        np.testing.assert_array_equal(read_dataset(path).labels, [2, 0, 1])

    def test_bad_header(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b,c\n1,2,3\n")
        from kcca.errors import InputError

        with pytest.raises(InputError):
            read_dataset(path)


class TestFit:
    def test_kcca_fit_writes_model(self, tmp_path, capsys):
        tr, _ = simulate(tmp_path)
        model = tmp_path / "m.json"
        rc = main(
            [
                "fit", "--data", str(tr),
                "--kernel-x", "gaussian:sigma=1.0", "--kernel-y", "gaussian:sigma=1.0",
                "--eta1", "1.0", "--eta2", "1.0", "--model", str(model),
            ]
        )
        assert rc == 0
        assert "lambdas:" in capsys.readouterr().out
        doc = json.loads(model.read_text())
        assert doc["method"] == "kcca"
        assert len(doc["lambdas"]) == 2

    def test_linear_fit_reports_rhos(self, tmp_path, capsys):
        tr, _ = simulate(tmp_path)
        rc = main(
            ["fit", "--data", str(tr), "--method", "linear", "--model", str(tmp_path / "m.json")]
        )
        assert rc == 0
        out = capsys.readouterr().out
        rho_line = next(ln for ln in out.splitlines() if ln.startswith("rhos:"))
        rho1 = float(rho_line.split()[1])
        assert 0.1 < rho1 < 0.9

    def test_eta_shorthand(self, tmp_path):
        tr, _ = simulate(tmp_path, train=10, test=5)
        m1, m2 = tmp_path / "m1.json", tmp_path / "m2.json"
        main(["fit", "--data", str(tr), "--eta", "0.5", "--model", str(m1)])
        main(["fit", "--data", str(tr), "--eta1", "0.5", "--eta2", "0.5", "--model", str(m2)])
        assert m1.read_bytes() == m2.read_bytes()

    def test_missing_data_flag(self, capsys):
        assert main(["fit", "--model", "m.json"]) == 64

    def test_bad_kernel_spec_is_domain_error(self, tmp_path, capsys):
        tr, _ = simulate(tmp_path, train=5, test=5)
        rc = main(["fit", "--data", str(tr), "--kernel-x", "gauss:s=1", "--model", str(tmp_path / "m.json")])
        assert rc == 3
        assert capsys.readouterr().err.startswith("error[domain]:")


class TestEvalAndTransform:
    @pytest.fixture
    def fitted(self, tmp_path):
        tr, te = simulate(tmp_path)
        model = tmp_path / "m.json"
        assert main(["fit", "--data", str(tr), "--eta", "1.0", "--model", str(model)]) == 0
        return tr, te, model

    def test_eval_report(self, fitted, tmp_path, capsys):
        tr, te, model = fitted
        report = tmp_path / "report.json"
        rc = main(
            ["eval", "--model", str(model), "--train", str(tr), "--test", str(te), "--report", str(report)]
        )
        assert rc == 0
        out = capsys.readouterr().out
        assert "(" in out  # bracketed train (test) rendering
        doc = json.loads(report.read_text())
        assert doc["schema"] == "kcca-report/1"
        for key in ("train_table", "test_table", "train_diag", "test_diag", "lambdas", "config"):
            assert key in doc
        assert np.all(np.abs(np.array(doc["train_table"])) <= 1.0)
        assert doc["train_diag"][0] > 0.9

    def test_eval_deterministic(self, fitted, tmp_path):
        tr, te, model = fitted
        r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
        main(["eval", "--model", str(model), "--train", str(tr), "--test", str(te), "--report", str(r1)])
        main(["eval", "--model", str(model), "--train", str(tr), "--test", str(te), "--report", str(r2)])
        assert r1.read_bytes() == r2.read_bytes()

    def test_plot_dir(self, fitted, tmp_path):
        tr, te, model = fitted
        plots = tmp_path / "plots"
        main(
            ["eval", "--model", str(model), "--train", str(tr), "--test", str(te), "--plot-dir", str(plots)]
        )
        for k in (1, 2):
            lines = (plots / f"component_{k}.csv").read_text().splitlines()
            assert lines[0] == "u,v,split,order"
            assert len(lines) == 1 + 40 + 100
            splits = {ln.split(",")[2] for ln in lines[1:]}
            assert splits == {"train", "test"}
        # order column ranks the first x coordinate 1..N within the train split
        train_orders = sorted(
            int(ln.split(",")[3])
            for ln in (plots / "component_1.csv").read_text().splitlines()[1:]
            if ln.split(",")[2] == "train"
        )
        assert train_orders == list(range(1, 41))

    def test_transform_matches_eval(self, fitted, tmp_path):
        tr, te, model = fitted
        u_csv, v_csv = tmp_path / "u.csv", tmp_path / "v.csv"
        assert main(["transform", "--model", str(model), "--data", str(tr), "--side", "x", "--out", str(u_csv)]) == 0
        assert main(["transform", "--model", str(model), "--data", str(tr), "--side", "y", "--out", str(v_csv)]) == 0
        U = np.loadtxt(u_csv, delimiter=",", skiprows=1)
        V = np.loadtxt(v_csv, delimiter=",", skiprows=1)
        from kcca.cca import correlation_table

        report = tmp_path / "report.json"
        main(["eval", "--model", str(model), "--train", str(tr), "--test", str(te), "--report", str(report)])
        expected = np.array(json.loads(report.read_text())["train_table"])
        np.testing.assert_allclose(correlation_table(U, V).values, expected, atol=1e-12)

    def test_transform_row_count(self, fitted, tmp_path):
        tr, te, model = fitted
        out = tmp_path / "f.csv"
        main(["transform", "--model", str(model), "--data", str(te), "--side", "x", "--out", str(out)])
        lines = out.read_text().splitlines()
        assert lines[0] == "u1,u2" and len(lines) == 101

    def test_transform_empty_file_usage_error(self, fitted, tmp_path, capsys):
        _, _, model = fitted
        empty = tmp_path / "empty.csv"
        empty.write_text("x1,x2,y1,y2\n")
        rc = main(["transform", "--model", str(model), "--data", str(empty), "--side", "x", "--out", str(tmp_path / "o.csv")])
        assert rc == 64

    def test_dimension_mismatch_is_exit_3(self, fitted, tmp_path, capsys):
        _, _, model = fitted
        bad = tmp_path / "bad.csv"
        bad.write_text("x1,x2,x3,y1\n1,2,3,4\n5,6,7,8\n")
        rc = main(["transform", "--model", str(model), "--data", str(bad), "--side", "x", "--out", str(tmp_path / "o.csv")])
        assert rc == 3
        assert capsys.readouterr().err.startswith("error[domain]:")


class TestEndToEndDeterminism:
    def test_full_pipeline_byte_identical(self, tmp_path):
        reports = []
        for run_dir in ("run1", "run2"):
            d = tmp_path / run_dir
            d.mkdir()
            tr, te = simulate(d, seed=3)
            model = d / "m.json"
            main(["fit", "--data", str(tr), "--eta", "1.0", "--model", str(model)])
            report = d / "r.json"
            main(["eval", "--model", str(model), "--train", str(tr), "--test", str(te), "--report", str(report)])
            reports.append(report.read_bytes())
        assert reports[0] == reports[1]
