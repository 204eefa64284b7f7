import json

import pytest

from cli.main import EXIT_OK, main
from config.factory import settings
from core.exceptions import ValidationError
from core.services.evaluation import EvalReport, Metrics, RunResult
from db.db import dispose_engines
from db.repo import clear_history, count_experiments, get_recent_experiments, get_runs, save_protocol_result


def _report(family="svm", accuracies=(0.5, 1.0)):
    runs = [
        RunResult(run_index=i, seed=7 + i, scores=[0.2, -0.1], labels=[1, -1],
                  metrics=Metrics(accuracy=acc, tpr=1.0, fpr=None if acc == 1.0 else 0.5, tp=1, fp=0, tn=1, fn=0))
        for i, acc in enumerate(accuracies)
    ]
    return EvalReport(protocol="random:80", family=family, representation="joint-time", base_seed=7,
                      n_runs=len(runs), runs=runs, mean_accuracy=sum(accuracies) / len(accuracies),
                      mean_tpr=1.0, mean_fpr=0.5, synthetic=True)


@pytest.fixture
def db_url(tmp_path):
    yield f"sqlite:///{tmp_path / 'history.db'}"
    dispose_engines()


class TestRepo:
    def test_save_and_read_back(self, db_url):
        experiment_id = save_protocol_result(_report(), db_url)
        recent = get_recent_experiments(10, db_url)
        assert len(recent) == 1
        row = recent.iloc[0]
        assert row["id"] == experiment_id
        assert (row["family"], row["protocol"], row["n_runs"]) == ("svm", "random:80", 2)
        assert row["mean_accuracy"] == pytest.approx(0.75)
        assert bool(row["synthetic"])

        runs = get_runs(experiment_id, db_url)
        assert runs["seed"].tolist() == [7, 8]
        assert runs["fpr"].isna().tolist() == [False, True]

    def test_newest_first_and_limit(self, db_url):
        for family in ("svm", "nn", "dtw"):
            save_protocol_result(_report(family), db_url)
        recent = get_recent_experiments(2, db_url)
        assert recent["family"].tolist() == ["dtw", "nn"]
        assert count_experiments(db_url) == 3

    def test_clear(self, db_url):
        save_protocol_result(_report(), db_url)
        clear_history(db_url)
        assert count_experiments(db_url) == 0
        assert get_recent_experiments(5, db_url).empty

    def test_rejects_non_reports(self, db_url):
        with pytest.raises(ValidationError):
            save_protocol_result({"family": "svm"}, db_url)


class TestHistoryCommand:
    def test_lists_recorded_experiments(self, db_url, monkeypatch, capsys):
        monkeypatch.setattr(settings, "DATABASE_URL", db_url)
        save_protocol_result(_report("adaboost"))
        assert main(["history", "--limit", "5"]) == EXIT_OK
        records = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
        assert [r["family"] for r in records] == ["adaboost"]

    def test_eval_record_flag(self, db_url, monkeypatch, small_raw_dataset, tmp_path):
        from core.services.dataset_io import save_dataset
        from core.services.preprocess import PreprocessConfig, preprocess_dataset

        monkeypatch.setattr(settings, "DATABASE_URL", db_url)
        data = save_dataset(preprocess_dataset(small_raw_dataset, PreprocessConfig()), tmp_path / "prep.jsonl")
        assert main(["eval", "--data", str(data), "--rep", "angle-freq", "--model", "svdd",
                     "--protocol", "random:16", "--runs", "2", "--record", "--quiet",
                     "--out", str(tmp_path / "r.json")]) == EXIT_OK
        recent = get_recent_experiments(5, db_url)
        assert recent["protocol"].tolist() == ["random:16"]
        assert get_runs(int(recent.iloc[0]["id"]), db_url)["run_index"].tolist() == [0, 1]

    def test_clear_flag(self, db_url, monkeypatch, capsys):
        monkeypatch.setattr(settings, "DATABASE_URL", db_url)
        save_protocol_result(_report())
        assert main(["history", "--clear"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out.strip()) == {"command": "history", "cleared": True}
        assert count_experiments(db_url) == 0
