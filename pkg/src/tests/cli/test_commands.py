import json
import logging

import numpy as np
import pytest
from click.testing import CliRunner

from lesionbench import create_cli
from lesionbench.dataset import (
    GroundTruthTable,
    load_diagnosis_predictions,
    one_hot,
    read_id_list,
    write_diagnosis_predictions,
    write_ground_truth_csv,
)
from lesionbench.diagnose import class_mask_name
from lesionbench.logs import ROOT_LOGGER
from lesionbench.masks import BinaryMask, RasterImage, read_mask, write_image, write_mask
from lesionbench.metrics import AttributeClass, DiagnosisLabel, LABEL_ORDER
from lesionbench.reports import audit
from lesionbench.synthetic import write_dataset
from tests.helpers import REFERENCE_ATTRIBUTE_SCORES, REFERENCE_CONFUSION_COUNTS


@pytest.fixture(autouse=True)
def reset_logger():
    yield
    logger = logging.getLogger(ROOT_LOGGER)
    for handler in [h for h in logger.handlers if getattr(h, "_lesionbench", False)]:
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def run():
    cli = create_cli()
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, [str(a) for a in args])

    return invoke


@pytest.fixture
def synthetic(tmp_path):
    """Six synthetic lesions: (images, masks)"""
    return write_dataset(tmp_path / "data", 6, seed=1)


def read_report(out):
    return json.loads((out / "report.json").read_text())


def mask_with_count(count, width=100, height=100):
    bits = np.zeros(width * height, dtype=bool)
    bits[:count] = True
    return BinaryMask(bits.reshape(height, width))


class TestSplit:
    def test_writes_lists(self, run, synthetic, tmp_path):
        images, masks = synthetic
        out = tmp_path / "split"
        result = run("split", "--images", images, "--truth", masks, "--out", out,
                     "--seed", 3, "--train-count", 4, "--test-count", 2)
        assert result.exit_code == 0, result.output
        train, test = read_id_list(out / "train.txt"), read_id_list(out / "test.txt")
        assert len(train) == 4 and len(test) == 2
        assert set(train).isdisjoint(test)

    def test_rerun_is_byte_identical(self, run, synthetic, tmp_path):
        images, masks = synthetic
        for name in ("a", "b"):
            run("split", "--images", images, "--truth", masks, "--out", tmp_path / name,
                "--seed", 9, "--test-count", 2)
        for name in ("train.txt", "test.txt"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_default_counts_mismatch(self, run, synthetic, tmp_path):
        images, masks = synthetic
        result = run("split", "--images", images, "--truth", masks, "--out", tmp_path / "o", "--seed", 1)
        assert result.exit_code == 1
        assert "Count mismatch" in result.output

    def test_seed_required(self, run, synthetic, tmp_path):
        images, masks = synthetic
        result = run("split", "--images", images, "--truth", masks, "--out", tmp_path / "o")
        assert result.exit_code == 1
        assert "--seed" in result.output

    def test_task3_stratified(self, run, tmp_path):
        images = tmp_path / "images"
        rows = {}
        for i in range(14):
            image_id = f"ISIC_{i:07d}"
            write_image(RasterImage.filled(2, 2, 50), images / f"{image_id}.png")
            rows[image_id] = LABEL_ORDER[i % 7]
        truth = write_ground_truth_csv(tmp_path / "gt.csv", GroundTruthTable(rows))
        out = tmp_path / "split"
        result = run("split", "--task", 3, "--images", images, "--truth", truth, "--out", out,
                     "--seed", 1, "--test-count", 7, "--stratified")
        assert result.exit_code == 0, result.output
        assert sorted((rows[i] for i in read_id_list(out / "test.txt")), key=str) == sorted(LABEL_ORDER, key=str)

    def test_stratified_needs_labels(self, run, synthetic, tmp_path):
        images, masks = synthetic
        result = run("split", "--images", images, "--truth", masks, "--out", tmp_path / "o",
                     "--seed", 1, "--test-count", 2, "--stratified")
        assert result.exit_code == 1


class TestEvalBoundary:
    def predictions(self, tmp_path, masks, transform):
        root = tmp_path / "pred"
        for i, path in enumerate(sorted(masks.glob("*_segmentation.png"))):
            predicted = transform(i, read_mask(path))
            if predicted is not None:
                write_mask(predicted, root / "task1" / path.name)
        return root

    @pytest.mark.parametrize(
        "transform,expected",
        [
            (lambda i, m: m, 1.0),
            (lambda i, m: BinaryMask.empty(*m.shape), 0.0),
            (lambda i, m: m if i % 2 else BinaryMask.empty(*m.shape), 0.5),
        ],
    )
    def test_scores(self, run, synthetic, tmp_path, transform, expected):
        _, masks = synthetic
        pred = self.predictions(tmp_path, masks, transform)
        out = tmp_path / "out"
        result = run("eval-boundary", "--truth", masks, "--pred", pred, "--out", out)
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["aggregates"]["S1"] == pytest.approx(expected)
        assert report["aggregates"]["N"] == 6
        assert report["config"]["task"] == 1
        assert audit(report) == []

    def test_missing_prediction_strict(self, run, synthetic, tmp_path):
        _, masks = synthetic
        pred = self.predictions(tmp_path, masks, lambda i, m: m if i else None)
        result = run("eval-boundary", "--truth", masks, "--pred", pred, "--out", tmp_path / "out")
        assert result.exit_code == 1
        assert "--skip-missing" in result.output

    def test_missing_prediction_skipped(self, run, synthetic, tmp_path):
        _, masks = synthetic
        pred = self.predictions(tmp_path, masks, lambda i, m: m if i else None)
        out = tmp_path / "out"
        result = run("eval-boundary", "--truth", masks, "--pred", pred, "--out", out, "--skip-missing")
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["aggregates"]["N"] == 5
        assert report["aggregates"]["skipped"] == ["SYNTH_0000000"]
        assert any("SYNTH_0000000" in w for w in report["warnings"])

    def test_no_overlap(self, run, synthetic, tmp_path):
        _, masks = synthetic
        (tmp_path / "pred" / "task1").mkdir(parents=True)
        result = run("eval-boundary", "--truth", masks, "--pred", tmp_path / "pred",
                     "--out", tmp_path / "out", "--skip-missing")
        assert result.exit_code == 1
        assert "No overlapping ids" in result.output

    def test_ids_and_csv(self, run, synthetic, tmp_path):
        _, masks = synthetic
        pred = self.predictions(tmp_path, masks, lambda i, m: m)
        ids = tmp_path / "test.txt"
        ids.write_text("SYNTH_0000001\nSYNTH_0000004\n")
        out = tmp_path / "out"
        result = run("eval-boundary", "--truth", masks, "--pred", pred, "--out", out,
                     "--ids", ids, "--format", "csv")
        assert result.exit_code == 0, result.output
        assert read_report(out)["aggregates"]["N"] == 2
        lines = (out / "scores.csv").read_text().splitlines()
        assert lines[0] == "image_id,jaccard" and len(lines) == 3


class TestEvalAttributes:
    def write_case(self, tmp_path, scores, empty_streaks=False):
        """One 100x100 image per class; prediction covers round(score * 10000) pixels"""
        truth, pred = tmp_path / "truth", tmp_path / "pred"
        full = BinaryMask.full(100, 100)
        for attribute, score in zip(AttributeClass, scores):
            for image_id in ("a", "b"):
                name = f"{image_id}_attribute_{attribute.value}.png"
                own = image_id == "a"
                if attribute is AttributeClass.STREAKS and empty_streaks:
                    own = False
                write_mask(full if own else BinaryMask.empty(100, 100), truth / name)
                predicted = mask_with_count(round(score * 10000)) if own else BinaryMask.empty(100, 100)
                write_mask(predicted, pred / "task2" / name)
        return truth, pred

    def test_perfect(self, run, tmp_path):
        truth, pred = self.write_case(tmp_path, [1.0] * 5)
        out = tmp_path / "out"
        result = run("eval-attributes", "--truth", truth, "--pred", pred, "--out", out)
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["aggregates"]["S2"] == 1.0
        assert set(report["aggregates"]["S2_per_class"].values()) == {1.0}

    def test_reference_scores(self, run, tmp_path):
        truth, pred = self.write_case(tmp_path, REFERENCE_ATTRIBUTE_SCORES)
        out = tmp_path / "out"
        assert run("eval-attributes", "--truth", truth, "--pred", pred, "--out", out).exit_code == 0
        report = read_report(out)
        assert report["summary"]["S2"] == 0.28
        assert report["aggregates"]["S2_per_class"]["pigment_network"] == pytest.approx(0.3725)
        assert report["aggregates"]["N_per_class"]["globules"] == 1
        assert audit(report) == []

    def test_undefined_class_strict(self, run, tmp_path):
        truth, pred = self.write_case(tmp_path, [1.0] * 5, empty_streaks=True)
        result = run("eval-attributes", "--truth", truth, "--pred", pred, "--out", tmp_path / "out")
        assert result.exit_code == 1
        assert "streaks" in result.output

    def test_undefined_class_skipped(self, run, tmp_path):
        truth, pred = self.write_case(tmp_path, [0.5, 0.5, 0.5, 0.5, 1.0], empty_streaks=True)
        out = tmp_path / "out"
        result = run("eval-attributes", "--truth", truth, "--pred", pred, "--out", out, "--skip-missing")
        assert result.exit_code == 0, result.output
        report = read_report(out)
        assert report["aggregates"]["S2_per_class"]["streaks"] == "undefined"
        assert report["aggregates"]["S2"] == pytest.approx(0.5)
        assert audit(report) == []

    def test_incomplete_truth(self, run, tmp_path):
        truth, pred = self.write_case(tmp_path, [1.0] * 5)
        (truth / "a_attribute_globules.png").unlink()
        result = run("eval-attributes", "--truth", truth, "--pred", pred, "--out", tmp_path / "out")
        assert result.exit_code == 1


class TestDiagnose:
    def setup_case(self, tmp_path, class_masks, image_id="ISIC_0000001", boundary=True):
        images, pred = tmp_path / "images", tmp_path / "pred"
        write_image(RasterImage.filled(100, 100, 200, channels=3), images / f"{image_id}.png")
        if boundary:
            write_mask(BinaryMask.full(100, 100), pred / "task1" / f"{image_id}_segmentation.png")
        for label, mask in class_masks.items():
            write_mask(mask, pred / "task3" / class_mask_name(image_id, label))
        return images, pred

    def test_larger_area_wins(self, run, tmp_path):
        images, pred = self.setup_case(
            tmp_path, {DiagnosisLabel.AKIEC: mask_with_count(3688), DiagnosisLabel.MEL: mask_with_count(3658)}
        )
        out = tmp_path / "out"
        result = run("diagnose", "--images", images, "--pred", pred, "--out", out)
        assert result.exit_code == 0, result.output
        vector = load_diagnosis_predictions(out / "predictions.csv")["ISIC_0000001"]
        assert LABEL_ORDER[int(vector.argmax())] is DiagnosisLabel.AKIEC
        trace = json.loads((out / "votes.jsonl").read_text().splitlines()[0])
        assert trace["label"] == "AKIEC"
        assert trace["areas"]["AKIEC"] == pytest.approx(0.3688)
        assert audit(read_report(out)) == []

    def test_one_hot_row_and_rerun(self, run, tmp_path):
        images, pred = self.setup_case(tmp_path, {DiagnosisLabel.BCC: mask_with_count(40)}, image_id="x")
        first, second = tmp_path / "one", tmp_path / "two"
        for out in (first, second):
            assert run("diagnose", "--images", images, "--pred", pred, "--out", out).exit_code == 0
        assert (first / "predictions.csv").read_text().splitlines()[1] == (
            "x,0.0000,0.0000,1.0000,0.0000,0.0000,0.0000,0.0000"
        )
        assert (first / "predictions.csv").read_bytes() == (second / "predictions.csv").read_bytes()

    def test_baseline_boundary(self, run, tmp_path):
        images, pred = self.setup_case(tmp_path, {DiagnosisLabel.DF: mask_with_count(500)}, boundary=False)
        bits = np.zeros((100, 100), dtype=bool)
        bits[:30] = True
        samples = np.where(bits[:, :, None], 40, 220).astype(np.uint8).repeat(3, axis=2)
        write_image(RasterImage(samples), images / "ISIC_0000001.png")
        out = tmp_path / "out"
        result = run("diagnose", "--images", images, "--pred", pred, "--out", out, "--baseline")
        assert result.exit_code == 0, result.output
        trace = json.loads((out / "votes.jsonl").read_text())
        assert trace["label"] == "DF" and trace["areas"]["DF"] == pytest.approx(0.05)

    def test_missing_boundary_is_per_image_error(self, run, tmp_path):
        images, pred = self.setup_case(tmp_path, {DiagnosisLabel.NV: mask_with_count(10)}, boundary=False)
        out = tmp_path / "out"
        result = run("diagnose", "--images", images, "--pred", pred, "--out", out)
        assert result.exit_code == 1
        report = read_report(out)
        assert report["errors"] and report["records"][0]["fallback"]
        assert (out / "predictions.csv").read_text().splitlines()[1].endswith(",".join(["0.1429"] * 7))

    def test_no_intersection_needs_no_boundary(self, run, tmp_path):
        images, pred = self.setup_case(tmp_path, {DiagnosisLabel.NV: mask_with_count(10)}, boundary=False)
        result = run("diagnose", "--images", images, "--pred", pred, "--out", tmp_path / "out",
                     "--no-intersect-boundary")
        assert result.exit_code == 0, result.output

    def test_empty_predictor_root(self, run, tmp_path):
        images, _ = self.setup_case(tmp_path, {})
        (tmp_path / "empty").mkdir()
        result = run("diagnose", "--images", images, "--pred", tmp_path / "empty", "--out", tmp_path / "out")
        assert result.exit_code == 1
        assert "task3" in result.output


class TestEvalDiagnosis:
    def write_case(self, tmp_path, pairs):
        """pairs: list of (truth, predicted) labels"""
        truth = {f"ISIC_{i:07d}": t for i, (t, _) in enumerate(pairs)}
        predicted = {f"ISIC_{i:07d}": one_hot(p) for i, (_, p) in enumerate(pairs)}
        return (
            write_ground_truth_csv(tmp_path / "gt.csv", GroundTruthTable(truth)),
            write_diagnosis_predictions(tmp_path / "pred.csv", predicted),
        )

    def evaluate(self, run, tmp_path, pairs, *extra):
        truth, pred = self.write_case(tmp_path, pairs)
        out = tmp_path / "out"
        result = run("eval-diagnosis", "--truth", truth, "--pred", pred, "--out", out, *extra)
        assert result.exit_code == 0, result.output
        return read_report(out)

    def test_perfect(self, run, tmp_path):
        report = self.evaluate(run, tmp_path, [(label, label) for label in LABEL_ORDER])
        assert report["aggregates"]["S3"] == 1.0
        assert report["aggregates"]["confusion"]["row_normalized"] == np.eye(7).tolist()

    def test_reference_table(self, run, tmp_path):
        pairs = [
            (actual, predicted)
            for actual, row in zip(LABEL_ORDER, REFERENCE_CONFUSION_COUNTS)
            for predicted, n in zip(LABEL_ORDER, row)
            for _ in range(n)
        ]
        report = self.evaluate(run, tmp_path, pairs)
        assert report["aggregates"]["balanced_accuracy"] == pytest.approx(0.7123, abs=1e-3)
        assert report["aggregates"]["confusion"]["counts"] == REFERENCE_CONFUSION_COUNTS
        assert report["aggregates"]["confusion_summary"]["worst_class"] == "AKIEC"
        assert audit(report) == []

    def test_all_nv(self, run, tmp_path):
        pairs = [(label, DiagnosisLabel.NV) for label in LABEL_ORDER for _ in range(3)]
        report = self.evaluate(run, tmp_path, pairs)
        assert report["aggregates"]["balanced_accuracy"] == pytest.approx(1 / 7)

    def test_missing_class_warns(self, run, tmp_path):
        report = self.evaluate(run, tmp_path, [(DiagnosisLabel.MEL, DiagnosisLabel.MEL)])
        assert report["aggregates"]["per_class_recall"]["VASC"] == "undefined"
        assert any("VASC" in w for w in report["warnings"])

    def test_id_mismatch(self, run, tmp_path):
        truth = write_ground_truth_csv(tmp_path / "gt.csv", GroundTruthTable({"a": DiagnosisLabel.MEL}))
        pred = write_diagnosis_predictions(tmp_path / "pred.csv", {"b": one_hot(DiagnosisLabel.MEL)})
        result = run("eval-diagnosis", "--truth", truth, "--pred", pred, "--out", tmp_path / "out")
        assert result.exit_code == 1
        assert "No overlapping ids" in result.output


class TestDiagnoseThenEvaluate:
    def diagnose(self, run, tmp_path, class_masks, side):
        images, pred, out = tmp_path / "images", tmp_path / "pred", tmp_path / "diag"
        write_image(RasterImage.filled(side, side, 180, channels=3), images / "a.png")
        for label, mask in class_masks.items():
            write_mask(mask, pred / "task3" / class_mask_name("a", label))
        result = run("diagnose", "--images", images, "--pred", pred, "--out", out, "--no-intersect-boundary")
        assert result.exit_code == 0, result.output
        return out

    def evaluate(self, run, tmp_path, label, *source):
        truth = write_ground_truth_csv(tmp_path / "gt.csv", GroundTruthTable({"a": label}))
        out = tmp_path / "eval"
        result = run("eval-diagnosis", "--truth", truth, *source, "--out", out)
        assert result.exit_code == 0, result.output
        return read_report(out)

    def test_all_empty_vote_scores_as_nv(self, run, tmp_path):
        out = self.diagnose(run, tmp_path, {DiagnosisLabel.MEL: BinaryMask.empty(8, 8)}, side=8)
        assert json.loads((out / "votes.jsonl").read_text())["fallback"]
        for source in (("--pred", out / "predictions.csv"), ("--votes", out / "votes.jsonl")):
            report = self.evaluate(run, tmp_path, DiagnosisLabel.NV, *source)
            assert report["records"][0]["predicted"] == "NV"
            assert report["aggregates"]["S3"] == 1.0
            assert report["aggregates"]["per_class_recall"]["NV"] == 1.0

    def test_votes_keep_label_lost_to_rounding(self, run, tmp_path):
        """NV wins 20001 to 20000 pixels; both confidences print as 0.5000"""
        masks = {
            DiagnosisLabel.MEL: mask_with_count(20000, 200, 200),
            DiagnosisLabel.NV: mask_with_count(20001, 200, 200),
        }
        out = self.diagnose(run, tmp_path, masks, side=200)
        assert (out / "predictions.csv").read_text().splitlines()[1].startswith("a,0.5000,0.5000,")
        report = self.evaluate(run, tmp_path, DiagnosisLabel.NV, "--votes", out / "votes.jsonl")
        assert report["aggregates"]["S3"] == 1.0

    def test_needs_pred_or_votes(self, run, tmp_path):
        truth = write_ground_truth_csv(tmp_path / "gt.csv", GroundTruthTable({"a": DiagnosisLabel.NV}))
        result = run("eval-diagnosis", "--truth", truth, "--out", tmp_path / "eval")
        assert result.exit_code == 2


class TestAugment:
    def test_count_zero_writes_manifest_only(self, run, synthetic, tmp_path):
        images, masks = synthetic
        out = tmp_path / "aug"
        result = run("augment", "--images", images, "--truth", masks, "--out", out, "--seed", 1, "--count", 0)
        assert result.exit_code == 0, result.output
        assert json.loads((out / "manifest.json").read_text())["variants"] == []
        assert not list(out.rglob("*.png"))

    def test_rerun_identical(self, run, synthetic, tmp_path):
        images, masks = synthetic
        for name in ("a", "b"):
            result = run("augment", "--images", images, "--truth", masks, "--out", tmp_path / name,
                         "--seed", 5, "--count", 4)
            assert result.exit_code == 0, result.output
        files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*.*"))
        assert len(files) == 1 + 6 * 4 * 2
        for relative in files:
            assert (tmp_path / "a" / relative).read_bytes() == (tmp_path / "b" / relative).read_bytes()

    def test_masks_keep_counts(self, run, synthetic, tmp_path):
        images, masks = synthetic
        out = tmp_path / "aug"
        run("augment", "--images", images, "--truth", masks, "--out", out, "--seed", 2, "--count", 2)
        manifest = json.loads((out / "manifest.json").read_text())
        assert [v["draw_index"] for v in manifest["variants"]] == list(range(12))
        for variant in manifest["variants"]:
            (entry,) = variant["masks"]
            assert entry["active_count"] == entry["source_active_count"]
            assert entry["path"] == f"{variant['image_id']}_aug{variant['variant']}_segmentation.png"

    def test_seed_required(self, run, synthetic, tmp_path):
        images, _ = synthetic
        assert run("augment", "--images", images, "--out", tmp_path / "aug").exit_code == 1


class TestEndToEnd:
    def test_baseline_on_synthetic_lesions(self, run, tmp_path):
        """50 generated lesions segmented by the baseline score S1 >= 0.90"""
        data = tmp_path / "data"
        assert run("synthesize", "--out", data, "--count", 50, "--seed", 2018).exit_code == 0
        pred = tmp_path / "pred"
        result = run("baseline-segment", "--images", data / "images", "--out", pred)
        assert result.exit_code == 0, result.output
        assert len(list((pred / "task1").glob("*_segmentation.png"))) == 50
        out = tmp_path / "scores"
        result = run("eval-boundary", "--truth", data / "masks", "--pred", pred, "--out", out)
        assert result.exit_code == 0, result.output
        assert read_report(out)["aggregates"]["S1"] >= 0.90


class TestMisc:
    def test_model_config(self, run):
        result = run("model-config", "--task", 3)
        assert result.exit_code == 0
        assert '"num_classes": 8' in result.output

    def test_invalid_task(self, run):
        assert run("model-config", "--task", 4).exit_code == 2

    def test_version(self, run):
        result = run("--version")
        assert result.exit_code == 0 and "lesionbench" in result.output

    def test_missing_directory(self, run, tmp_path):
        result = run("eval-boundary", "--truth", tmp_path / "nope", "--pred", tmp_path, "--out", tmp_path / "o")
        assert result.exit_code == 1
        assert "not a directory" in result.output
