import json

import pytest

from structlabel.main import app
from structlabel.utils.cli_helpers import EXIT_CHECK_FAILED, EXIT_USAGE


def invoke(runner, *args):
    return runner.invoke(app, [str(a) for a in args])


class TestEncodeDecode:
    def test_encode_writes_a_label_file(self, runner, bbc_conllu_file, tmp_path):
        out = tmp_path / "bbc.tsv"
        result = invoke(runner, "encode", bbc_conllu_file, "--scheme", "dep-4b", "--out", out)
        assert result.exit_code == 0, result.output
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[:3] == ["# scheme=dep-4b", "# id=bbc", "I\t_\t0100@nsubj"]
        assert "BBC\t_\t1010@obl" in lines

    def test_encode_to_stdout(self, runner, bbc_conllu_file):
        result = invoke(runner, "encode", bbc_conllu_file, "--scheme", "dep-abs")
        assert result.exit_code == 0
        assert "had\t_\t0@root" in result.output

    @pytest.mark.parametrize("scheme", ["dep-abs", "dep-brk", "dep-4b", "dep-7b", "dep-hexa"])
    def test_decode_restores_the_treebank(self, runner, bbc_conllu_file, tmp_path, scheme):
        labels, back = tmp_path / "labels.tsv", tmp_path / "back.conllu"
        assert invoke(runner, "encode", bbc_conllu_file, "--scheme", scheme, "--out", labels).exit_code == 0
        result = invoke(runner, "decode", labels, "--out", back)
        assert result.exit_code == 0, result.output
        assert back.read_text(encoding="utf-8") == bbc_conllu_file.read_text(encoding="utf-8")

    def test_decode_brackets(self, runner, ptb_file, tmp_path):
        labels, back = tmp_path / "labels.tsv", tmp_path / "back.ptb"
        assert invoke(runner, "encode", ptb_file, "--scheme", "const-rel", "--out", labels).exit_code == 0
        assert labels.read_text(encoding="utf-8").count("<end>") == 2
        assert invoke(runner, "decode", labels, "--out", back).exit_code == 0
        assert back.read_text(encoding="utf-8") == ptb_file.read_text(encoding="utf-8")

    def test_graph_plane_count_option(self, runner, crossing_sdp_file, tmp_path):
        out = tmp_path / "crossing.tsv"
        assert invoke(runner, "encode", crossing_sdp_file, "--scheme", "gr-brk", "--k", 2, "--out", out).exit_code == 0
        assert out.read_text(encoding="utf-8").startswith("# scheme=gr-brk:2\n")


class TestRoundtrip:
    def test_lossless_tree_scheme(self, runner, bbc_conllu_file, tmp_path):
        report = tmp_path / "report.txt"
        result = invoke(runner, "roundtrip", bbc_conllu_file, "--scheme", "dep-7b", "--out", report)
        assert result.exit_code == 0, result.output
        text = report.read_text(encoding="utf-8")
        assert "las=1.0000 (10/10)" in text
        assert "wellformed=1.0000 (1/1)" in text

    def test_json_report(self, runner, ptb_file, tmp_path):
        report = tmp_path / "report.json"
        result = invoke(runner, "roundtrip", ptb_file, "--scheme", "tetra", "--json", "--out", report)
        assert result.exit_code == 0, result.output
        document = json.loads(report.read_text(encoding="utf-8"))
        assert document["lf"] == 1.0
        assert document["counts"]["wellformed"] == [2, 2]

    def test_delete_labels_replace_the_default_list(self, runner, ptb_file, tmp_path):
        default, custom = tmp_path / "default.txt", tmp_path / "custom.txt"
        result = invoke(runner, "roundtrip", ptb_file, "--scheme", "tetra", "--out", default)
        assert result.exit_code == 0, result.output
        result = invoke(runner, "roundtrip", ptb_file, "--scheme", "tetra", "--delete-labels", "NP", "--out", custom)
        assert result.exit_code == 0, result.output
        # the default list drops the final '.' token; NP spans go when NP is deleted
        assert "lf=1.0000 (14/14)" in default.read_text(encoding="utf-8")
        assert "lf=1.0000 (10/10)" in custom.read_text(encoding="utf-8")

    def test_graph_with_enough_planes(self, runner, crossing_sdp_file, tmp_path):
        report = tmp_path / "report.txt"
        result = invoke(runner, "roundtrip", crossing_sdp_file, "--scheme", "gr-6k:3", "--out", report)
        assert result.exit_code == 0, result.output
        assert "lf=1.0000 (10/10)" in report.read_text(encoding="utf-8")

    def test_dropped_arcs_are_not_a_failure(self, runner, crossing_sdp_file, tmp_path):
        report = tmp_path / "report.txt"
        result = invoke(runner, "roundtrip", crossing_sdp_file, "--scheme", "gr-brk", "--k", 1, "--out", report)
        assert result.exit_code == 0, result.output
        assert "lf=1.0000" not in report.read_text(encoding="utf-8")

    def test_lossless_run_below_full_score_fails(self, runner, bbc_conllu_file, tmp_path, mocker):
        from structlabel.controllers import roundtrip_controller
        from structlabel.models.score_schemas import ScoreReport

        mocker.patch.object(roundtrip_controller, "dep_scores", return_value=ScoreReport.from_counts(las=(9, 10)))
        result = invoke(runner, "roundtrip", bbc_conllu_file, "--scheme", "dep-abs", "--out", tmp_path / "r.txt")
        assert result.exit_code == EXIT_CHECK_FAILED


class TestEval:
    def test_identical_treebanks(self, runner, bbc_conllu_file, tmp_path):
        report = tmp_path / "report.txt"
        result = invoke(runner, "eval", bbc_conllu_file, bbc_conllu_file, "--format", "conllu", "--out", report)
        assert result.exit_code == 0, result.output
        assert "las=1.0000 (10/10)" in report.read_text(encoding="utf-8")

    def test_bracket_scoring_with_a_delete_list(self, runner, ptb_file, tmp_path):
        report = tmp_path / "report.txt"
        result = invoke(runner, "eval", ptb_file, ptb_file, "--format", "ptb", "--delete-labels", "TOP .", "--out", report)
        assert result.exit_code == 0, result.output
        assert "lf=1.0000" in report.read_text(encoding="utf-8")

    def test_label_files(self, runner, bbc_conllu_file, tmp_path):
        labels = tmp_path / "labels.tsv"
        invoke(runner, "encode", bbc_conllu_file, "--scheme", "dep-hexa", "--out", labels)
        report = tmp_path / "report.txt"
        result = invoke(runner, "eval", labels, labels, "--labels", "--out", report)
        assert result.exit_code == 0, result.output
        text = report.read_text(encoding="utf-8")
        assert "accuracy=1.0000 (10/10)" in text
        assert "wellformed=1.0000 (1/1)" in text

    def test_scheme_mismatch(self, runner, bbc_conllu_file, tmp_path):
        first, second = tmp_path / "a.tsv", tmp_path / "b.tsv"
        invoke(runner, "encode", bbc_conllu_file, "--scheme", "dep-4b", "--out", first)
        invoke(runner, "encode", bbc_conllu_file, "--scheme", "dep-7b", "--out", second)
        assert invoke(runner, "eval", first, second, "--labels").exit_code == EXIT_USAGE

    def test_treebanks_need_a_format(self, runner, bbc_conllu_file):
        assert invoke(runner, "eval", bbc_conllu_file, bbc_conllu_file).exit_code == EXIT_USAGE


class TestKernelsSelfcheck:
    def test_short_schedule_passes(self, runner):
        result = invoke(runner, "kernels-selfcheck", "--T", 20, "--s", 5)
        assert result.exit_code == 0, result.output
        assert "ddim_exact_inverse" in result.output

    def test_invalid_schedule_is_a_usage_error(self, runner):
        assert invoke(runner, "kernels-selfcheck", "--T", 0).exit_code == EXIT_USAGE


class TestUsageErrors:
    @pytest.mark.parametrize(
        "args",
        [
            ["--scheme", "dep-9b"],
            ["--scheme", "dep-4b", "--k", "2"],
            ["--scheme", "gr-rel"],
            ["--scheme", "dep-4b", "--format", "ptb"],
        ],
    )
    def test_bad_options(self, runner, bbc_conllu_file, args):
        assert invoke(runner, "encode", bbc_conllu_file, *args).exit_code == EXIT_USAGE

    def test_missing_input(self, runner, tmp_path):
        assert invoke(runner, "encode", tmp_path / "missing.conllu", "--scheme", "dep-4b").exit_code == EXIT_USAGE

    def test_unknown_log_level(self, runner, bbc_conllu_file):
        result = invoke(runner, "--log-level", "chatty", "encode", bbc_conllu_file, "--scheme", "dep-4b")
        assert result.exit_code == 2
