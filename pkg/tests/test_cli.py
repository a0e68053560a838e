import json

import numpy as np
import pytest

from statjpeg.cli import main, resolve_table_source, split_source_list
from statjpeg.imgfile import load_image, save_ppm
from statjpeg.jpeg import decode_coefficients
from statjpeg.quant import zigzag
from statjpeg.stats import load_stats
from statjpeg.synth import generate_corpus, synth_image
from statjpeg.tables import load_table, same_q_table


@pytest.fixture
def sample_ppm(tmp_path, rng):
    img = synth_image("speckle", rng, 32, 32)
    path = tmp_path / "input.ppm"
    save_ppm(img, path)
    return path


class TestAnalyze:
    def test_interval_two_samples_half(self, mini_corpus, tmp_path, capsys):
        out = tmp_path / "stats.json"
        code = main(["analyze", str(mini_corpus), "--k", "2", "--out", str(out)])
        assert code == 0
        printed = capsys.readouterr().out
        assert "classes: 4" in printed
        assert "sampled: 16" in printed
        assert load_stats(out).total_blocks > 0

    def test_interval_one_samples_all(self, mini_corpus, tmp_path, capsys):
        out = tmp_path / "stats.json"
        assert main(["analyze", str(mini_corpus), "--out", str(out)]) == 0
        assert "sampled: 32" in capsys.readouterr().out

    def test_csv_export(self, mini_corpus, tmp_path):
        out = tmp_path / "stats.json"
        csv_path = tmp_path / "deltas.csv"
        main(["analyze", str(mini_corpus), "--out", str(out), "--csv", str(csv_path)])
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "band,stddev"
        assert len(lines) == 65

    def test_bad_directory_exits_two(self, tmp_path, capsys):
        code = main(["analyze", str(tmp_path / "missing"), "--out", "x.json"])
        assert code == 2
        assert "error:" in capsys.readouterr().err


@pytest.fixture
def stats_file(mini_corpus, tmp_path_factory):
    out = tmp_path_factory.mktemp("stats") / "stats.json"
    assert main(["analyze", str(mini_corpus), "--out", str(out)]) == 0
    return out


class TestDesignTable:
    def test_default_parameters_grid(self, stats_file, tmp_path, capsys):
        out = tmp_path / "table.json"
        assert main(["design-table", str(stats_file), "--out", str(out)]) == 0
        printed = capsys.readouterr().out
        assert len([r for r in printed.splitlines() if len(r.split()) == 8]) == 8
        table = load_table(out)
        assert table.provenance["kind"] == "plm"
        assert table.values.min() >= 5

    def test_worked_values_via_synthetic_stats(self, tmp_path):
        # stats whose deltas hit the four documented operating points
        deltas = np.zeros(64)
        deltas[1], deltas[2], deltas[3] = 20.0, 40.0, 100.0
        doc = {
            "schema_version": 1,
            "channels": {"y": {
                str(i): {"count": 10, "mean": 0.0, "stddev": float(deltas[i])}
                for i in range(64)
            }},
            "total_blocks": 10,
            "source_manifest_digest": None,
        }
        stats_path = tmp_path / "stats.json"
        stats_path.write_text(json.dumps(doc))
        out = tmp_path / "table.json"
        assert main(["design-table", str(stats_path), "--out", str(out)]) == 0
        table = load_table(out)
        assert table.values[0] == 255
        assert table.values[1] == 60
        assert table.values[2] == 40
        assert table.values[3] == 5

    def test_missing_stats_file_exits_two(self, tmp_path):
        assert main(["design-table", str(tmp_path / "no.json"), "--out", "t.json"]) == 2

    def test_parameter_overrides(self, stats_file, tmp_path):
        out = tmp_path / "table.json"
        assert main([
            "design-table", str(stats_file), "--out", str(out),
            "--qmin", "1", "--k1", "0", "--a", "99",
        ]) == 0
        table = load_table(out)
        # HF bands (all small deltas in this corpus) now map to a flat 99
        assert (table.values == 99).sum() > 0


class TestCompressDecompress:
    def test_round_trip_geometry(self, sample_ppm, tmp_path, capsys):
        jpg = tmp_path / "out.jpg"
        ppm = tmp_path / "back.ppm"
        assert main(["compress", str(sample_ppm), "--table", "standard-qf:90",
                     "--out", str(jpg)]) == 0
        assert main(["decompress", str(jpg), "--out", str(ppm)]) == 0
        original = load_image(sample_ppm)
        restored = load_image(ppm)
        assert (restored.width, restored.height, restored.channels) == (
            original.width, original.height, original.channels,
        )

    def test_same_q_spec_equals_table_file(self, sample_ppm, tmp_path):
        from statjpeg.tables import save_table

        table_path = tmp_path / "fours.json"
        save_table(same_q_table(4), table_path)
        a = tmp_path / "a.jpg"
        b = tmp_path / "b.jpg"
        main(["compress", str(sample_ppm), "--table", "same-q:4", "--out", str(a)])
        main(["compress", str(sample_ppm), "--table", f"file:{table_path}", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_rm_hf_spec_zeroes_top_zigzag(self, sample_ppm, tmp_path):
        jpg = tmp_path / "rm.jpg"
        assert main(["compress", str(sample_ppm), "--table", "rm-hf:3,qf:100",
                     "--out", str(jpg)]) == 0
        blocks, _ = decode_coefficients(jpg.read_bytes())
        for comp in blocks:
            assert np.all(zigzag(comp)[:, 61:] == 0)

    def test_plm_source(self, sample_ppm, stats_file, tmp_path):
        jpg = tmp_path / "plm.jpg"
        assert main(["compress", str(sample_ppm),
                     "--table", f"plm:{stats_file}", "--out", str(jpg)]) == 0
        assert jpg.read_bytes()[:2] == b"\xff\xd8"

    def test_unknown_source_exits_two(self, sample_ppm, tmp_path, capsys):
        code = main(["compress", str(sample_ppm), "--table", "wavelet:3",
                     "--out", str(tmp_path / "x.jpg")])
        assert code == 2
        assert "table source" in capsys.readouterr().err


@pytest.fixture(scope="session")
def tiny_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("tiny") / "corpus"
    generate_corpus(root, classes=("stripes", "speckle"), images_per_class=3,
                    size=(40, 40))
    return root


class TestBenchmark:
    def test_row_counts_and_reference_cr(self, tiny_corpus, stats_file, tmp_path, capsys):
        csv_path = tmp_path / "rows.csv"
        json_path = tmp_path / "agg.json"
        code = main([
            "benchmark", str(tiny_corpus),
            "--table", f"plm:{stats_file}",
            "--table", "standard-qf:100",
            "--table", "same-q:4",
            "--table", "rm-hf:3",
            "--csv", str(csv_path), "--json", str(json_path),
        ])
        assert code == 0
        lines = csv_path.read_text().strip().splitlines()
        assert len(lines) == 1 + 6 * 4  # header + images x sources
        summary = json.loads(json_path.read_text())
        assert summary["images"] == 6
        assert summary["sources"]["standard-qf:100"]["compression_rate"] == 1.0
        for agg in summary["sources"].values():
            assert "mean_psnr_db" in agg and "mean_zero_fraction" in agg

    def test_assert_cr_order_pass_and_fail(self, tiny_corpus, stats_file, tmp_path, capsys):
        args = [
            "benchmark", str(tiny_corpus),
            "--table", f"plm:{stats_file}",
            "--table", "same-q:4",
            "--table", "standard-qf:100",
        ]
        good = main(args + ["--assert-cr-order",
                            f"plm:{stats_file},same-q:4,standard-qf:100"])
        assert good == 0
        capsys.readouterr()
        bad = main(args + ["--assert-cr-order",
                           f"standard-qf:100,plm:{stats_file}"])
        assert bad == 1
        assert "assertion failed" in capsys.readouterr().err

    def test_unknown_assert_label_exits_two(self, tiny_corpus, tmp_path):
        code = main([
            "benchmark", str(tiny_corpus),
            "--table", "same-q:4",
            "--assert-cr-order", "same-q:4,same-q:9",
        ])
        assert code == 2


def test_split_source_list_keeps_rm_hf_options_together():
    parts = split_source_list("plm:s.json,rm-hf:3,qf:80,same-q:4")
    assert parts == ["plm:s.json", "rm-hf:3,qf:80", "same-q:4"]


def test_resolve_rm_hf_base_quality():
    source = resolve_table_source("rm-hf:2,qf:50")
    assert source.drop == frozenset({62, 63})
    assert source.luma.values[0] == 16  # Annex-K luma DC step at QF 50
