// tests/unit/report_test.cc

// Copyright 2026 The Cleancoder Authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "cleancoder/error.h"
#include "cleancoder/report/config.h"
#include "cleancoder/report/csv.h"
#include "cleancoder/report/pipeline.h"
#include "cleancoder/report/snr_report.h"
#include "cleancoder/report/svg.h"
#include "cleancoder/trainer/model_io.h"

using namespace cleancoder;
using namespace cleancoder::report;
namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

fs::path temp_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("cleancoder_report_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

struct RunResult {
  int code = 0;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(CLEANCODER_CLI) + " " + args + " 2>&1";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  std::array<char, 512> buf;
  while (fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

pt::ptree parse_xml(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  pt::read_xml(in, tree);
  return tree;
}

// Collects attribute maps of all elements named `tag` whose class is `cls`.
void collect(const pt::ptree& node, const std::string& tag, const std::string& cls,
             std::vector<std::map<std::string, std::string>>& out) {
  for (const auto& [name, child] : node) {
    if (name == tag) {
      std::map<std::string, std::string> attrs;
      if (auto a = child.get_child_optional("<xmlattr>")) {
        for (const auto& [k, v] : *a) attrs[k] = v.data();
      }
      if (attrs["class"] == cls) out.push_back(attrs);
    }
    collect(child, tag, cls, out);
  }
}

std::string tiny_config_json() {
  return R"({
    "seed": 4,
    "corpus": {"train": 16, "val": 8, "test": 8, "train_speakers": 4, "val_speakers": 2,
               "test_speakers": 2, "seed": 3},
    "encoder": {"d_model": 16, "n_heads": 2, "n_blocks": 2, "conv_kernel": 5, "rel_clip": 8},
    "frontend": {"epochs": 2, "batch_size": 8},
    "asr": {"pretrain": {"epochs": 2, "batch_size": 8, "warmup_steps": 2},
            "scratch": {"epochs": 2, "batch_size": 8, "warmup_steps": 2, "eval_every": 1}}
  })";
}

}  // namespace

// ---------------------------------------------------------------------------
// Config.

TEST(Config, DefaultsAndPresets) {
  ExperimentConfig c = parse_config(nlohmann::json::object());
  EXPECT_EQ(c.encoder.d_model, 64u);
  EXPECT_EQ(c.frontend.epochs, 40u);
  EXPECT_EQ(c.frontend.batch_size, 16u);
  EXPECT_EQ(c.frontend.lr, 1e-3);
  EXPECT_EQ(c.frontend.weight_decay, 1e-4);
  EXPECT_EQ(c.pretrain.scheduler, trainer::Scheduler::kNoam);
  EXPECT_EQ(c.pretrain.warmup_steps, 500u);
  EXPECT_EQ(c.pretrain.stop_at_val_wer, 0.15);
  EXPECT_EQ(c.corpus.train, 800u);
  c = parse_config(nlohmann::json::parse(R"({"encoder": {"size": "medium-mini"}, "seed": 7})"));
  EXPECT_EQ(c.encoder.d_model, 48u);
  EXPECT_EQ(c.frontend.seed, 7u);
  EXPECT_EQ(c.scratch.seed, 7u);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  for (const char* doc : {R"({"bogus": 1})", R"({"corpus": {"trian": 5}})",
                          R"({"asr": {"pretrain": {"lr": 0.1, "momentum": 0.9}}})",
                          R"({"encoder": {"size": "huge"}})", R"({"frontend": {"epochs": "x"}})",
                          R"({"frontend": {"scheduler": "cosine"}})",
                          R"({"corpus": {"noise_kinds": ["pink"]}})",
                          R"({"encoder": {"n_heads": 3}})", R"({"corpus": {"train": 0}})"}) {
    EXPECT_THROW(parse_config(nlohmann::json::parse(doc)), ConfigError) << doc;
  }
}

TEST(Config, ResolvedJsonRoundTrips) {
  ExperimentConfig c = parse_config(nlohmann::json::parse(tiny_config_json()));
  nlohmann::ordered_json j = config_to_json(c);
  ExperimentConfig back = parse_config(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(config_to_json(back), j);
}

// ---------------------------------------------------------------------------
// SNR report.

TEST(SnrReport, GroupMeansMatchManualOracle) {
  std::vector<RowValue> rows;
  numgrad::Rng rng(3);
  const std::vector<double> snrs{17.5, 2.5, 12.5, 7.5};
  for (int i = 0; i < 80; ++i) {
    rows.push_back({"r" + std::to_string(i), snrs[i % 4], i % 8 < 4 ? "white" : "babble",
                    i % 3 ? "noisy" : "denoised", rng.uniform()});
  }
  std::vector<SnrReportRow> rep = snr_report(rows, "mae", 2);
  ASSERT_EQ(rep.size(), 8u);
  double last_snr = -1;
  for (const SnrReportRow& r : rep) {
    EXPECT_GE(r.snr_db, last_snr);
    last_snr = r.snr_db;
    double sum = 0;
    std::size_t n = 0;
    for (const RowValue& v : rows) {
      if (v.snr_db == r.snr_db && v.condition == r.condition) {
        sum += v.value;
        ++n;
      }
    }
    EXPECT_EQ(r.count, n);
    EXPECT_NEAR(r.mean, sum / n, 1e-15);
    EXPECT_EQ(r.seed, 2u);
    EXPECT_EQ(r.metric, "mae");
  }
  EXPECT_EQ(rep[0].condition, "denoised");  // first-seen order

  fs::path dir = temp_dir("snr");
  write_snr_report(dir / "r.csv", rep);
  std::vector<SnrReportRow> back = read_snr_report(dir / "r.csv");
  ASSERT_EQ(back.size(), rep.size());
  for (std::size_t i = 0; i < rep.size(); ++i) EXPECT_EQ(back[i].mean, rep[i].mean);
  write_row_values(dir / "v.csv", "mae", rows);
  std::vector<RowValue> rv = read_row_values(dir / "v.csv", "mae");
  ASSERT_EQ(rv.size(), rows.size());
  EXPECT_EQ(rv[5].value, rows[5].value);
  EXPECT_EQ(rv[5].noise_type, rows[5].noise_type);
}

// ---------------------------------------------------------------------------
// SVG.

TEST(Svg, BarChartIsWellFormedAndCarriesValues) {
  BarChart c{"A & B <test>", "MAE", {"2.5 dB", "7.5 dB"},
             {{"noisy", {1.5, 0.25}}, {"denoised", {-0.5, 0.0}}}};
  const std::string svg = render_bar_chart(c);
  pt::ptree tree = parse_xml(svg);
  std::vector<std::map<std::string, std::string>> bars;
  collect(tree, "rect", "bar", bars);
  ASSERT_EQ(bars.size(), 4u);
  EXPECT_EQ(bars[0]["data-series"], "noisy");
  EXPECT_EQ(bars[0]["data-value"], "1.5");
  EXPECT_EQ(bars[3]["data-group"], "7.5 dB");
  EXPECT_EQ(std::stod(bars[3]["height"]), 0.0);
  EXPECT_THROW(render_bar_chart({"t", "y", {"a"}, {{"s", {1.0, 2.0}}}}), Error);
}

TEST(Svg, LineChartOnePolylinePerSeriesInOrder) {
  LinePanel a{"ctc", "step", "loss", {{"baseline", {0, 1, 2}, {3, 2, 1}}, {"fe", {0, 2}, {2, 0.5}}}};
  LinePanel b{"wer", "step", "wer", {{"baseline", {0}, {1}}, {"fe", {0}, {1}}}};
  pt::ptree tree = parse_xml(render_line_chart({a, b}));
  std::vector<std::map<std::string, std::string>> lines;
  collect(tree, "polyline", "series", lines);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0]["data-series"], "baseline");
  EXPECT_EQ(lines[1]["data-series"], "fe");
  std::istringstream pts(lines[0]["points"]);
  std::string p;
  int n = 0;
  while (pts >> p) ++n;
  EXPECT_EQ(n, 3);
}

// ---------------------------------------------------------------------------
// CLI.

TEST(Cli, UsageAndConfigErrorsExitTwo) {
  fs::path dir = temp_dir("cli_usage");
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("no-such-command").code, 2);
  EXPECT_EQ(run_cli("gen-corpus").code, 2);  // --out missing
  std::ofstream(dir / "bad.json") << "{ not json";
  RunResult r = run_cli("gen-corpus --config " + (dir / "bad.json").string() + " --out " +
                        (dir / "c").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("not valid JSON"), std::string::npos);
  std::ofstream(dir / "unknown.json") << R"({"corpus": {"size": 3}})";
  r = run_cli("gen-corpus --config " + (dir / "unknown.json").string() + " --out " +
              (dir / "c").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("unknown key 'size'"), std::string::npos);
}

TEST(Cli, MissingPrerequisitesNameTheStage) {
  fs::path dir = temp_dir("cli_missing");
  RunResult r = run_cli("pretrain --corpus " + (dir / "nothing").string() + " --out " +
                        (dir / "o").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("run gen-corpus first"), std::string::npos);
  r = run_cli("train-frontend --corpus " + dir.string() + " --backbone " +
              (dir / "none.ckpt").string() + " --out " + (dir / "o").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("run pretrain first"), std::string::npos);
  r = run_cli("train-asr --corpus " + dir.string() + " --frontend " +
              (dir / "none.ckpt").string() + " --out " + (dir / "o").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("run train-frontend first"), std::string::npos);
}

TEST(Cli, DefaultCorpusSummaryAndDeterministicDigest) {
  fs::path dir = temp_dir("cli_default");
  RunResult a = run_cli("gen-corpus --out " + (dir / "a").string());
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_NE(a.out.find("train=800 val=100 test=100"), std::string::npos);
  RunResult b = run_cli("gen-corpus --out " + (dir / "b").string());
  ASSERT_EQ(b.code, 0);
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "a")) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), dir / "a");
    ASSERT_EQ(slurp(e.path()), slurp(dir / "b" / rel)) << rel;
    ++files;
  }
  EXPECT_EQ(files, 2003u);
  fs::remove_all(dir);
}

// Small end-to-end run through the CLI: every stage, both eval commands and
// the curve plot, on a 32-utterance corpus with a tiny encoder.
TEST(Cli, MiniPipeline) {
  fs::path dir = temp_dir("cli_pipeline");
  std::ofstream(dir / "cfg.json") << tiny_config_json();
  const std::string cfg = " --config " + (dir / "cfg.json").string();
  const std::string corpus = (dir / "corpus").string();
  ASSERT_EQ(run_cli("gen-corpus" + cfg + " --out " + corpus).code, 0);
  RunResult pre = run_cli("pretrain" + cfg + " --corpus " + corpus + " --out " +
                          (dir / "pre").string());
  ASSERT_EQ(pre.code, 0) << pre.out;
  RunResult fe = run_cli("train-frontend" + cfg + " --corpus " + corpus + " --backbone " +
                         (dir / "pre" / "asr.ckpt").string() + " --out " + (dir / "fe").string());
  ASSERT_EQ(fe.code, 0) << fe.out;
  ASSERT_EQ(run_cli("train-asr" + cfg + " --corpus " + corpus + " --out " +
                    (dir / "base").string()).code, 0);
  ASSERT_EQ(run_cli("train-asr" + cfg + " --corpus " + corpus + " --frontend " +
                    (dir / "fe" / "frontend.ckpt").string() + " --out " + (dir / "fasr").string())
                .code, 0);

  // Frozen contract across the CLI boundary.
  const asr::AsrModel backbone = trainer::load_asr(dir / "pre" / "asr.ckpt");
  const frontend::CleancoderModel front = trainer::load_frontend(dir / "fe" / "frontend.ckpt");
  for (const std::string& n : front.encoder.names()) {
    EXPECT_EQ(front.encoder.get(n), backbone.params.get(n)) << n;
  }

  // eval-mae: schema and recomputable means.
  const std::string test_manifest = (dir / "corpus" / "manifests" / "test.jsonl").string();
  RunResult mae = run_cli("eval-mae" + cfg + " --frontend " +
                          (dir / "fe" / "frontend.ckpt").string() + " --manifest " +
                          test_manifest + " --out " + (dir / "mae").string());
  ASSERT_EQ(mae.code, 0) << mae.out;
  std::vector<SnrReportRow> mrep = read_snr_report(dir / "mae" / "mae_report.csv");
  EXPECT_EQ(mrep.size(), 4u * 2u);
  std::vector<RowValue> mrows = read_row_values(dir / "mae" / "mae_rows.csv", "mae");
  EXPECT_EQ(mrows.size(), 16u);
  for (const SnrReportRow& r : mrep) {
    double s = 0;
    std::size_t n = 0;
    for (const RowValue& v : mrows) {
      if (v.snr_db == r.snr_db && v.condition == r.condition) s += v.value, ++n;
    }
    EXPECT_EQ(r.count, n);
    EXPECT_NEAR(r.mean, s / n, 1e-12);
    EXPECT_EQ(r.seed, 4u);
  }
  std::vector<std::map<std::string, std::string>> bars;
  collect(parse_xml(slurp(dir / "mae" / "mae.svg")), "rect", "bar", bars);
  EXPECT_EQ(bars.size(), 8u);

  // eval-wer: conditions double with a frontend.
  const std::string asr_ckpt = (dir / "pre" / "asr.ckpt").string();
  RunResult w1 = run_cli("eval-wer" + cfg + " --asr " + asr_ckpt + " --manifest " +
                         test_manifest + " --out " + (dir / "wer1").string());
  RunResult w2 = run_cli("eval-wer" + cfg + " --asr " + asr_ckpt + " --frontend " +
                         (dir / "fe" / "frontend.ckpt").string() + " --manifest " +
                         test_manifest + " --out " + (dir / "wer2").string());
  ASSERT_EQ(w1.code, 0) << w1.out;
  ASSERT_EQ(w2.code, 0) << w2.out;
  EXPECT_EQ(read_snr_report(dir / "wer1" / "wer_report.csv").size(), 4u);
  std::vector<SnrReportRow> wrep = read_snr_report(dir / "wer2" / "wer_report.csv");
  EXPECT_EQ(wrep.size(), 8u);
  report::CsvTable wrows = report::read_csv(dir / "wer2" / "wer_rows.csv");
  EXPECT_EQ(wrows.header, (std::vector<std::string>{"id", "snr_db", "noise_type", "condition",
                                                    "wer", "ref", "hyp"}));
  EXPECT_EQ(wrows.rows.size(), 16u);

  // Clean val audio without a frontend reproduces the pretrain validation WER.
  RunResult wc = run_cli("eval-wer" + cfg + " --asr " + asr_ckpt + " --input clean --manifest " +
                         (dir / "corpus" / "manifests" / "val.jsonl").string() + " --out " +
                         (dir / "werc").string());
  ASSERT_EQ(wc.code, 0) << wc.out;
  double best = 1e9;
  for (const auto& p : trainer::read_curves(dir / "pre" / "curves.csv")) {
    best = std::min(best, p.val_wer);
  }
  const auto crep = read_snr_report(dir / "werc" / "wer_report.csv");
  EXPECT_NEAR(overall_mean(crep, "clean"), best, 1e-6);

  // Curves: legend order follows argument order.
  RunResult plot = run_cli("plot-curves --logs " + (dir / "base" / "curves.csv").string() + " " +
                           (dir / "fasr" / "curves.csv").string() +
                           " --labels baseline frontend --out " + (dir / "curves.svg").string());
  ASSERT_EQ(plot.code, 0) << plot.out;
  std::vector<std::map<std::string, std::string>> lines;
  collect(parse_xml(slurp(dir / "curves.svg")), "polyline", "series", lines);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0]["data-series"], "baseline");
  EXPECT_EQ(lines[1]["data-series"], "frontend");
  RunResult bad = run_cli("plot-curves --logs " + (dir / "mae" / "mae_rows.csv").string() +
                          " --out " + (dir / "x.svg").string());
  EXPECT_EQ(bad.code, 1);
}

TEST(EvalMae, IdenticalNoisyAndCleanGiveZeroNoisyMae) {
  fs::path dir = temp_dir("mae_zero");
  std::ofstream(dir / "cfg.json") << tiny_config_json();
  ExperimentConfig cfg = load_config(dir / "cfg.json");
  run_gen_corpus(cfg, dir / "corpus");
  std::vector<corpus::ManifestRow> rows =
      corpus::read_manifest(corpus::manifest_path(dir / "corpus", "test"));
  for (auto& r : rows) r.noisy_path = r.clean_path;
  corpus::write_manifest(dir / "same.jsonl", rows);

  asr::AsrModel backbone;
  backbone.config = cfg.encoder;
  asr::init_asr_model(backbone, 1);
  backbone.stats.mean.assign(80, -10.0);
  backbone.stats.stddev.assign(80, 5.0);
  trainer::save_frontend(dir / "fe.ckpt", trainer::frontend_from_asr(backbone, 1));
  EvalOutputs o = run_eval_mae(dir / "fe.ckpt", dir / "same.jsonl", dir / "out", 1);
  for (const SnrReportRow& r : o.report) {
    if (r.condition == "noisy") EXPECT_EQ(r.mean, 0.0);
  }

  for (auto& r : rows) r.clean_path.clear();
  corpus::write_manifest(dir / "noclean.jsonl", rows);
  EXPECT_THROW(run_eval_mae(dir / "fe.ckpt", dir / "noclean.jsonl", dir / "out2", 1), Error);
}
