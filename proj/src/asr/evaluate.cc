// src/asr/evaluate.cc

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

#include "cleancoder/asr/evaluate.h"

#include <optional>

#include "cleancoder/asr/wer.h"
#include "cleancoder/corpus/synth.h"
#include "cleancoder/error.h"
#include "cleancoder/log.h"
#include "cleancoder/parallel.h"
#include "cleancoder/report/csv.h"

namespace cleancoder::asr {

EvalRun evaluate_model(const AsrModel& model, const std::vector<corpus::ManifestRow>& rows,
                       const EvalOptions& options) {
  std::vector<std::optional<RowResult>> results(rows.size());
  std::vector<std::string> errors(rows.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const corpus::ManifestRow& r = rows[i];
    try {
      const auto& path =
          options.source == corpus::InputSource::kNoisy ? r.noisy_path : r.clean_path;
      if (path.empty()) fail("no audio path for the requested input");
      dsp::MelSpectrogram feats = corpus::load_features(path);
      if (options.frontend) feats = frontend::cleancoder_forward(*options.frontend, feats);
      std::vector<int> hyp = transcribe(model, feats);
      RowResult res;
      res.id = r.id;
      res.snr_db = r.snr_db;
      res.noise_type = r.noise_type;
      res.condition = options.condition;
      res.ref = r.text;
      res.hyp = hypothesis_text(hyp);
      res.wer = transcript_wer(r.text, hyp);
      results[i] = std::move(res);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  EvalRun run;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (results[i]) {
      run.rows.push_back(std::move(*results[i]));
    } else {
      log::warning("row " + rows[i].id + " failed: " + errors[i]);
      run.errors.push_back({rows[i].id, errors[i]});
    }
  }
  return run;
}

double mean_wer(const std::vector<RowResult>& rows) {
  if (rows.empty()) return 0.0;
  double s = 0;
  for (const RowResult& r : rows) s += r.wer;
  return s / static_cast<double>(rows.size());
}

void write_wer_rows(const std::filesystem::path& path, const std::vector<RowResult>& rows) {
  report::CsvWriter w(path, {"id", "snr_db", "noise_type", "condition", "wer", "ref", "hyp"});
  for (const RowResult& r : rows) {
    w.row({r.id, report::format_real(r.snr_db), r.noise_type, r.condition,
           report::format_real(r.wer), r.ref, r.hyp});
  }
  w.close();
}

}  // namespace cleancoder::asr
