// Copyright 2026 The Dialflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dialflow: train | gradcheck | evaluate | ensemble | augment | serve | chat
// Exit codes: 0 success, 1 runtime failure, 2 usage.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dialflow/augment/augment.h"
#include "dialflow/core/synth_corpus.h"
#include "dialflow/ensemble/ensemble.h"
#include "dialflow/eval/evaluate.h"
#include "dialflow/model/checkpoint.h"
#include "dialflow/model/grad_check.h"
#include "dialflow/model/train.h"
#include "dialflow/service/chat_service.h"
#include "dialflow/service/http_api.h"

namespace df = dialflow;

namespace {

constexpr double kGradTolerance = 1e-4;

// ---- train

struct TrainArgs {
  std::string corpus;
  size_t synth = 0;
  uint64_t synth_seed = 1;
  std::string out;
  std::string history;
  df::ModelConfig model;
  df::TrainOptions opts;
  bool float32 = false;
  bool no_kg = false;
};

int run_train(const TrainArgs& a) {
  if (a.corpus.empty() == (a.synth == 0)) {
    throw CLI::ValidationError("train", "give exactly one of --corpus or --synth");
  }
  const auto corpus = a.corpus.empty() ? df::gen_synth_corpus(a.synth_seed, a.synth)
                                       : df::parse_corpus(a.corpus);
  df::ModelConfig cfg = a.model;
  cfg.float_width = a.float32 ? 32 : 64;
  df::TrainOptions opts = a.opts;
  opts.grounded_objective = !a.no_kg;
  opts.on_epoch = [](const df::EpochStats& s) {
    std::printf("epoch %3d  total %.4f  flow %.4f  gen %.4f  bow %.4f  kg %.4f  (%zu dialogues, %.1fs)\n",
                s.epoch, s.mean.total, s.mean.flow, s.mean.gen, s.mean.bow, s.kg, s.dialogues, s.seconds);
    std::fflush(stdout);
  };
  const auto result = df::train(corpus, cfg, opts);
  df::save_checkpoint(result.model, a.out);
  std::printf("saved %s (vocab %d)\n", a.out.c_str(), result.model.config().vocab_size);
  if (!a.history.empty()) {
    nlohmann::json h = nlohmann::json::array();
    for (const auto& s : result.history) {
      h.push_back({{"epoch", s.epoch}, {"total", s.mean.total}, {"flow", s.mean.flow},
                   {"gen", s.mean.gen}, {"bow", s.mean.bow}, {"kg", s.kg}, {"seconds", s.seconds}});
    }
    std::ofstream(a.history) << h.dump(2) << "\n";
  }
  return 0;
}

// ---- gradcheck

int run_gradcheck(const df::GradCheckOptions& o, uint64_t seed) {
  const auto r = df::grad_check_micro(o, seed);
  for (const auto& t : r.tensors) {
    std::printf("%-16s n=%-4zu worst (%ld,%ld) analytic % .6e numeric % .6e rel %.3e\n",
                t.name.c_str(), t.checked, t.row, t.col, t.analytic, t.numeric, t.rel_error);
  }
  std::printf("max relative error %.3e (%s), %zu coordinates, eps %g, %.2fs\n", r.max_rel_error,
              r.worst_tensor.c_str(), r.coordinates, r.eps, r.seconds);
  return r.max_rel_error <= kGradTolerance ? 0 : 1;
}

// ---- evaluate

int run_evaluate(const std::string& pred, const std::string& ref, const std::string& metrics,
                 const std::string& embeddings, const std::string& json_out) {
  std::vector<std::string> names;
  for (size_t b = 0; b <= metrics.size();) {
    const auto e = std::min(metrics.find(',', b), metrics.size());
    if (e > b) names.push_back(metrics.substr(b, e - b));
    b = e + 1;
  }
  const auto table = embeddings.empty() ? df::EmbeddingTable::hashed() : df::EmbeddingTable::from_file(embeddings);
  const auto report = df::evaluate_corpus(pred, ref, names, table);
  std::cout << report.table();
  if (!json_out.empty()) {
    if (json_out == "-") {
      std::cout << report.to_json().dump(2) << "\n";
    } else {
      std::ofstream(json_out) << report.to_json().dump(2) << "\n";
    }
  }
  return 0;
}

// ---- ensemble

struct EnsembleArgs {
  std::string input;
  std::string output;
  std::string metric = "meteor";
  std::string embeddings;
  bool dedup = false;
  std::string checkpoint;
  df::GroundedOptions grounded;
};

int run_ensemble(const EnsembleArgs& a) {
  const auto table = a.embeddings.empty() ? df::EmbeddingTable::hashed() : df::EmbeddingTable::from_file(a.embeddings);
  const df::Metric metric = df::metric_by_name(a.metric, &table);
  std::ifstream in(a.input);
  if (!in) throw std::runtime_error("cannot open " + a.input);
  std::ofstream file;
  if (!a.output.empty()) {
    file.open(a.output);
    if (!file) throw std::runtime_error("cannot write " + a.output);
  }
  std::ostream& out = a.output.empty() ? std::cout : file;

  if (!a.checkpoint.empty()) {
    const auto model = df::load_checkpoint(a.checkpoint);
    df::GroundedOptions go = a.grounded;
    go.dedup = a.dedup;
    size_t i = 0;
    for (const auto& d : df::parse_corpus(in)) {
      go.seed = df::mix_seed(a.grounded.seed, i++);
      const auto r = df::grounded_respond(d, &model, metric, go);
      out << nlohmann::json{{"id", d.id}, {"selected", r.response}, {"candidates", r.candidates},
                            {"scores", r.ensemble.scores}}.dump()
          << "\n";
    }
    return 0;
  }

  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cands;
    try {
      cands = nlohmann::json::parse(line).at("candidates").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(a.input + " line " + std::to_string(n) + ": " + e.what());
    }
    std::vector<std::string> kept;
    for (const auto& c : cands) {
      if (!a.dedup || std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(c);
    }
    std::vector<df::Words> words;
    for (const auto& c : kept) words.push_back(df::split_words(c));
    const auto r = df::ensemble_select(words, metric);
    out << nlohmann::json{{"selected", kept[r.selected_index]}, {"scores", r.scores}}.dump() << "\n";
  }
  return 0;
}

// ---- augment

int run_augment(const std::string& corpus_path, const std::string& out_path, size_t n, uint64_t seed,
                const df::AugmentConfig& cfg) {
  const auto corpus = df::parse_corpus(corpus_path);
  df::Rng rng(seed);
  std::vector<df::Dialogue> out;
  size_t counts[3] = {0, 0, 0};
  for (size_t i = 0; i < n; ++i) {
    auto s = df::sample_training_dialogue(corpus, cfg, rng);
    ++counts[static_cast<int>(s.branch)];
    out.push_back(std::move(s.dialogue));
  }
  if (out_path.empty() || out_path == "-") {
    df::write_corpus(std::cout, out);
  } else {
    df::write_corpus(out_path, out);
  }
  std::fprintf(stderr, "raw %zu  truncated %zu  concatenated %zu\n", counts[0], counts[1], counts[2]);
  return 0;
}

// ---- serve / chat

const std::vector<std::string> kServiceKeys = {
    "checkpoint", "abusive_lexicon", "casing_lexicon", "nli_rules", "fallbacks",
    "embeddings", "log",             "ui_dir",         "host",      "port",
    "n_candidates", "top_p",         "max_len",        "seed",      "k",
    "alpha"};

struct ServiceArgs {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void add_service_options(CLI::App* sub, ServiceArgs& a) {
  sub->add_option("--config", a.config_file, "key = value config file")->check(CLI::ExistingFile);
  for (const auto& key : kServiceKeys) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    a.options[key] = sub->add_option(flag, a.values[key], "overrides '" + key + "' from the config file");
  }
}

df::ServiceConfig resolve_service(const ServiceArgs& a) {
  df::ServiceConfig cfg;
  if (!a.config_file.empty()) cfg.merge_file(a.config_file);
  for (const auto& key : kServiceKeys) {
    if (a.options.at(key)->count() > 0) cfg.set(key, a.values.at(key));
  }
  cfg.validate();
  return cfg;
}

int run_serve(const ServiceArgs& a) {
  const auto cfg = resolve_service(a);
  df::ChatService svc(cfg, df::load_resources(cfg));
  for (const auto& w : svc.recovery_warnings()) std::fprintf(stderr, "warning: %s\n", w.c_str());
  if (!svc.model_loaded()) std::fprintf(stderr, "warning: no checkpoint; messages will answer 503\n");
  df::HttpServer server(svc, cfg.ui_dir);
  const int port = server.bind(cfg.host, cfg.port);
  std::printf("listening on http://%s:%d (%zu sessions recovered)\n", cfg.host.c_str(), port,
              svc.session_count());
  std::fflush(stdout);
  server.listen();
  return 0;
}

int run_chat(const ServiceArgs& a) {
  const auto cfg = resolve_service(a);
  df::ChatService svc(cfg, df::load_resources(cfg));
  for (const auto& w : svc.recovery_warnings()) std::fprintf(stderr, "warning: %s\n", w.c_str());
  const std::string id = svc.create_session();
  std::fprintf(stderr, "session %s; empty line or EOF quits\n", id.c_str());
  std::string line;
  while (true) {
    std::cout << "you> " << std::flush;
    if (!std::getline(std::cin, line) || df::split_words(line).empty()) break;
    try {
      const auto r = svc.post_message(id, line);
      std::cout << "bot> " << r.reply << "\n";
    } catch (const df::ServiceError& e) {
      std::cerr << "error: " << e.what() << "\n";
      if (e.status >= 500) return 1;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialflow: dialogue planning, ensemble selection and an interactive chat service"};
  app.require_subcommand(1);

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "train the planning model");
  train->add_option("--corpus", ta.corpus, "JSONL corpus")->check(CLI::ExistingFile);
  train->add_option("--synth", ta.synth, "train on N synthetic dialogues instead");
  train->add_option("--synth-seed", ta.synth_seed, "seed of the synthetic corpus");
  train->add_option("--out", ta.out, "checkpoint to write")->required();
  train->add_option("--history", ta.history, "write per-epoch losses as JSON");
  train->add_option("--epochs", ta.opts.epochs)->capture_default_str();
  train->add_option("--lr", ta.opts.lr)->capture_default_str();
  train->add_option("--batch", ta.opts.batch_size)->capture_default_str();
  train->add_option("--clip", ta.opts.clip_norm, "gradient norm clip, <= 0 disables")->capture_default_str();
  train->add_option("--seed", ta.opts.seed)->capture_default_str();
  train->add_option("--vocab-cap", ta.opts.vocab_cap)->capture_default_str();
  train->add_option("--p-truncate", ta.opts.augment.p_truncate)->capture_default_str();
  train->add_option("--p-concat", ta.opts.augment.p_concat)->capture_default_str();
  train->add_option("--d-model", ta.model.d_model)->capture_default_str();
  train->add_option("--layers", ta.model.n_layers)->capture_default_str();
  train->add_option("--heads", ta.model.n_heads)->capture_default_str();
  train->add_option("--d-ff", ta.model.d_ff)->capture_default_str();
  train->add_option("--flow-layers", ta.model.flow_layers)->capture_default_str();
  train->add_option("--max-seq", ta.model.max_seq)->capture_default_str();
  train->add_option("--max-utterances", ta.model.max_utterances)->capture_default_str();
  train->add_flag("--oracle-delta", ta.model.oracle_delta, "condition on encoder differences");
  train->add_flag("--float32", ta.float32, "store checkpoint tensors as 32-bit floats");
  train->add_flag("--no-kg", ta.no_kg, "skip the grounded language-model objective");

  df::GradCheckOptions go;
  uint64_t gc_seed = 1;
  auto* gradcheck = app.add_subcommand("gradcheck", "finite-difference check on the micro config");
  gradcheck->add_option("--eps", go.eps)->capture_default_str();
  gradcheck->add_option("--floor", go.floor, "relative-error denominator floor")->capture_default_str();
  gradcheck->add_option("--sample", go.sample, "coordinates per tensor, 0 = all")->capture_default_str();
  gradcheck->add_option("--seed", gc_seed)->capture_default_str();

  std::string pred, ref, metrics = "bleu,meteor,embed", emb, json_out;
  auto* evaluate = app.add_subcommand("evaluate", "score predictions against references line by line");
  evaluate->add_option("--pred", pred)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--ref", ref)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--metrics", metrics)->capture_default_str();
  evaluate->add_option("--embeddings", emb, "word vector file")->check(CLI::ExistingFile);
  evaluate->add_option("--json", json_out, "write the JSON report here ('-' for stdout)");

  EnsembleArgs ea;
  auto* ensemble = app.add_subcommand("ensemble", "consensus selection over candidate sets");
  ensemble->add_option("--input", ea.input, "JSONL of {\"candidates\": [...]}, or dialogues with --checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  ensemble->add_option("--output", ea.output, "JSONL results (stdout when omitted)");
  ensemble->add_option("--metric", ea.metric)->check(CLI::IsMember({"meteor", "bleu", "embed"}))->capture_default_str();
  ensemble->add_option("--embeddings", ea.embeddings)->check(CLI::ExistingFile);
  ensemble->add_flag("--dedup", ea.dedup, "drop exact duplicate candidates first");
  ensemble->add_option("--checkpoint", ea.checkpoint, "sample candidates for each input dialogue")
      ->check(CLI::ExistingFile);
  ensemble->add_option("--k", ea.grounded.k, "samples per dialogue")->capture_default_str();
  ensemble->add_option("--top-p", ea.grounded.top_p)->capture_default_str();
  ensemble->add_option("--max-len", ea.grounded.max_len)->capture_default_str();
  ensemble->add_option("--seed", ea.grounded.seed)->capture_default_str();

  std::string aug_in, aug_out;
  size_t aug_n = 100;
  uint64_t aug_seed = 1;
  df::AugmentConfig ac;
  auto* augment = app.add_subcommand("augment", "sample augmented training dialogues");
  augment->add_option("--corpus", aug_in)->required()->check(CLI::ExistingFile);
  augment->add_option("--out", aug_out, "JSONL output (stdout when omitted)");
  augment->add_option("--n", aug_n)->capture_default_str();
  augment->add_option("--seed", aug_seed)->capture_default_str();
  augment->add_option("--p-truncate", ac.p_truncate)->capture_default_str();
  augment->add_option("--p-concat", ac.p_concat)->capture_default_str();
  augment->add_option("--min-turns", ac.min_turns)->capture_default_str();

  ServiceArgs serve_args, chat_args;
  auto* serve = app.add_subcommand("serve", "run the HTTP chat API");
  add_service_options(serve, serve_args);
  auto* chat = app.add_subcommand("chat", "terminal chat through the same pipeline");
  add_service_options(chat, chat_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (code == 0) return 0;
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*train) return run_train(ta);
    if (*gradcheck) return run_gradcheck(go, gc_seed);
    if (*evaluate) return run_evaluate(pred, ref, metrics, emb, json_out);
    if (*ensemble) return run_ensemble(ea);
    if (*augment) return run_augment(aug_in, aug_out, aug_n, aug_seed, ac);
    if (*serve) return run_serve(serve_args);
    if (*chat) return run_chat(chat_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
