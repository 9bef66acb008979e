// Copyright 2026 The dgsum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dgsum: command-line entry point.
//
//   dgsum validate CORPUS
//   dgsum graph CORPUS [--meeting ID] [--out FILE]
//   dgsum build-pseudo --corpus FILE --out FILE [--mode discourse|rule] [--window N]
//   dgsum pretrain | train | finetune --corpus FILE --out-dir DIR [...]
//   dgsum generate | evaluate | ablate | export-attention --checkpoint FILE [...]
//
// Exit codes: 0 ok, 1 invalid input, 2 usage, 3 runtime failure.
// DGSUM_PRECISION=single|double selects the scalar type (default double).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "dgsum/checkpoint.hpp"
#include "dgsum/corpus.hpp"
#include "dgsum/eval.hpp"
#include "dgsum/graph.hpp"
#include "dgsum/pseudo.hpp"
#include "dgsum/training.hpp"

namespace fs = std::filesystem;

namespace dgsum::cli {
namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Options {
  RunConfig run;
  fs::path input;       // positional corpus for validate / graph
  fs::path output;      // single output file
  fs::path checkpoint;  // model to load
  fs::path init;        // finetune starting point
  fs::path candidates;  // evaluate without a model
  fs::path lexicon;
  std::string split;    // train | dev | test | all
  std::string mode;
  std::string endpoint = "source";
  std::string meeting;
  std::vector<double> fractions = {0.0, 0.25, 0.5, 0.75, 1.0};
};

void require_file(const fs::path& path, const std::string& what) {
  if (path.empty()) throw UsageError(what + " is required");
  if (!fs::exists(path) || fs::is_directory(path)) {
    throw ValidationError(what + " not found: " + path.string());
  }
}

void require_output(const fs::path& path, const std::string& what) {
  if (path.empty()) throw UsageError(what + " is required");
}

std::string fixed(double x) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << x;
  return s.str();
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

/// Meetings of one split, or the whole corpus when no manifest is given.
std::vector<Meeting> select_split(const RunConfig& run, const std::string& split) {
  require_file(run.corpus, "--corpus");
  auto meetings = load_meetings(run.corpus);
  if (run.splits.empty() || split == "all") return meetings;
  require_file(run.splits, "--splits");
  auto parts = apply_splits(meetings, load_split_manifest(run.splits));
  if (split == "train") return parts.train;
  if (split == "dev") return parts.dev;
  if (split == "test") return parts.test;
  throw UsageError("unknown split: " + split);
}

// ---------------------------------------------------------------------------
// validate / graph / build-pseudo

int run_validate(const Options& o) {
  require_file(o.input, "corpus");
  const auto meetings = load_meetings(o.input);
  if (meetings.empty()) throw ValidationError("corpus is empty: " + o.input.string());
  std::size_t utterances = 0, relations = 0;
  std::map<RelationType, int> histogram;
  for (const auto& m : meetings) {
    utterances += m.utterances.size();
    relations += m.relations.size();
    for (const auto& r : m.relations) ++histogram[r.relation];
  }
  std::cout << "meetings " << meetings.size() << '\n'
            << "utterances " << utterances << '\n'
            << "relations " << relations << '\n';
  for (auto type : all_relation_types()) {
    std::cout << "  " << to_string(type) << ' ' << histogram[type] << '\n';
  }
  return 0;
}

int run_graph(const Options& o) {
  require_file(o.input, "corpus");
  const auto meetings = load_meetings(o.input);
  std::ostringstream buf;
  bool found = o.meeting.empty();
  for (const auto& m : meetings) {
    if (!o.meeting.empty() && m.id != o.meeting) continue;
    found = true;
    buf << graph_to_json(build_discourse_graph(m)) << '\n';
  }
  if (!found) throw ValidationError("no meeting named " + o.meeting);
  if (o.output.empty()) {
    std::cout << buf.str();
  } else {
    open_output(o.output) << buf.str();
  }
  return 0;
}

int run_build_pseudo(const Options& o) {
  require_file(o.run.corpus, "--corpus");
  require_output(o.output, "--out");
  PseudoOptions options;
  options.window = o.run.window;
  if (options.window < 1) throw UsageError("--window must be positive");
  options.source = o.mode == "rule" ? QuestionSource::kRule : QuestionSource::kDiscourse;
  options.endpoint =
      o.endpoint == "target" ? QuestionEndpoint::kTarget : QuestionEndpoint::kSource;
  if (!o.lexicon.empty()) require_file(o.lexicon, "--lexicon");
  const auto tagger = o.lexicon.empty() ? default_tagger() : lexicon_tagger(o.lexicon);

  const auto corpus = build_pseudo_corpus(load_meetings(o.run.corpus), options, tagger);
  auto out = open_output(o.output);
  write_meetings(out, pseudo_meetings(corpus));
  std::cout << "questions " << corpus.questions << '\n'
            << "filtered_out " << corpus.filtered_out << '\n'
            << "empty_windows " << corpus.empty_windows << '\n'
            << "pairs " << corpus.pairs.size() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// training

template <typename S>
class RunLog {
 public:
  explicit RunLog(const fs::path& dir) : dir_(dir) {
    fs::create_directories(dir_);
    log_ = open_output(dir_ / "train.log");
  }

  EpochCallback<S> callback(const std::string& stage) {
    return [this, stage](const EpochStats& stats, const Model<S>& model) {
      const auto line = stage + ' ' + format_epoch_line(stats);
      log_ << line << '\n' << std::flush;
      std::cout << line << '\n' << std::flush;
      if (stats.improved) {
        save_checkpoint(dir_ / (stage + "-epoch-" + std::to_string(stats.epoch) + ".ckpt"),
                        model);
      }
    };
  }

  void finish(const TrainResult<S>& result) {
    save_checkpoint(dir_ / "best.ckpt", result.best);
    const auto& h = result.history;
    std::ostringstream line;
    line << "best_epoch " << result.best_epoch;
    if (result.best_epoch > 0) {
      const auto& best = h[result.best_epoch - 1];
      line << " train_loss " << fixed(best.train_loss) << " dev_loss "
           << fixed(best.dev_loss);
    }
    log_ << line.str() << '\n';
    std::cout << line.str() << '\n';
  }

 private:
  fs::path dir_;
  std::ofstream log_;
};

struct TrainData {
  std::vector<Meeting> train;
  std::vector<Meeting> dev;
};

TrainData real_data(const RunConfig& run) {
  require_file(run.corpus, "--corpus");
  if (run.splits.empty()) return {load_meetings(run.corpus), {}};
  return {select_split(run, "train"), select_split(run, "dev")};
}

/// Pseudo pairs follow the split of the meeting they were mined from; pairs
/// from test meetings are dropped.
TrainData pseudo_data(const RunConfig& run) {
  require_file(run.pseudo, "--pseudo");
  auto pairs = load_meetings(run.pseudo);
  if (run.splits.empty()) return {std::move(pairs), {}};
  const auto manifest = load_split_manifest(run.splits);
  const std::set<std::string> train(manifest.train.begin(), manifest.train.end());
  const std::set<std::string> dev(manifest.dev.begin(), manifest.dev.end());
  TrainData out;
  for (auto& m : pairs) {
    const auto source = source_meeting_id(m.id);
    if (train.count(source)) {
      out.train.push_back(std::move(m));
    } else if (dev.count(source)) {
      out.dev.push_back(std::move(m));
    }
  }
  return out;
}

template <typename S>
Model<S> fresh_model(const RunConfig& run, const std::vector<Meeting>& vocab_source) {
  auto mc = run.model;
  mc.dropout = run.train.dropout;
  auto model = initial_model<S>(vocab_source, mc, run.train.seed);
  if (!run.word_vectors.empty()) {
    require_file(run.word_vectors, "word_vectors");
    const int n = load_word_vectors(model, run.word_vectors);
    std::cout << "word_vectors " << n << '\n';
  }
  return model;
}

template <typename S>
int run_train(const Options& o, const std::string& stage) {
  const auto& run = o.run;
  require_output(run.out_dir, "--out-dir");
  run.model.validate();
  run.train.validate();
  if (stage == "finetune") require_file(o.init, "--init");

  const auto real = real_data(run);
  std::optional<TrainData> pseudo;
  if (stage == "pretrain") pseudo = pseudo_data(run);

  RunLog<S> log(run.out_dir);
  TrainResult<S> result;
  if (stage == "pretrain") {
    if (pseudo->train.empty()) throw ValidationError("no pseudo pairs in the training split");
    auto cfg = run.train;
    cfg.max_epochs = run.pretrain_epochs;
    result = train(fresh_model<S>(run, real.train), pseudo->train, pseudo->dev, cfg,
                   log.callback(stage));
  } else {
    auto model = stage == "finetune" ? load_checkpoint<S>(o.init)
                                     : fresh_model<S>(run, real.train);
    result = train(std::move(model), real.train, real.dev, run.train, log.callback(stage));
  }
  log.finish(result);
  return 0;
}

// ---------------------------------------------------------------------------
// generate / evaluate / ablate / export-attention

BeamConfig beam_of(const RunConfig& run) {
  if (run.model.beam_size < 1 || run.max_len < 1) {
    throw UsageError("--beam and --max-len must be positive");
  }
  return {run.model.beam_size, run.max_len};
}

template <typename S>
Model<S> load_model(const Options& o) {
  require_file(o.checkpoint, "--checkpoint");
  return load_checkpoint<S>(o.checkpoint);
}

template <typename S>
int run_generate(const Options& o) {
  require_output(o.output, "--out");
  const auto beam = beam_of(o.run);
  const auto model = load_model<S>(o);
  const auto meetings = select_split(o.run, o.split);
  auto out = open_output(o.output);
  for (const auto& m : meetings) {
    out << m.id << '\t' << join(beam_search(model, m, beam).words) << '\n';
  }
  std::cout << "generated " << meetings.size() << '\n';
  return 0;
}

std::vector<std::vector<std::string>> read_candidates(const fs::path& path,
                                                      const std::vector<Meeting>& meetings) {
  require_file(path, "--candidates");
  std::ifstream in(path);
  std::map<std::string, std::vector<std::string>> by_id;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path.string() + " line " + std::to_string(line_no) +
                       ": expected id<TAB>summary");
    }
    std::istringstream words(line.substr(tab + 1));
    auto& tokens = by_id[line.substr(0, tab)];
    for (std::string w; words >> w;) tokens.push_back(w);
  }
  std::vector<std::vector<std::string>> out;
  for (const auto& m : meetings) {
    const auto it = by_id.find(m.id);
    if (it == by_id.end()) throw ValidationError("no candidate for meeting " + m.id);
    out.push_back(it->second);
  }
  return out;
}

void print_scores(const CorpusScores& scores) {
  std::cout << "R1 " << fixed(scores.mean.r1.f1) << '\n'
            << "R2 " << fixed(scores.mean.r2.f1) << '\n'
            << "RL " << fixed(scores.mean.rl.f1) << '\n';
}

template <typename S>
int run_evaluate(const Options& o) {
  const auto meetings = select_split(o.run, o.split);
  if (!o.candidates.empty()) {
    print_scores(score_corpus(meetings, read_candidates(o.candidates, meetings)));
    return 0;
  }
  const auto beam = beam_of(o.run);
  print_scores(evaluate_corpus(load_model<S>(o), meetings, beam));
  return 0;
}

template <typename S>
int run_ablate(const Options& o) {
  require_output(o.output, "--out");
  const auto beam = beam_of(o.run);
  const auto model = load_model<S>(o);
  const auto meetings = select_split(o.run, o.split);
  std::ostringstream csv;
  if (o.mode == "relation") {
    write_relation_csv(csv, relation_type_curve(model, meetings, beam));
  } else {
    write_curve_csv(csv, discourse_percentage_curve(model, meetings, o.fractions,
                                                    o.run.train.seed, beam));
  }
  open_output(o.output) << csv.str();
  std::cout << csv.str();
  return 0;
}

template <typename S>
int run_export_attention(const Options& o) {
  require_output(o.output, "--out");
  const auto model = load_model<S>(o);
  const auto meetings = select_split(o.run, o.split);
  auto out = open_output(o.output);
  int written = 0;
  for (const auto& m : meetings) {
    if (!o.meeting.empty() && m.id != o.meeting) continue;
    out << attention_to_json(export_attention(model, m, o.run.max_len)) << '\n';
    ++written;
  }
  if (written == 0) throw ValidationError("no meeting named " + o.meeting);
  std::cout << "exported " << written << '\n';
  return 0;
}

template <typename S>
int dispatch(const std::string& command, const Options& o) {
  if (command == "validate") return run_validate(o);
  if (command == "graph") return run_graph(o);
  if (command == "build-pseudo") return run_build_pseudo(o);
  if (command == "pretrain" || command == "train" || command == "finetune") {
    return run_train<S>(o, command);
  }
  if (command == "generate") return run_generate<S>(o);
  if (command == "evaluate") return run_evaluate<S>(o);
  if (command == "ablate") return run_ablate<S>(o);
  if (command == "export-attention") return run_export_attention<S>(o);
  throw UsageError("a subcommand is required (see --help)");
}

// ---------------------------------------------------------------------------
// flag surface

void add_model_flags(CLI::App& cmd, RunConfig& run) {
  cmd.add_option("--hidden-size", run.model.hidden_size);
  cmd.add_option("--word-emb-size", run.model.word_emb_size);
  cmd.add_option("--gcn-layers", run.model.num_gcn_layers);
  cmd.add_option("--vocab-size", run.model.vocab_size);
  cmd.add_option("--word-vectors", run.word_vectors);
}

void add_train_flags(CLI::App& cmd, RunConfig& run) {
  add_model_flags(cmd, run);
  cmd.add_option("--corpus", run.corpus, "meetings JSONL");
  cmd.add_option("--splits", run.splits, "split manifest");
  cmd.add_option("--out-dir", run.out_dir, "checkpoints and train.log");
  cmd.add_option("--lr", run.train.learning_rate);
  cmd.add_option("--clip", run.train.max_grad_norm);
  cmd.add_option("--dropout", run.train.dropout);
  cmd.add_option("--batch-size", run.train.batch_size);
  cmd.add_option("--epochs", run.train.max_epochs);
  cmd.add_option("--patience", run.train.patience);
}

void add_decode_flags(CLI::App& cmd, Options& o) {
  cmd.add_option("--checkpoint", o.checkpoint);
  cmd.add_option("--corpus", o.run.corpus);
  cmd.add_option("--splits", o.run.splits);
  cmd.add_option("--split", o.split, "train|dev|test|all (default test with --splits)")
      ->check(CLI::IsMember({"train", "dev", "test", "all"}));
  cmd.add_option("--beam", o.run.model.beam_size);
  cmd.add_option("--max-len", o.run.max_len);
}

int run_main(int argc, char** argv) {
  Options o;
  o.run.train.patience = 3;
  if (const auto path = find_config_flag(argc, argv); !path.empty()) {
    apply_config(read_config_file(path), o.run);
  }

  CLI::App app{"Discourse-aware meeting summarizer"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "key=value file; flags override it");
  app.add_option("--seed", o.run.train.seed);

  auto* validate = app.add_subcommand("validate", "check a corpus and print counts");
  validate->add_option("corpus", o.input)->required();

  auto* graph = app.add_subcommand("graph", "export discourse graphs as JSON");
  graph->add_option("corpus", o.input)->required();
  graph->add_option("--meeting", o.meeting);
  graph->add_option("--out", o.output);

  auto* pseudo = app.add_subcommand("build-pseudo", "mine question-window pairs");
  pseudo->add_option("--corpus", o.run.corpus);
  pseudo->add_option("--out", o.output);
  pseudo->add_option("--window", o.run.window);
  o.mode = "discourse";
  pseudo->add_option("--mode", o.mode)->check(CLI::IsMember({"discourse", "rule"}));
  pseudo->add_option("--endpoint", o.endpoint)->check(CLI::IsMember({"source", "target"}));
  pseudo->add_option("--lexicon", o.lexicon, "word NOUN|ADJ lines");

  auto* pretrain = app.add_subcommand("pretrain", "train on pseudo pairs");
  add_train_flags(*pretrain, o.run);
  pretrain->add_option("--pseudo", o.run.pseudo, "pseudo pairs JSONL");
  pretrain->add_option("--pretrain-epochs", o.run.pretrain_epochs);

  auto* train_cmd = app.add_subcommand("train", "train from scratch");
  add_train_flags(*train_cmd, o.run);

  auto* finetune = app.add_subcommand("finetune", "continue training a checkpoint");
  add_train_flags(*finetune, o.run);
  finetune->add_option("--init", o.init, "starting checkpoint")->required();

  auto* generate = app.add_subcommand("generate", "write one summary per meeting");
  add_decode_flags(*generate, o);
  generate->add_option("--out", o.output);

  auto* evaluate = app.add_subcommand("evaluate", "print ROUGE F1");
  add_decode_flags(*evaluate, o);
  evaluate->add_option("--candidates", o.candidates, "id<TAB>summary lines");

  auto* ablate = app.add_subcommand("ablate", "discourse ablation curves as CSV");
  add_decode_flags(*ablate, o);
  ablate->add_option("--out", o.output);
  ablate->add_option("--mode", o.mode)->check(CLI::IsMember({"percentage", "relation"}));
  ablate->add_option("--fractions", o.fractions)->delimiter(',');

  auto* attention = app.add_subcommand("export-attention", "greedy decode attention as JSON");
  add_decode_flags(*attention, o);
  attention->add_option("--meeting", o.meeting);
  attention->add_option("--out", o.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitUsage;
  }
  auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  if (command == "ablate" && o.mode == "discourse") o.mode = "percentage";
  if (o.split.empty()) o.split = o.run.splits.empty() ? "all" : "test";

  const char* precision = std::getenv("DGSUM_PRECISION");
  const std::string p = precision ? precision : "double";
  if (p == "single") return dispatch<float>(command, o);
  if (p == "double") return dispatch<double>(command, o);
  throw UsageError("DGSUM_PRECISION must be single or double");
}

}  // namespace
}  // namespace dgsum::cli

int main(int argc, char** argv) {
  using namespace dgsum;
  try {
    return cli::run_main(argc, argv);
  } catch (const cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cli::kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return cli::kExitInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return cli::kExitInvalid;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return cli::kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitRuntime;
  }
}
