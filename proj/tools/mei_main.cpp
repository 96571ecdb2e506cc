#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mei/analysis.hpp"
#include "mei/assign.hpp"
#include "mei/chat_client.hpp"
#include "mei/conll.hpp"
#include "mei/derive.hpp"
#include "mei/engine.hpp"
#include "mei/errors.hpp"
#include "mei/jsonl.hpp"
#include "mei/metrics.hpp"
#include "mei/pipeline.hpp"
#include "mei/prompts.hpp"
#include "mei/types.hpp"

#ifndef MEI_DEFAULT_DATA_DIR
#define MEI_DEFAULT_DATA_DIR "data"
#endif

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return mei::read_file(path);
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  mei::write_file(path, content);
}

bool looks_like_conll(const std::string& content) {
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    return line.compare(i, 15, "#begin document") == 0;
  }
  return false;
}

std::vector<mei::AnnotatedDocument> load_corpus(const std::string& path,
                                                const std::string& format) {
  std::string content = read_input(path);
  bool conll = format == "conll" || (format == "auto" && looks_like_conll(content));
  std::istringstream in(content);
  return conll ? mei::read_conll(in) : mei::read_corpus_jsonl(in);
}

std::vector<mei::MeiDocument> load_mei(const std::string& path) {
  std::string content = read_input(path);
  std::istringstream in(content);
  return mei::read_mei_jsonl(in);
}

std::vector<mei::PredictionSet> load_predictions(const std::string& path) {
  std::string content = read_input(path);
  std::istringstream in(content);
  return mei::read_predictions_jsonl(in);
}

std::string default_templates_dir() {
  if (const char* env = std::getenv("MEI_TEMPLATES_DIR")) return env;
  return std::string(MEI_DEFAULT_DATA_DIR) + "/templates";
}

std::string api_key_from_env() {
  for (const char* name : {"MEI_API_KEY", "OPENAI_API_KEY"}) {
    if (const char* env = std::getenv(name)) return env;
  }
  return "";
}

void print_warnings(const std::string& doc_id, const mei::Diagnostics& diagnostics) {
  for (const auto& w : diagnostics.warnings) std::cerr << doc_id << ": " << w << '\n';
}

// ---- derive ----

struct DeriveArgs {
  std::string input;
  std::string format = "auto";
  std::string out = "-";
  int k = 5;
  int min_count = 5;
  bool stats = false;
  std::vector<std::string> phrase_overrides;  // doc_id:entity_id=phrase
};

int run_derive(const DeriveArgs& args) {
  auto corpus = load_corpus(args.input, args.format);
  if (corpus.empty()) throw mei::EmptyCorpus();
  auto derived = mei::derive_corpus(corpus, args.k, args.min_count);

  for (const auto& spec : args.phrase_overrides) {
    auto colon = spec.find(':');
    auto eq = spec.find('=', colon == std::string::npos ? 0 : colon);
    if (colon == std::string::npos || eq == std::string::npos || eq < colon) {
      throw mei::ConfigError("--phrase expects doc_id:entity_id=phrase, got '" + spec + "'");
    }
    std::string doc_id = spec.substr(0, colon);
    int entity_id = 0;
    try {
      entity_id = std::stoi(spec.substr(colon + 1, eq - colon - 1));
    } catch (const std::exception&) {
      throw mei::ConfigError("--phrase expects an integer entity id, got '" + spec + "'");
    }
    bool found = false;
    for (auto& doc : derived) {
      if (doc.doc_id == doc_id) {
        mei::apply_phrase_override(doc, entity_id, spec.substr(eq + 1));
        found = true;
      }
    }
    if (!found) throw mei::ConfigError("--phrase names unknown document '" + doc_id + "'");
  }

  std::ostringstream out;
  mei::write_mei_jsonl(out, derived);
  write_output(args.out, out.str());

  if (args.stats) {
    std::cerr << mei::format_stats("source corpus", mei::corpus_stats(corpus));
    std::cerr << mei::format_stats("derived corpus", mei::corpus_stats(derived));
  }
  return 0;
}

// ---- evaluate ----

struct EvaluateArgs {
  std::string gold;
  std::string pred;
  std::string format = "tsv";
  std::string out = "-";
};

int run_evaluate(const EvaluateArgs& args) {
  auto gold = load_mei(args.gold);
  auto preds = load_predictions(args.pred);
  auto scores = mei::score_corpus(gold, preds);
  write_output(args.out,
               args.format == "json" ? mei::report_json(scores) + "\n" : mei::report_tsv(scores));
  return 0;
}

// ---- map ----

struct MapArgs {
  std::string gold;
  std::string clusters;
  std::string mode = "fuzzy";
  std::string out = "-";
  int dim = 64;
};

int run_map(const MapArgs& args) {
  auto gold = load_mei(args.gold);
  auto cluster_corpus = load_corpus(args.clusters, "auto");
  std::map<std::string, const mei::AnnotatedDocument*> by_id;
  for (const auto& d : cluster_corpus) by_id[d.doc_id] = &d;

  mei::HashEmbeddingProvider provider(static_cast<std::size_t>(args.dim));
  mei::MapMode mode = args.mode == "cosine" ? mei::MapMode::kCosine : mei::MapMode::kFuzzy;

  std::ostringstream out;
  for (const auto& doc : gold) {
    auto it = by_id.find(doc.doc_id);
    if (it == by_id.end()) {
      throw mei::CorpusMismatch("no clusters for document '" + doc.doc_id + "'");
    }
    auto preds = mei::map_clusters(doc, it->second->clusters, mode,
                                   mode == mei::MapMode::kCosine ? &provider : nullptr);
    out << mei::predictions_json_line(preds) << '\n';
  }
  write_output(args.out, out.str());
  return 0;
}

// ---- run-engine ----

struct EngineArgs {
  std::string docs;
  std::string candidates;  // empty: gold + other mention spans
  std::string mode = "static";
  std::string encoder = "hash";
  std::string vectors;
  std::string out = "-";
  int dim = 64;
  double tau = 0.0;
};

int run_run_engine(const EngineArgs& args) {
  auto docs = load_mei(args.docs);
  if (docs.empty()) throw mei::EmptyCorpus();

  std::map<std::string, std::vector<mei::Span>> candidate_spans;
  if (!args.candidates.empty()) {
    for (const auto& p : load_predictions(args.candidates)) {
      auto& spans = candidate_spans[p.doc_id];
      for (const auto& a : p.assignments) spans.push_back(a.span);
    }
  }

  std::unique_ptr<mei::SpanEncoder> encoder;
  if (args.encoder == "file") {
    if (args.vectors.empty()) {
      throw mei::ConfigError("--encoder file requires --vectors");
    }
    encoder = std::make_unique<mei::FileVectorEncoder>(args.vectors);
  } else {
    encoder = std::make_unique<mei::HashFeatureEncoder>(static_cast<std::size_t>(args.dim));
  }
  mei::MemoryMode mode =
      args.mode == "hybrid" ? mei::MemoryMode::kHybrid : mei::MemoryMode::kStatic;
  mei::DotProductScorer scorer;

  std::ostringstream out;
  for (const auto& doc : docs) {
    std::vector<mei::Span> candidates;
    if (auto it = candidate_spans.find(doc.doc_id); it != candidate_spans.end()) {
      candidates = it->second;
    } else if (args.candidates.empty()) {
      for (const auto& g : doc.gold) candidates.push_back(g.span);
      candidates.insert(candidates.end(), doc.other_mentions.begin(), doc.other_mentions.end());
      std::sort(candidates.begin(), candidates.end());
    }
    auto preds = mei::run_engine(doc, candidates, *encoder, mode, scorer, args.tau);
    out << mei::predictions_json_line(preds) << '\n';
  }
  write_output(args.out, out.str());
  return 0;
}

// ---- llm ----

struct LlmArgs {
  std::string docs;
  std::string strategy = "two-stage";
  std::string h2s = "llm";
  std::string fixtures = "off";
  std::string cassette;
  std::string endpoint;
  std::string model;
  std::string templates;
  std::string out = "-";
  int max_tokens = 4096;
  int max_parallel = 1;
};

int run_llm(const LlmArgs& args) {
  auto docs = load_mei(args.docs);
  if (docs.empty()) throw mei::EmptyCorpus();

  std::string templates_dir = args.templates.empty() ? default_templates_dir() : args.templates;
  auto lib = mei::PromptLibrary::load(templates_dir);

  mei::PipelineOptions options;
  options.strategy = args.strategy == "linking"  ? mei::PromptStrategy::kLinking
                     : args.strategy == "single" ? mei::PromptStrategy::kSingle
                                                 : mei::PromptStrategy::kTwoStage;
  options.h2s_mode = args.h2s == "heads-only" ? mei::H2sMode::kProvider : mei::H2sMode::kLlm;
  mei::HeadSingletonProvider singleton;
  options.provider = &singleton;
  options.max_tokens = args.max_tokens;
  options.max_parallel = args.max_parallel;

  auto make_live = [&]() -> std::unique_ptr<mei::ChatClient> {
    mei::HttpChatOptions http;
    http.endpoint = args.endpoint;
    http.model = args.model;
    http.api_key = api_key_from_env();
    return std::make_unique<mei::HttpChatClient>(http);
  };

  std::unique_ptr<mei::ChatClient> client;
  bool save_cassette = false;
  if (args.fixtures == "replay") {
    if (args.cassette.empty()) throw mei::ConfigError("--fixtures replay requires --cassette");
    client = std::make_unique<mei::FixtureChatClient>(mei::FixtureChatClient::Mode::kReplay,
                                                      mei::Cassette::load(args.cassette));
  } else if (args.fixtures == "record") {
    if (args.cassette.empty()) throw mei::ConfigError("--fixtures record requires --cassette");
    mei::Cassette cassette;
    std::ifstream probe(args.cassette);
    if (probe.good()) cassette = mei::Cassette::load(args.cassette);
    client = std::make_unique<mei::FixtureChatClient>(mei::FixtureChatClient::Mode::kRecord,
                                                      std::move(cassette), make_live());
    save_cassette = true;
  } else {
    client = make_live();
  }

  auto results = mei::run_corpus(docs, *client, lib, options);

  std::ostringstream out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    print_warnings(docs[i].doc_id, results[i].diagnostics);
    out << mei::predictions_json_line(results[i].predictions) << '\n';
  }
  write_output(args.out, out.str());

  if (save_cassette) {
    auto* fixture = dynamic_cast<mei::FixtureChatClient*>(client.get());
    fixture->cassette().save(args.cassette);
    std::cerr << "recorded " << fixture->cassette().size() << " exchanges to " << args.cassette
              << '\n';
  }
  return 0;
}

// ---- analyze ----

struct AnalyzeArgs {
  bool errors = false;
  int varying_k = 0;
  std::string gold;
  std::string pred;
  std::string input;
  std::string format_hint = "auto";
  std::string predictor = "oracle";
  std::string format = "tsv";
  std::string out = "-";
  int min_count = 5;
  bool witnesses = false;
};

mei::PredictionSet oracle_predictions(const mei::MeiDocument& doc) {
  mei::PredictionSet preds;
  preds.doc_id = doc.doc_id;
  for (const auto& g : doc.gold) preds.assignments.push_back(mei::Assignment{g.span, g.entity_id});
  mei::canonicalize_assignments(preds);
  return preds;
}

int run_analyze(const AnalyzeArgs& args) {
  if (args.errors == (args.varying_k > 0)) {
    throw mei::ConfigError("analyze needs exactly one of --errors or --varying-k");
  }
  if (args.errors) {
    auto gold = load_mei(args.gold);
    auto preds = load_predictions(args.pred);

    std::map<std::string, const mei::PredictionSet*> by_id;
    for (const auto& p : preds) by_id[p.doc_id] = &p;
    std::vector<mei::PredictionSet> ordered;
    for (const auto& d : gold) {
      auto it = by_id.find(d.doc_id);
      if (it == by_id.end()) {
        throw mei::CorpusMismatch("no predictions for document '" + d.doc_id + "'");
      }
      ordered.push_back(*it->second);
    }
    std::vector<mei::ErrorWitness> witnesses;
    auto counts = mei::classify_errors(gold, ordered, args.witnesses ? &witnesses : nullptr);
    if (args.witnesses) {
      for (const auto& w : witnesses) {
        std::cerr << w.category << "\t[" << w.span.start << ", " << w.span.end << "]\tgold="
                  << w.gold_entity << "\tpred=" << w.pred_entity << '\n';
      }
    }
    write_output(args.out, args.format == "json" ? mei::error_report_json(counts) + "\n"
                                                 : mei::error_report_tsv(counts));
    return 0;
  }

  auto corpus = load_corpus(args.input, args.format_hint);
  if (corpus.empty()) throw mei::EmptyCorpus();
  std::ostringstream out;
  for (const auto& doc : corpus) {
    mei::Predictor predictor;
    if (args.predictor == "engine-static" || args.predictor == "engine-hybrid") {
      auto mode = args.predictor == "engine-hybrid" ? mei::MemoryMode::kHybrid
                                                    : mei::MemoryMode::kStatic;
      predictor = [mode](const mei::MeiDocument& d) {
        mei::HashFeatureEncoder encoder;
        mei::DotProductScorer scorer;
        std::vector<mei::Span> candidates;
        for (const auto& g : d.gold) candidates.push_back(g.span);
        candidates.insert(candidates.end(), d.other_mentions.begin(), d.other_mentions.end());
        std::sort(candidates.begin(), candidates.end());
        return mei::run_engine(d, candidates, encoder, mode, scorer);
      };
    } else {
      predictor = oracle_predictions;
    }
    auto report = mei::varying_k_report(doc, predictor, args.varying_k, args.min_count);
    if (args.format == "json") {
      out << doc.doc_id << '\t' << mei::varying_k_json(report) << '\n';
    } else {
      out << "# " << doc.doc_id << '\n' << mei::varying_k_tsv(report);
    }
  }
  write_output(args.out, out.str());
  return 0;
}

void configure_common(CLI::App* sub) {
  static std::string sink;
  sub->add_option("--config", sink, "Key=value configuration file; command-line flags win");
}

std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t\r"));
  s.erase(s.find_last_not_of(" \t\r") + 1);
  return s;
}

// Rewrites argv so `--config FILE` becomes the file's key=value pairs, injected
// right after the subcommand as --key=value tokens. Keys the user already passed
// are skipped, so explicit flags win; unknown keys fail the normal option parse.
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> raw(argv, argv + argc);
  std::size_t sub = raw.size();
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (!raw[i].empty() && raw[i][0] != '-') {
      sub = i;
      break;
    }
  }
  if (sub == raw.size()) return raw;

  std::string config_path;
  std::vector<std::string> args;
  std::set<std::string> given;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::string& tok = raw[i];
    if (i > sub && tok.rfind("--config", 0) == 0 &&
        (tok.size() == 8 || tok[8] == '=')) {
      if (tok.size() > 8) {
        config_path = tok.substr(9);
      } else if (i + 1 < raw.size()) {
        config_path = raw[++i];
      } else {
        throw mei::ConfigError("--config requires a file path");
      }
      if (config_path.empty()) throw mei::ConfigError("--config requires a file path");
      continue;
    }
    if (i > sub && tok.rfind("--", 0) == 0 && tok.size() > 2) {
      auto eq = tok.find('=');
      given.insert(eq == std::string::npos ? tok.substr(2) : tok.substr(2, eq - 2));
    }
    args.push_back(tok);
  }
  if (config_path.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw mei::ConfigError("cannot open config file '" + config_path + "'");
  std::vector<std::string> injected;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw mei::ConfigError("config line " + std::to_string(lineno) +
                             " is not key=value: '" + entry + "'");
    }
    std::string key = trim(entry.substr(0, eq));
    std::string value = trim(entry.substr(eq + 1));
    if (key.empty()) {
      throw mei::ConfigError("config line " + std::to_string(lineno) + " has an empty key");
    }
    if (given.count(key)) continue;
    injected.push_back("--" + key + "=" + value);
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(sub) + 1, injected.begin(),
              injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Major-entity identification toolkit: derive tracked-entity corpora, score "
               "predictions, map clusters, run the identification engine, drive chat-LLM "
               "pipelines, and analyze errors."};
  app.require_subcommand(1);

  DeriveArgs derive_args;
  auto* derive = app.add_subcommand(
      "derive", "Derive tracked-entity documents from a coreference corpus");
  configure_common(derive);
  derive->add_option("--input", derive_args.input, "Corpus file (CoNLL or jsonlines), '-' for stdin")
      ->required();
  derive->add_option("--format", derive_args.format, "Input format")
      ->check(CLI::IsMember({"auto", "conll", "jsonl"}))
      ->capture_default_str();
  derive->add_option("--k", derive_args.k, "Maximum entities per document")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  derive->add_option("--min-count", derive_args.min_count, "Minimum mentions for a cluster to qualify")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  derive->add_option("--phrase", derive_args.phrase_overrides,
                     "Override an entity phrase as doc_id:entity_id=phrase (repeatable)");
  derive->add_flag("--stats", derive_args.stats, "Print corpus statistics to stderr");
  derive->add_option("--out", derive_args.out, "Output path, '-' for stdout")->capture_default_str();

  EvaluateArgs evaluate_args;
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold documents");
  configure_common(evaluate);
  evaluate->add_option("--gold", evaluate_args.gold, "Gold documents (jsonlines), '-' for stdin")
      ->required();
  evaluate->add_option("--pred", evaluate_args.pred, "Predictions (jsonlines), '-' for stdin")
      ->required();
  evaluate->add_option("--format", evaluate_args.format, "Report format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
  evaluate->add_option("--out", evaluate_args.out, "Output path, '-' for stdout")
      ->capture_default_str();

  MapArgs map_args;
  auto* map_cmd = app.add_subcommand("map", "Assign predicted clusters to tracked entities");
  configure_common(map_cmd);
  map_cmd->add_option("--gold", map_args.gold, "Gold documents (jsonlines)")->required();
  map_cmd->add_option("--clusters", map_args.clusters,
                      "Predicted clusters as a corpus jsonlines file")
      ->required();
  map_cmd->add_option("--mode", map_args.mode, "Matching score")
      ->check(CLI::IsMember({"fuzzy", "cosine"}))
      ->capture_default_str();
  map_cmd->add_option("--dim", map_args.dim, "Hash embedding dimension (cosine mode)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  map_cmd->add_option("--out", map_args.out, "Output path, '-' for stdout")->capture_default_str();

  EngineArgs engine_args;
  auto* engine = app.add_subcommand("run-engine", "Run the identification engine over documents");
  configure_common(engine);
  engine->add_option("--docs", engine_args.docs, "Tracked-entity documents (jsonlines)")
      ->required();
  engine->add_option("--candidates", engine_args.candidates,
                     "Candidate mention spans in the prediction schema; defaults to each "
                     "document's gold and other mention spans");
  engine->add_option("--mode", engine_args.mode, "Working-memory mode")
      ->check(CLI::IsMember({"static", "hybrid"}))
      ->capture_default_str();
  engine->add_option("--encoder", engine_args.encoder, "Span encoder")
      ->check(CLI::IsMember({"hash", "file"}))
      ->capture_default_str();
  engine->add_option("--vectors", engine_args.vectors, "Precomputed vectors (encoder=file)");
  engine->add_option("--dim", engine_args.dim, "Hash encoder dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  engine->add_option("--tau", engine_args.tau, "Assignment threshold (strict)")
      ->capture_default_str();
  engine->add_option("--out", engine_args.out, "Output path, '-' for stdout")->capture_default_str();

  LlmArgs llm_args;
  auto* llm = app.add_subcommand("llm", "Run a chat-LLM identification pipeline");
  configure_common(llm);
  llm->add_option("--docs", llm_args.docs, "Tracked-entity documents (jsonlines)")->required();
  llm->add_option("--strategy", llm_args.strategy, "Prompting strategy")
      ->check(CLI::IsMember({"two-stage", "linking", "single"}))
      ->capture_default_str();
  llm->add_option("--h2s", llm_args.h2s, "Head expansion: second prompt or heads only")
      ->check(CLI::IsMember({"llm", "heads-only"}))
      ->capture_default_str();
  llm->add_option("--fixtures", llm_args.fixtures, "Cassette mode")
      ->check(CLI::IsMember({"off", "record", "replay"}))
      ->capture_default_str();
  llm->add_option("--cassette", llm_args.cassette, "Cassette path for record/replay");
  llm->add_option("--endpoint", llm_args.endpoint, "Chat completion base URL (live mode)");
  llm->add_option("--model", llm_args.model, "Model name (live mode)");
  llm->add_option("--templates", llm_args.templates,
                  "Prompt template directory (default: MEI_TEMPLATES_DIR or built-in)");
  llm->add_option("--max-tokens", llm_args.max_tokens, "Completion token budget")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  llm->add_option("--max-parallel", llm_args.max_parallel, "Concurrent documents")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  llm->add_option("--out", llm_args.out, "Output path, '-' for stdout")->capture_default_str();

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Classify errors or sweep the entity count");
  configure_common(analyze);
  analyze->add_flag("--errors", analyze_args.errors, "Classify prediction errors");
  analyze->add_option("--varying-k", analyze_args.varying_k,
                      "Per-entity F1 sweep up to this many entities")
      ->check(CLI::PositiveNumber);
  analyze->add_option("--gold", analyze_args.gold, "Gold documents (--errors)");
  analyze->add_option("--pred", analyze_args.pred, "Predictions (--errors)");
  analyze->add_option("--input", analyze_args.input, "Coreference corpus (--varying-k)");
  analyze->add_option("--predictor", analyze_args.predictor, "Predictor for --varying-k")
      ->check(CLI::IsMember({"oracle", "engine-static", "engine-hybrid"}))
      ->capture_default_str();
  analyze->add_option("--min-count", analyze_args.min_count, "Qualifying mention count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_flag("--witnesses", analyze_args.witnesses,
                    "List each classified discrepancy on stderr");
  analyze->add_option("--format", analyze_args.format, "Report format")
      ->check(CLI::IsMember({"tsv", "json"}))
      ->capture_default_str();
  analyze->add_option("--out", analyze_args.out, "Output path, '-' for stdout")
      ->capture_default_str();

  std::vector<std::string> expanded;
  try {
    expanded = expand_config_args(argc, argv);
  } catch (const mei::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  std::vector<const char*> arg_ptrs;
  arg_ptrs.reserve(expanded.size());
  for (const auto& s : expanded) arg_ptrs.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(arg_ptrs.size()), arg_ptrs.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (derive->parsed()) return run_derive(derive_args);
    if (evaluate->parsed()) return run_evaluate(evaluate_args);
    if (map_cmd->parsed()) return run_map(map_args);
    if (engine->parsed()) return run_run_engine(engine_args);
    if (llm->parsed()) return run_llm(llm_args);
    if (analyze->parsed()) return run_analyze(analyze_args);
  } catch (const mei::EmptyCorpus& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const mei::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const mei::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
