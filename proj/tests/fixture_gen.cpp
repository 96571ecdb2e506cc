// Regenerates the committed golden transcripts (tests/golden/) and the
// record/replay fixture set (data/fixtures/). Run manually after changing
// prompt templates or pipeline behavior, then review the diff.
#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "mei/chat_client.hpp"
#include "mei/errors.hpp"
#include "mei/jsonl.hpp"
#include "mei/metrics.hpp"
#include "mei/pipeline.hpp"

using namespace mei;
namespace fs = std::filesystem;

namespace {

const std::string kSourceDir = MEI_SOURCE_DIR;

MeiDocument tailor_doc() {
  MeiDocument doc;
  doc.doc_id = "tailor_mini";
  doc.tokens = meitest::words(
      "The old tailor worked all day . Mustapha smiled at the tailor and rested .");
  doc.sentences = {{0, 7}, {7, 15}};
  doc.entities = {{1, "Mustapha", Span{7, 7}, 3}};
  doc.gold = {{{0, 2}, 1}, {{7, 7}, 1}, {{10, 11}, 1}};
  doc.other_mentions = {{4, 5}};
  validate_document(doc);
  return doc;
}

/// The scripted model: a perfect run on aladdin_mini; on tailor_mini the
/// word-level reply drops "old" and the expansion reply hallucinates
/// "the nice tailor" for the first head.
std::string scripted_reply(const ChatRequest& request) {
  const std::string& input = request.messages.back().content;
  if (input.find("Aladdin#") != std::string::npos) {
    return "Aladdin (Aladdin) lived with his (his) mother (his mother) in Persia . "
           "His (His) mother (His mother) loved him (him) .";
  }
  if (input.find("tailor#") != std::string::npos) {
    return "The old tailor (the nice tailor) worked all day . Mustapha (Mustapha) smiled at "
           "the tailor (the tailor) and rested .";
  }
  if (input.find("Aladdin lived") != std::string::npos) {
    return "Aladdin#1 lived with his#1 mother#2 in Persia . His#1 mother#2 loved him#1 .";
  }
  if (input.find("The old tailor worked") != std::string::npos) {
    return "The tailor#1 worked all day . Mustapha#1 smiled at the tailor#1 and rested .";
  }
  throw Error("fixture generator got an unexpected request:\n" + input);
}

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  write_file(path.string(), content);
  std::cout << "wrote " << path.string() << " (" << content.size() << " bytes)\n";
}

bool expect(bool ok, const std::string& what) {
  if (!ok) std::cerr << "FIXTURE MISMATCH: " << what << "\n";
  return ok;
}

}  // namespace

int main() {
  auto lib = PromptLibrary::load(kSourceDir + "/data/templates");
  auto aladdin = meitest::aladdin();
  std::vector<MeiDocument> docs{aladdin, tailor_doc()};

  // Golden prompt transcripts, rendered from the aladdin document.
  fs::path golden = fs::path(kSourceDir) / "tests" / "golden";
  write_text(golden / "prompt_wordlevel.txt", render_transcript(build_wordlevel_prompt(aladdin, lib)));
  write_text(golden / "prompt_h2s.txt", render_transcript(build_h2s_prompt(aladdin, {0, 4}, lib)));
  write_text(golden / "prompt_linking.txt", render_transcript(build_linking_prompt(aladdin, lib)));
  write_text(golden / "prompt_single.txt", render_transcript(build_single_prompt(aladdin, lib)));

  // Record the scripted exchanges into the cassette.
  FixtureChatClient client(FixtureChatClient::Mode::kRecord, Cassette{},
                           std::make_unique<FunctionChatClient>(scripted_reply));
  PipelineOptions options;
  options.strategy = PromptStrategy::kTwoStage;
  options.h2s_mode = H2sMode::kLlm;
  options.max_tokens = 4096;
  auto results = run_corpus(docs, client, lib, options);

  std::vector<PredictionSet> preds;
  for (auto& r : results) preds.push_back(std::move(r.predictions));

  bool ok = true;
  ok &= expect(client.cassette().size() == 4, "expected 4 recorded exchanges");
  ok &= expect(preds[0].assignments == meitest::gold_as_predictions(aladdin).assignments,
               "aladdin_mini predictions should equal its gold mentions");
  PredictionSet tailor_expected;
  tailor_expected.doc_id = "tailor_mini";
  tailor_expected.assignments = {{{2, 2}, 1}, {{7, 7}, 1}, {{10, 11}, 1}};
  ok &= expect(preds[1].assignments == tailor_expected.assignments,
               "tailor_mini predictions should be (2,2), (7,7), (10,11)");

  auto scores = score_corpus(docs, preds);
  double macro = macro_f1(scores);
  double micro = micro_f1(scores);
  ok &= expect(std::abs(macro - 8.0 / 9.0) < 1e-12, "macro F1 should be 8/9");
  ok &= expect(std::abs(micro - 5.0 / 6.0) < 1e-12, "micro F1 should be 5/6");
  if (!ok) return 1;

  fs::path fixtures = fs::path(kSourceDir) / "data" / "fixtures";
  fs::create_directories(fixtures);
  {
    std::ostringstream out;
    write_mei_jsonl(out, docs);
    write_text(fixtures / "docs.mei.jsonl", out.str());
  }
  client.cassette().save((fixtures / "cassette.jsonl").string());
  std::cout << "wrote " << (fixtures / "cassette.jsonl").string() << "\n";
  {
    std::ostringstream out;
    write_predictions_jsonl(out, preds);
    write_text(fixtures / "expected_predictions.jsonl", out.str());
  }
  write_text(fixtures / "expected_report.tsv", report_tsv(scores));

  std::cout << "macro_f1 " << macro << ", micro_f1 " << micro << "\n";
  return 0;
}
