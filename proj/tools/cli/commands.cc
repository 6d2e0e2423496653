// Copyright 2026 The capcurate Authors.
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


#include "cli/commands.h"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "capcurate/caption_format.h"
#include "capcurate/caption_types.h"
#include "capcurate/corpus_io.h"
#include "capcurate/hallucination.h"
#include "capcurate/mixer.h"
#include "capcurate/mock_provider.h"
#include "capcurate/provider.h"
#include "capcurate/recaption.h"
#include "capcurate/richness.h"
#include "capcurate/text_util.h"
#include "capcurate/tokenize.h"
#include "capcurate/version.h"

namespace capcurate::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct CommonOptions {
  std::string manifest;
  std::string out = "capcurate_out";
  std::string tokenizer = std::string(kDefaultScheme);
  std::string specs;
  std::string formats;
  bool strict = false;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  std::string endpoint;
  std::string endpoint_config;
  std::string api_key_env;
  std::size_t max_in_flight = 0;
  bool mock = false;
};

struct StatsOptions {
  std::int64_t bin_width = 5;
  std::int64_t bin_max = 200;
  std::uint64_t sample_size = 1000;
  bool keep_entities = false;
};

struct ValidateOptions {
  std::string format;
};

struct MixOptionsCli {
  std::string recipe;
  std::string mode = "ratio_sample";
  double ratio = 0.5;
  std::string ratios = "0,20,40,60,80,100";
  std::string sources = "alt,ssc";
  std::string missing = "fallback";
  std::size_t budget = 0;
  std::string separator = " ";
  std::uint64_t shard_size = 100000;
};

struct ScoreOptions {
  std::string format = "dsc";
  std::string vocab;
  std::string failure = "abort";
  std::string assertions = "provider";
  bool detail = false;
};

struct RecaptionOptionsCli {
  std::string format = "dsc";
  std::string templates;
  bool quality = false;
  std::uint64_t shard_size = 100000;
};

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    throw CurationError(ErrorCode::kIoFailure, "cannot write " + path.string());
  }
}

void WriteJson(const fs::path& path, const Json& doc) {
  WriteText(path, doc.dump(2) + "\n");
}

std::string UtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

DatasetManifest ResolveManifest(const std::string& path) {
  if (path.empty()) {
    throw CurationError(ErrorCode::kInvalidArgument, "--manifest is required");
  }
  const fs::path p(path);
  if (p.extension() == ".jsonl") {
    if (!fs::exists(p)) {
      throw CurationError(ErrorCode::kShardMissing, "no such shard " + path);
    }
    std::vector<fs::path> files = {p};
    return ManifestForFiles(files);
  }
  return LoadManifest(p);
}

std::vector<CaptionFormat> SelectedFormats(const std::string& csv) {
  if (TrimSpace(csv).empty()) {
    return {kAllFormats.begin(), kAllFormats.end()};
  }
  return ParseFormatList(csv);
}

CaptionFormat SingleFormat(const std::string& key) {
  const auto format = ParseFormatKey(key);
  if (!format) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        "unknown format '" + key + "'");
  }
  return *format;
}

// Drops captions of unselected formats before any metric sees them.
class FormatFilterStream : public RecordStream {
 public:
  FormatFilterStream(RecordStream& inner, std::vector<CaptionFormat> keep)
      : inner_(inner), keep_(keep.begin(), keep.end()) {}

  std::optional<StreamItem> Next() override {
    auto item = inner_.Next();
    if (!item) return item;
    if (auto* record = std::get_if<CaptionRecord>(&*item)) {
      std::erase_if(record->captions,
                    [&](const auto& kv) { return !keep_.contains(kv.first); });
      if (!keep_.contains(CaptionFormat::kAltText)) record->alt_text.reset();
    }
    return item;
  }

 private:
  RecordStream& inner_;
  std::set<CaptionFormat> keep_;
};

class Session {
 public:
  Session(std::string command, const CommonOptions& common, std::ostream& out)
      : command_(std::move(command)),
        common_(common),
        out_(out),
        start_(std::chrono::steady_clock::now()),
        started_at_(UtcNow()) {}

  const fs::path out_dir() const { return common_.out; }

  const TokenizerScheme& scheme() {
    if (!scheme_) scheme_ = TokenizerRegistry::Global().Find(common_.tokenizer);
    return *scheme_;
  }

  FormatSpecRegistry specs() const {
    return common_.specs.empty() ? DefaultSpecs()
                                 : FormatSpecRegistry::Load(common_.specs);
  }

  const DatasetManifest& manifest() {
    if (!manifest_) manifest_ = ResolveManifest(common_.manifest);
    return *manifest_;
  }

  ManifestReader Stream() {
    return StreamManifest(manifest(), StreamOptions{common_.strict});
  }

  bool has_provider() const {
    return common_.mock || !common_.endpoint.empty() ||
           !common_.endpoint_config.empty();
  }

  // The mock is grounded in the corpus' gt_objects.
  Provider& provider() {
    if (provider_) return *provider_;
    if (common_.mock) {
      auto mock = std::make_unique<MockProvider>(
          common_.max_in_flight > 0 ? common_.max_in_flight : 4);
      ManifestReader reader = Stream();
      while (auto item = reader.Next()) {
        if (const auto* r = std::get_if<CaptionRecord>(&*item)) {
          if (r->gt_objects) mock->AddGround(r->image_ref, *r->gt_objects);
        }
      }
      provider_ = std::move(mock);
      return *provider_;
    }
    ProviderEndpoint endpoint;
    if (!common_.endpoint_config.empty()) {
      std::ifstream in(common_.endpoint_config);
      if (!in) {
        throw CurationError(ErrorCode::kIoFailure,
                            "cannot read " + common_.endpoint_config);
      }
      try {
        endpoint = ProviderEndpoint::FromJson(Json::parse(in));
      } catch (const Json::exception& e) {
        throw CurationError(ErrorCode::kInvalidArgument,
                            "bad endpoint config: " + std::string(e.what()));
      }
    }
    if (!common_.endpoint.empty()) endpoint.base_url = common_.endpoint;
    if (!common_.api_key_env.empty()) endpoint.api_key_env = common_.api_key_env;
    if (common_.max_in_flight > 0) endpoint.max_in_flight = common_.max_in_flight;
    endpoint.Validate();
    provider_ = std::make_unique<HttpProvider>(endpoint);
    return *provider_;
  }

  void RequireProvider() const {
    if (!has_provider()) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          command_ + " needs --endpoint, --endpoint-config or --mock");
    }
  }

  void AddOutput(const fs::path& path) { outputs_.push_back(path.string()); }

  void Finish(const std::string& config_echo, const Json& summary) {
    const auto elapsed = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - start_);
    Json doc = {{"command", command_},
                {"version", CAPCURATE_VERSION},
                {"seed", common_.seed},
                {"tokenizer", common_.tokenizer},
                {"workers", common_.workers},
                {"manifest", common_.manifest},
                {"config", config_echo},
                {"started_at", started_at_},
                {"timings", {{"total_ms", elapsed.count()}}},
                {"outputs", outputs_},
                {"summary", summary}};
    WriteJson(out_dir() / "run_manifest.json", doc);
    out_ << command_ << ": " << summary.dump() << "\n";
  }

 private:
  std::string command_;
  const CommonOptions& common_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
  std::string started_at_;
  std::shared_ptr<const TokenizerScheme> scheme_;
  std::optional<DatasetManifest> manifest_;
  std::unique_ptr<Provider> provider_;
  std::vector<std::string> outputs_;
};

// ---------------------------------------------------------------------------

Json CmdStats(Session& s, const CommonOptions& common, const StatsOptions& opt) {
  const std::vector<CaptionFormat> formats = SelectedFormats(common.formats);
  const BinSpec bins = BinSpec::Uniform(opt.bin_width, opt.bin_max);
  std::map<CaptionFormat, Histogram> histograms;
  for (CaptionFormat f : formats) histograms.emplace(f, Histogram(bins));

  std::uint64_t records = 0;
  std::uint64_t errors = 0;
  {
    ManifestReader reader = s.Stream();
    while (auto item = reader.Next()) {
      const auto* record = std::get_if<CaptionRecord>(&*item);
      if (record == nullptr) {
        ++errors;
        continue;
      }
      ++records;
      for (auto& [format, histogram] : histograms) {
        if (const std::string* text = record->Text(format)) {
          histogram.Add(static_cast<std::int64_t>(s.scheme().Count(*text)));
        } else {
          ++histogram.skipped;
        }
      }
    }
  }

  std::unique_ptr<EntityExtractor> entities;
  std::unique_ptr<AssertionExtractor> assertions;
  if (s.has_provider()) {
    entities = std::make_unique<ProviderEntityExtractor>(s.provider());
    assertions = std::make_unique<ProviderAssertionExtractor>(s.provider());
  } else {
    entities = std::make_unique<HeuristicEntityExtractor>();
    assertions = std::make_unique<RuleBasedAssertionExtractor>();
  }
  EntityReport entity_report;
  {
    ManifestReader reader = s.Stream();
    entity_report = EntityDiversity(reader, formats, *entities, opt.sample_size,
                                    common.seed, opt.keep_entities);
  }
  AnaReport ana;
  {
    ManifestReader reader = s.Stream();
    FormatFilterStream filtered(reader, formats);
    ana = Ana(filtered, std::nullopt, *assertions);
  }

  Json hist_json = Json::object();
  for (const auto& [format, histogram] : histograms) {
    const std::string key(FormatKey(format));
    const fs::path csv = s.out_dir() / ("hist_" + key + ".csv");
    WriteText(csv, histogram.ToCsv());
    s.AddOutput(csv);
    hist_json[key] = histogram.ToJson();
  }
  std::vector<std::string> keys;
  for (CaptionFormat f : formats) keys.emplace_back(FormatKey(f));
  const Json stats = {{"records", records},
                      {"error_records", errors},
                      {"formats", keys},
                      {"seed", common.seed},
                      {"tokenizer", common.tokenizer},
                      {"histograms", hist_json},
                      {"entities", entity_report.ToJson()},
                      {"ana", ana.ToJson()}};
  WriteJson(s.out_dir() / "stats.json", stats);
  s.AddOutput(s.out_dir() / "stats.json");
  if (ana.partial) {
    throw CurationError(ErrorCode::kProviderFailure, "ANA stopped: " + ana.error);
  }
  return {{"records", records}, {"error_records", errors}};
}

Json CmdValidate(Session& s, const CommonOptions& common,
                 const ValidateOptions& opt) {
  const std::vector<CaptionFormat> formats =
      opt.format.empty() ? SelectedFormats(common.formats)
                         : ParseFormatList(opt.format);
  const FormatSpecRegistry specs = s.specs();
  struct Tally {
    std::uint64_t checked = 0;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    std::map<std::string, std::uint64_t> by_constraint;
  };
  std::map<CaptionFormat, Tally> tallies;
  for (CaptionFormat f : formats) tallies[f];
  std::string flagged;
  std::uint64_t errors = 0;

  ManifestReader reader = s.Stream();
  while (auto item = reader.Next()) {
    const auto* record = std::get_if<CaptionRecord>(&*item);
    if (record == nullptr) {
      ++errors;
      continue;
    }
    for (CaptionFormat f : formats) {
      const std::string* text = record->Text(f);
      if (text == nullptr) continue;
      Tally& tally = tallies[f];
      ++tally.checked;
      Json violations = Json::array();
      std::size_t tokens = 0;
      try {
        std::optional<std::string_view> alt;
        if (const std::string* a = record->Text(CaptionFormat::kAltText)) alt = *a;
        const ValidationReport report = Validate(*text, f, specs, s.scheme(), alt);
        tokens = report.token_count;
        for (const Violation& v : report.violations) {
          ++tally.by_constraint[v.constraint];
          violations.push_back({{"constraint", v.constraint},
                                {"measured", v.measured},
                                {"limit", v.limit}});
        }
      } catch (const CurationError& e) {
        if (e.code() != ErrorCode::kEmptyCaption) throw;
        ++tally.by_constraint["empty"];
        violations.push_back({{"constraint", "empty"}});
      }
      if (violations.empty()) {
        ++tally.passed;
        continue;
      }
      ++tally.failed;
      flagged += Json{{"id", record->id},
                      {"format", FormatKey(f)},
                      {"token_count", tokens},
                      {"violations", violations}}
                     .dump() +
                 "\n";
    }
  }
  WriteText(s.out_dir() / "violations.jsonl", flagged);
  s.AddOutput(s.out_dir() / "violations.jsonl");
  Json summary = Json::object();
  std::uint64_t failed = 0;
  for (const auto& [f, t] : tallies) {
    summary[std::string(FormatKey(f))] = {{"checked", t.checked},
                                          {"passed", t.passed},
                                          {"failed", t.failed},
                                          {"by_constraint", t.by_constraint}};
    failed += t.failed;
  }
  const Json doc = {{"formats", summary},
                    {"error_records", errors},
                    {"specs", specs.ToJson()}};
  WriteJson(s.out_dir() / "validation.json", doc);
  s.AddOutput(s.out_dir() / "validation.json");
  return {{"flagged", failed}, {"error_records", errors}};
}

MixRecipe BuildRecipe(const CommonOptions& common, const MixOptionsCli& opt,
                      const CLI::App& cmd) {
  MixRecipe recipe =
      opt.recipe.empty() ? MixRecipe{} : MixRecipe::Load(opt.recipe);
  const auto given = [&](const std::string& name) {
    const CLI::Option* option = cmd.get_option_no_throw(name);
    if (option == nullptr) return false;
    return option->count() > 0 || opt.recipe.empty();
  };
  if (given("--mode")) recipe.mode = ParseMixMode(opt.mode);
  if (given("--ratio")) recipe.alt_ratio = opt.ratio;
  if (given("--sources")) recipe.sources = ParseFormatList(opt.sources);
  if (given("--missing")) recipe.missing_policy = ParseMissingPolicy(opt.missing);
  if (given("--separator")) recipe.separator = opt.separator;
  if (cmd.count("--budget") > 0) {
    recipe.budget = opt.budget;
  }
  // The global seed and tokenizer always apply.
  if (opt.recipe.empty() || cmd.get_parent()->count("--seed") > 0) {
    recipe.seed = common.seed;
  }
  if (opt.recipe.empty() || cmd.get_parent()->count("--tokenizer") > 0) {
    recipe.tokenizer = common.tokenizer;
  }
  recipe.Validate();
  return recipe;
}

Json CmdMix(Session& s, const CommonOptions& common, const MixOptionsCli& opt,
            const CLI::App& cmd) {
  const MixRecipe recipe = BuildRecipe(common, opt, cmd);
  MixOptions options;
  options.workers = common.workers;
  options.max_records_per_shard = opt.shard_size;
  options.strict = common.strict;
  auto [manifest, report] = MixCorpus(s.manifest(), recipe, s.out_dir(), options);
  for (const Shard& shard : manifest.shards) s.AddOutput(shard.path);
  s.AddOutput(s.out_dir() / "manifest.json");
  s.AddOutput(s.out_dir() / "mix_report.json");
  return {{"emitted", report.emitted},
          {"skipped_missing", report.skipped_missing},
          {"seed", recipe.seed}};
}

std::vector<double> ParsePercentList(const std::string& csv) {
  std::vector<double> ratios;
  for (std::string_view part : SplitString(csv, ',')) {
    part = TrimSpace(part);
    if (part.empty()) continue;
    std::size_t used = 0;
    double pct = 0;
    try {
      pct = std::stod(std::string(part), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || !(pct >= 0.0 && pct <= 100.0)) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "bad ratio percentage '" + std::string(part) + "'");
    }
    ratios.push_back(pct / 100.0);
  }
  if (ratios.empty()) {
    throw CurationError(ErrorCode::kInvalidArgument, "--ratios is empty");
  }
  return ratios;
}

Json CmdSweep(Session& s, const CommonOptions& common, const MixOptionsCli& opt,
              const CLI::App& cmd) {
  const MixRecipe recipe = BuildRecipe(common, opt, cmd);
  MixOptions options;
  options.workers = common.workers;
  options.max_records_per_shard = opt.shard_size;
  options.strict = common.strict;
  const auto variants = Sweep(s.manifest(), recipe, ParsePercentList(opt.ratios),
                              s.out_dir(), options);
  Json rows = Json::array();
  for (const SweepVariant& v : variants) {
    rows.push_back({{"ratio", v.ratio},
                    {"directory", v.directory.filename().string()},
                    {"emitted", v.report.emitted},
                    {"alt_emitted", v.report.alt_emitted},
                    {"observed_alt_fraction", v.report.ObservedAltFraction()}});
    s.AddOutput(v.directory);
  }
  WriteJson(s.out_dir() / "sweep.json", {{"seed", recipe.seed}, {"variants", rows}});
  s.AddOutput(s.out_dir() / "sweep.json");
  return {{"variants", variants.size()}, {"seed", recipe.seed}};
}

Json CmdChair(Session& s, const ScoreOptions& opt) {
  const CaptionFormat format = SingleFormat(opt.format);
  std::optional<ObjectVocabulary> custom;
  if (!opt.vocab.empty()) custom = ObjectVocabulary::Load(opt.vocab, s.scheme());
  const ObjectVocabulary& vocab = custom ? *custom : ObjectVocabulary::Default();
  ManifestReader reader = s.Stream();
  const ChairReport report = Chair(reader, format, vocab);
  Json doc = report.ToJson();
  doc["format"] = FormatKey(format);
  doc["vocabulary"] = opt.vocab.empty() ? "coco80" : opt.vocab;
  WriteJson(s.out_dir() / "chair.json", doc);
  s.AddOutput(s.out_dir() / "chair.json");
  return {{"chair_i", report.chair_i}, {"chair_s", report.chair_s}};
}

Json CmdCapScore(Session& s, const CommonOptions& common,
                 const ScoreOptions& opt) {
  s.RequireProvider();
  const CaptionFormat format = SingleFormat(opt.format);
  Provider& provider = s.provider();
  std::unique_ptr<AssertionExtractor> extractor;
  if (opt.assertions == "rule") {
    extractor = std::make_unique<RuleBasedAssertionExtractor>();
  } else if (opt.assertions == "provider") {
    extractor = std::make_unique<ProviderAssertionExtractor>(provider);
  } else {
    throw CurationError(ErrorCode::kInvalidArgument,
                        "--assertions must be rule or provider");
  }
  CapScoreOptions options;
  if (opt.failure == "skip") {
    options.on_failure = FailurePolicy::kSkipAndFlag;
  } else if (opt.failure != "abort") {
    throw CurationError(ErrorCode::kInvalidArgument,
                        "--on-failure must be abort or skip");
  }
  options.workers = common.workers > 1 ? common.workers : 0;
  options.keep_detail = opt.detail;
  ManifestReader reader = s.Stream();
  const CapScoreReport report =
      CapScore(reader, format, *extractor, provider, options);
  Json doc = report.ToJson();
  doc["format"] = FormatKey(format);
  doc["provider"] = common.mock ? "mock" : "http";
  WriteJson(s.out_dir() / "capscore.json", doc);
  s.AddOutput(s.out_dir() / "capscore.json");
  return {{"capscore", report.capscore},
          {"assertions_total", report.assertions_total},
          {"failed_records", report.failed_records}};
}

Json CmdRecaption(Session& s, const CommonOptions& common,
                  const RecaptionOptionsCli& opt, int& exit_code) {
  s.RequireProvider();
  const CaptionFormat format = SingleFormat(opt.format);
  const PromptTemplates templates = opt.templates.empty()
                                        ? PromptTemplates::Defaults()
                                        : PromptTemplates::Load(opt.templates);
  const FormatSpecRegistry specs = s.specs();
  const fs::path out_manifest_path = s.out_dir() / "manifest.json";

  DatasetManifest out_manifest;
  RecaptionOptions options;
  options.workers = common.workers > 1 ? common.workers : 0;
  if (fs::exists(out_manifest_path)) {
    out_manifest = LoadManifest(out_manifest_path);
    ManifestReader done = StreamManifest(out_manifest, StreamOptions{true});
    while (auto item = done.Next()) {
      options.done_ids.insert(std::get<CaptionRecord>(*item).id);
    }
  }
  int run = 0;
  while (fs::exists(s.out_dir() / ("run-" + std::to_string(run) + "-00000.jsonl"))) {
    ++run;
  }
  ShardWriter writer(s.out_dir() / ("run-" + std::to_string(run)), opt.shard_size);
  std::string errors;
  std::string rejected;
  std::uint64_t accepted = 0;
  std::uint64_t rejected_count = 0;

  Provider& provider = s.provider();
  ManifestReader reader = s.Stream();
  const RecaptionSummary summary = RecaptionBatch(
      reader, format, provider, templates,
      [&](const RecaptionResult& result, const CaptionRecord& record) {
        if (!result.caption) {
          errors += Json{{"id", result.id},
                         {"code", ErrorCodeName(result.error->code)},
                         {"message", result.error->message}}
                        .dump() +
                    "\n";
          return;
        }
        std::string caption = *result.caption;
        if (opt.quality) {
          std::optional<std::string_view> alt;
          if (record.alt_text) alt = *record.alt_text;
          const QualityVerdict verdict = QualityPostProcess(
              caption, format, specs, s.scheme(), QualityConfig{}, alt);
          if (!verdict.accepted) {
            ++rejected_count;
            rejected += Json{{"id", result.id},
                             {"reason", verdict.reason},
                             {"caption", caption}}
                            .dump() +
                        "\n";
            return;
          }
          caption = verdict.caption;
        }
        CaptionRecord updated = record;
        updated.captions[format] = std::move(caption);
        writer.Append(updated);
        ++accepted;
      },
      options);
  const std::vector<Shard> written = writer.Finish();
  out_manifest.shards.insert(out_manifest.shards.end(), written.begin(),
                             written.end());
  SaveManifest(out_manifest, out_manifest_path);
  s.AddOutput(out_manifest_path);
  for (const Shard& shard : written) s.AddOutput(shard.path);
  WriteText(s.out_dir() / "errors.jsonl", errors);
  s.AddOutput(s.out_dir() / "errors.jsonl");
  if (opt.quality) {
    WriteText(s.out_dir() / "rejected.jsonl", rejected);
    s.AddOutput(s.out_dir() / "rejected.jsonl");
  }
  Json result = summary.ToJson();
  result["written"] = accepted;
  result["rejected"] = rejected_count;
  WriteJson(s.out_dir() / "recaption_report.json", result);
  s.AddOutput(s.out_dir() / "recaption_report.json");
  if (summary.failed > 0) exit_code = kExitProvider;
  return result;
}

void AddMixOptions(CLI::App* cmd, MixOptionsCli& opt, bool sweep) {
  cmd->add_option("--recipe", opt.recipe, "JSON recipe file; flags override it");
  cmd->add_option("--mode", opt.mode, "ratio_sample | concat | union_uniform")
      ->capture_default_str();
  if (sweep) {
    cmd->add_option("--ratios", opt.ratios,
                    "comma-separated AltText percentages, e.g. 0,20,40")
        ->capture_default_str();
  } else {
    cmd->add_option("--ratio", opt.ratio,
                    "probability of the AltText side, in [0, 1]")
        ->capture_default_str();
  }
  cmd->add_option("--sources", opt.sources, "comma-separated format keys")
      ->capture_default_str();
  cmd->add_option("--missing", opt.missing, "skip | fallback | error")
      ->capture_default_str();
  cmd->add_option("--budget", opt.budget, "truncate captions to N tokens");
  cmd->add_option("--separator", opt.separator, "concat separator")
      ->capture_default_str();
  cmd->add_option("--shard-size", opt.shard_size, "records per output shard")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownScheme:
    case ErrorCode::kTemplateError:
      return kExitUsage;
    case ErrorCode::kProviderFailure:
      return kExitProvider;
    default:
      return kExitIo;
  }
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"capcurate: image-caption corpus curation toolkit",
               args.empty() ? "capcurate" : args.front()};
  app.set_version_flag("--version", CAPCURATE_VERSION);
  app.set_config("--config", "", "TOML/INI config file; command-line flags win");
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--manifest", common.manifest,
                 "dataset manifest (JSON) or a single .jsonl shard");
  app.add_option("--out", common.out, "output directory")->capture_default_str();
  app.add_option("--tokenizer", common.tokenizer, "tokenizer scheme")
      ->capture_default_str();
  app.add_option("--specs", common.specs, "format-spec overrides (JSON)");
  app.add_option("--formats", common.formats, "comma-separated format keys");
  app.add_flag("--strict", common.strict,
               "abort on malformed lines and checksum mismatches");
  app.add_option("--seed", common.seed, "seed for every randomized step")
      ->capture_default_str();
  app.add_option("--workers", common.workers, "worker threads")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--endpoint", common.endpoint, "provider base URL");
  app.add_option("--endpoint-config", common.endpoint_config,
                 "provider endpoint config (JSON)");
  app.add_option("--api-key-env", common.api_key_env,
                 "environment variable holding the API key");
  app.add_option("--max-in-flight", common.max_in_flight,
                 "concurrent provider requests");
  app.add_flag("--mock", common.mock, "use the built-in grounded mock provider");

  StatsOptions stats_opt;
  auto* stats = app.add_subcommand("stats", "token-length histograms, entities, ANA");
  stats->fallthrough();
  stats->add_option("--bin-width", stats_opt.bin_width)->capture_default_str();
  stats->add_option("--bin-max", stats_opt.bin_max)->capture_default_str();
  stats->add_option("--sample-size", stats_opt.sample_size,
                    "records sampled for entity counts")
      ->capture_default_str();
  stats->add_flag("--keep-entities", stats_opt.keep_entities,
                  "write the entity sets into stats.json");

  ValidateOptions validate_opt;
  auto* validate = app.add_subcommand("validate", "check captions against format specs");
  validate->fallthrough();
  validate->add_option("--format", validate_opt.format,
                       "format key(s) to validate; default all");

  MixOptionsCli mix_opt;
  auto* mix = app.add_subcommand("mix", "materialize one mixed training set");
  mix->fallthrough();
  AddMixOptions(mix, mix_opt, false);

  MixOptionsCli sweep_opt;
  auto* sweep = app.add_subcommand("sweep", "one mixed set per AltText ratio");
  sweep->fallthrough();
  AddMixOptions(sweep, sweep_opt, true);

  ScoreOptions chair_opt;
  auto* chair = app.add_subcommand("chair", "CHAIR_i / CHAIR_s");
  chair->fallthrough();
  chair->add_option("--format", chair_opt.format)->capture_default_str();
  chair->add_option("--vocab", chair_opt.vocab,
                    "object vocabulary file; default COCO-80");

  ScoreOptions cap_opt;
  auto* capscore = app.add_subcommand("capscore", "assertion-level VQA verification");
  capscore->fallthrough();
  capscore->add_option("--format", cap_opt.format)->capture_default_str();
  capscore->add_option("--on-failure", cap_opt.failure, "abort | skip")
      ->capture_default_str();
  capscore->add_option("--assertions", cap_opt.assertions, "provider | rule")
      ->capture_default_str();
  capscore->add_flag("--detail", cap_opt.detail, "per-record verdicts");

  RecaptionOptionsCli re_opt;
  auto* recaption = app.add_subcommand("recaption", "request captions from a provider");
  recaption->fallthrough();
  recaption->add_option("--format", re_opt.format)->capture_default_str();
  recaption->add_option("--templates", re_opt.templates, "prompt templates (JSON)");
  recaption->add_flag("--quality", re_opt.quality,
                      "apply heuristic quality post-processing");
  recaption->add_option("--shard-size", re_opt.shard_size)
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.begin() + (args.empty() ? 0 : 1),
                                    args.end());
  std::reverse(reversed.begin(), reversed.end());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  Session session(cmd->get_name(), common, out);
  int exit_code = kExitOk;
  try {
    Json summary;
    if (cmd == stats) {
      summary = CmdStats(session, common, stats_opt);
    } else if (cmd == validate) {
      summary = CmdValidate(session, common, validate_opt);
    } else if (cmd == mix) {
      summary = CmdMix(session, common, mix_opt, *mix);
    } else if (cmd == sweep) {
      summary = CmdSweep(session, common, sweep_opt, *sweep);
    } else if (cmd == chair) {
      summary = CmdChair(session, chair_opt);
    } else if (cmd == capscore) {
      summary = CmdCapScore(session, common, cap_opt);
    } else {
      summary = CmdRecaption(session, common, re_opt, exit_code);
    }
    session.Finish(app.config_to_str(true, false), summary);
  } catch (const CurationError& e) {
    err << "capcurate " << cmd->get_name() << ": " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "capcurate " << cmd->get_name() << ": " << e.what() << "\n";
    return kExitIo;
  }
  return exit_code;
}

}  // namespace capcurate::cli
