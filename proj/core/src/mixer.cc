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


#include "capcurate/mixer.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "capcurate/error.h"
#include "capcurate/provider.h"
#include "capcurate/stable_hash.h"
#include "capcurate/text_util.h"

namespace capcurate {
namespace {

constexpr std::uint64_t kAssignSalt = 0;
constexpr std::uint64_t kUnionSalt = 0x756e696f6eULL;      // "union"
constexpr std::uint64_t kFallbackSalt = 0x66616c6c6bULL;   // "fallk"

std::string JoinLabels(const std::vector<CaptionFormat>& sources) {
  std::string label;
  for (CaptionFormat f : sources) {
    if (!label.empty()) label += '+';
    label += FormatKey(f);
  }
  return label;
}

[[noreturn]] void ThrowMissing(const CaptionRecord& record,
                               CaptionFormat source) {
  throw CurationError(ErrorCode::kMissingSource,
                      "record " + record.id + " has no " +
                          std::string(FormatKey(source)) + " caption");
}

}  // namespace

std::string_view MixModeName(MixMode mode) {
  switch (mode) {
    case MixMode::kRatioSample:
      return "ratio_sample";
    case MixMode::kConcat:
      return "concat";
    case MixMode::kUnionUniform:
      return "union_uniform";
  }
  return "?";
}

MixMode ParseMixMode(std::string_view name) {
  if (name == "ratio_sample" || name == "ratio") return MixMode::kRatioSample;
  if (name == "concat") return MixMode::kConcat;
  if (name == "union_uniform" || name == "union") return MixMode::kUnionUniform;
  throw CurationError(ErrorCode::kInvalidArgument,
                      "unknown mix mode '" + std::string(name) + "'");
}

std::string_view MissingPolicyName(MissingPolicy policy) {
  switch (policy) {
    case MissingPolicy::kSkipRecord:
      return "skip";
    case MissingPolicy::kFallback:
      return "fallback";
    case MissingPolicy::kError:
      return "error";
  }
  return "?";
}

MissingPolicy ParseMissingPolicy(std::string_view name) {
  if (name == "skip" || name == "skip_record") return MissingPolicy::kSkipRecord;
  if (name == "fallback" || name == "fallback_other_source") {
    return MissingPolicy::kFallback;
  }
  if (name == "error") return MissingPolicy::kError;
  throw CurationError(ErrorCode::kInvalidArgument,
                      "unknown missing policy '" + std::string(name) + "'");
}

void MixRecipe::Validate() const {
  const auto fail = [](const std::string& msg) {
    throw CurationError(ErrorCode::kInvalidArgument, msg);
  };
  if (std::set<CaptionFormat>(sources.begin(), sources.end()).size() !=
      sources.size()) {
    fail("mix sources must be distinct");
  }
  switch (mode) {
    case MixMode::kRatioSample:
      if (sources.size() != 2) fail("ratio_sample needs exactly 2 sources");
      if (!(alt_ratio >= 0.0 && alt_ratio <= 1.0)) {
        fail("alt_ratio must be in [0, 1]");
      }
      break;
    case MixMode::kConcat:
      if (sources.size() < 2) fail("concat needs at least 2 sources");
      break;
    case MixMode::kUnionUniform:
      if (sources.empty()) fail("union_uniform needs at least 1 source");
      break;
  }
  if (budget && *budget < 1) fail("budget must be >= 1");
  TokenizerRegistry::Global().Find(tokenizer);
}

std::size_t MixRecipe::AltIndex() const {
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] == CaptionFormat::kAltText) return i;
  }
  return 0;
}

nlohmann::json MixRecipe::ToJson() const {
  std::vector<std::string> keys;
  for (CaptionFormat f : sources) keys.emplace_back(FormatKey(f));
  nlohmann::json doc = {{"mode", MixModeName(mode)},
                        {"alt_ratio", alt_ratio},
                        {"sources", keys},
                        {"seed", seed},
                        {"missing_policy", MissingPolicyName(missing_policy)},
                        {"separator", separator},
                        {"tokenizer", tokenizer}};
  doc["budget"] = budget ? nlohmann::json(*budget) : nlohmann::json(nullptr);
  return doc;
}

MixRecipe MixRecipe::FromJson(const nlohmann::json& doc) {
  MixRecipe recipe;
  try {
    if (!doc.is_object()) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "recipe must be a JSON object");
    }
    if (doc.contains("mode")) {
      recipe.mode = ParseMixMode(doc.at("mode").get<std::string>());
    }
    if (doc.contains("alt_ratio")) {
      recipe.alt_ratio = doc.at("alt_ratio").get<double>();
    }
    if (doc.contains("sources")) {
      recipe.sources.clear();
      for (const auto& key : doc.at("sources")) {
        const auto format = ParseFormatKey(key.get<std::string>());
        if (!format) {
          throw CurationError(ErrorCode::kInvalidArgument,
                              "unknown source '" + key.get<std::string>() + "'");
        }
        recipe.sources.push_back(*format);
      }
    }
    if (doc.contains("seed")) recipe.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("missing_policy")) {
      recipe.missing_policy =
          ParseMissingPolicy(doc.at("missing_policy").get<std::string>());
    }
    if (doc.contains("budget") && !doc.at("budget").is_null()) {
      recipe.budget = doc.at("budget").get<std::size_t>();
    }
    if (doc.contains("separator")) {
      recipe.separator = doc.at("separator").get<std::string>();
    }
    if (doc.contains("tokenizer")) {
      recipe.tokenizer = doc.at("tokenizer").get<std::string>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        std::string("bad recipe: ") + e.what());
  }
  recipe.Validate();
  return recipe;
}

MixRecipe MixRecipe::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CurationError(ErrorCode::kIoFailure,
                        "cannot read recipe " + path.string());
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        "bad recipe " + path.string() + ": " + e.what());
  }
  return FromJson(doc);
}

double AssignmentUniform(std::string_view record_id, std::uint64_t seed) {
  return StableUniform(seed, record_id, kAssignSalt);
}

CaptionFormat AssignSource(std::string_view record_id,
                           const MixRecipe& recipe) {
  const std::size_t alt = recipe.AltIndex();
  const bool pick_alt = AssignmentUniform(record_id, recipe.seed) < recipe.alt_ratio;
  return recipe.sources[pick_alt ? alt : 1 - alt];
}

Truncation TruncateForBudget(std::string_view text, std::size_t budget,
                             const TokenizerScheme& scheme) {
  if (budget < 1) {
    throw CurationError(ErrorCode::kInvalidArgument, "budget must be >= 1");
  }
  std::vector<TextSpan> spans;
  scheme.Segment(text, spans);
  if (spans.size() <= budget) return {std::string(text), false};
  return {std::string(TrimSpace(text.substr(0, spans[budget - 1].end))), true};
}

double MixReport::ObservedAltFraction() const {
  return emitted == 0 ? 0.0
                      : static_cast<double>(alt_emitted) /
                            static_cast<double>(emitted);
}

void MixReport::Merge(const MixReport& other) {
  input_records += other.input_records;
  emitted += other.emitted;
  for (const auto& [label, count] : other.per_source) per_source[label] += count;
  alt_emitted += other.alt_emitted;
  skipped_missing += other.skipped_missing;
  fallbacks += other.fallbacks;
  truncated += other.truncated;
  error_records += other.error_records;
}

nlohmann::json MixReport::ToJson() const {
  nlohmann::json doc = {{"input_records", input_records},
                        {"emitted", emitted},
                        {"per_source", per_source},
                        {"skipped_missing", skipped_missing},
                        {"fallbacks", fallbacks},
                        {"truncated", truncated},
                        {"error_records", error_records},
                        {"seed", seed},
                        {"recipe", recipe.ToJson()}};
  if (recipe.mode == MixMode::kRatioSample) {
    doc["alt_emitted"] = alt_emitted;
    doc["observed_alt_fraction"] = ObservedAltFraction();
  }
  return doc;
}

std::optional<TrainingExample> MixRecord(const CaptionRecord& record,
                                         const MixRecipe& recipe,
                                         const TokenizerScheme& scheme,
                                         MixReport& report) {
  ++report.input_records;
  std::vector<CaptionFormat> used;
  std::string text;
  bool fell_back = false;

  switch (recipe.mode) {
    case MixMode::kRatioSample: {
      const CaptionFormat chosen = AssignSource(record.id, recipe);
      CaptionFormat source = chosen;
      if (record.Text(chosen) == nullptr) {
        if (recipe.missing_policy == MissingPolicy::kError) {
          ThrowMissing(record, chosen);
        }
        if (recipe.missing_policy == MissingPolicy::kSkipRecord) break;
        source = recipe.sources[0] == chosen ? recipe.sources[1]
                                             : recipe.sources[0];
        if (record.Text(source) == nullptr) break;
        fell_back = true;
      }
      used.push_back(source);
      text = *record.Text(source);
      break;
    }
    case MixMode::kConcat: {
      std::vector<std::string> parts;
      for (CaptionFormat source : recipe.sources) {
        if (const std::string* t = record.Text(source)) {
          used.push_back(source);
          parts.push_back(*t);
        } else if (recipe.missing_policy == MissingPolicy::kError) {
          ThrowMissing(record, source);
        }
      }
      if (used.size() != recipe.sources.size()) {
        if (recipe.missing_policy == MissingPolicy::kSkipRecord ||
            used.empty()) {
          used.clear();
          break;
        }
        fell_back = true;
      }
      text = JoinStrings(parts, recipe.separator);
      break;
    }
    case MixMode::kUnionUniform: {
      const std::size_t k = recipe.sources.size();
      const auto pick = [&](std::uint64_t salt, std::size_t n) {
        return std::min<std::size_t>(
            n - 1, static_cast<std::size_t>(
                       StableUniform(recipe.seed, record.id, salt) *
                       static_cast<double>(n)));
      };
      CaptionFormat source = recipe.sources[pick(kUnionSalt, k)];
      if (record.Text(source) == nullptr) {
        if (recipe.missing_policy == MissingPolicy::kError) {
          ThrowMissing(record, source);
        }
        if (recipe.missing_policy == MissingPolicy::kSkipRecord) break;
        std::vector<CaptionFormat> available;
        for (CaptionFormat f : recipe.sources) {
          if (record.Text(f) != nullptr) available.push_back(f);
        }
        if (available.empty()) break;
        source = available[pick(kFallbackSalt, available.size())];
        fell_back = true;
      }
      used.push_back(source);
      text = *record.Text(source);
      break;
    }
  }

  if (used.empty()) {
    ++report.skipped_missing;
    return std::nullopt;
  }
  TrainingExample example;
  example.id = record.id;
  example.image_ref = record.image_ref;
  example.source = JoinLabels(used);
  if (recipe.budget) {
    Truncation cut = TruncateForBudget(text, *recipe.budget, scheme);
    example.caption = std::move(cut.text);
    example.truncated = cut.truncated;
  } else {
    example.caption = std::move(text);
  }
  ++report.emitted;
  ++report.per_source[example.source];
  if (fell_back) ++report.fallbacks;
  if (example.truncated) ++report.truncated;
  if (recipe.mode == MixMode::kRatioSample &&
      used.front() == recipe.sources[recipe.AltIndex()]) {
    ++report.alt_emitted;
  }
  return example;
}

std::pair<DatasetManifest, MixReport> MixCorpus(
    const DatasetManifest& input, const MixRecipe& recipe,
    const std::filesystem::path& out_dir, const MixOptions& options) {
  recipe.Validate();
  const auto scheme = TokenizerRegistry::Global().Find(recipe.tokenizer);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw CurationError(ErrorCode::kIoFailure,
                        "cannot create " + out_dir.string() + ": " + ec.message());
  }

  const std::size_t n = input.shards.size();
  std::vector<MixReport> reports(n);
  std::vector<std::vector<Shard>> outputs(n);
  const auto run_shard = [&](std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof(name), "part-%05zu", i);
    ShardReader reader(input.shards[i], StreamOptions{options.strict});
    ShardWriter writer(out_dir / name, options.max_records_per_shard);
    MixReport& report = reports[i];
    while (auto item = reader.Next()) {
      const auto* record = std::get_if<CaptionRecord>(&*item);
      if (record == nullptr) {
        ++report.error_records;
        continue;
      }
      if (auto example = MixRecord(*record, recipe, *scheme, report)) {
        writer.Append(*example);
      }
    }
    outputs[i] = writer.Finish();
  };

  if (options.workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) run_shard(i);
  } else {
    BoundedPool pool(std::min(options.workers, n), options.workers);
    for (std::size_t i = 0; i < n; ++i) {
      if (pool.has_error()) break;
      pool.Submit([&run_shard, i] { run_shard(i); });
    }
    pool.Wait();
  }

  DatasetManifest manifest;
  MixReport total;
  total.seed = recipe.seed;
  total.recipe = recipe;
  for (std::size_t i = 0; i < n; ++i) {
    total.Merge(reports[i]);
    manifest.shards.insert(manifest.shards.end(), outputs[i].begin(),
                           outputs[i].end());
  }
  SaveManifest(manifest, out_dir / "manifest.json");
  std::ofstream report_out(out_dir / "mix_report.json", std::ios::trunc);
  report_out << total.ToJson().dump(2) << '\n';
  if (!report_out) {
    throw CurationError(ErrorCode::kIoFailure,
                        "cannot write " + (out_dir / "mix_report.json").string());
  }
  return {std::move(manifest), std::move(total)};
}

std::string SweepDirectoryName(double ratio) {
  char name[32];
  std::snprintf(name, sizeof(name), "ratio_%03lld",
                static_cast<long long>(std::llround(ratio * 100.0)));
  return name;
}

std::vector<SweepVariant> Sweep(const DatasetManifest& input,
                                const MixRecipe& base_recipe,
                                const std::vector<double>& ratios,
                                const std::filesystem::path& out_root,
                                const MixOptions& options) {
  if (ratios.empty()) {
    throw CurationError(ErrorCode::kInvalidArgument, "sweep needs ratios");
  }
  if (base_recipe.mode != MixMode::kRatioSample) {
    throw CurationError(ErrorCode::kInvalidArgument,
                        "sweep requires mode ratio_sample");
  }
  std::set<std::string> names;
  for (double ratio : ratios) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "sweep ratio " + std::to_string(ratio) +
                              " outside [0, 1]");
    }
    if (!names.insert(SweepDirectoryName(ratio)).second) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "sweep ratios collide on " + SweepDirectoryName(ratio));
    }
  }
  std::vector<SweepVariant> variants;
  for (double ratio : ratios) {
    MixRecipe recipe = base_recipe;
    recipe.alt_ratio = ratio;
    SweepVariant variant;
    variant.ratio = ratio;
    variant.directory = out_root / SweepDirectoryName(ratio);
    std::tie(variant.manifest, variant.report) =
        MixCorpus(input, recipe, variant.directory, options);
    variants.push_back(std::move(variant));
  }
  return variants;
}

}  // namespace capcurate
