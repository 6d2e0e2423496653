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

#include "capcurate/corpus_io.h"

#include <algorithm>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "capcurate/text_util.h"

namespace capcurate {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Tracks object keys during parsing; nlohmann/json silently keeps the last
// value of a repeated key.
class DuplicateKeyDetector {
 public:
  bool operator()(int /*depth*/, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        frames_.push_back(
            Frame{{}, frames_.size() == 1 && last_key_ == "captions"});
        break;
      case json::parse_event_t::array_start:
        frames_.push_back(Frame{});
        break;
      case json::parse_event_t::object_end:
      case json::parse_event_t::array_end:
        if (!frames_.empty()) frames_.pop_back();
        break;
      case json::parse_event_t::key: {
        last_key_ = parsed.get<std::string>();
        Frame& frame = frames_.back();
        if (std::find(frame.keys.begin(), frame.keys.end(), last_key_) !=
            frame.keys.end()) {
          if (frame.is_captions) {
            duplicate_caption_key_ = last_key_;
          } else if (!duplicate_key_) {
            duplicate_key_ = last_key_;
          }
        }
        frame.keys.push_back(last_key_);
        break;
      }
      case json::parse_event_t::value:
        break;
    }
    return true;
  }

  std::optional<std::string> duplicate_caption_key_;
  std::optional<std::string> duplicate_key_;

 private:
  struct Frame {
    std::vector<std::string> keys;
    bool is_captions = false;
  };
  std::vector<Frame> frames_;
  std::string last_key_;
};

Error MakeError(ErrorCode code, std::string message) {
  return Error{code, std::move(message)};
}

// Parses the line into a JSON object, flagging duplicate keys.
Result<json> ParseObject(std::string_view line, bool* duplicate_caption,
                         std::string* duplicate_name) {
  DuplicateKeyDetector detector;
  json doc;
  try {
    doc = json::parse(line.begin(), line.end(), std::ref(detector));
  } catch (const json::parse_error& e) {
    return MakeError(ErrorCode::kMalformedSyntax, e.what());
  }
  if (!doc.is_object()) {
    return MakeError(ErrorCode::kMalformedSyntax, "record is not an object");
  }
  if (detector.duplicate_caption_key_) {
    *duplicate_caption = true;
    *duplicate_name = *detector.duplicate_caption_key_;
  } else if (detector.duplicate_key_) {
    *duplicate_caption = false;
    *duplicate_name = *detector.duplicate_key_;
  }
  return doc;
}

std::optional<Error> ReadString(const json& doc, const char* field,
                                bool required, std::optional<std::string>* out) {
  auto it = doc.find(field);
  if (it == doc.end() || it->is_null()) {
    if (required) {
      return MakeError(ErrorCode::kMissingField, field);
    }
    return std::nullopt;
  }
  if (!it->is_string()) {
    return MakeError(ErrorCode::kMalformedSyntax,
                     std::string(field) + " must be a string");
  }
  *out = it->get<std::string>();
  return std::nullopt;
}

std::string DumpLine(const ordered_json& doc) {
  try {
    return doc.dump(-1, ' ', false, json::error_handler_t::strict);
  } catch (const json::type_error& e) {
    throw CurationError(ErrorCode::kSerializationFailure, e.what());
  }
}

constexpr std::string_view kRecordFields[] = {
    "id", "image_ref", "alt_text", "captions", "gt_objects", "ocr_text", "meta"};

}  // namespace

const std::string* CaptionRecord::Text(CaptionFormat source) const {
  if (source == CaptionFormat::kAltText) {
    return (alt_text && !alt_text->empty()) ? &*alt_text : nullptr;
  }
  auto it = captions.find(source);
  if (it == captions.end() || it->second.empty()) return nullptr;
  return &it->second;
}

Result<CaptionRecord> ParseRecord(std::string_view line) {
  bool duplicate_caption = false;
  std::string duplicate_name;
  Result<json> parsed = ParseObject(line, &duplicate_caption, &duplicate_name);
  if (!parsed.ok()) return parsed.error();
  const json& doc = parsed.value();

  CaptionRecord record;
  std::optional<std::string> text;
  if (auto err = ReadString(doc, "id", true, &text)) return *err;
  if (text->empty()) return MakeError(ErrorCode::kMissingField, "id");
  record.id = std::move(*text);

  if (!duplicate_name.empty()) {
    if (duplicate_caption) {
      return MakeError(ErrorCode::kDuplicateFormatKey,
                       "caption key '" + duplicate_name + "' repeated");
    }
    return MakeError(ErrorCode::kMalformedSyntax,
                     "field '" + duplicate_name + "' repeated");
  }

  for (const auto& item : doc.items()) {
    if (std::find(std::begin(kRecordFields), std::end(kRecordFields),
                  item.key()) == std::end(kRecordFields)) {
      return MakeError(ErrorCode::kMalformedSyntax,
                       "unknown field '" + item.key() + "'");
    }
  }

  text.reset();
  if (auto err = ReadString(doc, "image_ref", true, &text)) return *err;
  record.image_ref = std::move(*text);
  if (auto err = ReadString(doc, "alt_text", false, &record.alt_text)) {
    return *err;
  }
  if (auto err = ReadString(doc, "ocr_text", false, &record.ocr_text)) {
    return *err;
  }

  if (auto it = doc.find("captions"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) {
      return MakeError(ErrorCode::kMalformedSyntax,
                       "captions must be an object");
    }
    for (const auto& [key, value] : it->items()) {
      auto format = ParseFormatKey(key);
      if (!format || *format == CaptionFormat::kAltText || key == "dsc+") {
        return MakeError(ErrorCode::kUnknownFormatKey, key);
      }
      if (!value.is_string()) {
        return MakeError(ErrorCode::kMalformedSyntax,
                         "caption '" + key + "' must be a string");
      }
      record.captions.emplace(*format, value.get<std::string>());
    }
  }

  if (auto it = doc.find("gt_objects"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) {
      return MakeError(ErrorCode::kMalformedSyntax,
                       "gt_objects must be an array");
    }
    std::set<std::string> objects;
    for (const auto& value : *it) {
      if (!value.is_string()) {
        return MakeError(ErrorCode::kMalformedSyntax,
                         "gt_objects entries must be strings");
      }
      objects.insert(value.get<std::string>());
    }
    record.gt_objects = std::move(objects);
  }

  if (auto it = doc.find("meta"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) {
      return MakeError(ErrorCode::kMalformedSyntax, "meta must be an object");
    }
    for (const auto& [key, value] : it->items()) {
      if (!value.is_string()) {
        return MakeError(ErrorCode::kMalformedSyntax,
                         "meta value '" + key + "' must be a string");
      }
      record.meta.emplace(key, value.get<std::string>());
    }
  }

  const bool has_caption =
      std::any_of(record.captions.begin(), record.captions.end(),
                  [](const auto& kv) { return !kv.second.empty(); });
  if (!has_caption && record.Text(CaptionFormat::kAltText) == nullptr) {
    return MakeError(ErrorCode::kEmptyRecord,
                     "record '" + record.id + "' has no alt_text or captions");
  }
  return record;
}

std::string SerializeRecord(const CaptionRecord& record) {
  ordered_json doc;
  doc["id"] = record.id;
  doc["image_ref"] = record.image_ref;
  if (record.alt_text) doc["alt_text"] = *record.alt_text;
  if (!record.captions.empty()) {
    ordered_json captions = ordered_json::object();
    for (CaptionFormat f : kSyntheticFormats) {
      if (auto it = record.captions.find(f); it != record.captions.end()) {
        captions[std::string(FormatKey(f))] = it->second;
      }
    }
    doc["captions"] = std::move(captions);
  }
  if (record.gt_objects) {
    ordered_json objects = ordered_json::array();
    for (const auto& o : *record.gt_objects) objects.push_back(o);
    doc["gt_objects"] = std::move(objects);
  }
  if (record.ocr_text) doc["ocr_text"] = *record.ocr_text;
  if (!record.meta.empty()) {
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : record.meta) meta[k] = v;
    doc["meta"] = std::move(meta);
  }
  return DumpLine(doc);
}

Result<TrainingExample> ParseTrainingExample(std::string_view line) {
  bool duplicate_caption = false;
  std::string duplicate_name;
  Result<json> parsed = ParseObject(line, &duplicate_caption, &duplicate_name);
  if (!parsed.ok()) return parsed.error();
  const json& doc = parsed.value();
  if (!duplicate_name.empty()) {
    return MakeError(ErrorCode::kMalformedSyntax,
                     "field '" + duplicate_name + "' repeated");
  }
  TrainingExample example;
  std::optional<std::string> text;
  for (auto [field, target] :
       {std::pair{"id", &example.id}, std::pair{"image_ref", &example.image_ref},
        std::pair{"caption", &example.caption},
        std::pair{"source", &example.source}}) {
    text.reset();
    if (auto err = ReadString(doc, field, true, &text)) return *err;
    *target = std::move(*text);
  }
  if (example.id.empty()) return MakeError(ErrorCode::kMissingField, "id");
  if (auto it = doc.find("truncated"); it != doc.end()) {
    if (!it->is_boolean()) {
      return MakeError(ErrorCode::kMalformedSyntax,
                       "truncated must be a boolean");
    }
    example.truncated = it->get<bool>();
  }
  return example;
}

std::string SerializeTrainingExample(const TrainingExample& example) {
  ordered_json doc;
  doc["id"] = example.id;
  doc["image_ref"] = example.image_ref;
  doc["caption"] = example.caption;
  doc["source"] = example.source;
  if (example.truncated) doc["truncated"] = true;
  return DumpLine(doc);
}

std::uint64_t DatasetManifest::TotalRecords() const {
  std::uint64_t total = 0;
  for (const Shard& s : shards) total += s.record_count;
  return total;
}

DatasetManifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw CurationError(ErrorCode::kIoFailure,
                        "cannot open manifest " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw CurationError(ErrorCode::kMalformedSyntax,
                        path.string() + ": " + e.what());
  }
  DatasetManifest manifest;
  try {
    manifest.schema_version = doc.value("schema_version", 1);
    if (manifest.schema_version != DatasetManifest::kSchemaVersion) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "unsupported manifest schema_version " +
                              std::to_string(manifest.schema_version));
    }
    const auto base = path.parent_path();
    std::unordered_set<std::string> seen;
    for (const auto& entry : doc.at("shards")) {
      Shard shard;
      std::filesystem::path shard_path = entry.at("path").get<std::string>();
      if (shard_path.is_relative()) shard_path = base / shard_path;
      shard.path = shard_path.lexically_normal().string();
      shard.record_count = entry.value("record_count", std::uint64_t{0});
      shard.checksum = entry.value("sha256", std::string());
      if (!seen.insert(shard.path).second) {
        throw CurationError(ErrorCode::kInvalidArgument,
                            "shard listed twice: " + shard.path);
      }
      manifest.shards.push_back(std::move(shard));
    }
    if (auto it = doc.find("total_records"); it != doc.end()) {
      if (it->get<std::uint64_t>() != manifest.TotalRecords()) {
        throw CurationError(ErrorCode::kInvalidArgument,
                            "total_records does not match shard counts");
      }
    }
  } catch (const json::exception& e) {
    throw CurationError(ErrorCode::kMalformedSyntax,
                        path.string() + ": " + e.what());
  }
  return manifest;
}

void SaveManifest(const DatasetManifest& manifest,
                  const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  const fs::path base = fs::absolute(path).parent_path().lexically_normal();
  ordered_json doc;
  doc["schema_version"] = manifest.schema_version;
  doc["total_records"] = manifest.TotalRecords();
  ordered_json shards = ordered_json::array();
  for (const Shard& s : manifest.shards) {
    fs::path p = fs::absolute(s.path).lexically_normal();
    fs::path rel = p.lexically_relative(base);
    std::string written = s.path;
    if (!rel.empty() && *rel.begin() != "..") written = rel.generic_string();
    ordered_json entry;
    entry["path"] = written;
    entry["record_count"] = s.record_count;
    entry["sha256"] = s.checksum;
    shards.push_back(std::move(entry));
  }
  doc["shards"] = std::move(shards);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out) {
    throw CurationError(ErrorCode::kIoFailure,
                        "cannot write manifest " + path.string());
  }
}

DatasetManifest ManifestForFiles(
    std::span<const std::filesystem::path> files) {
  DatasetManifest manifest;
  std::unordered_set<std::string> seen;
  for (const auto& file : files) {
    Shard shard;
    shard.path = file.lexically_normal().string();
    if (!seen.insert(shard.path).second) {
      throw CurationError(ErrorCode::kInvalidArgument,
                          "shard listed twice: " + shard.path);
    }
    if (!std::filesystem::exists(file)) {
      throw CurationError(ErrorCode::kShardMissing, shard.path);
    }
    shard.checksum = Sha256File(file);
    ShardReader reader(shard, StreamOptions{});
    while (auto item = reader.Next()) {
      if (std::holds_alternative<CaptionRecord>(*item)) ++shard.record_count;
    }
    manifest.shards.push_back(std::move(shard));
  }
  return manifest;
}

std::optional<StreamItem> VectorRecordStream::Next() {
  if (next_ >= records_.size()) return std::nullopt;
  return StreamItem(records_[next_++]);
}

ShardReader::ShardReader(const Shard& shard, StreamOptions options)
    : shard_(shard), options_(options) {
  if (!std::filesystem::exists(shard_.path)) {
    throw CurationError(ErrorCode::kShardMissing, shard_.path);
  }
  if (options_.strict && !shard_.checksum.empty()) {
    const std::string actual = Sha256File(shard_.path);
    if (actual != shard_.checksum) {
      throw CurationError(ErrorCode::kChecksumMismatch,
                          shard_.path + ": expected " + shard_.checksum +
                              ", got " + actual);
    }
  }
  in_.open(shard_.path, std::ios::binary);
  if (!in_) {
    throw CurationError(ErrorCode::kIoFailure, "cannot open " + shard_.path);
  }
}

std::optional<StreamItem> ShardReader::Next() {
  if (!std::getline(in_, line_)) {
    if (in_.bad()) {
      throw CurationError(ErrorCode::kIoFailure, "read error on " + shard_.path);
    }
    if (options_.strict && !shard_.checksum.empty() &&
        parsed_ != shard_.record_count) {
      throw CurationError(ErrorCode::kChecksumMismatch,
                          shard_.path + ": manifest lists " +
                              std::to_string(shard_.record_count) +
                              " records, read " + std::to_string(parsed_));
    }
    return std::nullopt;
  }
  ++line_number_;
  std::string_view view = line_;
  if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
  Result<CaptionRecord> record = ParseRecord(view);
  if (!record.ok()) {
    if (options_.strict) {
      throw CurationError(record.error().code,
                          shard_.path + ":" + std::to_string(line_number_) +
                              ": " + record.error().message);
    }
    return StreamItem(RecordError{shard_.path, line_number_, record.error()});
  }
  ++parsed_;
  return StreamItem(std::move(record).value());
}

ManifestReader::ManifestReader(DatasetManifest manifest, StreamOptions options)
    : manifest_(std::move(manifest)), options_(options) {}

std::optional<StreamItem> ManifestReader::Next() {
  while (true) {
    if (!current_) {
      if (shard_index_ >= manifest_.shards.size()) return std::nullopt;
      current_ = std::make_unique<ShardReader>(
          manifest_.shards[shard_index_++], options_);
    }
    if (auto item = current_->Next()) return item;
    current_.reset();
  }
}

ShardWriter::ShardWriter(std::filesystem::path prefix,
                         std::uint64_t max_records, bool emit_empty_shard)
    : prefix_(std::move(prefix)),
      max_records_(max_records),
      emit_empty_shard_(emit_empty_shard) {
  if (max_records_ < 1) {
    throw CurationError(ErrorCode::kInvalidArgument, "max_records must be >= 1");
  }
}

ShardWriter::~ShardWriter() {
  if (open_) out_.close();
}

void ShardWriter::OpenNext() {
  char suffix[32];
  std::snprintf(suffix, sizeof(suffix), "-%05zu.jsonl", shards_.size());
  std::filesystem::path path = prefix_;
  path += suffix;
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) {
    throw CurationError(ErrorCode::kIoFailure, "cannot create " + path.string());
  }
  current_ = Shard{path.string(), 0, ""};
  open_ = true;
}

void ShardWriter::CloseCurrent() {
  out_.close();
  if (!out_) {
    throw CurationError(ErrorCode::kIoFailure, "write failed: " + current_.path);
  }
  current_.checksum = hasher_.Finish();
  shards_.push_back(current_);
  open_ = false;
}

void ShardWriter::AppendLine(std::string_view json_line) {
  if (json_line.find('\n') != std::string_view::npos) {
    throw CurationError(ErrorCode::kSerializationFailure,
                        "record serialization contains a newline");
  }
  if (open_ && current_.record_count >= max_records_) CloseCurrent();
  if (!open_) OpenNext();
  out_.write(json_line.data(), static_cast<std::streamsize>(json_line.size()));
  out_.put('\n');
  if (!out_) {
    throw CurationError(ErrorCode::kIoFailure, "write failed: " + current_.path);
  }
  hasher_.Update(json_line);
  hasher_.Update("\n");
  ++current_.record_count;
}

void ShardWriter::Append(const CaptionRecord& record) {
  AppendLine(SerializeRecord(record));
}

void ShardWriter::Append(const TrainingExample& example) {
  AppendLine(SerializeTrainingExample(example));
}

std::vector<Shard> ShardWriter::Finish() {
  if (finished_) return shards_;
  if (!open_ && shards_.empty() && emit_empty_shard_) OpenNext();
  if (open_) CloseCurrent();
  finished_ = true;
  return shards_;
}

std::vector<Shard> WriteShards(std::span<const CaptionRecord> records,
                               const std::filesystem::path& prefix,
                               std::uint64_t max_records,
                               bool emit_empty_shard) {
  ShardWriter writer(prefix, max_records, emit_empty_shard);
  for (const auto& r : records) writer.Append(r);
  return writer.Finish();
}

}  // namespace capcurate
