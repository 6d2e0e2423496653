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

#ifndef CAPCURATE_CORPUS_IO_H_
#define CAPCURATE_CORPUS_IO_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "capcurate/caption_types.h"
#include "capcurate/error.h"
#include "capcurate/sha256.h"

namespace capcurate {

// One image with its web AltText and any synthetic captions.
//
// Serialized as one JSON object per line:
//   {"id":..., "image_ref":..., "alt_text":..., "captions":{"ssc":...},
//    "gt_objects":[...], "ocr_text":..., "meta":{...}}
// Only `id` and `image_ref` are required, and at least one of alt_text or
// captions must carry text. AltText never appears inside `captions`.
struct CaptionRecord {
  std::string id;
  std::string image_ref;
  std::optional<std::string> alt_text;
  std::map<CaptionFormat, std::string> captions;
  std::optional<std::set<std::string>> gt_objects;
  std::optional<std::string> ocr_text;
  std::map<std::string, std::string> meta;

  // Text for a source (AltText reads alt_text). Null when absent or empty.
  const std::string* Text(CaptionFormat source) const;

  friend bool operator==(const CaptionRecord&, const CaptionRecord&) = default;
};

Result<CaptionRecord> ParseRecord(std::string_view line);

// Single-line JSON, no trailing newline. Throws
// CurationError(kSerializationFailure) on invalid UTF-8.
std::string SerializeRecord(const CaptionRecord& record);

// Output row of the mixer: the one caption a record contributes to training.
struct TrainingExample {
  std::string id;
  std::string image_ref;
  std::string caption;
  std::string source;  // format key, or keys joined by '+' for concatenation
  bool truncated = false;

  friend bool operator==(const TrainingExample&,
                         const TrainingExample&) = default;
};

Result<TrainingExample> ParseTrainingExample(std::string_view line);
std::string SerializeTrainingExample(const TrainingExample& example);

struct Shard {
  std::string path;
  std::uint64_t record_count = 0;
  std::string checksum;  // SHA-256 hex of the file bytes

  friend bool operator==(const Shard&, const Shard&) = default;
};

struct DatasetManifest {
  static constexpr int kSchemaVersion = 1;

  std::vector<Shard> shards;
  int schema_version = kSchemaVersion;

  std::uint64_t TotalRecords() const;
};

// Relative shard paths are resolved against the manifest's directory.
// Throws kIoFailure, kMalformedSyntax, or kInvalidArgument (duplicate paths,
// total mismatch).
DatasetManifest LoadManifest(const std::filesystem::path& path);

// Shard paths under the manifest's directory are written relative to it.
void SaveManifest(const DatasetManifest& manifest,
                  const std::filesystem::path& path);

// Builds a manifest for plain JSONL files by hashing them and counting the
// lines that parse as records.
DatasetManifest ManifestForFiles(std::span<const std::filesystem::path> files);

// A per-line failure surfaced by a lenient stream.
struct RecordError {
  std::string shard;
  std::uint64_t line_number = 0;  // 1-based
  Error error;
};

using StreamItem = std::variant<CaptionRecord, RecordError>;

// Pull-based record source. Implementations hold O(1) records in memory.
class RecordStream {
 public:
  virtual ~RecordStream() = default;
  // Returns std::nullopt once exhausted.
  virtual std::optional<StreamItem> Next() = 0;
};

class VectorRecordStream : public RecordStream {
 public:
  explicit VectorRecordStream(std::span<const CaptionRecord> records)
      : records_(records) {}
  std::optional<StreamItem> Next() override;

 private:
  std::span<const CaptionRecord> records_;
  std::size_t next_ = 0;
};

struct StreamOptions {
  // Strict mode verifies shard checksums and record counts before/after
  // reading and throws on the first malformed line.
  bool strict = false;
};

// Reads one shard file line by line.
class ShardReader : public RecordStream {
 public:
  ShardReader(const Shard& shard, StreamOptions options);
  std::optional<StreamItem> Next() override;

 private:
  Shard shard_;
  StreamOptions options_;
  std::ifstream in_;
  std::string line_;
  std::uint64_t line_number_ = 0;
  std::uint64_t parsed_ = 0;
};

// Streams every shard of a manifest in order. Missing shard files throw
// CurationError(kShardMissing) when reached.
class ManifestReader : public RecordStream {
 public:
  ManifestReader(DatasetManifest manifest, StreamOptions options = {});
  std::optional<StreamItem> Next() override;

 private:
  DatasetManifest manifest_;
  StreamOptions options_;
  std::size_t shard_index_ = 0;
  std::unique_ptr<ShardReader> current_;
};

inline ManifestReader StreamManifest(DatasetManifest manifest,
                                     StreamOptions options = {}) {
  return ManifestReader(std::move(manifest), options);
}

// Writes JSONL shards named `<prefix>-NNNNN.jsonl`, rolling over every
// `max_records` lines.
class ShardWriter {
 public:
  ShardWriter(std::filesystem::path prefix, std::uint64_t max_records,
              bool emit_empty_shard = false);
  ~ShardWriter();
  ShardWriter(const ShardWriter&) = delete;
  ShardWriter& operator=(const ShardWriter&) = delete;

  void Append(const CaptionRecord& record);
  void Append(const TrainingExample& example);
  void AppendLine(std::string_view json_line);

  // Closes the last shard and returns every shard written.
  std::vector<Shard> Finish();

 private:
  void OpenNext();
  void CloseCurrent();

  std::filesystem::path prefix_;
  std::uint64_t max_records_;
  bool emit_empty_shard_;
  std::ofstream out_;
  Sha256 hasher_;
  Shard current_;
  bool open_ = false;
  bool finished_ = false;
  std::vector<Shard> shards_;
};

std::vector<Shard> WriteShards(std::span<const CaptionRecord> records,
                               const std::filesystem::path& prefix,
                               std::uint64_t max_records,
                               bool emit_empty_shard = false);

}  // namespace capcurate

#endif  // CAPCURATE_CORPUS_IO_H_
