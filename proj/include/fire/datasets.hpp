#pragma once

#include "fire/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fire::datasets {

enum class RawLabel { Supported, PartiallySupported, NotSupported, Refuted, True_, False_ };

std::string_view to_string(RawLabel l);

// supported / partially supported → Factual, refuted → NonFactual,
// not supported → excluded (nullopt), binary labels pass through.
std::optional<Verdict> binarize_label(RawLabel raw);

// Field map for one community release. Paths are dotted JSON paths
// ("annotation.label", "claims.0.text").
struct AdapterSpec {
    enum class Format { Jsonl, JsonArray };

    std::string name;
    SourceDataset source = SourceDataset::Custom;
    Format format = Format::Jsonl;
    std::string records_path;  // JsonArray only; empty means the document is the array
    std::string claim_path = "claim";
    std::string label_path = "label";
    std::string id_path;  // empty: ids are "<name>-<record index>"
    std::vector<std::string> meta_paths;
    // Normalized label spelling (lowercase, '_'/'-' → ' ') → raw label.
    std::map<std::string, RawLabel> vocabulary;
    // The normalized interchange format: labels are the configured verdict tokens.
    bool normalized = false;

    static AdapterSpec from_json(const nlohmann::json& doc);
    static AdapterSpec load(const std::filesystem::path& path);
};

std::vector<std::string> builtin_adapter_names();
// Throws InvalidConfig for an unknown name.
AdapterSpec builtin_adapter(std::string_view name);

struct DatasetManifest {
    std::string name;
    std::string adapter = "normalized";
    std::filesystem::path adapter_config;  // optional JSON AdapterSpec overriding `adapter`
    std::filesystem::path path;
    std::optional<std::size_t> claim_count_true;
    std::optional<std::size_t> claim_count_false;

    // Relative paths resolve against the manifest's directory.
    static DatasetManifest load(const std::filesystem::path& manifest_path);
};

// Table-1 counts after processing for the four benchmark datasets.
std::optional<std::pair<std::size_t, std::size_t>> published_counts(SourceDataset source);

struct LabelCounts {
    std::size_t factual = 0;
    std::size_t non_factual = 0;
    std::size_t unlabeled = 0;
    friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

LabelCounts count_labels(const std::vector<Claim>& claims);

struct LoadResult {
    std::vector<Claim> claims;
    std::size_t records = 0;
    std::size_t excluded_not_supported = 0;
    std::vector<std::string> warnings;
};

// Throws FileNotFound, SchemaMismatch (naming the first offending record).
LoadResult load_with_adapter(const std::filesystem::path& path, const AdapterSpec& adapter,
                             const LabelSet& labels = default_labels());

// Loads per the manifest and compares per-label counts with it; a mismatch
// is a warning, not an error.
LoadResult load_dataset(const DatasetManifest& manifest, const LabelSet& labels = default_labels());

// Seeded sample of `count` claims carrying `keep_label`, plus every claim of
// the other label, in original order. Throws InsufficientClaims.
std::vector<Claim> sample_subset(const std::vector<Claim>& claims, Verdict keep_label, std::size_t count,
                                 std::uint64_t seed);

// One JSON object per line: {"id","claim","label","source","meta"}.
std::string normalized_line(const Claim& claim, const LabelSet& labels = default_labels());
void write_normalized(std::ostream& out, const std::vector<Claim>& claims, const LabelSet& labels = default_labels());

} // namespace fire::datasets
