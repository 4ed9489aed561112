#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsn/eg.hpp"
#include "rsn/filling.hpp"
#include "rsn/growth.hpp"

namespace rsn {

inline constexpr const char* kTableauSchema = "rsn.tableau/1";
inline constexpr const char* kNetworkSchema = "rsn.network/1";
inline constexpr const char* kManifestSchema = "rsn.manifest/1";

struct TableauRecord {
  std::uint64_t seed = 0;
  std::uint64_t replica = 0;
  StandardFilling filling;
  std::vector<double> times;  // empty, or indexed by rank - 1
};

// One JSON object per line. Loaders reject unknown schema tags and invalid fillings
// with ValidationError.
std::string to_jsonl(const TableauRecord& rec);
TableauRecord parse_tableau(const std::string& line);
std::string to_jsonl(const SortingNetwork& net);
SortingNetwork parse_network(const std::string& line);

// Tableau record from a complete inclusion function (ranks follow inclusion order).
TableauRecord tableau_record(const InclusionFunction& f, std::uint64_t seed, std::uint64_t replica, bool with_times);

std::string hex_digest(std::uint64_t h);
// FNV-1a digest of a file's bytes; ValidationError when unreadable.
std::string file_digest(const std::string& path);

struct RunManifest {
  std::string subcommand;
  std::string config;  // resolved config, key=value text
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> outputs;  // path, digest
};

std::string code_version();
std::string to_json(const RunManifest& m);
// Writes <primary_output>.manifest.json next to the primary output.
std::string write_manifest(const RunManifest& m, const std::string& primary_output);

}  // namespace rsn
