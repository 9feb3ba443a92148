#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "maass/census.hpp"
#include "json.hpp"

namespace maass {

inline constexpr int kSchemaVersion = 2;
inline constexpr const char* kStoreEnv = "MAASS_STORE";

nlohmann::json record_to_json(const CensusRecord& r);
// Accepts the current schema and migrates version 1 lines; throws
// std::runtime_error for anything else.
CensusRecord record_from_json(const nlohmann::json& j);

// CSV columns are exactly the JSON keys of a record of that kind; arrays are
// joined with ';'.
std::vector<std::string> csv_columns(CensusKind k);
std::string csv_header(CensusKind k);
std::string csv_row(const CensusRecord& r);

// Store directory layout: tetra.jsonl, octa.jsonl, meta.json.
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path dir);
  // $MAASS_STORE, else ./maass-store
  static std::filesystem::path default_dir();

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file(CensusKind k) const;

  // One line per record, written with a single append so a crash leaves at
  // most a truncated final line.
  void append(const CensusRecord& r);
  // Latest record per (ell, engine version); unreadable lines are skipped
  // and reported through warnings().
  std::vector<CensusRecord> scan(CensusKind k);
  const std::vector<std::string>& warnings() const { return warnings_; }

  // meta.json, replaced atomically (temp file + rename).
  void write_meta(const CensusOptions& opt);
  nlohmann::json read_meta() const;

 private:
  std::filesystem::path dir_;
  std::vector<std::string> warnings_;
};

}  // namespace maass
