#include "maass/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace maass {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_all(int fd, const std::string& s, const fs::path& where) {
  size_t off = 0;
  while (off < s.size()) {
    ssize_t w = ::write(fd, s.data() + off, s.size() - off);
    if (w < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("write to " + where.string() + " failed: " + std::strerror(errno));
    }
    off += static_cast<size_t>(w);
  }
}

CensusKind kind_from(const std::string& s) {
  if (s == "tetra") return CensusKind::Tetrahedral;
  if (s == "octa") return CensusKind::Octahedral;
  throw std::runtime_error("unknown record kind " + s);
}

}  // namespace

json record_to_json(const CensusRecord& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = census_kind_name(r.kind);
  j["ell"] = r.ell;
  j["status"] = r.status;
  j["error"] = r.error;
  j["eligible"] = r.eligible;
  j["reasons"] = r.reasons;
  j["polynomial"] = r.polynomial;
  j["n_forms"] = r.n_forms;
  j["conductor_exponent"] = r.conductor_exponent;
  if (r.kind == CensusKind::Tetrahedral) {
    j["class_group"] = r.class_group;
    j["class_number"] = r.class_number;
    j["narrow_class_group"] = r.narrow_class_group;
    j["two_rank"] = r.two_rank;
    j["five_rank"] = r.five_rank;
    j["shanks_a"] = r.shanks_a;
    j["k"] = r.k;
    j["a4_fields"] = r.a4_fields;
    j["mod3_distinct"] = r.mod3_distinct;
    j["splitting"] = r.splitting;
  } else {
    j["h_ell"] = r.h_ell;
    j["quadratic_class_group"] = r.quadratic_class_group;
    j["card_L"] = r.card_L;
    j["quotient_dim_F"] = r.quotient_dim_F;
    j["k_L"] = r.k_L;
    j["conductor_exponents"] = r.conductor_exponents;
  }
  j["conditional"] = r.conditional;
  j["grh"] = r.grh;
  j["seed"] = r.seed;
  j["engine_version"] = r.engine_version;
  j["elapsed_seconds"] = r.elapsed_seconds;
  j["checksum"] = r.checksum;
  return j;
}

CensusRecord record_from_json(const json& in) {
  json j = in;
  const int v = j.value("schema_version", 0);
  if (v == 1) {
    // Version 1 used "forms" for the form count and had no status field.
    if (j.contains("forms")) j["n_forms"] = j["forms"];
    if (!j.contains("status")) j["status"] = "ok";
    j["schema_version"] = 2;
  } else if (v != kSchemaVersion) {
    throw std::runtime_error("unsupported schema version " + std::to_string(v));
  }
  CensusRecord r;
  r.kind = kind_from(j.at("kind").get<std::string>());
  r.ell = j.at("ell").get<long>();
  r.status = j.at("status").get<std::string>();
  r.error = j.value("error", "");
  r.eligible = j.at("eligible").get<bool>();
  r.reasons = j.value("reasons", std::vector<std::string>{});
  r.polynomial = j.value("polynomial", "");
  r.n_forms = j.value("n_forms", 0L);
  r.conductor_exponent = j.value("conductor_exponent", 0);
  r.class_group = j.value("class_group", "");
  r.class_number = j.value("class_number", "");
  r.narrow_class_group = j.value("narrow_class_group", "");
  r.two_rank = j.value("two_rank", 0);
  r.five_rank = j.value("five_rank", 0);
  r.shanks_a = j.value("shanks_a", -2L);
  r.k = j.value("k", 0);
  r.a4_fields = j.value("a4_fields", -1);
  r.mod3_distinct = j.value("mod3_distinct", -1);
  r.splitting = j.value("splitting", "");
  r.h_ell = j.value("h_ell", 0);
  r.quadratic_class_group = j.value("quadratic_class_group", "");
  r.card_L = j.value("card_L", 0);
  r.quotient_dim_F = j.value("quotient_dim_F", 0);
  r.k_L = j.value("k_L", std::vector<int>{});
  r.conductor_exponents = j.value("conductor_exponents", std::vector<int>{});
  r.conditional = j.value("conditional", false);
  r.grh = j.value("grh", false);
  r.seed = j.value("seed", uint64_t{0});
  r.engine_version = j.value("engine_version", "");
  r.elapsed_seconds = j.value("elapsed_seconds", 0.0);
  r.checksum = j.value("checksum", "");
  return r;
}

std::vector<std::string> csv_columns(CensusKind k) {
  CensusRecord r;
  r.kind = k;
  std::vector<std::string> cols;
  const json j = record_to_json(r);
  for (auto& [key, v] : j.items()) cols.push_back(key);
  return cols;
}

namespace {

std::string csv_cell(const json& v) {
  std::string s;
  if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_array()) {
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += v[i].is_string() ? v[i].get<std::string>() : v[i].dump();
    }
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string csv_header(CensusKind k) {
  std::string s;
  for (auto& c : csv_columns(k)) s += (s.empty() ? "" : ",") + c;
  return s;
}

std::string csv_row(const CensusRecord& r) {
  const json j = record_to_json(r);
  std::string s;
  bool first = true;
  for (auto& c : csv_columns(r.kind)) {
    if (!first) s += ',';
    first = false;
    s += csv_cell(j.at(c));
  }
  return s;
}

ResultStore::ResultStore(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

fs::path ResultStore::default_dir() {
  if (const char* e = std::getenv(kStoreEnv); e && *e) return e;
  return "maass-store";
}

fs::path ResultStore::file(CensusKind k) const { return dir_ / (census_kind_name(k) + ".jsonl"); }

void ResultStore::append(const CensusRecord& r) {
  const fs::path p = file(r.kind);
  // A crash mid-write can leave a partial last line; start on a fresh line.
  bool need_newline = false;
  {
    std::ifstream in(p, std::ios::binary | std::ios::ate);
    if (in && in.tellg() > 0) {
      in.seekg(-1, std::ios::end);
      char c = 0;
      in.get(c);
      need_newline = c != '\n';
    }
  }
  std::string line = (need_newline ? "\n" : "") + record_to_json(r).dump() + "\n";
  int fd = ::open(p.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw std::runtime_error("cannot open " + p.string() + ": " + std::strerror(errno));
  try {
    write_all(fd, line, p);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::fsync(fd);
  ::close(fd);
}

std::vector<CensusRecord> ResultStore::scan(CensusKind k) {
  std::map<std::pair<long, std::string>, CensusRecord> latest;
  std::ifstream in(file(k));
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      CensusRecord r = record_from_json(json::parse(line));
      if (r.kind != k) throw std::runtime_error("record of the wrong kind");
      latest[{r.ell, r.engine_version}] = std::move(r);
    } catch (const std::exception& e) {
      warnings_.push_back(file(k).string() + ":" + std::to_string(lineno) + ": skipped (" + e.what() + ")");
    }
  }
  std::vector<CensusRecord> out;
  for (auto& [key, r] : latest) out.push_back(std::move(r));
  return out;
}

void ResultStore::write_meta(const CensusOptions& opt) {
  json m;
  m["engine_version"] = kEngineVersion;
  m["schema_version"] = kSchemaVersion;
  m["seed"] = opt.seed;
  m["bound_mode"] = opt.grh ? "grh" : "minkowski";
  const fs::path tmp = dir_ / "meta.json.tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << m.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, dir_ / "meta.json");
}

json ResultStore::read_meta() const {
  std::ifstream in(dir_ / "meta.json");
  if (!in) return json::object();
  return json::parse(in, nullptr, false);
}

}  // namespace maass
