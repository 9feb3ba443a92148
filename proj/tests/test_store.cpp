#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "maass/arith.hpp"
#include "maass/census.hpp"
#include "maass/store.hpp"

using namespace maass;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("maass-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

CensusRecord sample(long ell, const std::string& group) {
  CensusRecord r;
  r.kind = CensusKind::Tetrahedral;
  r.ell = ell;
  r.class_group = group;
  r.class_number = "4";
  r.eligible = true;
  r.reasons = {"class number even"};
  r.polynomial = "x^3 + x^2 - 54*x - 169";
  r.k = 1;
  r.n_forms = 1;
  r.shanks_a = 11;
  r.checksum = input_checksum(r.polynomial, false, r.engine_version);
  return r;
}

}  // namespace

TEST_SUITE("cli-and-store") {
  TEST_CASE("append then scan round-trips") {
    auto dir = scratch("roundtrip");
    ResultStore s(dir);
    CensusRecord r = sample(163, "(2,2)");
    s.append(r);
    auto got = s.scan(CensusKind::Tetrahedral);
    REQUIRE(got.size() == 1);
    CHECK(record_to_json(got[0]) == record_to_json(r));
    CHECK(s.warnings().empty());
    CHECK(s.scan(CensusKind::Octahedral).empty());
    fs::remove_all(dir);
  }

  TEST_CASE("latest entry wins per key") {
    auto dir = scratch("latest");
    ResultStore s(dir);
    s.append(sample(163, "(2,2)"));
    s.append(sample(277, "(2,2)"));
    s.append(sample(163, "(4)"));
    auto got = s.scan(CensusKind::Tetrahedral);
    REQUIRE(got.size() == 2);
    CHECK(got[0].ell == 163);
    CHECK(got[0].class_group == "(4)");
    // Different engine versions are different keys.
    CensusRecord old = sample(163, "(2,2)");
    old.engine_version = "0.9";
    s.append(old);
    CHECK(s.scan(CensusKind::Tetrahedral).size() == 3);
    fs::remove_all(dir);
  }

  TEST_CASE("a truncated last line is skipped and the next append starts a fresh line") {
    auto dir = scratch("trunc");
    ResultStore s(dir);
    s.append(sample(163, "(2,2)"));
    std::string partial = record_to_json(sample(277, "(2,2)")).dump();
    {
      std::ofstream out(s.file(CensusKind::Tetrahedral), std::ios::app);
      out << partial.substr(0, partial.size() / 2);
    }
    ResultStore s2(dir);
    auto got = s2.scan(CensusKind::Tetrahedral);
    CHECK(got.size() == 1);
    CHECK(s2.warnings().size() == 1);
    s2.append(sample(349, "(2,2)"));
    ResultStore s3(dir);
    auto again = s3.scan(CensusKind::Tetrahedral);
    CHECK(again.size() == 2);
    CHECK(again[1].ell == 349);
    fs::remove_all(dir);
  }

  TEST_CASE("corrupt entries are skipped with a warning") {
    auto dir = scratch("corrupt");
    fs::create_directories(dir);
    {
      std::ofstream out(dir / "tetra.jsonl");
      out << "not json\n";
      out << R"({"schema_version": 7, "kind": "tetra", "ell": 7})" << "\n";
      out << record_to_json(sample(163, "(2,2)")).dump() << "\n";
    }
    ResultStore s(dir);
    CHECK(s.scan(CensusKind::Tetrahedral).size() == 1);
    CHECK(s.warnings().size() == 2);
    fs::remove_all(dir);
  }

  TEST_CASE("schema version 1 lines are migrated") {
    nlohmann::json v1 = {{"schema_version", 1}, {"kind", "tetra"}, {"ell", 163}, {"eligible", true},
                         {"forms", 1},          {"k", 1},           {"class_group", "(2,2)"},
                         {"engine_version", "1.0"}};
    CensusRecord r = record_from_json(v1);
    CHECK(r.n_forms == 1);
    CHECK(r.status == "ok");
    CHECK(r.class_group == "(2,2)");
    CHECK(record_to_json(r)["schema_version"] == kSchemaVersion);
    CHECK_THROWS(record_from_json({{"schema_version", 99}}));
  }

  TEST_CASE("CSV and JSON carry identical field sets") {
    for (CensusKind k : {CensusKind::Tetrahedral, CensusKind::Octahedral}) {
      CensusRecord r;
      r.kind = k;
      r.ell = 2777;
      r.k_L = {2};
      r.conductor_exponents = {1, 1, 1};
      std::set<std::string> json_keys, csv_keys;
      const nlohmann::json j = record_to_json(r);
      for (auto& [key, v] : j.items()) json_keys.insert(key);
      auto cols = csv_columns(k);
      csv_keys.insert(cols.begin(), cols.end());
      CHECK(json_keys == csv_keys);
      CHECK(cols.size() == csv_keys.size());
      // one cell per column
      std::string row = csv_row(r);
      size_t cells = 1;
      bool quoted = false;
      for (char c : row) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) ++cells;
      }
      CHECK(cells == cols.size());
    }
    CHECK(csv_header(CensusKind::Tetrahedral).find("class_group") != std::string::npos);
    CHECK(csv_header(CensusKind::Octahedral).find("card_L") != std::string::npos);
  }

  TEST_CASE("meta.json is written atomically and read back") {
    auto dir = scratch("meta");
    ResultStore s(dir);
    CensusOptions o;
    o.seed = 42;
    o.grh = true;
    s.write_meta(o);
    auto m = s.read_meta();
    CHECK(m["seed"] == 42);
    CHECK(m["bound_mode"] == "grh");
    CHECK(m["engine_version"] == kEngineVersion);
    CHECK_FALSE(fs::exists(dir / "meta.json.tmp"));
    fs::remove_all(dir);
  }

  TEST_CASE("default directory comes from the environment") {
    ::setenv(kStoreEnv, "/tmp/somewhere-else", 1);
    CHECK(ResultStore::default_dir() == fs::path("/tmp/somewhere-else"));
    ::unsetenv(kStoreEnv);
    CHECK(ResultStore::default_dir() == fs::path("maass-store"));
  }

  TEST_CASE("input checksums depend on polynomial, bound mode and engine version") {
    auto a = input_checksum("x^3 + x^2 - 54*x - 169", false, "1.0");
    CHECK(a.size() == 16);
    CHECK(a == input_checksum("x^3 + x^2 - 54*x - 169", false, "1.0"));
    CHECK(a != input_checksum("x^3 + x^2 - 54*x - 169", true, "1.0"));
    CHECK(a != input_checksum("x^3 + x^2 - 54*x - 169", false, "1.1"));
    CHECK(a != input_checksum("x^3 + x^2 - 4*x + 1", false, "1.0"));
  }
}

TEST_SUITE("census") {
  TEST_CASE("records for a few primes") {
    CensusOptions o;
    auto r163 = tetra_record(163, o);
    CHECK(r163.status == "ok");
    CHECK(r163.eligible);
    CHECK(r163.class_group == "(2,2)");
    CHECK(r163.n_forms == 1);
    CHECK(r163.conductor_exponent == 1);
    CHECK(r163.splitting == "3,1,4");
    CHECK(r163.shanks_a == 11);
    auto r313 = tetra_record(313, o);
    CHECK(r313.class_number == "7");
    CHECK_FALSE(r313.eligible);
    auto bad = tetra_record(11, o);
    CHECK(bad.status == "unsupported");
    auto o2777 = octa_record(2777, o);
    CHECK(o2777.n_forms == 3);
    CHECK(o2777.k_L == std::vector<int>{2});
  }

  TEST_CASE("statistics at 200") {
    CensusOptions o;
    std::vector<CensusRecord> recs;
    run_census(CensusKind::Tetrahedral, census_primes(CensusKind::Tetrahedral, 2, 200), o,
               [&](const CensusRecord& r) { recs.push_back(r); });
    auto s = census_statistics(CensusKind::Tetrahedral, recs, 200);
    long candidates = 0;
    for (long p = 7; p <= 200; p += 6) candidates += is_prime(static_cast<uint64_t>(p));
    CHECK(s.primes_considered == candidates);
    CHECK(s.eligible == 1);
    CHECK(s.histogram[1] == 1);
    CHECK(s.proportion == doctest::Approx(1.0 / static_cast<double>(candidates)));
    CHECK(s.missing == 0);
    // Dropping a record shows up as missing.
    recs.pop_back();
    CHECK(census_statistics(CensusKind::Tetrahedral, recs, 200).missing == 1);
  }

  TEST_CASE("parallel and serial runs give the same records") {
    auto primes = census_primes(CensusKind::Tetrahedral, 2, 700);
    std::map<long, std::string> a, b;
    CensusOptions o;
    run_census(CensusKind::Tetrahedral, primes, o,
               [&](const CensusRecord& r) { a[r.ell] = r.class_group + r.status + std::to_string(r.n_forms); });
    o.jobs = 3;
    run_census(CensusKind::Tetrahedral, primes, o,
               [&](const CensusRecord& r) { b[r.ell] = r.class_group + r.status + std::to_string(r.n_forms); });
    CHECK(a == b);
    CHECK(a.size() == primes.size());
  }
}
