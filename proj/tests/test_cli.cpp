#include <filesystem>
#include <set>
#include <sstream>

#include "cli_harness.hpp"
#include "doctest.h"

using namespace maass::testing;
namespace fs = std::filesystem;

namespace {
const std::string kExe = MAASS_CLI;
}

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 1") {
    CHECK(run_cli(kExe, {}).status == 1);
    CHECK(run_cli(kExe, {"tetra-census"}).status == 1);
    CHECK(run_cli(kExe, {"tetra-census", "--max", "100", "--bogus"}).status == 1);
    CHECK(run_cli(kExe, {"tetra-census", "--max", "100", "--format", "xml"}).status == 1);
    CHECK(run_cli(kExe, {"--help"}).status == 0);
  }

  TEST_CASE("field report for 163") {
    auto dir = fresh_dir("cli-field");
    auto r = run_cli(kExe, {"field", "--ell", "163", "--kind", "tetra", "--format", "json", "--store", dir.string()});
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["class_number"] == "4");
    CHECK(j["class_group"] == "(2,2)");
    CHECK(j["k"] == 1);
    CHECK(j["n_forms"] == 1);
    CHECK(j["conductor_exponent"] == 1);
    CHECK(j["splitting"] == "3,1,4");
    CHECK(j["a4_field_polynomials"].size() == 1);
    fs::remove_all(dir);
  }

  TEST_CASE("CSV rows and JSON lines carry the same fields") {
    auto dir = fresh_dir("cli-csv");
    auto js = run_cli(kExe, {"tetra-census", "--max", "400", "--format", "json", "--store", dir.string()});
    auto cs = run_cli(kExe, {"tetra-census", "--max", "400", "--format", "csv", "--store", dir.string()});
    REQUIRE(js.status == 0);
    REQUIRE(cs.status == 0);
    auto recs = json_lines(js.out);
    REQUIRE(recs.size() == 4);  // 163, 277, 349, 397
    std::string header = cs.out.substr(0, cs.out.find('\n'));
    std::set<std::string> cols;
    std::stringstream ss(header);
    std::string c;
    while (std::getline(ss, c, ',')) cols.insert(c);
    std::set<std::string> keys;
    for (auto& [k, v] : recs[0].items()) keys.insert(k);
    CHECK(cols == keys);
    fs::remove_all(dir);
  }

  TEST_CASE("seed does not change records") {
    auto a = fresh_dir("cli-seed-a"), b = fresh_dir("cli-seed-b");
    auto ra = run_cli(kExe, {"tetra-census", "--max", "1500", "--all", "--format", "json", "--seed", "0", "--store",
                             a.string()});
    auto rb = run_cli(kExe, {"tetra-census", "--max", "1500", "--all", "--format", "json", "--seed", "31337",
                             "--store", b.string()});
    CHECK(comparable(json_lines(ra.out)) == comparable(json_lines(rb.out)));
    fs::remove_all(a);
    fs::remove_all(b);
  }

  TEST_CASE("kill and restart gives the uninterrupted record set") {
    auto a = fresh_dir("cli-kill-a"), b = fresh_dir("cli-kill-b");
    std::vector<std::string> args{"tetra-census", "--max", "4000", "--all", "--format", "json", "--store"};
    auto ref = run_cli(kExe, [&] { auto v = args; v.push_back(a.string()); return v; }());
    auto vb = args;
    vb.push_back(b.string());
    run_cli_and_kill(kExe, vb, std::chrono::milliseconds(700));
    auto again = run_cli(kExe, vb);
    REQUIRE(again.status == 0);
    CHECK(comparable(json_lines(again.out)) == comparable(json_lines(ref.out)));
    // A third run computes nothing new.
    auto size_before = fs::file_size(b / "tetra.jsonl");
    run_cli(kExe, vb);
    CHECK(fs::file_size(b / "tetra.jsonl") == size_before);
    fs::remove_all(a);
    fs::remove_all(b);
  }
}
