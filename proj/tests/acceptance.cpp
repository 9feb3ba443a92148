// One PASS/FAIL line per acceptance criterion. Criterion 6 (census to 10^5)
// runs only with MAASS_FULL_CENSUS=1.

#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "class_oracle.hpp"
#include "cli_harness.hpp"
#include "maass/a4_tower.hpp"
#include "maass/class_group.hpp"
#include "maass/fields.hpp"
#include "maass/number_field.hpp"
#include "maass/quadratic_forms.hpp"
#include "maass/ray_class.hpp"

using namespace maass;
using namespace maass::testing;
using nlohmann::json;

namespace {

const std::string kExe = MAASS_CLI;

// Density tolerance for Frobenius classes.
constexpr double kDensityTol = 0.15;

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail, double seconds) {
  std::printf("criterion %2d %s  %s  [%s] (%.1fs)\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

template <class F>
void criterion(int id, const std::string& what, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  report(id, ok, what, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string list(const std::vector<long>& v) {
  std::string s = "{";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

std::string list(const std::set<long>& v) { return list(std::vector<long>(v.begin(), v.end())); }

std::vector<json> census(const std::filesystem::path& store, const std::string& kind, long max,
                         std::vector<std::string> extra = {}, int* status = nullptr) {
  std::vector<std::string> args{kind, "--max", std::to_string(max), "--all", "--format", "json", "--store",
                                store.string()};
  args.insert(args.end(), extra.begin(), extra.end());
  auto r = run_cli(kExe, args);
  if (status) *status = r.status;
  return json_lines(r.out);
}

}  // namespace

int main() {
  const auto store = fresh_dir("acceptance");
  std::vector<json> to2000, to21000;

  criterion(1, "tetra-census --max 2000 gives the I0 list", [&](std::string& d) {
    int st = 0;
    to2000 = census(store, "tetra-census", 2000, {}, &st);
    const std::set<long> expected{163, 277, 349, 547, 607, 937, 1399, 1699, 1777, 1879, 1951};
    std::set<long> got;
    bool shapes = true;
    for (auto& r : to2000) {
      if (!r["eligible"].get<bool>()) continue;
      got.insert(r["ell"].get<long>());
      shapes = shapes && r["class_number"] == "4" && r["class_group"] == "(2,2)" && r["n_forms"] == 1 &&
               r["conductor_exponent"] == 1;
    }
    d = "got " + list(got) + " expected " + list(expected) + (shapes ? "" : "; some entry is not h=4 (2,2) n=1 m=1");
    return st == 0 && got == expected && shapes;
  });

  criterion(2, "Shanks members of I0", [&](std::string& d) {
    const std::set<long> expected{163, 349, 607, 937};
    std::set<long> got;
    for (auto& r : to2000) {
      if (r["eligible"].get<bool>() && r["class_number"] == "4" && r["shanks_a"].get<long>() != -2) {
        got.insert(r["ell"].get<long>());
      }
    }
    d = "got " + list(got) + " expected " + list(expected);
    return got == expected;
  });

  criterion(3, "diagonal-check: pairs have 2-rank <= 1, verdict 163, second 277", [&](std::string& d) {
    auto r = run_cli(kExe, {"diagonal-check", "--format", "json", "--store", store.string()});
    if (r.status != 0) return false;
    auto j = json::parse(r.out);
    d = "pairs_ok=" + std::string(j["pairs_ok"].get<bool>() ? "yes" : "no") +
        " smallest=" + std::to_string(j["smallest"].get<long>()) +
        " second=" + std::to_string(j["second_smallest"].get<long>());
    return j["pairs_ok"].get<bool>() && j["smallest"] == 163 && j["second_smallest"] == 277 && j["pairs"].size() == 5;
  });

  criterion(4, "census to 21000: n=3 and mod-3-distinct 3 exactly at {7687,16363,20887}", [&](std::string& d) {
    int st = 0;
    to21000 = census(store, "tetra-census", 21000, {}, &st);
    std::set<long> n3, mod3_3, smaller_bad;
    std::map<long, int> mod3_at;
    for (auto& r : to21000) {
      if (!r["eligible"].get<bool>()) continue;
      const long ell = r["ell"].get<long>();
      if (r["n_forms"] == 3) n3.insert(ell);
      if (r["mod3_distinct"] == 3) mod3_3.insert(ell);
      mod3_at[ell] = r["mod3_distinct"].get<int>();
      if (ell < 7687 && r["n_forms"] != 1) smaller_bad.insert(ell);
    }
    const std::set<long> expected{7687, 16363, 20887};
    std::string counts;
    for (long e : expected) counts += " " + std::to_string(e) + ":" + std::to_string(mod3_at[e]);
    d = "records=" + std::to_string(to21000.size()) + " n=3 at " + list(n3) + ", mod-3-distinct counts" + counts +
        ", smaller with n != 1: " + list(smaller_bad);
    return st == 0 && n3 == expected && mod3_3 == expected && smaller_bad.empty();
  });

  criterion(5, "313 has h=7; 71563 has (7,49)", [&](std::string& d) {
    auto a = run_cli(kExe, {"field", "--ell", "313", "--format", "json", "--store", store.string()});
    auto b = run_cli(kExe, {"field", "--ell", "71563", "--grh", "--format", "json", "--store", store.string()});
    auto c = run_cli(kExe, {"field", "--ell", "71563", "--format", "json", "--store", store.string()});
    auto ja = json::parse(a.out), jb = json::parse(b.out), jc = json::parse(c.out);
    d = "313: " + ja["class_group"].get<std::string>() + ", 71563 (GRH): " + jb["class_group"].get<std::string>() +
        ", 71563 (unconditional): " + jc["class_group"].get<std::string>();
    return ja["class_number"] == "7" && jb["class_group"] == "(7,49)" && jc["class_group"] == "(7,49)" &&
           !jc["conditional"].get<bool>();
  });

  if (const char* full = std::getenv("MAASS_FULL_CENSUS"); full && std::string(full) == "1") {
    criterion(6, "census to 10^5: 636 with n=1, 8 with n=3", [&](std::string& d) {
      int st = 0;
      auto recs = census(store, "tetra-census", 100000, {}, &st);
      long one = 0;
      std::set<long> three;
      for (auto& r : recs) {
        if (!r["eligible"].get<bool>()) continue;
        if (r["n_forms"] == 1) ++one;
        if (r["n_forms"] == 3) three.insert(r["ell"].get<long>());
      }
      const std::set<long> expected{7687, 16363, 20887, 37087, 55609, 62617, 70597, 99529};
      d = "n=1: " + std::to_string(one) + ", n=3 at " + list(three);
      return st == 0 && one == 636 && three == expected;
    });
  } else {
    std::printf("criterion  6 SKIP  census to 10^5 (set MAASS_FULL_CENSUS=1)\n");
  }

  criterion(7, "2-rank and 5-rank even for ell = 1 mod 3 <= 2000", [&](std::string& d) {
    long n = 0;
    std::set<long> odd;
    for (auto& r : to2000) {
      if (r["status"] != "ok") {
        odd.insert(r["ell"].get<long>());
        continue;
      }
      ++n;
      if (r["two_rank"].get<int>() % 2 || r["five_rank"].get<int>() % 2) odd.insert(r["ell"].get<long>());
    }
    d = std::to_string(n) + " fields, exceptions " + list(odd);
    return n == 148 && odd.empty();
  });

  criterion(8, "octahedral structure for ell = 1 mod 4 <= 1000", [&](std::string& d) {
    int st = 0;
    auto recs = census(store, "octa-census", 1000, {}, &st);
    long checked = 0;
    std::set<long> bad;
    for (long ell = 5; ell <= 1000; ell += 4) {
      if (!is_prime(static_cast<uint64_t>(ell))) continue;
      auto o = count_octahedral(ell);
      bool ok = o.h_ell == o.h_ell_engine && o.h_ell == three_rank(FormClassGroup(ell).narrow_group()) &&
                o.card_L == projective_count(3, o.h_ell).get_si() &&
                static_cast<int>(o.cubics.size()) == o.card_L;
      for (auto& c : o.cubics) {
        ok = ok && (c.quotient_dim - o.quotient_dim_F) % 2 == 0 && c.k == (c.quotient_dim - o.quotient_dim_F) / 2;
      }
      ok = ok && o.quotient_dim_F == (ell % 8 == 1 ? 1 : 0);
      if (!ok) bad.insert(ell);
      ++checked;
    }
    d = std::to_string(checked) + " primes, " + std::to_string(recs.size()) + " CLI records, failures " + list(bad);
    return st == 0 && bad.empty() && static_cast<long>(recs.size()) == checked;
  });

  criterion(9, "degree-12 fields for 163, 277, 349", [&](std::string& d) {
    bool ok = true;
    for (long ell : {163L, 277L, 349L}) {
      auto cg = compute_class_group(cubic_subfield_of_cyclotomic(ell));
      auto kd = selmer_unramified_quadratics(cg);
      auto fields = a4_fields(cg, kd, ell);
      if (fields.size() != 1) return false;
      auto& F = fields[0];
      // Ramification in the closure of the quartic is that of the quartic.
      NumberField K12 = NumberField::create(F.degree12_poly);
      auto fac = K12.disc_factorization();
      bool disc_ok = fac.factors.size() == 1 && fac.factors[0].first == ell && F.quartic_field_disc == ell * ell;
      bool split_ok = F.at_ell.e == 3 && F.at_ell.f == 1 && F.at_ell.g == 4;
      std::map<std::vector<int>, long> patterns;
      long total = 0;
      for (uint32_t p : primes_up_to(999)) {
        if (p == static_cast<uint64_t>(ell)) continue;
        ++patterns[frobenius_data(F, p).pattern];
        ++total;
      }
      const std::map<std::vector<int>, double> expect{{std::vector<int>(12, 1), 1.0 / 12},
                                                      {std::vector<int>(6, 2), 3.0 / 12},
                                                      {std::vector<int>(4, 3), 8.0 / 12}};
      bool pat_ok = true;
      std::ostringstream dens;
      for (auto& [pat, n] : patterns) {
        auto it = expect.find(pat);
        if (it == expect.end()) {
          pat_ok = false;
          continue;
        }
        double x = static_cast<double>(n) / static_cast<double>(total);
        dens << " " << pat[0] << "^" << pat.size() << "=" << std::fixed;
        dens.precision(3);
        dens << x;
        pat_ok = pat_ok && std::abs(x - it->second) <= kDensityTol;
      }
      d += std::to_string(ell) + ": disc " + fac.to_string() + ", (" + std::to_string(F.at_ell.e) + "," +
           std::to_string(F.at_ell.f) + "," + std::to_string(F.at_ell.g) + ")," + dens.str() + "; ";
      ok = ok && disc_ok && split_ok && pat_ok;
    }
    return ok;
  });

  criterion(10, "cyclic cubic class groups below conductor 200 match the ideal-enumeration oracle",
            [&](std::string& d) {
              int fields = 0, agree = 0;
              for (long f = 7; f < 200; ++f) {
                if (!is_cyclic_cubic_conductor(f)) continue;
                for (auto& K : cyclic_cubic_fields(f)) {
                  IdealClassOracle oracle(K);
                  ++fields;
                  agree += oracle.group().structure() == compute_class_group(K).group.structure();
                }
              }
              d = std::to_string(agree) + "/" + std::to_string(fields) + " fields agree";
              return fields > 0 && agree == fields;
            });

  criterion(11, "seed invariance and kill/restart idempotence", [&](std::string& d) {
    auto a = fresh_dir("acc-seed-a"), b = fresh_dir("acc-seed-b"), c = fresh_dir("acc-kill");
    auto ra = census(a, "tetra-census", 5000, {"--seed", "0"});
    auto rb = census(b, "tetra-census", 5000, {"--seed", "271828"});
    const bool seed_ok = !ra.empty() && comparable(ra) == comparable(rb);
    std::vector<std::string> args{"tetra-census", "--max", "5000", "--all", "--format", "json", "--store", c.string()};
    const bool killed = run_cli_and_kill(kExe, args, std::chrono::milliseconds(1500));
    auto rc = census(c, "tetra-census", 5000);
    const bool restart_ok = comparable(rc) == comparable(ra);
    d = std::string("seeds ") + (seed_ok ? "agree" : "differ") + ", run " + (killed ? "killed" : "finished early") +
        ", restart " + (restart_ok ? "matches" : "differs");
    std::filesystem::remove_all(a);
    std::filesystem::remove_all(b);
    std::filesystem::remove_all(c);
    return seed_ok && restart_ok;
  });

  std::filesystem::remove_all(store);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
