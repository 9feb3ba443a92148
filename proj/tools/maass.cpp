// Census driver for tetrahedral and octahedral parameters of prime level.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "maass/a4_tower.hpp"
#include "maass/arith.hpp"
#include "maass/census.hpp"
#include "maass/class_group.hpp"
#include "maass/errors.hpp"
#include "maass/fields.hpp"
#include "maass/ray_class.hpp"
#include "maass/store.hpp"

using namespace maass;
using nlohmann::json;

namespace {

struct Globals {
  bool grh = false;
  std::string store;
  int jobs = 1;
  std::string format = "table";
  uint64_t seed = 0;
  double budget = 0;
  bool all = false;
};

CensusOptions census_options(const Globals& g) {
  CensusOptions o;
  o.grh = g.grh;
  o.seed = g.seed;
  o.budget_seconds = g.budget;
  o.jobs = g.jobs;
  return o;
}

ClassGroupOptions engine_options(const Globals& g) {
  ClassGroupOptions o;
  o.grh = g.grh;
  o.seed = g.seed;
  o.budget_seconds = g.budget;
  return o;
}

ResultStore open_store(const Globals& g) {
  return ResultStore(g.store.empty() ? ResultStore::default_dir() : std::filesystem::path(g.store));
}

void print_warnings(const ResultStore& s) {
  for (auto& w : s.warnings()) std::cerr << "warning: " << w << "\n";
}

// A stored record can stand in for a fresh one when it is complete, from
// this engine version, and no weaker than what was asked for.
bool reusable(const CensusRecord& r, bool grh) {
  return r.complete() && r.engine_version == kEngineVersion && (grh || !r.conditional);
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
  return s.empty() ? "-" : s;
}

void print_table(CensusKind kind, const std::vector<CensusRecord>& rows) {
  bool any_conditional = false;
  if (kind == CensusKind::Tetrahedral) {
    std::printf("%8s %10s %-14s %4s %6s %3s %3s %3s %5s %5s %s\n", "ell", "h", "Cl(L)", "rk2", "shanks", "k", "n",
                "m", "A4", "mod3", "status");
    for (auto& r : rows) {
      any_conditional |= r.conditional;
      std::string sh = r.shanks_a == -2 ? "-" : std::to_string(r.shanks_a);
      std::string m = r.eligible ? std::to_string(r.conductor_exponent) : "-";
      std::string a4 = r.a4_fields < 0 ? "-" : std::to_string(r.a4_fields);
      std::string d = r.mod3_distinct < 0 ? "-" : std::to_string(r.mod3_distinct);
      std::printf("%8ld %10s %-14s %4d %6s %3d %3ld %3s %5s %5s %s%s\n", r.ell, r.class_number.c_str(),
                  r.class_group.c_str(), r.two_rank, sh.c_str(), r.k, r.n_forms, m.c_str(), a4.c_str(), d.c_str(),
                  r.status.c_str(), r.conditional ? " *" : "");
    }
  } else {
    std::printf("%8s %-12s %5s %6s %5s %-10s %4s %-12s %s\n", "ell", "Cl(F)", "h_ell", "card_L", "dimF", "k_L", "n",
                "m", "status");
    for (auto& r : rows) {
      any_conditional |= r.conditional;
      std::printf("%8ld %-12s %5d %6d %5d %-10s %4ld %-12s %s%s\n", r.ell, r.quadratic_class_group.c_str(), r.h_ell,
                  r.card_L, r.quotient_dim_F, join(r.k_L).c_str(), r.n_forms, join(r.conductor_exponents).c_str(),
                  r.status.c_str(), r.conditional ? " *" : "");
    }
  }
  if (any_conditional) std::printf("* conditional on GRH\n");
}

void print_rows(CensusKind kind, const std::vector<CensusRecord>& rows, const std::string& format) {
  if (format == "json") {
    for (auto& r : rows) std::cout << record_to_json(r).dump() << "\n";
  } else if (format == "csv") {
    std::cout << csv_header(kind) << "\n";
    for (auto& r : rows) std::cout << csv_row(r) << "\n";
  } else {
    print_table(kind, rows);
  }
}

// Fills the store for every candidate prime up to `max` and returns the
// latest record per prime.
std::vector<CensusRecord> ensure_census(CensusKind kind, long max, const Globals& g, bool verbose) {
  ResultStore store = open_store(g);
  store.write_meta(census_options(g));
  std::map<long, CensusRecord> have;
  for (auto& r : store.scan(kind)) {
    if (r.engine_version == kEngineVersion) have[r.ell] = r;
  }
  print_warnings(store);
  std::vector<long> todo;
  for (long ell : census_primes(kind, 2, max)) {
    auto it = have.find(ell);
    if (it == have.end() || !reusable(it->second, g.grh)) todo.push_back(ell);
  }
  if (verbose && !todo.empty()) {
    std::cerr << census_kind_name(kind) << ": computing " << todo.size() << " primes into " << store.dir().string()
              << "\n";
  }
  size_t done = 0;
  run_census(kind, todo, census_options(g), [&](const CensusRecord& r) {
    store.append(r);
    have[r.ell] = r;
    ++done;
    if (verbose && done % 200 == 0) std::cerr << "  " << done << "/" << todo.size() << "\n";
  });
  std::vector<CensusRecord> out;
  for (long ell : census_primes(kind, 2, max)) {
    if (have.count(ell)) out.push_back(have[ell]);
  }
  return out;
}

int exit_code(const std::vector<CensusRecord>& recs) {
  for (auto& r : recs) {
    if (r.status == "integrity_error") return 2;
  }
  return 0;
}

void print_summary(CensusKind kind, const std::vector<CensusRecord>& recs, long max) {
  auto s = census_statistics(kind, recs, max);
  std::cerr << census_kind_name(kind) << " census to " << max << ": " << s.primes_considered << " primes, "
            << s.eligible << " eligible";
  if (s.incomplete) std::cerr << ", " << s.incomplete << " incomplete";
  if (s.integrity_errors) std::cerr << ", " << s.integrity_errors << " integrity errors";
  std::cerr << "\n";
  for (auto& r : recs) {
    if (!r.complete()) std::cerr << "  " << r.ell << ": " << r.status << ": " << r.error << "\n";
  }
}

int cmd_census(CensusKind kind, long max, const Globals& g) {
  auto recs = ensure_census(kind, max, g, true);
  std::vector<CensusRecord> rows;
  for (auto& r : recs) {
    if (g.all || r.eligible || !r.complete()) rows.push_back(r);
  }
  print_rows(kind, rows, g.format);
  print_summary(kind, recs, max);
  return exit_code(recs);
}

int cmd_field(long ell, const std::string& kind_name, const Globals& g) {
  const CensusKind kind = kind_name == "octa" ? CensusKind::Octahedral : CensusKind::Tetrahedral;
  CensusOptions opt = census_options(g);
  CensusRecord r = census_record(kind, ell, opt);
  json rep = record_to_json(r);
  if (r.complete() && kind == CensusKind::Tetrahedral && r.eligible) {
    auto cg = compute_class_group(cubic_subfield_of_cyclotomic(ell), engine_options(g));
    auto kd = selmer_unramified_quadratics(cg);
    json fields = json::array();
    for (auto& F : a4_fields(cg, kd, ell)) {
      fields.push_back({{"quartic", F.quartic.to_string()},
                        {"quartic_field_disc", to_string(F.quartic_field_disc)},
                        {"degree12", F.degree12_poly.to_string()},
                        {"splitting", std::to_string(F.at_ell.e) + "," + std::to_string(F.at_ell.f) + "," +
                                          std::to_string(F.at_ell.g)}});
    }
    rep["a4_field_polynomials"] = fields;
  }
  if (r.complete() && kind == CensusKind::Octahedral) {
    auto o = count_octahedral(ell, engine_options(g));
    json cubics = json::array();
    for (auto& c : o.cubics) {
      json forms = json::array();
      for (auto& f : c.forms) forms.push_back({{"e", f.e}, {"f", f.f}, {"m", f.conductor_exponent}});
      cubics.push_back({{"cubic", c.cubic.to_string()},
                        {"sextic", c.sextic.to_string()},
                        {"sextic_class_group", c.sextic_class_group.structure()},
                        {"quotient_dim", c.quotient_dim},
                        {"k", c.k},
                        {"forms", forms}});
    }
    rep["cubics"] = cubics;
  }
  if (g.format == "json") {
    std::cout << rep.dump(2) << "\n";
  } else if (g.format == "csv") {
    std::cout << csv_header(kind) << "\n" << csv_row(r) << "\n";
  } else {
    std::cout << census_kind_name(kind) << " ell=" << ell << " status=" << r.status << "\n";
    if (!r.error.empty()) std::cout << "  error: " << r.error << "\n";
    std::cout << "  polynomial: " << r.polynomial << "\n";
    if (kind == CensusKind::Tetrahedral) {
      std::cout << "  h=" << r.class_number << " Cl(L)=" << r.class_group << " narrow=" << r.narrow_class_group
                << " 2-rank=" << r.two_rank << " 5-rank=" << r.five_rank << "\n";
      if (r.shanks_a != -2) std::cout << "  Shanks prime, a=" << r.shanks_a << "\n";
      std::cout << "  eligible=" << (r.eligible ? "yes" : "no") << " k=" << r.k << " n=" << r.n_forms;
      if (r.eligible) std::cout << " m(ell)=" << r.conductor_exponent << " splitting (" << r.splitting << ")";
      std::cout << "\n";
      if (rep.contains("a4_field_polynomials")) {
        std::cout << "  A4 fields: " << r.a4_fields << ", pairwise non-isomorphic: " << r.mod3_distinct << "\n";
        for (auto& f : rep["a4_field_polynomials"]) {
          std::cout << "    quartic " << f["quartic"].get<std::string>() << " (disc "
                    << f["quartic_field_disc"].get<std::string>() << ")\n";
          std::cout << "    degree 12 " << f["degree12"].get<std::string>() << "\n";
        }
      }
    } else {
      std::cout << "  Cl(F)=" << r.quadratic_class_group << " h_ell=" << r.h_ell << " card_L=" << r.card_L
                << " dim F-quotient=" << r.quotient_dim_F << " n=" << r.n_forms << "\n";
      if (rep.contains("cubics")) {
        for (auto& c : rep["cubics"]) {
          std::cout << "    cubic " << c["cubic"].get<std::string>() << "  Cl(sextic)="
                    << c["sextic_class_group"].get<std::string>() << " k=" << c["k"].get<int>() << "\n";
          std::cout << "      sextic " << c["sextic"].get<std::string>() << "\n";
          for (auto& f : c["forms"]) {
            std::cout << "      form e=" << f["e"].get<int>() << " f=" << f["f"].get<int>() << " m=" << f["m"].get<int>()
                      << "\n";
          }
        }
      }
    }
    if (r.conditional) std::cout << "  (conditional on GRH)\n";
  }
  if (r.status == "integrity_error") return 2;
  return r.complete() || r.status == "unsupported" ? 0 : 1;
}

int cmd_diagonal(const Globals& g) {
  ResultStore store = open_store(g);
  auto known = store.scan(CensusKind::Tetrahedral);
  print_warnings(store);
  std::vector<CensusRecord> usable;
  for (auto& r : known) {
    if (reusable(r, g.grh)) usable.push_back(r);
  }
  auto rep = diagonal_smallest_level_check(census_options(g), usable);
  if (g.format == "json") {
    json j;
    j["pairs"] = json::array();
    for (auto& p : rep.pairs) {
      j["pairs"].push_back({{"ell1", p.ell1}, {"ell2", p.ell2}, {"group1", p.group1}, {"group2", p.group2},
                            {"two_rank1", p.two_rank1}, {"two_rank2", p.two_rank2}});
    }
    j["pairs_ok"] = rep.pairs_ok;
    j["eligible_below"] = rep.eligible_below;
    j["smallest"] = rep.smallest;
    j["second_smallest"] = rep.second_smallest;
    j["contradiction"] = rep.contradiction;
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (auto& p : rep.pairs) {
    std::printf("(%ld,%ld)  Cl = %-10s 2-rank %d   Cl = %-10s 2-rank %d\n", p.ell1, p.ell2, p.group1.c_str(),
                p.two_rank1, p.group2.c_str(), p.two_rank2);
  }
  std::printf("diagonal fields: %s\n", rep.pairs_ok ? "all 2-ranks <= 1" : "some 2-rank >= 2");
  std::printf("smallest eligible prime level: %ld\n", rep.smallest);
  std::printf("second smallest: %ld\n", rep.second_smallest);
  std::printf("verdict: %ld%s\n", rep.smallest, rep.contradiction ? " (inconsistent with the diagonal argument)" : "");
  return 0;
}

int cmd_frobenius(long ell, long pmax, const Globals& g) {
  if (ell % 3 != 1 || !is_prime(static_cast<uint64_t>(ell))) throw DomainError("--ell must be a prime = 1 mod 3");
  auto cg = compute_class_group(cubic_subfield_of_cyclotomic(ell), engine_options(g));
  if (cg.group.p_rank(2) == 0) {
    std::cerr << "Cl(L) = " << cg.group.structure() << " has odd order: no tetrahedral form of level " << ell << "\n";
    return 0;
  }
  auto kd = selmer_unramified_quadratics(cg);
  auto fields = a4_fields(cg, kd, ell);
  json out = json::array();
  std::map<std::string, long> counts;
  long total = 0;
  for (uint32_t p : primes_up_to(static_cast<uint32_t>(std::max<long>(pmax - 1, 2)))) {
    if (p == static_cast<uint64_t>(ell) || p >= pmax) continue;
    json row;
    row["p"] = p;
    json per = json::array();
    for (auto& F : fields) {
      auto fd = frobenius_data(F, p);
      std::string pat;
      for (size_t i = 0; i < fd.pattern.size(); ++i) pat += (i ? " " : "") + std::to_string(fd.pattern[i]);
      per.push_back({{"class", a4_class_name(fd.cls)}, {"pattern", pat}, {"ap2_mod3", fd.trace_squared_mod3}});
      if (&F == &fields.front()) {
        ++counts[a4_class_name(fd.cls)];
        ++total;
      }
    }
    row["forms"] = per;
    out.push_back(row);
  }
  if (g.format == "json") {
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  if (g.format == "csv") {
    std::cout << "p,form,class,pattern,ap2_mod3\n";
    for (auto& row : out) {
      for (size_t i = 0; i < row["forms"].size(); ++i) {
        auto& f = row["forms"][i];
        std::cout << row["p"].get<long>() << "," << i << "," << f["class"].get<std::string>() << ","
                  << f["pattern"].get<std::string>() << "," << f["ap2_mod3"].get<int>() << "\n";
      }
    }
    return 0;
  }
  std::printf("%8s %4s %-22s %-26s %s\n", "p", "form", "class", "residue degrees", "a_p^2 mod 3");
  for (auto& row : out) {
    for (size_t i = 0; i < row["forms"].size(); ++i) {
      auto& f = row["forms"][i];
      std::printf("%8ld %4zu %-22s %-26s %d\n", row["p"].get<long>(), i, f["class"].get<std::string>().c_str(),
                  f["pattern"].get<std::string>().c_str(), f["ap2_mod3"].get<int>());
    }
  }
  std::printf("classes of form 0 over %ld primes:", total);
  for (auto& [c, n] : counts) std::printf("  %s %ld (%.3f)", c.c_str(), n, total ? double(n) / total : 0.0);
  std::printf("\n");
  return 0;
}

int cmd_stats(long max, const std::string& kind_name, const Globals& g) {
  const CensusKind kind = kind_name == "octa" ? CensusKind::Octahedral : CensusKind::Tetrahedral;
  auto recs = ensure_census(kind, max, g, true);
  auto s = census_statistics(kind, recs, max);
  if (g.format == "json") {
    json j;
    j["kind"] = census_kind_name(kind);
    j["bound"] = s.bound;
    j["primes_considered"] = s.primes_considered;
    j["eligible"] = s.eligible;
    j["proportion"] = s.proportion;
    j["histogram"] = json::object();
    for (auto& [n, c] : s.histogram) j["histogram"][std::to_string(n)] = c;
    j["mod3_histogram"] = json::object();
    for (auto& [n, c] : s.mod3_histogram) j["mod3_histogram"][std::to_string(n)] = c;
    j["incomplete"] = s.incomplete;
    j["integrity_errors"] = s.integrity_errors;
    j["missing"] = s.missing;
    std::cout << j.dump(2) << "\n";
  } else if (g.format == "csv") {
    std::cout << "kind,bound,primes_considered,eligible,proportion,n_forms,count\n";
    for (auto& [n, c] : s.histogram) {
      std::cout << census_kind_name(kind) << "," << s.bound << "," << s.primes_considered << "," << s.eligible << ","
                << s.proportion << "," << n << "," << c << "\n";
    }
  } else {
    std::printf("%s census to %ld\n", census_kind_name(kind).c_str(), max);
    std::printf("  primes considered: %ld\n", s.primes_considered);
    std::printf("  eligible: %ld (proportion %.4f)\n", s.eligible, s.proportion);
    for (auto& [n, c] : s.histogram) std::printf("  %ld with %ld form%s\n", c, n, n == 1 ? "" : "s");
    for (auto& [n, c] : s.mod3_histogram) std::printf("  %ld with %d pairwise non-isomorphic A4 fields\n", c, n);
    if (s.incomplete) std::printf("  incomplete: %ld\n", s.incomplete);
    if (s.integrity_errors) std::printf("  integrity errors: %ld\n", s.integrity_errors);
    if (s.missing) std::printf("  missing: %ld\n", s.missing);
  }
  return exit_code(recs);
}

std::string csv_help() {
  std::string s = "CSV columns (identical to the JSON keys; arrays joined with ';'):\n  tetra: ";
  s += csv_header(CensusKind::Tetrahedral);
  s += "\n  octa: ";
  s += csv_header(CensusKind::Octahedral);
  s += "\nThe store directory defaults to $";
  s += kStoreEnv;
  s += ", else ./maass-store.\nExit status: 0 success, 1 usage error, 2 integrity error in some record.";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tetrahedral and octahedral parameters of prime level"};
  app.require_subcommand(1);
  app.footer(csv_help());
  Globals g;
  auto add_globals = [&](CLI::App* a) {
    a->add_flag("--grh", g.grh, "use GRH bounds for the factor base (results are marked conditional)");
    a->add_option("--store", g.store, "result store directory");
    a->add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    a->add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
    a->add_option("--seed", g.seed, "seed for the relation search");
    a->add_option("--budget", g.budget, "time budget per prime in seconds (0: none)")->check(CLI::NonNegativeNumber);
  };

  long max = 0, ell = 0, pmax = 1000;
  std::string kind = "tetra";
  auto* tetra = app.add_subcommand("tetra-census", "census of cyclic cubic fields of prime conductor");
  tetra->add_option("--max", max, "largest ell")->required();
  tetra->add_flag("--all", g.all, "print every prime, not only eligible ones");
  auto* octa = app.add_subcommand("octa-census", "census of octahedral parameters for ell = 1 mod 4");
  octa->add_option("--max", max, "largest ell")->required();
  octa->add_flag("--all", g.all, "print every prime, not only eligible ones");
  auto* field = app.add_subcommand("field", "report for one prime");
  field->add_option("--ell", ell, "prime level")->required();
  field->add_option("--kind", kind, "tetra or octa")->check(CLI::IsMember({"tetra", "octa"}));
  auto* diag = app.add_subcommand("diagonal-check", "diagonal cubic fields and the smallest level");
  auto* frob = app.add_subcommand("frobenius", "Frobenius classes and a_p^2 mod 3");
  frob->add_option("--ell", ell, "prime level")->required();
  frob->add_option("--pmax", pmax, "primes p < pmax");
  auto* stats = app.add_subcommand("stats", "statistics of a census, filling missing records");
  stats->add_option("--max", max, "largest ell")->required();
  stats->add_option("--kind", kind, "tetra or octa")->check(CLI::IsMember({"tetra", "octa"}));
  for (auto* a : {tetra, octa, field, diag, frob, stats}) add_globals(a);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*tetra) return cmd_census(CensusKind::Tetrahedral, max, g);
    if (*octa) return cmd_census(CensusKind::Octahedral, max, g);
    if (*field) return cmd_field(ell, kind, g);
    if (*diag) return cmd_diagonal(g);
    if (*frob) return cmd_frobenius(ell, pmax, g);
    if (*stats) return cmd_stats(max, kind, g);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
