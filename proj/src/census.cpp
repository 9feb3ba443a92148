#include "maass/census.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <mutex>
#include <thread>

#include "maass/a4_tower.hpp"
#include "maass/class_group.hpp"
#include "maass/conductor.hpp"
#include "maass/errors.hpp"
#include "maass/fields.hpp"
#include "maass/quadratic_forms.hpp"
#include "maass/ray_class.hpp"

namespace maass {

namespace {

ClassGroupOptions engine_options(const CensusOptions& opt) {
  ClassGroupOptions o;
  o.grh = opt.grh;
  o.seed = opt.seed;
  o.budget_seconds = opt.budget_seconds;
  return o;
}

CensusRecord fresh(CensusKind kind, long ell, const CensusOptions& opt) {
  CensusRecord r;
  r.kind = kind;
  r.ell = ell;
  r.grh = opt.grh;
  r.seed = opt.seed;
  return r;
}

// Runs `body`, mapping engine exceptions to record statuses.
template <class F>
void guarded(CensusRecord& r, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const IncompleteError& e) {
    r.status = "incomplete";
    r.error = e.what();
  } catch (const IntegrityError& e) {
    r.status = "integrity_error";
    r.error = e.what();
  } catch (const UnsupportedError& e) {
    r.status = "unsupported";
    r.error = e.what();
  } catch (const DomainError& e) {
    r.status = "unsupported";
    r.error = e.what();
  }
  r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.checksum = input_checksum(r.polynomial, r.grh, r.engine_version);
}

long pow_long(long b, int e) {
  long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

std::string census_kind_name(CensusKind k) { return k == CensusKind::Tetrahedral ? "tetra" : "octa"; }

std::string input_checksum(const std::string& polynomial, bool grh, const std::string& engine_version) {
  // FNV-1a, 64 bit
  uint64_t h = 1469598103934665603ULL;
  auto feed = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0xff;
    h *= 1099511628211ULL;
  };
  feed(polynomial);
  feed(grh ? "grh" : "minkowski");
  feed(engine_version);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<long> census_primes(CensusKind kind, long lo, long hi) {
  std::vector<long> out;
  if (hi < 2) return out;
  const long mod = kind == CensusKind::Tetrahedral ? 3 : 4;
  for (uint32_t p : primes_up_to(static_cast<uint32_t>(hi))) {
    if (p < lo || p % mod != 1 || p < 5) continue;
    out.push_back(p);
  }
  return out;
}

CensusRecord tetra_record(long ell, const CensusOptions& opt) {
  CensusRecord r = fresh(CensusKind::Tetrahedral, ell, opt);
  guarded(r, [&] {
    if (ell < 7 || ell % 3 != 1 || !is_prime(static_cast<uint64_t>(ell))) throw DomainError("need a prime = 1 mod 3");
    NumberField L = cubic_subfield_of_cyclotomic(ell);
    r.polynomial = L.poly().to_string();
    auto cg = compute_class_group(L, engine_options(opt));
    r.conditional = cg.conditional;
    r.class_group = cg.group.structure();
    r.class_number = cg.h().get_str();
    r.narrow_class_group = cg.narrow.structure();
    r.two_rank = cg.group.p_rank(2);
    r.five_rank = cg.group.p_rank(5);
    if (auto w = shanks_check(ell)) r.shanks_a = w->a;
    const Int h = cg.h();
    const bool even = mpz_even_p(h.get_mpz_t());
    const bool four = mpz_divisible_ui_p(h.get_mpz_t(), 4);
    if (r.two_rank % 2 != 0 || r.five_rank % 2 != 0) throw IntegrityError("odd 2-rank or 5-rank in a cyclic cubic field");
    if (even != four) throw IntegrityError("class number even but not divisible by 4");
    r.eligible = even;
    r.reasons.push_back(even ? "class number even" : "class number odd");
    r.k = r.two_rank / 2;
    r.n_forms = r.eligible ? (1L << r.k) - 1 : 0;
    if (!r.eligible) return;
    // ell is totally ramified in L and K/L is unramified, so inertia has order 3.
    RamificationProfile prof;
    prof.p = static_cast<uint64_t>(ell);
    prof.e = 3;
    prof.type = ProjectiveType::A4;
    r.conductor_exponent = projective_conductor_exponent(prof);
    if (!opt.construct_fields) return;
    auto kd = selmer_unramified_quadratics(cg);
    if (kd.module.k != r.k) throw IntegrityError("U_2 multiplicity differs from half the 2-rank");
    auto fields = a4_fields(cg, kd, ell);
    r.a4_fields = static_cast<int>(fields.size());
    if (r.a4_fields != (pow_long(4, r.k) - 1) / 3) throw IntegrityError("A4 field count is not (4^k - 1)/3");
    const auto& s = fields.front().at_ell;
    r.splitting = std::to_string(s.e) + "," + std::to_string(s.f) + "," + std::to_string(s.g);
    for (auto& F : fields) {
      auto p = ramification_profile_from_splitting(ProjectiveType::A4, static_cast<uint64_t>(ell), F.at_ell.e, F.at_ell.f,
                                                   F.at_ell.g);
      if (projective_conductor_exponent(p) != r.conductor_exponent) {
        throw IntegrityError("conductor exponent from the degree-12 field disagrees");
      }
    }
    r.mod3_distinct = mod3_distinctness(fields);
  });
  return r;
}

CensusRecord octa_record(long ell, const CensusOptions& opt) {
  CensusRecord r = fresh(CensusKind::Octahedral, ell, opt);
  guarded(r, [&] {
    if (ell < 5 || ell % 4 != 1 || !is_prime(static_cast<uint64_t>(ell))) throw DomainError("need a prime = 1 mod 4");
    r.polynomial = IntPoly::from_i64({-(ell - 1) / 4, -1, 1}).to_string();
    auto o = count_octahedral(ell, engine_options(opt));
    r.conditional = o.conditional;
    r.quadratic_class_group = o.quadratic_class_group.structure();
    r.h_ell = o.h_ell;
    r.card_L = o.card_L;
    r.quotient_dim_F = o.quotient_dim_F;
    for (auto& c : o.cubics) {
      r.k_L.push_back(c.k);
      for (auto& f : c.forms) {
        r.conductor_exponents.push_back(f.conductor_exponent);
        r.conductor_exponent = std::max(r.conductor_exponent, f.conductor_exponent);
      }
    }
    r.n_forms = o.n_forms;
    r.eligible = o.n_forms > 0;
    if (o.h_ell == 0) {
      r.reasons.push_back("3 does not divide h(Q(sqrt ell))");
    } else if (!r.eligible) {
      r.reasons.push_back("no U_2 summand in any sextic ray class quotient");
    } else {
      r.reasons.push_back("octahedral forms exist");
    }
  });
  return r;
}

CensusRecord census_record(CensusKind kind, long ell, const CensusOptions& opt) {
  return kind == CensusKind::Tetrahedral ? tetra_record(ell, opt) : octa_record(ell, opt);
}

void run_census(CensusKind kind, const std::vector<long>& primes, const CensusOptions& opt,
                const std::function<void(const CensusRecord&)>& sink) {
  std::atomic<size_t> next{0};
  std::mutex mu;
  auto worker = [&] {
    while (true) {
      size_t i = next++;
      if (i >= primes.size()) return;
      CensusRecord r = census_record(kind, primes[i], opt);
      std::lock_guard<std::mutex> lock(mu);
      sink(r);
    }
  };
  const int jobs = std::max(1, opt.jobs);
  if (jobs == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

CensusStatistics census_statistics(CensusKind kind, const std::vector<CensusRecord>& records, long bound) {
  CensusStatistics s;
  s.bound = bound;
  std::map<long, const CensusRecord*> by_ell;
  for (auto& r : records) {
    if (r.kind == kind && r.ell <= bound) by_ell[r.ell] = &r;
  }
  for (long ell : census_primes(kind, 2, bound)) {
    auto it = by_ell.find(ell);
    if (it == by_ell.end()) {
      ++s.missing;
      continue;
    }
    const CensusRecord& r = *it->second;
    if (r.status == "integrity_error") {
      ++s.integrity_errors;
      continue;
    }
    if (!r.complete()) {
      ++s.incomplete;
      continue;
    }
    ++s.primes_considered;
    if (!r.eligible) continue;
    ++s.eligible;
    ++s.histogram[r.n_forms];
    if (r.mod3_distinct >= 0) ++s.mod3_histogram[r.mod3_distinct];
  }
  s.proportion = s.primes_considered ? static_cast<double>(s.eligible) / static_cast<double>(s.primes_considered) : 0;
  return s;
}

DiagonalReport diagonal_smallest_level_check(const CensusOptions& opt, const std::vector<CensusRecord>& known,
                                             long census_bound) {
  DiagonalReport rep;
  rep.pairs_ok = true;
  const std::pair<long, long> pairs[] = {{7, 13}, {7, 19}, {7, 31}, {7, 37}, {13, 19}};
  for (auto [a, b] : pairs) {
    auto [K1, K2] = diagonal_cubic_fields(a, b);
    auto g1 = compute_class_group(K1, engine_options(opt));
    auto g2 = compute_class_group(K2, engine_options(opt));
    DiagonalPair d;
    d.ell1 = a;
    d.ell2 = b;
    d.group1 = g1.group.structure();
    d.group2 = g2.group.structure();
    d.two_rank1 = g1.group.p_rank(2);
    d.two_rank2 = g2.group.p_rank(2);
    rep.pairs_ok = rep.pairs_ok && d.two_rank1 <= 1 && d.two_rank2 <= 1;
    rep.pairs.push_back(d);
  }
  std::map<long, CensusRecord> recs;
  for (auto& r : known) {
    if (r.kind == CensusKind::Tetrahedral && r.complete()) recs[r.ell] = r;
  }
  CensusOptions quick = opt;
  quick.construct_fields = false;
  for (long ell : census_primes(CensusKind::Tetrahedral, 2, census_bound)) {
    if (!recs.count(ell)) recs[ell] = tetra_record(ell, quick);
    const auto& r = recs[ell];
    if (!r.complete()) throw IncompleteError("census record for " + std::to_string(ell) + " is " + r.status);
    if (r.eligible) rep.eligible_below.push_back(ell);
  }
  if (!rep.eligible_below.empty()) rep.smallest = rep.eligible_below[0];
  if (rep.eligible_below.size() > 1) rep.second_smallest = rep.eligible_below[1];
  rep.contradiction = !rep.pairs_ok || rep.smallest != 163;
  return rep;
}

}  // namespace maass
