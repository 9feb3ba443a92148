#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace maass {

inline constexpr const char* kEngineVersion = "1.1";

enum class CensusKind { Tetrahedral, Octahedral };
std::string census_kind_name(CensusKind k);  // "tetra" / "octa"

struct CensusRecord {
  CensusKind kind = CensusKind::Tetrahedral;
  long ell = 0;
  std::string status = "ok";  // ok, incomplete, integrity_error, unsupported
  std::string error;
  bool eligible = false;
  std::vector<std::string> reasons;
  std::string polynomial;  // defining polynomial of L (tetra) or F (octa)

  // tetrahedral
  std::string class_group;  // structure of Cl(L)
  std::string class_number;
  std::string narrow_class_group;
  int two_rank = 0;
  int five_rank = 0;
  long shanks_a = -2;  // -2: not a Shanks prime
  int k = 0;           // U_2 multiplicity
  long n_forms = 0;    // 2^k - 1 (tetra) or sum of 2^{k_L} - 1 (octa)
  int a4_fields = -1;  // A4 fields constructed, -1 when not attempted
  int mod3_distinct = -1;
  int conductor_exponent = 0;  // m(ell), 0 when there is no form
  std::string splitting;       // "e,f,g" of ell in the degree-12 field

  // octahedral
  int h_ell = 0;  // 3-rank of Cl(Q(sqrt ell))
  std::string quadratic_class_group;
  int card_L = 0;
  int quotient_dim_F = 0;
  std::vector<int> k_L;
  std::vector<int> conductor_exponents;  // one per octahedral form

  // metadata
  bool conditional = false;  // some class group used the GRH bound
  bool grh = false;
  uint64_t seed = 0;
  std::string engine_version = kEngineVersion;
  double elapsed_seconds = 0;
  std::string checksum;

  bool complete() const { return status == "ok"; }
};

struct CensusOptions {
  bool grh = false;
  uint64_t seed = 0;
  double budget_seconds = 0;  // per prime, 0: unlimited
  int jobs = 1;
  bool construct_fields = true;  // build the A4 fields for eligible primes
};

// Candidate primes: ell = 1 mod 3 (tetra) or ell = 1 mod 4, ell >= 5 (octa), in [lo, hi].
std::vector<long> census_primes(CensusKind kind, long lo, long hi);

CensusRecord tetra_record(long ell, const CensusOptions& opt);
CensusRecord octa_record(long ell, const CensusOptions& opt);
CensusRecord census_record(CensusKind kind, long ell, const CensusOptions& opt);

// Processes the primes with a pool of opt.jobs workers; `sink` is called for
// each finished record, one at a time, in completion order.
void run_census(CensusKind kind, const std::vector<long>& primes, const CensusOptions& opt,
                const std::function<void(const CensusRecord&)>& sink);

struct CensusStatistics {
  long bound = 0;
  long primes_considered = 0;  // complete records with ell <= bound
  long eligible = 0;
  double proportion = 0;  // eligible / primes_considered
  std::map<long, long> histogram;  // n_forms -> number of eligible primes
  std::map<int, long> mod3_histogram;  // mod-3-distinct count -> number of primes
  long incomplete = 0;
  long integrity_errors = 0;
  long missing = 0;  // candidate primes without a record
};

CensusStatistics census_statistics(CensusKind kind, const std::vector<CensusRecord>& records, long bound);

struct DiagonalPair {
  long ell1 = 0, ell2 = 0;
  std::string group1, group2;
  int two_rank1 = 0, two_rank2 = 0;
};

struct DiagonalReport {
  std::vector<DiagonalPair> pairs;
  bool pairs_ok = false;  // every diagonal field has 2-rank <= 1
  std::vector<long> eligible_below;  // eligible primes below the verdict bound
  long smallest = 0;
  long second_smallest = 0;
  bool contradiction = false;
};

// Pairs (7,13), (7,19), (7,31), (7,37), (13,19), plus the tetrahedral census
// records for primes up to `census_bound` (computed when missing).
DiagonalReport diagonal_smallest_level_check(const CensusOptions& opt, const std::vector<CensusRecord>& known,
                                             long census_bound = 300);

std::string input_checksum(const std::string& polynomial, bool grh, const std::string& engine_version);

}  // namespace maass
