#include "maass/conductor.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <vector>

#include "maass/errors.hpp"

namespace maass {

namespace {

using Perm = std::array<int, 4>;

Perm compose(const Perm& a, const Perm& b) {  // a after b
  Perm r{};
  for (int i = 0; i < 4; ++i) r[i] = a[b[i]];
  return r;
}

int order(const Perm& p) {
  Perm x = p;
  int k = 1;
  while (x != Perm{0, 1, 2, 3}) {
    x = compose(p, x);
    ++k;
  }
  return k;
}

bool odd(const Perm& p) {
  int inv = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) inv += p[i] > p[j];
  }
  return inv & 1;
}

std::vector<Perm> group_elements(ProjectiveType t) {
  std::vector<Perm> out;
  Perm p{0, 1, 2, 3};
  do {
    if (t == ProjectiveType::S4 || !odd(p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::set<Perm> generated(const Perm& a, const Perm& b) {
  std::set<Perm> s{Perm{0, 1, 2, 3}};
  std::vector<Perm> todo{Perm{0, 1, 2, 3}};
  while (!todo.empty()) {
    Perm x = todo.back();
    todo.pop_back();
    for (const Perm& g : {a, b}) {
      Perm y = compose(g, x);
      if (s.insert(y).second) todo.push_back(y);
    }
  }
  return s;
}

// Decomposition groups D = <i, phi> of order e f with I = <i> normal and
// D / I cyclic generated by phi. Returns 1 if all are cyclic, 0 if none is,
// -1 if both occur, -2 if there are none.
int cyclic_verdict(ProjectiveType t, int e, int f, int inertia_odd) {
  const auto G = group_elements(t);
  bool some_cyclic = false, some_not = false;
  for (const Perm& i : G) {
    if (order(i) != e) continue;
    if (inertia_odd >= 0 && odd(i) != static_cast<bool>(inertia_odd)) continue;
    auto I = generated(i, i);
    for (const Perm& phi : G) {
      auto D = generated(i, phi);
      if (static_cast<int>(D.size()) != e * f) continue;
      bool normal = true;
      for (const Perm& d : D) {
        Perm dinv{};
        for (int k = 0; k < 4; ++k) dinv[d[k]] = k;
        normal = normal && I.count(compose(d, compose(i, dinv)));
      }
      if (!normal) continue;
      bool cyc = std::any_of(D.begin(), D.end(), [&](const Perm& x) { return order(x) == e * f; });
      (cyc ? some_cyclic : some_not) = true;
    }
  }
  if (!some_cyclic && !some_not) return -2;
  if (some_cyclic && some_not) return -1;
  return some_cyclic ? 1 : 0;
}

}  // namespace

std::string projective_type_name(ProjectiveType t) { return t == ProjectiveType::A4 ? "A4" : "S4"; }

int projective_conductor_exponent(const RamificationProfile& r) {
  const int max_e = r.type == ProjectiveType::A4 ? 3 : 4;
  if (r.e < 1 || r.e > max_e) throw DomainError("inertia order " + std::to_string(r.e) + " impossible");
  if (r.e == 1) return 0;
  if (r.p == 2 || r.p == 3) throw UnsupportedError("wild ramification at " + std::to_string(r.p));
  if (r.e == 2) return r.decomposition_cyclic ? 1 : 2;
  return (r.p - 1) % static_cast<uint64_t>(r.e) == 0 ? 1 : 2;
}

RamificationProfile ramification_profile_from_splitting(ProjectiveType t, uint64_t p, int e, int f, int g,
                                                        int inertia_odd) {
  const int n = t == ProjectiveType::A4 ? 12 : 24;
  if (e < 1 || f < 1 || g < 1 || e * f * g != n) throw DomainError("splitting data does not multiply to the group order");
  RamificationProfile r;
  r.p = p;
  r.e = e;
  r.f = f;
  r.type = t;
  int v = cyclic_verdict(t, e, f, inertia_odd);
  if (v == -2) throw DomainError("no decomposition group with this splitting");
  if (v == -1) throw UnsupportedError("splitting data does not determine whether the decomposition group is cyclic");
  r.decomposition_cyclic = v == 1;
  return r;
}

}  // namespace maass
