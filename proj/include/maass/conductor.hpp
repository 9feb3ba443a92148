#pragma once

#include <cstdint>
#include <string>

namespace maass {

enum class ProjectiveType { A4, S4 };
std::string projective_type_name(ProjectiveType t);

// Ramification of a rational prime in the field cut out by a projective
// representation, read off its Galois closure.
struct RamificationProfile {
  uint64_t p = 0;
  int e = 1;  // inertia order in the projective image
  int f = 1;
  bool decomposition_cyclic = true;
  ProjectiveType type = ProjectiveType::A4;
};

// Exponent of p in the conductor of the projective representation (tame p only).
int projective_conductor_exponent(const RamificationProfile& r);

// From (e, f, g) of p in the Galois closure (order 12 or 24). When the
// inertia generator has order 2 in S4, inertia_odd says whether it is a
// transposition; without it the (2,2) case is ambiguous and unsupported.
RamificationProfile ramification_profile_from_splitting(ProjectiveType t, uint64_t p, int e, int f, int g,
                                                        int inertia_odd = -1);

}  // namespace maass
