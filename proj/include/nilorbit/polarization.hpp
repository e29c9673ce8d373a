#pragma once

// Polarizing (maximal subordinate) subalgebras: the Vergne construction
// through a flag of ideals, and the executable polarization check.

#include "nilorbit/coadjoint.hpp"

namespace nilorbit {

struct Polarization {
    std::vector<RatVec> m_basis;
    Functional for_l;
    std::vector<std::vector<RatVec>> flag_used;
};

// Strong Malcev flag 0 < g_1 < ... < g_n = g refined from the lower central
// series (every member is an ideal), with lowest-index tie-breaking.
std::vector<std::vector<RatVec>> malcev_flag(const NilpotentAlgebra& algebra);

// m = sum_j radical(l restricted to g_j, inside g_j). The flag must consist
// of ideals of increasing dimension 1..n.
Polarization vergne_polarization(const Functional& l,
                                 const std::vector<std::vector<RatVec>>& flag);
Polarization vergne_polarization(const Functional& l);

struct PolarizationCheck {
    bool subalgebra = false;
    bool isotropic = false;
    bool maximal = false;  // dim m == dim g - orbit_dimension / 2
    std::string first_failure;
    bool ok() const { return subalgebra && isotropic && maximal; }
};

PolarizationCheck is_polarizing(const std::vector<RatVec>& m_basis, const Functional& l);

}  // namespace nilorbit
