#pragma once

// Bundled algebras: abelian R^1/R^2/R^3, Heisenberg h3 and h5, the filiform
// n4, and a 5-dimensional two-step algebra. These cover both recursion cases
// of the induction machinery to depth >= 2.

#include "nilorbit/lie_core.hpp"

namespace nilorbit::fixtures {

AlgebraPtr abelian(int dim);
AlgebraPtr h3();
AlgebraPtr h5();
AlgebraPtr n4();
AlgebraPtr twostep5();
// Standard filiform of dimension d (class d-1): [e1, ei] = e_{i+1}.
AlgebraPtr filiform(int dim);
// Free two-step algebra on three generators (dim 6).
AlgebraPtr free_twostep3();

AlgebraPtr by_name(const std::string& name);
std::vector<std::string> names();

// Deterministic nilpotent algebras for property suites: a bundled template
// conjugated by a random unimodular rational change of basis.
AlgebraPtr random_nilpotent(uint64_t seed, int max_dim);

// Random rational vector with entries p/q, |p| <= mag, 1 <= q <= den.
RatVec random_rat_vec(uint64_t seed, int dim, int mag = 4, int den = 3);

}  // namespace nilorbit::fixtures
