#pragma once

// Exact linear algebra over the rationals. Everything here is deterministic:
// echelon forms pick the lowest-index pivot, so bases are canonical.

#include "nilorbit/rational.hpp"

#include <optional>

namespace nilorbit {

// Row-reduced echelon form in place; returns pivot column indices.
std::vector<int> rref(RatMat& m);

int rank(RatMat m);

// Canonical basis of the span of the given row vectors (rref rows, zero rows dropped).
std::vector<RatVec> span_basis(const std::vector<RatVec>& rows);

// Basis of {x : m x = 0}. Free variables set to 1 in increasing column order.
std::vector<RatVec> null_space(const RatMat& m);

bool in_span(const std::vector<RatVec>& basis, const RatVec& v);

// True iff span(a) is contained in span(b).
bool span_contained(const std::vector<RatVec>& a, const std::vector<RatVec>& b);

// One solution of m x = b, if any.
std::optional<RatVec> solve(const RatMat& m, const RatVec& b);

// Coordinates of v in the given (independent) basis, if v lies in its span.
std::optional<RatVec> coordinates_in(const std::vector<RatVec>& basis, const RatVec& v);

Rat dot(const RatVec& a, const RatVec& b);

// <a, b> under the symmetric form G:  a^T G b.
Rat gram_dot(const RatMat& G, const RatVec& a, const RatVec& b);

RatVec mat_vec(const RatMat& m, const RatVec& v);

RatVec vec_add(const RatVec& a, const RatVec& b);
RatVec vec_sub(const RatVec& a, const RatVec& b);
RatVec vec_scale(const Rat& c, const RatVec& a);
bool vec_is_zero(const RatVec& a);

// If q is the square of a rational, returns its positive square root.
std::optional<Rat> rational_sqrt(const Rat& q);

}  // namespace nilorbit
