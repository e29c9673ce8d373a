#pragma once

// Test-only oracles, independent of the library's computation paths.

#include "nilorbit/rational.hpp"

#include <array>

namespace nilorbit::testing {

// Exact 3x3 rational matrices; enough for the unipotent Heisenberg oracle.
using Mat3 = std::array<std::array<Rat, 3>, 3>;

inline Mat3 mat3_zero() {
    Mat3 m{};
    for (auto& row : m) row.fill(Rat(0));
    return m;
}

inline Mat3 mat3_id() {
    Mat3 m = mat3_zero();
    for (int i = 0; i < 3; ++i) m[i][i] = 1;
    return m;
}

inline Mat3 mat3_mul(const Mat3& a, const Mat3& b) {
    Mat3 c = mat3_zero();
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Mat3 mat3_add(const Mat3& a, const Mat3& b) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] + b[i][j];
    return c;
}

inline Mat3 mat3_scale(const Rat& s, const Mat3& a) {
    Mat3 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i][j] = s * a[i][j];
    return c;
}

// Heisenberg coordinates (x, y, z) -> strictly upper triangular x E12 + y E23 + z E13.
inline Mat3 heis_matrix(const Rat& x, const Rat& y, const Rat& z) {
    Mat3 m = mat3_zero();
    m[0][1] = x;
    m[1][2] = y;
    m[0][2] = z;
    return m;
}

// exp of a strictly upper triangular 3x3 (nilpotent of order 3): finite sum.
inline Mat3 mat3_exp_nilpotent(const Mat3& n) {
    Mat3 n2 = mat3_mul(n, n);
    return mat3_add(mat3_add(mat3_id(), n), mat3_scale(Rat(1, 2), n2));
}

// log of a unipotent 3x3: finite Mercator series.
inline Mat3 mat3_log_unipotent(const Mat3& u) {
    Mat3 n = u;
    for (int i = 0; i < 3; ++i) n[i][i] -= 1;
    Mat3 n2 = mat3_mul(n, n);
    return mat3_add(n, mat3_scale(Rat(-1, 2), n2));
}

// Group law on Heisenberg coordinates via the matrix model.
inline std::array<Rat, 3> heis_group_law(const std::array<Rat, 3>& a,
                                         const std::array<Rat, 3>& b) {
    Mat3 ga = mat3_exp_nilpotent(heis_matrix(a[0], a[1], a[2]));
    Mat3 gb = mat3_exp_nilpotent(heis_matrix(b[0], b[1], b[2]));
    Mat3 lg = mat3_log_unipotent(mat3_mul(ga, gb));
    return {lg[0][1], lg[1][2], lg[0][2]};
}

}  // namespace nilorbit::testing
