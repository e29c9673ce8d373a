#include "nilorbit/ratlin.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>

namespace nilorbit {

Rat parse_rational(const std::string& text, const std::string& context) {
    auto fail = [&](const std::string& why) -> Rat {
        std::ostringstream os;
        os << "bad rational \"" << text << "\"";
        if (!context.empty()) os << " at " << context;
        os << ": " << why;
        throw ParseError(os.str());
    };
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
    if (s.empty()) return fail("empty");
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(boost::multiprecision::cpp_int(s));
        boost::multiprecision::cpp_int num(s.substr(0, slash));
        boost::multiprecision::cpp_int den(s.substr(slash + 1));
        if (den == 0) return fail("zero denominator");
        return Rat(num, den);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::vector<double> to_double(const RatVec& v) {
    std::vector<double> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
    return out;
}

std::vector<int> rref(RatMat& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    const int rows = (int)m.size(), cols = (int)m[0].size();
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (m[i][c] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        Rat inv = Rat(1) / m[r][c];
        for (int j = c; j < cols; ++j) m[r][j] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat f = m[i][c];
            for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

int rank(RatMat m) { return (int)rref(m).size(); }

std::vector<RatVec> span_basis(const std::vector<RatVec>& rows) {
    if (rows.empty()) return {};
    RatMat m = rows;
    rref(m);
    std::vector<RatVec> out;
    for (auto& row : m)
        if (!vec_is_zero(row)) out.push_back(row);
    return out;
}

std::vector<RatVec> null_space(const RatMat& m) {
    if (m.empty()) return {};
    RatMat r = m;
    std::vector<int> pivots = rref(r);
    const int cols = (int)m[0].size();
    std::vector<bool> is_pivot(cols, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<RatVec> basis;
    for (int c = 0; c < cols; ++c) {
        if (is_pivot[c]) continue;
        RatVec v(cols, Rat(0));
        v[c] = 1;
        for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r[i][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

bool in_span(const std::vector<RatVec>& basis, const RatVec& v) {
    if (vec_is_zero(v)) return true;
    RatMat m = basis;
    m.push_back(v);
    return rank(m) == rank(RatMat(basis));
}

bool span_contained(const std::vector<RatVec>& a, const std::vector<RatVec>& b) {
    RatMat stacked = b;
    for (auto& v : a) stacked.push_back(v);
    return rank(stacked) == rank(RatMat(b));
}

std::optional<RatVec> solve(const RatMat& m, const RatVec& b) {
    if (m.empty()) return vec_is_zero(b) ? std::optional<RatVec>(RatVec{}) : std::nullopt;
    const int rows = (int)m.size(), cols = (int)m[0].size();
    RatMat aug = m;
    for (int i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    std::vector<int> pivots = rref(aug);
    for (int p : pivots)
        if (p == cols) return std::nullopt;  // inconsistent
    RatVec x(cols, Rat(0));
    for (size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
    return x;
}

std::optional<RatVec> coordinates_in(const std::vector<RatVec>& basis, const RatVec& v) {
    if (basis.empty()) return vec_is_zero(v) ? std::optional<RatVec>(RatVec{}) : std::nullopt;
    const int n = (int)basis[0].size();
    RatMat m(n, RatVec(basis.size(), Rat(0)));
    for (size_t j = 0; j < basis.size(); ++j)
        for (int i = 0; i < n; ++i) m[i][j] = basis[j][i];
    return solve(m, v);
}

Rat dot(const RatVec& a, const RatVec& b) {
    Rat s(0);
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rat gram_dot(const RatMat& G, const RatVec& a, const RatVec& b) {
    Rat s(0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) s += a[i] * G[i][j] * b[j];
    }
    return s;
}

RatVec mat_vec(const RatMat& m, const RatVec& v) {
    RatVec out(m.size(), Rat(0));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (m[i][j] != 0 && v[j] != 0) out[i] += m[i][j] * v[j];
    return out;
}

RatVec vec_add(const RatVec& a, const RatVec& b) {
    RatVec out(a);
    for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

RatVec vec_sub(const RatVec& a, const RatVec& b) {
    RatVec out(a);
    for (size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    return out;
}

RatVec vec_scale(const Rat& c, const RatVec& a) {
    RatVec out(a);
    for (auto& x : out) x *= c;
    return out;
}

bool vec_is_zero(const RatVec& a) {
    for (auto& x : a)
        if (x != 0) return false;
    return true;
}

std::optional<Rat> rational_sqrt(const Rat& q) {
    using boost::multiprecision::cpp_int;
    if (q < 0) return std::nullopt;
    if (q == 0) return Rat(0);
    cpp_int num = numerator(q), den = denominator(q);
    cpp_int ns = sqrt(num), ds = sqrt(den);
    if (ns * ns != num || ds * ds != den) return std::nullopt;
    return Rat(ns, ds);
}

}  // namespace nilorbit
