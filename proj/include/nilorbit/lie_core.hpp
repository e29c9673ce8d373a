#pragma once

// Exact structure-constant Lie algebra layer: brackets, validation, lower
// central series, center, Kirillov decomposition, central quotients, the BCH
// group law in exponential coordinates, and chart-transition maps.
//
// Scalars are exact rationals throughout; the scalar-generic templates let
// the analytic layer run the same formulas over double / complex / polynomial
// coefficients.

#include "nilorbit/poly.hpp"
#include "nilorbit/ratlin.hpp"
#include "nilorbit/rational.hpp"

#include <complex>
#include <concepts>
#include <map>
#include <memory>
#include <string>

namespace nilorbit {

struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnsupportedClassError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// BCH coefficients are precomputed through this order; algebras of higher
// nilpotency class are rejected rather than approximated.
constexpr int kMaxBchOrder = 6;

template <class S>
struct ScalarOps {
    static S from_rat(const Rat& c) { return S(c); }
    static S scale(const S& x, const Rat& c) { return from_rat(c) * x; }
};
template <>
struct ScalarOps<Rat> {
    static Rat from_rat(const Rat& c) { return c; }
    static Rat scale(const Rat& x, const Rat& c) { return c * x; }
};
template <>
struct ScalarOps<double> {
    static double from_rat(const Rat& c) { return to_double(c); }
    static double scale(double x, const Rat& c) { return to_double(c) * x; }
};
template <>
struct ScalarOps<std::complex<double>> {
    static std::complex<double> from_rat(const Rat& c) { return {to_double(c), 0.0}; }
    static std::complex<double> scale(const std::complex<double>& x, const Rat& c) {
        return to_double(c) * x;
    }
};
template <>
struct ScalarOps<Poly<Rat>> {
    static Poly<Rat> scale(const Poly<Rat>& x, const Rat& c) { return x.scaled(c); }
};
template <>
struct ScalarOps<Poly<double>> {
    static Poly<double> scale(const Poly<double>& x, const Rat& c) {
        return x.scaled(to_double(c));
    }
};

// One nonzero structure constant [e_i, e_j] = sum_k c_ijk e_k, stored for i < j.
struct BracketEntry {
    int i, j, k;
    Rat c;
};

struct ValidationReport {
    bool antisymmetry_ok = false;
    bool jacobi_ok = false;
    bool nilpotent_ok = false;
    bool gram_ok = false;
    int nilpotency_class = -1;
    std::vector<std::string> failures;
    bool valid() const { return antisymmetry_ok && jacobi_ok && nilpotent_ok && gram_ok; }
};

class NilpotentAlgebra;
using AlgebraPtr = std::shared_ptr<const NilpotentAlgebra>;

class NilpotentAlgebra {
  public:
    // Half-table constructor: entries give [e_i, e_j] for i < j (1-based i, j
    // in the file layer, 0-based here); antisymmetry is implied.
    static AlgebraPtr create(int dim, const std::vector<BracketEntry>& entries,
                             RatMat gram = {}, std::string name = "");
    // Full-table constructor; use validate() to check antisymmetry etc.
    static AlgebraPtr create_full(int dim, std::vector<Rat> full_table, RatMat gram = {},
                                  std::string name = "");

    int dim() const { return n_; }
    const std::string& name() const { return name_; }
    const RatMat& gram() const { return gram_; }
    const Rat& c(int i, int j, int k) const { return table_[(i * n_ + j) * n_ + k]; }
    const std::vector<BracketEntry>& nonzero_brackets() const { return entries_; }
    // Largest k with g^k != 0; -1 if the table is not nilpotent.
    int nilpotency_class() const { return class_; }

    template <class S>
    std::vector<S> bracket_t(const std::vector<S>& u, const std::vector<S>& v,
                             const S& zero) const {
        std::vector<S> out((size_t)n_, zero);
        for (const auto& e : entries_) {
            S prod = u[e.i] * v[e.j] - u[e.j] * v[e.i];
            out[e.k] += ScalarOps<S>::scale(prod, e.c);
        }
        return out;
    }

    // log(exp a * exp b) by the Dynkin series truncated at the nilpotency
    // class (exact for nilpotent algebras).
    template <class S>
    std::vector<S> bch_t(const std::vector<S>& a, const std::vector<S>& b,
                         const S& zero) const;

    // Matrix of ad(v): column j holds the coordinates of [v, e_j].
    RatMat ad_matrix(const RatVec& v) const;

    Rat gram_norm2(const RatVec& v) const { return gram_dot(gram_, v, v); }
    Rat gram_pair(const RatVec& a, const RatVec& b) const { return gram_dot(gram_, a, b); }

  private:
    friend ValidationReport validate(const NilpotentAlgebra&);
    NilpotentAlgebra() = default;
    void finalize();

    int n_ = 0;
    std::string name_;
    std::vector<Rat> table_;  // full antisymmetric table, n^3
    std::vector<BracketEntry> entries_;
    RatMat gram_;
    int class_ = -1;
};

struct AlgebraElement {
    AlgebraPtr parent;
    RatVec coords;

    static AlgebraElement zero(const AlgebraPtr& a) {
        return {a, RatVec((size_t)a->dim(), Rat(0))};
    }
    static AlgebraElement basis(const AlgebraPtr& a, int i) {
        auto e = zero(a);
        e.coords[i] = 1;
        return e;
    }
    std::vector<double> coords_d() const { return to_double(coords); }
};

void require_same_parent(const AlgebraElement& a, const AlgebraElement& b);

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);

// Constrained template: keeps Eigen expressions from ever being probed for a
// conversion to Rat (boost's traits hard-error on Eigen types).
template <class R>
    requires std::same_as<R, Rat>
AlgebraElement operator*(const R& c, const AlgebraElement& a) {
    return {a.parent, vec_scale(c, a.coords)};
}

AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement bch_multiply(const AlgebraElement& a, const AlgebraElement& b);

ValidationReport validate(const NilpotentAlgebra& algebra);
inline ValidationReport validate(const AlgebraPtr& a) { return validate(*a); }

// g = g^1 >= g^2 = [g,g] >= ... >= {0}; the trailing empty basis is included.
std::vector<std::vector<RatVec>> lower_central_series(const NilpotentAlgebra& algebra);

std::vector<RatVec> center(const NilpotentAlgebra& algebra);

struct KirillovDecomposition {
    AlgebraElement Z, Y, X;
    std::vector<AlgebraElement> w_basis;
    std::vector<AlgebraElement> g0_basis;
    bool x_unit_exact = false;  // ||X||_gram == 1 exactly over Q
};

// Requires a non-abelian algebra with one-dimensional center. Z spans the
// center, [X,Y] = Z exactly, g0 = centralizer(Y) = span(Z,Y,w), and X is
// gram-orthogonal to g0 (normalized exactly whenever ||X||^2 is a rational
// square; x_unit_exact records this).
KirillovDecomposition kirillov_decomposition(const AlgebraPtr& algebra);

struct CentralQuotient {
    AlgebraPtr quotient;            // realized on the gram-orthogonal complement W of RZ
    std::vector<RatVec> w_basis;    // basis of W in parent coordinates
    RatMat projection;              // (n-1) x n: parent coords -> W coords (gram-orthogonal)
    RatMat section;                 // n x (n-1): W coords -> parent coords
};

CentralQuotient quotient_by_central(const AlgebraPtr& algebra, const AlgebraElement& Z);

// Subalgebra spanned by the given vectors, with restricted gram. Throws
// StructuralError if the span is not closed under the bracket.
struct SubalgebraRealization {
    AlgebraPtr sub;
    std::vector<RatVec> basis;  // rows: basis of the subspace in parent coordinates
};
SubalgebraRealization subalgebra_from_basis(const AlgebraPtr& algebra,
                                            const std::vector<RatVec>& vectors);

struct ChartTransition {
    RatVec X0;                       // unit base direction
    std::vector<Poly<Rat>> kappa;    // beta_{X0}^{-1} o exp as exact polynomials
    double ball_radius = 1.0;
    std::map<int, double> cn_estimates;  // N -> measured sup_{|a|<=N} ||d^a kappa|| on the ball
};

// Requires <X0, X0>_gram == 1 exactly. kappa solves exp(X) = exp(t X0) exp(v)
// with v gram-orthogonal to X0, by BCH back-substitution.
ChartTransition chart_transition(const AlgebraPtr& algebra, const RatVec& X0,
                                 double ball_radius = 1.0, int max_order = 3);

// Measured sup of the C^N data of kappa on a supplied point set (shared-point
// comparisons across algebras use this).
double cn_measure(const NilpotentAlgebra& algebra, const std::vector<Poly<Rat>>& kappa,
                  const std::vector<std::vector<double>>& points, int order);

Poly<double> poly_to_double(const Poly<Rat>& p);

// Deterministic sample of the closed gram-ball of radius R (Halton points,
// axis points, and the origin).
std::vector<std::vector<double>> ball_sample(const NilpotentAlgebra& algebra, double radius,
                                             int count);

namespace detail {
struct DynkinTerm {
    std::vector<uint8_t> word;  // 0 = first argument, 1 = second
    Rat coeff;
};
const std::vector<DynkinTerm>& dynkin_terms(int max_order);
}  // namespace detail

template <class S>
std::vector<S> NilpotentAlgebra::bch_t(const std::vector<S>& a, const std::vector<S>& b,
                                       const S& zero) const {
    if (class_ < 0 || class_ > kMaxBchOrder)
        throw UnsupportedClassError("bch: nilpotency class " + std::to_string(class_) +
                                    " outside supported range 1.." +
                                    std::to_string(kMaxBchOrder));
    std::vector<S> acc((size_t)n_, zero);
    for (const auto& term : detail::dynkin_terms(class_)) {
        if ((int)term.word.size() > class_) continue;
        // Right-nested bracket of the word letters.
        const std::vector<S>* cur = term.word.back() ? &b : &a;
        std::vector<S> tmp;
        for (int idx = (int)term.word.size() - 2; idx >= 0; --idx) {
            tmp = bracket_t(term.word[idx] ? b : a, *cur, zero);
            cur = &tmp;
        }
        for (int k = 0; k < n_; ++k) acc[k] += ScalarOps<S>::scale((*cur)[k], term.coeff);
    }
    return acc;
}

}  // namespace nilorbit
