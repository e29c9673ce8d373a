#pragma once

// Concrete realization of the induced representation attached to (l, m) on
// L^2(R^k), k = (orbit dimension)/2, via a weak Malcev chain through the
// polarization. The chain m = h_0 < h_1 < ... < h_k = g has each member an
// ideal in the next, so the cross-section coordinates of a group element are
// read off linearly and the factorization gamma(s) g = m(s,g) gamma(s'(s,g))
// is solved exactly by BCH back-substitution, highest coordinate first.

#include "nilorbit/polarization.hpp"
#include "nilorbit/quadrature.hpp"

#include <variant>

namespace nilorbit {

struct CertificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// vectors in the realization space

struct GridVector {
    int k = 0;
    double box = 6.0;   // samples live on [-box, box]^k
    double step = 6.0 / 256;
    std::vector<Cplx> values;  // row-major, axis 0 fastest

    int axis_count() const { return (int)std::lround(2 * box / step) + 1; }
};

struct GaussianVector {
    int k = 0;
    std::vector<double> center;  // c
    std::vector<double> freq;    // modulation e^{2 pi i f.s}
    double width = 1.0;          // exp(-pi ||s-c||^2 / width^2)
    Cplx amp{1.0, 0.0};

    static GaussianVector unit(int k);  // 2^{k/4} exp(-pi ||s||^2)
};

// Tensor product of named 1-D profiles; used by the lower-bound vectors.
struct Profile1D {
    enum Kind { PlateauBump, Mollifier, ModulatedPlateau } kind = PlateauBump;
    double z = 0.0;      // modulation frequency for ModulatedPlateau
    double width = 1.0;  // mollifier width
    double support() const;
    Cplx eval(double t) const;
};

struct ProfileVector {
    std::vector<Profile1D> axes;
    int k() const { return (int)axes.size(); }
};

using RepVector = std::variant<GridVector, GaussianVector, ProfileVector>;

double rep_norm(const RepVector& v);
Cplx rep_inner(const RepVector& a, const RepVector& b);  // <a, b>, conjugate-linear in b
Cplx rep_eval(const RepVector& v, const std::vector<double>& s);
GridVector to_grid(const RepVector& v, double box, double step);

// 1-D plateau cutoff: 1 on |t| <= 1/4, smooth shoulders, ||chi||_{L2} = 1.
double chi_plateau(double t);
double chi_plateau_support();
// 1-D mollifier of width w: (1/w) psi(t/w) with psi >= 0, ||psi||_{L1} = 1.
double mollifier(double t, double width);

// ---------------------------------------------------------------------------

class InducedRep {
  public:
    // General entry point: chain built by normalizer extensions of m.
    static std::shared_ptr<InducedRep> realize(const Functional& l,
                                               const Polarization& pol);
    // Recursion-compatible entry point with an explicit chain.
    static std::shared_ptr<InducedRep> realize_with_chain(
        const Functional& l, std::vector<RatVec> m_basis, std::vector<RatVec> cross);

    const Functional& l() const { return l_; }
    const AlgebraPtr& algebra() const { return l_.parent; }
    const std::vector<RatVec>& m_basis() const { return m_basis_; }
    const std::vector<RatVec>& cross_section() const { return cross_; }
    int k() const { return (int)cross_.size(); }

    // gamma(s) g = exp(mu) gamma(s'), exact over the rationals.
    struct FactorizationR {
        RatVec mu;
        RatVec s_new;
    };
    FactorizationR factor(const RatVec& s, const RatVec& group_log) const;

    struct FactorizationD {
        std::vector<double> mu;
        std::vector<double> s_new;
        double phase;  // lambda(mu)
    };
    FactorizationD factor_d(const std::vector<double>& s,
                            const std::vector<double>& group_log) const;

    // (sigma(exp X) f)(s) = e^{2 pi i phase(s)} f(s'(s)) as polynomials in s
    // for a fixed numeric X: phase has the x-coefficients of lambda(mu).
    struct SymbolicAction {
        std::vector<Poly<double>> s_new;  // k polys in k vars
        Poly<double> phase;               // in k vars
        bool shift_only = false;          // s'(s) = s + b
        bool affine = false;              // s'(s) = A s + b
        int phase_degree = 0;
    };
    SymbolicAction symbolic_action(const std::vector<double>& group_log) const;

    GridVector apply(const std::vector<double>& group_log, const RepVector& f,
                     double box = 6.0, double step = 6.0 / 256) const;

  private:
    InducedRep() = default;
    void build_chain_functionals();

    Functional l_{nullptr, {}};
    std::vector<RatVec> m_basis_;
    std::vector<RatVec> cross_;               // W_1..W_k
    std::vector<std::vector<RatVec>> chain_;  // h_0 = m, ..., h_k = g
    std::vector<RatVec> coord_functionals_;   // ell_i reading the W_i coordinate
    // joint symbolic factorization in (s_1..s_k, x_1..x_n), built lazily
    mutable std::unique_ptr<std::vector<Poly<Rat>>> joint_mu_, joint_snew_;
    mutable std::mutex joint_mu_mutex_;
    const std::vector<Poly<Rat>>& joint_mu() const;
    const std::vector<Poly<Rat>>& joint_snew() const;
};

// <sigma(exp X) u, v>; closed-form complex Gaussian integral when both
// vectors are Gaussian and the action is polynomial of phase degree <= 2
// with an affine coordinate change, quadrature otherwise.
Cplx matrix_coefficient(const InducedRep& rep, const RepVector& u, const RepVector& v,
                        const std::vector<double>& group_log);

// Coefficient in the beta chart of a distinguished direction X1 (unit,
// orthogonal): M(V) = <sigma(exp(V0) exp(tX1)) u, v> with V = V0 + t X1.
Cplx matrix_coefficient_beta(const InducedRep& rep, const RepVector& u,
                             const RepVector& v, const RatVec& X1,
                             const std::vector<double>& V);

struct C1Estimate {
    double sup_value = 0.0;
    double sup_gradient = 0.0;
    double c1() const { return std::max(sup_value, sup_gradient); }
};

using CoeffFn = std::function<Cplx(const std::vector<double>&)>;

C1Estimate c1_norm_estimate(const CoeffFn& coeff, const NilpotentAlgebra& algebra,
                            double ball_radius, int samples = 200,
                            double fd_step = 1e-4);

// ---------------------------------------------------------------------------
// the paper-style inductive test vectors

struct LowerBoundVectors {
    std::shared_ptr<InducedRep> rep;
    RepVector u;  // tensor of modulated plateau cutoffs; ||u|| = 1
    RepVector v;  // tensor of mollifiers (unnormalized; norm recorded)
    double u_norm = 1.0;
    double v_norm = 1.0;
    double mollifier_width = 0.0;   // top-level width, 0 when no Case II step
    double certified_sup_gap = 0.0;
    double certification_radius = 0.25;
    RatVec top_kirillov_X;          // empty when the top step is not Case II

    // recursion downwards (Case II keeps the sub-level data for the limit
    // coefficient; Case I re-labels the same realization)
    std::shared_ptr<LowerBoundVectors> sub;
    std::vector<RatVec> sub_basis;  // g0 basis inside g (Case II)
    double top_z = 0.0;             // l(X) modulation at the top Case II step

    // m(X) = <sigma(exp X) u, v> in exponential coordinates
    Cplx coefficient(const std::vector<double>& X) const;
    // beta-chart coefficient at the top Case II step (falls back to the
    // exponential chart when there is none)
    Cplx coefficient_beta(const std::vector<double>& V) const;
    // delta-limit coefficient in the beta chart (certification reference)
    Cplx coefficient_limit(const std::vector<double>& V) const;

    // Recursive closed-form evaluators (the induction structure makes the
    // coefficient a tower of one-dimensional mollifier integrals over pure
    // phases); exact up to fixed-order Gauss rules, orders of magnitude
    // faster than the generic quadrature path that cross-checks them.
    Cplx coefficient_fast(const std::vector<double>& X) const;
    Cplx beta_fast(const std::vector<double>& V) const;

    // caches for the fast evaluators
    enum class Kind { Base, Lifted, Induced };
    Kind kind = Kind::Base;
    std::vector<double> lambda_d;
    std::vector<std::vector<double>> gram_d;
    std::vector<std::vector<double>> proj_d;      // Lifted: quotient projection
    std::vector<std::vector<double>> subcoord_d;  // Induced: g0 coordinates
    std::vector<std::vector<std::vector<double>>> adx_apply;  // (ad X)^p, p >= 1
    std::vector<double> x_top_d;
    std::vector<Poly<double>> kappa_top;          // exp -> beta chart transport
};

// Recursive construction: abelian base u = v = 1; a central direction killed
// by l quotients out (vectors carry over); otherwise the Kirillov step
// induces from the codimension-1 ideal, with the mollifier width halved until
// the sup-gap certificate reaches 2^{-3 dim g}.
std::shared_ptr<LowerBoundVectors> construct_lower_bound_vectors(const Functional& l,
                                                                 int max_halvings = 40);

}  // namespace nilorbit
