#pragma once

// Coadjoint action, orbit radicals and dimensions, orbit charts with exact
// flows, best-found orbit distances, Case I/II classification, and the
// sampling-based asymptotic-cone test.
//
// Convention: a Functional stores the real covector lambda of xi = i*lambda,
// and (ad*(X) l)(Y) = l([Y, X]), so the radical condition ad*(X)l = 0 is
// B_l(X, .) = 0.

#include "nilorbit/lie_core.hpp"

#include <Eigen/Dense>

#include <functional>
#include <mutex>

namespace nilorbit {

struct Functional {
    AlgebraPtr parent;
    RatVec covector;

    static Functional zero(const AlgebraPtr& a) {
        return {a, RatVec((size_t)a->dim(), Rat(0))};
    }
    static Functional dual_basis(const AlgebraPtr& a, int i) {
        auto f = zero(a);
        f.covector[i] = 1;
        return f;
    }
    Rat operator()(const RatVec& x) const { return dot(covector, x); }
    std::vector<double> coords_d() const { return to_double(covector); }
};

Functional operator+(const Functional& a, const Functional& b);
Functional operator-(const Functional& a, const Functional& b);

template <class R>
    requires std::same_as<R, Rat>
Functional operator*(const R& c, const Functional& a) {
    return {a.parent, vec_scale(c, a.covector)};
}

// Norms on i g* use the gram-dual inner product G^{-1}.
struct DualMetric {
    Eigen::MatrixXd g_inv;
    explicit DualMetric(const NilpotentAlgebra& algebra);
    double norm(const Eigen::VectorXd& covector) const;
    double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    double angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
};

Eigen::VectorXd to_eigen(const RatVec& v);
Eigen::VectorXd to_eigen(const std::vector<double>& v);

// (ad*(X) l)(Y) = l([Y, X]).
Functional coadjoint_action(const AlgebraElement& X, const Functional& l);

// B_l[i][j] = l([e_i, e_j]).
RatMat skew_form(const Functional& l);

// Exact null space of B_l.
std::vector<RatVec> radical(const Functional& l);

int orbit_dimension(const Functional& l);

// Ad*(exp t_1 V_1) ... Ad*(exp t_k V_k) l, exact (ad* is nilpotent).
Functional coadjoint_flow(const std::vector<std::pair<AlgebraElement, Rat>>& steps,
                          const Functional& l);

class OrbitChart {
  public:
    OrbitChart(Functional base, std::vector<RatVec> radical_basis,
               std::vector<RatVec> flow_basis);

    static OrbitChart build(const Functional& l);

    const Functional& base() const { return base_; }
    const std::vector<RatVec>& radical_basis() const { return radical_basis_; }
    const std::vector<RatVec>& flow_basis() const { return flow_basis_; }
    int param_dim() const { return (int)flow_basis_.size(); }

    // Ad*(exp t_1 V_1 ... exp t_d V_d) l for rational parameters, exact.
    Functional point(const RatVec& params) const;
    Eigen::VectorXd point_d(const std::vector<double>& params) const;

    // The orbit map as exact polynomials in the chart parameters.
    const std::vector<Poly<Rat>>& orbit_polynomials() const;
    bool is_affine() const;

    struct Sample {
        std::vector<double> params;
        Eigen::VectorXd point;
    };
    // Cached samples; append-only under an internal mutex.
    std::vector<Sample> samples() const;
    void cache(std::vector<Sample> more) const;

  private:
    Functional base_;
    std::vector<RatVec> radical_basis_;
    std::vector<RatVec> flow_basis_;
    mutable std::vector<Poly<Rat>> orbit_polys_;
    mutable std::vector<Sample> samples_;
    mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
};

// Grid sampling of the chart; results are cached into the chart.
std::vector<Functional> orbit_sample(const OrbitChart& chart,
                                     const std::vector<RatVec>& grid);

struct DistanceResult {
    double value = 0.0;
    bool exact = false;          // closed form (affine orbit) used
    bool warning = false;        // optimizer stopped without progress
    std::vector<double> best_params;
};

// Best-found min over the parameter box of ||eta - chart(t)||_dual; exact
// (with exact=true) when the orbit map is affine in its parameters.
DistanceResult distance_to_orbit(const Eigen::VectorXd& eta, const OrbitChart& chart,
                                 double box_half_width);

enum class AcVerdict { In, Out, Inconclusive };

// Sampler contract: given a target radius R, produce points of the orbit
// family reaching norms >= R when the family is unbounded in that regime.
using FamilySampler = std::function<std::vector<Eigen::VectorXd>(double)>;

struct AcResult {
    AcVerdict verdict = AcVerdict::Inconclusive;
    double best_angle = 0.0;     // best angle seen beyond the largest radius
    std::string detail;
};

AcResult ac_membership(const Eigen::VectorXd& xi, const FamilySampler& sampler,
                       const std::vector<double>& radii, double aperture,
                       const DualMetric& metric);

FamilySampler chart_family_sampler(const std::vector<std::shared_ptr<OrbitChart>>& charts,
                                   const DualMetric& metric, int grid_per_axis = 9);

enum class CaseTag { CaseI, CaseII };

struct CaseLabel {
    CaseTag tag = CaseTag::CaseI;
    // conditions (i)-(iii) for Case I and Case II, in order
    std::array<bool, 3> case1{};
    std::array<bool, 3> case2{};
    int dim_radical = 0;
    int dim_radical_restricted = 0;
};

// g0 must be a codimension-1 subalgebra (validated). Evaluates conditions
// (i)-(iii) of both cases exactly and asserts the dichotomy.
CaseLabel classify_case(const Functional& l, const std::vector<RatVec>& g0_basis);

}  // namespace nilorbit
