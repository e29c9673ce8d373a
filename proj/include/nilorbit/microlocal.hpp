#pragma once

// Windowed Fourier analysis of matrix coefficients: the lower-bound check
// near orbits, rapid-decay verification away from them, wave-front direction
// scans, and the comparison harness against asymptotic cones of orbit
// families.
//
// Windows are tensor products of a fixed 1-D bump, so every central
// coordinate axis of the algebra splits off as a cheap one-dimensional
// oscillatory integral; the remaining axes go through adaptive tensor
// Gauss-Legendre quadrature.

#include "nilorbit/representation.hpp"

namespace nilorbit {

// ---------------------------------------------------------------------------
// windows

struct Window {
    int dim = 0;
    double radius = 1.0;            // stated gram-ball radius containing the support
    double scale = 0.0;             // rescale parameter t (0 = base window)
    std::vector<double> axis_half;  // per-axis support half-width
    double amp = 1.0;
    int smoothness_order = 4;
    std::map<int, double> sobolev_cache;  // M -> ||phi||_{W^{M,1}}

    double eval(const std::vector<double>& X) const;
    double integral() const;          // L^1 mass (phi >= 0)
    double support_radius() const;    // radius of the smallest centered ball
    double sobolev(int M) const;
};

Window make_window(const NilpotentAlgebra& algebra, double radius,
                   int smoothness_order = 4);

// phi_t(X) = <t>^{n/2} phi(<t>^{1/2} X); preserves the L^1 mass exactly.
Window window_rescale(const Window& w, double t);

// 1-D bump data used by the window profile (exposed for oracle tests).
double window_bump(double x);                  // exp(-1/(1-x^2)) on (-1,1)
double window_bump_derivative_l1(int order);   // ||b^{(j)}||_{L^1(-1,1)}

inline double japanese_bracket(double t) { return std::sqrt(1.0 + t * t); }

// ---------------------------------------------------------------------------
// coefficients

struct Coefficient {
    CoeffFn eval;                    // m(X) in exponential coordinates
    std::vector<char> central_axis;  // axes along which m is a pure character
    std::vector<double> char_freq;   // lambda(e_i) on central axes
    double norm_product = 1.0;       // ||u|| ||v||
};

Coefficient make_coefficient(const std::shared_ptr<InducedRep>& rep, RepVector u,
                             RepVector v);
// kappa-transported coefficient m(X) = M(kappa(X)) of the lower-bound pair;
// the beta-chart evaluation mirrors the inductive estimates.
Coefficient make_coefficient(const std::shared_ptr<LowerBoundVectors>& lbv);
Coefficient constant_coefficient(const AlgebraPtr& algebra);

struct WindowedValue {
    Cplx value{0.0, 0.0};
    bool reliable = true;  // every factor converged above its absolute floor
};

// integral of m(X) phi(X) e^{-2 pi i <eta, X>} dX
WindowedValue windowed_fourier(const Coefficient& coeff, const Window& phi,
                               const Eigen::VectorXd& eta,
                               const QuadratureOptions& opt = {});

// ---------------------------------------------------------------------------
// lower bound near the orbit

struct LowerBoundConstants {
    double c_tilde = 2 * M_PI;  // measured C^1 growth constant
    double c_n2 = 1.0;          // measured chart constant C_{n,2}
    double eps = 0.25;
    double delta = 0.0;
    int dim = 0;
};

// Measured sup of the chart-transition C^2 data over exact-unit directions.
double measure_chart_c2(const AlgebraPtr& algebra, double ball_radius = 1.0);

LowerBoundConstants lower_bound_constants(const LowerBoundVectors& lbv,
                                          double chart_c2);

struct LowerBoundVerdict {
    bool admissible = false;
    std::string rejection;
    bool pass = false;
    double re_value = 0.0;
    double threshold = 0.0;
    double margin = 0.0;
    LowerBoundConstants constants;
};

LowerBoundVerdict verify_lower_bound(const std::shared_ptr<LowerBoundVectors>& lbv,
                                     const Eigen::VectorXd& eta, const Window& phi,
                                     double chart_c2,
                                     double quadrature_tolerance = 1e-8);

// ---------------------------------------------------------------------------
// decay reports

struct DecayOptions {
    double aperture = 0.1;       // cone half-angle shared with the AC test
    double eps_ball = 0.1;       // the eps of d(B_{eps||eta||}(eta), O)
    double censor_floor = 1e-32; // relative to the window mass
    double r2_gate = 0.98;
    int min_scales = 6;
    bool witnesses = true;       // orbit-adapted witness probes
    QuadratureOptions quad;
};

struct DecayReport {
    enum class Class { Rapid, NonDecay, Inconclusive };

    Eigen::VectorXd direction;
    std::vector<double> scales;
    std::vector<double> magnitudes;       // max of the streams, ||u||||v||-normalized
    std::vector<double> gauss_stream;     // fixed window, default vectors
    std::vector<double> witness_stream;   // scaled windows at orbit-adapted probes
    std::vector<double> witness_angle;    // probe angle to the ray (radians)
    std::vector<char> censored;           // magnitude unreliable or below floor
    double fitted_slope = 0.0;            // -d log|F| / d log tau, least squares
    double r2 = 1.0;
    int uncensored = 0;
    Class classification = Class::Inconclusive;
    bool pass = false;
    std::string detail;
    double noise_floor = 0.0;
    bool distance_exact = false;
    double distance_growth_first = 0.0;   // d(B(tau eta), O)/tau at the first scale
    double distance_growth_last = 0.0;    // and at the last
    std::string window_id;
};

DecayReport verify_decay_bound(const Functional& l, const Eigen::VectorXd& eta_ray,
                               const OrbitChart& chart, const Window& phi, int N,
                               const std::vector<double>& scales,
                               const DecayOptions& opt = {});

// ---------------------------------------------------------------------------
// wave-front scans and the comparison harness

struct RepSummand {
    Functional l;
    int multiplicity = 1;
};

struct DirectionResult {
    Eigen::VectorXd direction;
    DecayReport::Class cls = DecayReport::Class::Inconclusive;
    bool in_wf_estimate = false;
    bool inconclusive = false;
    double worst_slope = 0.0;    // smallest fitted slope across summands
    AcVerdict ac = AcVerdict::Inconclusive;
};

struct WfScan {
    std::vector<DirectionResult> directions;
    int n_threshold = 0;
    // zero is always part of the wave-front estimate
};

WfScan wf_cone_estimate(const std::vector<RepSummand>& reps,
                        const std::vector<Eigen::VectorXd>& direction_grid,
                        const Window& phi, int n_threshold,
                        const std::vector<double>& scales,
                        const DecayOptions& opt = {});

struct ComparisonReport {
    std::vector<DirectionResult> directions;  // ac field filled in
    int agree = 0;
    int disagree = 0;
    int inconclusive = 0;
    double agreement_rate = 1.0;              // over conclusively classified
    std::vector<int> disagreement_indices;
};

ComparisonReport compare_wf_ac(const std::vector<RepSummand>& reps,
                               const std::vector<std::shared_ptr<OrbitChart>>& charts,
                               const std::vector<Eigen::VectorXd>& direction_grid,
                               const Window& phi, int n_threshold,
                               const std::vector<double>& scales,
                               const std::vector<double>& ac_radii,
                               const DecayOptions& opt = {});

std::vector<double> dyadic_scales(double t0, double t1, int count);

}  // namespace nilorbit
