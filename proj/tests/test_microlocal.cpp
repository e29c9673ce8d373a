#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nilorbit/fixtures.hpp"
#include "nilorbit/microlocal.hpp"
#include "nilorbit/util.hpp"

#include <random>

using namespace nilorbit;
namespace fx = nilorbit::fixtures;

namespace {

Eigen::VectorXd evec(std::initializer_list<double> xs) {
    Eigen::VectorXd v((Eigen::Index)xs.size());
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

// direct tensor quadrature of phi against a plane wave (oracle path)
Cplx direct_window_transform(const Window& phi, const Eigen::VectorXd& freq) {
    std::vector<double> widths = phi.axis_half;
    auto res = integrate_box(
        [&](const std::vector<double>& X) {
            double ph = 0.0;
            for (int i = 0; i < phi.dim; ++i) ph -= 2 * M_PI * freq[i] * X[i];
            return phi.eval(X) * Cplx{std::cos(ph), std::sin(ph)};
        },
        widths);
    return res.value;
}

}  // namespace

TEST_CASE("window construction basics") {
    auto g = fx::h3();
    auto w = make_window(*g, 1.0, 4);
    CHECK(w.integral() > 0.0);
    CHECK(w.support_radius() == doctest::Approx(1.0));
    // support box fits in the unit ball
    double corner = 0.0;
    for (double h : w.axis_half) corner += h * h;
    CHECK(std::sqrt(corner) <= 1.0 + 1e-12);
    // positivity on samples
    for (uint64_t i = 0; i < 20; ++i) {
        auto p = halton_point(i, 3);
        std::vector<double> X(3);
        for (int d = 0; d < 3; ++d) X[d] = (2 * p[d] - 1) * w.axis_half[d];
        CHECK(w.eval(X) >= 0.0);
    }
    // sobolev cache is monotone in the order
    for (int M = 0; M < 4; ++M) CHECK(w.sobolev(M) <= w.sobolev(M + 1) + 1e-12);
}

TEST_CASE("window radius scaling: change-of-variables oracle") {
    auto g = fx::abelian(2);
    auto w1 = make_window(*g, 1.0, 2);
    auto wr = make_window(*g, 2.5, 2);
    // integral scales like r^n (formula); oracle: direct quadrature
    CHECK(wr.integral() == doctest::Approx(w1.integral() * std::pow(2.5, 2)));
    auto direct = direct_window_transform(wr, evec({0, 0}));
    CHECK(direct.real() == doctest::Approx(wr.integral()).epsilon(1e-10));
}

TEST_CASE("window rescale: the scaled-window laws") {
    auto g = fx::h3();
    auto base = make_window(*g, 1.0, 4);

    // t = 0 is the identity
    auto w0 = window_rescale(base, 0.0);
    CHECK(w0.integral() == doctest::Approx(base.integral()));
    CHECK(w0.axis_half[0] == doctest::Approx(base.axis_half[0]));

    // exact L1 preservation, checked against the quadrature oracle at t = 100
    auto w100 = window_rescale(base, 100.0);
    auto direct = direct_window_transform(w100, evec({0, 0, 0}));
    CHECK(std::abs(direct.real() - base.integral()) < 1e-10);

    // support shrinks by <t>^{-1/2}
    double jb = japanese_bracket(100.0);
    CHECK(w100.support_radius() ==
          doctest::Approx(base.support_radius() / std::sqrt(jb)));

    // Sobolev growth bounded by <t>^{N/2}
    for (double t : {1.0, 4.0, 16.0, 256.0}) {
        auto wt = window_rescale(base, t);
        for (int N = 0; N <= 4; ++N) {
            double bound = std::pow(japanese_bracket(t), N / 2.0) * base.sobolev(N);
            CHECK(wt.sobolev(N) <= bound * (1 + 1e-12));
        }
    }
}

TEST_CASE("windowed fourier: trivial representation decays superpolynomially") {
    // for every N <= 8 the measured constant |F| tau^N must not grow with tau
    auto g = fx::h3();
    auto w = make_window(*g, 1.0, 4);
    auto coeff = constant_coefficient(g);
    Eigen::VectorXd xi = evec({0, 0, 1});
    std::vector<double> taus{8, 16, 32, 64};
    std::vector<double> mags;
    for (double tau : taus)
        mags.push_back(std::abs(windowed_fourier(coeff, w, tau * xi).value));
    for (int N = 1; N <= 8; ++N)
        for (size_t i = 1; i < taus.size(); ++i)
            CHECK(mags[i] * std::pow(taus[i], N) <=
                  mags[0] * std::pow(taus[0], N) * 1.01 + 1e-30);
}

TEST_CASE("windowed fourier: abelian phase identity and shift theorem") {
    auto g = fx::abelian(2);
    Functional l{g, {Rat(1), Rat(-2)}};
    auto rep = InducedRep::realize(l, vergne_polarization(l));
    auto coeff = make_coefficient(rep, ProfileVector{}, ProfileVector{});
    auto w = make_window(*g, 1.0, 2);

    // eta = lambda: the phase cancels and the transform equals the mass
    auto at_lambda = windowed_fourier(coeff, w, evec({1, -2}));
    CHECK(std::abs(at_lambda.value - Cplx{w.integral(), 0.0}) < 1e-12);

    // eta != lambda: F(phi)(eta - lambda), oracle = direct quadrature
    Eigen::VectorXd eta = evec({1.7, -0.9});
    auto shifted = windowed_fourier(coeff, w, eta);
    auto oracle = direct_window_transform(w, evec({0.7, 1.1}));
    CHECK(std::abs(shifted.value - oracle) < 1e-9);
}

TEST_CASE("windowed fourier: conjugate symmetry") {
    auto g = fx::h3();
    Functional l{g, {Rat(0), Rat(0), Rat(1)}};
    auto rep = InducedRep::realize(l, vergne_polarization(l));
    RepVector u = GaussianVector::unit(1);
    auto coeff = make_coefficient(rep, u, u);

    Coefficient conj_coeff = coeff;
    conj_coeff.eval = [inner = coeff.eval](const std::vector<double>& X) {
        return std::conj(inner(X));
    };
    for (auto& f : conj_coeff.char_freq) f = -f;

    auto w = make_window(*g, 1.0, 2);
    Eigen::VectorXd eta = evec({0.4, -0.2, 0.9});
    auto lhs = windowed_fourier(coeff, w, Eigen::VectorXd(-eta));
    auto rhs = windowed_fourier(conj_coeff, w, eta);
    CHECK(std::abs(lhs.value - std::conj(rhs.value)) < 1e-10);
}

TEST_CASE("windowed fourier: linearity in the vectors") {
    auto g = fx::h3();
    Functional l{g, {Rat(0), Rat(0), Rat(1)}};
    auto rep = InducedRep::realize(l, vergne_polarization(l));
    GaussianVector u1 = GaussianVector::unit(1);
    GaussianVector u2 = GaussianVector::unit(1);
    u2.center = {0.5};
    RepVector v = GaussianVector::unit(1);

    // u1 + u2 on a grid
    auto g1 = to_grid(RepVector{u1}, 6.0, 6.0 / 256);
    auto g2 = to_grid(RepVector{u2}, 6.0, 6.0 / 256);
    GridVector sum = g1;
    for (size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += g2.values[i];

    auto w = make_window(*g, 0.8, 2);
    Eigen::VectorXd eta = evec({0.3, 0.1, 1.2});
    auto c_sum = make_coefficient(rep, RepVector{sum}, v);
    auto c_1 = make_coefficient(rep, RepVector{g1}, v);
    auto c_2 = make_coefficient(rep, RepVector{g2}, v);
    auto f_sum = windowed_fourier(c_sum, w, eta);
    auto f_1 = windowed_fourier(c_1, w, eta);
    auto f_2 = windowed_fourier(c_2, w, eta);
    CHECK(std::abs(f_sum.value - f_1.value - f_2.value) < 1e-9);

    // Cauchy-Schwarz aggregation over random finite multiplicities
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        int m = 2 + (int)(rng() % 5);
        std::vector<double> nu(m), nv(m);
        double sum_prod = 0, sum_u2 = 0, sum_v2 = 0;
        for (int i = 0; i < m; ++i) {
            nu[i] = std::abs(dist(rng)) + 0.1;
            nv[i] = std::abs(dist(rng)) + 0.1;
            sum_prod += nu[i] * nv[i];
            sum_u2 += nu[i] * nu[i];
            sum_v2 += nv[i] * nv[i];
        }
        CHECK(sum_prod <= std::sqrt(sum_u2) * std::sqrt(sum_v2) + 1e-12);
    }
}

TEST_CASE("sobolev reflection: measured decay constants track the window norms") {
    auto g = fx::h3();
    const int n = 3, N = 5;
    auto base = make_window(*g, 1.0, N + n);
    auto coeff = constant_coefficient(g);
    Eigen::VectorXd xi = evec({0.3, 0.5, 0.8});
    xi /= xi.norm();

    auto measured_c = [&](const Window& w) {
        double best = 0.0;
        for (double tau : {8.0, 16.0, 32.0}) {
            double mag = std::abs(windowed_fourier(coeff, w, tau * xi).value);
            best = std::max(best, mag * std::pow(tau, N));
        }
        return best;
    };
    double rmin = 1e300, rmax = 0.0;
    for (double t : {1.0, 4.0, 16.0}) {
        auto wt = window_rescale(base, t);
        double ratio = measured_c(wt) / wt.sobolev(N + n);
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
    }
    CHECK(rmax <= 10.0 * rmin);
}

TEST_CASE("lower bound: abelian base case") {
    auto g = fx::abelian(2);
    Functional zeta{g, {Rat(2), Rat(1)}};
    auto lbv = construct_lower_bound_vectors(zeta);
    double c2 = measure_chart_c2(g);
    auto consts = lower_bound_constants(*lbv, c2);
    CHECK(consts.c_tilde == doctest::Approx(2 * M_PI).epsilon(1e-2));

    DualMetric metric(*g);
    double zn = metric.norm(to_eigen(zeta.covector));
    auto phi = make_window(*g, consts.eps / std::sqrt(japanese_bracket(zn)), 2);

    // eta = zeta: exact cancellation, Re = mass
    auto v = verify_lower_bound(lbv, to_eigen(zeta.covector), phi, c2);
    REQUIRE(v.admissible);
    CHECK(v.pass);
    CHECK(v.re_value == doctest::Approx(phi.integral()).epsilon(1e-9));
    CHECK(v.margin == doctest::Approx((1 - std::pow(2.0, -6.0)) * phi.integral())
                          .epsilon(1e-6));

    // admissible eta nearby: at least half the mass (paper base case)
    Eigen::VectorXd eta = to_eigen(zeta.covector);
    eta[0] += 0.5 * consts.delta / consts.eps;
    auto v2 = verify_lower_bound(lbv, eta, phi, c2);
    REQUIRE(v2.admissible);
    CHECK(v2.re_value >= 0.5 * phi.integral());

    // inadmissible inputs are rejected with the violated inequality
    auto big = make_window(*g, 1.0, 2);
    CHECK_FALSE(verify_lower_bound(lbv, eta, big, c2).admissible);
    Eigen::VectorXd far = to_eigen(zeta.covector);
    far[0] += 10.0;
    CHECK_FALSE(verify_lower_bound(lbv, far, phi, c2).admissible);
}

TEST_CASE("lower bound on h3 against an independent dense-quadrature oracle") {
    auto g = fx::h3();
    Functional zeta{g, {Rat(0), Rat(0), Rat(1)}};
    auto lbv = construct_lower_bound_vectors(zeta);
    double c2 = measure_chart_c2(g);
    auto consts = lower_bound_constants(*lbv, c2);
    DualMetric metric(*g);
    double zn = metric.norm(to_eigen(zeta.covector));
    auto phi = make_window(*g, consts.eps / std::sqrt(japanese_bracket(zn)), 2);

    auto verdict = verify_lower_bound(lbv, to_eigen(zeta.covector), phi, c2);
    REQUIRE(verdict.admissible);
    CHECK(verdict.pass);
    CHECK(verdict.margin > 0.0);

    // oracle: the action formula gives m(x,y,z) = int e^{2 pi i l(z + s y + x y/2)}
    // chi(s + x) phi_w(s) ds; integrate directly on a dense tensor grid
    double w = lbv->mollifier_width;
    auto m_oracle = [&](double x, double y, double z) {
        auto res = integrate_1d(
            [&](double s) {
                double ph = 2 * M_PI * (z + s * y + 0.5 * x * y);
                return Cplx{std::cos(ph), std::sin(ph)} * chi_plateau(s + x) *
                       mollifier(s, w);
            },
            -w, w);
        return res.value;
    };
    auto oracle = integrate_box(
        [&](const std::vector<double>& X) {
            double ph = -2 * M_PI * X[2];  // eta = e3*
            return m_oracle(X[0], X[1], X[2]) * phi.eval(X) *
                   Cplx{std::cos(ph), std::sin(ph)};
        },
        phi.axis_half);
    CHECK(verdict.re_value == doctest::Approx(oracle.value.real()).epsilon(1e-6));
}

TEST_CASE("decay bound: h3 rapid ray and non-decaying in-plane ray") {
    auto g = fx::h3();
    Functional l{g, {Rat(0), Rat(0), Rat(1)}};
    auto chart = OrbitChart::build(l);
    auto phi = make_window(*g, 1.0, 4);
    auto scales = dyadic_scales(16, 1024, 7);

    auto rapid = verify_decay_bound(l, evec({0, 0, 1}), chart, phi, 10, scales);
    CHECK(rapid.distance_exact);
    CHECK(rapid.classification == DecayReport::Class::Rapid);
    CHECK(rapid.fitted_slope >= 10.0);
    CHECK(rapid.pass);

    auto flat = verify_decay_bound(l, evec({1, 0, 0}), chart, phi, 10, scales);
    CHECK(flat.classification == DecayReport::Class::NonDecay);
    CHECK(flat.fitted_slope <= 2.0);
    CHECK(flat.pass);
    // every scale carried an orbit-adapted witness inside the cone
    for (double a : flat.witness_angle) CHECK(a >= 0.0);
}

TEST_CASE("decay bound: trivial representation is rapid in every direction") {
    auto g = fx::h3();
    Functional l0{g, {Rat(0), Rat(0), Rat(0)}};
    auto chart = OrbitChart::build(l0);
    auto phi = make_window(*g, 1.0, 4);
    auto scales = dyadic_scales(16, 1024, 7);
    for (auto dir : {evec({0, 0, 1}), evec({1, 0, 0}), evec({0.6, 0.48, 0.64})}) {
        auto r = verify_decay_bound(l0, dir, chart, phi, 8, scales);
        CHECK(r.classification == DecayReport::Class::Rapid);
        CHECK(r.fitted_slope >= 8.0);
    }
}

TEST_CASE("decay/lower-bound compatibility at scale 1") {
    auto g = fx::h3();
    Functional l{g, {Rat(0), Rat(0), Rat(1)}};
    auto chart = OrbitChart::build(l);
    auto phi = make_window(*g, 1.0, 4);
    // the lower bound passes at eta = zeta, so the e3* direction cannot be
    // classified rapid on scales starting at tau = 1
    auto scales = dyadic_scales(1, 32, 6);
    auto r = verify_decay_bound(l, evec({0, 0, 1}), chart, phi, 4, scales);
    CHECK(r.classification != DecayReport::Class::Rapid);
}

TEST_CASE("wf cone estimate on a small grid") {
    auto g = fx::h3();
    std::vector<RepSummand> reps{{Functional{g, {Rat(0), Rat(0), Rat(1)}}, 1},
                                 {Functional{g, {Rat(0), Rat(0), Rat(-1)}}, 1}};
    auto phi = make_window(*g, 1.0, 4);
    auto scales = dyadic_scales(16, 512, 6);
    std::vector<Eigen::VectorXd> grid{evec({1, 0, 0}), evec({0, 1, 0}),
                                      evec({0.707, 0.707, 0}), evec({0, 0, 1}),
                                      evec({0, 0, -1})};
    auto scan = wf_cone_estimate(reps, grid, phi, 4, scales);
    CHECK(scan.directions[0].in_wf_estimate);
    CHECK(scan.directions[1].in_wf_estimate);
    CHECK(scan.directions[2].in_wf_estimate);
    CHECK_FALSE(scan.directions[3].in_wf_estimate);
    CHECK_FALSE(scan.directions[3].inconclusive);
    CHECK_FALSE(scan.directions[4].in_wf_estimate);
}

TEST_CASE("compare harness: trivial representation agrees exactly") {
    auto g = fx::h3();
    Functional l0{g, {Rat(0), Rat(0), Rat(0)}};
    std::vector<RepSummand> reps{{l0, 1}};
    std::vector<std::shared_ptr<OrbitChart>> charts{
        std::make_shared<OrbitChart>(OrbitChart::build(l0))};
    auto phi = make_window(*g, 1.0, 4);
    auto scales = dyadic_scales(16, 512, 6);
    std::vector<Eigen::VectorXd> grid{evec({1, 0, 0}), evec({0, 0, 1}),
                                      evec({0.6, 0.48, 0.64})};
    auto rep = compare_wf_ac(reps, charts, grid, phi, 4, scales,
                             {10, 100, 1000});
    CHECK(rep.agreement_rate == doctest::Approx(1.0));
    CHECK(rep.disagree == 0);
    for (const auto& d : rep.directions) {
        CHECK_FALSE(d.in_wf_estimate);
        CHECK(d.ac == AcVerdict::Out);
    }
}

TEST_CASE("point-orbit character: windowed transform decays away from it") {
    // l = e1* on h3 is a character (orbit = {l}); AC({l}) = {0} and the
    // windowed transform decays along every ray (abelian shift-theorem oracle)
    auto g = fx::h3();
    Functional l{g, {Rat(1), Rat(0), Rat(0)}};
    auto chart = OrbitChart::build(l);
    CHECK(chart.param_dim() == 0);
    auto phi = make_window(*g, 1.0, 4);
    auto scales = dyadic_scales(16, 512, 6);
    for (auto dir : {evec({1, 0, 0}), evec({0, 1, 0})}) {
        auto r = verify_decay_bound(l, dir, chart, phi, 4, scales);
        CHECK(r.classification == DecayReport::Class::Rapid);
    }
}
