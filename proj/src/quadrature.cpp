#include "nilorbit/quadrature.hpp"

#include <quadmath.h>

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace nilorbit {

namespace {

GLRule compute_rule(int order) {
    // Newton on Legendre P_n with the usual cosine initial guesses.
    GLRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[order - 1 - i] = x;
        rule.weights[order - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return rule;
}

}  // namespace

const GLRule& gauss_legendre(int order) {
    static std::mutex mu;
    static std::map<int, GLRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

QuadratureResult integrate_1d(const std::function<Cplx(double)>& f, double a, double b,
                              const QuadratureOptions& opt) {
    QuadratureResult res;
    Cplx prev{0.0, 0.0};
    bool have_prev = false;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int order = opt.start_order; order <= opt.max_order; order *= 2) {
        const GLRule& rule = gauss_legendre(order);
        Cplx acc{0.0, 0.0};
        for (int i = 0; i < order; ++i)
            acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
        acc *= half;
        res.value = acc;
        res.final_order = order;
        if (have_prev) {
            res.error_estimate = std::abs(acc - prev);
            if (res.error_estimate <
                std::max(opt.rel_tol * std::abs(acc), opt.abs_floor)) {
                res.converged = true;
                return res;
            }
        }
        prev = acc;
        have_prev = true;
    }
    if (opt.throw_on_failure) {
        std::ostringstream os;
        os << "quadrature did not converge by order " << opt.max_order
           << "; last=" << std::abs(res.value) << " delta=" << res.error_estimate;
        throw AccuracyError(os.str());
    }
    return res;
}

QuadratureResult integrate_box(const std::function<Cplx(const std::vector<double>&)>& f,
                               const std::vector<double>& half_widths,
                               const QuadratureOptions& opt) {
    const int dims = (int)half_widths.size();
    if (dims == 0) {
        QuadratureResult res;
        res.value = f({});
        res.converged = true;
        return res;
    }
    QuadratureResult res;
    Cplx prev{0.0, 0.0};
    bool have_prev = false;
    for (int order = opt.start_order; order <= opt.max_order; order *= 2) {
        const GLRule& rule = gauss_legendre(order);
        std::vector<int> idx(dims, 0);
        std::vector<double> x(dims);
        Cplx acc{0.0, 0.0};
        while (true) {
            double w = 1.0;
            for (int d = 0; d < dims; ++d) {
                x[d] = half_widths[d] * rule.nodes[idx[d]];
                w *= half_widths[d] * rule.weights[idx[d]];
            }
            acc += w * f(x);
            int d = 0;
            while (d < dims && ++idx[d] == order) idx[d++] = 0;
            if (d == dims) break;
        }
        res.value = acc;
        res.final_order = order;
        if (have_prev) {
            res.error_estimate = std::abs(acc - prev);
            if (res.error_estimate <
                std::max(opt.rel_tol * std::abs(acc), opt.abs_floor)) {
                res.converged = true;
                return res;
            }
        }
        prev = acc;
        have_prev = true;
    }
    if (opt.throw_on_failure) {
        std::ostringstream os;
        os << "tensor quadrature did not converge by order " << opt.max_order
           << "; last=" << std::abs(res.value) << " delta=" << res.error_estimate;
        throw AccuracyError(os.str());
    }
    return res;
}

namespace {

struct GLRuleQ {
    std::vector<__float128> nodes;
    std::vector<__float128> weights;
};

GLRuleQ compute_rule_q(int order) {
    GLRuleQ rule;
    rule.nodes.resize((size_t)order);
    rule.weights.resize((size_t)order);
    for (int i = 0; i < order; ++i) {
        __float128 x = cosq(M_PIq * (i + 0.75Q) / (order + 0.5Q));
        __float128 pp = 0;
        for (int it = 0; it < 200; ++it) {
            __float128 p0 = 1, p1 = 0;
            for (int j = 0; j < order; ++j) {
                __float128 p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = order * (x * p0 - p1) / (x * x - 1);
            __float128 dx = p0 / pp;
            x -= dx;
            if (fabsq(dx) < 1e-32Q) break;
        }
        rule.nodes[(size_t)(order - 1 - i)] = x;
        rule.weights[(size_t)(order - 1 - i)] = 2 / ((1 - x * x) * pp * pp);
    }
    return rule;
}

const GLRuleQ& gauss_legendre_q(int order) {
    static std::mutex mu;
    static std::map<int, GLRuleQ> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule_q(order)).first;
    return it->second;
}

}  // namespace

Cplx bump_fourier_1d(double half_width, double freq, double* reliable_floor) {
    const __float128 w = half_width;
    const __float128 omega = 2 * M_PIq * (__float128)freq;
    const __float128 floor_q = 1e-33Q * w;
    if (reliable_floor) *reliable_floor = (double)(3e-33Q * w);

    // composite panels, a few oscillation cycles each, with a small fixed
    // float128 rule; cost stays linear in the frequency
    const int panel_order = 48;
    const GLRuleQ& rule = gauss_legendre_q(panel_order);
    double cycles = std::abs(freq) * 2 * half_width;
    int panels = std::max(8, (int)std::ceil(cycles / 3.0));

    auto evaluate = [&](int np) {
        __float128 re = 0, im = 0;
        __float128 panel_half = w / np;
        for (int p = 0; p < np; ++p) {
            __float128 center = -w + (2 * p + 1) * panel_half;
            for (int i = 0; i < panel_order; ++i) {
                __float128 x = center + panel_half * rule.nodes[(size_t)i];
                __float128 u = x / w;
                __float128 q = 1 - u * u;
                if (q <= 0) continue;
                __float128 b = expq(-1 / q);
                __float128 ph = omega * x;
                re += panel_half * rule.weights[(size_t)i] * b * cosq(ph);
                im -= panel_half * rule.weights[(size_t)i] * b * sinq(ph);
            }
        }
        return std::pair<__float128, __float128>(re, im);
    };

    auto [re, im] = evaluate(panels);
    for (int round = 0; round < 6; ++round) {
        auto [re2, im2] = evaluate(panels * 2);
        __float128 delta =
            sqrtq((re - re2) * (re - re2) + (im - im2) * (im - im2));
        __float128 mag = sqrtq(re2 * re2 + im2 * im2);
        re = re2;
        im = im2;
        panels *= 2;
        if (delta < 1e-24Q * mag + floor_q) break;
    }
    return {(double)re, (double)im};
}

}  // namespace nilorbit
