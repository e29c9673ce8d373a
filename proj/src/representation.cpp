#include "nilorbit/representation.hpp"

#include "nilorbit/util.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace nilorbit {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// C-infinity transition: 1 for x <= 0, 0 for x >= 1.
double smooth_transition(double x) {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    double a = std::exp(-1.0 / (1.0 - x));
    double b = std::exp(-1.0 / x);
    return a / (a + b);
}

// shoulder width making the plateau cutoff unit in L^2: 1/2 + 2 w q = 1
double transition_sq_mass() {
    static const double q = [] {
        const GLRule& rule = gauss_legendre(64);
        double acc = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            double x = 0.5 + 0.5 * rule.nodes[i];
            double t = smooth_transition(x);
            acc += 0.5 * rule.weights[i] * t * t;
        }
        return acc;
    }();
    return q;
}

double plateau_shoulder_width() { return 0.25 / transition_sq_mass(); }

double bump_l1_constant() {
    static const double c = [] {
        const GLRule& rule = gauss_legendre(64);
        double acc = 0.0;
        for (size_t i = 0; i < rule.nodes.size(); ++i) {
            double x = rule.nodes[i];
            acc += rule.weights[i] * std::exp(-1.0 / (1.0 - x * x));
        }
        return 1.0 / acc;
    }();
    return c;
}

}  // namespace

double chi_plateau(double t) {
    double a = std::abs(t);
    if (a <= 0.25) return 1.0;
    return smooth_transition((a - 0.25) / plateau_shoulder_width());
}

double chi_plateau_support() { return 0.25 + plateau_shoulder_width(); }

double mollifier(double t, double width) {
    double x = t / width;
    if (std::abs(x) >= 1.0) return 0.0;
    return bump_l1_constant() / width * std::exp(-1.0 / (1.0 - x * x));
}

double Profile1D::support() const {
    switch (kind) {
        case Mollifier: return width;
        default: return chi_plateau_support();
    }
}

Cplx Profile1D::eval(double t) const {
    switch (kind) {
        case Mollifier: return {mollifier(t, width), 0.0};
        case ModulatedPlateau: {
            double c = chi_plateau(t);
            return c * Cplx{std::cos(kTwoPi * z * t), std::sin(kTwoPi * z * t)};
        }
        case PlateauBump:
        default: return {chi_plateau(t), 0.0};
    }
}

GaussianVector GaussianVector::unit(int k) {
    GaussianVector g;
    g.k = k;
    g.center.assign((size_t)k, 0.0);
    g.freq.assign((size_t)k, 0.0);
    g.width = 1.0;
    g.amp = std::pow(2.0, k / 4.0);
    return g;
}

namespace {

int rep_dim(const RepVector& v) {
    if (auto* g = std::get_if<GridVector>(&v)) return g->k;
    if (auto* g = std::get_if<GaussianVector>(&v)) return g->k;
    return std::get<ProfileVector>(v).k();
}

std::vector<double> per_axis_widths(const RepVector& v, int k) {
    std::vector<double> out((size_t)k, 0.0);
    if (auto* g = std::get_if<GridVector>(&v)) {
        for (int a = 0; a < k; ++a) out[a] = g->box;
    } else if (auto* g = std::get_if<GaussianVector>(&v)) {
        for (int a = 0; a < k; ++a) out[a] = std::abs(g->center[a]) + 4.5 * g->width;
    } else {
        const auto& p = std::get<ProfileVector>(v);
        for (int a = 0; a < k; ++a) out[a] = p.axes[a].support();
    }
    return out;
}

double profile_axis_norm2(const Profile1D& p) {
    const GLRule& rule = gauss_legendre(128);
    double half = p.support();
    double acc = 0.0;
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double t = half * rule.nodes[i];
        acc += half * rule.weights[i] * std::norm(p.eval(t));
    }
    return acc;
}

// 6-point Lagrange interpolation per axis; zero outside the box.
Cplx grid_eval(const GridVector& g, const std::vector<double>& s) {
    const int count = g.axis_count();
    constexpr int order = 6;
    std::array<std::array<double, order>, kPolyMaxVars> wts;
    std::array<std::array<int, order>, kPolyMaxVars> idx;
    for (int a = 0; a < g.k; ++a) {
        double x = (s[a] + g.box) / g.step;
        if (x < -0.5 || x > count - 0.5) return {0.0, 0.0};
        int base = (int)std::floor(x) - order / 2 + 1;
        base = std::max(0, std::min(base, count - order));
        for (int j = 0; j < order; ++j) {
            idx[a][j] = base + j;
            double w = 1.0;
            for (int m = 0; m < order; ++m)
                if (m != j) w *= (x - (base + m)) / double(j - m);
            wts[a][j] = w;
        }
    }
    std::array<int, kPolyMaxVars> pos{};
    Cplx acc{0.0, 0.0};
    while (true) {
        double w = 1.0;
        size_t flat = 0, stride = 1;
        for (int a = 0; a < g.k; ++a) {
            w *= wts[a][pos[a]];
            flat += stride * (size_t)idx[a][pos[a]];
            stride *= (size_t)count;
        }
        acc += w * g.values[flat];
        int a = 0;
        while (a < g.k && ++pos[a] == order) pos[a++] = 0;
        if (a == g.k) break;
    }
    return acc;
}

}  // namespace

Cplx rep_eval(const RepVector& v, const std::vector<double>& s) {
    if (auto* g = std::get_if<GridVector>(&v)) {
        if (g->k == 0) return g->values.empty() ? Cplx{1.0, 0.0} : g->values[0];
        return grid_eval(*g, s);
    }
    if (auto* g = std::get_if<GaussianVector>(&v)) {
        double quad = 0.0, lin = 0.0;
        for (int a = 0; a < g->k; ++a) {
            double d = s[a] - g->center[a];
            quad += d * d;
            lin += g->freq[a] * s[a];
        }
        double mod = std::exp(-M_PI * quad / (g->width * g->width));
        return g->amp * mod * Cplx{std::cos(kTwoPi * lin), std::sin(kTwoPi * lin)};
    }
    const auto& p = std::get<ProfileVector>(v);
    Cplx acc{1.0, 0.0};
    for (int a = 0; a < p.k(); ++a) acc *= p.axes[a].eval(s[a]);
    return acc;
}

double rep_norm(const RepVector& v) {
    if (auto* g = std::get_if<GridVector>(&v)) {
        if (g->k == 0) return g->values.empty() ? 1.0 : std::abs(g->values[0]);
        double acc = 0.0;
        for (const auto& x : g->values) acc += std::norm(x);
        return std::sqrt(acc * std::pow(g->step, g->k));
    }
    if (auto* g = std::get_if<GaussianVector>(&v)) {
        return std::abs(g->amp) * std::pow(g->width * g->width / 2.0, g->k / 4.0);
    }
    const auto& p = std::get<ProfileVector>(v);
    double acc = 1.0;
    for (const auto& ax : p.axes) acc *= profile_axis_norm2(ax);
    return std::sqrt(acc);
}

Cplx rep_inner(const RepVector& a, const RepVector& b) {
    const int k = rep_dim(a);
    if (k != rep_dim(b)) throw StructuralError("rep_inner: dimension mismatch");
    if (k == 0) return rep_eval(a, {}) * std::conj(rep_eval(b, {}));
    if (auto* ga = std::get_if<GridVector>(&a)) {
        if (auto* gb = std::get_if<GridVector>(&b);
            gb && gb->box == ga->box && gb->step == ga->step) {
            Cplx acc{0.0, 0.0};
            for (size_t i = 0; i < ga->values.size(); ++i)
                acc += ga->values[i] * std::conj(gb->values[i]);
            return acc * std::pow(ga->step, ga->k);
        }
    }
    auto wa = per_axis_widths(a, k), wb = per_axis_widths(b, k);
    std::vector<double> widths((size_t)k);
    for (int i = 0; i < k; ++i) widths[i] = std::min(wa[i], wb[i]);
    auto res = integrate_box(
        [&](const std::vector<double>& s) {
            return rep_eval(a, s) * std::conj(rep_eval(b, s));
        },
        widths);
    return res.value;
}

GridVector to_grid(const RepVector& v, double box, double step) {
    const int k = rep_dim(v);
    GridVector out;
    out.k = k;
    out.box = box;
    out.step = step;
    const int count = out.axis_count();
    size_t total = 1;
    for (int a = 0; a < k; ++a) total *= (size_t)count;
    out.values.resize(std::max<size_t>(total, 1));
    if (k == 0) {
        out.values[0] = rep_eval(v, {});
        return out;
    }
    std::vector<int> idx((size_t)k, 0);
    std::vector<double> s((size_t)k);
    size_t flat = 0;
    while (true) {
        for (int a = 0; a < k; ++a) s[a] = -box + idx[a] * step;
        out.values[flat++] = rep_eval(v, s);
        int a = 0;
        while (a < k && ++idx[a] == count) idx[a++] = 0;
        if (a == k) break;
    }
    return out;
}

// ---------------------------------------------------------------------------

std::shared_ptr<InducedRep> InducedRep::realize(const Functional& l,
                                                const Polarization& pol) {
    auto check = is_polarizing(pol.m_basis, l);
    if (!check.ok())
        throw StructuralError("realize: subalgebra is not polarizing (" +
                              check.first_failure + ")");
    const auto& g = *l.parent;
    const int n = g.dim();
    std::vector<RatVec> cur = span_basis(pol.m_basis);
    std::vector<RatVec> cross;
    while ((int)cur.size() < n) {
        // normalizer of cur: {x : [x, b] in span(cur) for all basis b}
        RatMat echelon = cur;
        std::vector<int> piv = rref(echelon);
        RatMat conditions;
        for (const auto& b : cur) {
            RatMat cols(n, RatVec(n, Rat(0)));  // column i: [e_i, b]
            for (int i = 0; i < n; ++i) {
                RatVec e(n, Rat(0));
                e[i] = 1;
                RatVec br = g.bracket_t<Rat>(e, b, Rat(0));
                for (int r = 0; r < n; ++r) cols[r][i] = br[r];
            }
            for (int r = 0; r < n; ++r) {
                bool is_pivot = false;
                for (int p : piv) is_pivot = is_pivot || p == r;
                if (is_pivot) continue;
                RatVec row(n, Rat(0));
                bool keep = false;
                for (int i = 0; i < n; ++i) {
                    Rat val = cols[r][i];
                    for (size_t p = 0; p < piv.size(); ++p)
                        val -= echelon[p][r] * cols[piv[p]][i];
                    row[i] = val;
                    keep = keep || val != 0;
                }
                if (keep) conditions.push_back(std::move(row));
            }
        }
        std::vector<RatVec> normalizer;
        if (conditions.empty()) {
            for (int i = 0; i < n; ++i) {
                RatVec e(n, Rat(0));
                e[i] = 1;
                normalizer.push_back(e);
            }
        } else {
            normalizer = span_basis(null_space(conditions));
        }
        RatVec next;
        for (int i = n - 1; i >= 0 && next.empty(); --i) {
            RatVec e(n, Rat(0));
            e[i] = 1;
            if (in_span(normalizer, e) && !in_span(cur, e)) next = e;
        }
        for (auto it = normalizer.rbegin(); it != normalizer.rend() && next.empty();
             ++it)
            if (!in_span(cur, *it)) next = *it;
        if (next.empty()) throw StructuralError("realize: normalizer chain stalled");
        cross.push_back(next);
        cur.push_back(next);
        cur = span_basis(cur);
    }
    return realize_with_chain(l, span_basis(pol.m_basis), cross);
}

std::shared_ptr<InducedRep> InducedRep::realize_with_chain(const Functional& l,
                                                           std::vector<RatVec> m_basis,
                                                           std::vector<RatVec> cross) {
    auto rep = std::shared_ptr<InducedRep>(new InducedRep());
    rep->l_ = l;
    rep->m_basis_ = std::move(m_basis);
    rep->cross_ = std::move(cross);
    const auto& g = *l.parent;
    const int n = g.dim();
    const int expected_k = orbit_dimension(l) / 2;
    if ((int)rep->cross_.size() != expected_k ||
        (int)rep->m_basis_.size() + expected_k != n)
        throw StructuralError("realize: chain sizes inconsistent with the orbit");

    rep->chain_.push_back(rep->m_basis_);
    std::vector<RatVec> cur = rep->m_basis_;
    for (const auto& w : rep->cross_) {
        cur.push_back(w);
        cur = span_basis(cur);
        rep->chain_.push_back(cur);
    }
    // each member must be an ideal in the next ([h_j, h_j] in h_{j-1})
    for (size_t j = 1; j < rep->chain_.size(); ++j) {
        const auto& big = rep->chain_[j];
        const auto& small = rep->chain_[j - 1];
        for (size_t a = 0; a < big.size(); ++a)
            for (size_t b = a + 1; b < big.size(); ++b) {
                RatVec br = g.bracket_t<Rat>(big[a], big[b], Rat(0));
                if (!in_span(small, br))
                    throw StructuralError(
                        "realize: chain member is not an ideal in the next");
            }
    }
    rep->build_chain_functionals();
    return rep;
}

void InducedRep::build_chain_functionals() {
    const auto& g = *l_.parent;
    const int n = g.dim();
    const int k = (int)cross_.size();
    coord_functionals_.resize((size_t)k);
    for (int i = 0; i < k; ++i) {
        RatMat system;
        RatVec rhs;
        for (const auto& b : chain_[i]) {
            system.push_back(b);
            rhs.push_back(Rat(0));
        }
        system.push_back(cross_[i]);
        rhs.push_back(Rat(1));
        std::vector<RatVec> span = chain_[i + 1];
        for (int e = n - 1; e >= 0 && (int)system.size() < n; --e) {
            RatVec ev(n, Rat(0));
            ev[e] = 1;
            if (!in_span(span, ev)) {
                system.push_back(ev);
                rhs.push_back(Rat(0));
                span.push_back(ev);
                span = span_basis(span);
            }
        }
        auto sol = solve(system, rhs);
        if (!sol) throw StructuralError("realize: coordinate functional unsolvable");
        coord_functionals_[i] = *sol;
    }
}

namespace {

template <class S>
std::pair<std::vector<S>, std::vector<S>> factor_generic(
    const NilpotentAlgebra& g, const std::vector<RatVec>& cross,
    const std::vector<RatVec>& coord_functionals, const std::vector<S>& s,
    const std::vector<S>& group_log, const S& zero) {
    const int n = g.dim();
    const int k = (int)cross.size();
    std::vector<S> V = group_log;
    if (k > 0) {
        std::vector<S> gamma((size_t)n, zero);
        bool first = true;
        for (int i = 0; i < k; ++i) {
            std::vector<S> step((size_t)n, zero);
            for (int r = 0; r < n; ++r)
                step[r] = ScalarOps<S>::scale(s[(size_t)i], cross[i][r]);
            if (first) {
                gamma = std::move(step);
                first = false;
            } else {
                gamma = g.bch_t<S>(gamma, step, zero);
            }
        }
        V = g.bch_t<S>(gamma, group_log, zero);
    }
    std::vector<S> s_new((size_t)k, zero);
    for (int i = k - 1; i >= 0; --i) {
        S si = zero;
        for (int r = 0; r < n; ++r)
            si += ScalarOps<S>::scale(V[(size_t)r], coord_functionals[i][r]);
        s_new[(size_t)i] = si;
        S neg = zero - si;
        std::vector<S> step((size_t)n, zero);
        for (int r = 0; r < n; ++r) step[r] = ScalarOps<S>::scale(neg, cross[i][r]);
        V = g.bch_t<S>(V, step, zero);
    }
    return {V, s_new};
}

}  // namespace

InducedRep::FactorizationR InducedRep::factor(const RatVec& s,
                                              const RatVec& group_log) const {
    auto [mu, s_new] =
        factor_generic<Rat>(*l_.parent, cross_, coord_functionals_, s, group_log, Rat(0));
    return {mu, s_new};
}

InducedRep::FactorizationD InducedRep::factor_d(
    const std::vector<double>& s, const std::vector<double>& group_log) const {
    auto [mu, s_new] = factor_generic<double>(*l_.parent, cross_, coord_functionals_, s,
                                              group_log, 0.0);
    double phase = 0.0;
    for (size_t r = 0; r < mu.size(); ++r) phase += to_double(l_.covector[r]) * mu[r];
    return {mu, s_new, phase};
}

const std::vector<Poly<Rat>>& InducedRep::joint_mu() const {
    std::lock_guard<std::mutex> lock(joint_mu_mutex_);
    if (!joint_mu_) {
        const auto& g = *l_.parent;
        const int n = g.dim();
        const int k = (int)cross_.size();
        const int nvars = k + n;
        if (nvars > kPolyMaxVars)
            throw UnsupportedClassError("symbolic factorization: too many variables");
        const int deg = 24;
        Poly<Rat> zero(nvars, deg);
        std::vector<Poly<Rat>> s((size_t)k, zero), x((size_t)n, zero);
        for (int i = 0; i < k; ++i) s[(size_t)i] = Poly<Rat>::variable(nvars, deg, i);
        for (int i = 0; i < n; ++i)
            x[(size_t)i] = Poly<Rat>::variable(nvars, deg, k + i);
        auto [mu, s_new] =
            factor_generic<Poly<Rat>>(g, cross_, coord_functionals_, s, x, zero);
        joint_mu_ = std::make_unique<std::vector<Poly<Rat>>>(std::move(mu));
        joint_snew_ = std::make_unique<std::vector<Poly<Rat>>>(std::move(s_new));
    }
    return *joint_mu_;
}

const std::vector<Poly<Rat>>& InducedRep::joint_snew() const {
    joint_mu();
    return *joint_snew_;
}

InducedRep::SymbolicAction InducedRep::symbolic_action(
    const std::vector<double>& group_log) const {
    const int k = (int)cross_.size();
    const int n = l_.parent->dim();
    const auto& mu = joint_mu();
    const auto& snew = joint_snew();

    auto substitute_x = [&](const Poly<Rat>& p) {
        Poly<double> out(std::max(1, k), p.max_deg());
        for (const auto& [key, c] : p.terms()) {
            uint64_t skey = 0;
            double val = to_double(c);
            for (int v = 0; v < k; ++v) skey |= (uint64_t)mono_exp(key, v) << (8 * v);
            for (int v = 0; v < n; ++v) {
                int e = mono_exp(key, k + v);
                for (int rep = 0; rep < e; ++rep) val *= group_log[(size_t)v];
            }
            if (val != 0.0) out.add_term(skey, val);
        }
        return out;
    };

    SymbolicAction act;
    Poly<double> phase(std::max(1, k), 24);
    for (int r = 0; r < n; ++r) {
        double lam = to_double(l_.covector[r]);
        if (lam == 0.0) continue;
        phase += substitute_x(mu[(size_t)r]).scaled(lam);
    }
    act.phase = phase;
    act.phase_degree = phase.degree();
    act.affine = true;
    act.shift_only = true;
    act.s_new.reserve((size_t)k);
    for (int i = 0; i < k; ++i) {
        auto p = substitute_x(snew[(size_t)i]);
        if (p.degree() > 1) act.affine = false;
        for (int j = 0; j < k; ++j) {
            double lin = p.coeff(mono_var(j));
            if (i == j ? std::abs(lin - 1.0) > 1e-12 : std::abs(lin) > 1e-12)
                act.shift_only = false;
        }
        act.s_new.push_back(std::move(p));
    }
    if (!act.affine) act.shift_only = false;
    return act;
}

GridVector InducedRep::apply(const std::vector<double>& group_log, const RepVector& f,
                             double box, double step) const {
    const int kk = k();
    GridVector out;
    out.k = kk;
    out.box = box;
    out.step = step;
    const int count = out.axis_count();
    size_t total = 1;
    for (int a = 0; a < kk; ++a) total *= (size_t)count;
    out.values.resize(std::max<size_t>(total, 1));
    if (kk == 0) {
        auto fact = factor_d({}, group_log);
        out.values[0] = rep_eval(f, {}) *
                        Cplx{std::cos(kTwoPi * fact.phase), std::sin(kTwoPi * fact.phase)};
        return out;
    }
    std::vector<int> idx((size_t)kk, 0);
    std::vector<double> s((size_t)kk);
    size_t flat = 0;
    while (true) {
        for (int a = 0; a < kk; ++a) s[a] = -box + idx[a] * step;
        auto fact = factor_d(s, group_log);
        Cplx ph{std::cos(kTwoPi * fact.phase), std::sin(kTwoPi * fact.phase)};
        out.values[flat++] = ph * rep_eval(f, fact.s_new);
        int a = 0;
        while (a < kk && ++idx[a] == count) idx[a++] = 0;
        if (a == kk) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// matrix coefficients

namespace {

// integral of exp(-s^T M s + beta.s + gamma) over R^k for complex symmetric M
// with positive definite real part
Cplx gaussian_integral(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& beta,
                       Cplx gamma) {
    const int k = (int)M.rows();
    Eigen::VectorXcd y = M.partialPivLu().solve(beta);
    Cplx bil{0.0, 0.0};
    for (int i = 0; i < k; ++i) bil += beta[i] * y[i];
    Cplx expo = gamma + 0.25 * bil;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    Cplx det_root{1.0, 0.0};
    for (int i = 0; i < k; ++i) det_root *= std::sqrt(es.eigenvalues()[i]);
    return std::pow(M_PI, 0.5 * k) / det_root * std::exp(expo);
}

struct AffineAction {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd Q;
    Eigen::VectorXd c1;
    double c0 = 0.0;
};

AffineAction affine_data(const InducedRep::SymbolicAction& act, int k) {
    AffineAction out;
    out.A.setZero(k, k);
    out.b.setZero(k);
    out.Q.setZero(k, k);
    out.c1.setZero(k);
    for (int i = 0; i < k; ++i) {
        out.b[i] = act.s_new[(size_t)i].coeff(0);
        for (int j = 0; j < k; ++j)
            out.A(i, j) = act.s_new[(size_t)i].coeff(mono_var(j));
    }
    out.c0 = act.phase.coeff(0);
    for (int i = 0; i < k; ++i) {
        out.c1[i] = act.phase.coeff(mono_var(i));
        out.Q(i, i) = act.phase.coeff(mono_var(i, 2));
        for (int j = i + 1; j < k; ++j) {
            double cij = act.phase.coeff(mono_mul(mono_var(i), mono_var(j)));
            out.Q(i, j) += 0.5 * cij;
            out.Q(j, i) += 0.5 * cij;
        }
    }
    return out;
}

Cplx gaussian_pair_coefficient(const GaussianVector& u, const GaussianVector& v,
                               const AffineAction& act) {
    const int k = u.k;
    const Cplx I{0.0, 1.0};
    Eigen::VectorXd cu = to_eigen(u.center), cv = to_eigen(v.center);
    Eigen::VectorXd fu = to_eigen(u.freq), fv = to_eigen(v.freq);
    double au = M_PI / (u.width * u.width), av = M_PI / (v.width * v.width);

    Eigen::MatrixXcd M =
        (au * (act.A.transpose() * act.A) + av * Eigen::MatrixXd::Identity(k, k))
            .cast<Cplx>() -
        I * kTwoPi * act.Q.cast<Cplx>();
    Eigen::VectorXcd beta =
        (2.0 * au * act.A.transpose() * (cu - act.b) + 2.0 * av * cv).cast<Cplx>() +
        I * kTwoPi * (act.c1 + act.A.transpose() * fu - fv).cast<Cplx>();
    Cplx gamma = Cplx(-au * (act.b - cu).squaredNorm() - av * cv.squaredNorm(), 0.0) +
                 I * kTwoPi * (act.c0 + fu.dot(act.b));
    return u.amp * std::conj(v.amp) * gaussian_integral(M, beta, gamma);
}

}  // namespace

Cplx matrix_coefficient(const InducedRep& rep, const RepVector& u, const RepVector& v,
                        const std::vector<double>& group_log) {
    const int k = rep.k();
    if (rep_dim(u) != k || rep_dim(v) != k)
        throw StructuralError("matrix_coefficient: vector dimension mismatch");

    if (k == 0) {
        auto fact = rep.factor_d({}, group_log);
        Cplx ph{std::cos(kTwoPi * fact.phase), std::sin(kTwoPi * fact.phase)};
        return ph * rep_eval(u, {}) * std::conj(rep_eval(v, {}));
    }

    if (auto* gu = std::get_if<GaussianVector>(&u)) {
        if (auto* gv = std::get_if<GaussianVector>(&v)) {
            auto act = rep.symbolic_action(group_log);
            if (act.affine && act.phase_degree <= 2)
                return gaussian_pair_coefficient(*gu, *gv, affine_data(act, k));
        }
    }

    if (auto* gv = std::get_if<GridVector>(&v)) {
        const int count = gv->axis_count();
        double peak = 0.0, edge = 0.0;
        std::vector<int> idx((size_t)k, 0);
        size_t flat = 0;
        while (true) {
            double mag = std::abs(gv->values[flat]);
            peak = std::max(peak, mag);
            for (int a = 0; a < k; ++a)
                if (idx[a] == 0 || idx[a] == count - 1) edge = std::max(edge, mag);
            ++flat;
            int a = 0;
            while (a < k && ++idx[a] == count) idx[a++] = 0;
            if (a == k) break;
        }
        if (peak > 0 && edge > 1e-8 * peak) {
            std::ostringstream os;
            os << "matrix_coefficient: truncation box " << gv->box
               << " too small (boundary mass ratio " << edge / peak
               << "); increase the box to at least " << gv->box * 1.5;
            throw AccuracyError(os.str());
        }
        Cplx acc{0.0, 0.0};
        std::vector<double> s((size_t)k);
        std::fill(idx.begin(), idx.end(), 0);
        flat = 0;
        while (true) {
            for (int a = 0; a < k; ++a) s[a] = -gv->box + idx[a] * gv->step;
            auto fact = rep.factor_d(s, group_log);
            Cplx ph{std::cos(kTwoPi * fact.phase), std::sin(kTwoPi * fact.phase)};
            acc += ph * rep_eval(u, fact.s_new) * std::conj(gv->values[flat]);
            ++flat;
            int a = 0;
            while (a < k && ++idx[a] == count) idx[a++] = 0;
            if (a == k) break;
        }
        return acc * std::pow(gv->step, k);
    }

    auto widths = per_axis_widths(v, k);
    auto res = integrate_box(
        [&](const std::vector<double>& s) {
            auto fact = rep.factor_d(s, group_log);
            Cplx ph{std::cos(kTwoPi * fact.phase), std::sin(kTwoPi * fact.phase)};
            return ph * rep_eval(u, fact.s_new) * std::conj(rep_eval(v, s));
        },
        widths);
    return res.value;
}

Cplx matrix_coefficient_beta(const InducedRep& rep, const RepVector& u,
                             const RepVector& v, const RatVec& X1,
                             const std::vector<double>& V) {
    const auto& g = *rep.algebra();
    const int n = g.dim();
    std::vector<double> x1 = to_double(X1);
    std::vector<std::vector<double>> Gd((size_t)n, std::vector<double>((size_t)n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Gd[i][j] = to_double(g.gram()[i][j]);
    double t = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t += V[(size_t)i] * Gd[i][j] * x1[(size_t)j];
    std::vector<double> v0((size_t)n), tx((size_t)n);
    for (int i = 0; i < n; ++i) {
        tx[(size_t)i] = t * x1[(size_t)i];
        v0[(size_t)i] = V[(size_t)i] - tx[(size_t)i];
    }
    auto glog = g.bch_t<double>(v0, tx, 0.0);
    return matrix_coefficient(rep, u, v, glog);
}

C1Estimate c1_norm_estimate(const CoeffFn& coeff, const NilpotentAlgebra& algebra,
                            double ball_radius, int samples, double fd_step) {
    const int n = algebra.dim();
    DualMetric metric(algebra);
    auto pts = ball_sample(algebra, ball_radius, samples);
    C1Estimate est;
    for (const auto& p : pts) {
        est.sup_value = std::max(est.sup_value, std::abs(coeff(p)));
        Eigen::VectorXd grad_re(n), grad_im(n);
        for (int i = 0; i < n; ++i) {
            auto hi = p, lo = p;
            hi[(size_t)i] += fd_step;
            lo[(size_t)i] -= fd_step;
            Cplx d = (coeff(hi) - coeff(lo)) / (2 * fd_step);
            grad_re[i] = d.real();
            grad_im[i] = d.imag();
        }
        double gnorm = std::sqrt(std::pow(metric.norm(grad_re), 2) +
                                 std::pow(metric.norm(grad_im), 2));
        est.sup_gradient = std::max(est.sup_gradient, gnorm);
    }
    return est;
}

// ---------------------------------------------------------------------------
// lower-bound vectors

Cplx LowerBoundVectors::coefficient(const std::vector<double>& X) const {
    return matrix_coefficient(*rep, u, v, X);
}

Cplx LowerBoundVectors::coefficient_beta(const std::vector<double>& V) const {
    if (top_kirillov_X.empty()) return coefficient(V);
    return matrix_coefficient_beta(*rep, u, v, top_kirillov_X, V);
}

Cplx LowerBoundVectors::coefficient_limit(const std::vector<double>& V) const {
    if (top_kirillov_X.empty() || !sub) return coefficient(V);
    const auto& g = *rep->algebra();
    const int n = g.dim();
    std::vector<double> x1 = to_double(top_kirillov_X);
    std::vector<std::vector<double>> Gd((size_t)n, std::vector<double>((size_t)n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Gd[i][j] = to_double(g.gram()[i][j]);
    double t = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t += V[(size_t)i] * Gd[i][j] * x1[(size_t)j];
    const int m = (int)sub_basis.size();
    Eigen::MatrixXd B(n, m);
    for (int c = 0; c < m; ++c)
        for (int r = 0; r < n; ++r) B(r, c) = to_double(sub_basis[(size_t)c][(size_t)r]);
    Eigen::VectorXd v0(n);
    for (int i = 0; i < n; ++i) v0[i] = V[(size_t)i] - t * x1[(size_t)i];
    Eigen::VectorXd coords = B.colPivHouseholderQr().solve(v0);
    std::vector<double> sub_coords(coords.data(), coords.data() + m);
    Cplx m0 = sub->coefficient_fast(sub_coords);
    double c = chi_plateau(t);
    Cplx ph{std::cos(kTwoPi * top_z * t), std::sin(kTwoPi * top_z * t)};
    return m0 * c * ph;
}

Cplx LowerBoundVectors::coefficient_fast(const std::vector<double>& X) const {
    switch (kind) {
        case Kind::Base: {
            double ph = 0.0;
            for (size_t i = 0; i < lambda_d.size(); ++i) ph += lambda_d[i] * X[i];
            ph *= kTwoPi;
            return {std::cos(ph), std::sin(ph)};
        }
        case Kind::Lifted: {
            std::vector<double> sub_x(proj_d.size(), 0.0);
            for (size_t r = 0; r < proj_d.size(); ++r)
                for (size_t c = 0; c < X.size(); ++c)
                    sub_x[r] += proj_d[r][c] * X[c];
            return sub->coefficient_fast(sub_x);
        }
        case Kind::Induced:
        default: {
            std::vector<double> V(kappa_top.size());
            for (size_t i = 0; i < kappa_top.size(); ++i) V[i] = kappa_top[i](X);
            return beta_fast(V);
        }
    }
}

Cplx LowerBoundVectors::beta_fast(const std::vector<double>& V) const {
    if (kind != Kind::Induced) return coefficient_fast(V);
    const size_t n = V.size();
    double t = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) t += V[i] * gram_d[i][j] * x_top_d[j];
    std::vector<double> v0(n);
    for (size_t i = 0; i < n; ++i) v0[i] = V[i] - t * x_top_d[i];

    const GLRule& rule = gauss_legendre(48);
    const double w = mollifier_width;
    Cplx acc{0.0, 0.0};
    std::vector<double> conj_v(n), term(n), sub_x(subcoord_d.size());
    for (size_t q = 0; q < rule.nodes.size(); ++q) {
        double s = w * rule.nodes[q];
        double weight = w * rule.weights[q] * mollifier(s, w);
        if (weight == 0.0) continue;
        // Ad(exp(sX)) v0 via the nilpotent series
        conj_v = v0;
        term = v0;
        for (size_t p = 1; p <= adx_apply.size(); ++p) {
            const auto& A = adx_apply[p - 1];
            std::vector<double> next(n, 0.0);
            double fac = s / (double)p;
            bool nz = false;
            for (size_t r = 0; r < n; ++r) {
                double acc_r = 0.0;
                for (size_t c = 0; c < n; ++c) acc_r += A[r][c] * term[c];
                next[r] = acc_r * fac;
                nz = nz || next[r] != 0.0;
            }
            term = std::move(next);
            if (!nz) break;
            for (size_t r = 0; r < n; ++r) conj_v[r] += term[r];
        }
        for (size_t r = 0; r < sub_x.size(); ++r) {
            double a = 0.0;
            for (size_t c = 0; c < n; ++c) a += subcoord_d[r][c] * conj_v[c];
            sub_x[r] = a;
        }
        Cplx m0 = sub->coefficient_fast(sub_x);
        double ph = kTwoPi * top_z * (s + t);
        acc += weight * m0 * chi_plateau(s + t) * Cplx{std::cos(ph), std::sin(ph)};
    }
    return acc;
}

namespace {

RatVec embed(const std::vector<RatVec>& section_cols, const RatVec& coords) {
    const int n = (int)section_cols[0].size();
    RatVec out((size_t)n, Rat(0));
    for (size_t a = 0; a < section_cols.size(); ++a)
        out = vec_add(out, vec_scale(coords[a], section_cols[a]));
    return out;
}

void fill_common_caches(LowerBoundVectors& out) {
    const auto& g = *out.rep->algebra();
    const int n = g.dim();
    out.lambda_d = to_double(out.rep->l().covector);
    out.gram_d.assign((size_t)n, std::vector<double>((size_t)n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.gram_d[(size_t)i][(size_t)j] = to_double(g.gram()[(size_t)i][(size_t)j]);
}

std::shared_ptr<LowerBoundVectors> build_lower_bound(const Functional& l,
                                                     int max_halvings) {
    const auto& g = *l.parent;
    const int n = g.dim();
    auto out = std::make_shared<LowerBoundVectors>();

    // abelian base: one-dimensional representation, u = v = 1
    if (g.nonzero_brackets().empty()) {
        std::vector<RatVec> m;
        for (int i = 0; i < n; ++i) {
            RatVec e((size_t)n, Rat(0));
            e[(size_t)i] = 1;
            m.push_back(e);
        }
        out->rep = InducedRep::realize_with_chain(l, m, {});
        out->u = ProfileVector{};
        out->v = ProfileVector{};
        out->u_norm = out->v_norm = 1.0;
        out->kind = LowerBoundVectors::Kind::Base;
        fill_common_caches(*out);
        return out;
    }

    // a central direction killed by l: pass to the quotient
    auto zc = center(g);
    RatVec z0;
    {
        RatMat pairing(1, RatVec(zc.size(), Rat(0)));
        for (size_t a = 0; a < zc.size(); ++a) pairing[0][a] = dot(l.covector, zc[a]);
        auto ker = null_space(pairing);
        if (!ker.empty()) z0 = embed(zc, ker[0]);
    }
    if (!z0.empty() && !vec_is_zero(z0)) {
        auto q = quotient_by_central(l.parent, {l.parent, z0});
        const int m = q.quotient->dim();
        RatVec lbar((size_t)m, Rat(0));
        for (int a = 0; a < m; ++a) lbar[(size_t)a] = dot(l.covector, q.w_basis[(size_t)a]);
        auto sub = build_lower_bound({q.quotient, lbar}, max_halvings);

        std::vector<RatVec> m_lift;
        for (const auto& row : sub->rep->m_basis())
            m_lift.push_back(embed(q.w_basis, row));
        m_lift.push_back(z0);
        std::vector<RatVec> cross_lift;
        for (const auto& w : sub->rep->cross_section())
            cross_lift.push_back(embed(q.w_basis, w));

        out->rep = InducedRep::realize_with_chain(l, span_basis(m_lift), cross_lift);
        out->u = sub->u;
        out->v = sub->v;
        out->u_norm = sub->u_norm;
        out->v_norm = sub->v_norm;
        out->mollifier_width = sub->mollifier_width;
        out->certified_sup_gap = sub->certified_sup_gap;
        out->certification_radius = sub->certification_radius;
        out->sub = sub;
        out->kind = LowerBoundVectors::Kind::Lifted;
        fill_common_caches(*out);
        out->proj_d.assign(q.projection.size(), {});
        for (size_t r = 0; r < q.projection.size(); ++r)
            out->proj_d[r] = to_double(q.projection[r]);
        return out;
    }

    // Kirillov step: one-dimensional center with l(Z) != 0
    auto kd = kirillov_decomposition(l.parent);
    if (!kd.x_unit_exact)
        throw StructuralError(
            "construct_lower_bound_vectors: Kirillov X is not exactly unit under this "
            "gram");
    std::vector<RatVec> g0_rows;
    for (const auto& b : kd.g0_basis) g0_rows.push_back(b.coords);
    auto sub_real = subalgebra_from_basis(l.parent, g0_rows);
    const int m = sub_real.sub->dim();
    RatVec l0((size_t)m, Rat(0));
    for (int a = 0; a < m; ++a) l0[(size_t)a] = dot(l.covector, sub_real.basis[(size_t)a]);
    auto sub = build_lower_bound({sub_real.sub, l0}, max_halvings);

    std::vector<RatVec> m_lift;
    for (const auto& row : sub->rep->m_basis())
        m_lift.push_back(embed(sub_real.basis, row));
    std::vector<RatVec> cross_lift;
    for (const auto& w : sub->rep->cross_section())
        cross_lift.push_back(embed(sub_real.basis, w));
    cross_lift.push_back(kd.X.coords);

    out->rep = InducedRep::realize_with_chain(l, span_basis(m_lift), cross_lift);
    out->sub = sub;
    out->sub_basis = sub_real.basis;
    out->top_kirillov_X = kd.X.coords;
    out->top_z = to_double(dot(l.covector, kd.X.coords));

    ProfileVector u_prof = std::get<ProfileVector>(sub->u);
    Profile1D chi;
    chi.kind = Profile1D::ModulatedPlateau;
    chi.z = out->top_z;
    u_prof.axes.push_back(chi);
    out->u = u_prof;
    out->u_norm = rep_norm(out->u);

    out->kind = LowerBoundVectors::Kind::Induced;
    fill_common_caches(*out);
    out->x_top_d = to_double(kd.X.coords);
    {
        auto ct = chart_transition(l.parent, kd.X.coords, 1.0, 0);
        for (const auto& p : ct.kappa) out->kappa_top.push_back(poly_to_double(p));
        // g0 coordinates of vectors in the ideal: least-squares inverse of the
        // basis matrix (exact on the subspace)
        Eigen::MatrixXd B(n, m);
        for (int c = 0; c < m; ++c)
            for (int r = 0; r < n; ++r)
                B(r, c) = to_double(sub_real.basis[(size_t)c][(size_t)r]);
        Eigen::MatrixXd pinv = (B.transpose() * B).inverse() * B.transpose();
        out->subcoord_d.assign((size_t)m, std::vector<double>((size_t)n));
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < n; ++c) out->subcoord_d[(size_t)r][(size_t)c] = pinv(r, c);
    }

    const double budget = std::pow(2.0, -3.0 * n);
    auto cert_points = ball_sample(g, out->certification_radius, 120);
    RatMat adX = g.ad_matrix(kd.X.coords);
    {
        // beta_fast applies ad(X) iteratively, once per series order
        std::vector<std::vector<double>> A((size_t)n, std::vector<double>((size_t)n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                A[(size_t)i][(size_t)j] = to_double(adX[(size_t)i][(size_t)j]);
        int cls = std::max(1, g.nilpotency_class());
        out->adx_apply.assign((size_t)cls, A);
    }
    Eigen::MatrixXd adXd(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) adXd(i, j) = to_double(adX[(size_t)i][(size_t)j]);
    auto ad_exp_norm = [&](double s) {
        Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(n, n);
        Eigen::MatrixXd term = acc;
        for (int mm = 1; mm <= n + 1; ++mm) {
            term = (s / mm) * (adXd * term);
            acc += term;
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(acc);
        return svd.singularValues()(0);
    };

    double width = 0.25;
    double gap = 0.0;
    bool certified = false;
    for (int h = 0; h < max_halvings; ++h, width *= 0.5) {
        if (std::max(ad_exp_norm(width), ad_exp_norm(-width)) > 2.0) continue;

        ProfileVector v_prof = std::get<ProfileVector>(sub->v);
        Profile1D phi;
        phi.kind = Profile1D::Mollifier;
        phi.width = width;
        v_prof.axes.push_back(phi);
        out->v = v_prof;
        out->mollifier_width = width;

        gap = 0.0;
        for (const auto& p : cert_points) {
            Cplx moll = out->beta_fast(p);
            Cplx limit = out->coefficient_limit(p);
            gap = std::max(gap, std::abs(moll - limit));
            if (gap > budget) break;
        }
        if (gap <= budget) {
            certified = true;
            break;
        }
    }
    if (!certified) {
        std::ostringstream os;
        os << "mollifier certification failed: achieved sup gap " << gap << " > budget "
           << budget << " after " << max_halvings << " halvings";
        throw CertificationError(os.str());
    }
    out->certified_sup_gap = gap;
    out->v_norm = rep_norm(out->v);
    return out;
}

}  // namespace

std::shared_ptr<LowerBoundVectors> construct_lower_bound_vectors(const Functional& l,
                                                                 int max_halvings) {
    return build_lower_bound(l, max_halvings);
}

}  // namespace nilorbit
