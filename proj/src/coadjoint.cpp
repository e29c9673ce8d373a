#include "nilorbit/coadjoint.hpp"

#include "nilorbit/util.hpp"

#include <algorithm>
#include <sstream>

namespace nilorbit {

namespace {

void require_same_parent(const Functional& a, const Functional& b) {
    if (a.parent != b.parent)
        throw StructuralError("functionals belong to different algebras");
}

// Matrix of ad*(V) on covectors: (ad*(V) l)(e_j) = l([e_j, V]).
RatMat coadjoint_generator(const NilpotentAlgebra& g, const RatVec& V) {
    const int n = g.dim();
    RatMat A(n, RatVec(n, Rat(0)));
    for (int j = 0; j < n; ++j) {
        RatVec ej(n, Rat(0));
        ej[j] = 1;
        RatVec br = g.bracket_t<Rat>(ej, V, Rat(0));  // [e_j, V]
        for (int k = 0; k < n; ++k) A[j][k] = br[k];
    }
    return A;
}

}  // namespace

Functional operator+(const Functional& a, const Functional& b) {
    require_same_parent(a, b);
    return {a.parent, vec_add(a.covector, b.covector)};
}
Functional operator-(const Functional& a, const Functional& b) {
    require_same_parent(a, b);
    return {a.parent, vec_sub(a.covector, b.covector)};
}
DualMetric::DualMetric(const NilpotentAlgebra& algebra) {
    const int n = algebra.dim();
    Eigen::MatrixXd G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = to_double(algebra.gram()[i][j]);
    g_inv = G.inverse();
}

double DualMetric::norm(const Eigen::VectorXd& covector) const {
    return std::sqrt(std::max(0.0, dot(covector, covector)));
}

double DualMetric::dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return a.dot(g_inv * b);
}

double DualMetric::angle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    double na = norm(a), nb = norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    double c = dot(a, b) / (na * nb);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

Eigen::VectorXd to_eigen(const RatVec& v) {
    Eigen::VectorXd out((Eigen::Index)v.size());
    for (size_t i = 0; i < v.size(); ++i) out[(Eigen::Index)i] = to_double(v[i]);
    return out;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    Eigen::VectorXd out((Eigen::Index)v.size());
    for (size_t i = 0; i < v.size(); ++i) out[(Eigen::Index)i] = v[i];
    return out;
}

Functional coadjoint_action(const AlgebraElement& X, const Functional& l) {
    if (X.parent != l.parent)
        throw StructuralError("coadjoint_action: mismatched algebras");
    const auto& g = *l.parent;
    const int n = g.dim();
    RatVec out(n, Rat(0));
    for (int j = 0; j < n; ++j) {
        RatVec ej(n, Rat(0));
        ej[j] = 1;
        out[j] = dot(l.covector, g.bracket_t<Rat>(ej, X.coords, Rat(0)));
    }
    return {l.parent, out};
}

RatMat skew_form(const Functional& l) {
    const auto& g = *l.parent;
    const int n = g.dim();
    RatMat B(n, RatVec(n, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (g.c(i, j, k) != 0) B[i][j] += l.covector[k] * g.c(i, j, k);
    return B;
}

std::vector<RatVec> radical(const Functional& l) {
    const int n = l.parent->dim();
    RatMat B = skew_form(l);
    bool zero = true;
    for (auto& row : B) zero = zero && vec_is_zero(row);
    if (zero) {
        std::vector<RatVec> all;
        for (int i = 0; i < n; ++i) {
            RatVec e(n, Rat(0));
            e[i] = 1;
            all.push_back(e);
        }
        return all;
    }
    return span_basis(null_space(B));
}

int orbit_dimension(const Functional& l) {
    return l.parent->dim() - (int)radical(l).size();
}

Functional coadjoint_flow(const std::vector<std::pair<AlgebraElement, Rat>>& steps,
                          const Functional& l) {
    Functional cur = l;
    const auto& g = *l.parent;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        const auto& [V, t] = *it;
        if (V.parent != l.parent)
            throw StructuralError("coadjoint_flow: mismatched algebras");
        RatMat A = coadjoint_generator(g, V.coords);
        RatVec acc = cur.covector;
        RatVec term = cur.covector;
        for (int m = 1; m <= g.dim() + 1; ++m) {
            term = vec_scale(t / m, mat_vec(A, term));
            if (vec_is_zero(term)) break;
            acc = vec_add(acc, term);
        }
        cur = {l.parent, acc};
    }
    return cur;
}

OrbitChart::OrbitChart(Functional base, std::vector<RatVec> radical_basis,
                       std::vector<RatVec> flow_basis)
    : base_(std::move(base)),
      radical_basis_(std::move(radical_basis)),
      flow_basis_(std::move(flow_basis)) {}

OrbitChart OrbitChart::build(const Functional& l) {
    const auto& g = *l.parent;
    auto rad = radical(l);
    std::vector<RatVec> flow;
    if (rad.empty()) {
        for (int i = 0; i < g.dim(); ++i) {
            RatVec e(g.dim(), Rat(0));
            e[i] = 1;
            flow.push_back(e);
        }
    } else if ((int)rad.size() < g.dim()) {
        RatMat conditions;
        for (const auto& r : rad) conditions.push_back(mat_vec(g.gram(), r));
        flow = span_basis(null_space(conditions));
    }
    return OrbitChart(l, std::move(rad), std::move(flow));
}

Functional OrbitChart::point(const RatVec& params) const {
    std::vector<std::pair<AlgebraElement, Rat>> steps;
    for (size_t i = 0; i < flow_basis_.size(); ++i)
        steps.push_back({{base_.parent, flow_basis_[i]}, params[i]});
    return coadjoint_flow(steps, base_);
}

Eigen::VectorXd OrbitChart::point_d(const std::vector<double>& params) const {
    const auto& polys = orbit_polynomials();
    Eigen::VectorXd out((Eigen::Index)polys.size());
    for (size_t i = 0; i < polys.size(); ++i)
        out[(Eigen::Index)i] = poly_to_double(polys[i])(params);
    return out;
}

const std::vector<Poly<Rat>>& OrbitChart::orbit_polynomials() const {
    std::lock_guard<std::mutex> lock(*mu_);
    if (!orbit_polys_.empty()) return orbit_polys_;
    const auto& g = *base_.parent;
    const int n = g.dim();
    const int d = (int)flow_basis_.size();
    const int nv = std::max(1, d);
    const int cls = std::max(1, g.nilpotency_class());
    const int deg = std::min(60, std::max(1, d * cls));
    Poly<Rat> zero(nv, deg);
    std::vector<Poly<Rat>> cov(n, zero);
    for (int k = 0; k < n; ++k)
        cov[k] = Poly<Rat>::constant(nv, deg, base_.covector[k]);
    for (int j = d - 1; j >= 0; --j) {
        RatMat A = coadjoint_generator(g, flow_basis_[j]);
        Poly<Rat> tj = Poly<Rat>::variable(nv, deg, j);
        std::vector<Poly<Rat>> acc = cov;
        std::vector<Poly<Rat>> term = cov;
        for (int m = 1; m <= n + 1; ++m) {
            // term <- t_j * A^T-action * term / m, matching coadjoint_flow
            std::vector<Poly<Rat>> next(n, zero);
            bool nonzero = false;
            for (int r = 0; r < n; ++r) {
                Poly<Rat> s = zero;
                for (int c = 0; c < n; ++c)
                    if (A[r][c] != 0) s += term[c].scaled(A[r][c]);
                next[r] = (tj * s).scaled(Rat(1, m));
                nonzero = nonzero || !next[r].is_zero();
            }
            if (!nonzero) break;
            term = std::move(next);
            for (int r = 0; r < n; ++r) acc[r] += term[r];
        }
        cov = std::move(acc);
    }
    orbit_polys_ = std::move(cov);
    return orbit_polys_;
}

bool OrbitChart::is_affine() const {
    for (const auto& p : orbit_polynomials())
        if (p.degree() > 1) return false;
    return true;
}

std::vector<OrbitChart::Sample> OrbitChart::samples() const {
    std::lock_guard<std::mutex> lock(*mu_);
    return samples_;
}

void OrbitChart::cache(std::vector<Sample> more) const {
    std::lock_guard<std::mutex> lock(*mu_);
    for (auto& s : more) samples_.push_back(std::move(s));
}

std::vector<Functional> orbit_sample(const OrbitChart& chart,
                                     const std::vector<RatVec>& grid) {
    std::vector<Functional> out;
    std::vector<OrbitChart::Sample> cache;
    for (const auto& params : grid) {
        auto f = chart.point(params);
        out.push_back(f);
        cache.push_back({to_double(params), to_eigen(f.covector)});
    }
    chart.cache(std::move(cache));
    return out;
}

namespace {

struct AffineOrbit {
    Eigen::VectorXd a;
    Eigen::MatrixXd M;
};

AffineOrbit affine_data(const OrbitChart& chart) {
    const auto& polys = chart.orbit_polynomials();
    const int n = (int)polys.size();
    const int d = chart.param_dim();
    AffineOrbit out;
    out.a.resize(n);
    out.M.resize(n, std::max(1, d));
    out.M.setZero();
    for (int k = 0; k < n; ++k) {
        out.a[k] = to_double(polys[k].coeff(0));
        for (int j = 0; j < d; ++j)
            out.M(k, j) = to_double(polys[k].coeff(mono_var(j)));
    }
    return out;
}

}  // namespace

DistanceResult distance_to_orbit(const Eigen::VectorXd& eta, const OrbitChart& chart,
                                 double box_half_width) {
    DistanceResult res;
    DualMetric metric(*chart.base().parent);
    const int d = chart.param_dim();

    if (d == 0) {
        res.value = metric.norm(eta - to_eigen(chart.base().covector));
        res.exact = true;
        return res;
    }

    if (chart.is_affine()) {
        // The chart covers the whole affine subspace, so the unconstrained
        // least-squares distance is the distance to the orbit.
        auto aff = affine_data(chart);
        Eigen::MatrixXd A = aff.M.transpose() * metric.g_inv * aff.M;
        Eigen::VectorXd b = aff.M.transpose() * metric.g_inv * (eta - aff.a);
        Eigen::VectorXd t = A.ldlt().solve(b);
        Eigen::VectorXd resid = eta - aff.a - aff.M * t;
        res.value = metric.norm(resid);
        res.exact = true;
        res.best_params.assign(t.data(), t.data() + t.size());
        return res;
    }

    auto objective = [&](const std::vector<double>& t) {
        return metric.norm(eta - chart.point_d(t));
    };
    std::vector<std::vector<double>> starts;
    starts.push_back(std::vector<double>(d, 0.0));
    for (int j = 0; j < d; ++j)
        for (double s : {-0.5, 0.5}) {
            std::vector<double> p(d, 0.0);
            p[j] = s * box_half_width;
            starts.push_back(p);
        }
    for (uint64_t i = 0; i < 8; ++i) {
        auto h = halton_point(i, d);
        std::vector<double> p(d);
        for (int j = 0; j < d; ++j) p[j] = (2 * h[j] - 1) * box_half_width;
        starts.push_back(p);
    }

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_t;
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    int improving_sweeps = 0;
    for (auto& t : starts) {
        double cur = objective(t);
        for (int sweep = 0; sweep < 24; ++sweep) {
            double before = cur;
            for (int j = 0; j < d; ++j) {
                double lo = -box_half_width, hi = box_half_width;
                auto eval_at = [&](double x) {
                    double old = t[j];
                    t[j] = x;
                    double v = objective(t);
                    t[j] = old;
                    return v;
                };
                double x1 = lo + golden * (hi - lo), x2 = hi - golden * (hi - lo);
                double f1 = eval_at(x1), f2 = eval_at(x2);
                for (int it = 0; it < 48; ++it) {
                    if (f1 < f2) {
                        hi = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = lo + golden * (hi - lo);
                        f1 = eval_at(x1);
                    } else {
                        lo = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = hi - golden * (hi - lo);
                        f2 = eval_at(x2);
                    }
                }
                double xm = 0.5 * (lo + hi), fm = eval_at(xm);
                if (fm < cur) {
                    t[j] = xm;
                    cur = fm;
                }
            }
            if (before - cur < 1e-13) break;
            ++improving_sweeps;
        }
        if (cur < best) {
            best = cur;
            best_t = t;
        }
    }
    res.value = best;
    res.exact = false;
    res.warning = improving_sweeps == 0 && best > 1e-9;
    res.best_params = best_t;
    return res;
}

AcResult ac_membership(const Eigen::VectorXd& xi, const FamilySampler& sampler,
                       const std::vector<double>& radii, double aperture,
                       const DualMetric& metric) {
    AcResult out;
    if (metric.norm(xi) == 0.0) {
        out.verdict = AcVerdict::In;  // 0 belongs to every asymptotic cone
        out.detail = "zero direction";
        return out;
    }
    if (radii.empty()) {
        out.detail = "no radii";
        return out;
    }
    bool all_hit = true;
    bool largest_hit = false;
    double best_angle_tail = M_PI;
    const double r_max = radii.back();
    for (double R : radii) {
        auto pts = sampler(R);
        bool hit = false;
        for (const auto& p : pts) {
            double nrm = metric.norm(p);
            if (nrm < R) continue;
            double ang = metric.angle(p, xi);
            if (nrm >= r_max) best_angle_tail = std::min(best_angle_tail, ang);
            if (ang < aperture) {
                hit = true;
                if (nrm >= r_max) largest_hit = true;
            }
        }
        all_hit = all_hit && hit;
    }
    out.best_angle = best_angle_tail;
    if (all_hit) {
        out.verdict = AcVerdict::In;
        out.detail = "cone hit at every radius";
    } else if (!largest_hit) {
        out.verdict = AcVerdict::Out;
        out.detail = "no sample beyond the largest radius inside the cone";
    } else {
        out.verdict = AcVerdict::Inconclusive;
        out.detail = "tail reached but an intermediate radius failed";
    }
    return out;
}

FamilySampler chart_family_sampler(const std::vector<std::shared_ptr<OrbitChart>>& charts,
                                   const DualMetric& metric, int grid_per_axis) {
    return [charts, metric, grid_per_axis](double R) {
        std::vector<Eigen::VectorXd> pts;
        for (const auto& chart : charts) {
            const int d = chart->param_dim();
            if (d == 0) {
                pts.push_back(to_eigen(chart->base().covector));
                continue;
            }
            double half = std::max(1.0, R / 8);
            for (int attempt = 0; attempt < 48; ++attempt) {
                double max_norm = 0.0;
                std::vector<double> t(d, 0.0);
                std::vector<int> idx(d, 0);
                std::vector<Eigen::VectorXd> batch;
                while (true) {
                    for (int j = 0; j < d; ++j)
                        t[j] = grid_per_axis == 1
                                   ? 0.0
                                   : -half + 2.0 * half * idx[j] / (grid_per_axis - 1);
                    auto p = chart->point_d(t);
                    batch.push_back(p);
                    max_norm = std::max(max_norm, metric.norm(p));
                    int j = 0;
                    while (j < d && ++idx[j] == grid_per_axis) idx[j++] = 0;
                    if (j == d) break;
                }
                if (max_norm >= 1.2 * R || attempt == 47) {
                    for (auto& p : batch) pts.push_back(std::move(p));
                    break;
                }
                half *= 2.0;
            }
        }
        return pts;
    };
}

CaseLabel classify_case(const Functional& l, const std::vector<RatVec>& g0_basis) {
    const auto& g = *l.parent;
    const int n = g.dim();
    auto basis = span_basis(g0_basis);
    if ((int)basis.size() != n - 1)
        throw StructuralError("classify_case: g0 is not of codimension 1");
    subalgebra_from_basis(l.parent, basis);  // validates closure

    auto r_l = radical(l);

    const int m = (int)basis.size();
    RatMat B0(m, RatVec(m, Rat(0)));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            B0[a][b] = dot(l.covector, g.bracket_t<Rat>(basis[a], basis[b], Rat(0)));
    bool zero = true;
    for (auto& row : B0) zero = zero && vec_is_zero(row);
    std::vector<RatVec> r_l0;
    if (zero) {
        r_l0 = basis;
    } else {
        for (const auto& coords : null_space(B0)) {
            RatVec v(n, Rat(0));
            for (int a = 0; a < m; ++a) v = vec_add(v, vec_scale(coords[a], basis[a]));
            r_l0.push_back(v);
        }
        r_l0 = span_basis(r_l0);
    }

    CaseLabel out;
    out.dim_radical = (int)r_l.size();
    out.dim_radical_restricted = (int)r_l0.size();
    out.case1[0] = !span_contained(r_l, basis);
    out.case1[1] = span_contained(r_l0, r_l);
    out.case1[2] = out.case1[1] && (int)r_l.size() == (int)r_l0.size() + 1;
    out.case2[0] = span_contained(r_l, basis);
    out.case2[1] = span_contained(r_l, r_l0);
    out.case2[2] = out.case2[1] && (int)r_l0.size() == (int)r_l.size() + 1;

    bool all1 = out.case1[0] && out.case1[1] && out.case1[2];
    bool all2 = out.case2[0] && out.case2[1] && out.case2[2];
    bool any1 = out.case1[0] || out.case1[1] || out.case1[2];
    bool any2 = out.case2[0] || out.case2[1] || out.case2[2];
    if (all1 && !any2)
        out.tag = CaseTag::CaseI;
    else if (all2 && !any1)
        out.tag = CaseTag::CaseII;
    else {
        std::ostringstream os;
        os << "case classification inconsistent: case1=" << out.case1[0] << out.case1[1]
           << out.case1[2] << " case2=" << out.case2[0] << out.case2[1] << out.case2[2];
        throw StructuralError(os.str());
    }
    return out;
}

}  // namespace nilorbit
