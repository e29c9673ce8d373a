#include "nilorbit/lie_core.hpp"

#include "nilorbit/util.hpp"

#include <mutex>
#include <sstream>

namespace nilorbit {

namespace {

RatMat identity_mat(int n) {
    RatMat m(n, RatVec(n, Rat(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

Rat det_rational(RatMat m) {
    const int n = (int)m.size();
    Rat det(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (m[r][c] != 0) { piv = r; break; }
        if (piv < 0) return Rat(0);
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        Rat inv = Rat(1) / m[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rat f = m[r][c] * inv;
            for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

// Bracket straight off the full table, with no antisymmetry assumption.
RatVec raw_bracket(const NilpotentAlgebra& g, const RatVec& u, const RatVec& v) {
    const int n = g.dim();
    RatVec out(n, Rat(0));
    for (int i = 0; i < n; ++i) {
        if (u[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
            if (v[j] == 0) continue;
            for (int k = 0; k < n; ++k) {
                const Rat& c = g.c(i, j, k);
                if (c != 0) out[k] += u[i] * v[j] * c;
            }
        }
    }
    return out;
}

std::vector<std::vector<RatVec>> series_or_stall(const NilpotentAlgebra& g, bool* stalled) {
    const int n = g.dim();
    std::vector<std::vector<RatVec>> series;
    std::vector<RatVec> cur;
    for (int i = 0; i < n; ++i) {
        RatVec e(n, Rat(0));
        e[i] = 1;
        cur.push_back(e);
    }
    series.push_back(cur);
    if (stalled) *stalled = false;
    for (int step = 0; step < n + 1; ++step) {
        std::vector<RatVec> prods;
        for (int i = 0; i < n; ++i) {
            RatVec e(n, Rat(0));
            e[i] = 1;
            for (const auto& y : series.back()) prods.push_back(raw_bracket(g, e, y));
        }
        auto next = span_basis(prods);
        if (next.size() == series.back().size() && !next.empty()) {
            if (stalled) *stalled = true;
            return series;
        }
        series.push_back(next);
        if (next.empty()) return series;
    }
    if (stalled) *stalled = true;
    return series;
}

}  // namespace

AlgebraPtr NilpotentAlgebra::create(int dim, const std::vector<BracketEntry>& entries,
                                    RatMat gram, std::string name) {
    auto g = std::shared_ptr<NilpotentAlgebra>(new NilpotentAlgebra());
    g->n_ = dim;
    g->name_ = std::move(name);
    g->table_.assign((size_t)dim * dim * dim, Rat(0));
    for (const auto& e : entries) {
        if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim)
            throw StructuralError("bracket entry index out of range");
        if (e.i == e.j) throw StructuralError("bracket entry with i == j");
        g->table_[((size_t)e.i * dim + e.j) * dim + e.k] += e.c;
        g->table_[((size_t)e.j * dim + e.i) * dim + e.k] -= e.c;
    }
    g->gram_ = gram.empty() ? identity_mat(dim) : std::move(gram);
    g->finalize();
    return g;
}

AlgebraPtr NilpotentAlgebra::create_full(int dim, std::vector<Rat> full_table, RatMat gram,
                                         std::string name) {
    if ((int)full_table.size() != dim * dim * dim)
        throw StructuralError("full structure table has wrong size");
    auto g = std::shared_ptr<NilpotentAlgebra>(new NilpotentAlgebra());
    g->n_ = dim;
    g->name_ = std::move(name);
    g->table_ = std::move(full_table);
    g->gram_ = gram.empty() ? identity_mat(dim) : std::move(gram);
    g->finalize();
    return g;
}

void NilpotentAlgebra::finalize() {
    entries_.clear();
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j)
            for (int k = 0; k < n_; ++k) {
                const Rat& v = c(i, j, k);
                if (v != 0) entries_.push_back({i, j, k, v});
            }
    bool stalled = false;
    auto series = series_or_stall(*this, &stalled);
    class_ = stalled ? -1 : (int)series.size() - 1;
}

RatMat NilpotentAlgebra::ad_matrix(const RatVec& v) const {
    RatMat m(n_, RatVec(n_, Rat(0)));
    for (int j = 0; j < n_; ++j) {
        RatVec ej(n_, Rat(0));
        ej[j] = 1;
        RatVec col = raw_bracket(*this, v, ej);
        for (int k = 0; k < n_; ++k) m[k][j] = col[k];
    }
    return m;
}

void require_same_parent(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.parent != b.parent)
        throw StructuralError("elements belong to different algebras");
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_parent(a, b);
    return {a.parent, vec_add(a.coords, b.coords)};
}
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_parent(a, b);
    return {a.parent, vec_sub(a.coords, b.coords)};
}
AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_parent(a, b);
    return {a.parent, a.parent->bracket_t<Rat>(a.coords, b.coords, Rat(0))};
}

AlgebraElement bch_multiply(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_parent(a, b);
    return {a.parent, a.parent->bch_t<Rat>(a.coords, b.coords, Rat(0))};
}

ValidationReport validate(const NilpotentAlgebra& g) {
    ValidationReport rep;
    const int n = g.dim();

    rep.antisymmetry_ok = true;
    for (int i = 0; i < n && rep.antisymmetry_ok; ++i)
        for (int j = 0; j < n && rep.antisymmetry_ok; ++j)
            for (int k = 0; k < n; ++k) {
                if (g.c(i, j, k) != -g.c(j, i, k)) {
                    rep.antisymmetry_ok = false;
                    std::ostringstream os;
                    os << "antisymmetry fails at c[" << i + 1 << "][" << j + 1 << "]["
                       << k + 1 << "]";
                    rep.failures.push_back(os.str());
                    break;
                }
            }

    rep.jacobi_ok = true;
    for (int i = 0; i < n && rep.jacobi_ok; ++i)
        for (int j = i + 1; j < n && rep.jacobi_ok; ++j)
            for (int k = j + 1; k < n; ++k) {
                RatVec ei(n, Rat(0)), ej(n, Rat(0)), ek(n, Rat(0));
                ei[i] = 1;
                ej[j] = 1;
                ek[k] = 1;
                RatVec s = raw_bracket(g, raw_bracket(g, ei, ej), ek);
                s = vec_add(s, raw_bracket(g, raw_bracket(g, ej, ek), ei));
                s = vec_add(s, raw_bracket(g, raw_bracket(g, ek, ei), ej));
                if (!vec_is_zero(s)) {
                    rep.jacobi_ok = false;
                    std::ostringstream os;
                    os << "Jacobi fails on (e" << i + 1 << ",e" << j + 1 << ",e" << k + 1
                       << ")";
                    rep.failures.push_back(os.str());
                    break;
                }
            }

    bool stalled = false;
    series_or_stall(g, &stalled);
    rep.nilpotent_ok = !stalled;
    if (stalled) rep.failures.push_back("lower central series does not reach 0");
    rep.nilpotency_class = g.nilpotency_class();

    rep.gram_ok = true;
    const RatMat& G = g.gram();
    for (int i = 0; i < n && rep.gram_ok; ++i)
        for (int j = 0; j < n; ++j)
            if (G[i][j] != G[j][i]) {
                rep.gram_ok = false;
                rep.failures.push_back("gram not symmetric");
                break;
            }
    for (int k = 1; k <= n && rep.gram_ok; ++k) {
        RatMat lead(k, RatVec(k));
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) lead[i][j] = G[i][j];
        if (det_rational(lead) <= 0) {
            rep.gram_ok = false;
            rep.failures.push_back("gram leading principal minor " + std::to_string(k) +
                                   " not positive");
        }
    }
    return rep;
}

std::vector<std::vector<RatVec>> lower_central_series(const NilpotentAlgebra& g) {
    bool stalled = false;
    auto series = series_or_stall(g, &stalled);
    if (stalled) throw StructuralError("not nilpotent");
    return series;
}

std::vector<RatVec> center(const NilpotentAlgebra& g) {
    const int n = g.dim();
    RatMat conditions;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            RatVec row(n, Rat(0));
            bool nonzero = false;
            for (int i = 0; i < n; ++i) {
                row[i] = g.c(i, j, k);
                nonzero = nonzero || row[i] != 0;
            }
            if (nonzero) conditions.push_back(std::move(row));
        }
    if (conditions.empty()) {
        std::vector<RatVec> all;
        for (int i = 0; i < n; ++i) {
            RatVec e(n, Rat(0));
            e[i] = 1;
            all.push_back(e);
        }
        return all;
    }
    return span_basis(null_space(conditions));
}

KirillovDecomposition kirillov_decomposition(const AlgebraPtr& algebra) {
    const auto& g = *algebra;
    const int n = g.dim();
    auto z = center(g);
    if (g.nonzero_brackets().empty() || z.size() != 1)
        throw StructuralError(
            "decomposition inapplicable; reduce via quotient_by_central first");
    RatVec Z = z[0];

    // Second center: {v : [g, v] in RZ}. Conditions: components of [e_j, v]
    // orthogonal to the Z line, i.e. [e_j, v] - (coeff) Z = 0 row-wise after
    // eliminating the Z direction.
    RatMat zmat{Z};
    auto zrref = zmat;
    std::vector<int> zpiv = rref(zrref);
    int zq = zpiv[0];  // pivot coordinate of Z
    RatMat conditions;
    for (int j = 0; j < n; ++j) {
        // row block for [e_j, v]: for each k, entry_{ik} = c(j, i, k) summed over v_i.
        for (int k = 0; k < n; ++k) {
            RatVec row(n, Rat(0));
            for (int i = 0; i < n; ++i) row[i] = g.c(j, i, k);
            // subtract the Z-component so vectors mapping into RZ pass
            RatVec zrow(n, Rat(0));
            for (int i = 0; i < n; ++i) zrow[i] = g.c(j, i, zq);
            Rat zk = Z[k] / Z[zq];
            row = vec_sub(row, vec_scale(zk, zrow));
            if (!vec_is_zero(row)) conditions.push_back(std::move(row));
        }
    }
    std::vector<RatVec> z2;
    if (conditions.empty()) {
        for (int i = 0; i < n; ++i) {
            RatVec e(n, Rat(0));
            e[i] = 1;
            z2.push_back(e);
        }
    } else {
        z2 = span_basis(null_space(conditions));
    }

    // Y: deepest non-central direction of the second center. Standard basis
    // vectors are scanned from the top index down (Malcev ordering puts the
    // central directions last), echelon generators as a fallback.
    RatVec Y;
    for (int i = n - 1; i >= 0 && Y.empty(); --i) {
        RatVec e(n, Rat(0));
        e[i] = 1;
        if (in_span(z2, e) && !in_span(z, e)) Y = e;
    }
    for (auto it = z2.rbegin(); it != z2.rend() && Y.empty(); ++it)
        if (!in_span(z, *it)) Y = *it;
    if (Y.empty()) throw StructuralError("kirillov decomposition: no Y found");

    // X: any solution of [X, Y] = Z.
    RatMat adY_neg(n, RatVec(n, Rat(0)));  // columns: [e_i, Y]
    for (int i = 0; i < n; ++i) {
        RatVec e(n, Rat(0));
        e[i] = 1;
        RatVec col = g.bracket_t<Rat>(e, Y, Rat(0));
        for (int k = 0; k < n; ++k) adY_neg[k][i] = col[k];
    }
    auto Xsol = solve(adY_neg, Z);
    if (!Xsol) throw StructuralError("kirillov decomposition: [X,Y]=Z unsolvable");
    RatVec X = *Xsol;

    // g0 = centralizer of Y = {v : [v, Y] = 0}.
    RatMat cent;
    for (int k = 0; k < n; ++k) {
        RatVec row(n, Rat(0));
        bool nz = false;
        for (int i = 0; i < n; ++i) {
            // coefficient of v_i in [v, Y]_k
            Rat s(0);
            for (int j = 0; j < n; ++j) s += g.c(i, j, k) * Y[j];
            row[i] = s;
            nz = nz || s != 0;
        }
        if (nz) cent.push_back(std::move(row));
    }
    auto g0 = cent.empty() ? std::vector<RatVec>{} : span_basis(null_space(cent));

    // Exact Gram-Schmidt (no normalization) over the given vectors.
    auto orthogonalize = [&](const std::vector<RatVec>& vecs) {
        std::vector<RatVec> ortho;
        for (const auto& b : vecs) {
            RatVec v = b;
            for (const auto& u : ortho) {
                Rat num = g.gram_pair(v, u);
                if (num != 0) v = vec_sub(v, vec_scale(num / g.gram_norm2(u), u));
            }
            if (!vec_is_zero(v)) ortho.push_back(v);
        }
        return ortho;
    };

    // Gram-orthogonalize X against g0 (projections stay in the centralizer,
    // so [X,Y]=Z survives).
    for (const auto& u : orthogonalize(g0)) {
        Rat num = g.gram_pair(X, u);
        if (num != 0) X = vec_sub(X, vec_scale(num / g.gram_norm2(u), u));
    }
    bool unit_exact = false;
    Rat norm2 = g.gram_norm2(X);
    if (auto r = rational_sqrt(norm2)) {
        X = vec_scale(Rat(1) / *r, X);
        Y = vec_scale(*r, Y);
        unit_exact = true;
    }

    // w: gram-orthogonal complement of span{Z, Y} inside g0, canonical
    // echelon form.
    auto zy = orthogonalize({Z, Y});
    std::vector<RatVec> w;
    for (const auto& b : g0) {
        RatVec v = b;
        for (const auto& u : zy) {
            Rat num = g.gram_pair(v, u);
            if (num != 0) v = vec_sub(v, vec_scale(num / g.gram_norm2(u), u));
        }
        if (!vec_is_zero(v)) w.push_back(v);
    }
    w = span_basis(w);

    KirillovDecomposition out{
        {algebra, Z}, {algebra, Y}, {algebra, X}, {}, {}, unit_exact};
    for (auto& v : w) out.w_basis.push_back({algebra, v});
    for (auto& v : g0) out.g0_basis.push_back({algebra, v});
    return out;
}

CentralQuotient quotient_by_central(const AlgebraPtr& algebra, const AlgebraElement& Z) {
    const auto& g = *algebra;
    const int n = g.dim();
    if (vec_is_zero(Z.coords)) throw StructuralError("quotient: Z is zero");
    if (!in_span(center(g), Z.coords)) throw StructuralError("quotient: Z not central");

    // W = gram-orthogonal complement of RZ.
    RatVec gz = mat_vec(g.gram(), Z.coords);
    auto w_basis = span_basis(null_space(RatMat{gz}));
    const int m = (int)w_basis.size();

    Rat zn = g.gram_norm2(Z.coords);
    auto project = [&](const RatVec& v) {
        Rat comp = g.gram_pair(v, Z.coords) / zn;
        return vec_sub(v, vec_scale(comp, Z.coords));
    };

    // Structure constants on W.
    std::vector<BracketEntry> entries;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            RatVec br = project(g.bracket_t<Rat>(w_basis[a], w_basis[b], Rat(0)));
            auto coords = coordinates_in(w_basis, br);
            if (!coords) throw StructuralError("quotient bracket left the complement");
            for (int k = 0; k < m; ++k)
                if ((*coords)[k] != 0) entries.push_back({a, b, k, (*coords)[k]});
        }
    RatMat qgram(m, RatVec(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) qgram[a][b] = g.gram_pair(w_basis[a], w_basis[b]);

    CentralQuotient out;
    out.quotient = NilpotentAlgebra::create(m, entries, qgram,
                                            g.name().empty() ? "" : g.name() + "/Z");
    out.w_basis = w_basis;
    out.projection.assign(m, RatVec(n, Rat(0)));
    for (int j = 0; j < n; ++j) {
        RatVec e(n, Rat(0));
        e[j] = 1;
        auto coords = coordinates_in(w_basis, project(e));
        for (int a = 0; a < m; ++a) out.projection[a][j] = (*coords)[a];
    }
    out.section.assign(n, RatVec(m, Rat(0)));
    for (int a = 0; a < m; ++a)
        for (int i = 0; i < n; ++i) out.section[i][a] = w_basis[a][i];
    return out;
}

SubalgebraRealization subalgebra_from_basis(const AlgebraPtr& algebra,
                                            const std::vector<RatVec>& vectors) {
    const auto& g = *algebra;
    auto basis = span_basis(vectors);
    const int m = (int)basis.size();
    std::vector<BracketEntry> entries;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b) {
            RatVec br = g.bracket_t<Rat>(basis[a], basis[b], Rat(0));
            auto coords = coordinates_in(basis, br);
            if (!coords) throw StructuralError("span is not closed under the bracket");
            for (int k = 0; k < m; ++k)
                if ((*coords)[k] != 0) entries.push_back({a, b, k, (*coords)[k]});
        }
    RatMat sgram(m, RatVec(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) sgram[a][b] = g.gram_pair(basis[a], basis[b]);
    return {NilpotentAlgebra::create(m, entries, sgram), basis};
}

Poly<double> poly_to_double(const Poly<Rat>& p) {
    Poly<double> out(p.nvars(), p.max_deg());
    for (auto& [k, c] : p.terms()) out.add_term(k, to_double(c));
    return out;
}

std::vector<std::vector<double>> ball_sample(const NilpotentAlgebra& g, double radius,
                                             int count) {
    const int n = g.dim();
    std::vector<std::vector<double>> pts;
    pts.push_back(std::vector<double>(n, 0.0));
    std::vector<std::vector<double>> Gd(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Gd[i][j] = to_double(g.gram()[i][j]);
    auto norm_g = [&](const std::vector<double>& x) {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += x[i] * Gd[i][j] * x[j];
        return std::sqrt(std::max(0.0, s));
    };
    for (int i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        double nn = norm_g(e);
        for (auto sign : {1.0, -1.0}) {
            auto p = e;
            for (auto& x : p) x *= sign * radius / nn;
            pts.push_back(p);
        }
    }
    uint64_t idx = 0;
    while ((int)pts.size() < count) {
        auto h = halton_point(idx++, n);
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = (2.0 * h[i] - 1.0) * radius;
        if (norm_g(x) <= radius) pts.push_back(x);
        if (idx > (uint64_t)count * 1000) break;
    }
    return pts;
}

namespace {

// All multi-indices with |a| <= order, each listed once (increments are only
// applied at or below the lowest nonzero variable, which makes paths unique).
std::vector<std::vector<int>> multi_indices(int n, int order) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    out.push_back(cur);
    std::vector<std::vector<int>> frontier{cur};
    for (int d = 1; d <= order; ++d) {
        std::vector<std::vector<int>> next;
        for (auto& m : frontier) {
            int first = 0;
            while (first < n && m[first] == 0) ++first;
            // only increment variables <= first nonzero to avoid duplicates
            for (int v = 0; v <= (first == n ? n - 1 : first); ++v) {
                auto mm = m;
                mm[v] += 1;
                next.push_back(mm);
                out.push_back(mm);
            }
        }
        frontier = std::move(next);
    }
    return out;
}

}  // namespace

double cn_measure(const NilpotentAlgebra& g, const std::vector<Poly<Rat>>& kappa,
                  const std::vector<std::vector<double>>& points, int order) {
    const int n = g.dim();
    std::vector<std::vector<double>> Gd(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Gd[i][j] = to_double(g.gram()[i][j]);

    double best = 0.0;
    for (const auto& alpha : multi_indices(n, order)) {
        std::vector<Poly<double>> d(n);
        for (int i = 0; i < n; ++i) {
            Poly<Rat> p = kappa[i];
            for (int v = 0; v < n; ++v)
                for (int rep = 0; rep < alpha[v]; ++rep) p = p.derivative(v);
            d[i] = poly_to_double(p);
        }
        for (const auto& x : points) {
            std::vector<double> val(n);
            for (int i = 0; i < n; ++i) val[i] = d[i](x);
            double s = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s += val[i] * Gd[i][j] * val[j];
            best = std::max(best, std::sqrt(std::max(0.0, s)));
        }
    }
    return best;
}

ChartTransition chart_transition(const AlgebraPtr& algebra, const RatVec& X0,
                                 double ball_radius, int max_order) {
    const auto& g = *algebra;
    const int n = g.dim();
    if (g.gram_norm2(X0) != 1)
        throw StructuralError("chart_transition: X0 must have exact unit gram norm");
    int cls = g.nilpotency_class();
    if (cls < 0 || cls > kMaxBchOrder)
        throw UnsupportedClassError("chart_transition: unsupported nilpotency class");

    const int deg = std::max(1, cls);
    Poly<Rat> zero(n, deg);
    std::vector<Poly<Rat>> W(n, zero);
    for (int i = 0; i < n; ++i) W[i] = Poly<Rat>::variable(n, deg, i);

    // Solve <bch(-t X0, W), X0>_G = 0 for t by degree-filtered fixed point.
    Poly<Rat> t = zero;
    for (int iter = 0; iter < deg; ++iter) {
        std::vector<Poly<Rat>> mtx0(n, zero);
        for (int i = 0; i < n; ++i) mtx0[i] = t.scaled(-X0[i]);
        auto v = g.bch_t<Poly<Rat>>(mtx0, W, zero);
        // defect = <v, X0>_G  (note <X0,X0> = 1)
        Poly<Rat> defect = zero;
        for (int i = 0; i < n; ++i) {
            Rat gi(0);
            for (int j = 0; j < n; ++j) gi += g.gram()[i][j] * X0[j];
            if (gi != 0) defect += v[i].scaled(gi);
        }
        t += defect;
    }
    std::vector<Poly<Rat>> mtx0(n, zero);
    for (int i = 0; i < n; ++i) mtx0[i] = t.scaled(-X0[i]);
    auto v = g.bch_t<Poly<Rat>>(mtx0, W, zero);

    ChartTransition out;
    out.X0 = X0;
    out.ball_radius = ball_radius;
    out.kappa.assign(n, zero);
    for (int i = 0; i < n; ++i) out.kappa[i] = t.scaled(X0[i]) + v[i];

    // Construction invariants: kappa(0) = 0 and D kappa(0) = Id.
    for (int i = 0; i < n; ++i) {
        if (!(out.kappa[i].coeff(0) == Rat(0)))
            throw StructuralError("chart_transition: kappa(0) != 0");
        for (int j = 0; j < n; ++j) {
            Rat lin = out.kappa[i].coeff(mono_var(j));
            if (lin != (i == j ? Rat(1) : Rat(0)))
                throw StructuralError("chart_transition: D kappa(0) != Id");
        }
    }

    auto pts = ball_sample(g, ball_radius, 160);
    for (int N = 0; N <= max_order; ++N)
        out.cn_estimates[N] = cn_measure(g, out.kappa, pts, N);
    return out;
}

namespace detail {

namespace {
void blocks(int remaining, std::vector<std::pair<int, int>>& cur,
            std::map<std::vector<uint8_t>, Rat>& acc) {
    if (remaining == 0) {
        if (cur.empty()) return;
        int m = 0;
        Rat fact(1);
        std::vector<uint8_t> word;
        for (auto& [p, q] : cur) {
            m += p + q;
            for (int i = 2; i <= p; ++i) fact *= i;
            for (int i = 2; i <= q; ++i) fact *= i;
            for (int i = 0; i < p; ++i) word.push_back(0);
            for (int i = 0; i < q; ++i) word.push_back(1);
        }
        int kk = (int)cur.size();
        Rat coeff = Rat(kk % 2 == 1 ? 1 : -1) / (Rat(kk) * Rat(m) * fact);
        // words whose innermost bracket repeats a letter vanish identically
        if (word.size() >= 2 && word[word.size() - 1] == word[word.size() - 2]) return;
        acc[word] += coeff;
        return;
    }
    for (int s = 1; s <= remaining; ++s)
        for (int p = 0; p <= s; ++p) {
            cur.push_back({p, s - p});
            blocks(remaining - s, cur, acc);
            cur.pop_back();
        }
}
}  // namespace

const std::vector<DynkinTerm>& dynkin_terms(int /*max_order*/) {
    static std::vector<DynkinTerm> table = [] {
        std::map<std::vector<uint8_t>, Rat> acc;
        for (int m = 1; m <= kMaxBchOrder; ++m) {
            std::vector<std::pair<int, int>> cur;
            blocks(m, cur, acc);
        }
        std::vector<DynkinTerm> out;
        for (auto& [word, coeff] : acc)
            if (coeff != 0) out.push_back({word, coeff});
        return out;
    }();
    return table;
}

}  // namespace detail

}  // namespace nilorbit
