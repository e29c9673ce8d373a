#include "nilorbit/polarization.hpp"

namespace nilorbit {

std::vector<std::vector<RatVec>> malcev_flag(const NilpotentAlgebra& algebra) {
    const int n = algebra.dim();
    auto series = lower_central_series(algebra);
    // build an ordered basis walking the series from the deepest term up;
    // every prefix span sits between consecutive series terms, hence is an ideal
    std::vector<RatVec> ordered;
    for (int s = (int)series.size() - 1; s >= 0; --s) {
        // deepest series terms first; within a term, highest pivot first so
        // the ordering matches the Malcev convention (central directions lead)
        for (auto it = series[s].rbegin(); it != series[s].rend(); ++it)
            if (!in_span(ordered, *it)) ordered.push_back(*it);
    }
    for (int i = n - 1; i >= 0 && (int)ordered.size() < n; --i) {
        RatVec e(n, Rat(0));
        e[i] = 1;
        if (!in_span(ordered, e)) ordered.push_back(e);
    }
    std::vector<std::vector<RatVec>> flag;
    std::vector<RatVec> cur;
    for (const auto& v : ordered) {
        cur.push_back(v);
        flag.push_back(span_basis(cur));
    }
    return flag;
}

namespace {

void require_ideal_flag(const NilpotentAlgebra& g,
                        const std::vector<std::vector<RatVec>>& flag) {
    const int n = g.dim();
    if ((int)flag.size() != n) throw StructuralError("flag must have length dim(g)");
    for (int j = 0; j < n; ++j) {
        if ((int)flag[j].size() != j + 1)
            throw StructuralError("flag member " + std::to_string(j + 1) +
                                  " has wrong dimension");
        if (j > 0 && !span_contained(flag[j - 1], flag[j]))
            throw StructuralError("flag is not increasing");
        for (int i = 0; i < n; ++i) {
            RatVec e(n, Rat(0));
            e[i] = 1;
            for (const auto& v : flag[j]) {
                RatVec br = g.bracket_t<Rat>(e, v, Rat(0));
                if (!in_span(flag[j], br))
                    throw StructuralError("flag member " + std::to_string(j + 1) +
                                          " is not an ideal");
            }
        }
    }
}

}  // namespace

Polarization vergne_polarization(const Functional& l,
                                 const std::vector<std::vector<RatVec>>& flag) {
    const auto& g = *l.parent;
    const int n = g.dim();
    require_ideal_flag(g, flag);

    std::vector<RatVec> m_gen;
    for (int j = 0; j < n; ++j) {
        const auto& basis = flag[j];
        const int m = (int)basis.size();
        RatMat B(m, RatVec(m, Rat(0)));
        bool zero = true;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                B[a][b] = dot(l.covector, g.bracket_t<Rat>(basis[a], basis[b], Rat(0)));
                zero = zero && B[a][b] == 0;
            }
        if (zero) {
            for (const auto& v : basis) m_gen.push_back(v);
            continue;
        }
        for (const auto& coords : null_space(B)) {
            RatVec v(n, Rat(0));
            for (int a = 0; a < m; ++a) v = vec_add(v, vec_scale(coords[a], basis[a]));
            m_gen.push_back(v);
        }
    }
    Polarization out{span_basis(m_gen), l, flag};
    auto check = is_polarizing(out.m_basis, l);
    if (!check.ok())
        throw StructuralError("vergne construction failed its own invariants: " +
                              check.first_failure);
    return out;
}

Polarization vergne_polarization(const Functional& l) {
    return vergne_polarization(l, malcev_flag(*l.parent));
}

PolarizationCheck is_polarizing(const std::vector<RatVec>& m_basis, const Functional& l) {
    const auto& g = *l.parent;
    PolarizationCheck out;
    auto basis = span_basis(m_basis);

    out.subalgebra = true;
    for (size_t a = 0; a < basis.size() && out.subalgebra; ++a)
        for (size_t b = a + 1; b < basis.size(); ++b) {
            if (!in_span(basis, g.bracket_t<Rat>(basis[a], basis[b], Rat(0)))) {
                out.subalgebra = false;
                out.first_failure = "not a subalgebra";
                break;
            }
        }

    out.isotropic = true;
    for (size_t a = 0; a < basis.size() && out.isotropic; ++a)
        for (size_t b = a + 1; b < basis.size(); ++b) {
            if (dot(l.covector, g.bracket_t<Rat>(basis[a], basis[b], Rat(0))) != 0) {
                out.isotropic = false;
                if (out.first_failure.empty()) out.first_failure = "not isotropic";
                break;
            }
        }

    int expected = g.dim() - orbit_dimension(l) / 2;
    out.maximal = (int)basis.size() == expected;
    if (!out.maximal && out.first_failure.empty())
        out.first_failure = "dimension " + std::to_string(basis.size()) +
                            " != " + std::to_string(expected);
    return out;
}

}  // namespace nilorbit
