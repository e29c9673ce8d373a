#include "nilorbit/fixtures.hpp"

#include <random>

namespace nilorbit::fixtures {

AlgebraPtr abelian(int dim) {
    return NilpotentAlgebra::create(dim, {}, {}, "r" + std::to_string(dim));
}

AlgebraPtr h3() {
    return NilpotentAlgebra::create(3, {{0, 1, 2, Rat(1)}}, {}, "h3");
}

AlgebraPtr h5() {
    return NilpotentAlgebra::create(5, {{0, 2, 4, Rat(1)}, {1, 3, 4, Rat(1)}}, {}, "h5");
}

AlgebraPtr n4() {
    return NilpotentAlgebra::create(4, {{0, 1, 2, Rat(1)}, {0, 2, 3, Rat(1)}}, {}, "n4");
}

AlgebraPtr twostep5() {
    return NilpotentAlgebra::create(5, {{0, 1, 3, Rat(1)}, {0, 2, 4, Rat(1)}}, {},
                                    "twostep5");
}

AlgebraPtr filiform(int dim) {
    std::vector<BracketEntry> entries;
    for (int i = 1; i + 1 < dim; ++i) entries.push_back({0, i, i + 1, Rat(1)});
    return NilpotentAlgebra::create(dim, entries, {}, "filiform" + std::to_string(dim));
}

AlgebraPtr free_twostep3() {
    return NilpotentAlgebra::create(
        6, {{0, 1, 3, Rat(1)}, {0, 2, 4, Rat(1)}, {1, 2, 5, Rat(1)}}, {}, "free2step3");
}

AlgebraPtr by_name(const std::string& name) {
    if (name == "r1") return abelian(1);
    if (name == "r2") return abelian(2);
    if (name == "r3") return abelian(3);
    if (name == "h3") return h3();
    if (name == "h5") return h5();
    if (name == "n4") return n4();
    if (name == "twostep5") return twostep5();
    if (name == "filiform5") return filiform(5);
    if (name == "filiform6") return filiform(6);
    if (name == "free2step3") return free_twostep3();
    throw StructuralError("unknown bundled algebra: " + name);
}

std::vector<std::string> names() {
    return {"r1", "r2", "r3", "h3", "h5", "n4", "twostep5"};
}

namespace {

// Unimodular rational matrix: product of random elementary row operations.
RatMat random_unimodular(std::mt19937_64& rng, int n) {
    RatMat m(n, RatVec(n, Rat(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    std::uniform_int_distribution<int> pick(0, n - 1), coef(-2, 2);
    int ops = 2 * n;
    for (int o = 0; o < ops; ++o) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        Rat c(coef(rng));
        if (c == 0) c = 1;
        for (int k = 0; k < n; ++k) m[i][k] += c * m[j][k];
    }
    return m;
}

RatMat invert(const RatMat& m) {
    const int n = (int)m.size();
    RatMat aug = m;
    for (int i = 0; i < n; ++i) {
        aug[i].resize(2 * n, Rat(0));
        aug[i][n + i] = 1;
    }
    rref(aug);
    RatMat inv(n, RatVec(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
    return inv;
}

}  // namespace

AlgebraPtr random_nilpotent(uint64_t seed, int max_dim) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    std::vector<AlgebraPtr> templates;
    for (int d = 1; d <= max_dim; ++d) templates.push_back(abelian(d));
    if (max_dim >= 3) templates.push_back(h3());
    if (max_dim >= 4) {
        templates.push_back(n4());
        // h3 + R
        templates.push_back(
            NilpotentAlgebra::create(4, {{0, 1, 2, Rat(1)}}, {}, "h3+r1"));
    }
    if (max_dim >= 5) {
        templates.push_back(h5());
        templates.push_back(twostep5());
        templates.push_back(filiform(5));
        templates.push_back(
            NilpotentAlgebra::create(5, {{0, 1, 2, Rat(1)}, {0, 2, 3, Rat(1)}}, {},
                                     "n4+r1"));
    }
    if (max_dim >= 6) {
        templates.push_back(free_twostep3());
        templates.push_back(filiform(6));
        templates.push_back(
            NilpotentAlgebra::create(6, {{0, 2, 4, Rat(1)}, {1, 3, 4, Rat(1)}}, {},
                                     "h5+r1"));
    }
    const auto& base = *templates[rng() % templates.size()];
    const int n = base.dim();
    RatMat M = random_unimodular(rng, n);   // new basis f_i = sum_a M[a][i] e_a
    RatMat Minv = invert(M);

    std::vector<Rat> table((size_t)n * n * n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RatVec fi(n, Rat(0)), fj(n, Rat(0));
            for (int a = 0; a < n; ++a) {
                fi[a] = M[a][i];
                fj[a] = M[a][j];
            }
            RatVec br = base.bracket_t<Rat>(fi, fj, Rat(0));
            RatVec coords = mat_vec(Minv, br);
            for (int k = 0; k < n; ++k) table[((size_t)i * n + j) * n + k] = coords[k];
        }
    return NilpotentAlgebra::create_full(n, std::move(table), {},
                                         base.name() + "~" + std::to_string(seed));
}

RatVec random_rat_vec(uint64_t seed, int dim, int mag, int den) {
    std::mt19937_64 rng(seed * 0x2545f4914f6cdd1dULL + 7);
    std::uniform_int_distribution<int> num(-mag, mag), d(1, den);
    RatVec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = Rat(num(rng), d(rng));
    return v;
}

}  // namespace nilorbit::fixtures
