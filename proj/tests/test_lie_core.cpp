#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "nilorbit/fixtures.hpp"
#include "nilorbit/lie_core.hpp"
#include "oracles.hpp"

using namespace nilorbit;
namespace fx = nilorbit::fixtures;

namespace {

AlgebraElement elem(const AlgebraPtr& g, std::initializer_list<long> xs) {
    return {g, rat_vec(xs)};
}

}  // namespace

TEST_CASE("bracket reads structure constants") {
    auto g = fx::h3();
    auto e1 = AlgebraElement::basis(g, 0), e2 = AlgebraElement::basis(g, 1);
    auto e3 = AlgebraElement::basis(g, 2);
    CHECK(bracket(e1, e2).coords == e3.coords);
    CHECK(vec_is_zero(bracket(e1, e1).coords));

    auto n4 = fx::n4();
    auto f1 = AlgebraElement::basis(n4, 0);
    auto f23 = elem(n4, {0, 1, 1, 0});
    // bilinearity over defining constants: [e1, e2+e3] = e3 + e4
    CHECK(bracket(f1, f23).coords == rat_vec({0, 0, 1, 1}));
}

TEST_CASE("bracket rejects mismatched parents") {
    auto a = AlgebraElement::basis(fx::h3(), 0);
    auto b = AlgebraElement::basis(fx::h3(), 1);  // distinct instance
    CHECK_THROWS_AS(bracket(a, b), StructuralError);
}

TEST_CASE("validate: bundled fixtures") {
    auto rep = validate(fx::h3());
    CHECK(rep.valid());
    CHECK(rep.nilpotency_class == 2);

    rep = validate(fx::n4());
    CHECK(rep.valid());
    CHECK(rep.nilpotency_class == 3);

    rep = validate(fx::abelian(3));
    CHECK(rep.valid());
    CHECK(rep.nilpotency_class == 1);
}

TEST_CASE("validate: antisymmetry violation reported") {
    // c[1][2][3] = 1 and c[2][1][3] = 1
    std::vector<Rat> table(27, Rat(0));
    table[(0 * 3 + 1) * 3 + 2] = 1;
    table[(1 * 3 + 0) * 3 + 2] = 1;
    auto bad = NilpotentAlgebra::create_full(3, table);
    auto rep = validate(bad);
    CHECK_FALSE(rep.antisymmetry_ok);
    CHECK_FALSE(rep.valid());
}

TEST_CASE("lower central series") {
    auto s = lower_central_series(*fx::h3());
    REQUIRE(s.size() == 3);
    CHECK(s[0].size() == 3);
    CHECK(s[1] == std::vector<RatVec>{rat_vec({0, 0, 1})});
    CHECK(s[2].empty());

    s = lower_central_series(*fx::abelian(3));
    REQUIRE(s.size() == 2);
    CHECK(s[1].empty());

    // frozen from the pairwise-bracket span oracle: [e1,e2]=e3, [e1,e3]=e4
    s = lower_central_series(*fx::n4());
    REQUIRE(s.size() == 4);
    CHECK(s[1] == std::vector<RatVec>{rat_vec({0, 0, 1, 0}), rat_vec({0, 0, 0, 1})});
    CHECK(s[2] == std::vector<RatVec>{rat_vec({0, 0, 0, 1})});
    CHECK(s[3].empty());
}

TEST_CASE("center") {
    CHECK(center(*fx::h3()) == std::vector<RatVec>{rat_vec({0, 0, 1})});
    CHECK(center(*fx::abelian(2)).size() == 2);
    CHECK(center(*fx::n4()) == std::vector<RatVec>{rat_vec({0, 0, 0, 1})});
    CHECK(center(*fx::twostep5()).size() == 2);
}

TEST_CASE("kirillov decomposition: h3 frozen from the centralizer oracle") {
    auto g = fx::h3();
    auto kd = kirillov_decomposition(g);
    CHECK(kd.Z.coords == rat_vec({0, 0, 1}));
    CHECK(kd.Y.coords == rat_vec({0, 1, 0}));
    CHECK(kd.X.coords == rat_vec({1, 0, 0}));
    CHECK(kd.w_basis.empty());
    REQUIRE(kd.g0_basis.size() == 2);
    CHECK(kd.x_unit_exact);
    // [X, Y] = Z exactly
    CHECK(bracket(kd.X, kd.Y).coords == kd.Z.coords);
}

TEST_CASE("kirillov decomposition: n4") {
    auto g = fx::n4();
    auto kd = kirillov_decomposition(g);
    CHECK(kd.Z.coords == rat_vec({0, 0, 0, 1}));
    CHECK(kd.Y.coords == rat_vec({0, 0, 1, 0}));
    CHECK(bracket(kd.X, kd.Y).coords == kd.Z.coords);
    REQUIRE(kd.g0_basis.size() == 3);
    // g0 is the centralizer of Y and an ideal; [g0, Y] = 0
    for (const auto& v : kd.g0_basis)
        CHECK(vec_is_zero(bracket(v, kd.Y).coords));
    // X orthogonal to g0 under the (identity) gram
    for (const auto& v : kd.g0_basis)
        CHECK(g->gram_pair(kd.X.coords, v.coords) == 0);
}

TEST_CASE("kirillov decomposition: rescaled gram keeps subspaces, X unit") {
    RatMat gram(3, RatVec(3, Rat(0)));
    for (int i = 0; i < 3; ++i) gram[i][i] = 4;  // scaled by a rational square
    auto g = NilpotentAlgebra::create(3, {{0, 1, 2, Rat(1)}}, gram, "h3s");
    auto kd = kirillov_decomposition(g);
    CHECK(kd.x_unit_exact);
    CHECK(g->gram_norm2(kd.X.coords) == 1);
    CHECK(kd.X.coords == RatVec{Rat(1, 2), Rat(0), Rat(0)});
    CHECK(bracket(kd.X, kd.Y).coords == kd.Z.coords);
}

TEST_CASE("kirillov decomposition rejects abelian and wide centers") {
    CHECK_THROWS_AS(kirillov_decomposition(fx::abelian(2)), StructuralError);
    CHECK_THROWS_AS(kirillov_decomposition(fx::twostep5()), StructuralError);
}

TEST_CASE("quotients by central directions") {
    // h3 / Re3 is abelian R^2
    auto q = quotient_by_central(fx::h3(), AlgebraElement::basis(fx::h3(), 2));
    CHECK(q.quotient->dim() == 2);
    CHECK(q.quotient->nonzero_brackets().empty());

    // n4 / Re4 is h3: recompute constants on the complement basis
    auto n4 = fx::n4();
    auto q2 = quotient_by_central(n4, AlgebraElement::basis(n4, 3));
    CHECK(q2.quotient->dim() == 3);
    auto rep = validate(q2.quotient);
    CHECK(rep.valid());
    CHECK(rep.nilpotency_class == 2);
    REQUIRE(q2.quotient->nonzero_brackets().size() == 1);
    auto e = q2.quotient->nonzero_brackets()[0];
    CHECK(e.i == 0);
    CHECK(e.j == 1);
    CHECK(e.k == 2);
    CHECK(e.c == 1);

    // abelian R^2 / Re2 -> abelian R^1
    auto r2 = fx::abelian(2);
    auto q3 = quotient_by_central(r2, AlgebraElement::basis(r2, 1));
    CHECK(q3.quotient->dim() == 1);

    auto h3 = fx::h3();
    CHECK_THROWS_AS(quotient_by_central(h3, AlgebraElement::basis(h3, 0)),
                    StructuralError);
}

TEST_CASE("composing central quotients matches the 2-dimensional quotient") {
    // twostep5 has center span{e4, e5}; quotient by e4 then (image of) e5
    // must be isomorphic to the quotient by span{e4,e5} realized directly.
    auto g = fx::twostep5();
    auto q1 = quotient_by_central(g, AlgebraElement::basis(g, 3));
    auto z2 = mat_vec(q1.projection, rat_vec({0, 0, 0, 0, 1}));
    auto q2 = quotient_by_central(q1.quotient, {q1.quotient, z2});
    CHECK(q2.quotient->dim() == 3);
    // both-step result: [f1, f2] = 0 remains only possible bracket source;
    // the double quotient of twostep5 is abelian R^3
    CHECK(q2.quotient->nonzero_brackets().empty());
}

TEST_CASE("bch: h3 closed form and matrix-exponential oracle") {
    auto g = fx::h3();
    for (uint64_t seed = 1; seed <= 25; ++seed) {
        RatVec a = fx::random_rat_vec(seed, 3), b = fx::random_rat_vec(seed + 100, 3);
        auto prod = bch_multiply({g, a}, {g, b});
        // closed form
        CHECK(prod.coords[0] == a[0] + b[0]);
        CHECK(prod.coords[1] == a[1] + b[1]);
        CHECK(prod.coords[2] == a[2] + b[2] + (a[0] * b[1] - a[1] * b[0]) / 2);
        // independent 3x3 unipotent matrix oracle
        auto expect = testing::heis_group_law({a[0], a[1], a[2]}, {b[0], b[1], b[2]});
        CHECK(prod.coords[0] == expect[0]);
        CHECK(prod.coords[1] == expect[1]);
        CHECK(prod.coords[2] == expect[2]);
    }
}

TEST_CASE("bch: identity and inverse laws") {
    for (const auto& name : fx::names()) {
        auto g = fx::by_name(name);
        auto zero = AlgebraElement::zero(g);
        for (uint64_t seed = 0; seed < 10; ++seed) {
            AlgebraElement a{g, fx::random_rat_vec(seed + 17, g->dim())};
            CHECK(bch_multiply(a, zero).coords == a.coords);
            CHECK(bch_multiply(zero, a).coords == a.coords);
            CHECK(vec_is_zero(bch_multiply(a, Rat(-1) * a).coords));
        }
    }
}

TEST_CASE("bch: exact associativity on bundled algebras and filiform class 5") {
    std::vector<AlgebraPtr> algebras;
    for (const auto& name : fx::names()) algebras.push_back(fx::by_name(name));
    algebras.push_back(fx::filiform(6));  // class 5
    for (const auto& g : algebras) {
        for (uint64_t seed = 0; seed < 8; ++seed) {
            AlgebraElement a{g, fx::random_rat_vec(3 * seed + 1, g->dim())};
            AlgebraElement b{g, fx::random_rat_vec(3 * seed + 2, g->dim())};
            AlgebraElement c{g, fx::random_rat_vec(3 * seed + 3, g->dim())};
            auto left = bch_multiply(bch_multiply(a, b), c);
            auto right = bch_multiply(a, bch_multiply(b, c));
            CHECK(left.coords == right.coords);
        }
    }
}

TEST_CASE("bch rejects unsupported class") {
    auto g = fx::filiform(8);  // class 7
    AlgebraElement a{g, fx::random_rat_vec(1, 8)}, b{g, fx::random_rat_vec(2, 8)};
    CHECK_THROWS_AS(bch_multiply(a, b), UnsupportedClassError);
}

TEST_CASE("property: validate passes on random basis-changed nilpotent algebras") {
    for (uint64_t seed = 0; seed < 100; ++seed) {
        auto g = fx::random_nilpotent(seed, 6);
        auto rep = validate(*g);
        CHECK(rep.antisymmetry_ok);
        CHECK(rep.jacobi_ok);
        CHECK(rep.nilpotent_ok);
    }
}

TEST_CASE("chart transition: abelian is the identity") {
    auto g = fx::abelian(3);
    RatVec x0 = rat_vec({1, 0, 0});
    auto ct = chart_transition(g, x0);
    for (int i = 0; i < 3; ++i) {
        CHECK(ct.kappa[i].coeff(mono_var(i)) == 1);
        CHECK(ct.kappa[i].terms().size() == 1);
    }
}

TEST_CASE("chart transition: h3 back-substitution, frozen") {
    // Solving exp(x e1 + y e2 + z e3) = exp(t e1) exp(v), v orthogonal to e1,
    // by hand gives t = x and kappa(x,y,z) = (x, y, z - xy/2).
    auto g = fx::h3();
    auto ct = chart_transition(g, rat_vec({1, 0, 0}));
    CHECK(ct.kappa[0].coeff(mono_var(0)) == 1);
    CHECK(ct.kappa[0].terms().size() == 1);
    CHECK(ct.kappa[1].coeff(mono_var(1)) == 1);
    CHECK(ct.kappa[1].terms().size() == 1);
    CHECK(ct.kappa[2].coeff(mono_var(2)) == 1);
    CHECK(ct.kappa[2].coeff(mono_mul(mono_var(0), mono_var(1))) == Rat(-1, 2));
    CHECK(ct.kappa[2].terms().size() == 2);

    // dual route: for rational samples, exp(t X0) exp(v) must reproduce X
    for (uint64_t seed = 0; seed < 10; ++seed) {
        RatVec X = fx::random_rat_vec(seed + 5, 3);
        RatVec k(3);
        for (int i = 0; i < 3; ++i) k[i] = ct.kappa[i](X);
        Rat t = k[0];  // gram-identity component along e1
        RatVec v = k;
        v[0] = 0;
        auto recon = bch_multiply({g, {t, Rat(0), Rat(0)}}, {g, v});
        CHECK(recon.coords == X);
    }
}

TEST_CASE("chart transition on every fixture: kappa(0)=0, Dkappa(0)=Id, measured") {
    for (const auto& name : fx::names()) {
        auto g = fx::by_name(name);
        RatVec x0(g->dim(), Rat(0));
        x0[0] = 1;
        auto ct = chart_transition(g, x0, 1.0, 2);
        CHECK(ct.cn_estimates.at(0) > 0);
        CHECK(ct.cn_estimates.at(2) >= ct.cn_estimates.at(1));
    }
}

TEST_CASE("chart transition requires exact unit direction") {
    auto g = fx::h3();
    CHECK_THROWS_AS(chart_transition(g, rat_vec({2, 0, 0})), StructuralError);
}

TEST_CASE("cn estimates shrink for subalgebras and quotients (chart lemma)") {
    // Subalgebra g0 of h3 through X0 = e2: kappa of the subalgebra is the
    // restriction, so its measured C^N on shared points cannot exceed the
    // parent's.
    auto h3 = fx::h3();
    auto sub = subalgebra_from_basis(h3, {rat_vec({0, 1, 0}), rat_vec({0, 0, 1})});
    auto ct_parent = chart_transition(h3, rat_vec({0, 1, 0}), 1.0, 2);
    RatVec sx0(2, Rat(0));
    sx0[0] = 1;  // e2 in subalgebra coordinates
    auto ct_sub = chart_transition(sub.sub, sx0, 1.0, 2);

    auto pts_sub = ball_sample(*sub.sub, 1.0, 120);
    // embed the subalgebra sample into parent coordinates
    std::vector<std::vector<double>> pts_parent;
    for (const auto& p : pts_sub) {
        std::vector<double> q(3, 0.0);
        for (size_t a = 0; a < sub.basis.size(); ++a)
            for (int i = 0; i < 3; ++i) q[i] += p[a] * to_double(sub.basis[a][i]);
        pts_parent.push_back(q);
    }
    for (int N = 0; N <= 2; ++N) {
        double child = cn_measure(*sub.sub, ct_sub.kappa, pts_sub, N);
        double parent = cn_measure(*h3, ct_parent.kappa, pts_parent, N);
        CHECK(child <= parent + 1e-9);
    }

    // Quotient n4 / Re4 vs n4 with matching base directions.
    auto n4 = fx::n4();
    auto q = quotient_by_central(n4, AlgebraElement::basis(n4, 3));
    RatVec qx0(3, Rat(0));
    qx0[0] = 1;
    auto ct_q = chart_transition(q.quotient, qx0, 1.0, 2);
    auto ct_n4 = chart_transition(n4, rat_vec({1, 0, 0}), 1.0, 2);
    auto pts_q = ball_sample(*q.quotient, 1.0, 120);
    std::vector<std::vector<double>> pts_n4;
    for (const auto& p : pts_q) {
        std::vector<double> up(4, 0.0);
        for (size_t a = 0; a < q.w_basis.size(); ++a)
            for (int i = 0; i < 4; ++i) up[i] += p[a] * to_double(q.w_basis[a][i]);
        pts_n4.push_back(up);
    }
    for (int N = 0; N <= 2; ++N) {
        double child = cn_measure(*q.quotient, ct_q.kappa, pts_q, N);
        double parent = cn_measure(*n4, ct_n4.kappa, pts_n4, N);
        CHECK(child <= parent + 1e-9);
    }
}

TEST_CASE("subalgebra realization rejects non-closed spans") {
    auto n4 = fx::n4();
    CHECK_THROWS_AS(
        subalgebra_from_basis(n4, {rat_vec({1, 0, 0, 0}), rat_vec({0, 1, 0, 0})}),
        StructuralError);
}
