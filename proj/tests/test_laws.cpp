#include <random>

#include <gtest/gtest.h>

#include <nvlaw/numeric.hpp>

using namespace nvlaw;

namespace {

std::vector<LawPoly> catalog(const Ctx& c) {
    std::vector<LawPoly> out;
    for (unsigned n = 1; n <= 5; ++n) out.push_back(build_pn(c, n));
    out.push_back(build_buchstaber(c));
    out.push_back(build_buchstaber(c, {{"a1", Rat(1)}, {"a2", Rat(2)}, {"a3", Rat(3)}}));
    out.push_back(build_kontsevich(c));
    out.push_back(build_theta_law(c));
    out.push_back(build_coset_law(c, Family::Eqh3));
    out.push_back(build_coset_law(c, Family::Har4));
    out.push_back(build_coset_law(c, Family::Eqh6));
    out.push_back(build_nodal_b(c));
    out.push_back(build_nodal(c));
    out.push_back(build_cusp(c));
    out.push_back(build_chebyshev(c));
    out.push_back(build_hadamard(c));
    return out;
}

MPoly swap_xy(const MPoly& p) {
    const Ctx& c = p.ctx();
    return rename(p, {{c->var("x"), c->var("y")}, {c->var("y"), c->var("x")}});
}

}  // namespace

TEST(Pn, SmallCases) {
    auto c = make_ctx();
    PolyBuilder B{c};
    EXPECT_EQ(to_string(build_pn(c, 1).poly), "z + x + y");
    EXPECT_EQ(build_pn(c, 2).poly, pow(B("z - x - y"), 2) - B("4*x*y"));
}

// p_n vanishes at z = (v - u)^n for every u^n = x, v^n = (-1)^n y.
TEST(Pn, VanishesOnRootSums) {
    const double pi = std::acos(-1.0);
    for (unsigned n = 2; n <= 5; ++n) {
        auto c = make_ctx();
        MPoly p = build_pn(c, n).poly;
        CompiledPoly cp(p);
        std::mt19937_64 rng(n);
        std::normal_distribution<double> nd;
        for (int s = 0; s < 10; ++s) {
            cplx x(nd(rng), nd(rng)), y(nd(rng), nd(rng));
            cplx yy = (n % 2) ? -y : y;
            for (unsigned i = 0; i < n; ++i)
                for (unsigned k = 0; k < n; ++k) {
                    cplx u = std::pow(x, 1.0 / n) * std::polar(1.0, 2 * pi * i / n);
                    cplx v = std::pow(yy, 1.0 / n) * std::polar(1.0, 2 * pi * k / n);
                    std::vector<cplx> pt(c->size(), 0.0);
                    pt[c->var("z")] = std::pow(v - u, double(n));
                    pt[c->var("x")] = x;
                    pt[c->var("y")] = y;
                    EXPECT_LE(std::abs(cp(pt)) / cp.magnitude(pt), 1e-10) << "n=" << n;
                }
        }
    }
}

TEST(LawPoly, CatalogInvariants) {
    auto c = make_ctx();
    for (auto& L : catalog(c)) {
        SCOPED_TRACE(L.name());
        EXPECT_EQ(L.law.degree(L.result), L.valence);
        EXPECT_EQ(content_normalize(L.poly), L.poly);
        EXPECT_EQ(content_normalize(L.law), L.law);
        EXPECT_EQ(swap_xy(L.poly), L.poly);
        EXPECT_EQ(swap_xy(L.law), L.law);
    }
}

TEST(LawPoly, FiniteNeutralGivesRepeatedLinearFactor) {
    auto c = make_ctx();
    PolyBuilder B{c};
    for (auto& L : catalog(c)) {
        if (!L.neutral || L.neutral->inf) continue;
        SCOPED_TRACE(L.name());
        MPoly at = substitute_value(L.law, c->var("y"), L.neutral->value);
        EXPECT_EQ(content_normalize(at), content_normalize(pow(B("z - x"), L.valence)));
    }
}

TEST(LawPoly, BuchstaberNeutralExact) {
    auto c = make_ctx();
    PolyBuilder B{c};
    MPoly b = build_buchstaber(c).poly;
    EXPECT_EQ(substitute_value(b, c->var("y"), Rat(0)), pow(B("z - x"), 2));
}

TEST(LawPoly, KontsevichTransformIsInvolution) {
    auto c = make_ctx();
    PolyBuilder B{c};
    std::vector<VarId> xyz{B.id("x"), B.id("y"), B.id("z")};
    MPoly b = B(golden::buchstaber);
    MPoly d = reciprocal(b, xyz, 2, -1);
    EXPECT_EQ(content_normalize(reciprocal(d, xyz, 2, -1)), content_normalize(b));
    EXPECT_EQ(build_kontsevich(c).poly, content_normalize(d));
}

TEST(LawPoly, PnmAtTwoOperandsIsPn) {
    for (unsigned n = 1; n <= 4; ++n) {
        auto c = make_ctx();
        MPoly q = build_pnm(c, n, 2).poly;
        MPoly r = rename(q, {{c->var("x1"), c->var("x")}, {c->var("x2"), c->var("y")}});
        EXPECT_EQ(content_normalize(r), pn_poly(c, n)) << n;
    }
}

TEST(LawPoly, PnmBudget) {
    auto c = make_ctx();
    EXPECT_THROW(build_pnm(c, 5, 6), Error);
    EXPECT_EQ(build_pnm(c, 2, 3).valence, 4u);
}

TEST(LawPoly, ParameterValidation) {
    auto c = make_ctx();
    EXPECT_THROW(build_law(c, "bogus", {}), Error);
    EXPECT_THROW(build_law(c, "pn", {}), Error);
    EXPECT_THROW(build_law(c, "eqh3", {{"c", Rat(0)}}), Error);
    EXPECT_THROW(build_law(c, "har4", {{"b", Rat(0)}}), Error);
    EXPECT_THROW(build_law(c, "nodal", {{"alpha", Rat(2)}, {"beta", Rat(2)}}), Error);
    EXPECT_NO_THROW(build_law(c, "pn", {{"n", Rat(3)}}));
}

TEST(LawPoly, ThetaLeadingCoefficient) {
    auto c = make_ctx();
    auto t = build_theta(c);
    EXPECT_EQ(t.theta0, parse(c, "16*(x1-x2)^2"));
}

TEST(LawPoly, JsonCarriesConvention) {
    auto c = make_ctx();
    json j = law_json(build_coset_law(c, Family::Eqh3, {{"c", Rat(2)}}));
    EXPECT_EQ(j["valence"], 3);
    EXPECT_EQ(j["params"]["c"], "2");
    EXPECT_FALSE(j["convention"].get<std::string>().empty());
    EXPECT_EQ(manifest(c).size(), 16u);
}

TEST(HomLaw, CoefficientInvariants) {
    for (unsigned n = 1; n <= 5; ++n) {
        HomLaw h = build_homogeneous_monoid_law(n);
        PolyBuilder B{h.ctx};
        MPoly x0y0 = B("x0*y0");
        ASSERT_EQ(h.b.size(), n + 1);
        EXPECT_EQ(h.b[0], pow(x0y0, n));
        for (unsigned j = 0; j <= n; ++j) {
            EXPECT_TRUE(try_divide(h.b[j], pow(x0y0, n - j)).has_value()) << n << " " << j;
            EXPECT_TRUE(is_homogeneous(h.b[j]));
        }
        MPoly bn = hom_bn_printed(h.ctx, n);
        EXPECT_TRUE(h.b[n] == bn || h.b[n] == -bn) << n;
    }
}

TEST(Verifiers, DiscriminantIdentityEvenN) {
    for (unsigned n : {2u, 4u, 6u}) EXPECT_TRUE(verify_disc_identity(n).passed()) << n;
}

// The identity holds for odd n with the opposite overall sign.
TEST(Verifiers, DiscriminantIdentityOddNScalar) {
    for (unsigned n : {3u, 5u}) {
        Report r = verify_disc_identity(n);
        Rat expected = parse_rat(r.details["expected_scalar"].get<std::string>());
        Rat observed = parse_rat(r.details["observed_scalar"].get<std::string>());
        EXPECT_EQ(observed, -expected) << n;
    }
}

TEST(Verifiers, ShiftDualityPolynomialsAgree) {
    for (unsigned n = 2; n <= 5; ++n) {
        Report r = verify_shift_duality(n);
        EXPECT_EQ(r.details["dual"], r.details["expected"]) << n;
        EXPECT_EQ(r.details["degree"], 2 * (n - 1)) << n;
    }
}

TEST(Verifiers, FermatCubicDual) {
    Report r = verify_fermat_dual(3);
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
}

TEST(Verifiers, ThetaVieta) { EXPECT_TRUE(verify_theta_vieta().passed()); }

TEST(Verifiers, GoldenSymbolic) {
    Report r = verify_golden_symbolic();
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
}

TEST(Verifiers, DiscriminantFactorizationsWithoutEqh6) {
    Report r = verify_discriminant_factorizations(false);
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
}

TEST(Verifiers, HypersurfaceDuality) {
    for (auto [n, m] : {std::pair{2u, 3u}, {3u, 2u}, {3u, 3u}}) {
        Report r = verify_hypersurface_dual(n, m);
        EXPECT_TRUE(r.passed()) << n << "," << m;
    }
}
