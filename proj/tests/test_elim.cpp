#include <random>

#include <gtest/gtest.h>

#include <nvlaw/laws.hpp>

using namespace nvlaw;

namespace {

// Random univariate polynomial in t with coefficients in a, b.
MPoly random_tpoly(const Ctx& c, std::mt19937_64& rng, unsigned deg) {
    std::uniform_int_distribution<int> k(-4, 4);
    PolyBuilder B{c};
    MPoly p(c);
    for (unsigned i = 0; i <= deg; ++i) {
        MPoly coef = B.k(Rat(k(rng))) + Rat(k(rng)) * B.v("a") + Rat(k(rng)) * B.v("b");
        if (i == deg && coef.is_zero()) coef = B.k(Rat(1));
        p += coef * pow(B.v("t"), i);
    }
    return p;
}

std::vector<cplx> eval_param(const RatParam& c, const std::vector<VarId>& out, cplx t) {
    const Ctx& ctx = c.comps[0].num.ctx();
    std::vector<cplx> tv(ctx->size(), 0.0), pt(ctx->size(), 0.0);
    tv[c.params[0]] = t;
    for (std::size_t k = 0; k < out.size(); ++k)
        pt[out[k]] = CompiledPoly(c.comps[k].num)(tv) / CompiledPoly(c.comps[k].den)(tv);
    return pt;
}

RatParam poly_param(const Ctx& c, const std::string& x, const std::string& y) {
    PolyBuilder B{c};
    MPoly one = B.k(Rat(1));
    return {{c->var("t")}, {{B(x), one}, {B(y), one}}};
}

}  // namespace

TEST(Resultant, KnownValues) {
    auto c = make_ctx({"t", "a", "b"});
    PolyBuilder B{c};
    EXPECT_EQ(resultant(B("t^2 - a"), B("t - b"), c->var("t")), B("b^2 - a"));
    EXPECT_EQ(discriminant(B("a*t^2 + b*t + 1"), c->var("t")), B("b^2 - 4*a"));
    EXPECT_EQ(discriminant(B("t^3 + a*t + b"), c->var("t")), B("-4*a^3 - 27*b^2"));
}

TEST(Resultant, SwapSign) {
    auto c = make_ctx({"t", "a", "b"});
    std::mt19937_64 rng(21);
    VarId t = c->var("t");
    std::uniform_int_distribution<unsigned> d(1, 4);
    for (int i = 0; i < 30; ++i) {
        unsigned df = d(rng), dg = d(rng);
        MPoly f = random_tpoly(c, rng, df), g = random_tpoly(c, rng, dg);
        Rat s = (df * dg) % 2 ? Rat(-1) : Rat(1);
        EXPECT_EQ(resultant(f, g, t), s * resultant(g, f, t));
    }
}

TEST(Resultant, Multiplicative) {
    auto c = make_ctx({"t", "a", "b"});
    std::mt19937_64 rng(22);
    VarId t = c->var("t");
    std::uniform_int_distribution<unsigned> d(1, 2);
    for (int i = 0; i < 10; ++i) {
        MPoly f = random_tpoly(c, rng, d(rng)), g = random_tpoly(c, rng, d(rng)), h = random_tpoly(c, rng, d(rng));
        EXPECT_EQ(resultant(f, g * h, t), resultant(f, g, t) * resultant(f, h, t));
    }
}

TEST(Discriminant, RepeatedFactorVanishes) {
    auto c = make_ctx({"t", "a", "b"});
    std::mt19937_64 rng(23);
    PolyBuilder B{c};
    for (int i = 0; i < 10; ++i) {
        MPoly q = random_tpoly(c, rng, 2);
        MPoly f = pow(B("t - a"), 2) * q;
        EXPECT_TRUE(discriminant(f, c->var("t")).is_zero());
    }
}

TEST(Discriminant, ConstantPolynomialIsUndefined) {
    auto c = make_ctx({"t", "a"});
    EXPECT_THROW(discriminant(parse(c, "a"), c->var("t")), Error);
}

TEST(Implicitize, DualsVanishOnFreshDualPoints) {
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> curves{
        {"parabola", {"t", "t^2"}},
        {"cusp", {"t^2", "t^3"}},
        {"node", {"t^2 - 1", "t^3 - t"}},
        {"quartic", {"t^2 + t", "t^4 - 2"}},
    };
    for (auto& [name, xy] : curves) {
        auto c = make_ctx({"t", "u", "v"});
        RatParam d = dualize_parametric(poly_param(c, xy.first, xy.second));
        std::vector<VarId> out{c->var("u"), c->var("v")};
        ImplicitResult r = implicitize(d, 0, out);
        std::mt19937_64 rng(99);
        std::normal_distribution<double> nd;
        for (int i = 0; i < 20; ++i) {
            auto pt = eval_param(d, out, cplx(nd(rng), nd(rng)));
            EXPECT_LE(detail::rel_residual(r.poly, pt), 1e-9) << name;
        }
    }
}

TEST(Implicitize, DualOfXnVanishesOnDualSamples) {
    for (unsigned n = 2; n <= 5; ++n) {
        auto c = make_ctx({"w", "u", "v", "t"});
        DualCurve dc = dual_of_xn(c, n);
        EXPECT_LE(dc.info.max_sample_residual, 1e-9) << n;
        EXPECT_TRUE(is_homogeneous(dc.poly)) << n;
    }
}

TEST(Implicitize, BidualityOfX3) {
    auto c = make_ctx({"t", "x", "y"});
    RatParam x3 = xn_param(c, 3);
    RatParam dd = dualize_parametric(dualize_parametric(x3));
    std::vector<VarId> out{c->var("x"), c->var("y")};
    ImplicitResult r = implicitize(dd, 3, out);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 20; ++i) {
        auto pt = eval_param(x3, out, cplx(nd(rng), nd(rng)));
        EXPECT_LE(detail::rel_residual(r.poly, pt), 1e-9);
    }
}

TEST(Dualize, ConstantCurveIsDegenerate) {
    auto c = make_ctx({"t", "u", "v"});
    EXPECT_THROW(dualize_parametric(poly_param(c, "t", "2*t")), Error);
}

TEST(TangentHyperplane, ExactGradient) {
    auto c = make_ctx({"x", "y", "z"});
    MPoly F = parse(c, "x^2 + y^2 - z^2");
    std::vector<VarId> v{c->var("x"), c->var("y"), c->var("z")};
    auto g = tangent_hyperplane(F, v, std::vector<Rat>{Rat(3), Rat(4), Rat(5)});
    EXPECT_EQ(g, (std::vector<Rat>{Rat(6), Rat(8), Rat(-10)}));
    EXPECT_THROW(tangent_hyperplane(F, v, std::vector<Rat>{Rat(1), Rat(1), Rat(1)}), Error);
    EXPECT_THROW(tangent_hyperplane(F, v, std::vector<Rat>{Rat(0), Rat(0), Rat(0)}), Error);
}
