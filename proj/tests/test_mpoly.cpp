#include <random>

#include <gtest/gtest.h>

#include <nvlaw/sympoly.hpp>

using namespace nvlaw;

namespace {

MPoly random_poly(const Ctx& c, std::mt19937_64& rng, unsigned max_deg = 3, int terms = 6) {
    std::uniform_int_distribution<int> coef(-9, 9), den(1, 4), deg(0, static_cast<int>(max_deg));
    MPoly p(c);
    for (int i = 0; i < terms; ++i) {
        std::vector<std::pair<VarId, unsigned>> pw;
        for (VarId v = 0; v < 3; ++v) pw.push_back({v, static_cast<unsigned>(deg(rng))});
        p += MPoly::monomial(c, Rat(coef(rng)) / Rat(den(rng)), pw);
    }
    return p;
}

}  // namespace

TEST(Rat, StaysCanonical) {
    Rat r = parse_rat("6/-4");
    EXPECT_EQ(r.get_num(), -3);
    EXPECT_EQ(r.get_den(), 2);
    EXPECT_EQ(parse_rat("0/7"), 0);
    EXPECT_EQ(parse_rat("-12"), Rat(-12));
}

TEST(Rat, RejectsGarbage) {
    EXPECT_THROW(parse_rat("1/0"), Error);
    EXPECT_THROW(parse_rat("abc"), Error);
}

TEST(Registry, AppendOnlyAndUnique) {
    auto c = make_ctx();
    EXPECT_EQ(c->var("z"), 0u);
    EXPECT_EQ(c->var("x"), 1u);
    EXPECT_EQ(c->var("y"), 2u);
    VarId t = c->var("t");
    EXPECT_EQ(t, 3u);
    EXPECT_EQ(c->var("t"), t);
    EXPECT_EQ(c->size(), 4u);
}

TEST(MPoly, ZeroIsEmpty) {
    auto c = make_ctx();
    PolyBuilder B{c};
    MPoly p = B("x*y + 3") - B("x*y + 3");
    EXPECT_TRUE(p.is_zero());
    EXPECT_EQ(p.nterms(), 0u);
    EXPECT_EQ(to_string(p), "0");
}

TEST(MPoly, PrintsInGradedLexOrder) {
    auto c = make_ctx();
    PolyBuilder B{c};
    EXPECT_EQ(to_string(B("y^2 + x^2 + z^2 - 2*x*y - 2*x*z - 2*y*z")),
              "z^2 - 2*x*z - 2*y*z + x^2 - 2*x*y + y^2");
    EXPECT_EQ(to_string(B("1 + y + x + z")), "z + x + y + 1");
}

TEST(MPoly, ParsePrintRoundTrip) {
    auto c = make_ctx();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 30; ++i) {
        MPoly p = random_poly(c, rng);
        EXPECT_EQ(parse(c, to_string(p)), p);
    }
}

TEST(MPoly, ParseErrors) {
    auto c = make_ctx();
    EXPECT_THROW(parse(c, "x +"), Error);
    EXPECT_THROW(parse(c, "x^-1"), Error);
    EXPECT_THROW(parse(c, "(x"), Error);
}

TEST(MPoly, RingAxiomsOnRandomPolys) {
    auto c = make_ctx();
    std::mt19937_64 rng(0xB0C57ABE);
    for (int i = 0; i < 50; ++i) {
        MPoly p = random_poly(c, rng), q = random_poly(c, rng), r = random_poly(c, rng);
        EXPECT_EQ((p + q) - q, p);
        EXPECT_EQ(p * q, q * p);
        EXPECT_EQ(p * (q + r), p * q + p * r);
    }
}

TEST(MPoly, SubstitutionCommutesWithRingOps) {
    auto c = make_ctx();
    std::mt19937_64 rng(7);
    PolyBuilder B{c};
    for (int i = 0; i < 50; ++i) {
        MPoly p = random_poly(c, rng, 2), q = random_poly(c, rng, 2);
        std::map<VarId, MPoly> s{{c->var("x"), random_poly(c, rng, 1, 3)}, {c->var("z"), B("y - 2")}};
        EXPECT_EQ(compose(p + q, s), compose(p, s) + compose(q, s));
        EXPECT_EQ(compose(p * q, s), compose(p, s) * compose(q, s));
    }
}

TEST(MPoly, ExactDivision) {
    auto c = make_ctx();
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        MPoly p = random_poly(c, rng), q = random_poly(c, rng);
        if (q.is_zero()) continue;
        EXPECT_EQ(exact_divide(p * q, q), p);
    }
    PolyBuilder B{c};
    EXPECT_FALSE(try_divide(B("x^2 + 1"), B("x + 1")).has_value());
}

TEST(MPoly, ContentNormalizeIdempotentAndScaleInvariant) {
    auto c = make_ctx();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        MPoly p = random_poly(c, rng);
        if (p.is_zero()) continue;
        MPoly n = content_normalize(p);
        EXPECT_EQ(content_normalize(n), n);
        EXPECT_EQ(content_normalize(Rat(-7) / Rat(3) * p), n);
        EXPECT_GT(n.leading_coef(), 0);
    }
}

// Arithmetic across polynomials created before and after the registry grew.
TEST(MPoly, MixedStrideAfterRegistryGrowth) {
    auto c = make_ctx();
    PolyBuilder B{c};
    MPoly old = B("x^2*y + z");
    MPoly grown = B("t*x + w^3");
    EXPECT_LT(old.stride(), grown.stride());
    MPoly s = old + grown;
    EXPECT_EQ(s - grown, old);
    MPoly prod = old * grown;
    EXPECT_EQ(exact_divide(prod, old), grown);
    EXPECT_EQ(exact_divide(prod, grown), old);
    EXPECT_EQ(derivative(prod, c->var("t")), old * B("x"));
    auto cs = coeffs_in(prod, c->var("w"));
    ASSERT_EQ(cs.size(), 4u);
    EXPECT_EQ(cs[3], old);
    MPoly fresh(c);
    EXPECT_TRUE((fresh + old) == old);
}

TEST(MPoly, EmbedMatchesNames) {
    auto a = make_ctx({"x", "y"});
    auto b = make_ctx({"z", "x", "y"});
    MPoly p = parse(a, "x^2 - 3*y");
    MPoly q = embed(p, b);
    EXPECT_EQ(q, parse(b, "x^2 - 3*y"));
}

TEST(MPoly, ExactEvaluation) {
    auto c = make_ctx();
    PolyBuilder B{c};
    MPoly p = B("z^2 - 2*x*z + 1/2*y");
    EXPECT_EQ(eval_exact(p, {{c->var("z"), Rat(3)}, {c->var("x"), Rat(1)}, {c->var("y"), Rat(1) / Rat(3)}}),
              Rat(3) + Rat(1) / Rat(6));
}

TEST(SymPoly3, ElementaryBasisRoundTrip) {
    auto c = make_ctx();
    std::array<VarId, 3> v{c->var("x"), c->var("y"), c->var("z")};
    std::mt19937_64 rng(0xE1);
    std::uniform_int_distribution<int> coef(-5, 5);
    for (int i = 0; i < 30; ++i) {
        SymPoly3 s;
        s.ctx = c;
        s.vars = v;
        for (int a = 0; a <= 8; ++a)
            for (int b = 0; a + 2 * b <= 8; ++b)
                for (int d = 0; a + 2 * b + 3 * d <= 8; ++d) {
                    int k = coef(rng);
                    if (k && rng() % 3 == 0) s.coeffs[{a, b, d}] = MPoly::constant(c, Rat(k));
                }
        MPoly e = s.expand();
        SymPoly3 back = to_elementary_basis(e, v);
        EXPECT_EQ(back.expand(), e);
        EXPECT_TRUE(back == s);
    }
}

TEST(SymPoly3, RejectsNonSymmetric) {
    auto c = make_ctx();
    EXPECT_THROW(to_elementary_basis(parse(c, "x^2 + y")), Error);
}

TEST(SymPoly3, PrintsBuchstaberAtZero) {
    auto c = make_ctx();
    MPoly p = parse(c, "x^2 + y^2 + z^2 - 2*x*y - 2*y*z - 2*x*z");
    EXPECT_EQ(to_string(to_elementary_basis(p)), "e1^2 - 4*e2");
}
