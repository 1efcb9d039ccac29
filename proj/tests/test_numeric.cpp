#include <random>

#include <gtest/gtest.h>

#include <nvlaw/checks.hpp>

using namespace nvlaw;

namespace {

std::vector<cplx> expand_roots(const std::vector<cplx>& rs) {
    std::vector<cplx> c{1.0};
    for (cplx r : rs) {
        std::vector<cplx> n(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            n[i + 1] += c[i];
            n[i] -= r * c[i];
        }
        c = n;
    }
    return c;
}

ValueMultiset affine(const std::vector<cplx>& v) {
    ValueMultiset m;
    for (cplx z : v) m.push_back(ProjPoint::affine(z));
    return m;
}

LawPoly law(const std::string& fam, ParamMap pm = {}) { return build_law(make_ctx(), fam, pm); }

}  // namespace

TEST(ProjPoint, NormalizationAndChordal) {
    ProjPoint p(cplx(0, 2), cplx(0, 4));
    EXPECT_NEAR(std::abs(p.value() - cplx(0.5)), 0, 1e-15);
    EXPECT_NEAR(std::abs(p.z0), 1.0, 1e-15);
    EXPECT_TRUE(ProjPoint(3.0, 0.0).is_inf());
    EXPECT_THROW(ProjPoint(0.0, 0.0), Error);
    EXPECT_NEAR(chordal(ProjPoint::infinity(), ProjPoint::affine(0.0)), 1.0, 1e-15);
    EXPECT_LT(chordal(ProjPoint::infinity(), ProjPoint::affine(1e12)), 1e-11);
}

TEST(Multiset, DistanceUsesBestMatching) {
    auto a = affine({1.0, 2.0, 3.0});
    auto b = affine({3.0, 1.0, 2.0 + 1e-9});
    EXPECT_LT(multiset_distance(a, b), 2e-9);
    EXPECT_GT(multiset_distance(affine({1.0, 1.0}), affine({1.0, 2.0})), 0.1);
    EXPECT_THROW(multiset_distance(affine({1.0}), affine({1.0, 2.0})), Error);
}

TEST(Roots, SimpleAndMultiple) {
    std::vector<cplx> want{1.0, 1.0, 1.0, cplx(0, 2), -3.5};
    auto got = roots(expand_roots(want));
    ASSERT_EQ(got.size(), want.size());
    EXPECT_LT(multiset_distance(affine(got), affine(want)), 1e-9);
}

TEST(Roots, RandomPolynomials) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 30; ++k) {
        std::vector<cplx> want;
        for (int i = 0; i < 6; ++i) want.push_back(cplx(nd(rng), nd(rng)));
        EXPECT_LT(multiset_distance(affine(roots(expand_roots(want))), affine(want)), 1e-9);
    }
}

TEST(Roots, VanishingLeadingCoefficientsGiveInfinity) {
    auto m = proj_roots({-2.0, 1.0, 0.0, 0.0});
    ASSERT_EQ(m.size(), 3u);
    int inf = 0;
    for (auto& p : m) inf += p.is_inf();
    EXPECT_EQ(inf, 2);
}

TEST(Product, BuchstaberAtZeroIsNeutral) {
    LawPoly L = law("buchstaber", {{"a1", Rat(1)}, {"a2", Rat(2)}, {"a3", Rat(3)}});
    auto m = nval_product(L, ProjPoint::affine(cplx(0.3, -0.2)), ProjPoint::affine(0.0));
    EXPECT_LT(multiset_distance(m, affine({cplx(0.3, -0.2), cplx(0.3, -0.2)})), 1e-12);
}

TEST(Product, ChebyshevIsCosineAddition) {
    LawPoly L = law("chebyshev");
    double a = 0.7, b = 1.9;
    auto m = nval_product(L, ProjPoint::affine(std::cos(a)), ProjPoint::affine(std::cos(b)));
    EXPECT_LT(multiset_distance(m, affine({std::cos(a + b), std::cos(a - b)})), 1e-12);
}

TEST(Axioms, AssociativityEqh3) {
    Report r = check_associativity(law("eqh3", {{"c", Rat(2)}}), 100, 42, 1e-8);
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
    ASSERT_TRUE(r.max_error.has_value());
}

TEST(Axioms, PerturbedLawIsNotAssociative) {
    LawPoly L = law("buchstaber", {{"a1", Rat(1)}, {"a2", Rat(2)}, {"a3", Rat(3)}});
    EXPECT_FALSE(check_associativity(perturbed(L), 50, 3).passed());
}

TEST(Axioms, CatalogNeutralInverseAbsorbing) {
    CheckOptions o;
    Report r = run_check("neutral", o);
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
}

TEST(Cubic, JInvariantAndClassification) {
    EXPECT_EQ(j_invariant(Rat(0), Rat(0), Rat(5)), 0);
    EXPECT_EQ(j_invariant(Rat(0), Rat(-3), Rat(0)), 1728);
    // (x - 1)^2 (x + 2)
    auto c = classify_cubic(Rat(0), Rat(-3), Rat(2));
    EXPECT_EQ(c.kind, CurveKind::nodal);
    EXPECT_EQ(c.alpha, 1);
    EXPECT_EQ(c.beta, -2);
    // (x - 2)^3
    auto k = classify_cubic(Rat(-6), Rat(12), Rat(-8));
    EXPECT_EQ(k.kind, CurveKind::cuspidal);
    EXPECT_EQ(k.alpha, 2);
    EXPECT_THROW(j_invariant(Rat(0), Rat(-3), Rat(2)), Error);
    EXPECT_TRUE(verify_j_invariant().passed());
}

TEST(EllipticCurve, GroupAxiomsAndAutomorphismOrders) {
    Report r = verify_ec_group(0xB0C57ABE, 100, 1e-9);
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
}

TEST(Coset, ProductsAgreeAcrossCharts) {
    Report r = verify_coset_products();
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
}

TEST(Coset, PrintedLawsVanishOnCosetTriples) {
    for (auto f : {Family::Eqh3, Family::Har4, Family::Eqh6}) {
        Report r = verify_coset_vanishing(f, 7, 40, 1e-8);
        EXPECT_TRUE(r.passed()) << r.to_json().dump();
    }
}

TEST(Doubling, BuchstaberKleinFour) {
    IteratingResult it = find_iterating(law("buchstaber", {{"a1", Rat(0)}, {"a2", Rat(1)}, {"a3", Rat(1)}}));
    EXPECT_EQ(it.group_type, "Z2xZ2");
    EXPECT_EQ(it.elements.size(), 4u);
}

TEST(Doubling, Eqh3CyclicOfOrderThree) {
    IteratingResult it = find_iterating(law("eqh3", {{"c", Rat(2)}}));
    EXPECT_EQ(it.group_type, "Z3");
    ASSERT_EQ(it.elements.size(), 3u);
    ValueMultiset want = affine({0.0, 1 / std::sqrt(2.0), -1 / std::sqrt(2.0)});
    EXPECT_LT(multiset_distance(it.elements, want), 1e-9);
}

TEST(Doubling, Har4NotClosed) {
    IteratingResult it = find_iterating(law("har4", {{"b", Rat(2)}}));
    EXPECT_FALSE(it.closed);
    EXPECT_LT(multiset_distance(it.elements, affine({0.0, -0.5})), 1e-9);
}

TEST(Doubling, ChebyshevPlusMinusOne) {
    IteratingResult it = find_iterating(law("chebyshev"));
    EXPECT_EQ(it.group_type, "Z2");
    EXPECT_LT(multiset_distance(it.elements, affine({1.0, -1.0})), 1e-9);
}

TEST(Doubling, SingularCubicsIncludeInfinity) {
    IteratingResult node = find_iterating(law("nodal", {{"alpha", Rat(1)}, {"beta", Rat(-2)}}));
    EXPECT_TRUE(node.infinity_iterating);
    EXPECT_LT(multiset_distance(node.elements, affine({1.0, -2.0})), 1e-9);
    IteratingResult cusp = find_iterating(law("cusp", {{"alpha", Rat(2)}}));
    EXPECT_TRUE(cusp.infinity_iterating);
    EXPECT_LT(multiset_distance(cusp.elements, affine({2.0})), 1e-9);
}

TEST(Chebyshev, ProductOfPolynomials) {
    Report r = chebyshev_check(8, 0xB0C57ABE, 1e-9);
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
}

TEST(Monoid, AbsorbingAndIsomorphisms) {
    EXPECT_TRUE(verify_monoid_behavior().passed());
    for (auto k : {IsoKind::NodalToBa, IsoKind::CuspToM2, IsoKind::ZplusToG2, IsoKind::MultShiftToBa}) {
        Report r = monoid_isomorphism_check(k);
        EXPECT_TRUE(r.passed()) << iso_name(k) << " " << r.to_json().dump();
    }
}

TEST(Eqh3, RecoveredByInterpolation) {
    Report r = verify_eqh3_recovery();
    EXPECT_TRUE(r.passed()) << r.to_json().dump();
}

TEST(Reports, DeterministicForFixedSeed) {
    CheckOptions o;
    o.seed = 7;
    json a = run_check("coset", o).to_json(), b = run_check("coset", o).to_json();
    a.erase("runtime_ms");
    b.erase("runtime_ms");
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Reports, SuiteOrderedByCheckId) {
    CheckOptions o;
    o.jobs = 4;
    auto rs = run_suite({"theta-vieta", "coset", "ec-group", "j-invariant"}, o);
    std::vector<std::string> ids;
    for (auto& r : rs) ids.push_back(r.check);
    EXPECT_EQ(ids, (std::vector<std::string>{"coset", "ec-group", "j-invariant", "theta-vieta"}));
}
