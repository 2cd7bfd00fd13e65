#include <gtest/gtest.h>

#include <cmath>

#include "propscore/catalog.hpp"
#include "propscore/verify.hpp"

using namespace propscore;

TEST(Catalog, Names) {
  for (CatalogName name : kCatalogNames) {
    EXPECT_EQ(parse_catalog_name(to_string(name)), name);
    EXPECT_FALSE(catalog_notes(name).empty());
  }
  EXPECT_FALSE(parse_catalog_name("quadratic").has_value());
}

TEST(Catalog, LogRuleValues) {
  const ScoringRule r = catalog_rule(CatalogName::LogRule);
  EXPECT_EQ(r.provenance, Provenance::Catalog);
  EXPECT_NEAR(r.T(0.5).value(), -std::log(2.0), 1e-15);
  EXPECT_NEAR(r.F(0.5).value(), -std::log(2.0), 1e-15);
  EXPECT_TRUE(r.T(0.0).is_neg_inf());
  EXPECT_TRUE(r.F(1.0).is_neg_inf());
}

TEST(Catalog, BrierRuleValues) {
  const ScoringRule r = catalog_rule(CatalogName::BrierRule);
  EXPECT_EQ(r.T(1.0), ExtReal(0.0));
  EXPECT_EQ(r.F(1.0), ExtReal(-1.0));
  EXPECT_NEAR(r.T(0.3).value(), -0.49, 1e-15);
  EXPECT_NEAR(r.F(0.3).value(), -0.09, 1e-15);
}

TEST(Catalog, SphericalRuleValues) {
  const ScoringRule r = catalog_rule(CatalogName::SphericalRule);
  EXPECT_TRUE(r.T.has_opaque());
  EXPECT_NEAR(r.T(0.5).value(), 1.0 / std::sqrt(2.0) - 1.0, 1e-15);
  EXPECT_NEAR(r.F(0.5).value(), 1.0 / std::sqrt(2.0) - 1.0, 1e-15);
  EXPECT_EQ(r.T(1.0), ExtReal(0.0));
  EXPECT_EQ(r.F(0.0), ExtReal(0.0));
  EXPECT_EQ(r.T(0.0), ExtReal(-1.0));
  EXPECT_NEAR(spherical_truth(0.25), 0.25 / std::sqrt(0.625) - 1.0, 1e-15);
  EXPECT_NEAR(spherical_false(0.25), 0.75 / std::sqrt(0.625) - 1.0, 1e-15);
  EXPECT_NE(catalog_notes(CatalogName::SphericalRule).find("-1"), std::string::npos);
}

TEST(Catalog, ComponentsAreNonPositive) {
  for (CatalogName name : kCatalogNames) {
    const ScoringRule r = catalog_rule(name);
    for (double x : default_grid().points) {
      EXPECT_LE(r.T(x).value(), 0.0) << to_string(name) << " " << x;
      EXPECT_LE(r.F(x).value(), 0.0) << to_string(name) << " " << x;
    }
  }
}

TEST(Catalog, DerivationReproducesCatalogFalseScores) {
  const struct {
    CatalogName name;
    double C;
  } cases[] = {{CatalogName::LogRule, -2.0 * std::log(2.0)},
               {CatalogName::BrierRule, -0.5},
               {CatalogName::SphericalRule, std::sqrt(2.0) - 2.0}};
  for (const auto& k : cases) {
    const ScoringRule cat = catalog_rule(k.name);
    const ScoringRule derived = derive_false_score(cat.T, k.C);
    for (double x : default_grid().points) {
      if (x <= 0.0 || x >= 1.0) continue;
      EXPECT_NEAR(derived.F(x).value(), cat.F(x).value(), 1e-9) << to_string(k.name) << " " << x;
    }
    EXPECT_EQ(derived.F(1.0).is_neg_inf(), cat.F(1.0).is_neg_inf());
  }
}

TEST(Catalog, CommonShiftKeepsVerdictAndWitness) {
  const ScoreFn lnx = ScoreFn::single(LogForm{1.0, 0.0, 0.0}, kNegInf, 0.0);
  const ScoringRule bad{lnx, lnx};
  for (CatalogName name : kCatalogNames) {
    const ScoringRule base = catalog_rule(name);
    for (double k : {-5.0, -1.0, 0.0}) {
      const ScoringRule moved{shifted(base.T, k), shifted(base.F, k)};
      EXPECT_TRUE(propriety_check(moved, default_grid()).passed) << to_string(name) << " " << k;
    }
  }
  const ProprietyReport ref = propriety_check(bad, default_grid());
  for (double k : {-5.0, -1.0}) {
    const ProprietyReport r =
        propriety_check(ScoringRule{shifted(bad.T, k), shifted(bad.F, k)}, default_grid());
    EXPECT_FALSE(r.passed);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->p, ref.witness->p);
    EXPECT_EQ(r.witness->q, ref.witness->q);
  }
}

TEST(Catalog, OpaqueTags) {
  const auto t = opaque_from_tag("spherical_truth", Breakpoint::at(0.0), Breakpoint::at(1.0));
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(t->fn->tag, "spherical_truth");
  EXPECT_NEAR(t->fn->evaluate(0.3), spherical_truth(0.3), 0.0);
  const auto r =
      opaque_from_tag("reflect:spherical_truth", Breakpoint::at(0.0), Breakpoint::at(1.0));
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->fn->evaluate(0.3), spherical_truth(0.7), 1e-15);
  EXPECT_FALSE(opaque_from_tag("nope", Breakpoint::at(0.0), Breakpoint::at(1.0)).has_value());
}
