#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "pairedk/error.hpp"
#include "pairedk/factorization.hpp"
#include "pairedk/properties.hpp"
#include "pairedk/riesz.hpp"

using namespace pairedk;

namespace {

SamplerProfile with(ClassConstraint c) {
    SamplerProfile p;
    p.constraint = c;
    return p;
}

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::Indeterminate;
}

}  // namespace

TEST(Sampler, HinfSymbolHasPolesOutside) {
    const Rational f = sample_symbol(with(ClassConstraint::Hinf), 7);
    for (const Root& p : f.zpk().poles) EXPECT_GT(std::abs(p.value), 1.0);
    EXPECT_GE(f.zpk().zpow, 0);
    EXPECT_TRUE(membership(f, SpaceTag::Hinf));
}

TEST(Sampler, InvertibleSymbolAvoidsCircleBand) {
    const Rational f = sample_symbol(with(ClassConstraint::Invertible), 3);
    const Zpk z = f.zpk();
    for (const auto* roots : {&z.zeros, &z.poles})
        for (const Root& r : *roots) EXPECT_GT(std::abs(std::abs(r.value) - 1.0), 1e-9);
    EXPECT_NO_THROW((void)winding_index(f));
}

TEST(Sampler, InnerSymbolIsBlaschkeTimesMonomial) {
    const Rational f = sample_symbol(with(ClassConstraint::Inner), 11);
    EXPECT_TRUE(membership(f, SpaceTag::InnerPlus));
    for (int k = 0; k < 8; ++k) EXPECT_NEAR(std::abs(f(std::polar(1.0, 0.7 + k * std::numbers::pi / 4))), 1.0, 1e-12);
}

TEST(Sampler, SameSeedSameSymbol) {
    for (const ClassConstraint c : {ClassConstraint::None, ClassConstraint::HinfBar, ClassConstraint::Outer}) {
        const Rational a = sample_symbol(with(c), 19), b = sample_symbol(with(c), 19);
        for (const cplx z : {cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(-0.6, 0.8)}) EXPECT_EQ(a(z), b(z));
    }
}

TEST(Sampler, ConstraintsHoldAcrossSeeds) {
    for (std::uint64_t s = 0; s < 50; ++s) {
        EXPECT_TRUE(membership(sample_symbol(with(ClassConstraint::Hinf), s), SpaceTag::Hinf));
        EXPECT_TRUE(membership(sample_symbol(with(ClassConstraint::HinfBar), s), SpaceTag::HinfBar));
        EXPECT_TRUE(membership(sample_symbol(with(ClassConstraint::Inner), s), SpaceTag::InnerPlus));
        EXPECT_TRUE(membership(sample_symbol(with(ClassConstraint::Outer), s), SpaceTag::OuterPlus));
    }
}

TEST(Runner, TrialSeedsAreDistinct) {
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(trial_seed(42, i));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(trial_seed(42, 0), trial_seed(43, 0));
}

TEST(Runner, EveryPropertyHasAnAnchor) {
    EXPECT_EQ(property_ids().size(), 30u);
    for (const std::string& id : property_ids()) EXPECT_FALSE(property_anchor(id).empty()) << id;
}

TEST(Runner, UnknownOrEmptyIdsAreRejected) {
    EXPECT_EQ(code_of([] { run_property("P_NOPE", 1, 0, {}); }), ErrorCode::UnknownProperty);
    EXPECT_EQ(code_of([] { run_suite({}, 1, 0, {}); }), ErrorCode::UnknownProperty);
    EXPECT_EQ(code_of([] { run_suite({"P_ZERO", "P_NOPE"}, 1, 0, {}); }), ErrorCode::UnknownProperty);
    EXPECT_EQ(code_of([] { run_trial("", 0, {}); }), ErrorCode::UnknownProperty);
}

TEST(Runner, ReportShape) {
    const PropertyReport r = run_property("P_ZERO", 1, 0, {});
    EXPECT_EQ(r.passes, 1);
    EXPECT_EQ(r.passes + static_cast<int>(r.failures.size()), r.trials);
    const nlohmann::json j = to_json(r);
    for (const char* key : {"property", "anchor", "trials", "passes", "failures", "tolerances"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_FALSE(j.contains("wall_time"));
}

TEST(Runner, ReportsAreByteIdenticalAcrossThreadCounts) {
    RunConfig one, many;
    many.parallelism = 4;
    for (const char* id : {"P_PRODRES", "P_KEREQ", "P_RANK1"}) {
        const std::string a = to_json(run_property(id, 20, 42, one)).dump();
        const std::string b = to_json(run_property(id, 20, 42, many)).dump();
        const std::string c = to_json(run_property(id, 20, 42, many)).dump();
        EXPECT_EQ(a, b) << id;
        EXPECT_EQ(b, c) << id;
    }
}

TEST(Runner, FailuresReproduceFromTheirSeed) {
    RunConfig cfg;
    cfg.parallelism = 4;
    const PropertyReport r = run_property("P_NORM", 20, 42, cfg);
    for (const TrialFailure& f : r.failures) {
        const TrialOutcome again = run_trial("P_NORM", f.seed, cfg);
        EXPECT_FALSE(again.pass);
        EXPECT_EQ(again.inputs, f.inputs);
    }
}

TEST(Properties, CoburnDichotomyForPairedOperators) {
    RunConfig cfg;
    cfg.parallelism = 8;
    const PropertyReport r = run_property("P_COBURN_S", 500, 42, cfg);
    EXPECT_EQ(r.passes, 500);
}

TEST(Properties, RankOneCommutators) {
    RunConfig cfg;
    cfg.parallelism = 8;
    const PropertyReport r = run_property("P_RANK1", 100, 7, cfg);
    EXPECT_EQ(r.passes, 100);
}

TEST(Properties, ZeroOperatorOnlyForZeroSymbols) {
    const PropertyReport r = run_property("P_ZERO", 1, 0, {});
    EXPECT_EQ(r.passes, 1);
}

TEST(Properties, WholeRegistryPassesExceptNormLowerBound) {
    RunConfig cfg;
    cfg.parallelism = 8;
    std::vector<std::string> ids;
    for (const std::string& id : property_ids())
        if (id != "P_NORM") ids.push_back(id);
    const SuiteReport s = run_suite(ids, 40, 42, cfg);
    for (const PropertyReport& r : s.reports) EXPECT_EQ(r.passes, r.trials) << r.property << " " << to_json(r).dump();
    EXPECT_TRUE(s.all_pass);
}
