#include <gtest/gtest.h>

#include <cmath>

#include <json.hpp>

#include "gnpb/engine.hpp"
#include "gnpb/protocols.hpp"

using namespace gnpb;

namespace {

VerificationReport run(const NamedProtocol& p) { return verify_protocol(p.root, builtin_basis(p.basis)); }

bool mentions(const VerificationReport& r, const std::string& needle) {
  for (const auto& f : r.failures)
    if (f.find(needle) != std::string::npos) return true;
  return false;
}

// A deliberately small basis to drive single checks.
OrthoProductBasis tiny() {
  return OrthoProductBasis("tiny", {{"A", 2}, {"B", 2}},
                           {{"00", {local_ket(2, "0"), local_ket(2, "0")}},
                            {"01", {local_ket(2, "0"), local_ket(2, "1")}},
                            {"1+", {local_ket(2, "1"), local_ket(2, "eta+")}},
                            {"1-", {local_ket(2, "1"), local_ket(2, "eta-")}}});
}

}  // namespace

TEST(Engine, AllBuiltinsPass) {
  for (const auto& n : builtin_protocol_names()) {
    const auto r = run(builtin_protocol(n));
    EXPECT_TRUE(r.passed) << n << ": " << (r.failures.empty() ? "" : r.failures.front());
    for (const auto& [label, p] : r.identification) EXPECT_NEAR(p, 1.0, 1e-9) << n << " " << label;
  }
}

TEST(Engine, LedgerValues) {
  const double log3 = std::log2(3.0);
  EXPECT_NEAR(run(prop5_protocol(Prop5Target::II_33)).ledger.total_ebits, log3 + 1, 1e-9);
  EXPECT_NEAR(run(prop5_protocol(Prop5Target::IIb_33)).ledger.total_ebits, log3 + 1, 1e-9);
  const auto p6 = run(prop6_protocol()).ledger;
  EXPECT_NEAR(p6.total_ebits, 2.0, 1e-9);
  EXPECT_LT(p6.total_ebits, p6.baseline_ebits);
  EXPECT_NEAR(p6.baseline_ebits, 2 * log3, 1e-12);
  const auto p7 = run(prop7_protocol()).ledger;
  EXPECT_NEAR(p7.expected("EPR", {"B", "C"}), 8.0 / 27, 1e-9);
  EXPECT_NEAR(p7.total_ebits, 2 + 8.0 / 27, 1e-9);
  const auto p8 = run(prop8_protocol()).ledger;
  EXPECT_NEAR(p8.ghz_expected, 1.0, 1e-9);
  EXPECT_NEAR(p8.expected("EPR", {"B", "C"}), 1.0 / 8, 1e-9);
  EXPECT_NEAR(p8.ghz_bound_ebits, 2.0, 1e-12);
  EXPECT_NEAR(p8.baseline_ebits, 4.0, 1e-12);
}

TEST(Engine, Remark2ConsumptionIsMassReachingK3) {
  // 24 of the 64 states are settled by K1/K2 (8 + 16 labels); the B-C pair is
  // spent on the remaining probability mass.
  const auto p = remark2_protocol();
  const auto l = run(p).ledger;
  EXPECT_NEAR(l.expected("EPR", {"A", "B"}), 1.0, 1e-9);
  EXPECT_NEAR(l.expected("EPR", {"B", "C"}), (64.0 - 8 - 16) / 64, 1e-9);
}

TEST(Engine, BasisI43UsesOneCutPerBranch) {
  const auto r = run(basis_I_43_protocol());
  ASSERT_TRUE(r.passed);
  for (const auto& b : r.branches) EXPECT_LE(b.cuts.size(), 1u) << b.path;
  EXPECT_TRUE(basis_I_43_protocol().upper_bound);
  EXPECT_NEAR(r.ledger.total_ebits, 2 * (9.0 / 64) * std::log2(3.0), 1e-9);
}

TEST(Engine, Prop6FailsOnWrongBasis) {
  const auto r = verify_protocol(prop6_protocol().root, builtin_basis("B_IIb_33"));
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.failures.empty());
  EXPECT_THROW(resource_accounting(prop6_protocol().root, builtin_basis("B_IIb_33")), VerificationFailed);
}

TEST(Engine, LocalityViolation) {
  const auto root = measure("A", {{"X", sum({P({on("B", {0})})})}, {"Y", rest()}}, {{"X", fail()}, {"Y", fail()}});
  const auto r = verify_protocol(root, tiny());
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(mentions(r, "locality"));
}

TEST(Engine, IncompleteEffects) {
  const auto root = measure("A", {{"X", sum({P({on("A", {0})})})}}, {{"X", distinguishable({"00", "01"})}});
  const auto r = verify_protocol(root, tiny());
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(mentions(r, "completeness"));
}

TEST(Engine, NonProjectorEffect) {
  const auto root = measure("A",
                            {{"X", sum({P({on("A", std::vector<KetSpec>{twist(0, 1, 1), ket(0)})})})}, {"Y", rest()}},
                            {{"X", fail()}, {"Y", fail()}});
  const auto r = verify_protocol(root, tiny());
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(mentions(r, "projector"));
}

TEST(Engine, LeafRules) {
  const auto good = measure("A", {{"X", sum({P({on("A", {0})})})}, {"Y", rest()}},
                            {{"X", distinguishable({"00", "01"})}, {"Y", distinguishable({"1+", "1-"})}});
  EXPECT_TRUE(verify_protocol(good, tiny()).passed);

  const auto wrong_set = measure("A", {{"X", sum({P({on("A", {0})})})}, {"Y", rest()}},
                                 {{"X", distinguishable({"00"})}, {"Y", distinguishable({"1+", "1-"})}});
  EXPECT_FALSE(verify_protocol(wrong_set, tiny()).passed);

  const auto fail_reached = measure("A", {{"X", sum({P({on("A", {0})})})}, {"Y", rest()}},
                                    {{"X", distinguishable({"00", "01"})}, {"Y", fail()}});
  const auto r = verify_protocol(fail_reached, tiny());
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(mentions(r, "fail"));

  const auto bad_identify = measure("A", {{"X", sum({P({on("A", {0})})})}, {"Y", rest()}},
                                    {{"X", identify("00")}, {"Y", distinguishable({"1+", "1-"})}});
  EXPECT_FALSE(verify_protocol(bad_identify, tiny()).passed);
}

TEST(Engine, UnreachedLeavesPass) {
  const auto root = measure("A", {{"X", sum({P({on("A", {0})})})}, {"Y", rest()}, },
                            {{"X", distinguishable({"00", "01"})}, {"Y", distinguishable({"1+", "1-"})}});
  const auto outer = measure("B", {{"Z", sum({P({on("B", {0, 1})})})}, {"W", rest()}}, {{"Z", root}, {"W", fail()}});
  EXPECT_TRUE(verify_protocol(outer, tiny()).passed);
}

TEST(Engine, UnexpandedMirrorFails) {
  const auto r = verify_protocol(prop6_protocol().partial, builtin_basis("B_II_33"));
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(mentions(r, "mirror"));
}

TEST(Engine, CompleteBySymmetry) {
  const auto p = prop7_protocol();
  const auto full = complete_by_symmetry(p.partial, builtin_basis("B_IIb_33"));
  EXPECT_TRUE(structurally_equal(full, p.root));
  EXPECT_THROW(complete_by_symmetry(prop6_protocol().partial, builtin_basis("B_IIb_33")), VerificationFailed);
}

TEST(Engine, AttachErrors) {
  const auto bad = attach(ResourceKind::EPR, {"A", "Z"}, {"a", "z"}, fail());
  EXPECT_FALSE(verify_protocol(bad, tiny()).passed);
  const auto clash = attach(ResourceKind::EPR, {"A", "B"}, {"A", "b"}, fail());
  EXPECT_FALSE(verify_protocol(clash, tiny()).passed);
}

TEST(Engine, MergeTooSmall) {
  const auto root = merge("B", "A", 1, distinguishable({"00", "01", "1+", "1-"}));
  EXPECT_FALSE(verify_protocol(root, tiny()).passed);
  const auto ok = merge("B", "A", 2, distinguishable({"00", "01", "1+", "1-"}));
  const auto r = verify_protocol(ok, tiny());
  EXPECT_TRUE(r.passed);
  EXPECT_NEAR(r.ledger.total_ebits, 1.0, 1e-12);
}

TEST(Engine, ReportJson) {
  const auto r = run(prop7_protocol());
  const auto doc = nlohmann::json::parse(report_to_json(r));
  EXPECT_TRUE(doc["passed"].get<bool>());
  EXPECT_EQ(doc["state_count"], 27);
  EXPECT_NEAR(doc["ledger"]["total_ebits"].get<double>(), 2 + 8.0 / 27, 1e-11);
  EXPECT_TRUE(doc["ledger"]["below_baseline"].get<bool>());
  const auto l = nlohmann::json::parse(ledger_to_json(r.ledger));
  EXPECT_EQ(l["entries"].size(), 3u);
}
