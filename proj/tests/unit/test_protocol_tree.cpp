#include <gtest/gtest.h>

#include "gnpb/protocol_tree.hpp"

using namespace gnpb;

namespace {

NodePtr two_way(const std::string& tag) {
  return measure("B", {{"M", sum({P({on("B", {0}), on(tag, {0})}), P({on("B", {1, 2}), on(tag, {1})})})}, {"Mbar", rest()}},
                 {{"M", identify("x")}, {"Mbar", mirror("M", swap01({tag}))}});
}

}  // namespace

TEST(ProtocolTree, Swap01) {
  const auto s = swap01({"a", "b"});
  EXPECT_EQ(s.permutations.at("a"), (std::vector<int>{1, 0}));
  EXPECT_EQ(s.permutations.size(), 2u);
}

TEST(ProtocolTree, ConjugateRelabelsKets) {
  const auto n = measure("B", {{"T", sum({P({on("b", {0}), on("B", std::vector<KetSpec>{twist(1, 0, -1)})})})}, {"R", rest()}},
                         {{"T", fail()}, {"R", identify("y")}});
  const auto c = conjugate(n, swap01({"b"}));
  const auto& m = std::get<Measure>(c->body);
  EXPECT_EQ(m.effects[0].expr.terms[0].factors[0].kets[0].first, 1);
  // B is untouched, twisted pair normalised so first < second
  const auto& k = m.effects[0].expr.terms[0].factors[1].kets[0];
  EXPECT_EQ(k.first, 1);
  EXPECT_EQ(k.second, 0);
  EXPECT_TRUE(m.effects[1].expr.rest);
  EXPECT_TRUE(structurally_equal(conjugate(c, swap01({"b"})), n));
}

TEST(ProtocolTree, ConjugateSwapsTwistOrder) {
  Symmetry s;
  s.permutations["B"] = {2, 1, 0};
  const auto n = measure("B", {{"T", sum({P({on("B", std::vector<KetSpec>{twist(0, 1, -1)})})})}, {"R", rest()}},
                         {{"T", fail()}, {"R", fail()}});
  const auto c = conjugate(n, s);
  const auto& k = std::get<Measure>(c->body).effects[0].expr.terms[0].factors[0].kets[0];
  // (|2> - |1>)/sqrt2 = -(|1> - |2>)/sqrt2; the projector is the same.
  EXPECT_EQ(k.first, 1);
  EXPECT_EQ(k.second, 2);
  EXPECT_EQ(k.sign, -1);
}

TEST(ProtocolTree, ConjugateRejectsNonPermutation) {
  Symmetry s;
  s.permutations["b"] = {0, 0};
  EXPECT_THROW(conjugate(two_way("b"), s), std::invalid_argument);
}

TEST(ProtocolTree, ExpandMirrors) {
  const auto p = attach(ResourceKind::EPR, {"A", "B"}, {"a", "b"}, two_way("b"));
  EXPECT_TRUE(contains_mirror(p));
  const auto e = expand_mirrors(p);
  EXPECT_FALSE(contains_mirror(e));
  EXPECT_EQ(node_count(e), node_count(p));
  const auto& m = std::get<Measure>(std::get<AttachResource>(e->body).child->body);
  EXPECT_TRUE(structurally_equal(m.children.at("Mbar"), identify("x")));
}

TEST(ProtocolTree, ExpandMirrorsErrors) {
  const auto missing = measure("B", {{"M", rest()}}, {{"M", mirror("Q", swap01({"b"}))}});
  EXPECT_THROW(expand_mirrors(missing), std::invalid_argument);
  const auto chained =
      measure("B", {{"M", sum({P({on("B", {0})})})}, {"N", rest()}},
              {{"M", mirror("N", swap01({"b"}))}, {"N", mirror("M", swap01({"b"}))}});
  EXPECT_THROW(expand_mirrors(chained), std::invalid_argument);
}

TEST(ProtocolTree, StructuralEquality) {
  EXPECT_TRUE(structurally_equal(two_way("b"), two_way("b")));
  EXPECT_FALSE(structurally_equal(two_way("b"), two_way("c")));
  EXPECT_FALSE(structurally_equal(merge("B", "A", 3, fail()), merge("B", "A", 2, fail())));
  EXPECT_FALSE(structurally_equal(distinguishable({"x", "y"}), distinguishable({"y", "x"})));
  EXPECT_DOUBLE_EQ(std::get<MergeParties>(merge("B", "A", 4, fail())->body).cost(), 2.0);
}
