#include <gtest/gtest.h>

#include <cmath>

#include "gnpb/bases.hpp"
#include "gnpb/qstate.hpp"
#include "oracle.hpp"

using namespace gnpb;

namespace {

CompositeSpace abc(int da, int db, int dc) {
  return CompositeSpace({{{"A", "A"}, da}, {{"B", "B"}, db}, {{"C", "C"}, dc}});
}

Ket random_ket(const CompositeSpace& s, unsigned seed) {
  std::srand(seed);
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(s.total_dim()));
  return make_ket(s, v.normalized());
}

}  // namespace

TEST(CompositeSpace, RejectsDuplicateTags) {
  EXPECT_THROW(CompositeSpace({{{"A", "x"}, 2}, {{"B", "x"}, 2}}), std::invalid_argument);
  EXPECT_THROW(concat(CompositeSpace::single("A", "a", 2), CompositeSpace::single("B", "a", 2)), std::invalid_argument);
}

TEST(CompositeSpace, PartiesAndTags) {
  CompositeSpace s({{{"A", "A"}, 3}, {{"B", "b1"}, 2}, {{"A", "a1"}, 2}});
  EXPECT_EQ(s.total_dim(), 12u);
  EXPECT_EQ(s.parties(), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(s.tags_of("A"), (std::vector<std::string>{"A", "a1"}));
  EXPECT_EQ(s.position("a1"), 2u);
  EXPECT_FALSE(s.contains("c"));
  EXPECT_THROW(s.at("c"), std::out_of_range);
}

TEST(Ket, TensorMatchesExplicitKron) {
  const auto a = local_ket(3, "eta-"), b = local_ket(2, "1"), c = local_ket(4, "chi+");
  const Ket t = tensor(std::vector<Ket>{make_ket(CompositeSpace::single("A", "A", 3), a),
                                        make_ket(CompositeSpace::single("B", "B", 2), b),
                                        make_ket(CompositeSpace::single("C", "C", 4), c)});
  EXPECT_LT((t.amplitudes - oracle::full_vector({a, b, c})).norm(), 1e-12);
}

TEST(Ket, ComputationalKetIsRowMajor) {
  const std::vector<int> digits{1, 0, 2};
  const Ket k = computational_ket(abc(2, 2, 3), digits);
  EXPECT_EQ(std::abs(k.amplitudes(1 * 6 + 0 * 3 + 2)), 1.0);
}

TEST(Ket, ReducedDensityOfProductIsPure) {
  const auto a = local_ket(3, "xi+"), b = local_ket(3, "2");
  const Ket k = make_ket(CompositeSpace({{{"A", "A"}, 3}, {{"B", "B"}, 3}}), oracle::full_vector({a, b}));
  const std::vector<std::string> keep{"A"};
  const auto rho = reduced_density(k, keep);
  EXPECT_LT((rho - a * a.adjoint()).norm(), 1e-12);
}

TEST(Ket, SchmidtEbitsOfResources) {
  const std::vector<std::string> ab{"A", "B"}, abc3{"A", "B", "C"}, tags2{"a", "b"}, tags3{"a", "b", "c"};
  const Ket epr = resource_ket(ResourceKind::EPR, ab, tags2);
  const Ket epr3 = resource_ket(ResourceKind::EPR3, ab, tags2);
  const Ket ghz = resource_ket(ResourceKind::GHZ, abc3, tags3);
  const Ket w = resource_ket(ResourceKind::W, abc3, tags3);
  const std::vector<std::string> a{"a"};
  EXPECT_NEAR(schmidt_ebits(epr, a), 1.0, 1e-12);
  EXPECT_NEAR(schmidt_ebits(epr3, a), std::log2(3.0), 1e-12);
  EXPECT_NEAR(schmidt_ebits(ghz, a), 1.0, 1e-12);
  // W: eigenvalues 1/3, 2/3.
  EXPECT_NEAR(schmidt_ebits(w, a), -(1.0 / 3) * std::log2(1.0 / 3) - (2.0 / 3) * std::log2(2.0 / 3), 1e-12);
  EXPECT_NEAR(resource_cut_ebits(ResourceKind::W), schmidt_ebits(w, a), 1e-12);
}

TEST(Ket, ApplyEffectBornRule) {
  const Ket k = make_ket(CompositeSpace::single("A", "A", 3), local_ket(3, "eta+"));
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(3, 3);
  p(0, 0) = 1.0;
  const auto r = apply_effect({CompositeSpace::single("A", "A", 3), p}, k);
  EXPECT_NEAR(r.probability, 0.5, 1e-12);
  ASSERT_TRUE(r.post_state);
  EXPECT_NEAR(std::abs(r.post_state->amplitudes(0)), 1.0, 1e-12);
  p(1, 1) = 0.5;
  EXPECT_THROW(apply_effect({CompositeSpace::single("A", "A", 3), p}, k), std::invalid_argument);
}

TEST(Ket, ZeroProbabilityHasNoPostState) {
  const Ket k = make_ket(CompositeSpace::single("A", "A", 2), local_ket(2, "0"));
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(2, 2);
  p(1, 1) = 1.0;
  const auto r = apply_effect({CompositeSpace::single("A", "A", 2), p}, k);
  EXPECT_EQ(r.probability, 0.0);
  EXPECT_FALSE(r.post_state);
}

TEST(Ket, PermuteRoundTripPreservesInner) {
  const auto s = abc(2, 3, 2);
  const Ket k = random_ket(s, 7), l = random_ket(s, 8);
  const std::vector<std::string> order{"C", "A", "B"}, back{"A", "B", "C"};
  const Ket kp = permute(k, order);
  EXPECT_EQ(kp.space.subsystems().front().label.tag, "C");
  EXPECT_LT((permute(kp, back).amplitudes - k.amplitudes).norm(), 1e-12);
  EXPECT_NEAR(std::abs(inner(permute(l, order), kp) - inner(l, k)), 0.0, 1e-12);
}

TEST(Ket, MergeIndexIsDestinationMajor) {
  // |i>_A |j>_B |k>_C  ->  |i*3 + k>_{AC} |j>_B  when C merges into A.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 3; ++k) {
        const std::vector<int> d{i, j, k};
        const Ket m = merge_subsystems(computational_ket(abc(2, 2, 3), d), "A", "C", "AC");
        ASSERT_EQ(m.space.size(), 2u);
        EXPECT_EQ(m.space.subsystems()[0].label.tag, "AC");
        EXPECT_EQ(m.space.subsystems()[0].dim, 6);
        EXPECT_EQ(std::abs(m.amplitudes((i * 3 + k) * 2 + j)), 1.0);
      }
}

TEST(Ket, ReassignOwnerMovesAllSubsystems) {
  CompositeSpace s({{{"A", "A"}, 2}, {{"B", "B"}, 2}, {{"B", "b1"}, 2}});
  const Ket k = reassign_owner(random_ket(s, 3), "B", "A");
  EXPECT_EQ(k.space.parties(), (std::vector<std::string>{"A"}));
}

TEST(Ket, ContractWithEprHalf) {
  const std::vector<std::string> ab{"A", "B"}, tags{"a", "b"}, a{"a"};
  const Ket epr = resource_ket(ResourceKind::EPR, ab, tags);
  const Ket rest = contract(epr, a, local_ket(2, "eta+"));
  // <eta+|_a |phi+> = |eta+>_b / sqrt2 (real amplitudes)
  EXPECT_NEAR(rest.norm(), std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(std::abs(rest.amplitudes.normalized().dot(local_ket(2, "eta+"))), 1.0, 1e-12);
}

TEST(Ket, ApplyLocalOnNonContiguousTags) {
  const auto s = abc(2, 2, 2);
  const Ket k = random_ket(s, 11);
  Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(4, 4);
  // swap on (C, A) ordering: |c a> -> |a c>
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a) x(a * 2 + c, c * 2 + a) = 1.0;
  const CompositeSpace ca({{{"C", "C"}, 2}, {{"A", "A"}, 2}});
  const Ket out = apply_local({ca, x}, k);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) EXPECT_NEAR(std::abs(out.amplitudes(a * 4 + b * 2 + c) - k.amplitudes(c * 4 + b * 2 + a)), 0, 1e-12);
}
