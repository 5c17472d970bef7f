#include <gtest/gtest.h>

#include <random>
#include <set>

#include <json.hpp>

#include "gnpb/opm.hpp"
#include "oracle.hpp"

using namespace gnpb;

namespace {

const std::vector<std::vector<std::string>> kGroups{{"A"}, {"B"}, {"C"}, {"A", "B"}, {"B", "C"}, {"A", "C"}};

std::vector<std::size_t> dims_of(const OrthoProductBasis& b) {
  std::vector<std::size_t> out;
  for (const auto& g : kGroups) out.push_back(opm_solution_space(b, g).dim());
  return out;
}

}  // namespace

TEST(Opm, HermitianCoordinatesRoundTrip) {
  std::mt19937 rng(5);
  std::normal_distribution<double> n;
  for (int d : {2, 3, 4, 9}) {
    Eigen::MatrixXcd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = {n(rng), n(rng)};
    const Eigen::MatrixXcd h = m + m.adjoint();
    const auto x = hermitian_coordinates(h);
    EXPECT_EQ(x.size(), d * d);
    EXPECT_LT((hermitian_from_coordinates(x, d) - h).norm(), 1e-12);
  }
}

TEST(Opm, SolutionDimensionsOfBuiltins) {
  // Frozen after agreement with the Gram-Schmidt sweep below.
  EXPECT_EQ(dims_of(builtin_basis("B_I_43")), (std::vector<std::size_t>{2, 2, 2, 10, 10, 12}));
  EXPECT_EQ(dims_of(builtin_basis("B_II_43")), (std::vector<std::size_t>{1, 1, 1, 8, 8, 10}));
  EXPECT_EQ(dims_of(builtin_basis("B_II_33")), (std::vector<std::size_t>{1, 1, 1, 1, 1, 1}));
  EXPECT_EQ(dims_of(builtin_basis("B_IIb_33")), (std::vector<std::size_t>{1, 1, 1, 1, 1, 1}));
}

TEST(Opm, BuiltinsAgreeWithSweepOracle) {
  for (const char* n : {"B_II_33", "B_IIb_33", "B_I_43", "B_II_43", "shift_upb_222"}) {
    const auto b = builtin_basis(n);
    for (const auto& g : kGroups)
      EXPECT_EQ(static_cast<int>(opm_solution_space(b, g).dim()), oracle::opm_dim_sweep(b, g)) << n << " " << g.size();
  }
}

TEST(Opm, RandomSetsAgreeWithSweepOracle) {
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<int> count(4, 8);
  std::set<int> dims_seen;
  for (int trial = 0; trial < 150; ++trial) {
    const auto b = oracle::random_opb_222(rng, count(rng));
    for (const auto& g : kGroups) {
      const auto s = opm_solution_space(b, g);
      const int expect = oracle::opm_dim_sweep(b, g);
      ASSERT_EQ(static_cast<int>(s.dim()), expect) << "trial " << trial;
      dims_seen.insert(expect);
    }
  }
  // The generator must exercise more than the trivial answer.
  EXPECT_GE(dims_seen.size(), 3u);
}

TEST(Opm, SolutionsSatisfyConstraints) {
  const auto b = builtin_basis("B_I_43");
  for (const auto& g : kGroups) {
    const auto s = opm_solution_space(b, g);
    for (const auto& m : s.basis_matrices) {
      EXPECT_LT((m - m.adjoint()).norm(), 1e-10);
      for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) {
          const auto fi = group_factor(b, i, g), fj = group_factor(b, j, g);
          // rest overlap
          std::complex<double> rest = 1.0;
          for (const auto& p : b.parties())
            if (std::find(g.begin(), g.end(), p.name) == g.end()) {
              const auto k = b.party_index(p.name);
              rest *= b.states()[i].factors[k].dot(b.states()[j].factors[k]);
            }
          EXPECT_LT(std::abs(fi.dot(m * fj) * rest), 1e-9);
        }
    }
    EXPECT_TRUE(s.contains(Eigen::MatrixXcd::Identity(s.local_dim, s.local_dim)));
  }
}

TEST(Opm, EliminatingWitnessForTypeI) {
  const auto b = builtin_basis("B_I_43");
  const std::vector<std::string> a{"A"};
  const auto m = find_eliminating_opm(b, a);
  ASSERT_TRUE(m);
  ASSERT_EQ(m->effects.size(), 2u);
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(4, 4);
  std::size_t survivors = 0;
  for (std::size_t k = 0; k < 2; ++k) {
    total += m->effects[k];
    survivors += m->survivors[k].size();
    EXPECT_TRUE(is_projector(m->effects[k]));
  }
  EXPECT_LT((total - Eigen::MatrixXcd::Identity(4, 4)).norm(), 1e-9);
  EXPECT_EQ(survivors, b.size());
}

TEST(Opm, NoWitnessWhenIrreducible) {
  const std::vector<std::string> a{"A"};
  EXPECT_FALSE(find_eliminating_opm(builtin_basis("B_II_33"), a));
  EXPECT_FALSE(find_eliminating_opm(builtin_basis("bennett_33"), a));
}

TEST(Opm, Classification) {
  EXPECT_EQ(classify(builtin_basis("B_I_43")).verdict, GnpbType::TypeI);
  EXPECT_EQ(classify(builtin_basis("B_II_43")).verdict, GnpbType::TypeIIa);
  EXPECT_EQ(classify(builtin_basis("B_IIb_33")).verdict, GnpbType::TypeIIb);
  EXPECT_EQ(classify(builtin_basis("B_II_33")).verdict, GnpbType::TypeIIb);
  EXPECT_THROW(classify(builtin_basis("bennett_33")), std::invalid_argument);
}

TEST(Opm, LocalIrreducibility) {
  const auto b = builtin_basis("B_II_43");
  EXPECT_TRUE(is_locally_irreducible(b, {{{"A"}, {"B"}, {"C"}}}));
  EXPECT_FALSE(is_locally_irreducible(b, {{{"A", "B"}, {"C"}}}));
  EXPECT_TRUE(is_locally_irreducible(builtin_basis("bennett_33"), {{{"A"}, {"B"}}}));
}

TEST(Opm, DescribeProjector) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(4, 4);
  p(3, 3) = 1.0;
  EXPECT_EQ(describe_projector(p), "|3><3|");
  EXPECT_EQ(describe_projector(Eigen::MatrixXcd::Identity(4, 4) - p), "I-|3><3|");
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(2, 2);
  q.setConstant(0.5);
  EXPECT_EQ(describe_projector(q), "rank-1 projector");
}

TEST(Opm, ClassificationJson) {
  const auto doc = nlohmann::json::parse(classification_to_json(classify(builtin_basis("B_I_43"))));
  EXPECT_EQ(doc["verdict"], "TypeI");
  EXPECT_EQ(doc["singles"][0]["group"], "A");
  EXPECT_EQ(doc["singles"][0]["solution_dim"], 2);
  EXPECT_EQ(doc["singles"][0]["witness"][0]["projector"], "|3><3|");
}
