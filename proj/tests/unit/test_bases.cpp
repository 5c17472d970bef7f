#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "gnpb/bases.hpp"
#include "oracle.hpp"

using namespace gnpb;

namespace {

struct Expect {
  const char* name;
  std::size_t size;
  std::size_t dim;
};

const Expect kBuiltins[] = {{"bennett_33", 9, 9},  {"B_I_43", 64, 64},  {"B_II_43", 64, 64},
                            {"B_II_33", 27, 27},   {"B_IIb_33", 27, 27}, {"shift_upb_222", 8, 8}};

// Independent tile count: rectangles of interval supports across rows|cols.
std::pair<std::size_t, std::size_t> oracle_tiles(const OrthoProductBasis& b, const std::vector<std::string>& rows) {
  std::set<std::vector<int>> rects;
  std::size_t non_interval = 0;
  for (const auto& s : b.states()) {
    std::vector<Eigen::VectorXcd> rf, cf;
    for (std::size_t p = 0; p < b.parties().size(); ++p) {
      const bool is_row = std::find(rows.begin(), rows.end(), b.parties()[p].name) != rows.end();
      (is_row ? rf : cf).push_back(s.factors[p]);
    }
    auto support = [](const Eigen::VectorXcd& v, int& lo, int& hi) {
      lo = -1;
      hi = -1;
      int count = 0;
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > 1e-12) {
          if (lo < 0) lo = static_cast<int>(i);
          hi = static_cast<int>(i);
          ++count;
        }
      return count == hi - lo + 1;
    };
    int r0, r1, c0, c1;
    const bool ok = support(oracle::full_vector(rf), r0, r1) & support(oracle::full_vector(cf), c0, c1);
    if (!ok) {
      ++non_interval;
      continue;
    }
    rects.insert({r0, r1, c0, c1});
  }
  return {rects.size(), non_interval};
}

}  // namespace

TEST(Bases, BuiltinsAreOrthogonalAndComplete) {
  for (const auto& e : kBuiltins) {
    SCOPED_TRACE(e.name);
    const auto b = builtin_basis(e.name);
    EXPECT_EQ(b.size(), e.size);
    EXPECT_EQ(b.total_dim(), e.dim);
    const auto r = check_basis(b);
    const auto o = oracle::gram_stats(b);
    EXPECT_LT(o.max_overlap, 1e-12);
    EXPECT_LT(o.max_norm_error, 1e-12);
    EXPECT_EQ(o.rank, static_cast<int>(e.dim));
    EXPECT_LT(r.max_overlap, 1e-9);
    EXPECT_EQ(r.completeness_rank, e.dim);
    EXPECT_TRUE(r.passed());
    EXPECT_TRUE(r.complete());
  }
}

TEST(Bases, LabelsAreUnique) {
  for (const auto& n : builtin_basis_names()) {
    const auto b = builtin_basis(n);
    std::set<std::string> seen;
    for (const auto& s : b.states()) EXPECT_TRUE(seen.insert(s.label).second) << n << " " << s.label;
  }
}

TEST(Bases, ContainsDocumentedStates) {
  const auto b1 = builtin_basis("B_I_43");
  for (const char* l : {"ket(3,0,eta+)", "ket(xi-,0,3)", "ket(1,1,3)", "ket(3,3,3)", "ket(0,0,0)"})
    EXPECT_TRUE(b1.index_of(l)) << l;
  const auto b2 = builtin_basis("B_II_43");
  for (const char* l : {"ket(0,3,chi+)", "ket(2,chi-,2)", "ket(chi+,3,1)"}) EXPECT_TRUE(b2.index_of(l)) << l;
  for (const char* l : {"ket(0,3,2)", "ket(0,3,3)", "ket(2,2,2)", "ket(2,3,2)", "ket(2,3,1)", "ket(3,3,1)"})
    EXPECT_FALSE(b2.index_of(l)) << l;
  const auto b3 = builtin_basis("B_II_33");
  EXPECT_TRUE(b3.index_of("psi(-,+)_4"));
  EXPECT_TRUE(b3.index_of("phi(1)"));
  const auto b4 = builtin_basis("B_IIb_33");
  EXPECT_TRUE(b4.index_of("gamma(-)_3"));
}

TEST(Bases, UnknownNameThrows) { EXPECT_THROW(builtin_basis("nope"), std::out_of_range); }

TEST(Bases, LocalKets) {
  EXPECT_NEAR((local_ket(4, "chi-") - twisted_ket(4, 2, 3, -1)).norm(), 0, 1e-15);
  EXPECT_NEAR((local_ket(3, "kappa+") - twisted_ket(3, 0, 2, 1)).norm(), 0, 1e-15);
  EXPECT_NEAR(std::abs(local_ket(3, "2")(2)), 1.0, 0);
  EXPECT_THROW(local_ket(3, "3"), std::invalid_argument);
  EXPECT_THROW(local_ket(3, "chi+"), std::invalid_argument);
  EXPECT_THROW(local_ket(3, "zeta+"), std::invalid_argument);
}

TEST(Bases, CheckDetectsNonOrthogonalSet) {
  OrthoProductBasis b("bad", {{"A", 2}, {"B", 2}},
                      {{"x", {local_ket(2, "0"), local_ket(2, "0")}}, {"y", {local_ket(2, "eta+"), local_ket(2, "0")}}});
  const auto r = check_basis(b);
  EXPECT_NEAR(r.max_overlap, std::sqrt(0.5), 1e-12);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.complete());
}

TEST(Bases, ConstructorValidatesShapes) {
  EXPECT_THROW(OrthoProductBasis("b", {{"A", 2}, {"B", 2}}, {{"x", {local_ket(2, "0")}}}), std::invalid_argument);
  EXPECT_THROW(OrthoProductBasis("b", {{"A", 2}}, {{"x", {local_ket(3, "0")}}}), std::invalid_argument);
}

TEST(BasesJson, RoundTrip) {
  for (const auto& n : builtin_basis_names()) {
    const auto b = builtin_basis(n);
    const auto c = basis_from_json(basis_to_json(b));
    EXPECT_EQ(c.name(), b.name());
    ASSERT_EQ(c.size(), b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      EXPECT_EQ(c.states()[i].label, b.states()[i].label);
      EXPECT_LT((c.ket(i).amplitudes - b.ket(i).amplitudes).norm(), 1e-15);
    }
  }
}

TEST(BasesJson, Malformed) {
  EXPECT_THROW(basis_from_json("{"), std::invalid_argument);
  EXPECT_THROW(basis_from_json(R"({"parties":[{"name":"A","dim":2}],"states":[{"label":"x","factors":[[[1,0]]]}]})"),
               std::invalid_argument);
  EXPECT_THROW(basis_from_json(R"({"parties":[{"name":"A","dim":2}],"states":[{"label":"x","factors":[[1,0]]}]})"),
               std::invalid_argument);
  const auto ok = basis_from_json(R"({"parties":[{"name":"A","dim":2}],"states":[{"label":"x","factors":[[[1,0],[0,0]]]}]})",
                                  "fallback");
  EXPECT_EQ(ok.name(), "fallback");
}

TEST(Bases, PermutePartiesKeepsLabels) {
  const auto b = builtin_basis("B_II_33");
  const std::vector<std::size_t> order{2, 0, 1};
  const auto p = permute_parties(b, order);
  EXPECT_EQ(p.parties()[0].name, "C");
  EXPECT_TRUE(check_basis(p).passed());
  const auto i = p.index_of("psi(+,-)_2");
  ASSERT_TRUE(i);
  EXPECT_LT((p.states()[*i].factors[0] - b.states()[*b.index_of("psi(+,-)_2")].factors[2]).norm(), 1e-15);
}

TEST(Tiles, BennettHasFiveTiles) {
  const auto b = builtin_basis("bennett_33");
  const std::vector<std::string> rows{"A"};
  const auto t = render_tiles(b, rows);
  EXPECT_EQ(t.tile_count, 5u);
  EXPECT_EQ(oracle_tiles(b, rows).first, 5u);
  EXPECT_TRUE(t.non_interval.empty());
  EXPECT_EQ(t.rows, 3u);
  EXPECT_EQ(t.cols, 3u);
}

TEST(Tiles, MatchesOracleOnAllCuts) {
  for (const auto& n : builtin_basis_names()) {
    const auto b = builtin_basis(n);
    if (b.parties().size() != 3) continue;
    for (const auto& rows : std::vector<std::vector<std::string>>{{"A"}, {"A", "B"}, {"A", "C"}}) {
      const auto t = render_tiles(b, rows);
      const auto [tiles, non_interval] = oracle_tiles(b, rows);
      EXPECT_EQ(t.tile_count, tiles) << n;
      EXPECT_EQ(t.non_interval.size(), non_interval) << n;
    }
  }
}

TEST(Tiles, TypeII33AcrossABvsC) {
  // Frozen from the oracle above: only the phi states and psi_1, psi_3 are interval tiles.
  const auto t = render_tiles(builtin_basis("B_II_33"), std::vector<std::string>{"A", "B"});
  EXPECT_EQ(t.rows, 9u);
  EXPECT_EQ(t.cols, 3u);
  EXPECT_EQ(t.tile_count, 5u);
  EXPECT_EQ(t.non_interval.size(), 16u);
}
