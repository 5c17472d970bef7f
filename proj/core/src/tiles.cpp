#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gnpb/bases.hpp"

namespace gnpb {

namespace {

// Computational support of a tensor product of the chosen factors.
std::vector<std::size_t> support(const ProductState& s, const std::vector<std::size_t>& parties) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (auto p : parties) {
    const auto& f = s.factors[p];
    Eigen::VectorXcd next(v.size() * f.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) next.segment(k * f.size(), f.size()) = v(k) * f;
    v = std::move(next);
  }
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > kTol) out.push_back(static_cast<std::size_t>(i));
  return out;
}

bool contiguous(const std::vector<std::size_t>& s) {
  return !s.empty() && s.back() - s.front() + 1 == s.size();
}

std::string tile_glyph(std::size_t k) {
  static const std::string alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  if (k < alphabet.size()) return std::string(1, alphabet[k]);
  return "#";
}

}  // namespace

TileRendering render_tiles(const OrthoProductBasis& b, std::span<const std::string> row_group) {
  std::vector<std::size_t> rows_p, cols_p;
  for (const auto& name : row_group) rows_p.push_back(b.party_index(name));
  for (std::size_t i = 0; i < b.parties().size(); ++i)
    if (std::find(rows_p.begin(), rows_p.end(), i) == rows_p.end()) cols_p.push_back(i);
  if (rows_p.empty() || cols_p.empty()) throw std::invalid_argument("tile cut must leave parties on both sides");

  TileRendering r;
  r.rows = r.cols = 1;
  for (auto p : rows_p) r.rows *= static_cast<std::size_t>(b.parties()[p].dim);
  for (auto p : cols_p) r.cols *= static_cast<std::size_t>(b.parties()[p].dim);

  using Rect = std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>;
  std::map<Rect, std::vector<std::string>> tiles;
  std::vector<Rect> order;
  for (const auto& s : b.states()) {
    auto rs = support(s, rows_p), cs = support(s, cols_p);
    if (!contiguous(rs) || !contiguous(cs)) {
      r.non_interval.push_back(s.label);
      continue;
    }
    Rect rect{{rs.front(), rs.back()}, {cs.front(), cs.back()}};
    if (!tiles.count(rect)) order.push_back(rect);
    tiles[rect].push_back(s.label);
  }
  r.tile_count = tiles.size();

  std::vector<std::vector<std::string>> grid(r.rows, std::vector<std::string>(r.cols, "."));
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& [rr, cc] = order[k];
    for (auto i = rr.first; i <= rr.second; ++i)
      for (auto j = cc.first; j <= cc.second; ++j) grid[i][j] = tile_glyph(k);
  }

  std::string rlabel, clabel;
  for (auto p : rows_p) rlabel += b.parties()[p].name;
  for (auto p : cols_p) clabel += b.parties()[p].name;
  std::ostringstream os;
  os << b.name() << " " << rlabel << "|" << clabel << " (" << r.rows << "x" << r.cols << ")\n";
  os << "     ";
  for (std::size_t j = 0; j < r.cols; ++j) os << ' ' << j;
  os << '\n';
  for (std::size_t i = 0; i < r.rows; ++i) {
    os << (i < 10 ? "  " : " ") << i << " |";
    for (std::size_t j = 0; j < r.cols; ++j) os << ' ' << grid[i][j];
    os << '\n';
  }
  os << "tiles: " << r.tile_count << '\n';
  for (std::size_t k = 0; k < order.size(); ++k) {
    os << "  " << tile_glyph(k) << ":";
    for (const auto& l : tiles[order[k]]) os << ' ' << l;
    os << '\n';
  }
  if (!r.non_interval.empty()) {
    os << "non-interval states:";
    for (const auto& l : r.non_interval) os << ' ' << l;
    os << '\n';
  }
  r.text = os.str();
  return r;
}

}  // namespace gnpb
