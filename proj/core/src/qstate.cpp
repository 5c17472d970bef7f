#include "gnpb/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace gnpb {

CompositeSpace::CompositeSpace(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  std::unordered_set<std::string> seen;
  for (const auto& s : subsystems_) {
    if (s.dim < 1) throw std::invalid_argument("subsystem '" + s.label.tag + "' has non-positive dimension");
    if (!seen.insert(s.label.tag).second)
      throw std::invalid_argument("duplicate subsystem tag '" + s.label.tag + "'");
  }
}

CompositeSpace CompositeSpace::single(std::string owner, std::string tag, int dim) {
  return CompositeSpace({Subsystem{{std::move(owner), std::move(tag)}, dim}});
}

std::size_t CompositeSpace::total_dim() const {
  std::size_t d = 1;
  for (const auto& s : subsystems_) d *= static_cast<std::size_t>(s.dim);
  return d;
}

std::optional<std::size_t> CompositeSpace::find(std::string_view tag) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i)
    if (subsystems_[i].label.tag == tag) return i;
  return std::nullopt;
}

std::size_t CompositeSpace::position(std::string_view tag) const {
  auto p = find(tag);
  if (!p) throw std::out_of_range("unknown subsystem '" + std::string(tag) + "'");
  return *p;
}

const Subsystem& CompositeSpace::at(std::string_view tag) const { return subsystems_[position(tag)]; }

std::vector<std::string> CompositeSpace::parties() const {
  std::vector<std::string> out;
  for (const auto& s : subsystems_)
    if (std::find(out.begin(), out.end(), s.label.owner) == out.end()) out.push_back(s.label.owner);
  return out;
}

std::vector<std::string> CompositeSpace::tags_of(std::string_view owner) const {
  std::vector<std::string> out;
  for (const auto& s : subsystems_)
    if (s.label.owner == owner) out.push_back(s.label.tag);
  return out;
}

std::vector<std::string> CompositeSpace::tags() const {
  std::vector<std::string> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.label.tag);
  return out;
}

std::size_t CompositeSpace::dim_of(std::span<const std::string> tags) const {
  std::size_t d = 1;
  for (const auto& t : tags) d *= static_cast<std::size_t>(at(t).dim);
  return d;
}

CompositeSpace concat(const CompositeSpace& a, const CompositeSpace& b) {
  auto subs = a.subsystems();
  subs.insert(subs.end(), b.subsystems().begin(), b.subsystems().end());
  return CompositeSpace(std::move(subs));
}

Ket make_ket(CompositeSpace space, Eigen::VectorXcd amplitudes) {
  if (static_cast<std::size_t>(amplitudes.size()) != space.total_dim())
    throw std::invalid_argument("amplitude vector length does not match space dimension");
  return Ket{std::move(space), std::move(amplitudes)};
}

Ket computational_ket(CompositeSpace space, std::span<const int> digits) {
  const auto& subs = space.subsystems();
  if (digits.size() != subs.size()) throw std::invalid_argument("digit count does not match subsystem count");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= subs[i].dim) throw std::invalid_argument("digit out of range");
    idx = idx * static_cast<std::size_t>(subs[i].dim) + static_cast<std::size_t>(digits[i]);
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.total_dim()));
  v(static_cast<Eigen::Index>(idx)) = 1.0;
  return Ket{std::move(space), std::move(v)};
}

bool is_hermitian(const Eigen::MatrixXcd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

bool is_projector(const Eigen::MatrixXcd& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  return (m * m - m).cwiseAbs().maxCoeff() < tol;
}

Ket tensor(const Ket& a, const Ket& b) {
  CompositeSpace space = concat(a.space, b.space);
  const Eigen::Index na = a.amplitudes.size(), nb = b.amplitudes.size();
  Eigen::VectorXcd v(na * nb);
  for (Eigen::Index i = 0; i < na; ++i) v.segment(i * nb, nb) = a.amplitudes(i) * b.amplitudes;
  return Ket{std::move(space), std::move(v)};
}

Ket tensor(std::span<const Ket> factors) {
  if (factors.empty()) return Ket{CompositeSpace{}, Eigen::VectorXcd::Ones(1)};
  Ket out = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) out = tensor(out, factors[i]);
  return out;
}

Complex inner(const Ket& a, const Ket& b) {
  if (!(a.space == b.space)) throw std::invalid_argument("inner product of kets on different spaces");
  return a.amplitudes.dot(b.amplitudes);
}

namespace detail {

IndexSplit split_indices(const CompositeSpace& space, std::span<const std::size_t> positions) {
  const auto& subs = space.subsystems();
  const std::size_t n = subs.size();
  std::vector<bool> chosen(n, false);
  for (auto p : positions) {
    if (p >= n || chosen[p]) throw std::invalid_argument("invalid subsystem selection");
    chosen[p] = true;
  }
  std::vector<std::size_t> stride(n, 1);
  for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * static_cast<std::size_t>(subs[i].dim);

  std::vector<std::size_t> sel_stride(n, 0), rem_stride(n, 0);
  IndexSplit out;
  for (std::size_t k = positions.size(); k-- > 0;) {
    sel_stride[positions[k]] = out.selected_dim;
    out.selected_dim *= static_cast<std::size_t>(subs[positions[k]].dim);
  }
  for (std::size_t i = n; i-- > 0;) {
    if (chosen[i]) continue;
    rem_stride[i] = out.remainder_dim;
    out.remainder_dim *= static_cast<std::size_t>(subs[i].dim);
  }
  const std::size_t total = space.total_dim();
  out.selected.resize(total);
  out.remainder.resize(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t s = 0, r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t digit = (flat / stride[i]) % static_cast<std::size_t>(subs[i].dim);
      if (chosen[i]) s += digit * sel_stride[i];
      else r += digit * rem_stride[i];
    }
    out.selected[flat] = s;
    out.remainder[flat] = r;
  }
  return out;
}

Eigen::MatrixXcd as_matrix(const Ket& state, const IndexSplit& split) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(split.selected_dim), static_cast<Eigen::Index>(split.remainder_dim));
  for (std::size_t flat = 0; flat < split.selected.size(); ++flat)
    m(static_cast<Eigen::Index>(split.selected[flat]), static_cast<Eigen::Index>(split.remainder[flat])) =
        state.amplitudes(static_cast<Eigen::Index>(flat));
  return m;
}

}  // namespace detail

namespace {

std::vector<std::size_t> positions_of(const CompositeSpace& space, std::span<const std::string> tags) {
  std::vector<std::size_t> pos;
  pos.reserve(tags.size());
  for (const auto& t : tags) pos.push_back(space.position(t));
  return pos;
}

Eigen::VectorXcd from_matrix(const Eigen::MatrixXcd& m, const detail::IndexSplit& split) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(split.selected.size()));
  for (std::size_t flat = 0; flat < split.selected.size(); ++flat)
    v(static_cast<Eigen::Index>(flat)) =
        m(static_cast<Eigen::Index>(split.selected[flat]), static_cast<Eigen::Index>(split.remainder[flat]));
  return v;
}

}  // namespace

Ket apply_local(const Operator& op, const Ket& state) {
  const auto tags = op.space.tags();
  for (const auto& s : op.space.subsystems())
    if (state.space.at(s.label.tag).dim != s.dim)
      throw std::invalid_argument("operator dimension mismatch on '" + s.label.tag + "'");
  if (static_cast<std::size_t>(op.matrix.rows()) != op.space.total_dim() || op.matrix.rows() != op.matrix.cols())
    throw std::invalid_argument("operator matrix does not match its space");
  auto split = detail::split_indices(state.space, positions_of(state.space, tags));
  Eigen::MatrixXcd m = op.matrix * detail::as_matrix(state, split);
  return Ket{state.space, from_matrix(m, split)};
}

EffectResult apply_effect(const Operator& effect, const Ket& state, double tol) {
  if (!is_projector(effect.matrix, tol)) throw std::invalid_argument("effect is not a projector");
  Ket projected = apply_local(effect, state);
  const double p = projected.amplitudes.squaredNorm();
  EffectResult r;
  r.probability = p;
  if (p > tol) {
    projected.amplitudes /= std::sqrt(p);
    r.post_state = std::move(projected);
  }
  return r;
}

Eigen::MatrixXcd reduced_density(const Ket& state, std::span<const std::string> keep) {
  auto split = detail::split_indices(state.space, positions_of(state.space, keep));
  Eigen::MatrixXcd m = detail::as_matrix(state, split);
  return m * m.adjoint();
}

double schmidt_ebits(const Ket& state, std::span<const std::string> side) {
  if (side.empty() || side.size() >= state.space.size())
    throw std::invalid_argument("cut does not partition the space");
  auto split = detail::split_indices(state.space, positions_of(state.space, side));
  Eigen::MatrixXcd m = detail::as_matrix(state, split);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double p = svd.singularValues()(i) * svd.singularValues()(i);
    if (p > 1e-15) entropy -= p * std::log2(p);
  }
  return std::max(entropy, 0.0);
}

Ket contract(const Ket& state, std::span<const std::string> tags, const Eigen::VectorXcd& v) {
  auto pos = positions_of(state.space, tags);
  auto split = detail::split_indices(state.space, pos);
  if (static_cast<std::size_t>(v.size()) != split.selected_dim) throw std::invalid_argument("contraction vector has wrong length");
  Eigen::VectorXcd rest = detail::as_matrix(state, split).transpose() * v.conjugate();
  std::vector<Subsystem> keep;
  for (std::size_t i = 0; i < state.space.size(); ++i)
    if (std::find(pos.begin(), pos.end(), i) == pos.end()) keep.push_back(state.space.subsystems()[i]);
  return Ket{CompositeSpace(std::move(keep)), std::move(rest)};
}

Ket permute(const Ket& state, std::span<const std::string> order) {
  if (order.size() != state.space.size()) throw std::invalid_argument("permutation must name every subsystem");
  auto pos = positions_of(state.space, order);
  auto split = detail::split_indices(state.space, pos);
  std::vector<Subsystem> subs;
  for (auto p : pos) subs.push_back(state.space.subsystems()[p]);
  Eigen::VectorXcd v(state.amplitudes.size());
  for (std::size_t flat = 0; flat < split.selected.size(); ++flat)
    v(static_cast<Eigen::Index>(split.selected[flat])) = state.amplitudes(static_cast<Eigen::Index>(flat));
  return Ket{CompositeSpace(std::move(subs)), std::move(v)};
}

Ket merge_subsystems(const Ket& state, std::string_view destination, std::string_view source,
                     std::string merged_tag) {
  const auto& subs = state.space.subsystems();
  const std::size_t di = state.space.position(destination);
  const std::size_t si = state.space.position(source);
  if (di == si) throw std::invalid_argument("cannot merge a subsystem with itself");
  std::vector<std::string> order;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (i == si) continue;
    order.push_back(subs[i].label.tag);
    if (i == di) order.push_back(subs[si].label.tag);
  }
  Ket p = permute(state, order);
  std::vector<Subsystem> fused;
  for (std::size_t i = 0; i < p.space.size(); ++i) {
    const auto& s = p.space.subsystems()[i];
    if (s.label.tag == destination) {
      const auto& src = p.space.subsystems()[i + 1];
      fused.push_back(Subsystem{{s.label.owner, std::move(merged_tag)}, s.dim * src.dim});
      ++i;
    } else {
      fused.push_back(s);
    }
  }
  return Ket{CompositeSpace(std::move(fused)), std::move(p.amplitudes)};
}

Ket reassign_owner(const Ket& state, std::string_view from, std::string_view to) {
  auto subs = state.space.subsystems();
  for (auto& s : subs)
    if (s.label.owner == from) s.label.owner = std::string(to);
  return Ket{CompositeSpace(std::move(subs)), state.amplitudes};
}

}  // namespace gnpb
