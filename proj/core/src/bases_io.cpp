#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

#include "gnpb/bases.hpp"

namespace gnpb {

using nlohmann::json;

std::string basis_to_json(const OrthoProductBasis& b, int indent) {
  json doc;
  doc["name"] = b.name();
  doc["parties"] = json::array();
  for (const auto& p : b.parties()) doc["parties"].push_back({{"name", p.name}, {"dim", p.dim}});
  doc["states"] = json::array();
  for (const auto& s : b.states()) {
    json factors = json::array();
    for (const auto& f : s.factors) {
      json amps = json::array();
      for (Eigen::Index i = 0; i < f.size(); ++i) amps.push_back({f(i).real(), f(i).imag()});
      factors.push_back(std::move(amps));
    }
    doc["states"].push_back({{"label", s.label}, {"factors", std::move(factors)}});
  }
  return doc.dump(indent);
}

OrthoProductBasis basis_from_json(std::string_view text, std::string fallback_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("basis JSON: ") + e.what());
  }
  try {
    std::vector<PartySpec> parties;
    for (const auto& p : doc.at("parties")) parties.push_back({p.at("name").get<std::string>(), p.at("dim").get<int>()});
    std::vector<ProductState> states;
    for (const auto& s : doc.at("states")) {
      ProductState st{s.at("label").get<std::string>(), {}};
      const auto& factors = s.at("factors");
      if (factors.size() != parties.size())
        throw std::invalid_argument("basis JSON: state '" + st.label + "' has the wrong number of factors");
      for (const auto& f : factors) {
        Eigen::VectorXcd v(static_cast<Eigen::Index>(f.size()));
        for (std::size_t i = 0; i < f.size(); ++i) {
          const auto& z = f.at(i);
          if (!z.is_array() || z.size() != 2) throw std::invalid_argument("basis JSON: amplitudes must be [re, im] pairs");
          v(static_cast<Eigen::Index>(i)) = Complex(z[0].get<double>(), z[1].get<double>());
        }
        st.factors.push_back(std::move(v));
      }
      states.push_back(std::move(st));
    }
    std::string name = doc.contains("name") ? doc["name"].get<std::string>() : std::move(fallback_name);
    return OrthoProductBasis(std::move(name), std::move(parties), std::move(states));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("basis JSON: ") + e.what());
  }
}

std::string integrity_to_json(const IntegrityReport& r, int indent) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", r.max_overlap);
  json dims = json::array();
  for (const auto& p : r.local_dims) dims.push_back({{"name", p.name}, {"dim", p.dim}});
  json doc{{"name", r.name},
           {"cardinality", r.cardinality},
           {"total_dim", r.total_dim},
           {"max_overlap", std::strtod(buf, nullptr)},
           {"completeness_rank", r.completeness_rank},
           {"local_dims", dims},
           {"unnormalized", r.unnormalized},
           {"orthogonal", r.orthogonal()},
           {"complete", r.complete()},
           {"passed", r.passed()}};
  return doc.dump(indent);
}

}  // namespace gnpb
