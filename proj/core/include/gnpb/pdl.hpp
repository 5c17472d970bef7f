#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gnpb/protocols.hpp"

namespace gnpb {

struct SourcePos {
  int line = 1;
  int column = 1;
};

/// Every diagnostic points at the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, const std::string& message);
  SourcePos pos;
  std::string message;
};

struct PdlDocument {
  NamedProtocol protocol;
  /// Start of each node's concrete syntax.
  std::map<const ProtocolNode*, SourcePos> spans;
};

/// Scope and arity checks happen here; numeric checks are left to the engine.
PdlDocument parse_pdl(std::string_view text);

/// Canonical text: 2-space indent, outcomes ordered by name.
std::string serialize_pdl(const NamedProtocol& p);

/// Header, partial trees and derived roots all structurally equal.
bool protocols_equal(const NamedProtocol& a, const NamedProtocol& b);

}  // namespace gnpb
