// Persistent JSON term documents.
//
// A document stores one expression together with provenance metadata.  The
// format is versioned; readers refuse documents written by a newer schema.
// Round-trips are bit-exact on canonical expressions: rational numbers are
// serialized as decimal strings and term order is preserved.
#pragma once

#include "heatcas/expression.hpp"

#include <stdexcept>
#include <string>

namespace heatcas {

inline constexpr int kSchemaVersion = 1;

struct DocumentMeta {
  int order = -1;             // heat-coefficient order, -1 if not applicable
  std::string assumptions;    // comma-separated flags, empty if none
  std::string engine_version; // filled by the writer
  long seed = 0;              // RNG seed when the content depends on one
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string serialize_document(const Expression& e, const DocumentMeta& meta);
Expression parse_document(const std::string& text, DocumentMeta* meta = nullptr);

} // namespace heatcas
