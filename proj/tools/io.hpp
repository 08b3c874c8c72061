#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "aisle/hocolim.hpp"
#include "aisle/tstruct.hpp"

namespace aisle::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Malformed or inconsistent input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major array of strings.
json to_json(const Matrix& m);
/// Parses a row-major array of exact scalars with the given shape.
Matrix matrix_from_json(const json& j, Field f, std::size_t rows, std::size_t cols);

json to_json(const FDAlgebra& a);
json to_json(const FDModule& m);
json to_json(const BoundedComplex& c);
json to_json(const PerfectComplex& e);
/// Degree -> component.
json to_json(const ChainMap& f);
json to_json(const ThickCertificate& c, const std::string& generator);
json to_json(const AisleCertificate& c);
json dims_json(const std::map<int, std::size_t>& dims);

/// Parsed input. Names are unique across complexes and perfect complexes;
/// a perfect complex may be used wherever a complex is expected.
struct Document {
  Field field;
  std::map<std::string, AlgebraPtr> algebras;
  std::map<std::string, FDModule> modules;
  std::map<std::string, BoundedComplex> complexes;
  std::map<std::string, PerfectComplex> perfect;
  std::map<std::string, ThickCertificate> certificates;
  std::map<std::string, DirectedSystem> systems;

  const BoundedComplex& complex(const std::string& name) const;
  const PerfectComplex& perfect_complex(const std::string& name) const;
  const ThickCertificate& certificate(const std::string& name) const;
  const DirectedSystem& system(const std::string& name) const;
};

/// Library errors raised while building objects (non-functorial systems,
/// bad differentials) propagate unchanged; shape and schema errors become
/// ParseError.
Document parse_document(const json& j, std::optional<Field> field_override = std::nullopt);
Document load_document(const std::string& path, std::optional<Field> field_override = std::nullopt);

}  // namespace aisle::io
