#pragma once

// Polynomial expressions and map-description files.
//
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nonneg-int)?
//   base   := integer | integer '/' integer | variable | '(' expr ')'

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "padyn/models.hpp"
#include "padyn/polynomial.hpp"

namespace padyn {

/// Parses text over the given variables. Rational literals need p-unit denominators.
Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& variables,
                            std::uint64_t p);

enum class MapKind { P1, Affine, PolyChart };
const char* to_string(MapKind k);

struct MapDescription {
  MapKind kind = MapKind::P1;
  std::uint64_t p = 2;
  int precision = kDefaultPrecision;
  std::vector<std::string> variables;  // one entry for p1 and poly-chart
  std::string numerator, denominator = "1";
  std::vector<std::string> relations, map;  // affine
  std::string polynomial;                   // poly-chart
  std::optional<int> val_floor;
  std::map<std::string, std::string> options;  // everything under [options]
};

/// Reads the [model] / [options] key-value format.
MapDescription parse_map_description(std::string_view text);
MapDescription load_map_description(const std::string& path);

/// Builds the P^1 or affine model (a poly-chart description becomes the A^1 model).
Model build_model(const MapDescription& desc);
Polynomial chart_polynomial(const MapDescription& desc);

}  // namespace padyn
