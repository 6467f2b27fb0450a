#pragma once

// Text formats: permutation lines, permuton JSON specs, CSV tables.
//
// Permuton spec:
//   {"kind":"uniform"}
//   {"kind":"from_permutation","values":[2,1]}
//   {"kind":"grid","matrix":[["4/5","1/5"],[0.2,0.8]]}
// Matrix entries are JSON numbers or "p/q" strings, both read exactly.

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "permlim/counting.hpp"
#include "permlim/errors.hpp"
#include "permlim/permutation.hpp"
#include "permlim/permuton.hpp"
#include "permlim/rational.hpp"
#include "permlim/sampling.hpp"

namespace permlim {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal, independent of locale.
inline std::string format_double(double v) {
  std::array<char, 64> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), v);
  if (ec != std::errc{}) throw InvariantError("cannot format double");
  return std::string(buffer.data(), ptr);
}

inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(BigInt(j.get<long long>()));
  if (j.is_number_unsigned()) return Rational(BigInt(j.get<unsigned long long>()));
  if (j.is_number_float()) return rational_from_double(j.get<double>());
  throw InputError("expected a number or \"p/q\" string, got " + j.dump());
}

inline Permuton permuton_from_json(const Json& spec) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string()) {
    throw InputError("permuton spec needs a string \"kind\"");
  }
  const std::string kind = spec["kind"].get<std::string>();
  if (kind == "uniform") return UniformPermuton{};
  if (kind == "from_permutation") {
    if (!spec.contains("values") || !spec["values"].is_array()) {
      throw InputError("from_permutation spec needs a \"values\" array");
    }
    std::vector<Permutation::value_type> values;
    for (const auto& v : spec["values"]) {
      if (!v.is_number_integer() || v.get<long long>() < 1) throw InputError("bad permutation value " + v.dump());
      values.push_back(static_cast<Permutation::value_type>(v.get<long long>()));
    }
    return GridPermuton::from_permutation(Permutation(std::move(values)));
  }
  if (kind == "grid") {
    if (!spec.contains("matrix") || !spec["matrix"].is_array()) {
      throw InputError("grid spec needs a \"matrix\" array of rows");
    }
    GridPermuton::Matrix rows;
    for (const auto& row : spec["matrix"]) {
      if (!row.is_array()) throw InputError("grid matrix rows must be arrays");
      std::vector<Rational> parsed;
      for (const auto& entry : row) parsed.push_back(rational_from_json(entry));
      rows.push_back(std::move(parsed));
    }
    return GridPermuton::from_matrix(rows);
  }
  throw InputError("unknown permuton kind '" + kind + "'");
}

inline Permuton permuton_from_json_text(const std::string& text) {
  Json spec;
  try {
    spec = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("invalid permuton JSON: ") + e.what());
  }
  return permuton_from_json(spec);
}

inline Json permuton_to_json(const Permuton& z) {
  if (std::holds_alternative<UniformPermuton>(z)) return Json{{"kind", "uniform"}};
  const auto& g = std::get<GridPermuton>(z);
  Json matrix = Json::array();
  for (std::size_t r = 1; r <= g.resolution(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 1; c <= g.resolution(); ++c) row.push_back(to_string(g.entry(r, c)));
    matrix.push_back(std::move(row));
  }
  return Json{{"kind", "grid"}, {"matrix", std::move(matrix)}};
}

// {"exact": "p/q", "float": 0.5}
inline Json rational_json(const Rational& r) { return Json{{"exact", to_string(r)}, {"float", to_double(r)}}; }

/// Every non-blank line that does not start with '#', parsed as a permutation.
/// Errors carry the 1-based line number.
inline std::vector<Permutation> read_permutations(std::istream& in) {
  std::vector<Permutation> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r,");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(parse_permutation(line));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

inline void write_distribution_csv(std::ostream& out, const PatternDistribution& dist) {
  out << "pattern,numerator,denominator,density_float\n";
  const auto patterns = all_permutations(dist.k);
  for (const Permutation& tau : patterns) {
    const Rational value = dist.density(tau);
    out << tau.to_string("-") << ',' << numerator_of(value) << ',' << denominator_of(value) << ','
        << format_double(to_double(value)) << '\n';
  }
}

inline void write_points_csv(std::ostream& out, const PointSample& sample) {
  out << "x,y\n";
  for (std::size_t i = 0; i < sample.size(); ++i) out << format_double(sample.x[i]) << ',' << format_double(sample.y[i]) << '\n';
}

}  // namespace permlim
