#pragma once

// File formats and deterministic report writers.
//
// Isometry:   {"d": 2, "entries": [[l1, l2, u, re, im], ...]}   lambda^u_{l1 l2}
// Top tensor: {"d": 2, "entries": [[l1, l2, re, im], ...]}       C(l1, l2)
// Observable: {"d": 2, "entries": [[row, col, re, im], ...]}
// Entries not listed are zero; repeated entries are an error.

#include <string>
#include <vector>

#include "json.hpp"

#include "hbts/tensor_core.hpp"

namespace hbts::io {

using Json = nlohmann::json;

class IoError : public Error {
 public:
  using Error::Error;
};

Json read_json(const std::string& path);

Isometry isometry_from_json(const Json& j);
Json isometry_to_json(const Isometry& lam);
Isometry read_isometry(const std::string& path);

TopTensor top_from_json(const Json& j);
Json top_to_json(const TopTensor& c);
TopTensor read_top(const std::string& path);

/// Unvalidated matrix of an observable file; Hermiticity is checked by Observable.
Matrix observable_matrix_from_json(const Json& j);
/// A built-in name (x, y, z, p0, p1, id; d = 2 only) or a path to an observable file.
Observable resolve_observable(const std::string& name_or_path, int d);

/// "1,2.5,3" -> {1, 2.5, 3}
std::vector<double> parse_number_list(const std::string& text);

/// Sorted keys, two-space indent, doubles as %.17g, non-finite doubles as
/// the strings "inf", "-inf" and "nan". Output ends with a newline.
std::string dump(const Json& j);

std::string format_double(double x);

/// Rows are written as given; values are already formatted.
std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

/// Writes to a temporary file in the same directory, then renames it over path.
void write_atomic(const std::string& path, const std::string& content);

Json complex_json(Complex z);
Json matrix_json(const Matrix& m);  // [[[re, im], ...], ...] row-major

}  // namespace hbts::io
