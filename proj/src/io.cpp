#include "hbts/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

namespace hbts::io {

namespace {

int as_index(const Json& v, int bound, const char* what) {
  if (!v.is_number_integer()) throw ArgumentError(std::string(what) + " must be an integer");
  const auto i = v.get<long long>();
  if (i < 0 || i >= bound) throw ArgumentError(std::string(what) + " out of range");
  return static_cast<int>(i);
}

double as_real(const Json& v, const char* what) {
  if (!v.is_number()) throw ArgumentError(std::string(what) + " must be a number");
  return v.get<double>();
}

int read_d(const Json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("entries"))
    throw ArgumentError("expected an object with \"d\" and \"entries\"");
  if (!j["d"].is_number_integer()) throw ArgumentError("\"d\" must be an integer");
  const auto d = j["d"].get<long long>();
  if (d < 2 || d > 64) throw ArgumentError("\"d\" must be in 2..64");
  if (!j["entries"].is_array()) throw ArgumentError("\"entries\" must be an array");
  return static_cast<int>(d);
}

// Reads [i_0, ..., i_{k-1}, re, im] rows into m(row_of(indices), col_of(indices)).
template <typename Place>
Matrix read_entries(const Json& entries, int d, std::size_t n_idx, Eigen::Index rows, Eigen::Index cols, Place place) {
  Matrix m = Matrix::Zero(rows, cols);
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
  for (const Json& e : entries) {
    if (!e.is_array() || e.size() != n_idx + 2)
      throw ArgumentError("each entry must have " + std::to_string(n_idx + 2) + " elements");
    std::vector<int> idx;
    for (std::size_t k = 0; k < n_idx; ++k) idx.push_back(as_index(e[k], d, "index"));
    const auto [r, c] = place(idx);
    if (!seen.insert({r, c}).second) throw ArgumentError("repeated entry");
    m(r, c) = Complex(as_real(e[n_idx], "real part"), as_real(e[n_idx + 1], "imaginary part"));
  }
  return m;
}

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map storage: sorted keys
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          emit(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        emit(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "\"" + format_double(x) + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

Isometry isometry_from_json(const Json& j) {
  const int d = read_d(j);
  Matrix v = read_entries(j["entries"], d, 3, d * d, d, [d](const std::vector<int>& i) {
    return std::pair<Eigen::Index, Eigen::Index>{i[0] * d + i[1], i[2]};
  });
  return Isometry(d, std::move(v));
}

Json isometry_to_json(const Isometry& lam) {
  const int d = lam.d();
  Json entries = Json::array();
  for (int l1 = 0; l1 < d; ++l1)
    for (int l2 = 0; l2 < d; ++l2)
      for (int u = 0; u < d; ++u) {
        const Complex z = lam.entry(l1, l2, u);
        if (z != Complex(0.0)) entries.push_back({l1, l2, u, z.real(), z.imag()});
      }
  return Json{{"d", d}, {"entries", entries}};
}

Isometry read_isometry(const std::string& path) { return isometry_from_json(read_json(path)); }

TopTensor top_from_json(const Json& j) {
  const int d = read_d(j);
  Matrix c = read_entries(j["entries"], d, 2, d, d, [](const std::vector<int>& i) {
    return std::pair<Eigen::Index, Eigen::Index>{i[0], i[1]};
  });
  return TopTensor(d, std::move(c));
}

Json top_to_json(const TopTensor& c) {
  Json entries = Json::array();
  for (int l1 = 0; l1 < c.d(); ++l1)
    for (int l2 = 0; l2 < c.d(); ++l2) {
      const Complex z = c.matrix()(l1, l2);
      if (z != Complex(0.0)) entries.push_back({l1, l2, z.real(), z.imag()});
    }
  return Json{{"d", c.d()}, {"entries", entries}};
}

TopTensor read_top(const std::string& path) { return top_from_json(read_json(path)); }

Matrix observable_matrix_from_json(const Json& j) {
  const int d = read_d(j);
  return read_entries(j["entries"], d, 2, d, d, [](const std::vector<int>& i) {
    return std::pair<Eigen::Index, Eigen::Index>{i[0], i[1]};
  });
}

Observable resolve_observable(const std::string& name_or_path, int d) {
  static const std::set<std::string> builtin = {"x", "y", "z", "p0", "p1", "id"};
  if (builtin.count(name_or_path)) {
    if (d != 2) throw ArgumentError("built-in observables are defined for d = 2 only");
    return Observable::named(name_or_path);
  }
  Matrix m = observable_matrix_from_json(read_json(name_or_path));
  if (m.rows() != d) throw ShapeError("observable dimension does not match the isometry");
  return Observable(d, std::move(m));
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ArgumentError("not a number: '" + item + "'");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw ArgumentError("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const Json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename onto " + path);
  }
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hbts::io
