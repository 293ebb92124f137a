#include "kreinfield/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kreinfield/errors.hpp"

namespace kreinfield::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

cplx leaf(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw Error(ErrorCode::ParseError, "expected a number or [re, im], got " + j.dump());
}

json to_leaf(cplx v) {
  if (v.imag() == 0.0) return v.real();
  return json::array({v.real(), v.imag()});
}

void read_nested(const json& j, int depth, int letters, std::size_t prefix, Vector& out) {
  if (depth == 0) {
    out(static_cast<Eigen::Index>(prefix)) = leaf(j);
    return;
  }
  if (!j.is_array() || j.size() != static_cast<std::size_t>(letters)) {
    throw Error(ErrorCode::ShapeMismatch, "W entry must be an array of length " + std::to_string(letters));
  }
  for (int l = 0; l < letters; ++l)
    read_nested(j[static_cast<std::size_t>(l)], depth - 1, letters, prefix * static_cast<std::size_t>(letters) + l, out);
}

json write_nested(const Vector& w, int depth, int letters, std::size_t prefix) {
  if (depth == 0) return to_leaf(w(static_cast<Eigen::Index>(prefix)));
  json arr = json::array();
  for (int l = 0; l < letters; ++l)
    arr.push_back(write_nested(w, depth - 1, letters, prefix * static_cast<std::size_t>(letters) + l));
  return arr;
}

}  // namespace

Matrix matrix_from_json(const std::string& text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("dim") || !j.contains("re")) {
    throw Error(ErrorCode::ParseError, "matrix JSON needs \"dim\" and \"re\"");
  }
  const auto n = j.at("dim").get<Eigen::Index>();
  Matrix m = Matrix::Zero(n, n);
  auto fill = [&](const json& rows, bool imag) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n) {
      throw Error(ErrorCode::ShapeMismatch, "matrix JSON row count differs from dim");
    }
    for (Eigen::Index r = 0; r < n; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw Error(ErrorCode::ShapeMismatch, "matrix JSON row length differs from dim");
      }
      for (Eigen::Index c = 0; c < n; ++c) {
        const double v = row[static_cast<std::size_t>(c)].get<double>();
        if (imag) m(r, c).imag(v);
        else m(r, c).real(v);
      }
    }
  };
  try {
    fill(j.at("re"), false);
    if (j.contains("im")) fill(j.at("im"), true);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return m;
}

std::string matrix_to_json(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "matrix JSON holds square matrices");
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array();
    json ri = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return json{{"dim", m.rows()}, {"re", re}, {"im", im}}.dump();
}

gns::WightmanFunctional wightman_from_json(const std::string& text) {
  const json j = parse(text);
  try {
    const int b = j.at("b").get<int>();
    const int d = j.at("d_max").get<int>();
    std::vector<int> star;
    if (j.contains("star")) star = j.at("star").get<std::vector<int>>();
    gns::WightmanFunctional w(gns::AlgebraBasis(b, d, star));
    if (j.contains("W")) {
      for (const auto& [key, value] : j.at("W").items()) {
        std::size_t used = 0;
        const int n = std::stoi(key, &used);
        if (used != key.size() || n < 0) throw Error(ErrorCode::ParseError, "W key \"" + key + "\" is not a degree");
        if (n > d) throw Error(ErrorCode::DegreeOverflow, "W_" + key + " exceeds d_max");
        if (n == 0) {
          if (std::abs(leaf(value) - cplx{1.0, 0.0}) > 0.0) throw Error(ErrorCode::ShapeMismatch, "W_0 must be 1");
          continue;
        }
        read_nested(value, n, b, 0, w.restriction(n));
      }
    }
    w.set_hermitian_flag(gns::hermiticity_check(w, Tolerances{}.eq));
    return w;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string wightman_to_json(const gns::WightmanFunctional& w) {
  const int b = w.letters();
  json jw = json::object();
  for (int n = 1; n <= w.max_degree(); ++n) jw[std::to_string(n)] = write_nested(w.restriction(n), n, b, 0);
  return json{{"b", b}, {"d_max", w.max_degree()}, {"W", jw}, {"star", w.basis().star_map()}}.dump();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ReportWriteFailed, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::ReportWriteFailed, "writing " + path.string() + " failed");
}

}  // namespace kreinfield::io
