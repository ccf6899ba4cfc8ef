#include "haar/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "haar/errors.hpp"

namespace haar {

namespace {

std::string fmt17(double x) {
  if (!std::isfinite(x)) throw DomainError("matrix entries must be finite");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string matrix_to_text(const CMat& m) {
  std::ostringstream os;
  os << "{\"rows\": " << m.rows() << ", \"cols\": " << m.cols() << ", \"data\": [";
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (i) os << ", ";
    os << fmt17(m.data()[i].real()) << ", " << fmt17(m.data()[i].imag());
  }
  os << "]}\n";
  return os.str();
}

nlohmann::json matrix_to_json(const CMat& m) { return nlohmann::json::parse(matrix_to_text(m)); }

CMat matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw DimensionError("matrix file: expected fields rows, cols, data");
  }
  const auto rows = j.at("rows").get<std::int64_t>();
  const auto cols = j.at("cols").get<std::int64_t>();
  const auto& data = j.at("data");
  if (rows < 1 || cols < 1 || !data.is_array() ||
      static_cast<std::int64_t>(data.size()) != 2 * rows * cols) {
    throw DimensionError("matrix file: data length does not match rows*cols");
  }
  CMat m(rows, cols);
  for (std::int64_t i = 0; i < rows * cols; ++i) {
    const double re = data[2 * i].get<double>();
    const double im = data[2 * i + 1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) throw DomainError("matrix file: non-finite entry");
    m.data()[i] = Complex(re, im);
  }
  return m;
}

CMat matrix_from_text(const std::string& text) { return matrix_from_json(nlohmann::json::parse(text)); }

void save_matrix(const std::filesystem::path& path, const CMat& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << matrix_to_text(m);
}

CMat load_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return matrix_from_text(ss.str());
}

}  // namespace haar
