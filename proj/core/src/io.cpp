#include "suotbary/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "suotbary/error.hpp"

namespace suotbary {

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return json{{"d", m.rows()}, {"data", std::move(data)}};
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

Eigen::MatrixXd matrix_from(const json& j) {
  if (!j.is_object() || !j.contains("d") || !j.contains("data")) {
    throw Error(ErrorCode::kInvalidInput, "matrix object needs keys 'd' and 'data'");
  }
  if (!j["d"].is_number_integer() || j["d"].get<long long>() < 1) {
    throw Error(ErrorCode::kInvalidInput, "matrix 'd' must be a positive integer");
  }
  const auto d = j["d"].get<long long>();
  const json& data = j["data"];
  if (!data.is_array() || static_cast<long long>(data.size()) != d * d) {
    throw Error(ErrorCode::kInvalidInput, "matrix 'data' must hold d*d numbers");
  }
  Eigen::MatrixXd m(d, d);
  for (long long k = 0; k < d * d; ++k) {
    if (!data[k].is_number()) throw Error(ErrorCode::kInvalidInput, "matrix entries must be numbers");
    m(k / d, k % d) = data[k].get<double>();
  }
  for (long long i = 0; i < d; ++i) {
    for (long long j2 = i + 1; j2 < d; ++j2) {
      if (std::abs(m(i, j2) - m(j2, i)) > kJsonSymmetryTolerance) {
        std::ostringstream os;
        os << "matrix is not symmetric at (" << i << "," << j2 << ")";
        throw Error(ErrorCode::kInvalidInput, os.str());
      }
    }
  }
  return m;
}

GaussianMeasure measure_from(const json& j) {
  if (!j.is_object() || !j.contains("mass") || !j.contains("mean") || !j.contains("cov")) {
    throw Error(ErrorCode::kInvalidInput, "measure object needs keys 'mass', 'mean' and 'cov'");
  }
  if (!j["mass"].is_number()) throw Error(ErrorCode::kInvalidInput, "measure 'mass' must be a number");
  const json& mean = j["mean"];
  if (!mean.is_array()) throw Error(ErrorCode::kInvalidInput, "measure 'mean' must be an array");
  Eigen::VectorXd a(static_cast<Eigen::Index>(mean.size()));
  for (std::size_t k = 0; k < mean.size(); ++k) {
    if (!mean[k].is_number()) throw Error(ErrorCode::kInvalidInput, "mean entries must be numbers");
    a(static_cast<Eigen::Index>(k)) = mean[k].get<double>();
  }
  return GaussianMeasure(j["mass"].get<double>(), std::move(a), SpdMatrix(matrix_from(j["cov"])));
}

}  // namespace

std::string matrix_to_json(const SymMatrix& m) { return matrix_json(m.mat()).dump(); }

SymMatrix sym_from_json(std::string_view text) { return SymMatrix(matrix_from(parse(text))); }

SpdMatrix spd_from_json(std::string_view text) { return SpdMatrix(matrix_from(parse(text))); }

std::string measure_to_json(const GaussianMeasure& g) {
  json j;
  j["mass"] = g.mass;
  j["mean"] = std::vector<double>(g.mean.data(), g.mean.data() + g.mean.size());
  j["cov"] = matrix_json(g.cov.mat());
  return j.dump();
}

GaussianMeasure measure_from_json(std::string_view text) { return measure_from(parse(text)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create directory " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

SpdMatrix load_spd(const std::filesystem::path& path) {
  try {
    return spd_from_json(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_matrix(const std::filesystem::path& path, const SymMatrix& m) { write_text_file(path, matrix_to_json(m)); }

GaussianMeasure load_measure(const std::filesystem::path& path) {
  try {
    return measure_from_json(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_measure(const std::filesystem::path& path, const GaussianMeasure& g) {
  write_text_file(path, measure_to_json(g));
}

}  // namespace suotbary
