#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "suotbary/gaussian.hpp"
#include "suotbary/spd.hpp"

namespace suotbary {

/// Matrix objects are {"d": int, "data": [row-major d*d reals]}. Readers
/// reject entries that are asymmetric by more than kJsonSymmetryTolerance.
inline constexpr double kJsonSymmetryTolerance = 1e-9;

std::string matrix_to_json(const SymMatrix& m);
SymMatrix sym_from_json(std::string_view text);
SpdMatrix spd_from_json(std::string_view text);

/// Measure objects are {"mass": real, "mean": [d reals], "cov": matrix}.
std::string measure_to_json(const GaussianMeasure& g);
GaussianMeasure measure_from_json(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
/// Creates parent directories as needed.
void write_text_file(const std::filesystem::path& path, std::string_view content);

SpdMatrix load_spd(const std::filesystem::path& path);
void save_matrix(const std::filesystem::path& path, const SymMatrix& m);
GaussianMeasure load_measure(const std::filesystem::path& path);
void save_measure(const std::filesystem::path& path, const GaussianMeasure& g);

}  // namespace suotbary
