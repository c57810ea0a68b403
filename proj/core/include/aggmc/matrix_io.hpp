#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "aggmc/stochastic.hpp"

namespace aggmc {

/// Contents of a matrix input file:
///
///     {"m": 3, "matrix": [[...], ...], "labels": ["a", ...], "special": 1}
///
/// `labels` and `special` are optional. `special` is a 1-based symbol number
/// in the file; `special` below is the 0-based index (default 0).
struct MatrixFile {
  TransitionMatrix matrix;
  Index special = 0;
};

struct LoadOptions {
  double tol_row = kDefaultRowTolerance;
  /// Entries strictly below this threshold are set to zero before
  /// validation; the row-sum tolerance widens to max(tol_row, m * zero_tol).
  double zero_tol = 0.0;
};

MatrixFile parse_matrix_json(std::string_view text, const LoadOptions& options = {});
MatrixFile load_matrix_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// Serializes back to the input schema (special written 1-based).
std::string to_matrix_json(const TransitionMatrix& matrix, Index special = 0);

}  // namespace aggmc
