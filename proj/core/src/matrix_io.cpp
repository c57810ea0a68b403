#include "aggmc/matrix_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aggmc/error.hpp"

namespace aggmc {

using nlohmann::json;

MatrixFile parse_matrix_json(std::string_view text, const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InputFormat, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InputFormat, "top-level value must be an object");
  if (!doc.contains("matrix") || !doc["matrix"].is_array())
    throw Error(ErrorCode::InputFormat, "missing array field \"matrix\"");

  std::vector<std::vector<double>> rows;
  for (const auto& row : doc["matrix"]) {
    if (!row.is_array()) throw Error(ErrorCode::InputFormat, "\"matrix\" rows must be arrays");
    std::vector<double> values;
    for (const auto& x : row) {
      if (!x.is_number()) throw Error(ErrorCode::InputFormat, "matrix entries must be numbers");
      values.push_back(x.get<double>());
    }
    rows.push_back(std::move(values));
  }

  const auto m = static_cast<Index>(rows.size());
  if (doc.contains("m")) {
    if (!doc["m"].is_number_integer())
      throw Error(ErrorCode::InputFormat, "\"m\" must be an integer");
    if (doc["m"].get<Index>() != m) {
      std::ostringstream os;
      os << "\"m\" = " << doc["m"].get<Index>() << " but matrix has " << m << " rows";
      throw Error(ErrorCode::NotSquare, os.str());
    }
  }

  std::vector<std::string> labels;
  if (doc.contains("labels") && !doc["labels"].is_null()) {
    if (!doc["labels"].is_array()) throw Error(ErrorCode::InputFormat, "\"labels\" must be an array");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) throw Error(ErrorCode::InputFormat, "labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }

  double tol_row = options.tol_row;
  if (options.zero_tol > 0.0) {
    for (auto& row : rows)
      for (auto& x : row)
        if (x >= 0.0 && x < options.zero_tol) x = 0.0;
    tol_row = std::max(tol_row, static_cast<double>(m) * options.zero_tol);
  }

  MatrixFile out{TransitionMatrix::validate(rows, tol_row, std::move(labels)), 0};
  if (doc.contains("special") && !doc["special"].is_null()) {
    if (!doc["special"].is_number_integer())
      throw Error(ErrorCode::InputFormat, "\"special\" must be an integer");
    const auto special = doc["special"].get<Index>();
    if (special < 1 || special > m) {
      std::ostringstream os;
      os << "\"special\" = " << special << " outside 1.." << m;
      throw Error(ErrorCode::InvalidSymbol, os.str());
    }
    out.special = special - 1;
  }
  return out;
}

MatrixFile load_matrix_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix_json(buffer.str(), options);
}

std::string to_matrix_json(const TransitionMatrix& matrix, Index special) {
  json doc;
  doc["m"] = matrix.size();
  json rows = json::array();
  for (Index i = 0; i < matrix.size(); ++i) {
    json row = json::array();
    for (Index j = 0; j < matrix.size(); ++j) row.push_back(matrix(i, j));
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  if (!matrix.labels().empty()) doc["labels"] = matrix.labels();
  doc["special"] = special + 1;
  return doc.dump(2);
}

}  // namespace aggmc
