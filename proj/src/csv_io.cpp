#include "outerinv/csv_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace outerinv {

Matrix parse_matrix_csv(std::istream& in, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // skip blank lines only at the tail of the file
    if (line.find_first_not_of(" \t") == std::string::npos) {
      std::string rest;
      while (std::getline(in, rest)) {
        if (rest.find_first_not_of(" \t\r") != std::string::npos) {
          throw IoError(origin + ":" + std::to_string(line_no) +
                        ": blank line inside matrix");
        }
      }
      break;
    }
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      std::size_t consumed = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &consumed);
      } catch (const std::exception&) {
        throw IoError(origin + ":" + std::to_string(line_no) +
                      ": not a number: '" + cell + "'");
      }
      if (cell.find_first_not_of(" \t", consumed) != std::string::npos) {
        throw IoError(origin + ":" + std::to_string(line_no) +
                      ": trailing garbage in cell: '" + cell + "'");
      }
      if (!std::isfinite(value)) {
        throw IoError(origin + ":" + std::to_string(line_no) +
                      ": non-finite entry");
      }
      row.push_back(value);
    }
    if (row.empty()) {
      throw IoError(origin + ":" + std::to_string(line_no) + ": empty row");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(origin + ":" + std::to_string(line_no) +
                    ": ragged row (expected " +
                    std::to_string(rows.front().size()) + " columns, got " +
                    std::to_string(row.size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw IoError(origin + ": no matrix data");
  }
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open for reading");
  return parse_matrix_csv(in, path);
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  out << std::setprecision(17);
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  write_matrix_csv(out, m);
  if (!out) throw IoError(path + ": write failed");
}

}  // namespace outerinv
