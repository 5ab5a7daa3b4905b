// CSV data ingestion and draws persistence. Input CSV: UTF-8, header row,
// last column is the response, remaining columns are predictors. Draws go
// out as CSV (default) or a compact binary columnar format with magic
// "HSDRAWS1" followed by row/col counts.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhs/glm.hpp"
#include "bhs/linear.hpp"

namespace bhs {

struct ParseError : std::runtime_error {
  int row;     // 1-based, including header
  int column;  // 1-based, 0 when not cell-specific
  ParseError(std::string msg, int r, int c)
      : std::runtime_error(std::move(msg) + " (row " + std::to_string(r) +
                           ", column " + std::to_string(c) + ")"),
        row(r), column(c) {}
};

struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;  // data rows x columns
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'", 0, 0);

  CsvTable table;
  std::string line;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    if (lineno == 1) {
      while (std::getline(ss, cell, ',')) table.header.push_back(cell);
      if (table.header.size() < 2) {
        throw ParseError("need at least one predictor and a response column", 1, 0);
      }
      continue;
    }
    std::vector<double> row;
    int col = 0;
    while (std::getline(ss, cell, ',')) {
      ++col;
      try {
        std::size_t pos = 0;
        double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("non-numeric cell '" + cell + "'", lineno, col);
      }
    }
    if (row.size() != table.header.size()) {
      throw ParseError("ragged row: expected " +
                           std::to_string(table.header.size()) + " cells, got " +
                           std::to_string(row.size()),
                       lineno, 0);
    }
    rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ParseError("empty file", 0, 0);
  if (rows.empty()) throw ParseError("no data rows", 1, 0);

  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

// Linear family: standardized predictors, centred response.
inline RegressionData load_csv_linear(const std::string& path) {
  CsvTable t = read_csv(path);
  Eigen::Index p = t.values.cols() - 1;
  return standardize(t.values.leftCols(p), t.values.col(p));
}

// GLM families: an all-ones intercept column is injected in front of the
// predictors; predictors are left on their original scale.
inline GlmData load_csv_glm(const std::string& path, GlmFamily family,
                            double dispersion_h = 1.0) {
  CsvTable t = read_csv(path);
  Eigen::Index n = t.values.rows();
  Eigen::Index p = t.values.cols() - 1;
  GlmData d;
  d.X.resize(n, p + 1);
  d.X.col(0).setOnes();
  d.X.rightCols(p) = t.values.leftCols(p);
  d.y = t.values.col(p);
  d.dispersion_h = dispersion_h;
  validate(d, family);
  return d;
}

inline std::vector<std::string> csv_predictor_names(const std::string& path) {
  CsvTable t = read_csv(path);
  t.header.pop_back();
  return t.header;
}

inline void write_draws_csv(const std::string& path, const Eigen::MatrixXd& draws,
                            const std::vector<std::string>& names) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (std::size_t j = 0; j < names.size(); ++j) {
    out << (j ? "," : "") << names[j];
  }
  out << '\n';
  out.precision(17);
  for (Eigen::Index i = 0; i < draws.rows(); ++i) {
    for (Eigen::Index j = 0; j < draws.cols(); ++j) {
      out << (j ? "," : "") << draws(i, j);
    }
    out << '\n';
  }
}

inline Eigen::MatrixXd read_draws_csv(const std::string& path) {
  CsvTable t = read_csv(path);
  return t.values;
}

inline constexpr char kDrawsMagic[9] = "HSDRAWS1";  // 8 bytes + NUL

inline void write_draws_binary(const std::string& path, const Eigen::MatrixXd& draws) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  char magic[16] = {0};
  std::memcpy(magic, kDrawsMagic, 8);
  out.write(magic, 16);
  std::uint64_t dims[2] = {static_cast<std::uint64_t>(draws.rows()),
                           static_cast<std::uint64_t>(draws.cols())};
  out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  // column-major, doubles
  out.write(reinterpret_cast<const char*>(draws.data()),
            static_cast<std::streamsize>(sizeof(double) * draws.size()));
}

inline Eigen::MatrixXd read_draws_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'", 0, 0);
  char magic[16];
  in.read(magic, 16);
  if (!in || std::memcmp(magic, kDrawsMagic, 8) != 0) {
    throw ParseError("bad magic in draws file '" + path + "'", 0, 0);
  }
  std::uint64_t dims[2];
  in.read(reinterpret_cast<char*>(dims), sizeof(dims));
  Eigen::MatrixXd draws(static_cast<Eigen::Index>(dims[0]),
                        static_cast<Eigen::Index>(dims[1]));
  in.read(reinterpret_cast<char*>(draws.data()),
          static_cast<std::streamsize>(sizeof(double) * draws.size()));
  if (!in) throw ParseError("truncated draws file '" + path + "'", 0, 0);
  return draws;
}

}  // namespace bhs
