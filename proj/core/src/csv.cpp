#include "sadet/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace sadet::io {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

[[noreturn]] void fail(const std::string& path, int row, int col, const std::string& what) {
  throw DataQualityError(path + ": row " + std::to_string(row) + ", column " +
                         std::to_string(col) + ": " + what);
}

double parse_cell(const std::string& path, int row, int col, const std::string& cell) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end != begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  double value = 0.0;
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc{} || result.ptr != end)
    fail(path, row, col, "non-numeric cell '" + cell + "'");
  return value;
}

}  // namespace

data::IoDataset ingest_csv(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw DataQualityError(path + ": cannot open file");

  std::string line;
  if (!std::getline(file, line)) throw DataQualityError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_line(line);
  if (header.empty() || header[0] != "k")
    throw DataQualityError(path + ": header must start with 'k'");
  int m = 0;
  int p = 0;
  std::size_t pos = 1;
  while (pos < header.size() && header[pos] == "u_" + std::to_string(m + 1)) {
    ++m;
    ++pos;
  }
  while (pos < header.size() && header[pos] == "y_" + std::to_string(p + 1)) {
    ++p;
    ++pos;
  }
  if (m == 0 || p == 0 || pos != header.size())
    throw DataQualityError(path + ": header must be k,u_1..u_m,y_1..y_p");

  std::vector<std::vector<double>> rows;
  int row_number = 1;
  while (std::getline(file, line)) {
    ++row_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (static_cast<int>(cells.size()) != 1 + m + p)
      fail(path, row_number, static_cast<int>(cells.size()),
           "expected " + std::to_string(1 + m + p) + " cells, found " +
               std::to_string(cells.size()));
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      values[c] = parse_cell(path, row_number, static_cast<int>(c) + 1, cells[c]);
    const double k = values[0];
    const int expected = static_cast<int>(rows.size());
    if (k != static_cast<double>(expected)) {
      if (k < expected) fail(path, row_number, 1, "duplicate or out-of-order sample index");
      fail(path, row_number, 1,
           "gap in sample index: expected " + std::to_string(expected));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw DataQualityError(path + ": no data rows");

  Eigen::MatrixXd inputs(m, static_cast<Eigen::Index>(rows.size()));
  Eigen::MatrixXd outputs(p, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (int i = 0; i < m; ++i) inputs(i, static_cast<Eigen::Index>(k)) = rows[k][1 + i];
    for (int i = 0; i < p; ++i)
      outputs(i, static_cast<Eigen::Index>(k)) = rows[k][1 + m + i];
  }
  return data::IoDataset(std::move(inputs), std::move(outputs));
}

void export_csv(const std::string& path, const data::IoDataset& data) {
  std::ofstream file(path);
  if (!file) throw DataQualityError(path + ": cannot open file for writing");

  file << "k";
  for (int i = 1; i <= data.m(); ++i) file << ",u_" << i;
  for (int i = 1; i <= data.p(); ++i) file << ",y_" << i;
  file << "\n";

  char buf[64];
  for (int k = 0; k < data.length(); ++k) {
    file << k;
    for (int i = 0; i < data.m(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.inputs(i, k));
      file << ',' << buf;
    }
    for (int i = 0; i < data.p(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.outputs(i, k));
      file << ',' << buf;
    }
    file << "\n";
  }
  if (!file) throw DataQualityError(path + ": write failed");
}

}  // namespace sadet::io
