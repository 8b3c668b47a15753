#include "mgig/batch_io.hpp"

#include "mgig/errors.hpp"

#include <cerrno>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace mgig {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream s(line);
  while (std::getline(s, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(std::string text, std::size_t line_no) {
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.pop_back();
  while (!text.empty() && text.front() == ' ') text.erase(text.begin());
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw IoError("line " + std::to_string(line_no) + ": '" + text + "' is not a number");
  }
  return v;
}

}  // namespace

std::string csv_header(int dim) {
  std::string h;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (!h.empty()) h += ',';
      h += "vec_" + std::to_string(i) + "_" + std::to_string(j);
    }
  }
  return h;
}

void write_batch_csv(std::ostream& out, const SampleBatch& batch) {
  out << csv_header(batch.matrix_dim()) << '\n';
  const auto& c = batch.coords();
  char buf[32];
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      if (j > 0) out << ',';
      std::snprintf(buf, sizeof buf, "%.17g", c(i, j));
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed");
}

void write_batch_csv(const std::string& path, const SampleBatch& batch) {
  auto out = open_out(path);
  write_batch_csv(out, batch);
}

SampleBatch read_batch_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  const int dim = dim_from_vector_length(header.size());
  if (line != csv_header(dim)) throw IoError("unexpected CSV header '" + line + "'");

  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw IoError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) + " fields");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("CSV has no data rows");
  Eigen::MatrixXd coords(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < header.size(); ++j)
      coords(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return {std::move(coords), dim};
}

SampleBatch read_batch_csv(const std::string& path) {
  auto in = open_in(path);
  return read_batch_csv(in);
}

SymMatrix read_matrix_csv(const std::string& path) {
  const SampleBatch b = read_batch_csv(path);
  if (b.size() != 1) throw IoError("'" + path + "' must contain exactly one matrix row");
  return b.matrix(0);
}

void write_matrix_csv(const std::string& path, const SymMatrix& m) {
  write_batch_csv(path, SampleBatch::from_sym(std::span<const SymMatrix>(&m, 1)));
}

void write_json(const std::string& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

nlohmann::json read_json(const std::string& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("'" + path + "': " + e.what());
  }
}

}  // namespace mgig
