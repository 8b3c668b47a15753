#pragma once

// Batch export: CSV with a header row and one vectorized matrix per line,
// plus a JSON manifest. Coordinates follow vectorize(): packed lower
// triangle (0,0), (1,0), (1,1), (2,0), ... with off-diagonals scaled by
// sqrt(2); column (i,j) is named vec_i_j.

#include "mgig/independence.hpp"

#include <iosfwd>
#include <string>

namespace mgig {

std::string csv_header(int dim);

/// Values are written with 17 significant digits and LF line endings, so
/// output is byte-identical for identical batches.
void write_batch_csv(std::ostream& out, const SampleBatch& batch);
void write_batch_csv(const std::string& path, const SampleBatch& batch);

/// Inverse of write_batch_csv; the manifest is left empty.
SampleBatch read_batch_csv(std::istream& in);
SampleBatch read_batch_csv(const std::string& path);

/// A single matrix stored as a one-row batch CSV.
SymMatrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const std::string& path, const SymMatrix& m);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace mgig
