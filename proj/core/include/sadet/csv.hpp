#pragma once

#include <string>

#include "sadet/hankel.hpp"

namespace sadet::io {

/// Read an I/O dataset from CSV. The header must be
/// `k,u_1,...,u_m,y_1,...,y_p`; the k column must be contiguous from 0.
/// Errors carry the offending row and column.
data::IoDataset ingest_csv(const std::string& path);

/// Write a dataset in the same layout, floats at 17 significant digits so
/// a round trip is bit-exact.
void export_csv(const std::string& path, const data::IoDataset& data);

}  // namespace sadet::io
