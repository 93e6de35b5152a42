#pragma once

#include <filesystem>
#include <iosfwd>

#include "stap/types.hpp"

namespace stap {

// Binary complex matrix format shared by covariance export and filter
// checkpoints:
//   uint32 rows, uint32 cols            (little-endian)
//   rows*cols entries, row-major, each as float64 real then float64 imag
//                                       (little-endian)
// Several matrices may be concatenated in one stream.

void write_matrix(std::ostream& os, const CMatrix& m);
CMatrix read_matrix(std::istream& is);

void save_matrix(const std::filesystem::path& path, const CMatrix& m);
CMatrix load_matrix(const std::filesystem::path& path);

}  // namespace stap
