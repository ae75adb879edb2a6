#ifndef RRSVD_MATRIX_IO_HPP
#define RRSVD_MATRIX_IO_HPP

#include <string>
#include <vector>

#include "rrsvd/dense_matrix.hpp"

namespace rrsvd {

// RRSM v1 binary matrix file:
//   magic "RRSM" | u32 version=1 | u8 dtype (0 = complex double) |
//   u64 rows | u64 cols | rows*cols little-endian (re, im) double pairs, row-major.
void write_rrsm(const std::string& path, const DenseMatrix& a);

// Rejects unknown magic/version/dtype and non-finite payloads.
DenseMatrix read_rrsm(const std::string& path);

// Plain-text value list, one decimal value per line, full precision.
void write_value_lines(const std::string& path, const std::vector<double>& values);
std::vector<double> read_value_lines(const std::string& path);

}  // namespace rrsvd

#endif
