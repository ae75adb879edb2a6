#include "rrsvd/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "rrsvd/errors.hpp"

namespace rrsvd {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw contract_violation("DenseMatrix: data length does not match rows*cols");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const {
    for (const cplx& z : data_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

DenseMatrix DenseMatrix::left_cols(std::size_t keep) const {
    if (keep > cols_) throw contract_violation("left_cols: keep > cols");
    DenseMatrix out(rows_, keep);
    for (std::size_t i = 0; i < rows_; ++i)
        std::copy_n(&data_[i * cols_], keep, &out.data()[i * keep]);
    return out;
}

DenseMatrix DenseMatrix::hcat(const DenseMatrix& right) const {
    if (rows_ != right.rows()) throw contract_violation("hcat: row mismatch");
    DenseMatrix out(rows_, cols_ + right.cols());
    for (std::size_t i = 0; i < rows_; ++i) {
        std::copy_n(&data_[i * cols_], cols_, &out.data()[i * out.cols()]);
        std::copy_n(&right.data()[i * right.cols()], right.cols(),
                    &out.data()[i * out.cols() + cols_]);
    }
    return out;
}

void DenseMatrix::scale_cols(const std::vector<double>& s) {
    if (s.size() != cols_) throw contract_violation("scale_cols: size mismatch");
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) data_[i * cols_ + j] *= s[j];
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& z : data_) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace rrsvd
