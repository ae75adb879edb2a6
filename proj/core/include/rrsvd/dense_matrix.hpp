#ifndef RRSVD_DENSE_MATRIX_HPP
#define RRSVD_DENSE_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace rrsvd {

using cplx = std::complex<double>;

// Dense complex matrix, row-major storage.
class DenseMatrix {
  public:
    DenseMatrix() : rows_(0), cols_(0) {}
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    cplx* data() { return data_.data(); }
    const cplx* data() const { return data_.data(); }

    bool all_finite() const;

    // Columns [0, keep) as a new matrix.
    DenseMatrix left_cols(std::size_t keep) const;

    // Horizontal concatenation [*this | right]; row counts must agree.
    DenseMatrix hcat(const DenseMatrix& right) const;

    // Scale column j by s[j] (s.size() == cols).
    void scale_cols(const std::vector<double>& s);

    double max_abs() const;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<cplx> data_;
};

}  // namespace rrsvd

#endif
