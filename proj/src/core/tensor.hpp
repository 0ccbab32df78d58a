#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sg2vec {

// Dense row-major matrix of doubles. The only numeric container in the
// library; vectors are 1xN or Nx1 tensors.
struct Tensor2 {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // rows*cols, row-major

    Tensor2() = default;
    Tensor2(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    Tensor2(int r, int c, std::vector<double> d);

    static Tensor2 zeros(int r, int c) { return Tensor2(r, c); }
    static Tensor2 filled(int r, int c, double v);
    static Tensor2 identity(int n);
    // 1xN row from an initializer-style vector
    static Tensor2 row(const std::vector<double>& v);

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    double* row_ptr(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row_ptr(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

    std::size_t size() const { return data.size(); }
    bool same_shape(const Tensor2& o) const { return rows == o.rows && cols == o.cols; }
    std::string shape_str() const;

    bool all_finite() const;
};

// out = a * b           (a: m x k, b: k x n)
Tensor2 matmul(const Tensor2& a, const Tensor2& b);
// out = a * b^T         (a: m x k, b: n x k)
Tensor2 matmul_bt(const Tensor2& a, const Tensor2& b);
// out = a^T * b         (a: k x m, b: k x n)
Tensor2 matmul_at(const Tensor2& a, const Tensor2& b);
// out += a * b, into a preallocated accumulator
void matmul_acc(const Tensor2& a, const Tensor2& b, Tensor2& out);

// Throws DimensionError with both shapes if a and b cannot be multiplied.
void check_matmul_shapes(const Tensor2& a, const Tensor2& b);

double max_abs_diff(const Tensor2& a, const Tensor2& b);

}  // namespace sg2vec
