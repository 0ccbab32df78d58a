#include "core/tensor.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "util/errors.hpp"

namespace sg2vec {

Tensor2::Tensor2(int r, int c, std::vector<double> d) : rows(r), cols(c), data(std::move(d)) {
    if (data.size() != static_cast<std::size_t>(r) * c) {
        throw DimensionError("tensor init: " + std::to_string(data.size()) + " values for shape " +
                             std::to_string(r) + "x" + std::to_string(c));
    }
}

Tensor2 Tensor2::filled(int r, int c, double v) {
    Tensor2 t(r, c);
    std::fill(t.data.begin(), t.data.end(), v);
    return t;
}

Tensor2 Tensor2::identity(int n) {
    Tensor2 t(n, n);
    for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
    return t;
}

Tensor2 Tensor2::row(const std::vector<double>& v) {
    return Tensor2(1, static_cast<int>(v.size()), v);
}

std::string Tensor2::shape_str() const {
    return std::to_string(rows) + "x" + std::to_string(cols);
}

bool Tensor2::all_finite() const {
    for (double v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

void check_matmul_shapes(const Tensor2& a, const Tensor2& b) {
    if (a.cols != b.rows) {
        throw DimensionError("matmul: inner dimensions differ, " + a.shape_str() + " vs " + b.shape_str());
    }
}

// ikj loop order: the inner j loop is contiguous in both b and out, which the
// compiler vectorizes. Training time is dominated by these three kernels.
void matmul_acc(const Tensor2& a, const Tensor2& b, Tensor2& out) {
    check_matmul_shapes(a, b);
    const int m = a.rows, k = a.cols, n = b.cols;
    for (int i = 0; i < m; ++i) {
        const double* ai = a.row_ptr(i);
        double* oi = out.row_ptr(i);
        for (int kk = 0; kk < k; ++kk) {
            const double aik = ai[kk];
            if (aik == 0.0) continue;
            const double* bk = b.row_ptr(kk);
            for (int j = 0; j < n; ++j) oi[j] += aik * bk[j];
        }
    }
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
    check_matmul_shapes(a, b);
    Tensor2 out(a.rows, b.cols);
    matmul_acc(a, b, out);
    return out;
}

Tensor2 matmul_bt(const Tensor2& a, const Tensor2& b) {
    if (a.cols != b.cols) {
        throw DimensionError("matmul_bt: inner dimensions differ, " + a.shape_str() + " vs " + b.shape_str() + "^T");
    }
    const int m = a.rows, k = a.cols, n = b.rows;
    Tensor2 out(m, n);
    for (int i = 0; i < m; ++i) {
        const double* ai = a.row_ptr(i);
        double* oi = out.row_ptr(i);
        for (int j = 0; j < n; ++j) {
            const double* bj = b.row_ptr(j);
            double s = 0.0;
            for (int kk = 0; kk < k; ++kk) s += ai[kk] * bj[kk];
            oi[j] = s;
        }
    }
    return out;
}

Tensor2 matmul_at(const Tensor2& a, const Tensor2& b) {
    if (a.rows != b.rows) {
        throw DimensionError("matmul_at: inner dimensions differ, " + a.shape_str() + "^T vs " + b.shape_str());
    }
    const int m = a.cols, k = a.rows, n = b.cols;
    Tensor2 out(m, n);
    for (int kk = 0; kk < k; ++kk) {
        const double* ak = a.row_ptr(kk);
        const double* bk = b.row_ptr(kk);
        for (int i = 0; i < m; ++i) {
            const double aki = ak[i];
            if (aki == 0.0) continue;
            double* oi = out.row_ptr(i);
            for (int j = 0; j < n; ++j) oi[j] += aki * bk[j];
        }
    }
    return out;
}

double max_abs_diff(const Tensor2& a, const Tensor2& b) {
    if (!a.same_shape(b)) {
        throw DimensionError("max_abs_diff: shapes differ, " + a.shape_str() + " vs " + b.shape_str());
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        worst = std::max(worst, std::fabs(a.data[i] - b.data[i]));
    }
    return worst;
}

}  // namespace sg2vec
