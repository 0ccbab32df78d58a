#include "core/tape.hpp"

#include <cfloat>
#include <cmath>

#include "util/errors.hpp"

namespace sg2vec {

namespace {

double stable_sigmoid(double x) {
    double y;
    if (x >= 0.0) {
        y = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double e = std::exp(x);
        y = e / (1.0 + e);
    }
    // keep strictly inside (0, 1) so log() downstream stays finite
    if (y <= 0.0) return DBL_MIN;
    if (y >= 1.0) return 1.0 - DBL_EPSILON;
    return y;
}

}  // namespace

Tape::NodeId Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size()) - 1;
}

Tape::NodeId Tape::leaf(Tensor2 value) {
    Node n;
    n.op = Op::Leaf;
    n.value = std::move(value);
    return push(std::move(n));
}

Tape::NodeId Tape::linear(NodeId x, NodeId w, NodeId b) {
    const Tensor2& xv = value(x);
    const Tensor2& wv = value(w);
    check_matmul_shapes(xv, wv);
    Node n;
    n.op = Op::Linear;
    n.value = matmul(xv, wv);
    n.inputs = {x, w};
    if (b >= 0) {
        const Tensor2& bv = value(b);
        if (bv.rows != 1 || bv.cols != wv.cols) {
            throw DimensionError("linear: bias shape " + bv.shape_str() + " does not match output width " +
                                 std::to_string(wv.cols));
        }
        for (int i = 0; i < n.value.rows; ++i) {
            double* o = n.value.row_ptr(i);
            for (int j = 0; j < n.value.cols; ++j) o[j] += bv.at(0, j);
        }
        n.inputs.push_back(b);
    }
    return push(std::move(n));
}

Tape::NodeId Tape::add(const std::vector<NodeId>& terms) {
    if (terms.empty()) throw ContractError("add: no terms");
    Node n;
    n.op = Op::AddN;
    n.value = value(terms[0]);
    for (std::size_t t = 1; t < terms.size(); ++t) {
        const Tensor2& v = value(terms[t]);
        if (!v.same_shape(n.value)) {
            throw DimensionError("add: shapes differ, " + n.value.shape_str() + " vs " + v.shape_str());
        }
        for (std::size_t i = 0; i < v.data.size(); ++i) n.value.data[i] += v.data[i];
    }
    n.inputs = terms;
    return push(std::move(n));
}

Tape::NodeId Tape::scale(NodeId x, double c) {
    Node n;
    n.op = Op::Scale;
    n.value = value(x);
    for (double& v : n.value.data) v *= c;
    n.inputs = {x};
    n.scalar = c;
    return push(std::move(n));
}

Tape::NodeId Tape::hadamard(NodeId a, NodeId b) {
    const Tensor2& av = value(a);
    const Tensor2& bv = value(b);
    if (!av.same_shape(bv)) {
        throw DimensionError("hadamard: shapes differ, " + av.shape_str() + " vs " + bv.shape_str());
    }
    Node n;
    n.op = Op::Hadamard;
    n.value = av;
    for (std::size_t i = 0; i < bv.data.size(); ++i) n.value.data[i] *= bv.data[i];
    n.inputs = {a, b};
    return push(std::move(n));
}

Tape::NodeId Tape::mul_const(NodeId x, Tensor2 mask) {
    const Tensor2& xv = value(x);
    if (!xv.same_shape(mask)) {
        throw DimensionError("mul_const: shapes differ, " + xv.shape_str() + " vs " + mask.shape_str());
    }
    Node n;
    n.op = Op::MulConst;
    n.value = xv;
    for (std::size_t i = 0; i < mask.data.size(); ++i) n.value.data[i] *= mask.data[i];
    n.inputs = {x};
    n.aux = std::move(mask);
    return push(std::move(n));
}

Tape::NodeId Tape::concat_cols(const std::vector<NodeId>& parts) {
    if (parts.empty()) throw ContractError("concat_cols: no parts");
    const int rows = value(parts[0]).rows;
    int total = 0;
    for (NodeId p : parts) {
        const Tensor2& v = value(p);
        if (v.rows != rows) {
            throw DimensionError("concat_cols: row mismatch, " + std::to_string(rows) + " vs " + v.shape_str());
        }
        total += v.cols;
    }
    Node n;
    n.op = Op::ConcatCols;
    n.value = Tensor2(rows, total);
    int off = 0;
    for (NodeId p : parts) {
        const Tensor2& v = value(p);
        for (int i = 0; i < rows; ++i) {
            const double* src = v.row_ptr(i);
            double* dst = n.value.row_ptr(i) + off;
            for (int j = 0; j < v.cols; ++j) dst[j] = src[j];
        }
        off += v.cols;
    }
    n.inputs = parts;
    return push(std::move(n));
}

Tape::NodeId Tape::slice_cols(NodeId x, int begin, int end) {
    const Tensor2& xv = value(x);
    if (begin < 0 || end > xv.cols || begin >= end) {
        throw ContractError("slice_cols: bad range [" + std::to_string(begin) + ", " + std::to_string(end) +
                            ") for " + xv.shape_str());
    }
    Node n;
    n.op = Op::SliceCols;
    n.value = Tensor2(xv.rows, end - begin);
    for (int i = 0; i < xv.rows; ++i) {
        const double* src = xv.row_ptr(i) + begin;
        double* dst = n.value.row_ptr(i);
        for (int j = 0; j < end - begin; ++j) dst[j] = src[j];
    }
    n.inputs = {x};
    n.begin = begin;
    n.end = end;
    return push(std::move(n));
}

Tape::NodeId Tape::relu(NodeId x) {
    Node n;
    n.op = Op::Relu;
    n.value = value(x);
    for (double& v : n.value.data) v = v > 0.0 ? v : 0.0;
    n.inputs = {x};
    return push(std::move(n));
}

Tape::NodeId Tape::sigmoid(NodeId x) {
    Node n;
    n.op = Op::Sigmoid;
    n.value = value(x);
    for (double& v : n.value.data) v = stable_sigmoid(v);
    n.inputs = {x};
    return push(std::move(n));
}

Tape::NodeId Tape::tanh(NodeId x) {
    Node n;
    n.op = Op::Tanh;
    n.value = value(x);
    for (double& v : n.value.data) v = std::tanh(v);
    n.inputs = {x};
    return push(std::move(n));
}

Tape::NodeId Tape::log_softmax_rows(NodeId x) {
    Node n;
    n.op = Op::LogSoftmaxRows;
    n.value = value(x);
    for (int i = 0; i < n.value.rows; ++i) {
        double* r = n.value.row_ptr(i);
        double m = r[0];
        for (int j = 1; j < n.value.cols; ++j) m = std::max(m, r[j]);
        double sum = 0.0;
        for (int j = 0; j < n.value.cols; ++j) sum += std::exp(r[j] - m);
        const double lse = m + std::log(sum);
        for (int j = 0; j < n.value.cols; ++j) r[j] -= lse;
    }
    n.inputs = {x};
    return push(std::move(n));
}

Tape::NodeId Tape::neighbor_mean(NodeId x, const NeighborIndex& index) {
    const Tensor2& xv = value(x);
    if (static_cast<int>(index.offsets.size()) != xv.rows + 1) {
        throw DimensionError("neighbor_mean: index over " + std::to_string(index.offsets.size() - 1) +
                             " rows vs tensor " + xv.shape_str());
    }
    Node n;
    n.op = Op::NeighborMean;
    n.value = Tensor2(xv.rows, xv.cols);
    for (int v = 0; v < xv.rows; ++v) {
        const int deg = index.degree(v);
        if (deg == 0) continue;
        double* dst = n.value.row_ptr(v);
        for (int e = index.offsets[v]; e < index.offsets[v + 1]; ++e) {
            const double* src = xv.row_ptr(index.sources[e]);
            for (int j = 0; j < xv.cols; ++j) dst[j] += src[j];
        }
        const double inv = 1.0 / deg;
        for (int j = 0; j < xv.cols; ++j) dst[j] *= inv;
    }
    n.inputs = {x};
    n.nbr = &index;
    return push(std::move(n));
}

Tape::NodeId Tape::gather_rows(NodeId x, std::vector<int> rows) {
    const Tensor2& xv = value(x);
    Node n;
    n.op = Op::GatherRows;
    n.value = Tensor2(static_cast<int>(rows.size()), xv.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] < 0 || rows[i] >= xv.rows) {
            throw ContractError("gather_rows: row " + std::to_string(rows[i]) + " out of " + xv.shape_str());
        }
        const double* src = xv.row_ptr(rows[i]);
        double* dst = n.value.row_ptr(static_cast<int>(i));
        for (int j = 0; j < xv.cols; ++j) dst[j] = src[j];
    }
    n.inputs = {x};
    n.indices = std::move(rows);
    return push(std::move(n));
}

Tape::NodeId Tape::scale_rows(NodeId x, NodeId s) {
    const Tensor2& xv = value(x);
    const Tensor2& sv = value(s);
    if (sv.cols != 1 || sv.rows != xv.rows) {
        throw DimensionError("scale_rows: scale shape " + sv.shape_str() + " for tensor " + xv.shape_str());
    }
    Node n;
    n.op = Op::ScaleRows;
    n.value = xv;
    for (int i = 0; i < xv.rows; ++i) {
        double* r = n.value.row_ptr(i);
        const double f = sv.at(i, 0);
        for (int j = 0; j < xv.cols; ++j) r[j] *= f;
    }
    n.inputs = {x, s};
    return push(std::move(n));
}

Tape::NodeId Tape::reduce_rows(NodeId x, Reduce kind) {
    const Tensor2& xv = value(x);
    if (xv.rows < 1) throw ContractError("reduce_rows: empty tensor");
    Node n;
    n.op = Op::ReduceRows;
    n.reduce = kind;
    n.value = Tensor2(1, xv.cols);
    if (kind == Reduce::Max) {
        n.indices.assign(xv.cols, 0);
        for (int j = 0; j < xv.cols; ++j) {
            double best = xv.at(0, j);
            int arg = 0;
            for (int i = 1; i < xv.rows; ++i) {
                if (xv.at(i, j) > best) {
                    best = xv.at(i, j);
                    arg = i;
                }
            }
            n.value.at(0, j) = best;
            n.indices[j] = arg;
        }
    } else {
        for (int i = 0; i < xv.rows; ++i) {
            const double* r = xv.row_ptr(i);
            for (int j = 0; j < xv.cols; ++j) n.value.at(0, j) += r[j];
        }
        if (kind == Reduce::Mean) {
            for (double& v : n.value.data) v /= xv.rows;
        }
    }
    n.inputs = {x};
    return push(std::move(n));
}

Tape::NodeId Tape::sum_all(NodeId x) {
    const Tensor2& xv = value(x);
    Node n;
    n.op = Op::SumAll;
    n.value = Tensor2(1, 1);
    double s = 0.0;
    for (double v : xv.data) s += v;
    n.value.at(0, 0) = s;
    n.inputs = {x};
    return push(std::move(n));
}

Tensor2& Tape::grad_slot(NodeId id) {
    if (!grad_set_[id]) {
        grads_[id] = Tensor2(nodes_[id].value.rows, nodes_[id].value.cols);
        grad_set_[id] = 1;
    }
    return grads_[id];
}

void Tape::accumulate(NodeId id, const Tensor2& g) {
    Tensor2& slot = grad_slot(id);
    for (std::size_t i = 0; i < g.data.size(); ++i) slot.data[i] += g.data[i];
}

void Tape::backward(NodeId loss) {
    const Tensor2& lv = value(loss);
    if (lv.rows != 1 || lv.cols != 1) {
        throw ContractError("backward: loss must be scalar, got " + lv.shape_str());
    }
    grads_.assign(nodes_.size(), Tensor2());
    grad_set_.assign(nodes_.size(), 0);
    grad_slot(loss).at(0, 0) = 1.0;
    ran_backward_ = true;

    for (NodeId id = loss; id >= 0; --id) {
        if (!grad_set_[id]) continue;
        const Node& n = nodes_[id];
        const Tensor2 g = grads_[id];  // copy: accumulation below may reallocate
        switch (n.op) {
            case Op::Leaf:
                break;
            case Op::Linear: {
                const Tensor2& x = value(n.inputs[0]);
                const Tensor2& w = value(n.inputs[1]);
                accumulate(n.inputs[0], matmul_bt(g, w));
                accumulate(n.inputs[1], matmul_at(x, g));
                if (n.inputs.size() == 3) {
                    Tensor2 db(1, g.cols);
                    for (int i = 0; i < g.rows; ++i) {
                        const double* r = g.row_ptr(i);
                        for (int j = 0; j < g.cols; ++j) db.at(0, j) += r[j];
                    }
                    accumulate(n.inputs[2], db);
                }
                break;
            }
            case Op::AddN:
                for (NodeId in : n.inputs) accumulate(in, g);
                break;
            case Op::Scale: {
                Tensor2 dx = g;
                for (double& v : dx.data) v *= n.scalar;
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::Hadamard: {
                const Tensor2& a = value(n.inputs[0]);
                const Tensor2& b = value(n.inputs[1]);
                Tensor2 da = g, db = g;
                for (std::size_t i = 0; i < g.data.size(); ++i) {
                    da.data[i] *= b.data[i];
                    db.data[i] *= a.data[i];
                }
                accumulate(n.inputs[0], da);
                accumulate(n.inputs[1], db);
                break;
            }
            case Op::MulConst: {
                Tensor2 dx = g;
                for (std::size_t i = 0; i < g.data.size(); ++i) dx.data[i] *= n.aux.data[i];
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::ConcatCols: {
                int off = 0;
                for (NodeId in : n.inputs) {
                    const Tensor2& v = value(in);
                    Tensor2 part(v.rows, v.cols);
                    for (int i = 0; i < v.rows; ++i) {
                        const double* src = g.row_ptr(i) + off;
                        double* dst = part.row_ptr(i);
                        for (int j = 0; j < v.cols; ++j) dst[j] = src[j];
                    }
                    accumulate(in, part);
                    off += v.cols;
                }
                break;
            }
            case Op::SliceCols: {
                const Tensor2& x = value(n.inputs[0]);
                Tensor2 dx(x.rows, x.cols);
                for (int i = 0; i < g.rows; ++i) {
                    const double* src = g.row_ptr(i);
                    double* dst = dx.row_ptr(i) + n.begin;
                    for (int j = 0; j < g.cols; ++j) dst[j] = src[j];
                }
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::Relu: {
                Tensor2 dx = g;
                for (std::size_t i = 0; i < g.data.size(); ++i) {
                    if (n.value.data[i] <= 0.0) dx.data[i] = 0.0;
                }
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::Sigmoid: {
                Tensor2 dx = g;
                for (std::size_t i = 0; i < g.data.size(); ++i) {
                    const double y = n.value.data[i];
                    dx.data[i] *= y * (1.0 - y);
                }
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::Tanh: {
                Tensor2 dx = g;
                for (std::size_t i = 0; i < g.data.size(); ++i) {
                    const double y = n.value.data[i];
                    dx.data[i] *= 1.0 - y * y;
                }
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::LogSoftmaxRows: {
                Tensor2 dx = g;
                for (int i = 0; i < g.rows; ++i) {
                    double gsum = 0.0;
                    for (int j = 0; j < g.cols; ++j) gsum += g.at(i, j);
                    for (int j = 0; j < g.cols; ++j) {
                        dx.at(i, j) -= std::exp(n.value.at(i, j)) * gsum;
                    }
                }
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::NeighborMean: {
                const Tensor2& x = value(n.inputs[0]);
                Tensor2 dx(x.rows, x.cols);
                for (int v = 0; v < x.rows; ++v) {
                    const int deg = n.nbr->degree(v);
                    if (deg == 0) continue;
                    const double inv = 1.0 / deg;
                    const double* gv = g.row_ptr(v);
                    for (int e = n.nbr->offsets[v]; e < n.nbr->offsets[v + 1]; ++e) {
                        double* dst = dx.row_ptr(n.nbr->sources[e]);
                        for (int j = 0; j < x.cols; ++j) dst[j] += gv[j] * inv;
                    }
                }
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::GatherRows: {
                const Tensor2& x = value(n.inputs[0]);
                Tensor2 dx(x.rows, x.cols);
                for (std::size_t i = 0; i < n.indices.size(); ++i) {
                    const double* src = g.row_ptr(static_cast<int>(i));
                    double* dst = dx.row_ptr(n.indices[i]);
                    for (int j = 0; j < x.cols; ++j) dst[j] += src[j];
                }
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::ScaleRows: {
                const Tensor2& x = value(n.inputs[0]);
                const Tensor2& s = value(n.inputs[1]);
                Tensor2 dx = g;
                Tensor2 ds(s.rows, 1);
                for (int i = 0; i < x.rows; ++i) {
                    const double f = s.at(i, 0);
                    double dot = 0.0;
                    for (int j = 0; j < x.cols; ++j) {
                        dot += g.at(i, j) * x.at(i, j);
                        dx.at(i, j) *= f;
                    }
                    ds.at(i, 0) = dot;
                }
                accumulate(n.inputs[0], dx);
                accumulate(n.inputs[1], ds);
                break;
            }
            case Op::ReduceRows: {
                const Tensor2& x = value(n.inputs[0]);
                Tensor2 dx(x.rows, x.cols);
                if (n.reduce == Reduce::Max) {
                    for (int j = 0; j < x.cols; ++j) dx.at(n.indices[j], j) = g.at(0, j);
                } else {
                    const double f = n.reduce == Reduce::Mean ? 1.0 / x.rows : 1.0;
                    for (int i = 0; i < x.rows; ++i) {
                        for (int j = 0; j < x.cols; ++j) dx.at(i, j) = g.at(0, j) * f;
                    }
                }
                accumulate(n.inputs[0], dx);
                break;
            }
            case Op::SumAll: {
                const Tensor2& x = value(n.inputs[0]);
                accumulate(n.inputs[0], Tensor2::filled(x.rows, x.cols, g.at(0, 0)));
                break;
            }
        }
    }
}

Tensor2 Tape::grad(NodeId id) const {
    if (!ran_backward_) throw ContractError("grad: backward() has not run");
    if (grad_set_[id]) return grads_[id];
    return Tensor2(nodes_[id].value.rows, nodes_[id].value.cols);
}

void Tape::reset() {
    nodes_.clear();
    grads_.clear();
    grad_set_.clear();
    ran_backward_ = false;
}

}  // namespace sg2vec
