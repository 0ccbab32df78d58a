#pragma once

#include <vector>

#include "core/tensor.hpp"

namespace sg2vec {

// In-neighbor index for one relation of one graph, CSR over destination rows:
// sources[offsets[v] .. offsets[v+1]) are the rows aggregated into row v.
struct NeighborIndex {
    std::vector<int> offsets;  // size = rows + 1
    std::vector<int> sources;

    int degree(int v) const { return offsets[v + 1] - offsets[v]; }
    int total_edges() const { return static_cast<int>(sources.size()); }
};

enum class Reduce { Sum, Mean, Max };

// Reverse-mode tape over a fixed set of tensor primitives. Nodes are appended
// in topological order; backward walks them in reverse. One tape per
// forward/backward pass, confined to one thread.
//
// NeighborIndex arguments are borrowed and must outlive the tape.
class Tape {
  public:
    using NodeId = int;

    NodeId leaf(Tensor2 value);

    // x*w, optionally + b broadcast over rows (b: 1 x w.cols)
    NodeId linear(NodeId x, NodeId w, NodeId b = -1);
    NodeId add(const std::vector<NodeId>& terms);
    NodeId scale(NodeId x, double c);
    NodeId hadamard(NodeId a, NodeId b);
    // elementwise product with a constant tensor (dropout masks, label one-hots)
    NodeId mul_const(NodeId x, Tensor2 mask);
    NodeId concat_cols(const std::vector<NodeId>& parts);
    NodeId slice_cols(NodeId x, int begin, int end);
    NodeId relu(NodeId x);
    NodeId sigmoid(NodeId x);
    NodeId tanh(NodeId x);
    NodeId log_softmax_rows(NodeId x);
    // out[v] = mean over in-neighbors of v (zero row when v has none)
    NodeId neighbor_mean(NodeId x, const NeighborIndex& index);
    NodeId gather_rows(NodeId x, std::vector<int> rows);
    // out[i][j] = x[i][j] * s[i][0]   (s: N x 1)
    NodeId scale_rows(NodeId x, NodeId s);
    // column-wise reduction over rows -> 1 x C
    NodeId reduce_rows(NodeId x, Reduce kind);
    NodeId sum_all(NodeId x);

    const Tensor2& value(NodeId id) const { return nodes_[id].value; }

    // Reverse sweep from a scalar (1x1) node. Throws ContractError otherwise.
    void backward(NodeId loss);

    // Gradient w.r.t. a node; zeros if the node does not reach the loss.
    Tensor2 grad(NodeId id) const;

    int size() const { return static_cast<int>(nodes_.size()); }
    void reset();

  private:
    enum class Op {
        Leaf,
        Linear,
        AddN,
        Scale,
        Hadamard,
        MulConst,
        ConcatCols,
        SliceCols,
        Relu,
        Sigmoid,
        Tanh,
        LogSoftmaxRows,
        NeighborMean,
        GatherRows,
        ScaleRows,
        ReduceRows,
        SumAll,
    };

    struct Node {
        Op op;
        Tensor2 value;
        std::vector<NodeId> inputs;
        double scalar = 0.0;      // Scale factor
        int begin = 0, end = 0;   // SliceCols bounds
        Reduce reduce = Reduce::Sum;
        Tensor2 aux;              // MulConst mask
        std::vector<int> indices; // GatherRows rows / ReduceRows(Max) argmax
        const NeighborIndex* nbr = nullptr;
    };

    NodeId push(Node n);
    void accumulate(NodeId id, const Tensor2& g);
    Tensor2& grad_slot(NodeId id);

    std::vector<Node> nodes_;
    std::vector<Tensor2> grads_;
    std::vector<char> grad_set_;
    bool ran_backward_ = false;
};

}  // namespace sg2vec
