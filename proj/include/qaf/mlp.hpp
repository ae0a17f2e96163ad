#pragma once

#include <cstddef>
#include <vector>

#include "qaf/rng.hpp"

namespace qaf {

/// Dense row-major matrix of doubles; rows are batch entries.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
};

/// Fully connected network with ReLU hidden layers and a linear output.
/// Weights initialize to Glorot-uniform, biases to zero. Forward and
/// backward run batched; backward can also return the loss gradient
/// with respect to the input batch (needed to push critic gradients
/// through sampled actions).
class Mlp {
  public:
    Mlp() = default;
    explicit Mlp(std::vector<int> dims);

    void init_glorot(RngStream& rng);

    const std::vector<int>& dims() const { return dims_; }
    int input_dim() const { return dims_.front(); }
    int output_dim() const { return dims_.back(); }
    int layer_count() const { return static_cast<int>(weights_.size()); }

    struct Cache {
        std::vector<Matrix> acts;  // acts[0] = input, acts[L] = output
        std::vector<Matrix> pre;   // pre-activations per layer
    };

    Matrix forward(const Matrix& x) const;
    Matrix forward_cached(const Matrix& x, Cache& cache) const;
    std::vector<double> forward_one(const std::vector<double>& x) const;

    struct Gradients {
        std::vector<Matrix> w;
        std::vector<std::vector<double>> b;
    };
    Gradients make_gradients() const;

    /// Accumulates parameter gradients for dL/d(output) = dout; returns
    /// dL/d(input) when requested.
    Matrix backward(const Cache& cache, const Matrix& dout, Gradients& grads,
                    bool need_input_grad = false) const;

    std::size_t param_count() const;
    std::vector<double> flatten_params() const;
    void set_params(const std::vector<double>& flat);
    static std::vector<double> flatten_gradients(const Gradients& grads);

    std::vector<Matrix>& weights() { return weights_; }
    const std::vector<Matrix>& weights() const { return weights_; }
    std::vector<std::vector<double>>& biases() { return biases_; }
    const std::vector<std::vector<double>>& biases() const { return biases_; }

  private:
    std::vector<int> dims_;
    std::vector<Matrix> weights_;              // weights_[l]: dims[l+1] x dims[l]
    std::vector<std::vector<double>> biases_;  // biases_[l]: dims[l+1]
};

/// Adam optimizer bound to one network's parameter layout.
struct Adam {
    double learning_rate = 3e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    long long t = 0;
    std::vector<double> m;
    std::vector<double> v;

    void reset(std::size_t param_count);
    void step(Mlp& net, const Mlp::Gradients& grads);
};

/// target <- retention * target + (1 - retention) * online.
void polyak_update(Mlp& target, const Mlp& online, double retention);

}  // namespace qaf
