#include "qaf/mlp.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace qaf {

Mlp::Mlp(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.size() < 2) throw std::invalid_argument("Mlp: need at least input and output dims");
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
        weights_.emplace_back(dims_[l + 1], dims_[l]);
        biases_.emplace_back(static_cast<std::size_t>(dims_[l + 1]), 0.0);
    }
}

void Mlp::init_glorot(RngStream& rng) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        Matrix& w = weights_[l];
        const double bound = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
        for (double& x : w.data) x = rng.uniform(-bound, bound);
        std::fill(biases_[l].begin(), biases_[l].end(), 0.0);
    }
}

namespace {

// out = x * w^T + b, row-major everywhere.
void affine(const Matrix& x, const Matrix& w, const std::vector<double>& b, Matrix& out) {
    out.rows = x.rows;
    out.cols = w.rows;
    out.data.assign(static_cast<std::size_t>(out.rows) * out.cols, 0.0);
    for (int r = 0; r < x.rows; ++r) {
        const double* xr = x.row(r);
        double* or_ = out.row(r);
        for (int o = 0; o < w.rows; ++o) {
            const double* wr = w.row(o);
            double acc = b[static_cast<std::size_t>(o)];
            for (int i = 0; i < w.cols; ++i) acc += xr[i] * wr[i];
            or_[o] = acc;
        }
    }
}

void relu_inplace(Matrix& m) {
    for (double& x : m.data)
        if (x < 0.0) x = 0.0;
}

}  // namespace

Matrix Mlp::forward(const Matrix& x) const {
    Matrix current = x;
    Matrix next;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        affine(current, weights_[l], biases_[l], next);
        if (l + 1 < weights_.size()) relu_inplace(next);
        std::swap(current, next);
    }
    return current;
}

Matrix Mlp::forward_cached(const Matrix& x, Cache& cache) const {
    cache.acts.assign(1, x);
    cache.pre.clear();
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        Matrix z;
        affine(cache.acts.back(), weights_[l], biases_[l], z);
        cache.pre.push_back(z);
        if (l + 1 < weights_.size()) relu_inplace(z);
        cache.acts.push_back(std::move(z));
    }
    return cache.acts.back();
}

std::vector<double> Mlp::forward_one(const std::vector<double>& x) const {
    Matrix m(1, static_cast<int>(x.size()));
    m.data = x;
    Matrix out = forward(m);
    return out.data;
}

Mlp::Gradients Mlp::make_gradients() const {
    Gradients g;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        g.w.emplace_back(weights_[l].rows, weights_[l].cols);
        g.b.emplace_back(biases_[l].size(), 0.0);
    }
    return g;
}

Matrix Mlp::backward(const Cache& cache, const Matrix& dout, Gradients& grads,
                     bool need_input_grad) const {
    const int layers = layer_count();
    Matrix delta = dout;  // dL/d pre[last]; the output layer is linear
    Matrix input_grad;
    for (int l = layers - 1; l >= 0; --l) {
        const Matrix& acts = cache.acts[static_cast<std::size_t>(l)];
        Matrix& dw = grads.w[static_cast<std::size_t>(l)];
        std::vector<double>& db = grads.b[static_cast<std::size_t>(l)];
        for (int r = 0; r < delta.rows; ++r) {
            const double* dr = delta.row(r);
            const double* ar = acts.row(r);
            for (int o = 0; o < delta.cols; ++o) {
                const double d = dr[o];
                if (d == 0.0) continue;
                double* wrow = dw.row(o);
                for (int i = 0; i < acts.cols; ++i) wrow[i] += d * ar[i];
                db[static_cast<std::size_t>(o)] += d;
            }
        }
        if (l == 0 && !need_input_grad) break;
        // dL/d acts[l] = delta * W[l]
        const Matrix& w = weights_[static_cast<std::size_t>(l)];
        Matrix dact(delta.rows, w.cols);
        for (int r = 0; r < delta.rows; ++r) {
            const double* dr = delta.row(r);
            double* out = dact.row(r);
            for (int o = 0; o < w.rows; ++o) {
                const double d = dr[o];
                if (d == 0.0) continue;
                const double* wr = w.row(o);
                for (int i = 0; i < w.cols; ++i) out[i] += d * wr[i];
            }
        }
        if (l == 0) {
            input_grad = std::move(dact);
            break;
        }
        // ReLU mask of the previous layer's pre-activations.
        const Matrix& pre = cache.pre[static_cast<std::size_t>(l - 1)];
        for (std::size_t idx = 0; idx < dact.data.size(); ++idx)
            if (pre.data[idx] <= 0.0) dact.data[idx] = 0.0;
        delta = std::move(dact);
    }
    return input_grad;
}

std::size_t Mlp::param_count() const {
    std::size_t count = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l)
        count += weights_[l].data.size() + biases_[l].size();
    return count;
}

std::vector<double> Mlp::flatten_params() const {
    std::vector<double> flat;
    flat.reserve(param_count());
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        flat.insert(flat.end(), weights_[l].data.begin(), weights_[l].data.end());
        flat.insert(flat.end(), biases_[l].begin(), biases_[l].end());
    }
    return flat;
}

void Mlp::set_params(const std::vector<double>& flat) {
    if (flat.size() != param_count()) throw std::invalid_argument("Mlp::set_params: size mismatch");
    std::size_t pos = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        std::memcpy(weights_[l].data.data(), flat.data() + pos, weights_[l].data.size() * sizeof(double));
        pos += weights_[l].data.size();
        std::memcpy(biases_[l].data(), flat.data() + pos, biases_[l].size() * sizeof(double));
        pos += biases_[l].size();
    }
}

std::vector<double> Mlp::flatten_gradients(const Gradients& grads) {
    std::vector<double> flat;
    for (std::size_t l = 0; l < grads.w.size(); ++l) {
        flat.insert(flat.end(), grads.w[l].data.begin(), grads.w[l].data.end());
        flat.insert(flat.end(), grads.b[l].begin(), grads.b[l].end());
    }
    return flat;
}

void Adam::reset(std::size_t param_count) {
    t = 0;
    m.assign(param_count, 0.0);
    v.assign(param_count, 0.0);
}

void Adam::step(Mlp& net, const Mlp::Gradients& grads) {
    if (m.size() != net.param_count()) reset(net.param_count());
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    std::size_t pos = 0;
    auto update = [&](double* params, const double* g, std::size_t count) {
        for (std::size_t i = 0; i < count; ++i, ++pos) {
            m[pos] = beta1 * m[pos] + (1.0 - beta1) * g[i];
            v[pos] = beta2 * v[pos] + (1.0 - beta2) * g[i] * g[i];
            const double mhat = m[pos] / bc1;
            const double vhat = v[pos] / bc2;
            params[i] -= learning_rate * mhat / (std::sqrt(vhat) + epsilon);
        }
    };
    for (int l = 0; l < net.layer_count(); ++l) {
        const std::size_t lu = static_cast<std::size_t>(l);
        update(net.weights()[lu].data.data(), grads.w[lu].data.data(), grads.w[lu].data.size());
        update(net.biases()[lu].data(), grads.b[lu].data(), grads.b[lu].size());
    }
}

void polyak_update(Mlp& target, const Mlp& online, double retention) {
    if (target.param_count() != online.param_count())
        throw std::invalid_argument("polyak_update: shape mismatch");
    for (int l = 0; l < target.layer_count(); ++l) {
        const std::size_t lu = static_cast<std::size_t>(l);
        auto& tw = target.weights()[lu].data;
        const auto& ow = online.weights()[lu].data;
        for (std::size_t i = 0; i < tw.size(); ++i)
            tw[i] = retention * tw[i] + (1.0 - retention) * ow[i];
        auto& tb = target.biases()[lu];
        const auto& ob = online.biases()[lu];
        for (std::size_t i = 0; i < tb.size(); ++i)
            tb[i] = retention * tb[i] + (1.0 - retention) * ob[i];
    }
}

}  // namespace qaf
