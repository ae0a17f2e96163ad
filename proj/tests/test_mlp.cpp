#include <doctest.h>

#include <cmath>

#include "qaf/mlp.hpp"

using namespace qaf;

namespace {

// Max relative deviation between analytic and central finite-difference
// gradients of a scalar function of the network parameters.
template <typename LossFn>
double fd_max_rel_error(Mlp& net, const std::vector<double>& analytic, LossFn&& loss, double h) {
    std::vector<double> params = net.flatten_params();
    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + h;
        net.set_params(params);
        const double up = loss();
        params[i] = keep - h;
        net.set_params(params);
        const double down = loss();
        params[i] = keep;
        const double fd = (up - down) / (2.0 * h);
        const double denom = std::max({std::abs(fd), std::abs(analytic[i]), 1e-6});
        worst = std::max(worst, std::abs(fd - analytic[i]) / denom);
    }
    net.set_params(params);
    return worst;
}

}  // namespace

TEST_CASE("forward matches a hand-computed two-layer net") {
    Mlp net({2, 2, 1});
    net.weights()[0].at(0, 0) = 1.0;
    net.weights()[0].at(0, 1) = -2.0;
    net.weights()[0].at(1, 0) = 0.5;
    net.weights()[0].at(1, 1) = 0.25;
    net.biases()[0] = {0.1, -0.2};
    net.weights()[1].at(0, 0) = 2.0;
    net.weights()[1].at(0, 1) = 3.0;
    net.biases()[1] = {-1.0};
    // hidden = relu([1*1 - 2*2 + 0.1, 0.5*1 + 0.25*2 - 0.2]) = [0, 0.8]
    // out = 2*0 + 3*0.8 - 1 = 1.4
    const auto out = net.forward_one({1.0, 2.0});
    REQUIRE(out.size() == 1);
    CHECK(out[0] == doctest::Approx(1.4));
}

TEST_CASE("parameter gradients match central finite differences") {
    RngStream rng(2024);
    Mlp net({3, 5, 4, 2});
    net.init_glorot(rng);
    Matrix x(4, 3);
    for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
    Matrix weight(4, 2);
    for (double& v : weight.data) v = rng.uniform(-1.0, 1.0);

    auto loss_value = [&]() {
        const Matrix out = net.forward(x);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.data.size(); ++i) acc += weight.data[i] * out.data[i];
        return acc;
    };
    Mlp::Cache cache;
    net.forward_cached(x, cache);
    Mlp::Gradients grads = net.make_gradients();
    net.backward(cache, weight, grads);
    const double err =
        fd_max_rel_error(net, Mlp::flatten_gradients(grads), loss_value, 1e-6);
    CHECK(err < 1e-6);
}

TEST_CASE("input gradients match finite differences") {
    RngStream rng(77);
    Mlp net({3, 6, 1});
    net.init_glorot(rng);
    Matrix x(2, 3);
    for (double& v : x.data) v = rng.uniform(-1.0, 1.0);
    Matrix dout(2, 1);
    dout.at(0, 0) = 1.0;
    dout.at(1, 0) = -0.5;

    Mlp::Cache cache;
    net.forward_cached(x, cache);
    Mlp::Gradients grads = net.make_gradients();
    const Matrix din = net.backward(cache, dout, grads, true);

    const double h = 1e-6;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
        Matrix xp = x, xm = x;
        xp.data[i] += h;
        xm.data[i] -= h;
        auto value = [&](const Matrix& input) {
            const Matrix out = net.forward(input);
            return dout.at(0, 0) * out.at(0, 0) + dout.at(1, 0) * out.at(1, 0);
        };
        const double fd = (value(xp) - value(xm)) / (2.0 * h);
        CHECK(din.data[i] == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("adam first step moves by about the learning rate against the gradient sign") {
    Mlp net({1, 1});
    net.weights()[0].at(0, 0) = 0.5;
    net.biases()[0][0] = 0.0;
    Adam adam;
    adam.learning_rate = 0.01;
    adam.reset(net.param_count());
    Mlp::Gradients grads = net.make_gradients();
    grads.w[0].at(0, 0) = 3.0;
    adam.step(net, grads);
    CHECK(net.weights()[0].at(0, 0) == doctest::Approx(0.5 - 0.01).epsilon(1e-6));
}

TEST_CASE("polyak retention arithmetic") {
    Mlp online({1, 1});
    Mlp target({1, 1});
    online.weights()[0].at(0, 0) = 1.0;
    target.weights()[0].at(0, 0) = 0.0;

    SUBCASE("fixed point") {
        Mlp same = online;
        polyak_update(same, online, 0.995);
        CHECK(same.weights()[0].at(0, 0) == doctest::Approx(1.0));
    }
    SUBCASE("single slow update") {
        polyak_update(target, online, 0.995);
        CHECK(target.weights()[0].at(0, 0) == doctest::Approx(0.005));
    }
    SUBCASE("geometric convergence toward a frozen online net") {
        double expected = 0.0;
        for (int k = 0; k < 50; ++k) {
            polyak_update(target, online, 0.995);
            expected = 0.995 * expected + 0.005;
        }
        CHECK(target.weights()[0].at(0, 0) == doctest::Approx(expected).epsilon(1e-12));
    }
}
