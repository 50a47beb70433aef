#include <doctest.h>

#include <cmath>
#include <cstring>

#include "mciseq/adam.hpp"
#include "mciseq/checkpoint.hpp"
#include "mciseq/tensor.hpp"
#include "test_util.hpp"

using namespace mciseq;

namespace {

Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng, double scale = 1.0) {
    Tensor t = Tensor::zeros(r, c);
    for (double& v : t.data) v = rng.uniform(-scale, scale);
    return t;
}

}  // namespace

TEST_SUITE("nncore") {

TEST_CASE("softmax rows sum to one") {
    Rng rng(10);
    Graph g;
    const auto x = g.constant(random_tensor(5, 7, rng, 4.0));
    const auto y = g.softmax_rows(x);
    for (std::size_t i = 0; i < 5; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 7; ++j) s += g.val(y)(i, j);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("dropout with training off is the identity node") {
    Rng rng(11);
    Graph g;
    const auto x = g.constant(random_tensor(3, 4, rng));
    CHECK(g.dropout(x, 0.5, false, nullptr) == x);
}

TEST_CASE("dropout masks are deterministic under a fixed seed") {
    Rng rng(12);
    const Tensor t = random_tensor(8, 8, rng);
    auto run = [&](std::uint64_t seed) {
        Rng drop = Rng::stream(seed, "dropout");
        Graph g;
        const auto y = g.dropout(g.constant(t), 0.4, true, &drop);
        return g.val(y).data;
    };
    CHECK(run(7) == run(7));
    CHECK(run(7) != run(8));
}

TEST_CASE("mean_pool gradient is mask / count broadcast") {
    Rng rng(13);
    ParamSet ps;
    Parameter& x = ps.add("x", random_tensor(4, 3, rng));
    const std::vector<bool> mask{true, false, true, true};

    auto f = [&](bool with_grad) {
        Graph g;
        const auto pooled = g.mean_pool_rows(g.param(x), mask);
        const auto loss = g.sum(pooled);
        if (with_grad) g.backward(loss);
        return g.val(loss).data[0];
    };
    CHECK(grad_check(f, {&x}) < 1e-7);
    x.zero_grad();
    f(true);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(x.grad(i, j) == doctest::Approx(mask[i] ? 1.0 / 3.0 : 0.0));
}

TEST_CASE("grad_check on x*x at x=3") {
    ParamSet ps;
    Parameter& x = ps.add("x", Tensor::scalar(3.0));
    auto f = [&](bool with_grad) {
        Graph g;
        const auto node = g.param(x);
        const auto loss = g.matmul(node, node);
        if (with_grad) g.backward(loss);
        return g.val(loss).data[0];
    };
    CHECK(grad_check(f, {&x}) < 1e-7);
    x.zero_grad();
    f(true);
    CHECK(x.grad.data[0] == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("constant objective has zero gradient both ways") {
    ParamSet ps;
    Parameter& x = ps.add("x", Tensor::scalar(1.5));
    auto f = [&](bool with_grad) {
        Graph g;
        g.param(x);
        const auto loss = g.constant(Tensor::scalar(4.0));
        if (with_grad) g.backward(loss);
        return g.val(loss).data[0];
    };
    CHECK(grad_check(f, {&x}) == 0.0);
    CHECK(x.grad.data[0] == 0.0);
}

TEST_CASE("composite block gradients pass finite differences") {
    Rng rng(14);
    ParamSet ps;
    Parameter& w = ps.add("w", random_tensor(6, 4, rng));
    Parameter& b = ps.add("b", random_tensor(1, 4, rng, 0.1));
    Parameter& gain = ps.add("gain", random_tensor(1, 4, rng, 0.5));
    Parameter& bias = ps.add("bias", random_tensor(1, 4, rng, 0.1));
    const Tensor input = random_tensor(5, 6, rng);
    const std::vector<bool> mask{true, true, false, true, true};

    auto f = [&](bool with_grad) {
        Graph g;
        const auto x = g.constant(input);
        auto h = g.add_rowvec(g.matmul(x, g.param(w)), g.param(b));
        h = g.layer_norm_rows(g.relu(h), g.param(gain), g.param(bias));
        h = g.sigmoid(g.mean_pool_rows(g.softmax_rows(h), mask));
        const auto loss = g.sum(h);
        if (with_grad) g.backward(loss);
        return g.val(loss).data[0];
    };
    CHECK(grad_check(f, {&w, &b, &gain, &bias}) < 1e-4);
}

TEST_CASE("gradients of f+g equal grad f plus grad g") {
    Rng rng(15);
    ParamSet ps;
    Parameter& w = ps.add("w", random_tensor(3, 3, rng));
    const Tensor input = random_tensor(2, 3, rng);

    auto build_f = [&](Graph& g) { return g.sum(g.sigmoid(g.matmul(g.constant(input), g.param(w)))); };
    auto build_g = [&](Graph& g) { return g.sum(g.relu(g.matmul(g.constant(input), g.param(w)))); };

    w.zero_grad();
    {
        Graph g;
        g.backward(build_f(g));
    }
    const Tensor gf = w.grad;
    w.zero_grad();
    {
        Graph g;
        g.backward(build_g(g));
    }
    const Tensor gg = w.grad;
    w.zero_grad();
    {
        Graph g;
        g.backward(g.add(build_f(g), build_g(g)));
    }
    for (std::size_t i = 0; i < w.grad.size(); ++i)
        CHECK(std::abs(w.grad.data[i] - (gf.data[i] + gg.data[i])) <= 1e-12);
}

TEST_CASE("non-finite values trip an error") {
    Graph g;
    Tensor big = Tensor::scalar(1e308);
    const auto x = g.constant(big);
    CHECK_THROWS_AS((void)g.matmul(x, x), NonFiniteError);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged and advances t") {
    ParamSet ps;
    Parameter& x = ps.add("x", Tensor::scalar(0.7));
    Adam opt(ps, {});
    x.zero_grad();
    opt.step(ps);
    CHECK(x.value.data[0] == 0.7);
    CHECK(opt.steps() == 1);
}

TEST_CASE("adam: bias-corrected first step moves by about lr") {
    ParamSet ps;
    Parameter& x = ps.add("x", Tensor::scalar(0.0));
    AdamConfig cfg;
    cfg.lr = 0.1;
    Adam opt(ps, cfg);
    x.grad.data[0] = 1.0;
    opt.step(ps);
    CHECK(x.value.data[0] == doctest::Approx(-0.1).epsilon(1e-4));
}

TEST_CASE("adam: repeated steps on a convex quadratic decrease the loss") {
    ParamSet ps;
    Parameter& x = ps.add("x", Tensor::scalar(1.0));
    AdamConfig cfg;
    cfg.lr = 0.05;
    Adam opt(ps, cfg);
    auto loss = [&] { return x.value.data[0] * x.value.data[0]; };
    const double before = loss();
    for (int i = 0; i < 2; ++i) {
        x.zero_grad();
        x.grad.data[0] = 2.0 * x.value.data[0];
        opt.step(ps);
    }
    CHECK(loss() < before);
}

TEST_CASE("checkpoint container round-trips bit-exactly") {
    testutil::TempDir dir("ckpt");
    Tensor a = Tensor::zeros(2, 3);
    a.data = {1.0, -0.0, 1e-300, 3.141592653589793, -2.5e17, 0.1};
    Tensor b = Tensor::zeros(1, 1);
    b.data = {-1.0000000000000002};
    save_tensors(dir.file("t.bin"), {{"alpha", &a}, {"beta", &b}});
    const auto loaded = load_tensors(dir.file("t.bin"));
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].first == "alpha");
    CHECK(loaded[0].second.shape == a.shape);
    CHECK(std::memcmp(loaded[0].second.data.data(), a.data.data(), a.size() * 8) == 0);
    CHECK(std::memcmp(loaded[1].second.data.data(), b.data.data(), b.size() * 8) == 0);
}

TEST_CASE("param set checkpoint restores by name and rejects mismatch") {
    testutil::TempDir dir("ckpt2");
    Rng rng(16);
    ParamSet ps;
    ps.add("w1", random_tensor(3, 2, rng));
    ps.add("w2", random_tensor(1, 4, rng));
    save_param_sets(dir.file("p.bin"), {&ps});

    ParamSet fresh;
    fresh.add("w1", Tensor::zeros(3, 2));
    fresh.add("w2", Tensor::zeros(1, 4));
    load_param_sets(dir.file("p.bin"), {&fresh});
    CHECK(fresh.find("w1")->value.data == ps.find("w1")->value.data);

    ParamSet wrong;
    wrong.add("w1", Tensor::zeros(2, 3));
    CHECK_THROWS(load_param_sets(dir.file("p.bin"), {&wrong}));

    ParamSet missing;
    missing.add("nope", Tensor::zeros(1, 1));
    CHECK_THROWS(load_param_sets(dir.file("p.bin"), {&missing}));
}

}  // TEST_SUITE
