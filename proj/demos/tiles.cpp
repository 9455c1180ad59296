// Plant five tiles in a noisy 60x50 matrix, factorize at rank 5 and report recovery.

#include <cstdio>

#include "elbmf/elbmf.hpp"

int main() {
    using namespace elbmf;
    const GeneratedData data = generate({60, 50, 5, {6, 14}, {6, 14}, 0.05, false, 11});

    ElbmfConfig config;
    config.rank = 5;
    config.rate_base = 1.01;
    config.seed = 3;
    const FactorizeResult fit = factorize(data.a, config);

    const MetricsReport m = evaluate(data.a, bool_product(fit.u, fit.v), &data.a_star);
    std::printf("iterations %zu converged %d\n", fit.iterations, fit.converged ? 1 : 0);
    std::printf("xor loss %llu  similarity %.4f  recall %.4f  recall* %.4f\n",
                static_cast<unsigned long long>(m.xor_loss), m.similarity, m.recall, *m.recall_star);
    for (std::size_t l = 0; l < config.rank; ++l) {
        std::size_t rows = 0, cols = 0;
        for (std::size_t i = 0; i < fit.u.rows(); ++i) rows += fit.u(i, l);
        for (std::size_t j = 0; j < fit.v.cols(); ++j) cols += fit.v(l, j);
        std::printf("component %zu: %zu rows x %zu cols\n", l, rows, cols);
    }
}
