#include "qmodal/translation.hpp"

#include <cmath>
#include <cstdio>

namespace qmodal {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

CyclicTranslationRep cyclic_translation_rep(int n) {
    if (n < 2) throw BadDimension("cyclic translation representation requires n >= 2");

    ComplexMatrix fourier(n, n);
    for (int x = 0; x < n; ++x)
        for (int k = 0; k < n; ++k) {
            const double arg = kTwoPi * static_cast<double>(k) * x / n;
            fourier(x, k) = complexd(std::cos(arg), std::sin(arg)) / std::sqrt(double(n));
        }

    // p_hat = sum_k (2 pi k / n) |f_k><f_k|
    ComplexMatrix p(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            complexd acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += (kTwoPi * k / n) * fourier(i, k) * std::conj(fourier(j, k));
            p(i, j) = acc;
        }

    std::vector<std::string> position_labels(n), momentum_labels(n);
    char buf[32];
    for (int k = 0; k < n; ++k) {
        position_labels[k] = "x=" + std::to_string(k);
        std::snprintf(buf, sizeof(buf), "p=%.6g", kTwoPi * k / n);
        momentum_labels[k] = buf;
    }

    CyclicTranslationRep rep;
    rep.n = n;
    rep.position_context = make_context("position-" + std::to_string(n),
                                        ComplexMatrix::identity(n), std::move(position_labels));
    rep.momentum_context =
        make_context("momentum-" + std::to_string(n), std::move(fourier), std::move(momentum_labels));
    rep.p_dimensionless = std::move(p);
    return rep;
}

ComplexMatrix translation_unitary(const CyclicTranslationRep& rep, double a) {
    return unitary_from_generator(rep.p_dimensionless, a);
}

}  // namespace qmodal
