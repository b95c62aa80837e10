#include "covlab/wishart.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "covlab/errors.hpp"
#include "covlab/matcore.hpp"

namespace covlab {

void WishartParams::validate() const {
    if (n < 1 || n > p)
        throw InvalidParams("Wishart parameters require 1 <= n <= p (got n=" + std::to_string(n) +
                            ", p=" + std::to_string(p) + ")");
}

GramMatrix gram(const SampleBatch& batch) {
    if (batch.count() == 0) throw InvalidParams("gram of an empty batch");
    return {gram_of_rows(batch.vectors)};
}

double log_normalizer(WishartParams params) {
    params.validate();
    const double n = static_cast<double>(params.n);
    const double p = static_cast<double>(params.p);
    double value = 0.5 * p * n * std::numbers::ln2 + 0.25 * n * (n - 1.0) * std::log(std::numbers::pi);
    for (std::size_t i = 1; i <= params.n; ++i)
        value += std::lgamma(0.5 * (p + 1.0 - static_cast<double>(i)));
    return value;
}

double log_density_from(WishartParams params, double logdet, double trace) {
    const double exponent = 0.5 * (static_cast<double>(params.p) - static_cast<double>(params.n) - 1.0);
    return exponent * logdet - 0.5 * trace - log_normalizer(params);
}

double log_density(WishartParams params, const GramMatrix& g) {
    params.validate();
    if (g.n() != params.n)
        throw DimensionMismatch("Gram matrix is " + std::to_string(g.n()) + "x" +
                                std::to_string(g.n()) + ", expected n=" + std::to_string(params.n));
    return log_density_from(params, cholesky_logdet(g.entries).logdet, trace(g.entries));
}

DetMoments det_moments(WishartParams params) {
    params.validate();
    // Extended precision keeps mean·(second − mean) accurate when the two
    // falling factorials are close.
    const long double p = static_cast<long double>(params.p);
    const long double n = static_cast<long double>(params.n);
    const long double mean = std::exp(std::lgamma(p + 1.0L) - std::lgamma(p - n + 1.0L));
    const long double second = std::exp(std::lgamma(p + 3.0L) - std::lgamma(p + 3.0L - n));
    return {static_cast<double>(mean), static_cast<double>(mean * (second - mean))};
}

GramMatrix wishart_sample(WishartParams params, RngStream& rng) {
    params.validate();
    Matrix x(params.n, params.p);
    for (double& v : x.data()) v = rng.normal();
    return {gram_of_rows(x)};
}

}  // namespace covlab
