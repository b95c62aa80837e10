#pragma once

// Identity-covariance Wishart laws W_n(Id, p): Gram matrices of n standard
// Gaussian vectors in R^p. Density is with respect to Lebesgue measure on the
// n(n+1)/2 upper-triangle coordinates of the PSD cone.

#include <cstddef>

#include "covlab/matrix.hpp"
#include "covlab/rng.hpp"
#include "covlab/sampler.hpp"

namespace covlab {

struct WishartParams {
    std::size_t n = 1;  ///< matrix dimension
    std::size_t p = 1;  ///< degrees of freedom

    /// Throws InvalidParams unless 1 ≤ n ≤ p.
    void validate() const;
};

struct GramMatrix {
    SymMatrix entries;

    std::size_t n() const { return entries.dim(); }
};

/// Pairwise inner products of the batch's samples.
GramMatrix gram(const SampleBatch& batch);

/// log Z(n,p) = (pn/2) log 2 + (n(n-1)/4) log π + Σ_{i=1..n} logΓ((p+1-i)/2).
double log_normalizer(WishartParams params);

/// ((p-n-1)/2) log det g - tr(g)/2 - log Z(n,p). Throws NotPd, InvalidParams.
double log_density(WishartParams params, const GramMatrix& g);

/// Same, given log det g and tr g directly.
double log_density_from(WishartParams params, double logdet, double trace);

struct DetMoments {
    double mean = 0.0;      ///< p!/(p-n)!
    double variance = 0.0;  ///< p!/(p-n)! · ((p+2)!/(p+2-n)! - p!/(p-n)!)
};

/// Moments of det W for W ~ W_n(Id, p), via log-gamma ratios.
DetMoments det_moments(WishartParams params);

/// Gram matrix of n fresh standard Gaussian vectors in R^p.
GramMatrix wishart_sample(WishartParams params, RngStream& rng);

}  // namespace covlab
