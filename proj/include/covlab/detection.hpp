#pragma once

// Rank-detection games. A detector maps a batch of n samples in R^d to a
// guess in {0, 1, 2} for rank C_E(A); the harness measures its success rate
// on ensembles whose Gram laws are W_n(Id, d), W_n(Id, d-1), W_n(Id, d-2)
// and attaches the total-variation ceiling on equal-prior success.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "covlab/matrix.hpp"
#include "covlab/parallel.hpp"
#include "covlab/rng.hpp"
#include "covlab/sampler.hpp"

namespace covlab {

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

struct FullRank {};
/// Projector onto the complement of a uniformly random k-plane, redrawn per batch.
struct DeficientRandom {
    std::size_t k = 1;
};
/// Proj_{θ⊥} for one fixed θ.
struct DeficientFixed {
    Vector theta;
};
struct ExplicitCov {
    SymMatrix covariance;
    SymMatrix root;  ///< sym_sqrt(covariance), computed once
};

class Ensemble {
  public:
    using Kind = std::variant<FullRank, DeficientRandom, DeficientFixed, ExplicitCov>;

    static Ensemble full_rank(std::size_t d);
    static Ensemble deficient_random(std::size_t d, std::size_t k);
    /// Throws NotUnit, DimensionMismatch.
    static Ensemble deficient_fixed(Vector theta);
    /// Throws NotPsd.
    static Ensemble explicit_covariance(const SymMatrix& a);

    std::size_t dim() const { return dim_; }
    const Kind& kind() const { return kind_; }
    std::string label() const;

    /// One covariance matrix from the ensemble.
    SymMatrix draw_covariance(RngStream& rng) const;
    /// n samples from a fresh covariance draw.
    SampleBatch draw_batch(std::size_t n, RngStream& rng) const;

  private:
    Ensemble(Kind kind, std::size_t dim) : kind_(std::move(kind)), dim_(dim) {}

    Kind kind_;
    std::size_t dim_;
};

/// rank C_E(A) via section_covariance. Throws NotPsd.
std::size_t true_section_rank(const SymMatrix& a);

// ---------------------------------------------------------------------------
// Detectors
// ---------------------------------------------------------------------------

/// Named pure function from batches to guesses. Evaluation must be safe to
/// call concurrently on distinct batches.
class Detector {
  public:
    using Fn = std::function<int(const SampleBatch&)>;

    Detector(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

    const std::string& name() const { return name_; }
    int operator()(const SampleBatch& batch) const { return fn_(batch); }

  private:
    std::string name_;
    Fn fn_;
};

/// Threshold on log det of the Gram matrix at which the W_n(Id, d) and
/// W_n(Id, d-1) densities agree: 2 (log Z(n,d) - log Z(n,d-1)).
double lr_log_det_threshold(std::size_t n, std::size_t d);

/// Likelihood-ratio test between W_n(Id, d) (guess 2) and W_n(Id, d-1)
/// (guess 1) on the Gram matrix; ties go to 2. Requires n ≤ d-1.
Detector lr_detector(std::size_t n, std::size_t d);

/// Guess 2 iff tr Gram exceeds the midpoint n(d - 1/2) of the two means.
Detector trace_detector(std::size_t n, std::size_t d);

/// Guess 2 iff det Gram exceeds the midpoint of the two mean determinants.
Detector det_detector(std::size_t n, std::size_t d);

Detector constant_detector(int guess);

/// Pseudo-random guess from `labels`, keyed on tr Gram and the seed, so it
/// is deterministic and depends on the batch only through its Gram matrix.
Detector random_detector(std::uint64_t seed, std::vector<int> labels = {1, 2});

/// Guess 2 iff the first coordinate of the first sample is positive, else 1.
/// Not rotation invariant.
Detector coordinate_detector();

/// Bayes rule among W_n(Id, p), p ∈ {d, d-1, d-2}, labelled 2, 1, 0.
Detector bayes_three_way_detector(std::size_t n, std::size_t d);

/// Rotation average of f: G(Z) = 2 if mean_T f(TZ) ≥ 3/2, 1 if it lies in
/// [1/2, 3/2), 0 otherwise. The m Haar rotations are drawn once from `rng`
/// and applied to the canonical frame of Z (coordinates of the samples in
/// their own Gram-Schmidt basis), so G depends on Z only through its Gram
/// matrix.
Detector symmetrize_detector(const Detector& f, std::size_t d, std::size_t rotations,
                             RngStream rng);

/// Rows L with L Lᵀ = Gram(batch), lower-triangular, embedded in R^d.
Matrix canonical_frame(const SampleBatch& batch);

/// Names accepted by make_detector.
std::vector<std::string> detector_names();

/// Throws UnknownDetector listing the available names.
Detector make_detector(const std::string& name, std::size_t n, std::size_t d, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Games
// ---------------------------------------------------------------------------

struct EnsembleOutcome {
    std::string ensemble;
    int correct_label = 0;
    double success = 0.0;
    double standard_error = 0.0;
    std::size_t trials = 0;
};

struct GameReport {
    std::string mode;
    std::string detector;
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<EnsembleOutcome> ensembles;
    double joint_success = 0.0;
    double joint_standard_error = 0.0;
    std::optional<double> tv_bound;
    std::optional<double> ceiling;  ///< (1 + tv_bound) / 2

    /// Both per-ensemble success rates above the threshold.
    bool all_above(double threshold) const;
};

inline constexpr std::size_t kMinGameTrials = 10000;

/// FullRank (answer 2) against DeficientRandom(1) (answer 1), `trials` each.
GameReport run_two_way_game(std::size_t n, std::size_t d, const Detector& detector,
                            std::size_t trials, const RngStream& rng, ExecPolicy exec = {});

/// FullRank, DeficientRandom(1), DeficientRandom(2) labelled 2, 1, 0; equal priors.
GameReport run_three_way_game(std::size_t n, std::size_t d, const Detector& detector,
                              std::size_t trials, const RngStream& rng, ExecPolicy exec = {});

/// Same game with bayes_three_way_detector.
GameReport run_three_way_game(std::size_t n, std::size_t d, std::size_t trials,
                              const RngStream& rng, ExecPolicy exec = {});

/// FullRank against DeficientFixed(θ). Throws ThetaInEPerp when θ ⊥ E.
GameReport run_fixed_theta_game(std::size_t n, std::size_t d, const Vector& theta,
                                const Detector& detector, std::size_t trials,
                                const RngStream& rng, ExecPolicy exec = {});

struct ThetaScan {
    std::vector<Vector> thetas;
    std::vector<GameReport> reports;
    /// First scanned θ at which some per-ensemble success is below 0.9.
    std::optional<std::size_t> first_failure;
};

/// Runs the fixed-θ game for `count` seeded uniform θ draws.
ThetaScan scan_fixed_theta(std::size_t n, std::size_t d, const Detector& detector,
                           std::size_t count, std::size_t trials, const RngStream& rng,
                           ExecPolicy exec = {});

}  // namespace covlab
