#include "covlab/detection.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "covlab/conditional.hpp"
#include "covlab/errors.hpp"
#include "covlab/matcore.hpp"
#include "covlab/stats.hpp"
#include "covlab/tvlab.hpp"
#include "covlab/wishart.hpp"

namespace covlab {

namespace {

void require_dim(const SampleBatch& batch, std::size_t n, std::size_t d, const std::string& who) {
    if (batch.count() != n || batch.dim() != d)
        throw DimensionMismatch(who + " expects " + std::to_string(n) + " samples in R^" +
                                std::to_string(d) + ", got " + std::to_string(batch.count()) +
                                " in R^" + std::to_string(batch.dim()));
}

/// y ← x - U(Uᵀx) for every row, with U given as orthonormal columns.
void project_out(Matrix& rows, const Matrix& frame) {
    for (std::size_t s = 0; s < rows.rows(); ++s) {
        auto y = rows.row(s);
        for (std::size_t c = 0; c < frame.cols(); ++c) {
            double coef = 0.0;
            for (std::size_t i = 0; i < frame.rows(); ++i) coef += frame(i, c) * y[i];
            for (std::size_t i = 0; i < frame.rows(); ++i) y[i] -= coef * frame(i, c);
        }
    }
}

Matrix column_of(const Vector& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

struct GramSummary {
    double logdet;
    double trace;
};

GramSummary summarize(const SampleBatch& batch) {
    const GramMatrix g = gram(batch);
    return {cholesky_logdet(g.entries).logdet, trace(g.entries)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Ensembles
// ---------------------------------------------------------------------------

Ensemble Ensemble::full_rank(std::size_t d) {
    if (d < 2) throw InvalidParams("ensembles require d >= 2");
    return Ensemble(FullRank{}, d);
}

Ensemble Ensemble::deficient_random(std::size_t d, std::size_t k) {
    if (d < 2 || k < 1 || k >= d) throw InvalidParams("deficient ensemble requires 1 <= k < d");
    return Ensemble(DeficientRandom{k}, d);
}

Ensemble Ensemble::deficient_fixed(Vector theta) {
    projector_complement(theta);  // validates |θ| = 1
    const std::size_t d = theta.size();
    if (d < 2) throw InvalidParams("ensembles require d >= 2");
    return Ensemble(DeficientFixed{std::move(theta)}, d);
}

Ensemble Ensemble::explicit_covariance(const SymMatrix& a) {
    return Ensemble(ExplicitCov{a, sym_sqrt(a)}, a.dim());
}

std::string Ensemble::label() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FullRank>) return "full-rank";
            else if constexpr (std::is_same_v<K, DeficientRandom>)
                return "deficient-random(k=" + std::to_string(k.k) + ")";
            else if constexpr (std::is_same_v<K, DeficientFixed>) return "deficient-fixed";
            else return "explicit";
        },
        kind_);
}

SymMatrix Ensemble::draw_covariance(RngStream& rng) const {
    return std::visit(
        [&](const auto& k) -> SymMatrix {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FullRank>) return SymMatrix::identity(dim_);
            else if constexpr (std::is_same_v<K, DeficientRandom>)
                return random_deficient_projector(dim_, k.k, rng);
            else if constexpr (std::is_same_v<K, DeficientFixed>) return projector_complement(k.theta);
            else return k.covariance;
        },
        kind_);
}

SampleBatch Ensemble::draw_batch(std::size_t n, RngStream& rng) const {
    return std::visit(
        [&](const auto& k) -> SampleBatch {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, FullRank>) {
                return standard_batch(dim_, n, rng);
            } else if constexpr (std::is_same_v<K, DeficientRandom>) {
                DeficientProjectionTag tag{k.k, std::nullopt};
                Matrix frame;
                if (k.k == 1) {
                    Vector theta = uniform_sphere(dim_, rng);
                    frame = column_of(theta);
                    tag.theta = std::move(theta);
                } else {
                    frame = random_frame(dim_, k.k, rng);
                }
                SampleBatch batch = standard_batch(dim_, n, rng);
                project_out(batch.vectors, frame);
                batch.tag = std::move(tag);
                return batch;
            } else if constexpr (std::is_same_v<K, DeficientFixed>) {
                SampleBatch batch = standard_batch(dim_, n, rng);
                project_out(batch.vectors, column_of(k.theta));
                batch.tag = DeficientProjectionTag{1, k.theta};
                return batch;
            } else {
                return sample_batch_with_root(k.root, n, rng, ExplicitCovarianceTag{k.covariance});
            }
        },
        kind_);
}

std::size_t true_section_rank(const SymMatrix& a) { return section_covariance(a).rank; }

// ---------------------------------------------------------------------------
// Detectors
// ---------------------------------------------------------------------------

double lr_log_det_threshold(std::size_t n, std::size_t d) {
    if (d < 2) throw InvalidParams("lr detector requires d >= 2");
    return 2.0 * (log_normalizer({n, d}) - log_normalizer({n, d - 1}));
}

Detector lr_detector(std::size_t n, std::size_t d) {
    if (d < 2) throw InvalidParams("lr detector requires d >= 2");
    const WishartParams full{n, d};
    const WishartParams deficient{n, d - 1};
    deficient.validate();
    return Detector("lr", [=](const SampleBatch& batch) {
        require_dim(batch, n, d, "lr detector");
        const GramMatrix g = gram(batch);
        return log_density(full, g) >= log_density(deficient, g) ? 2 : 1;
    });
}

Detector trace_detector(std::size_t n, std::size_t d) {
    const double cut = static_cast<double>(n) * (static_cast<double>(d) - 0.5);
    return Detector("trace", [=](const SampleBatch& batch) {
        require_dim(batch, n, d, "trace detector");
        return trace(gram(batch).entries) > cut ? 2 : 1;
    });
}

Detector det_detector(std::size_t n, std::size_t d) {
    if (d < 2) throw InvalidParams("det detector requires d >= 2");
    const double cut = std::log(0.5 * (det_moments({n, d}).mean + det_moments({n, d - 1}).mean));
    return Detector("det", [=](const SampleBatch& batch) {
        require_dim(batch, n, d, "det detector");
        return summarize(batch).logdet > cut ? 2 : 1;
    });
}

Detector constant_detector(int guess) {
    return Detector("constant", [guess](const SampleBatch&) { return guess; });
}

Detector random_detector(std::uint64_t seed, std::vector<int> labels) {
    if (labels.empty()) throw InvalidParams("random detector needs at least one label");
    const double offset = static_cast<double>(mix64(seed) >> 11) * 0x1.0p-53;
    return Detector("random", [offset, labels = std::move(labels)](const SampleBatch& batch) {
        const double t = trace(gram(batch).entries);
        double u = t * 997.0 + offset;
        u -= std::floor(u);
        const auto idx = std::min(labels.size() - 1, static_cast<std::size_t>(u * labels.size()));
        return labels[idx];
    });
}

Detector coordinate_detector() {
    return Detector("coordinate", [](const SampleBatch& batch) {
        if (batch.count() == 0) throw InvalidParams("empty batch");
        return batch.sample(0)[0] > 0.0 ? 2 : 1;
    });
}

Detector bayes_three_way_detector(std::size_t n, std::size_t d) {
    if (d < 3) throw InvalidParams("three-way game requires d >= 3");
    const WishartParams laws[3] = {{n, d}, {n, d - 1}, {n, d - 2}};
    laws[2].validate();
    return Detector("bayes3", [=](const SampleBatch& batch) {
        require_dim(batch, n, d, "three-way detector");
        const GramSummary s = summarize(batch);
        int best = 2;
        double best_ld = log_density_from(laws[0], s.logdet, s.trace);
        for (int k = 1; k < 3; ++k) {
            const double ld = log_density_from(laws[k], s.logdet, s.trace);
            if (ld > best_ld) {
                best_ld = ld;
                best = 2 - k;
            }
        }
        return best;
    });
}

Matrix canonical_frame(const SampleBatch& batch) {
    const std::size_t n = batch.count();
    const std::size_t d = batch.dim();
    const SymMatrix g = gram(batch).entries;
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, g(i, i));
    const double tol = 1e-12 * max_diag;

    // Semidefinite Cholesky: a non-positive pivot means sample j lies in the
    // span of the earlier ones and contributes no new coordinate.
    Matrix l(n, n);
    std::vector<bool> active(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = g(j, j);
        for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (pivot <= tol) continue;
        active[j] = true;
        const double ljj = std::sqrt(pivot);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = g(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }

    Matrix frame(n, d);
    std::size_t col = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!active[j]) continue;
        if (col >= d) throw DimensionMismatch("Gram rank exceeds ambient dimension");
        for (std::size_t i = 0; i < n; ++i) frame(i, col) = l(i, j);
        ++col;
    }
    return frame;
}

Detector symmetrize_detector(const Detector& f, std::size_t d, std::size_t rotations,
                             RngStream rng) {
    if (rotations < 1) throw InvalidParams("symmetrization needs at least one rotation");
    std::vector<Matrix> ts;
    ts.reserve(rotations);
    for (std::size_t m = 0; m < rotations; ++m) ts.push_back(haar_rotation(d, rng));

    return Detector("sym(" + f.name() + ")", [f, d, ts = std::move(ts)](const SampleBatch& batch) {
        if (batch.dim() != d) throw DimensionMismatch("symmetrized detector dimension mismatch");
        const Matrix frame = canonical_frame(batch);
        const std::size_t n = frame.rows();
        const std::size_t rank = std::min(n, d);
        SampleBatch rotated = batch;
        double total = 0.0;
        for (const Matrix& t : ts) {
            for (std::size_t s = 0; s < n; ++s) {
                auto out = rotated.vectors.row(s);
                for (std::size_t a = 0; a < d; ++a) {
                    double v = 0.0;
                    for (std::size_t b = 0; b < rank; ++b) v += t(a, b) * frame(s, b);
                    out[a] = v;
                }
            }
            total += f(rotated);
        }
        const double mean = total / static_cast<double>(ts.size());
        if (mean >= 1.5) return 2;
        if (mean >= 0.5) return 1;
        return 0;
    });
}

std::vector<std::string> detector_names() {
    return {"lr", "trace", "det", "constant", "random", "coordinate", "sym-coordinate", "bayes3"};
}

Detector make_detector(const std::string& name, std::size_t n, std::size_t d, std::uint64_t seed) {
    if (name == "lr") return lr_detector(n, d);
    if (name == "trace") return trace_detector(n, d);
    if (name == "det") return det_detector(n, d);
    if (name == "constant") return constant_detector(2);
    if (name == "random") return random_detector(seed);
    if (name == "coordinate") return coordinate_detector();
    if (name == "bayes3") return bayes_three_way_detector(n, d);
    if (name == "sym-coordinate")
        return symmetrize_detector(coordinate_detector(), d, 64, RngStream(seed, mix64(0x5eed)));

    std::ostringstream msg;
    msg << "unknown detector '" << name << "'; available:";
    for (const auto& known : detector_names()) msg << ' ' << known;
    throw UnknownDetector(msg.str());
}

// ---------------------------------------------------------------------------
// Games
// ---------------------------------------------------------------------------

bool GameReport::all_above(double threshold) const {
    return std::all_of(ensembles.begin(), ensembles.end(),
                       [threshold](const EnsembleOutcome& e) { return e.success > threshold; });
}

namespace {

struct Arm {
    Ensemble ensemble;
    int label;
};

void check_game(std::size_t n, std::size_t trials) {
    if (n < 1) throw InvalidParams("games require n >= 1");
    if (trials < kMinGameTrials)
        throw InvalidParams("games require at least " + std::to_string(kMinGameTrials) + " trials");
}

GameReport play(std::string mode, std::size_t n, std::size_t d, const Detector& detector,
                const std::vector<Arm>& arms, std::size_t trials, const RngStream& rng,
                ExecPolicy exec) {
    GameReport report;
    report.mode = std::move(mode);
    report.detector = detector.name();
    report.n = n;
    report.d = d;
    report.trials = trials;
    report.seed = rng.seed();

    double se2 = 0.0;
    for (std::size_t e = 0; e < arms.size(); ++e) {
        const Arm& arm = arms[e];
        const RunningStats hits = run_blocks<RunningStats>(
            trials, rng.split(e), exec, [&](RngStream& stream, std::size_t count, RunningStats& acc) {
                for (std::size_t t = 0; t < count; ++t)
                    acc.add(detector(arm.ensemble.draw_batch(n, stream)) == arm.label ? 1.0 : 0.0);
            });
        // Welford drifts in the last bits on 0/1 data; report the exact hit ratio.
        const double count = static_cast<double>(hits.count());
        const double rate = std::round(hits.mean() * count) / count;
        report.ensembles.push_back(
            {arm.ensemble.label(), arm.label, rate, hits.standard_error(), hits.count()});
        report.joint_success += rate / static_cast<double>(arms.size());
        se2 += hits.variance() / static_cast<double>(hits.count());
    }
    report.joint_standard_error = std::sqrt(se2) / static_cast<double>(arms.size());
    return report;
}

}  // namespace

GameReport run_two_way_game(std::size_t n, std::size_t d, const Detector& detector,
                            std::size_t trials, const RngStream& rng, ExecPolicy exec) {
    check_game(n, trials);
    const std::vector<Arm> arms = {{Ensemble::full_rank(d), 2}, {Ensemble::deficient_random(d, 1), 1}};
    GameReport r = play("two-way", n, d, detector, arms, trials, rng, exec);
    if (n < d) {
        r.tv_bound = tv_closed_form_bound(n, d);
        r.ceiling = 0.5 * (1.0 + *r.tv_bound);
    }
    return r;
}

GameReport run_three_way_game(std::size_t n, std::size_t d, const Detector& detector,
                              std::size_t trials, const RngStream& rng, ExecPolicy exec) {
    check_game(n, trials);
    if (d < 3) throw InvalidParams("three-way game requires d >= 3");
    const std::vector<Arm> arms = {{Ensemble::full_rank(d), 2},
                                   {Ensemble::deficient_random(d, 1), 1},
                                   {Ensemble::deficient_random(d, 2), 0}};
    return play("three-way", n, d, detector, arms, trials, rng, exec);
}

GameReport run_three_way_game(std::size_t n, std::size_t d, std::size_t trials,
                              const RngStream& rng, ExecPolicy exec) {
    return run_three_way_game(n, d, bayes_three_way_detector(n, d), trials, rng, exec);
}

GameReport run_fixed_theta_game(std::size_t n, std::size_t d, const Vector& theta,
                                const Detector& detector, std::size_t trials,
                                const RngStream& rng, ExecPolicy exec) {
    check_game(n, trials);
    if (theta.size() != d) throw DimensionMismatch("theta must live in R^d");
    Ensemble deficient = Ensemble::deficient_fixed(theta);
    if (std::hypot(theta[0], theta[1]) <= kUnitTolerance)
        throw ThetaInEPerp("theta is orthogonal to span(e1, e2)");
    const std::vector<Arm> arms = {{Ensemble::full_rank(d), 2}, {std::move(deficient), 1}};
    GameReport r = play("fixed-theta", n, d, detector, arms, trials, rng, exec);
    if (n < d) {
        r.tv_bound = tv_closed_form_bound(n, d);
        r.ceiling = 0.5 * (1.0 + *r.tv_bound);
    }
    return r;
}

ThetaScan scan_fixed_theta(std::size_t n, std::size_t d, const Detector& detector,
                           std::size_t count, std::size_t trials, const RngStream& rng,
                           ExecPolicy exec) {
    ThetaScan scan;
    RngStream theta_stream = rng.split(0);
    for (std::size_t t = 0; t < count; ++t) {
        Vector theta = uniform_sphere(d, theta_stream);
        GameReport r = run_fixed_theta_game(n, d, theta, detector, trials, rng.split(t + 1), exec);
        if (!scan.first_failure && !r.all_above(0.9)) scan.first_failure = t;
        scan.thetas.push_back(std::move(theta));
        scan.reports.push_back(std::move(r));
    }
    return scan;
}

}  // namespace covlab
