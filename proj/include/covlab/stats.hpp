#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace covlab {

/// Welford accumulator with Chan's pairwise merge.
class RunningStats {
  public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    void merge(const RunningStats& o) {
        if (o.count_ == 0) return;
        if (count_ == 0) {
            *this = o;
            return;
        }
        const double n = static_cast<double>(count_ + o.count_);
        const double delta = o.mean_ - mean_;
        mean_ += delta * static_cast<double>(o.count_) / n;
        m2_ += o.m2_ + delta * delta * static_cast<double>(count_) * static_cast<double>(o.count_) / n;
        count_ += o.count_;
    }

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    /// Unbiased sample variance.
    double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
    double standard_error() const {
        return count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

  private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Streaming means and co-moments of a K-dimensional observation.
template <std::size_t K>
class Comoments {
  public:
    using Point = std::array<double, K>;

    void add(const Point& x) {
        ++count_;
        const double n = static_cast<double>(count_);
        Point delta;
        for (std::size_t i = 0; i < K; ++i) {
            delta[i] = x[i] - mean_[i];
            mean_[i] += delta[i] / n;
        }
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j) co_[i][j] += delta[i] * (x[j] - mean_[j]);
    }

    void merge(const Comoments& o) {
        if (o.count_ == 0) return;
        if (count_ == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(count_);
        const double nb = static_cast<double>(o.count_);
        const double n = na + nb;
        Point delta;
        for (std::size_t i = 0; i < K; ++i) delta[i] = o.mean_[i] - mean_[i];
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j)
                co_[i][j] += o.co_[i][j] + delta[i] * delta[j] * na * nb / n;
        for (std::size_t i = 0; i < K; ++i) mean_[i] += delta[i] * nb / n;
        count_ += o.count_;
    }

    std::size_t count() const { return count_; }
    double mean(std::size_t i) const { return mean_[i]; }
    /// Unbiased sample covariance of components i and j.
    double covariance(std::size_t i, std::size_t j) const {
        return count_ > 1 ? co_[i][j] / static_cast<double>(count_ - 1) : 0.0;
    }
    double standard_error(std::size_t i) const {
        return count_ > 0 ? std::sqrt(covariance(i, i) / static_cast<double>(count_)) : 0.0;
    }
    /// Standard error of the mean of Σ w_i x_i.
    double standard_error(const Point& w) const {
        if (count_ == 0) return 0.0;
        double v = 0.0;
        for (std::size_t i = 0; i < K; ++i)
            for (std::size_t j = 0; j < K; ++j) v += w[i] * w[j] * covariance(i, j);
        return std::sqrt(std::max(v, 0.0) / static_cast<double>(count_));
    }

  private:
    std::size_t count_ = 0;
    Point mean_{};
    std::array<Point, K> co_{};
};

}  // namespace covlab
