#pragma once

#include <vector>

#include "texmix/grid.hpp"

namespace texmix {

// Symmetric k x k channel inner-product matrix, row-major.
class GramMatrix {
public:
    GramMatrix() = default;

    explicit GramMatrix(int channels, double fill = 0.0) : channels_(channels) {
        if (channels < 1) throw InvalidInput("GramMatrix needs at least one channel");
        v_.assign(static_cast<size_t>(channels) * channels, fill);
    }

    int channels() const { return channels_; }
    double& at(int i, int j) { return v_[static_cast<size_t>(i) * channels_ + j]; }
    double at(int i, int j) const { return v_[static_cast<size_t>(i) * channels_ + j]; }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    double frobenius_distance(const GramMatrix& o) const;

private:
    int channels_ = 0;
    std::vector<double> v_;
};

// Per-channel circular autocorrelation over all offsets; entry (p, n) is S(p, n).
using CorrelationField = FeatureMap;

// Per-channel Fourier magnitudes; entry (w, ch) is |F_hat(w, ch)|.
using SpectrumStat = FeatureMap;

// Cross-channel circular cross-correlation of centered channels.
// Entry (p, i, j) lives in plane (i * channels + j), same spatial layout as FeatureMap.
class CovarianceField {
public:
    CovarianceField() = default;

    CovarianceField(long rows, long cols, int channels)
        : rows_(rows), cols_(cols), channels_(channels) {
        if (rows < 1 || cols < 1 || channels < 1)
            throw InvalidInput("CovarianceField dimensions must be positive");
        v_.assign(static_cast<size_t>(rows) * cols * channels * channels, 0.0);
    }

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    int channels() const { return channels_; }
    long pixel_count() const { return rows_ * cols_; }

    double& at(long r, long c, int i, int j) { return v_[index(r, c, i, j)]; }
    double at(long r, long c, int i, int j) const { return v_[index(r, c, i, j)]; }

    double* plane(int i, int j) { return v_.data() + plane_offset(i, j); }
    const double* plane(int i, int j) const { return v_.data() + plane_offset(i, j); }

    // C(0) as a k x k matrix.
    GramMatrix at_origin() const;

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

private:
    size_t plane_offset(int i, int j) const {
        return (static_cast<size_t>(i) * channels_ + j) * rows_ * cols_;
    }
    size_t index(long r, long c, int i, int j) const {
        return plane_offset(i, j) + r * cols_ + c;
    }

    long rows_ = 0;
    long cols_ = 0;
    int channels_ = 0;
    std::vector<double> v_;
};

// m(ch) = (1/|U|) sum_p F(p, ch).
std::vector<double> mean(const FeatureMap& f);

// G(i, j) = (1/|U|) sum_p F(p, i) F(p, j).
GramMatrix gram(const FeatureMap& f);

// Gram of the mean-subtracted channels.
GramMatrix centered_gram(const FeatureMap& f);

// S(p, n) = (1/|U|) sum_p' F(p', n) F(p + p', n), computed per channel via FFT.
CorrelationField correlation(const FeatureMap& f);

// C(p, i, j) = (1/|U|) sum_p' (F(p', i) - m_i)(F(p + p', j) - m_j).
CovarianceField covariance(const FeatureMap& f);

// |F_hat| per bin and channel.
SpectrumStat spectrum(const FeatureMap& f);

// Maximum absolute deviations of the four identities tying the statistics above
// to one stationary Gaussian model (mean + covariance field):
//   gram_dev:          || G - (C(0) + m m^T) ||_inf
//   centered_gram_dev: || centered G - C(0) ||_inf
//   correlation_dev:   max_p || S(p) - (diag(C(p)) + m (.) m) ||_inf
//   spectrum_dev:      max_w | spectrum(w)^2 - |U| * |S_hat(w)| |
struct GaussianIdentityReport {
    double gram_dev = 0.0;
    double centered_gram_dev = 0.0;
    double correlation_dev = 0.0;
    double spectrum_dev = 0.0;

    double max_dev() const;
};

GaussianIdentityReport verify_gaussian_identities(const FeatureMap& f);

}  // namespace texmix
