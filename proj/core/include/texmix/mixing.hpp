#pragma once

#include <cstdint>
#include <vector>

#include "texmix/grid.hpp"
#include "texmix/statistics.hpp"

namespace texmix {

// Relative weight of exemplar 1; rho = 0 yields exemplar 0, rho = 1 exemplar 1.
// The same orientation governs every mixing operation here.
class MixWeight {
public:
    MixWeight(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0))
            throw InvalidInput("mix weight must lie in [0, 1], got " + std::to_string(value));
    }
    double value() const { return value_; }

private:
    double value_;
};

// Stationary Gaussian model: channel means plus the covariance field.
struct GaussianModel {
    std::vector<double> mean;
    CovarianceField cov;
};

GaussianModel estimate_model(const FeatureMap& f);

// Optimal-transport displacement interpolation between the stationary Gaussian
// models of f0 and f1, realized directly on feature maps in the Fourier domain:
//
//   F_rho_hat(w) = (1 - rho) F0_hat(w) + rho * G_hat(w),
//   G_hat(w)     = F1_hat(w) * z(w) / |z(w)|,   z(w) = sum_ch conj(F1_hat(w,ch)) F0_hat(w,ch).
//
// The per-frequency alignment factor z/|z| has unit modulus, so G_hat keeps the
// channel moduli (and hence every second-order statistic) of f1. Where |z| falls
// below 1e-12 * (||F0_hat(w)|| * ||F1_hat(w)|| + 1e-300) the factor is 0/0; it is
// then set to 1, a plain linear blend at that frequency.
//
// `max_imag_out`, if given, receives the imaginary residue discarded by the
// final inverse transform.
FeatureMap ot_interpolate(const FeatureMap& f0, const FeatureMap& f1, MixWeight rho,
                          double* max_imag_out = nullptr);

// gram / correlation of the interpolated feature map.
GramMatrix mixed_gram(const FeatureMap& f0, const FeatureMap& f1, MixWeight rho);
CorrelationField mixed_correlation(const FeatureMap& f0, const FeatureMap& f1, MixWeight rho);

// Linear-interpolation baseline: (1 - rho) G0 + rho G1.
GramMatrix lia_gram(const GramMatrix& g0, const GramMatrix& g1, MixWeight rho);

// Samples the stationary Gaussian model of `exemplar` by circular convolution
// of the normalized texton (1/sqrt(|U|)) (exemplar - m) with one seeded white
// normal field shared across channels, plus the mean.
FeatureMap sample_gaussian_texture(const FeatureMap& exemplar, uint64_t seed);

// Pixel-level mixing: interpolate the centered inputs, restore a blended mean,
// then sample the resulting Gaussian model.
FeatureMap pixel_mix(const FeatureMap& i0, const FeatureMap& i1, MixWeight rho, uint64_t seed);

}  // namespace texmix
