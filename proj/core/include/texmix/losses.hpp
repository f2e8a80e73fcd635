#pragma once

#include <optional>
#include <vector>

#include "texmix/grid.hpp"
#include "texmix/statistics.hpp"

namespace texmix {

// Which second-order statistic the synthesis objective matches.
enum class StatKind { Gram, Correlation };

// Per-tap optimization targets plus an optional content anchor (used by style
// morphing, taken at the extractor's content tap).
struct TargetSet {
    StatKind kind = StatKind::Gram;
    std::vector<GramMatrix> grams;               // per tap when kind == Gram
    std::vector<CorrelationField> correlations;  // per tap when kind == Correlation
    std::optional<FeatureMap> content;

    size_t tap_count() const {
        return kind == StatKind::Gram ? grams.size() : correlations.size();
    }
};

// A loss value with its exact gradients w.r.t. each tap activation.
struct LossResult {
    double loss = 0.0;
    std::vector<FeatureMap> cotangents;
};

// loss = sum_taps w_l * || gram(act_l) - target_l ||_F^2.
// Gradient w.r.t. act_l: (4 w_l / |U_l|) * act_l * (gram(act_l) - target_l),
// reading act_l as a |U_l| x k matrix. Zero-weight taps contribute nothing and
// get zero cotangents.
LossResult gram_loss(const TargetSet& targets, const std::vector<FeatureMap>& acts,
                     const std::vector<double>& weights);

// loss = sum_taps w_l * || correlation(act_l) - target_l ||^2 summed over all
// offsets and channels. With D = correlation(act) - target per channel, the
// gradient is (2 w / |U|) * ifft((D_hat + conj(D_hat)) .* act_hat): the
// derivative picks up both a correlation and a convolution term, which this
// form captures exactly for arbitrary (even non-symmetric) targets.
LossResult correlation_loss(const TargetSet& targets, const std::vector<FeatureMap>& acts,
                            const std::vector<double>& weights);

// loss = alpha * || target - act ||_F^2, gradient 2 * alpha * (act - target).
struct ContentLossResult {
    double loss = 0.0;
    FeatureMap cotangent;
};
ContentLossResult content_loss(const FeatureMap& target, const FeatureMap& act, double alpha);

}  // namespace texmix
