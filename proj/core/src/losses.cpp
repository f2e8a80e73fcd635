#include "texmix/losses.hpp"

#include <complex>

#include "texmix/errors.hpp"

namespace texmix {

namespace {

void check_counts(size_t targets, size_t acts, size_t weights) {
    if (targets != acts || targets != weights)
        throw InvalidInput("loss inputs disagree: " + std::to_string(targets) + " targets, " +
                           std::to_string(acts) + " activations, " + std::to_string(weights) +
                           " weights");
}

}  // namespace

LossResult gram_loss(const TargetSet& targets, const std::vector<FeatureMap>& acts,
                     const std::vector<double>& weights) {
    if (targets.kind != StatKind::Gram) throw InvalidInput("target set does not carry Grams");
    check_counts(targets.grams.size(), acts.size(), weights.size());

    LossResult result;
    result.cotangents.reserve(acts.size());
    for (size_t l = 0; l < acts.size(); ++l) {
        const FeatureMap& act = acts[l];
        const GramMatrix& target = targets.grams[l];
        if (target.channels() != act.channels())
            throw InvalidInput("gram target " + std::to_string(l) + " has " +
                               std::to_string(target.channels()) + " channels, activation has " +
                               std::to_string(act.channels()));
        FeatureMap cot(act.rows(), act.cols(), act.channels());
        const double w = weights[l];
        if (w == 0.0) {
            result.cotangents.push_back(std::move(cot));
            continue;
        }

        const GramMatrix g = gram(act);
        const int k = act.channels();
        double sq = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const double d = g.at(i, j) - target.at(i, j);
                sq += d * d;
            }
        result.loss += w * sq;

        const double scale = 4.0 * w / static_cast<double>(act.pixel_count());
        const long n = act.pixel_count();
        for (int i = 0; i < k; ++i) {
            double* cp = cot.plane(i);
            for (int j = 0; j < k; ++j) {
                const double dij = scale * (g.at(i, j) - target.at(i, j));
                if (dij == 0.0) continue;
                const double* ap = act.plane(j);
                for (long p = 0; p < n; ++p) cp[p] += dij * ap[p];
            }
        }
        result.cotangents.push_back(std::move(cot));
    }
    return result;
}

LossResult correlation_loss(const TargetSet& targets, const std::vector<FeatureMap>& acts,
                            const std::vector<double>& weights) {
    if (targets.kind != StatKind::Correlation)
        throw InvalidInput("target set does not carry correlation fields");
    check_counts(targets.correlations.size(), acts.size(), weights.size());

    LossResult result;
    result.cotangents.reserve(acts.size());
    for (size_t l = 0; l < acts.size(); ++l) {
        const FeatureMap& act = acts[l];
        const CorrelationField& target = targets.correlations[l];
        if (!target.same_shape(act))
            throw InvalidInput("correlation target " + std::to_string(l) +
                               " shape does not match the activation");
        const double w = weights[l];
        if (w == 0.0) {
            result.cotangents.emplace_back(act.rows(), act.cols(), act.channels());
            continue;
        }

        const CorrelationField s = correlation(act);
        FeatureMap diff(act.rows(), act.cols(), act.channels());
        double sq = 0.0;
        for (size_t p = 0; p < s.size(); ++p) {
            const double d = s.values()[p] - target.values()[p];
            diff.values()[p] = d;
            sq += d * d;
        }
        result.loss += w * sq;

        const SpectrumGrid a_hat = fft_forward(act);
        SpectrumGrid g_hat = fft_forward(diff);
        for (size_t p = 0; p < g_hat.values().size(); ++p) {
            const std::complex<double> d = g_hat.values()[p];
            g_hat.values()[p] = (d + std::conj(d)) * a_hat.values()[p];
        }
        FeatureMap cot = fft_inverse(g_hat);
        const double scale = 2.0 * w / static_cast<double>(act.pixel_count());
        for (double& v : cot.values()) v *= scale;
        result.cotangents.push_back(std::move(cot));
    }
    return result;
}

ContentLossResult content_loss(const FeatureMap& target, const FeatureMap& act, double alpha) {
    if (!target.same_shape(act))
        throw InvalidInput("content target shape does not match the activation");
    if (alpha < 0.0) throw InvalidInput("content weight must be nonnegative");

    ContentLossResult result{0.0, FeatureMap(act.rows(), act.cols(), act.channels())};
    if (alpha == 0.0) return result;
    for (size_t p = 0; p < act.size(); ++p) {
        const double d = act.values()[p] - target.values()[p];
        result.loss += alpha * d * d;
        result.cotangent.values()[p] = 2.0 * alpha * d;
    }
    return result;
}

}  // namespace texmix
