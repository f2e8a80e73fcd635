#include "texmix/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include "texmix/errors.hpp"
#include "texmix/rng.hpp"

namespace texmix {

void validate(const SynthesisConfig& cfg, int tap_count) {
    if (cfg.max_iterations < 1) throw InvalidInput("max_iterations must be at least 1");
    if (!(cfg.stop_criterion > 0.0)) throw InvalidInput("stop_criterion must be positive");
    if (!(cfg.step > 0.0)) throw InvalidInput("step size must be positive");
    if (cfg.alpha < 0.0) throw InvalidInput("content weight must be nonnegative");

    if (!cfg.tap_weights.empty() && static_cast<int>(cfg.tap_weights.size()) != tap_count)
        throw InvalidInput("expected " + std::to_string(tap_count) + " tap weights, got " +
                           std::to_string(cfg.tap_weights.size()));
    const std::vector<double> weights = resolved_tap_weights(cfg, tap_count);
    bool any_positive = false;
    for (double w : weights) {
        if (w < 0.0) throw InvalidInput("tap weights must be nonnegative");
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive) throw InvalidInput("at least one tap weight must be positive");

    std::vector<bool> used_target(tap_count, false);
    for (const auto& [src, dst] : resolved_lag_pairs(cfg, tap_count)) {
        if (src < 0 || dst >= tap_count)
            throw InvalidInput("lag pair (" + std::to_string(src) + ", " + std::to_string(dst) +
                               ") is out of tap range");
        if (src >= dst)
            throw InvalidInput("lag pair (" + std::to_string(src) + ", " + std::to_string(dst) +
                               ") must be strictly increasing");
        if (used_target[dst])
            throw InvalidInput("tap " + std::to_string(dst) + " is the target of two lag pairs");
        used_target[dst] = true;
    }
}

std::vector<double> resolved_tap_weights(const SynthesisConfig& cfg, int tap_count) {
    if (cfg.tap_weights.empty()) return std::vector<double>(tap_count, 1.0);
    return cfg.tap_weights;
}

std::vector<std::pair<int, int>> resolved_lag_pairs(const SynthesisConfig& cfg, int tap_count) {
    if (!cfg.lag_pairs.empty()) return cfg.lag_pairs;
    std::vector<std::pair<int, int>> pairs;
    for (int k = 0; k + 1 < tap_count; ++k) pairs.emplace_back(k, k + 1);
    return pairs;
}

namespace {

TargetSet targets_of_acts(const std::vector<FeatureMap>& acts, StatKind kind) {
    TargetSet targets;
    targets.kind = kind;
    for (const FeatureMap& act : acts) {
        if (kind == StatKind::Gram)
            targets.grams.push_back(gram(act));
        else
            targets.correlations.push_back(correlation(act));
    }
    return targets;
}

}  // namespace

TargetSet exemplar_targets(const FeatureExtractor& net, const FeatureMap& exemplar,
                           StatKind kind) {
    return targets_of_acts(net.forward(exemplar), kind);
}

TargetSet mixing_targets(const FeatureExtractor& net, const FeatureMap& a, const FeatureMap& b,
                         MixWeight rho, StatKind kind) {
    const std::vector<FeatureMap> acts_a = net.forward(a);
    const std::vector<FeatureMap> acts_b = net.forward(b);
    std::vector<FeatureMap> mixed;
    mixed.reserve(acts_a.size());
    for (size_t k = 0; k < acts_a.size(); ++k)
        mixed.push_back(ot_interpolate(acts_a[k], acts_b[k], rho));
    return targets_of_acts(mixed, kind);
}

TargetSet morph_targets(const FeatureExtractor& net, const FeatureMap& content,
                        const FeatureMap& style_a, const FeatureMap& style_b, MixWeight rho,
                        bool lag_constraint, const std::vector<std::pair<int, int>>& lag_pairs) {
    if (net.content_tap() < 0)
        throw InvalidInput("extractor has no content tap; style morphing needs one");

    const std::vector<FeatureMap> acts_a = net.forward(style_a);
    const std::vector<FeatureMap> acts_b = net.forward(style_b);
    std::vector<FeatureMap> mixed;
    mixed.reserve(acts_a.size());
    for (size_t k = 0; k < acts_a.size(); ++k)
        mixed.push_back(ot_interpolate(acts_a[k], acts_b[k], rho));

    TargetSet targets = targets_of_acts(mixed, StatKind::Gram);
    if (lag_constraint) {
        const std::vector<int>& taps = net.taps();
        for (const auto& [src, dst] : lag_pairs) {
            if (src < 0 || dst >= static_cast<int>(taps.size()) || src >= dst)
                throw InvalidInput("lag pair (" + std::to_string(src) + ", " +
                                   std::to_string(dst) + ") is invalid for " +
                                   std::to_string(taps.size()) + " taps");
            // Mixed source-tap features pushed through the layers in between
            // replace the directly mixed statistic at the target tap.
            const FeatureMap propagated =
                net.forward_range(mixed[src], taps[src] + 1, taps[dst]);
            targets.grams[dst] = gram(propagated);
        }
    }
    targets.content = net.forward_at(content, net.content_tap());
    return targets;
}

FeatureMap noise_image(long rows, long cols, int channels, uint64_t seed) {
    FeatureMap img(rows, cols, channels);
    NormalSampler sampler(seed);
    for (double& v : img.values())
        v = std::clamp(0.5 + 0.1 * sampler.next(), 0.0, 1.0);
    return img;
}

SynthesisResult synthesize(const FeatureExtractor& net, const TargetSet& targets,
                           const SynthesisConfig& cfg, long rows, long cols) {
    validate(cfg, net.tap_count());
    if (static_cast<int>(targets.tap_count()) != net.tap_count())
        throw InvalidInput("target set has " + std::to_string(targets.tap_count()) +
                           " taps, extractor has " + std::to_string(net.tap_count()));
    const int channels = net.input_channels() > 0 ? net.input_channels() : 3;

    FeatureMap init = cfg.init_kind == InitKind::Noise
                          ? noise_image(rows, cols, channels, cfg.seed)
                          : cfg.init_image;
    if (init.rows() != rows || init.cols() != cols || init.channels() != channels)
        throw InvalidInput("init image is " + std::to_string(init.rows()) + "x" +
                           std::to_string(init.cols()) + "x" + std::to_string(init.channels()) +
                           ", run needs " + std::to_string(rows) + "x" + std::to_string(cols) +
                           "x" + std::to_string(channels));

    const std::vector<double> weights = resolved_tap_weights(cfg, net.tap_count());
    const std::vector<int>& taps = net.taps();
    const bool with_content = targets.content.has_value() && cfg.alpha > 0.0;
    if (with_content && net.content_tap() < 0)
        throw InvalidInput("content target given but the extractor has no content tap");

    FeatureMap img(rows, cols, channels);
    const Objective objective = [&](const std::vector<double>& x,
                                    std::vector<double>& grad) -> double {
        img.values() = x;
        const ForwardTrace tr = net.forward_trace(img);

        std::vector<FeatureMap> acts;
        acts.reserve(taps.size());
        for (int t : taps) acts.push_back(tr.activations[t]);

        LossResult stat = targets.kind == StatKind::Gram
                              ? gram_loss(targets, acts, weights)
                              : correlation_loss(targets, acts, weights);
        double loss = stat.loss;

        std::vector<std::pair<int, FeatureMap>> cots;
        for (size_t k = 0; k < taps.size(); ++k)
            if (weights[k] > 0.0) cots.emplace_back(taps[k], std::move(stat.cotangents[k]));
        if (with_content) {
            ContentLossResult content =
                content_loss(*targets.content, tr.activations[net.content_tap()], cfg.alpha);
            loss += content.loss;
            cots.emplace_back(net.content_tap(), std::move(content.cotangent));
        }

        grad = net.backward_from(tr, img, cots).values();
        return loss;
    };

    std::vector<double> x = init.values();
    const StopRule stop{cfg.max_iterations, cfg.stop_criterion, 10};
    std::vector<double> trace;
    if (cfg.method == OptMethod::Adam) {
        trace = minimize_adam(x, objective, AdamParams{.step = cfg.step}, stop);
    } else {
        trace = minimize_lbfgs(x, objective, LbfgsParams{}, stop);
    }

    SynthesisResult result{FeatureMap(rows, cols, channels), std::move(trace)};
    result.image.values() = std::move(x);
    return result;
}

SynthesisResult mix_textures(const FeatureExtractor& net, const FeatureMap& a,
                             const FeatureMap& b, MixWeight rho, const SynthesisConfig& cfg) {
    if (!a.same_shape(b)) throw InvalidInput("mixing exemplars must have identical shapes");
    const TargetSet targets = mixing_targets(net, a, b, rho, cfg.stat_kind);
    return synthesize(net, targets, cfg, a.rows(), a.cols());
}

SynthesisResult morph_styles(const FeatureExtractor& net, const FeatureMap& content,
                             const FeatureMap& style_a, const FeatureMap& style_b, MixWeight rho,
                             const SynthesisConfig& cfg) {
    if (!style_a.same_shape(style_b))
        throw InvalidInput("style exemplars must have identical shapes");
    validate(cfg, net.tap_count());
    const std::vector<std::pair<int, int>> pairs =
        cfg.lag_constraint ? resolved_lag_pairs(cfg, net.tap_count())
                           : std::vector<std::pair<int, int>>{};
    const TargetSet targets =
        morph_targets(net, content, style_a, style_b, rho, cfg.lag_constraint, pairs);
    return synthesize(net, targets, cfg, content.rows(), content.cols());
}

std::vector<SynthesisResult> mix_sequence(const FeatureExtractor& net, const FeatureMap& a,
                                          const FeatureMap& b, int n_jobs, bool incremental,
                                          const SynthesisConfig& cfg) {
    if (n_jobs < 2) throw InvalidInput("a mixing sequence needs at least 2 jobs");
    std::vector<SynthesisResult> results;
    results.reserve(n_jobs);
    for (int i = 0; i < n_jobs; ++i) {
        const MixWeight rho(static_cast<double>(i) / (n_jobs - 1));
        SynthesisConfig job = cfg;
        job.seed = cfg.seed + static_cast<uint64_t>(i);
        if (incremental && i > 0) {
            job.init_kind = InitKind::Image;
            job.init_image = results.back().image;
        } else {
            job.init_kind = InitKind::Noise;
        }
        results.push_back(mix_textures(net, a, b, rho, job));
    }
    return results;
}

}  // namespace texmix
