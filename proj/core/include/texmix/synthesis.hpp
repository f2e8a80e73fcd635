#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "texmix/losses.hpp"
#include "texmix/mixing.hpp"
#include "texmix/net.hpp"
#include "texmix/optimize.hpp"

namespace texmix {

enum class OptMethod { Adam, Lbfgs };
enum class InitKind { Noise, Image };

// Hyperparameters of one synthesis run. Defaults: statistics matched via
// Grams with equal per-tap weights, Adam with step 0.02, at most 10000
// iterations, stopping when the relative loss change over a 10-iteration
// window drops below 0.001.
struct SynthesisConfig {
    StatKind stat_kind = StatKind::Gram;
    std::vector<double> tap_weights;  // empty = equal weight 1 per tap

    OptMethod method = OptMethod::Adam;
    double step = 0.02;  // Adam step size; ignored by L-BFGS
    int max_iterations = 10000;
    double stop_criterion = 0.001;

    InitKind init_kind = InitKind::Noise;
    uint64_t seed = 0;
    FeatureMap init_image;  // starting point when init_kind == Image

    double alpha = 5.0;  // content weight, style morphing only
    bool lag_constraint = false;
    // Tap-ordinal pairs (source -> target); empty = (0,1),(1,2),... over the
    // available taps.
    std::vector<std::pair<int, int>> lag_pairs;
};

// Throws InvalidInput unless the config is usable with `tap_count` taps:
// weights nonnegative with at least one positive, max_iterations >= 1,
// stop_criterion > 0, step > 0, alpha >= 0, lag pairs strictly increasing
// and within range with distinct targets.
void validate(const SynthesisConfig& cfg, int tap_count);

// Per-tap weights with the empty-default expanded.
std::vector<double> resolved_tap_weights(const SynthesisConfig& cfg, int tap_count);

// Effective lag pairs: cfg.lag_pairs, or consecutive-tap pairs when empty.
std::vector<std::pair<int, int>> resolved_lag_pairs(const SynthesisConfig& cfg, int tap_count);

struct SynthesisResult {
    FeatureMap image;
    std::vector<double> trace;  // loss per iteration; image matches trace.back()
};

// Targets of ordinary synthesis: per-tap statistics of one exemplar.
TargetSet exemplar_targets(const FeatureExtractor& net, const FeatureMap& exemplar,
                           StatKind kind);

// Targets of texture mixing: per tap, statistics of ot_interpolate(F0, F1, rho)
// where F0/F1 are the exemplars' tap activations.
TargetSet mixing_targets(const FeatureExtractor& net, const FeatureMap& a, const FeatureMap& b,
                         MixWeight rho, StatKind kind);

// Targets of style morphing: mixed Grams per tap plus the content image's
// activation at the content tap. With the lag constraint on, each (source ->
// target) tap pair replaces the target tap's Gram with the Gram of the
// source-tap mixed features pushed forward through the intervening layers.
TargetSet morph_targets(const FeatureExtractor& net, const FeatureMap& content,
                        const FeatureMap& style_a, const FeatureMap& style_b, MixWeight rho,
                        bool lag_constraint, const std::vector<std::pair<int, int>>& lag_pairs);

// Noise initialization of the synthesis loop: i.i.d. N(0.5, 0.1) clamped to
// [0, 1], drawn from the documented stream.
FeatureMap noise_image(long rows, long cols, int channels, uint64_t seed);

// Minimizes the statistics (+ optional content) objective over image pixels.
// rows/cols give the output size; the channel count comes from the extractor.
// Deterministic given config; throws DivergenceError when the loss leaves the
// finite range.
SynthesisResult synthesize(const FeatureExtractor& net, const TargetSet& targets,
                           const SynthesisConfig& cfg, long rows, long cols);

// Algorithm: forward both exemplars, interpolate tap statistics at rho,
// synthesize from the mixed targets.
SynthesisResult mix_textures(const FeatureExtractor& net, const FeatureMap& a,
                             const FeatureMap& b, MixWeight rho, const SynthesisConfig& cfg);

// Mixed-style synthesis anchored to a content image with weight cfg.alpha.
SynthesisResult morph_styles(const FeatureExtractor& net, const FeatureMap& content,
                             const FeatureMap& style_a, const FeatureMap& style_b, MixWeight rho,
                             const SynthesisConfig& cfg);

// N jobs at rho_i = i/(N-1), seeds cfg.seed + i. Incremental mode starts job
// i > 0 from job i-1's output instead of fresh noise (job order is serial);
// otherwise every job starts from its own seeded noise.
std::vector<SynthesisResult> mix_sequence(const FeatureExtractor& net, const FeatureMap& a,
                                          const FeatureMap& b, int n_jobs, bool incremental,
                                          const SynthesisConfig& cfg);

}  // namespace texmix
