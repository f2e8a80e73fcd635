// texmix: stationary-Gaussian texture statistics, synthesis, mixing, morphing.
// Exit codes: 0 success, 1 usage/config error, 2 runtime/numeric error.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "texmix/commands.hpp"
#include "texmix/config.hpp"
#include "texmix/errors.hpp"

namespace {

using texmix::RunConfig;

// Shared --config / override plumbing: every subcommand starts from the file
// (when given) and lets explицit flags win.
struct CommonFlags {
    std::string config_path;
    std::string stat;
    std::optional<uint64_t> seed;
    std::optional<int> iterations;

    void attach(CLI::App* cmd, bool with_stat = true) {
        cmd->add_option("--config", config_path, "JSON config file");
        if (with_stat)
            cmd->add_option("--stat", stat, "statistic to match: gram or correlation")
                ->check(CLI::IsMember({"gram", "correlation"}));
        cmd->add_option("--seed", seed, "base RNG seed (overrides config)");
        cmd->add_option("--iterations", iterations, "max optimizer iterations (overrides config)")
            ->check(CLI::PositiveNumber);
    }

    RunConfig resolve() const {
        RunConfig cfg =
            config_path.empty() ? RunConfig{} : texmix::load_config(config_path);
        if (!stat.empty())
            cfg.synth.stat_kind =
                stat == "gram" ? texmix::StatKind::Gram : texmix::StatKind::Correlation;
        if (seed) cfg.synth.seed = *seed;
        if (iterations) cfg.synth.max_iterations = *iterations;
        return cfg;
    }
};

void override_path(std::string& dst, const std::string& flag) {
    if (!flag.empty()) dst = flag;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian texture statistics, synthesis and mixing"};
    app.require_subcommand(1);

    // stats
    auto* stats = app.add_subcommand("stats", "statistics report for one image");
    std::string stats_image, stats_out;
    CommonFlags stats_common;
    stats->add_option("image", stats_image, "input PNG")->required();
    stats->add_option("--out", stats_out, "report path (stdout when omitted)");
    stats_common.attach(stats, false);

    // synth
    auto* synth = app.add_subcommand("synth", "synthesize a texture from one exemplar");
    std::string synth_exemplar, synth_out;
    CommonFlags synth_common;
    synth->add_option("--exemplar", synth_exemplar, "exemplar PNG");
    synth->add_option("--out", synth_out, "output PNG path");
    synth_common.attach(synth);

    // mix
    auto* mix = app.add_subcommand("mix", "mix two textures at one rho or over a grid");
    std::string mix_a, mix_b, mix_out_dir;
    std::optional<double> mix_rho;
    std::optional<int> mix_grid;
    bool mix_incremental = false;
    CommonFlags mix_common;
    mix->add_option("--a", mix_a, "first exemplar PNG");
    mix->add_option("--b", mix_b, "second exemplar PNG");
    mix->add_option("--rho", mix_rho, "mix weight in [0,1]")->check(CLI::Range(0.0, 1.0));
    mix->add_option("--grid", mix_grid, "number of evenly spaced rho values")
        ->check(CLI::Range(2, 1000000));
    mix->add_flag("--incremental", mix_incremental,
                  "start each grid job from the previous output");
    mix->add_option("--out-dir", mix_out_dir, "output directory");
    mix_common.attach(mix);

    // morph
    auto* morph = app.add_subcommand("morph", "morph two styles over a content image");
    std::string morph_content, morph_a, morph_b, morph_out_dir;
    std::optional<double> morph_rho, morph_alpha;
    std::optional<int> morph_grid;
    bool morph_lag = false, morph_no_lag = false;
    CommonFlags morph_common;
    morph->add_option("--content", morph_content, "content PNG");
    morph->add_option("--style-a", morph_a, "first style PNG");
    morph->add_option("--style-b", morph_b, "second style PNG");
    morph->add_option("--rho", morph_rho, "mix weight in [0,1]")->check(CLI::Range(0.0, 1.0));
    morph->add_option("--grid", morph_grid, "number of evenly spaced rho values")
        ->check(CLI::Range(2, 1000000));
    morph->add_option("--alpha", morph_alpha, "content weight (default 5)")
        ->check(CLI::NonNegativeNumber);
    morph->add_flag("--lag", morph_lag, "build deep targets from propagated mixed features");
    morph->add_flag("--no-lag", morph_no_lag, "plain per-tap mixing targets");
    morph->add_option("--out-dir", morph_out_dir, "output directory");
    morph_common.attach(morph);

    // gauss
    auto* gauss = app.add_subcommand("gauss", "pixel-level Gaussian sampling / mixing");
    texmix::GaussOptions gauss_opts;
    std::vector<std::string> gauss_mix;
    gauss->add_option("--sample", gauss_opts.sample, "exemplar PNG to sample");
    gauss->add_option("--mix", gauss_mix, "two exemplar PNGs to mix")->expected(2);
    gauss->add_option("--rho", gauss_opts.rho, "mix weight in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
    gauss->add_option("--seed", gauss_opts.seed, "sampling seed");
    gauss->add_option("--out", gauss_opts.out, "output PNG path");

    // check
    auto* check = app.add_subcommand("check", "run the embedded invariant suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*stats) {
            RunConfig cfg = stats_common.resolve();
            override_path(cfg.paths.exemplar, stats_image);
            override_path(cfg.paths.out, stats_out);
            texmix::run_stats(cfg);
        } else if (*synth) {
            RunConfig cfg = synth_common.resolve();
            override_path(cfg.paths.exemplar, synth_exemplar);
            override_path(cfg.paths.out, synth_out);
            texmix::run_synth(cfg);
        } else if (*mix) {
            RunConfig cfg = mix_common.resolve();
            override_path(cfg.paths.a, mix_a);
            override_path(cfg.paths.b, mix_b);
            override_path(cfg.paths.out_dir, mix_out_dir);
            if (mix_rho) cfg.rho = mix_rho;
            if (mix_grid) cfg.grid = mix_grid;
            if (mix_incremental) cfg.incremental = true;
            texmix::run_mix(cfg);
        } else if (*morph) {
            RunConfig cfg = morph_common.resolve();
            override_path(cfg.paths.content, morph_content);
            override_path(cfg.paths.style_a, morph_a);
            override_path(cfg.paths.style_b, morph_b);
            override_path(cfg.paths.out_dir, morph_out_dir);
            if (morph_rho) cfg.rho = morph_rho;
            if (morph_grid) cfg.grid = morph_grid;
            if (morph_alpha) cfg.synth.alpha = *morph_alpha;
            if (morph_lag) cfg.synth.lag_constraint = true;
            if (morph_no_lag) cfg.synth.lag_constraint = false;
            texmix::run_morph(cfg);
        } else if (*gauss) {
            if (gauss_mix.size() == 2) {
                gauss_opts.mix_a = gauss_mix[0];
                gauss_opts.mix_b = gauss_mix[1];
            }
            texmix::run_gauss(gauss_opts);
        } else if (*check) {
            return texmix::run_check() ? 0 : 2;
        }
        return 0;
    } catch (const texmix::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const texmix::InvalidInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
