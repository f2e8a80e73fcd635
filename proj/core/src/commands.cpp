#include "texmix/commands.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>

#include <json.hpp>

#include "texmix/errors.hpp"
#include "texmix/image_io.hpp"
#include "texmix/losses.hpp"
#include "texmix/mixing.hpp"
#include "texmix/net.hpp"
#include "texmix/rng.hpp"
#include "texmix/statistics.hpp"
#include "texmix/synthesis.hpp"

namespace texmix {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

FeatureMap center_crop(const FeatureMap& f, long new_rows, long new_cols) {
    FeatureMap out(new_rows, new_cols, f.channels());
    const long r0 = (f.rows() - new_rows) / 2;
    const long c0 = (f.cols() - new_cols) / 2;
    for (int ch = 0; ch < f.channels(); ++ch)
        for (long r = 0; r < new_rows; ++r)
            for (long c = 0; c < new_cols; ++c) out.at(r, c, ch) = f.at(r0 + r, c0 + c, ch);
    return out;
}

// Loads a PNG and center-crops it to dims divisible by 2^pool_count so every
// pooling stage sees even sizes.
FeatureMap load_cropped(const std::string& path, int pool_count) {
    FeatureMap img = load_png(path);
    const long factor = 1L << pool_count;
    const long nr = img.rows() - img.rows() % factor;
    const long nc = img.cols() - img.cols() % factor;
    if (nr == img.rows() && nc == img.cols()) return img;
    if (nr < 1 || nc < 1)
        throw InvalidInput(path + " is " + std::to_string(img.rows()) + "x" +
                           std::to_string(img.cols()) + ", smaller than one " +
                           std::to_string(factor) + "-pixel pooling block");
    std::fprintf(stderr,
                 "warning: %s is %ldx%ld, not divisible by %ld; center-cropping to %ldx%ld\n",
                 path.c_str(), img.rows(), img.cols(), factor, nr, nc);
    return center_crop(img, nr, nc);
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trace_csv(const std::vector<double>& trace) {
    std::string out = "iteration,loss\n";
    for (size_t i = 0; i < trace.size(); ++i)
        out += std::to_string(i) + "," + format_g17(trace[i]) + "\n";
    return out;
}

void ensure_parent_dir(const std::string& path) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
}

void ensure_dir(const std::string& dir) {
    if (!dir.empty()) fs::create_directories(dir);
}

// <out>[.png] -> {<out>.png, <out>_trace.csv, <out>_config.json}
struct OutBase {
    std::string png, csv, config;
};

OutBase out_base(const std::string& out) {
    std::string stem = out;
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".png") == 0)
        stem.resize(stem.size() - 4);
    return {stem + ".png", stem + "_trace.csv", stem + "_config.json"};
}

std::string job_name(const std::string& prefix, int index, int count) {
    size_t width = 2;
    for (int top = 100; count > top; top *= 10) ++width;
    std::string digits = std::to_string(index);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return prefix + "_" + digits;
}

void require_path(const std::string& value, const std::string& what) {
    if (value.empty()) throw ConfigError("missing " + what);
}

// ---- stats report ----------------------------------------------------------

json matrix_json(const GramMatrix& g) {
    json rows = json::array();
    for (int i = 0; i < g.channels(); ++i) {
        json row = json::array();
        for (int j = 0; j < g.channels(); ++j) row.push_back(g.at(i, j));
        rows.push_back(row);
    }
    return rows;
}

json identities_json(const GaussianIdentityReport& report) {
    return {
        {"gram_dev", report.gram_dev},
        {"centered_gram_dev", report.centered_gram_dev},
        {"correlation_dev", report.correlation_dev},
        {"spectrum_dev", report.spectrum_dev},
    };
}

// Per-channel summaries keep tap sections compact; full matrices only make
// sense at k = 3.
json field_stats_json(const FeatureMap& f, bool full_matrices) {
    json out;
    out["rows"] = f.rows();
    out["cols"] = f.cols();
    out["channels"] = f.channels();
    out["mean"] = mean(f);

    const GramMatrix g = gram(f);
    const GramMatrix cg = centered_gram(f);
    if (full_matrices) {
        out["gram"] = matrix_json(g);
        out["centered_gram"] = matrix_json(cg);
    } else {
        double g_fro = 0.0, cg_fro = 0.0;
        for (int i = 0; i < g.channels(); ++i)
            for (int j = 0; j < g.channels(); ++j) {
                g_fro += g.at(i, j) * g.at(i, j);
                cg_fro += cg.at(i, j) * cg.at(i, j);
            }
        out["gram_frobenius"] = std::sqrt(g_fro);
        out["centered_gram_frobenius"] = std::sqrt(cg_fro);
    }

    const CorrelationField s = correlation(f);
    json corr;
    {
        json at_zero = json::array(), lo = json::array(), hi = json::array();
        for (int ch = 0; ch < f.channels(); ++ch) {
            const double* plane = s.plane(ch);
            double mn = plane[0], mx = plane[0];
            for (long p = 0; p < s.pixel_count(); ++p) {
                mn = std::min(mn, plane[p]);
                mx = std::max(mx, plane[p]);
            }
            at_zero.push_back(plane[0]);
            lo.push_back(mn);
            hi.push_back(mx);
        }
        corr["at_zero"] = at_zero;
        corr["min"] = lo;
        corr["max"] = hi;
    }
    out["correlation"] = corr;

    const SpectrumStat spec = spectrum(f);
    json sp;
    {
        json dc = json::array(), peak = json::array();
        for (int ch = 0; ch < f.channels(); ++ch) {
            const double* plane = spec.plane(ch);
            double mx = 0.0;
            for (long p = 1; p < spec.pixel_count(); ++p) mx = std::max(mx, plane[p]);
            dc.push_back(plane[0]);
            peak.push_back(mx);
        }
        sp["dc"] = dc;
        sp["peak_non_dc"] = peak;
    }
    out["spectrum"] = sp;

    out["identities"] = identities_json(verify_gaussian_identities(f));
    return out;
}

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        ensure_parent_dir(out_path);
        write_file_atomic(out_path, text);
    }
}

// ---- sequence jobs ---------------------------------------------------------

struct JobRecord {
    int index;
    double rho;
    uint64_t seed;
    std::string init;
    std::string image_file;
    const SynthesisResult* result;
};

void write_sequence_outputs(const RunConfig& cfg, const std::string& command,
                            const std::string& out_dir, const std::vector<JobRecord>& jobs) {
    json jobs_doc = json::array();
    for (const JobRecord& job : jobs) {
        save_png(job.result->image, out_dir + "/" + job.image_file);
        write_file_atomic(out_dir + "/" + job_name(command, job.index, (int)jobs.size()) +
                              "_trace.csv",
                          trace_csv(job.result->trace));
        jobs_doc.push_back({
            {"index", job.index},
            {"rho", job.rho},
            {"seed", job.seed},
            {"init", job.init},
            {"image", job.image_file},
            {"iterations", job.result->trace.size()},
            {"final_loss", job.result->trace.back()},
        });
    }
    write_file_atomic(out_dir + "/jobs.json", jobs_doc.dump(2) + "\n");
    write_file_atomic(out_dir + "/config.json", resolved_config(cfg, command));
}

std::string noise_desc(uint64_t seed) {
    return "noise(seed=" + std::to_string(seed) + ")";
}

}  // namespace

void run_stats(const RunConfig& cfg) {
    require_path(cfg.paths.exemplar, "image path (--image or /images/exemplar)");
    const FeatureExtractor net = build_extractor(cfg.extractor);
    const FeatureMap img = load_cropped(cfg.paths.exemplar, net.pool_count());

    json report;
    report["image"] = cfg.paths.exemplar;
    report["raw"] = field_stats_json(img, true);

    const std::vector<FeatureMap> acts = net.forward(img);
    json taps = json::array();
    for (size_t k = 0; k < acts.size(); ++k) {
        json tap = field_stats_json(acts[k], acts[k].channels() <= 3);
        tap["layer"] = net.taps()[k];
        taps.push_back(tap);
    }
    report["taps"] = taps;

    write_or_print(cfg.paths.out, report.dump(2) + "\n");
}

void run_synth(const RunConfig& cfg) {
    require_path(cfg.paths.exemplar, "exemplar image (--exemplar or /images/exemplar)");
    require_path(cfg.paths.out, "output path (--out or /out)");

    const FeatureExtractor net = build_extractor(cfg.extractor);
    const FeatureMap exemplar = load_cropped(cfg.paths.exemplar, net.pool_count());

    SynthesisConfig synth = cfg.synth;
    if (synth.init_kind == InitKind::Image) {
        require_path(cfg.paths.init, "init image (/init/path)");
        synth.init_image = load_cropped(cfg.paths.init, net.pool_count());
    }

    const TargetSet targets = exemplar_targets(net, exemplar, synth.stat_kind);
    const SynthesisResult res = synthesize(net, targets, synth, exemplar.rows(), exemplar.cols());

    const OutBase base = out_base(cfg.paths.out);
    ensure_parent_dir(base.png);
    save_png(res.image, base.png);
    write_file_atomic(base.csv, trace_csv(res.trace));
    const json extra = {{"result",
                         {{"iterations", res.trace.size()}, {"final_loss", res.trace.back()}}}};
    write_file_atomic(base.config, resolved_config(cfg, "synth", extra.dump()));
}

void run_mix(const RunConfig& cfg) {
    require_path(cfg.paths.a, "first exemplar (--a or /images/a)");
    require_path(cfg.paths.b, "second exemplar (--b or /images/b)");
    require_path(cfg.paths.out_dir, "output directory (--out-dir or /out_dir)");
    if (cfg.rho.has_value() == cfg.grid.has_value())
        throw ConfigError("choose exactly one of --rho and --grid");
    if (cfg.grid && *cfg.grid < 2) throw ConfigError("--grid must be at least 2");
    if (cfg.incremental && !cfg.grid)
        throw ConfigError("--incremental needs a --grid sequence");

    const FeatureExtractor net = build_extractor(cfg.extractor);
    const FeatureMap a = load_cropped(cfg.paths.a, net.pool_count());
    const FeatureMap b = load_cropped(cfg.paths.b, net.pool_count());
    if (!a.same_shape(b))
        throw InvalidInput("exemplars differ in size: " + cfg.paths.a + " is " +
                           std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + ", " +
                           cfg.paths.b + " is " + std::to_string(b.rows()) + "x" +
                           std::to_string(b.cols()));
    ensure_dir(cfg.paths.out_dir);

    std::vector<SynthesisResult> results;
    std::vector<JobRecord> jobs;
    if (cfg.grid) {
        const int n = *cfg.grid;
        results = mix_sequence(net, a, b, n, cfg.incremental, cfg.synth);
        for (int i = 0; i < n; ++i) {
            const std::string name = job_name("mix", i, n);
            const std::string init = cfg.incremental && i > 0
                                         ? job_name("mix", i - 1, n) + ".png"
                                         : noise_desc(cfg.synth.seed + i);
            jobs.push_back({i, static_cast<double>(i) / (n - 1), cfg.synth.seed + i, init,
                            name + ".png", &results[i]});
        }
    } else {
        SynthesisConfig synth = cfg.synth;
        std::string init = noise_desc(synth.seed);
        if (synth.init_kind == InitKind::Image) {
            require_path(cfg.paths.init, "init image (/init/path)");
            synth.init_image = load_cropped(cfg.paths.init, net.pool_count());
            init = cfg.paths.init;
        }
        results.push_back(mix_textures(net, a, b, MixWeight(*cfg.rho), synth));
        jobs.push_back({0, *cfg.rho, synth.seed, init, "mix_00.png", &results[0]});
    }
    write_sequence_outputs(cfg, "mix", cfg.paths.out_dir, jobs);
}

void run_morph(const RunConfig& cfg) {
    require_path(cfg.paths.content, "content image (--content or /images/content)");
    require_path(cfg.paths.style_a, "first style (--style-a or /images/style_a)");
    require_path(cfg.paths.style_b, "second style (--style-b or /images/style_b)");
    require_path(cfg.paths.out_dir, "output directory (--out-dir or /out_dir)");
    if (cfg.rho.has_value() == cfg.grid.has_value())
        throw ConfigError("choose exactly one of --rho and --grid");

    const FeatureExtractor net = build_extractor(cfg.extractor);
    const FeatureMap content = load_cropped(cfg.paths.content, net.pool_count());
    const FeatureMap style_a = load_cropped(cfg.paths.style_a, net.pool_count());
    const FeatureMap style_b = load_cropped(cfg.paths.style_b, net.pool_count());
    ensure_dir(cfg.paths.out_dir);

    std::vector<double> rhos;
    if (cfg.grid) {
        if (*cfg.grid < 2) throw ConfigError("--grid must be at least 2");
        for (int i = 0; i < *cfg.grid; ++i)
            rhos.push_back(static_cast<double>(i) / (*cfg.grid - 1));
    } else {
        rhos.push_back(*cfg.rho);
    }

    const int count = static_cast<int>(rhos.size());
    std::vector<SynthesisResult> results;
    std::vector<std::string> inits;
    for (int i = 0; i < count; ++i) {
        SynthesisConfig synth = cfg.synth;
        synth.seed = cfg.synth.seed + static_cast<uint64_t>(i);
        std::string init = noise_desc(synth.seed);
        if (!cfg.grid && synth.init_kind == InitKind::Image) {
            require_path(cfg.paths.init, "init image (/init/path)");
            synth.init_image = load_cropped(cfg.paths.init, net.pool_count());
            init = cfg.paths.init;
        } else {
            synth.init_kind = InitKind::Noise;
        }
        results.push_back(morph_styles(net, content, style_a, style_b, MixWeight(rhos[i]), synth));
        inits.push_back(std::move(init));
    }
    std::vector<JobRecord> jobs;
    for (int i = 0; i < count; ++i)
        jobs.push_back({i, rhos[i], cfg.synth.seed + static_cast<uint64_t>(i), inits[i],
                        job_name("morph", i, count) + ".png", &results[i]});
    write_sequence_outputs(cfg, "morph", cfg.paths.out_dir, jobs);
}

void run_gauss(const GaussOptions& opts) {
    require_path(opts.out, "output path (--out)");
    const bool sample_mode = !opts.sample.empty();
    const bool mix_mode = !opts.mix_a.empty() || !opts.mix_b.empty();
    if (sample_mode == mix_mode) throw ConfigError("choose exactly one of --sample and --mix");
    if (mix_mode && (opts.mix_a.empty() || opts.mix_b.empty()))
        throw ConfigError("--mix needs two exemplar paths");

    FeatureMap out = sample_mode
                         ? sample_gaussian_texture(load_png(opts.sample), opts.seed)
                         : pixel_mix(load_png(opts.mix_a), load_png(opts.mix_b),
                                     MixWeight(opts.rho), opts.seed);

    const OutBase base = out_base(opts.out);
    ensure_parent_dir(base.png);
    save_png(out, base.png);
    json doc = {{"command", "gauss"},
                {"mode", sample_mode ? "sample" : "mix"},
                {"seed", opts.seed},
                {"out", base.png}};
    if (sample_mode) {
        doc["sample"] = opts.sample;
    } else {
        doc["a"] = opts.mix_a;
        doc["b"] = opts.mix_b;
        doc["rho"] = opts.rho;
    }
    write_file_atomic(base.config, doc.dump(2) + "\n");
}

// ---- embedded invariant suite ----------------------------------------------

namespace {

// Central finite difference of `f` in one pixel coordinate.
double central_diff(const std::function<double(const FeatureMap&)>& f, const FeatureMap& x,
                    long r, long c, int ch, double h) {
    FeatureMap hi = x, lo = x;
    hi.at(r, c, ch) += h;
    lo.at(r, c, ch) -= h;
    return (f(hi) - f(lo)) / (2.0 * h);
}

// Largest relative FD error of `analytic` over `samples` random coordinates.
double max_fd_error(const std::function<double(const FeatureMap&)>& f, const FeatureMap& x,
                    const FeatureMap& analytic, int samples, uint64_t seed) {
    std::mt19937_64 gen(seed);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const long r = static_cast<long>(gen() % static_cast<uint64_t>(x.rows()));
        const long c = static_cast<long>(gen() % static_cast<uint64_t>(x.cols()));
        const int ch = static_cast<int>(gen() % static_cast<uint64_t>(x.channels()));
        const double fd = central_diff(f, x, r, c, ch, 1e-4);
        const double an = analytic.at(r, c, ch);
        const double err = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-6});
        worst = std::max(worst, err);
    }
    return worst;
}

std::string check_identities() {
    const FeatureMap img = normal_field(24, 32, 3, 11, 0.5, 0.2);
    const GaussianIdentityReport report = verify_gaussian_identities(img);
    if (report.max_dev() < 1e-8) return "";
    return "identity deviation " + format_g17(report.max_dev());
}

std::string check_ot_endpoints() {
    const FeatureMap f0 = normal_field(16, 16, 2, 21);
    const FeatureMap f1 = normal_field(16, 16, 2, 22, 0.3, 1.5);

    const FeatureMap at0 = ot_interpolate(f0, f1, 0.0);
    double dev0 = 0.0;
    for (size_t p = 0; p < at0.size(); ++p)
        dev0 = std::max(dev0, std::abs(at0.values()[p] - f0.values()[p]));
    if (dev0 >= 1e-10) return "rho=0 deviation " + format_g17(dev0);

    const FeatureMap at1 = ot_interpolate(f0, f1, 1.0);
    const CorrelationField s1 = correlation(f1), s1m = correlation(at1);
    double dev1 = 0.0;
    for (size_t p = 0; p < s1.size(); ++p)
        dev1 = std::max(dev1, std::abs(s1.values()[p] - s1m.values()[p]));
    const GramMatrix g1 = gram(f1), g1m = gram(at1);
    dev1 = std::max(dev1, g1.frobenius_distance(g1m));
    if (dev1 >= 1e-8) return "rho=1 second-order deviation " + format_g17(dev1);
    return "";
}

// Pure tones at different frequencies: most bins have zero cross-power, so the
// alignment fallback must engage; without it the result would be NaN.
std::string check_alignment_fallback() {
    const long n = 16;
    FeatureMap f0(n, n, 1), f1(n, n, 1);
    for (long r = 0; r < n; ++r)
        for (long c = 0; c < n; ++c) {
            f0.at(r, c, 0) = std::cos(2.0 * M_PI * r / n);
            f1.at(r, c, 0) = std::cos(2.0 * M_PI * 2.0 * c / n);
        }
    const FeatureMap mid = ot_interpolate(f0, f1, 0.5);
    for (double v : mid.values())
        if (!std::isfinite(v)) return "non-finite output at disjoint spectra";
    const FeatureMap at1 = ot_interpolate(f0, f1, 1.0);
    const SpectrumStat want = spectrum(f1), got = spectrum(at1);
    double dev = 0.0;
    for (size_t p = 0; p < want.size(); ++p)
        dev = std::max(dev, std::abs(want.values()[p] - got.values()[p]));
    if (dev >= 1e-8) return "rho=1 spectrum deviation " + format_g17(dev);
    return "";
}

std::string check_loss_gradients() {
    Architecture arch;
    arch.layers = {
        {LayerKind::Conv, 3, 3, 3, 4, true},  {LayerKind::Relu}, {LayerKind::AvgPool},
        {LayerKind::Conv, 3, 3, 4, 6, true},  {LayerKind::Relu},
    };
    arch.taps = {1, 4};
    arch.content_tap = 4;
    const FeatureExtractor net = random_init(arch, 31);

    Architecture arch_max = arch;
    arch_max.layers[2].kind = LayerKind::MaxPool;
    const FeatureExtractor net_max = random_init(arch_max, 32);

    const FeatureMap x = normal_field(8, 8, 3, 33, 0.5, 0.25);
    const FeatureMap exemplar = normal_field(8, 8, 3, 34, 0.5, 0.25);
    const std::vector<double> weights(2, 1.0);

    struct Case {
        const char* name;
        const FeatureExtractor* net;
        StatKind kind;
        double alpha;
    };
    const Case cases[] = {
        {"gram/avgpool", &net, StatKind::Gram, 0.0},
        {"gram/maxpool", &net_max, StatKind::Gram, 0.0},
        {"correlation", &net, StatKind::Correlation, 0.0},
        {"gram+content", &net, StatKind::Gram, 5.0},
    };
    for (const Case& c : cases) {
        TargetSet targets = exemplar_targets(*c.net, exemplar, c.kind);
        if (c.alpha > 0.0) targets.content = c.net->forward_at(exemplar, c.net->content_tap());

        const auto loss_of = [&](const FeatureMap& img) {
            const std::vector<FeatureMap> acts = c.net->forward(img);
            double loss = c.kind == StatKind::Gram
                              ? gram_loss(targets, acts, weights).loss
                              : correlation_loss(targets, acts, weights).loss;
            if (c.alpha > 0.0)
                loss += content_loss(*targets.content,
                                     c.net->forward_at(img, c.net->content_tap()), c.alpha)
                            .loss;
            return loss;
        };
        const auto grad_of = [&](const FeatureMap& img) {
            const ForwardTrace tr = c.net->forward_trace(img);
            std::vector<FeatureMap> acts;
            for (int t : c.net->taps()) acts.push_back(tr.activations[t]);
            LossResult lr = c.kind == StatKind::Gram
                                ? gram_loss(targets, acts, weights)
                                : correlation_loss(targets, acts, weights);
            std::vector<std::pair<int, FeatureMap>> cots;
            for (size_t k = 0; k < acts.size(); ++k)
                cots.emplace_back(c.net->taps()[k], std::move(lr.cotangents[k]));
            if (c.alpha > 0.0) {
                ContentLossResult cl =
                    content_loss(*targets.content, tr.activations[c.net->content_tap()],
                                 c.alpha);
                cots.emplace_back(c.net->content_tap(), std::move(cl.cotangent));
            }
            return c.net->backward_from(tr, img, cots);
        };

        const double err = max_fd_error(loss_of, x, grad_of(x), 30, 35);
        if (err >= 1e-4)
            return std::string(c.name) + " FD relative error " + format_g17(err);
    }
    return "";
}

std::string check_fixed_point() {
    const FeatureExtractor net = desk_extractor();
    const FeatureMap x = normal_field(16, 16, 3, 41, 0.5, 0.15);
    const TargetSet targets = exemplar_targets(net, x, StatKind::Gram);
    SynthesisConfig cfg;
    cfg.init_kind = InitKind::Image;
    cfg.init_image = x;
    cfg.max_iterations = 5;
    const SynthesisResult res = synthesize(net, targets, cfg, 16, 16);
    double rms = 0.0;
    for (size_t p = 0; p < x.size(); ++p) {
        const double d = res.image.values()[p] - x.values()[p];
        rms += d * d;
    }
    rms = std::sqrt(rms / x.size());
    if (res.trace[0] >= 1e-12) return "initial loss " + format_g17(res.trace[0]);
    if (rms >= 1e-6) return "RMS drift " + format_g17(rms);
    return "";
}

}  // namespace

bool run_check() {
    struct Entry {
        const char* name;
        std::string (*fn)();
    };
    const Entry checks[] = {
        {"stationary-model identities", check_identities},
        {"interpolation endpoints", check_ot_endpoints},
        {"alignment fallback at zero cross-power", check_alignment_fallback},
        {"loss gradients vs finite differences", check_loss_gradients},
        {"synthesis fixed point", check_fixed_point},
    };
    bool all_ok = true;
    for (const Entry& entry : checks) {
        const std::string detail = entry.fn();
        if (detail.empty()) {
            std::printf("ok   %s\n", entry.name);
        } else {
            std::printf("FAIL %s: %s\n", entry.name, detail.c_str());
            all_ok = false;
        }
    }
    return all_ok;
}

}  // namespace texmix
