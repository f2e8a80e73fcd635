#include "texmix/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "texmix/errors.hpp"

namespace texmix {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path.empty() ? "/: " + what : path + ": " + what);
}

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) fail(path + "/" + key, "unknown key");
}

const json* get(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) fail(path, "expected a boolean");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

uint64_t as_seed(const json& v, const std::string& path) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0))
        fail(path, "expected a nonnegative integer seed");
    return v.get<uint64_t>();
}

void parse_optimizer(const json& v, const std::string& path, SynthesisConfig& out) {
    if (!v.is_object()) fail(path, "expected an object");
    require_keys(v, path, {"method", "step", "max_iterations", "stop_criterion"});
    if (const json* m = get(v, "method")) {
        const std::string s = as_string(*m, path + "/method");
        if (s == "adam")
            out.method = OptMethod::Adam;
        else if (s == "lbfgs")
            out.method = OptMethod::Lbfgs;
        else
            fail(path + "/method", "expected \"adam\" or \"lbfgs\", got \"" + s + "\"");
    }
    if (const json* s = get(v, "step")) {
        out.step = as_number(*s, path + "/step");
        if (!(out.step > 0.0)) fail(path + "/step", "must be positive");
    }
    if (const json* mi = get(v, "max_iterations")) {
        out.max_iterations = as_int(*mi, path + "/max_iterations");
        if (out.max_iterations < 1) fail(path + "/max_iterations", "must be at least 1");
    }
    if (const json* sc = get(v, "stop_criterion")) {
        out.stop_criterion = as_number(*sc, path + "/stop_criterion");
        if (!(out.stop_criterion > 0.0)) fail(path + "/stop_criterion", "must be positive");
    }
}

void parse_init(const json& v, const std::string& path, RunConfig& out) {
    if (!v.is_object()) fail(path, "expected an object");
    require_keys(v, path, {"kind", "path"});
    if (const json* k = get(v, "kind")) {
        const std::string s = as_string(*k, path + "/kind");
        if (s == "noise")
            out.synth.init_kind = InitKind::Noise;
        else if (s == "image")
            out.synth.init_kind = InitKind::Image;
        else
            fail(path + "/kind", "expected \"noise\" or \"image\", got \"" + s + "\"");
    }
    if (const json* p = get(v, "path")) out.paths.init = as_string(*p, path + "/path");
    if (out.synth.init_kind == InitKind::Image && out.paths.init.empty())
        fail(path, "init kind \"image\" needs a path");
}

void parse_extractor(const json& v, const std::string& path, ExtractorConfig& out) {
    if (!v.is_object()) fail(path, "expected an object");
    require_keys(v, path, {"source", "path", "seed", "taps", "content_tap"});
    if (const json* s = get(v, "source")) {
        const std::string src = as_string(*s, path + "/source");
        if (src == "builtin-desk")
            out.source = ExtractorSource::BuiltinDesk;
        else if (src == "weights")
            out.source = ExtractorSource::WeightsFile;
        else if (src == "random")
            out.source = ExtractorSource::RandomInit;
        else
            fail(path + "/source",
                 "expected \"builtin-desk\", \"weights\" or \"random\", got \"" + src + "\"");
    }
    if (const json* p = get(v, "path")) out.weights_path = as_string(*p, path + "/path");
    if (const json* s = get(v, "seed")) out.seed = as_seed(*s, path + "/seed");
    if (const json* t = get(v, "taps")) {
        if (!t->is_array()) fail(path + "/taps", "expected an array of layer indices");
        std::vector<int> taps;
        for (size_t i = 0; i < t->size(); ++i)
            taps.push_back(as_int((*t)[i], path + "/taps/" + std::to_string(i)));
        out.taps = std::move(taps);
    }
    if (const json* c = get(v, "content_tap"))
        out.content_tap = as_int(*c, path + "/content_tap");
    if (out.source == ExtractorSource::WeightsFile && out.weights_path.empty())
        fail(path, "extractor source \"weights\" needs a path");
}

void parse_images(const json& v, const std::string& path, PathsConfig& out) {
    if (!v.is_object()) fail(path, "expected an object");
    require_keys(v, path, {"exemplar", "a", "b", "content", "style_a", "style_b"});
    if (const json* p = get(v, "exemplar")) out.exemplar = as_string(*p, path + "/exemplar");
    if (const json* p = get(v, "a")) out.a = as_string(*p, path + "/a");
    if (const json* p = get(v, "b")) out.b = as_string(*p, path + "/b");
    if (const json* p = get(v, "content")) out.content = as_string(*p, path + "/content");
    if (const json* p = get(v, "style_a")) out.style_a = as_string(*p, path + "/style_a");
    if (const json* p = get(v, "style_b")) out.style_b = as_string(*p, path + "/style_b");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("", "config root must be an object");
    require_keys(doc, "",
                 {"stat", "tap_weights", "optimizer", "init", "alpha", "lag_constraint",
                  "lag_pairs", "seed", "extractor", "images", "rho", "grid", "incremental",
                  "out", "out_dir"});

    RunConfig cfg;
    if (const json* s = get(doc, "stat")) {
        const std::string v = as_string(*s, "/stat");
        if (v == "gram")
            cfg.synth.stat_kind = StatKind::Gram;
        else if (v == "correlation")
            cfg.synth.stat_kind = StatKind::Correlation;
        else
            fail("/stat", "expected \"gram\" or \"correlation\", got \"" + v + "\"");
    }
    if (const json* w = get(doc, "tap_weights")) {
        if (!w->is_array()) fail("/tap_weights", "expected an array of numbers");
        std::vector<double> weights;
        for (size_t i = 0; i < w->size(); ++i) {
            const std::string p = "/tap_weights/" + std::to_string(i);
            const double value = as_number((*w)[i], p);
            if (value < 0.0) fail(p, "must be nonnegative");
            weights.push_back(value);
        }
        cfg.synth.tap_weights = std::move(weights);
    }
    if (const json* o = get(doc, "optimizer")) parse_optimizer(*o, "/optimizer", cfg.synth);
    if (const json* i = get(doc, "init")) parse_init(*i, "/init", cfg);
    if (const json* a = get(doc, "alpha")) {
        cfg.synth.alpha = as_number(*a, "/alpha");
        if (cfg.synth.alpha < 0.0) fail("/alpha", "must be nonnegative");
    }
    if (const json* l = get(doc, "lag_constraint"))
        cfg.synth.lag_constraint = as_bool(*l, "/lag_constraint");
    if (const json* lp = get(doc, "lag_pairs")) {
        if (!lp->is_array()) fail("/lag_pairs", "expected an array of [source, target] pairs");
        std::vector<std::pair<int, int>> pairs;
        for (size_t i = 0; i < lp->size(); ++i) {
            const std::string p = "/lag_pairs/" + std::to_string(i);
            const json& pair = (*lp)[i];
            if (!pair.is_array() || pair.size() != 2)
                fail(p, "expected a [source, target] pair");
            pairs.emplace_back(as_int(pair[0], p + "/0"), as_int(pair[1], p + "/1"));
        }
        cfg.synth.lag_pairs = std::move(pairs);
    }
    if (const json* s = get(doc, "seed")) cfg.synth.seed = as_seed(*s, "/seed");
    if (const json* e = get(doc, "extractor")) parse_extractor(*e, "/extractor", cfg.extractor);
    if (const json* im = get(doc, "images")) parse_images(*im, "/images", cfg.paths);
    if (const json* r = get(doc, "rho")) {
        const double v = as_number(*r, "/rho");
        if (!(v >= 0.0 && v <= 1.0)) fail("/rho", "must lie in [0, 1]");
        cfg.rho = v;
    }
    if (const json* g = get(doc, "grid")) {
        const int v = as_int(*g, "/grid");
        if (v < 2) fail("/grid", "must be at least 2");
        cfg.grid = v;
    }
    if (const json* i = get(doc, "incremental")) cfg.incremental = as_bool(*i, "/incremental");
    if (const json* o = get(doc, "out")) cfg.paths.out = as_string(*o, "/out");
    if (const json* o = get(doc, "out_dir")) cfg.paths.out_dir = as_string(*o, "/out_dir");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config " + path);
    std::string text(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>{});
    return parse_config(text);
}

std::string resolved_config(const RunConfig& cfg, const std::string& command,
                            const std::string& extra_json) {
    json doc;
    doc["command"] = command;
    doc["stat"] = cfg.synth.stat_kind == StatKind::Gram ? "gram" : "correlation";
    doc["tap_weights"] = cfg.synth.tap_weights;
    doc["optimizer"] = {
        {"method", cfg.synth.method == OptMethod::Adam ? "adam" : "lbfgs"},
        {"step", cfg.synth.step},
        {"max_iterations", cfg.synth.max_iterations},
        {"stop_criterion", cfg.synth.stop_criterion},
    };
    doc["init"] = {{"kind", cfg.synth.init_kind == InitKind::Noise ? "noise" : "image"}};
    if (!cfg.paths.init.empty()) doc["init"]["path"] = cfg.paths.init;
    doc["alpha"] = cfg.synth.alpha;
    doc["lag_constraint"] = cfg.synth.lag_constraint;
    json pairs = json::array();
    for (const auto& [s, t] : cfg.synth.lag_pairs) pairs.push_back({s, t});
    doc["lag_pairs"] = pairs;
    doc["seed"] = cfg.synth.seed;

    json extractor;
    switch (cfg.extractor.source) {
        case ExtractorSource::BuiltinDesk:
            extractor["source"] = "builtin-desk";
            extractor["seed"] = kDeskSeed;
            break;
        case ExtractorSource::WeightsFile:
            extractor["source"] = "weights";
            extractor["path"] = cfg.extractor.weights_path;
            break;
        case ExtractorSource::RandomInit:
            extractor["source"] = "random";
            extractor["seed"] = cfg.extractor.seed;
            break;
    }
    if (cfg.extractor.taps) extractor["taps"] = *cfg.extractor.taps;
    if (cfg.extractor.content_tap) extractor["content_tap"] = *cfg.extractor.content_tap;
    doc["extractor"] = extractor;

    json images;
    if (!cfg.paths.exemplar.empty()) images["exemplar"] = cfg.paths.exemplar;
    if (!cfg.paths.a.empty()) images["a"] = cfg.paths.a;
    if (!cfg.paths.b.empty()) images["b"] = cfg.paths.b;
    if (!cfg.paths.content.empty()) images["content"] = cfg.paths.content;
    if (!cfg.paths.style_a.empty()) images["style_a"] = cfg.paths.style_a;
    if (!cfg.paths.style_b.empty()) images["style_b"] = cfg.paths.style_b;
    doc["images"] = images;

    if (cfg.rho) doc["rho"] = *cfg.rho;
    if (cfg.grid) doc["grid"] = *cfg.grid;
    doc["incremental"] = cfg.incremental;
    if (!cfg.paths.out.empty()) doc["out"] = cfg.paths.out;
    if (!cfg.paths.out_dir.empty()) doc["out_dir"] = cfg.paths.out_dir;

    if (!extra_json.empty()) {
        const json extra = json::parse(extra_json);
        for (const auto& [key, value] : extra.items()) doc[key] = value;
    }
    return doc.dump(2) + "\n";
}

FeatureExtractor build_extractor(const ExtractorConfig& cfg) {
    FeatureExtractor net;
    switch (cfg.source) {
        case ExtractorSource::BuiltinDesk:
            net = desk_extractor();
            break;
        case ExtractorSource::WeightsFile:
            net = load_weights(cfg.weights_path);
            break;
        case ExtractorSource::RandomInit:
            net = random_init(desk_architecture(), cfg.seed);
            break;
    }
    if (cfg.taps || cfg.content_tap) {
        const std::vector<int> taps = cfg.taps ? *cfg.taps : net.taps();
        const int content = cfg.content_tap ? *cfg.content_tap : net.content_tap();
        net = net.with_taps(taps, content);
    }
    return net;
}

}  // namespace texmix
