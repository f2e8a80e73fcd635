#pragma once

#include <functional>
#include <vector>

namespace texmix {

// Evaluates the objective at x and fills grad (same length as x).
using Objective = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

// Shared stopping policy: run at most max_iterations; additionally stop once
// |trace[t - window] - trace[t]| / max(trace[t], 1e-12) < stop_criterion.
// The returned trace has one loss per completed iteration, and the final x
// is exactly the point whose loss is trace.back().
struct StopRule {
    int max_iterations = 10000;
    double stop_criterion = 0.001;
    int window = 10;
};

struct AdamParams {
    double step = 0.02;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct LbfgsParams {
    int history = 10;
    double c1 = 1e-4;  // Armijo (sufficient decrease)
    double c2 = 0.9;   // strong Wolfe curvature
    int max_line_search = 25;
};

// Both minimizers mutate x in place and return the per-iteration loss trace.
// A non-finite loss raises DivergenceError carrying the iteration index.
std::vector<double> minimize_adam(std::vector<double>& x, const Objective& f,
                                  const AdamParams& params, const StopRule& stop);

std::vector<double> minimize_lbfgs(std::vector<double>& x, const Objective& f,
                                   const LbfgsParams& params, const StopRule& stop);

}  // namespace texmix
