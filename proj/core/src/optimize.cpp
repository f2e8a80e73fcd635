#include "texmix/optimize.hpp"

#include <cmath>
#include <cstddef>
#include <deque>

#include "texmix/errors.hpp"

namespace texmix {

namespace {

// Records the loss, guards against divergence, and decides whether to stop.
// Returns true when the window criterion is met or the iteration budget ends.
bool record_and_check(std::vector<double>& trace, double loss, const StopRule& stop) {
    const int t = static_cast<int>(trace.size());
    if (!std::isfinite(loss)) throw DivergenceError(t);
    trace.push_back(loss);
    if (t + 1 >= stop.max_iterations) return true;
    if (t >= stop.window) {
        const double prev = trace[t - stop.window];
        const double rel = std::abs(prev - loss) / std::max(loss, 1e-12);
        if (rel < stop.stop_criterion) return true;
    }
    return false;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

std::vector<double> minimize_adam(std::vector<double>& x, const Objective& f,
                                  const AdamParams& params, const StopRule& stop) {
    const size_t n = x.size();
    std::vector<double> grad(n), m(n, 0.0), v(n, 0.0), trace;
    trace.reserve(std::min(stop.max_iterations, 4096));

    for (int t = 0; t < stop.max_iterations; ++t) {
        const double loss = f(x, grad);
        if (record_and_check(trace, loss, stop)) break;

        const double bc1 = 1.0 - std::pow(params.beta1, t + 1);
        const double bc2 = 1.0 - std::pow(params.beta2, t + 1);
        for (size_t i = 0; i < n; ++i) {
            m[i] = params.beta1 * m[i] + (1.0 - params.beta1) * grad[i];
            v[i] = params.beta2 * v[i] + (1.0 - params.beta2) * grad[i] * grad[i];
            x[i] -= params.step * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + params.epsilon);
        }
    }
    return trace;
}

namespace {

struct LinePoint {
    double alpha;
    double phi;   // f(x + alpha d)
    double dphi;  // grad(x + alpha d) . d
};

// Strong-Wolfe line search (bracket + zoom). Evaluates f along x + alpha d,
// leaving xt/gt at the accepted point. Returns the accepted trial, or
// alpha = 0 when no acceptable step was found.
class LineSearch {
public:
    LineSearch(const Objective& f, const std::vector<double>& x, const std::vector<double>& d,
               std::vector<double>& xt, std::vector<double>& gt)
        : f_(f), x_(x), d_(d), xt_(xt), gt_(gt) {}

    LinePoint eval(double alpha) {
        for (size_t i = 0; i < x_.size(); ++i) xt_[i] = x_[i] + alpha * d_[i];
        const double phi = f_(xt_, gt_);
        return {alpha, phi, dot(gt_, d_)};
    }

    LinePoint search(double phi0, double dphi0, double alpha0, const LbfgsParams& p) {
        LinePoint lo{0.0, phi0, dphi0};
        LinePoint cur = eval(alpha0);
        int evals = 1;
        while (evals < p.max_line_search) {
            if (cur.phi > phi0 + p.c1 * cur.alpha * dphi0 || (evals > 1 && cur.phi >= lo.phi))
                return zoom(lo, cur, phi0, dphi0, p, evals);
            if (std::abs(cur.dphi) <= -p.c2 * dphi0) return cur;
            if (cur.dphi >= 0.0) return zoom(cur, lo, phi0, dphi0, p, evals);
            lo = cur;
            cur = eval(cur.alpha * 2.0);
            ++evals;
        }
        return cur.phi < phi0 ? cur : LinePoint{0.0, phi0, dphi0};
    }

private:
    LinePoint zoom(LinePoint lo, LinePoint hi, double phi0, double dphi0, const LbfgsParams& p,
                   int evals) {
        while (evals < p.max_line_search) {
            const double alpha = 0.5 * (lo.alpha + hi.alpha);
            LinePoint cur = eval(alpha);
            ++evals;
            if (cur.phi > phi0 + p.c1 * alpha * dphi0 || cur.phi >= lo.phi) {
                hi = cur;
            } else {
                if (std::abs(cur.dphi) <= -p.c2 * dphi0) return cur;
                if (cur.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
                lo = cur;
            }
            if (std::abs(hi.alpha - lo.alpha) < 1e-16) break;
        }
        // Interval collapsed without meeting the curvature condition: take the
        // best decrease seen so it stays a descent method.
        return lo.phi < phi0 ? (eval(lo.alpha), lo) : LinePoint{0.0, phi0, dphi0};
    }

    const Objective& f_;
    const std::vector<double>& x_;
    const std::vector<double>& d_;
    std::vector<double>& xt_;
    std::vector<double>& gt_;
};

}  // namespace

std::vector<double> minimize_lbfgs(std::vector<double>& x, const Objective& f,
                                   const LbfgsParams& params, const StopRule& stop) {
    const size_t n = x.size();
    std::vector<double> grad(n), trace;
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> xt(n), gt(n), d(n), alpha_buf;

    double loss = f(x, grad);
    for (int t = 0; t < stop.max_iterations; ++t) {
        if (record_and_check(trace, loss, stop)) break;

        // Two-loop recursion: d = -H grad.
        d = grad;
        const size_t h = s_hist.size();
        alpha_buf.assign(h, 0.0);
        for (size_t k = h; k-- > 0;) {
            alpha_buf[k] = rho_hist[k] * dot(s_hist[k], d);
            for (size_t i = 0; i < n; ++i) d[i] -= alpha_buf[k] * y_hist[k][i];
        }
        if (h > 0) {
            const double gamma = dot(s_hist.back(), y_hist.back()) /
                                 std::max(dot(y_hist.back(), y_hist.back()), 1e-300);
            for (double& v : d) v *= gamma;
        }
        for (size_t k = 0; k < h; ++k) {
            const double beta = rho_hist[k] * dot(y_hist[k], d);
            for (size_t i = 0; i < n; ++i) d[i] += (alpha_buf[k] - beta) * s_hist[k][i];
        }
        for (double& v : d) v = -v;

        double dphi0 = dot(grad, d);
        if (dphi0 >= 0.0) {  // not a descent direction: reset to steepest descent
            s_hist.clear();
            y_hist.clear();
            rho_hist.clear();
            for (size_t i = 0; i < n; ++i) d[i] = -grad[i];
            dphi0 = dot(grad, d);
            if (dphi0 == 0.0) break;  // exact stationary point
        }

        double alpha0 = 1.0;
        if (t == 0) {
            double gmax = 0.0;
            for (double g : grad) gmax = std::max(gmax, std::abs(g));
            alpha0 = 1.0 / std::max(1.0, gmax);
        }

        LineSearch ls(f, x, d, xt, gt);
        const LinePoint accepted = ls.search(loss, dphi0, alpha0, params);
        if (accepted.alpha == 0.0) break;  // no progress possible along d

        std::vector<double> s(n), y(n);
        for (size_t i = 0; i < n; ++i) {
            s[i] = xt[i] - x[i];
            y[i] = gt[i] - grad[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-300) {  // keep the inverse-Hessian estimate positive definite
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > params.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        x = xt;
        grad = gt;
        loss = accepted.phi;
    }
    return trace;
}

}  // namespace texmix
