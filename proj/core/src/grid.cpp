#include "texmix/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace texmix {

std::string FeatureMap::shape_string(long r, long c, int k) {
    return std::to_string(r) + "x" + std::to_string(c) + "x" + std::to_string(k);
}

void FeatureMap::check_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) throw InvalidInput("FeatureMap contains non-finite values");
}

namespace {

// FFTW planning is not thread-safe; executing a cached plan on fresh buffers is.
// Plans are created out-of-place with FFTW_ESTIMATE | FFTW_UNALIGNED so results
// are deterministic and any caller buffer is acceptable.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    void execute(long rows, long cols, int sign,
                 const std::complex<double>* in, std::complex<double>* out) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto key = std::make_tuple(rows, cols, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<std::complex<double>> a(static_cast<size_t>(rows) * cols);
                std::vector<std::complex<double>> b(a.size());
                plan = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols),
                                        reinterpret_cast<fftw_complex*>(a.data()),
                                        reinterpret_cast<fftw_complex*>(b.data()),
                                        sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
                it = plans_.emplace(key, plan).first;
            }
            plan = it->second;
        }
        fftw_execute_dft(plan,
                         reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    std::mutex mu_;
    std::map<std::tuple<long, long, int>, fftw_plan> plans_;
};

}  // namespace

SpectrumGrid fft_forward(const FeatureMap& f) {
    if (f.rows() < 1 || f.cols() < 1 || f.channels() < 1)
        throw InvalidInput("fft_forward: empty grid");
    f.check_finite();

    SpectrumGrid out(f.rows(), f.cols(), f.channels());
    std::vector<std::complex<double>> in(static_cast<size_t>(f.pixel_count()));
    for (int ch = 0; ch < f.channels(); ++ch) {
        const double* src = f.plane(ch);
        for (long i = 0; i < f.pixel_count(); ++i) in[i] = {src[i], 0.0};
        PlanCache::instance().execute(f.rows(), f.cols(), FFTW_FORWARD, in.data(), out.plane(ch));
    }
    return out;
}

FeatureMap fft_inverse(const SpectrumGrid& s, bool require_real, double* max_imag_out) {
    if (s.rows() < 1 || s.cols() < 1 || s.channels() < 1)
        throw InvalidInput("fft_inverse: empty grid");

    FeatureMap out(s.rows(), s.cols(), s.channels());
    std::vector<std::complex<double>> buf(static_cast<size_t>(s.pixel_count()));
    const double scale = 1.0 / static_cast<double>(s.pixel_count());
    double max_imag = 0.0;
    for (int ch = 0; ch < s.channels(); ++ch) {
        PlanCache::instance().execute(s.rows(), s.cols(), FFTW_BACKWARD, s.plane(ch), buf.data());
        double* dst = out.plane(ch);
        for (long i = 0; i < s.pixel_count(); ++i) {
            dst[i] = buf[i].real() * scale;
            max_imag = std::max(max_imag, std::abs(buf[i].imag()) * scale);
        }
    }
    if (max_imag_out) *max_imag_out = max_imag;
    if (require_real && !(max_imag < kRealResidueTolerance))
        throw NonRealResult(max_imag, kRealResidueTolerance);
    return out;
}

FeatureMap circular_shift(const FeatureMap& f, Offset offset) {
    FeatureMap out(f.rows(), f.cols(), f.channels());
    const long dr = FeatureMap::wrap(offset.row, f.rows());
    const long dc = FeatureMap::wrap(offset.col, f.cols());
    for (int ch = 0; ch < f.channels(); ++ch)
        for (long r = 0; r < f.rows(); ++r) {
            const long sr = FeatureMap::wrap(r - dr, f.rows());
            for (long c = 0; c < f.cols(); ++c)
                out.at(r, c, ch) = f.at(sr, FeatureMap::wrap(c - dc, f.cols()), ch);
        }
    return out;
}

}  // namespace texmix
