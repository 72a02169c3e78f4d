#include "vinsp/power_law.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>

#include "vinsp/error.hpp"
#include "vinsp/parallel.hpp"

namespace vinsp {

double hurwitz_zeta(double s, double q) {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
    gsl_sf_result r;
    const int status = gsl_sf_hzeta_e(s, q, &r);
    if (status == GSL_EUNDRFLW) return 0.0;
    if (status != GSL_SUCCESS) throw data_error(fmt::format("hurwitz_zeta({}, {}): {}", s, q, gsl_strerror(status)));
    return r.val;
}

namespace {

constexpr double kAlphaLo = 1.0 + 1e-6;
constexpr double kAlphaHi = 20.0;
constexpr std::uint64_t kDirectSumGap = 64;

double mle_alpha(double n_tail, double sum_log, std::uint64_t x_min) {
    const double q = static_cast<double>(x_min);
    auto neg_ll = [&](double a) { return n_tail * std::log(hurwitz_zeta(a, q)) + a * sum_log; };
    return boost::math::tools::brent_find_minima(neg_ll, kAlphaLo, kAlphaHi, 30).first;
}

// KS distance between the sorted tail and the fitted discrete power law,
// taken over every integer >= x_min (checked at data values and just below
// each gap, where the step functions differ most).
double ks_distance(std::span<const std::uint64_t> tail, double alpha, std::uint64_t x_min) {
    const double z0 = hurwitz_zeta(alpha, static_cast<double>(x_min));
    const double n = static_cast<double>(tail.size());
    std::uint64_t cur = x_min;
    double z_cur = z0;  // zeta(alpha, cur): model mass at >= cur
    auto advance_to = [&](std::uint64_t target) {
        if (target - cur > kDirectSumGap) {
            z_cur = hurwitz_zeta(alpha, static_cast<double>(target));
        } else {
            for (; cur < target; ++cur) z_cur -= std::pow(static_cast<double>(cur), -alpha);
        }
        cur = target;
    };
    double d = 0.0;
    std::size_t i = 0;
    while (i < tail.size()) {
        const std::uint64_t v = tail[i];
        const double below = static_cast<double>(i) / n;
        advance_to(v);
        if (v > x_min) d = std::max(d, std::abs(below - (1.0 - z_cur / z0)));  // at v - 1
        std::size_t j = i;
        while (j < tail.size() && tail[j] == v) ++j;
        advance_to(v + 1);
        d = std::max(d, std::abs(static_cast<double>(j) / n - (1.0 - z_cur / z0)));
        i = j;
    }
    return d;
}

struct ScanResult {
    std::vector<ScanPoint> scan;
    std::size_t best = 0;
};

// `sorted` holds strictly positive values in ascending order.
ScanResult scan_cutoffs(std::span<const std::uint64_t> sorted, std::size_t min_tail) {
    const std::size_t n = sorted.size();
    std::vector<double> suffix_log(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) suffix_log[i] = suffix_log[i + 1] + std::log(static_cast<double>(sorted[i]));
    ScanResult r;
    const std::uint64_t largest = sorted.back();
    for (std::size_t s = 0; s < n;) {
        const std::uint64_t x_min = sorted[s];
        const std::size_t n_tail = n - s;
        if (n_tail < min_tail || x_min == largest) break;
        const auto tail = sorted.subspan(s);
        const double alpha = mle_alpha(static_cast<double>(n_tail), suffix_log[s], x_min);
        r.scan.push_back({x_min, alpha, ks_distance(tail, alpha, x_min), n_tail});
        while (s < n && sorted[s] == x_min) ++s;
    }
    if (r.scan.empty()) throw data_error("power-law fit: insufficient tail data (need >= 2 distinct values in a tail of min size)");
    for (std::size_t k = 1; k < r.scan.size(); ++k) {
        if (r.scan[k].ks < r.scan[r.best].ks) r.best = k;
    }
    return r;
}

}  // namespace

double discrete_alpha_mle(std::span<const std::uint64_t> tail, std::uint64_t x_min) {
    if (tail.empty()) throw data_error("discrete_alpha_mle: empty tail");
    double sum_log = 0.0;
    for (const auto v : tail) {
        if (v < x_min) throw data_error("discrete_alpha_mle: value below x_min");
        sum_log += std::log(static_cast<double>(v));
    }
    return mle_alpha(static_cast<double>(tail.size()), sum_log, x_min);
}

DiscretePowerLawSampler::DiscretePowerLawSampler(double alpha, std::uint64_t x_min) : alpha_(alpha), x_min_(x_min) {
    if (!(alpha > 1.0) || x_min == 0) throw data_error("power-law sampler requires alpha > 1 and x_min >= 1");
    const double z0 = hurwitz_zeta(alpha, static_cast<double>(x_min));
    constexpr std::size_t kMaxTable = std::size_t{1} << 22;
    double acc = 0.0;
    for (std::size_t i = 0; i < kMaxTable; ++i) {
        acc += std::pow(static_cast<double>(x_min + i), -alpha) / z0;
        cdf_.push_back(acc);
        if (1.0 - acc < 1e-10) break;
    }
}

std::uint64_t DiscretePowerLawSampler::operator()(std::mt19937_64& rng) const {
    const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), r);
    if (it != cdf_.end()) return x_min_ + static_cast<std::uint64_t>(it - cdf_.begin());
    // Continuous approximation of the remaining tail mass.
    const double last = static_cast<double>(x_min_ + cdf_.size() - 1);
    const double surv = std::max(1.0 - cdf_.back(), std::numeric_limits<double>::min());
    const double u = std::clamp((1.0 - r) / surv, std::numeric_limits<double>::min(), 1.0);
    const double y = (last + 0.5) * std::pow(u, -1.0 / (alpha_ - 1.0)) - 0.5;
    return std::max<std::uint64_t>(static_cast<std::uint64_t>(last) + 1, static_cast<std::uint64_t>(std::llround(y)));
}

PowerLawFit fit_power_law(std::span<const std::uint64_t> values, const PowerLawOptions& options) {
    std::vector<std::uint64_t> data;
    data.reserve(values.size());
    for (const auto v : values) {
        if (v > 0) data.push_back(v);
    }
    if (data.size() < options.min_observations) {
        throw data_error(fmt::format("power-law fit: {} positive observations, need at least {}", data.size(),
                                     options.min_observations));
    }
    std::sort(data.begin(), data.end());
    if (data.front() == data.back()) throw data_error("power-law fit: all observations are equal (degenerate tail)");

    const std::size_t min_tail = std::max<std::size_t>(options.min_tail, 2);
    ScanResult scan = scan_cutoffs(data, min_tail);
    const ScanPoint best = scan.scan[scan.best];

    PowerLawFit fit;
    fit.alpha = best.alpha;
    fit.x_min = best.x_min;
    fit.ks_statistic = best.ks;
    fit.n_tail = best.n_tail;
    fit.bootstraps = options.bootstraps;
    fit.scan = std::move(scan.scan);
    if (options.bootstraps == 0) return fit;

    // Semi-parametric bootstrap: tail draws from the fitted law, body draws
    // resampled from the observed values below x_min.
    const std::vector<std::uint64_t> body(data.begin(), data.end() - static_cast<std::ptrdiff_t>(fit.n_tail));
    const DiscretePowerLawSampler sampler(fit.alpha, fit.x_min);
    const double tail_share = static_cast<double>(fit.n_tail) / static_cast<double>(data.size());
    std::vector<double> boot_ks(options.bootstraps);
    parallel_for(options.bootstraps, options.workers, [&](unsigned, std::size_t b) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(b), 0x9e3779b9u};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        std::vector<std::uint64_t> sample(data.size());
        for (auto& x : sample) {
            if (body.empty() || coin(rng) < tail_share) {
                x = sampler(rng);
            } else {
                x = body[std::uniform_int_distribution<std::size_t>(0, body.size() - 1)(rng)];
            }
        }
        std::sort(sample.begin(), sample.end());
        try {
            const ScanResult r = scan_cutoffs(sample, min_tail);
            boot_ks[b] = r.scan[r.best].ks;
        } catch (const Error&) {
            // A resample too degenerate to fit counts as a worse fit.
            boot_ks[b] = std::numeric_limits<double>::infinity();
        }
    });
    const auto worse = std::count_if(boot_ks.begin(), boot_ks.end(), [&](double d) { return d >= fit.ks_statistic; });
    fit.p_value = static_cast<double>(worse) / static_cast<double>(options.bootstraps);
    return fit;
}

nlohmann::json to_json(const PowerLawFit& fit) {
    return {
        {"alpha", fit.alpha},         {"x_min", fit.x_min},           {"ks_statistic", fit.ks_statistic},
        {"p_value", fit.p_value},     {"n_tail", fit.n_tail},         {"bootstraps", fit.bootstraps},
        {"scanned_x_min", fit.scan.size()},
    };
}

void write_scan_csv(const PowerLawFit& fit, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error(fmt::format("cannot write '{}'", path.string()));
    out << "x_min,alpha,ks,n_tail\n";
    for (const auto& p : fit.scan) out << fmt::format("{},{:.10g},{:.10g},{}\n", p.x_min, p.alpha, p.ks, p.n_tail);
    if (!out) throw io_error(fmt::format("write failed for '{}'", path.string()));
}

}  // namespace vinsp
