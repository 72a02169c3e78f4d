#include "vinsp/tlcc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "vinsp/error.hpp"

namespace vinsp {

namespace {

enum class PearsonStatus { Ok, TooFew, ZeroVariance };

// Symmetric in its arguments bit for bit: swapping s and t yields the same r.
PearsonStatus pearson_impl(std::span<const std::optional<double>> s, std::span<const std::optional<double>> t,
                           double& r, std::size_t& used) {
    const std::size_t n = std::min(s.size(), t.size());
    double ms = 0.0, mt = 0.0;
    used = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!s[i] || !t[i]) continue;
        ms += *s[i];
        mt += *t[i];
        ++used;
    }
    if (used < 3) return PearsonStatus::TooFew;
    ms /= static_cast<double>(used);
    mt /= static_cast<double>(used);
    double sst = 0.0, sss = 0.0, stt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!s[i] || !t[i]) continue;
        const double ds = *s[i] - ms, dt = *t[i] - mt;
        sst += ds * dt;
        sss += ds * ds;
        stt += dt * dt;
    }
    if (sss == 0.0 || stt == 0.0) return PearsonStatus::ZeroVariance;
    r = std::clamp(sst / std::sqrt(sss * stt), -1.0, 1.0);
    return PearsonStatus::Ok;
}

}  // namespace

double pearson(std::span<const std::optional<double>> s, std::span<const std::optional<double>> t) {
    if (s.size() != t.size()) throw data_error(fmt::format("pearson: length mismatch ({} vs {})", s.size(), t.size()));
    double r = 0.0;
    std::size_t used = 0;
    switch (pearson_impl(s, t, r, used)) {
        case PearsonStatus::Ok: return r;
        case PearsonStatus::TooFew:
            throw data_error(fmt::format("pearson: insufficient overlap ({} complete pairs, need 3)", used));
        case PearsonStatus::ZeroVariance: throw data_error("pearson: zero variance");
    }
    return r;
}

double pearson(std::span<const double> s, std::span<const double> t) {
    std::vector<std::optional<double>> a(s.begin(), s.end()), b(t.begin(), t.end());
    return pearson(a, b);
}

std::optional<double> TlccResult::at(int lag) const {
    if (lag < -max_lag || lag > max_lag) return std::nullopt;
    return correlations[static_cast<std::size_t>(lag + max_lag)];
}

TlccResult tlcc(std::span<const std::optional<double>> s, std::span<const std::optional<double>> s2, int max_lag) {
    if (max_lag < 1) throw config_error(fmt::format("tlcc: max lag must be >= 1, got {}", max_lag));
    if (s.size() != s2.size())
        throw data_error(fmt::format("tlcc: series lengths differ ({} vs {})", s.size(), s2.size()));
    const auto n = static_cast<std::ptrdiff_t>(s.size());
    TlccResult out;
    out.max_lag = max_lag;
    for (int lag = -max_lag; lag <= max_lag; ++lag) {
        // Pairs (s[t + lag], s2[t]) for every t with both indices in range.
        const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -lag);
        const std::ptrdiff_t t1 = std::min<std::ptrdiff_t>(n, n - lag);
        std::optional<double> r;
        std::size_t used = 0;
        if (t1 > t0) {
            const auto len = static_cast<std::size_t>(t1 - t0);
            double value = 0.0;
            if (pearson_impl(s.subspan(static_cast<std::size_t>(t0 + lag), len),
                             s2.subspan(static_cast<std::size_t>(t0), len), value, used) == PearsonStatus::Ok)
                r = value;
        }
        out.lags.push_back(lag);
        out.correlations.push_back(r);
        out.n_overlap.push_back(used);
        if (r && (!out.peak_r || std::abs(*r) > std::abs(*out.peak_r))) {
            out.peak_r = r;
            out.peak_lag = lag;
        }
    }
    return out;
}

TlccResult tlcc(const TimeSeries& s, const TimeSeries& s2, int max_lag) {
    if (s.sampling != s2.sampling) throw data_error("tlcc: series use different samplings");
    // Align on the common bucket range.
    const Timestamp start = std::max(s.origin, s2.origin);
    auto offset = [&](const TimeSeries& x) {
        std::size_t k = 0;
        for (Timestamp t = x.origin; t < start; t = bucket_next(t, x.sampling)) ++k;
        return k;
    };
    const std::size_t a0 = offset(s), b0 = offset(s2);
    if (a0 >= s.values.size() || b0 >= s2.values.size()) throw data_error("tlcc: series do not overlap in time");
    const std::size_t len = std::min(s.values.size() - a0, s2.values.size() - b0);
    return tlcc(std::span(s.values).subspan(a0, len), std::span(s2.values).subspan(b0, len), max_lag);
}

void write_correlogram_csv(const TlccResult& r, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error(fmt::format("cannot write '{}'", path.string()));
    out << "lag,r,n_overlap\n";
    for (std::size_t i = 0; i < r.lags.size(); ++i) {
        out << r.lags[i] << ',';
        if (r.correlations[i]) out << fmt::format("{:.12f}", *r.correlations[i]);
        out << ',' << r.n_overlap[i] << '\n';
    }
    if (!out) throw io_error(fmt::format("write failed for '{}'", path.string()));
}

nlohmann::json to_json(const TlccResult& r) {
    nlohmann::json j;
    j["max_lag"] = r.max_lag;
    j["peak_lag"] = r.peak_lag ? nlohmann::json(*r.peak_lag) : nlohmann::json(nullptr);
    j["peak_r"] = r.peak_r ? nlohmann::json(*r.peak_r) : nlohmann::json(nullptr);
    std::vector<int> missing;
    for (std::size_t i = 0; i < r.lags.size(); ++i) {
        if (!r.correlations[i]) missing.push_back(r.lags[i]);
    }
    j["undefined_lags"] = missing;
    return j;
}

}  // namespace vinsp
