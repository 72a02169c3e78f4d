// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include <fmt/format.h>

#include "cli_support.hpp"
#include "support.hpp"
#include "vinsp/collection_graph.hpp"
#include "vinsp/louvain.hpp"
#include "vinsp/market.hpp"
#include "vinsp/nft_graph.hpp"
#include "vinsp/oracle.hpp"
#include "vinsp/power_law.hpp"
#include "vinsp/shapley.hpp"
#include "vinsp/structural.hpp"
#include "vinsp/tlcc.hpp"

using namespace vinsp;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Collects failed checks with a short description each.
struct Checks {
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    void near(double got, double want, double tol, const std::string& what) {
        expect(std::abs(got - want) <= tol, fmt::format("{}: {} vs {}", what, got, want));
    }
    std::string summary(std::size_t max = 3) const {
        std::string s;
        for (std::size_t i = 0; i < failures.size() && i < max; ++i) s += (i ? "; " : "") + failures[i];
        if (failures.size() > max) s += fmt::format("; +{} more", failures.size() - max);
        return s;
    }
};

Outcome graph_equivalence() {
    const auto t0 = Clock::now();
    std::size_t mismatches = 0, edges = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        std::mt19937_64 rng(seed * 7919);
        SyntheticSpec spec;
        spec.assets = 20 + rng() % 181;
        spec.collections = 2 + rng() % 10;
        spec.dim = 16;
        spec.distinct_times = seed % 2 ? 0 : 10 + rng() % 40;
        spec.unembedded = 0.05;
        spec.noise = 0.4 + 0.1 * double(rng() % 8);
        const auto s = make_synthetic(seed, spec);
        const double thr = 0.3 + 0.1 * double(seed % 5);
        const TimeWindow w(spec.t_lo + spec.t_span / 20, spec.t_lo + spec.t_span - spec.t_span / 20);
        const auto g = build_nft_graph(s.catalog, s.store, w, {.threshold = thr, .workers = 2});
        const auto got = label_edges(g.graph);
        const auto want = naive_edges(s.catalog, s.store, w.t_start, w.t_end, thr);
        edges += want.size();
        if (got != want) ++mismatches;
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 5.0,
            fmt::format("50 catalogs, {} edges, {} mismatching catalogs, {:.2f} s", edges, mismatches, secs)};
}

Outcome acyclicity_at_scale() {
    SyntheticSpec spec;
    spec.assets = 5000;
    spec.collections = 50;
    spec.dim = 64;
    spec.noise = 1.2;
    spec.styles = 5;
    spec.tx_per_asset = 1;
    const auto s = make_synthetic(2024, spec);
    const auto t0 = Clock::now();
    const auto g = build_nft_graph(s.catalog, s.store, s.catalog.span(), {.threshold = 0.5, .workers = 4});
    const double secs = seconds_since(t0);
    const auto order = topological_order(g.graph);
    const auto scc = strongly_connected_components(g.graph);
    const bool ok = secs < 60.0 && order.size() == g.graph.node_count() && scc == g.graph.node_count() &&
                    g.graph.node_count() == 5000;
    return {ok, fmt::format("n={}, edges={}, build {:.2f} s, topological order {}, SCCs {}", g.graph.node_count(),
                            g.graph.edge_count(), secs, order.size() == g.graph.node_count() ? "ok" : "failed", scc)};
}

Outcome linkage_containment() {
    std::size_t violations = 0, e_min = 0, e_avg = 0, e_max = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed + 500);
        SyntheticSpec spec;
        spec.assets = 60 + rng() % 100;
        spec.collections = 3 + rng() % 8;
        spec.dim = 16;
        spec.distinct_times = seed % 3 ? 0 : 30;
        spec.noise = 0.5 + 0.1 * double(rng() % 6);
        const auto s = make_synthetic(seed, spec);
        const double thr = 0.2 + 0.1 * double(seed % 6);
        const auto gs = build_collection_graphs(s.catalog, s.store, s.catalog.span(), {.threshold = thr, .workers = 2});
        const auto mn = label_edges(gs[0].graph), av = label_edges(gs[1].graph), mx = label_edges(gs[2].graph);
        e_min += mn.size();
        e_avg += av.size();
        e_max += mx.size();
        for (const auto& e : mn) violations += !av.count(e);
        for (const auto& e : av) violations += !mx.count(e);
    }
    return {violations == 0, fmt::format("100 instances, edges min/avg/max = {}/{}/{}, {} violations", e_min, e_avg,
                                         e_max, violations)};
}

Outcome penalty_formula() {
    Checks c;
    for (std::int64_t k = 1; k <= 10'000; ++k) {
        c.expect(penalty_factor(0, k) == 0.5, fmt::format("penalty(0,{})", k));
        c.near(penalty_factor(k, k), 0.7310586, 1e-6, fmt::format("penalty({0},{0})", k));
        c.expect(penalty_factor(k, 0) == 1.0, fmt::format("penalty({},0)", k));
    }
    return {c.failures.empty(), c.failures.empty() ? "k = 1..10000" : c.summary()};
}

Outcome power_law_recovery() {
    std::size_t alpha_ok = 0, p_ok = 0, slow = 0;
    double worst = 0.0;
    std::string alphas;
    for (std::uint64_t trial = 1; trial <= 20; ++trial) {
        DiscretePowerLawSampler sampler(2.5, 1);
        std::mt19937_64 rng(trial);
        std::vector<std::uint64_t> v(10'000);
        for (auto& x : v) x = sampler(rng);
        const auto t0 = Clock::now();
        const auto fit = fit_power_law(v, {.bootstraps = 1000, .seed = trial, .workers = 4});
        const double secs = seconds_since(t0);
        worst = std::max(worst, secs);
        slow += secs >= 30.0;
        alpha_ok += std::abs(fit.alpha - 2.5) <= 0.15;
        p_ok += fit.p_value > 0.1;
        alphas += fmt::format("{}{:.3f}/{:.2f}", trial > 1 ? " " : "", fit.alpha, fit.p_value);
    }
    return {alpha_ok >= 18 && p_ok >= 18 && slow == 0,
            fmt::format("alpha within 0.15: {}/20, p > 0.1: {}/20, slowest fit {:.1f} s [alpha/p: {}]", alpha_ok, p_ok,
                        worst, alphas)};
}

Outcome structural_oracle() {
    Checks c;
    {
        const auto s = structural_summary(make_digraph(3, {{0, 1}, {1, 2}}));
        c.expect(s.node_count == 3 && s.edge_count == 2, "path: counts");
        c.near(s.density, 1.0 / 3.0, 1e-12, "path: density");
        c.near(s.avg_in_degree, 2.0 / 3.0, 1e-12, "path: in-degree");
        c.near(s.pct_sources, 100.0 / 3.0, 1e-12, "path: sources");
        c.near(s.pct_sinks, 100.0 / 3.0, 1e-12, "path: sinks");
        c.expect(s.diameter == 2, "path: diameter");
        c.near(s.avg_path_length, 4.0 / 3.0, 1e-12, "path: APL");
        c.expect(std::isnan(s.degree_assortativity), "path: assortativity undefined");
        c.expect(s.transitivity_undirected == 0.0 && s.clustering_coeff_full_avg == 0.0, "path: clustering");
        c.expect(s.scc_count == 3 && s.wcc_count == 1, "path: components");
        c.expect(s.reciprocated_edge_pct == 0.0, "path: reciprocity");
    }
    {
        const auto s = structural_summary(make_digraph(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}}));
        c.near(s.density, 1.0 / 6.0, 1e-12, "star: density");
        c.near(s.avg_in_degree, 5.0 / 6.0, 1e-12, "star: in-degree");
        c.near(s.pct_sources, 100.0 / 6.0, 1e-12, "star: sources");
        c.near(s.pct_sinks, 500.0 / 6.0, 1e-12, "star: sinks");
        c.expect(s.diameter == 1, "star: diameter");
        c.near(s.avg_path_length, 1.0, 1e-12, "star: APL");
        c.expect(std::isnan(s.degree_assortativity), "star: assortativity undefined");
        c.expect(s.transitivity_undirected == 0.0 && s.clustering_coeff_full_avg == 0.0, "star: clustering");
        c.expect(s.scc_count == 6 && s.wcc_count == 1, "star: components");
    }
    {
        const auto s = structural_summary(two_clique_graph());
        c.expect(s.node_count == 10 && s.edge_count == 21, "cliques: counts");
        c.near(s.density, 7.0 / 30.0, 1e-12, "cliques: density");
        c.near(s.avg_in_degree, 2.1, 1e-12, "cliques: in-degree");
        c.near(s.pct_sources, 10.0, 1e-12, "cliques: sources");
        c.near(s.pct_sinks, 10.0, 1e-12, "cliques: sinks");
        c.expect(s.diameter == 3, "cliques: diameter");
        c.near(s.avg_path_length, 17.0 / 9.0, 1e-12, "cliques: APL");
        c.near(s.degree_assortativity, -0.26, 1e-9, "cliques: assortativity");
        c.near(s.transitivity_undirected, 15.0 / 17.0, 1e-12, "cliques: transitivity");
        c.near(s.clustering_coeff_full_avg, 0.92, 1e-12, "cliques: clustering");
        c.expect(s.scc_count == 10 && s.wcc_count == 1, "cliques: components");
        c.expect(s.reciprocated_edge_pct == 0.0 && s.reciprocated_pair_pct == 0.0, "cliques: reciprocity");
    }
    std::mt19937_64 rng(9);
    std::size_t bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto g = random_digraph(rng, 2 + rng() % 30, 0.01 + double(rng() % 40) / 100.0);
        const auto s = structural_summary(g, {.workers = 1});
        bad += double(s.diameter) < s.avg_path_length;
    }
    c.expect(bad == 0, fmt::format("{} random graphs with diameter < APL", bad));
    return {c.failures.empty(), c.failures.empty() ? "3 fixtures exact, 1000 random graphs diameter >= APL" : c.summary()};
}

// Best modularity over all two-block partitions, by enumeration.
double best_two_partition(const Digraph& g) {
    const auto ug = undirected_projection(g);
    const std::size_t n = ug.node_count();
    double best = -1.0;
    std::vector<std::uint32_t> assign(n);
    for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        for (std::size_t i = 0; i < n; ++i) assign[i] = (mask >> i) & 1u;
        best = std::max(best, modularity(ug, assign));
    }
    return best;
}

Outcome louvain_two_cliques() {
    const auto g = two_clique_graph();
    const auto p = louvain_communities(g);
    const double optimum = best_two_partition(g);
    const bool ok = p.community_count == 2 && std::abs(p.modularity - optimum) <= 1e-9;
    return {ok, fmt::format("{} communities, Q = {:.12f}, best 2-partition Q = {:.12f}", p.community_count,
                            p.modularity, optimum)};
}

Outcome tlcc_properties() {
    using Opt = std::vector<std::optional<double>>;
    Checks c;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> phase(0.0, 2 * M_PI);
    const double ph = phase(rng);
    Opt base(72);
    for (std::size_t t = 0; t < base.size(); ++t)
        base[t] = 0.05 * double(t) + std::sin(2 * M_PI * double(t) / 12.0 + ph);
    double min_r = 1.0;
    for (int k = 1; k <= 12; ++k) {
        const Opt s(base.begin() + 12, base.end());
        const Opt s2(base.begin() + 12 - k, base.end() - k);
        const auto r = tlcc(s, s2, 12);
        c.expect(r.peak_lag == -k, fmt::format("shift {}: peak lag {}", k, r.peak_lag.value_or(999)));
        c.expect(r.peak_r && *r.peak_r >= 0.99, fmt::format("shift {}: peak r {}", k, r.peak_r.value_or(-1)));
        if (r.peak_r) min_r = std::min(min_r, *r.peak_r);
    }
    double worst = 0.0;
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 20; ++trial) {
        Opt a(48), b(48);
        for (auto& x : a) x = gauss(rng);
        for (auto& x : b) x = gauss(rng);
        a[rng() % 48] = std::nullopt;
        b[rng() % 48] = std::nullopt;
        const auto ab = tlcc(a, b, 12), ba = tlcc(b, a, 12);
        for (int l = -12; l <= 12; ++l) {
            c.expect(ab.at(l).has_value() == ba.at(-l).has_value(), fmt::format("lag {} definedness", l));
            if (ab.at(l) && ba.at(-l)) worst = std::max(worst, std::abs(*ab.at(l) - *ba.at(-l)));
        }
    }
    c.expect(worst <= 1e-12, fmt::format("antisymmetry gap {}", worst));
    return {c.failures.empty(), c.failures.empty()
                                    ? fmt::format("12 shifts peak at -k, min peak r {:.4f}, antisymmetry gap {:.1e}", min_r, worst)
                                    : c.summary()};
}

Outcome shapley_accuracy() {
    Checks c;
    double worst = 0.0;
    auto against_exact = [&](const std::string& name, PairOracle& oracle, const FeatureGrid& grid) {
        const auto exact = exact_shapley(oracle, grid);
        const auto m = explain_pair(oracle, name, {.samples = 10'000, .seed = 11});
        double err = 0.0, var = 0.0;
        for (std::size_t f = 0; f < exact.size(); ++f) {
            err = std::max(err, std::abs(m.phi[f] - exact[f]));
            var += m.standard_error[f] * m.standard_error[f];
        }
        worst = std::max(worst, err);
        c.expect(err <= 0.02, fmt::format("{}: max error {}", name, err));
        c.expect(std::abs(m.efficiency_residual()) <= 3.0 * std::sqrt(var) + 1e-12,
                 fmt::format("{}: efficiency residual {}", name, m.efficiency_residual()));
        return m;
    };

    {
        auto o = additive_oracle(toy_grid(2, 1), {0.4, 0.3, 0.2, 0.1});
        against_exact("additive", o, toy_grid(2, 1));
    }
    {
        auto o = unanimity_oracle(toy_grid(1, 1));
        against_exact("unanimity", o, toy_grid(1, 1));
    }
    for (const auto [w, h] : {std::pair{2u, 2u}, std::pair{3u, 2u}}) {
        const auto grid = toy_grid(w, h);
        const std::size_t dim = 3 * grid.per_image();
        std::vector<double> a(dim), b(dim), base(dim, 0.05);
        std::mt19937_64 rng(w * 10 + h);
        std::normal_distribution<double> g;
        for (std::size_t i = 0; i < dim; ++i) {
            a[i] = 1.0 + g(rng);
            b[i] = a[i] + 0.6 * g(rng);
        }
        auto o = masked_cosine_oracle(grid, a, b, base);
        against_exact(fmt::format("cosine F={}", grid.feature_count()), o, grid);
    }
    {
        ToyOracle o(toy_grid(2, 1), [](const Coalition& s) { return 0.3 * s[0] + 0.2 * s[1] * s[2] + 0.1 * s[1]; });
        const auto m = against_exact("dummy", o, toy_grid(2, 1));
        c.expect(std::abs(m.phi[3]) <= 0.01, fmt::format("dummy phi {}", m.phi[3]));
    }
    {
        const auto grid = toy_grid(3, 2);
        std::vector<double> a(36), b(36), base(36, 0.1);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = std::sin(double(i));
            b[i] = std::cos(double(i) * 0.7);
        }
        auto o1 = masked_cosine_oracle(grid, a, b, base);
        auto o2 = masked_cosine_oracle(grid, a, b, base);
        const auto m1 = explain_pair(o1, "p", {.samples = 10'000, .seed = 5, .batch_permutations = 7});
        const auto m2 = explain_pair(o2, "p", {.samples = 10'000, .seed = 5});
        c.expect(to_json(m1).dump() == to_json(m2).dump(), "fixed seed output differs");
    }
    return {c.failures.empty(),
            c.failures.empty() ? fmt::format("5 games with |F| <= 12, max |phi - exact| = {:.4f}, dummy ok, seeded output identical", worst)
                               : c.summary()};
}

Outcome role_ratio_arithmetic() {
    auto role = [](double volume, double tx, double avg, double max, double min, double sd) {
        RoleIndicators r;
        r.average_volume_usd = volume;
        r.average_transactions = tx;
        r.average_price_usd = avg;
        r.maximum_price_usd = max;
        r.minimum_price_usd = min;
        r.stdev_price_usd = sd;
        return r;
    };
    const auto r = indicator_ratios(role(231531.69, 151.92, 692.91, 6661.95, 102.24, 977.22),
                                    role(146192.15, 100.00, 899.09, 4605.24, 318.89, 725.69));
    const std::array<double, 6> reference{1.584, 1.519, 0.771, 1.447, 0.321, 1.347};
    Checks c;
    std::string got;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double rounded = std::round(r[i] * 1000.0) / 1000.0;
        got += fmt::format("{}{:.3f}", i ? " " : "", rounded);
        c.expect(std::abs(rounded - reference[i]) < 1e-9, fmt::format("ratio {}: {:.3f}", i, rounded));
    }
    return {c.failures.empty(), fmt::format("ratios {}", got)};
}

Outcome cli_determinism() {
    const std::string cli = VINSP_CLI;
    if (cli.empty()) return {false, "command-line tool not built"};
    TempDir dir("acceptance-cli");
    const auto problems = check_rerun_determinism(cli, VINSP_FAKE_ORACLE, dir.path());
    if (problems.empty()) return {true, "12 invocations over 9 subcommands, reruns byte-identical"};
    return {false, fmt::format("{}", fmt::join(problems, "; "))};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"brute-force graph equivalence", graph_equivalence},
        {"acyclicity at scale", acyclicity_at_scale},
        {"linkage containment", linkage_containment},
        {"penalty formula", penalty_formula},
        {"power-law recovery", power_law_recovery},
        {"structural metrics oracle", structural_oracle},
        {"louvain two cliques", louvain_two_cliques},
        {"tlcc shifts and antisymmetry", tlcc_properties},
        {"shapley vs enumeration", shapley_accuracy},
        {"role indicator ratios", role_ratio_arithmetic},
        {"cli determinism", cli_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        failed += !o.pass;
        std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
