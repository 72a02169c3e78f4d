#include "vinsp/oracle.hpp"

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>
#include <mutex>
#include <utility>

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vinsp/error.hpp"

extern char** environ;

namespace vinsp {

void FeatureGrid::validate() const {
    if (cell == 0) throw config_error("feature grid cell size must be positive");
    if (width == 0 || height == 0) throw config_error("feature grid needs a positive width and height");
    if (feature_count() < 2) throw config_error("feature grid has fewer than 2 features");
}

ToyOracle::ToyOracle(FeatureGrid grid, Game game) : grid_(grid), game_(std::move(game)) {
    grid_.validate();
    if (!game_) throw config_error("toy oracle needs a game");
}

FeatureGrid ToyOracle::init(const std::string&) { return grid_; }

std::vector<double> ToyOracle::evaluate(std::span<const Coalition> masks) {
    std::vector<double> out;
    out.reserve(masks.size());
    for (const auto& m : masks) {
        if (m.size() != grid_.feature_count())
            throw oracle_error(fmt::format("mask has {} entries, expected {}", m.size(), grid_.feature_count()));
        out.push_back(game_(m));
    }
    evaluations_ += masks.size();
    return out;
}

FeatureGrid toy_grid(std::uint32_t cells_wide, std::uint32_t cells_high) {
    FeatureGrid g{cells_wide, cells_high, 1};
    g.validate();
    return g;
}

ToyOracle additive_oracle(FeatureGrid grid, std::vector<double> weights) {
    if (weights.size() != grid.feature_count()) throw config_error("additive oracle: one weight per feature");
    return ToyOracle(grid, [w = std::move(weights)](const Coalition& s) {
        double v = 0.0;
        for (std::size_t f = 0; f < w.size(); ++f)
            if (s[f]) v += w[f];
        return v;
    });
}

ToyOracle constant_oracle(FeatureGrid grid, double value) {
    return ToyOracle(grid, [value](const Coalition&) { return value; });
}

ToyOracle unanimity_oracle(FeatureGrid grid) {
    return ToyOracle(grid, [](const Coalition& s) {
        for (auto bit : s)
            if (!bit) return 0.0;
        return 1.0;
    });
}

ToyOracle masked_cosine_oracle(FeatureGrid grid, std::vector<double> a, std::vector<double> b,
                               std::vector<double> baseline) {
    const std::size_t per = grid.per_image();
    if (a.size() != b.size() || a.size() != baseline.size() || a.empty())
        throw config_error("masked cosine oracle: vectors must share a non-zero length");
    if (a.size() < per) throw config_error("masked cosine oracle: vector shorter than the feature count per image");
    return ToyOracle(grid, [a = std::move(a), b = std::move(b), base = std::move(baseline), per](const Coalition& s) {
        const std::size_t d = a.size();
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            const std::size_t block = k * per / d;
            const double x = s[block] ? a[k] : base[k];
            const double y = s[per + block] ? b[k] : base[k];
            dot += x * y;
            na += x * x;
            nb += y * y;
        }
        if (na == 0.0 || nb == 0.0) return 0.0;
        return std::max(0.0, dot / (std::sqrt(na) * std::sqrt(nb)));
    });
}

// ---- external process ----

namespace {

void ignore_sigpipe() {
    static std::once_flag once;
    std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
    if (fd >= 0) ::close(fd);
    fd = -1;
}

nlohmann::json parse_reply(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw oracle_error(fmt::format("oracle sent malformed JSON: {}", e.what()));
    }
    if (!j.is_object()) throw oracle_error("oracle reply is not a JSON object");
    if (j.contains("error")) throw oracle_error(fmt::format("oracle reported an error: {}", j["error"].dump()));
    return j;
}

std::uint32_t positive_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<std::int64_t>() <= 0)
        throw oracle_error(fmt::format("oracle init reply lacks a positive integer '{}'", key));
    return j[key].get<std::uint32_t>();
}

}  // namespace

ProcessOracle::ProcessOracle(std::vector<std::string> argv) : ProcessOracle(std::move(argv), Options{}) {}

ProcessOracle::ProcessOracle(std::vector<std::string> argv, Options options) : options_(options) {
    if (argv.empty()) throw config_error("oracle command is empty");
    if (options_.max_batch == 0) options_.max_batch = 1;
    ignore_sigpipe();

    int in_pipe[2], out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw oracle_error(fmt::format("pipe: {}", std::strerror(errno)));
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        throw oracle_error(fmt::format("pipe: {}", std::strerror(errno)));
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);

    std::vector<char*> args;
    for (auto& a : argv) args.push_back(a.data());
    args.push_back(nullptr);

    pid_t pid = -1;
    const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    if (rc != 0) {
        ::close(in_pipe[1]);
        ::close(out_pipe[0]);
        throw oracle_error(fmt::format("cannot start oracle '{}': {}", argv[0], std::strerror(rc)));
    }
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
}

ProcessOracle::~ProcessOracle() {
    try {
        close();
    } catch (...) {
    }
}

void ProcessOracle::send_line(const std::string& line) {
    if (to_child_ < 0) throw oracle_error("oracle is closed");
    std::string payload = line + '\n';
    std::size_t off = 0;
    while (off < payload.size()) {
        const ssize_t n = ::write(to_child_, payload.data() + off, payload.size() - off);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw oracle_error(fmt::format("writing to oracle failed: {}", std::strerror(errno)));
        }
        off += static_cast<std::size_t>(n);
    }
}

std::string ProcessOracle::read_line() {
    if (from_child_ < 0) throw oracle_error("oracle is closed");
    const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
    for (;;) {
        if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            return line;
        }
        const auto left =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) throw oracle_error("oracle timed out");
        pollfd pfd{from_child_, POLLIN, 0};
        const int pr = ::poll(&pfd, 1, static_cast<int>(std::min<std::int64_t>(left.count(), 1 << 30)));
        if (pr < 0) {
            if (errno == EINTR) continue;
            throw oracle_error(fmt::format("poll on oracle failed: {}", std::strerror(errno)));
        }
        if (pr == 0) throw oracle_error("oracle timed out");
        char chunk[4096];
        const ssize_t n = ::read(from_child_, chunk, sizeof chunk);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw oracle_error(fmt::format("reading from oracle failed: {}", std::strerror(errno)));
        }
        if (n == 0) throw oracle_error("oracle closed its output");
        buffer_.append(chunk, static_cast<std::size_t>(n));
    }
}

FeatureGrid ProcessOracle::init(const std::string& pair_id) {
    send_line(nlohmann::json{{"op", "init"}, {"pair_id", pair_id}}.dump());
    const auto j = parse_reply(read_line());
    FeatureGrid g{positive_field(j, "width"), positive_field(j, "height"), positive_field(j, "cell")};
    const auto per = positive_field(j, "features_per_image");
    if (per != g.per_image())
        throw oracle_error(fmt::format("oracle reports {} features per image but a {}x{} grid of {} px cells has {}",
                                       per, g.width, g.height, g.cell, g.per_image()));
    try {
        g.validate();
    } catch (const Error& e) {
        throw oracle_error(e.what());
    }
    expected_features_ = g.feature_count();
    return g;
}

std::vector<double> ProcessOracle::evaluate(std::span<const Coalition> masks) {
    if (expected_features_ == 0) throw oracle_error("oracle evaluated before init");
    std::vector<double> out;
    out.reserve(masks.size());
    for (std::size_t begin = 0; begin < masks.size(); begin += options_.max_batch) {
        const std::size_t end = std::min(masks.size(), begin + options_.max_batch);
        nlohmann::json batch = nlohmann::json::array();
        for (std::size_t i = begin; i < end; ++i) {
            if (masks[i].size() != expected_features_)
                throw oracle_error(fmt::format("mask has {} entries, expected {}", masks[i].size(), expected_features_));
            nlohmann::json m = nlohmann::json::array();
            for (auto bit : masks[i]) m.push_back(bit ? 1 : 0);
            batch.push_back(std::move(m));
        }
        send_line(nlohmann::json{{"op", "eval"}, {"masks", std::move(batch)}}.dump());
        const auto j = parse_reply(read_line());
        if (!j.contains("sims") || !j["sims"].is_array()) throw oracle_error("oracle eval reply lacks 'sims'");
        const auto& sims = j["sims"];
        if (sims.size() != end - begin)
            throw oracle_error(fmt::format("oracle returned {} similarities for {} masks", sims.size(), end - begin));
        for (const auto& s : sims) {
            if (!s.is_number()) throw oracle_error("oracle similarity is not a number");
            const double v = s.get<double>();
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw oracle_error(fmt::format("oracle similarity {} outside [0, 1]", v));
            out.push_back(v);
        }
        evaluations_ += end - begin;
    }
    return out;
}

void ProcessOracle::close() {
    if (pid_ < 0) return;
    if (to_child_ >= 0) {
        const std::string bye = "{\"op\":\"close\"}\n";
        [[maybe_unused]] auto n = ::write(to_child_, bye.data(), bye.size());
    }
    close_fd(to_child_);
    close_fd(from_child_);
    // Give the child a moment to exit on its own before forcing it.
    int status = 0;
    for (int i = 0; i < 50; ++i) {
        const pid_t r = ::waitpid(pid_, &status, WNOHANG);
        if (r == pid_ || r < 0) {
            pid_ = -1;
            return;
        }
        ::usleep(10'000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
}

}  // namespace vinsp
