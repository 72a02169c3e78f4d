#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vinsp {

/// Square-cell feature layout over an image pair. Features are numbered
/// image 0 row-major, then image 1 row-major.
struct FeatureGrid {
    std::uint32_t width = 512;
    std::uint32_t height = 512;
    std::uint32_t cell = 64;

    std::size_t columns() const noexcept { return cell ? (width + cell - 1) / cell : 0; }
    std::size_t rows() const noexcept { return cell ? (height + cell - 1) / cell : 0; }
    std::size_t per_image() const noexcept { return columns() * rows(); }
    std::size_t feature_count() const noexcept { return 2 * per_image(); }

    /// Throws a config error for a zero cell or fewer than 2 features.
    void validate() const;
};

/// One bit per feature: 1 = present, 0 = corrupted.
using Coalition = std::vector<std::uint8_t>;

enum class OracleTransport { InProcessToy, ExternalProcess };

/// Black-box pair similarity under feature masking. The oracle owns the
/// masking itself; callers only send coalitions.
class PairOracle {
public:
    virtual ~PairOracle() = default;
    virtual OracleTransport transport() const noexcept = 0;
    /// Selects the image pair and returns its feature grid.
    virtual FeatureGrid init(const std::string& pair_id) = 0;
    /// One similarity in [0, 1] per mask.
    virtual std::vector<double> evaluate(std::span<const Coalition> masks) = 0;
    virtual void close() {}
    std::size_t evaluations() const noexcept { return evaluations_; }

protected:
    std::size_t evaluations_ = 0;
};

/// In-process game over a fixed grid, used for tests and calibration.
class ToyOracle final : public PairOracle {
public:
    using Game = std::function<double(const Coalition&)>;
    ToyOracle(FeatureGrid grid, Game game);

    OracleTransport transport() const noexcept override { return OracleTransport::InProcessToy; }
    FeatureGrid init(const std::string& pair_id) override;
    std::vector<double> evaluate(std::span<const Coalition> masks) override;

    const FeatureGrid& grid() const noexcept { return grid_; }

private:
    FeatureGrid grid_;
    Game game_;
};

/// Grid with the requested number of cells per image (w x h cells of size 1).
FeatureGrid toy_grid(std::uint32_t cells_wide, std::uint32_t cells_high);

/// M(S) = sum of weights of present features.
ToyOracle additive_oracle(FeatureGrid grid, std::vector<double> weights);
/// M(S) = value regardless of the mask.
ToyOracle constant_oracle(FeatureGrid grid, double value);
/// M(S) = 1 when every feature is present, else 0.
ToyOracle unanimity_oracle(FeatureGrid grid);
/// Splits two d-vectors into per-feature blocks (first half of the features
/// covers `a`, second half `b`); corrupted blocks are replaced by `baseline`
/// and the oracle returns max(0, cos(a', b')).
ToyOracle masked_cosine_oracle(FeatureGrid grid, std::vector<double> a, std::vector<double> b,
                               std::vector<double> baseline);

/// Child process speaking line-delimited JSON on stdin/stdout:
///   -> {"op":"init","pair_id":...}   <- {"features_per_image":N,"width":W,"height":H,"cell":C}
///   -> {"op":"eval","masks":[[..]]}  <- {"sims":[...]}
///   -> {"op":"close"}
/// Any malformed or out-of-range reply, an {"error":...} record, EOF or a
/// timeout raises an oracle error.
class ProcessOracle final : public PairOracle {
public:
    struct Options {
        std::chrono::milliseconds timeout{120'000};
        std::size_t max_batch = 256;
    };

    explicit ProcessOracle(std::vector<std::string> argv);
    ProcessOracle(std::vector<std::string> argv, Options options);
    ~ProcessOracle() override;
    ProcessOracle(const ProcessOracle&) = delete;
    ProcessOracle& operator=(const ProcessOracle&) = delete;

    OracleTransport transport() const noexcept override { return OracleTransport::ExternalProcess; }
    FeatureGrid init(const std::string& pair_id) override;
    std::vector<double> evaluate(std::span<const Coalition> masks) override;
    void close() override;

private:
    void send_line(const std::string& line);
    std::string read_line();

    Options options_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
    std::size_t expected_features_ = 0;
};

}  // namespace vinsp
