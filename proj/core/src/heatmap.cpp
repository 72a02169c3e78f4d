#include "vinsp/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "vinsp/error.hpp"

namespace vinsp {

namespace {

struct Rgb {
    unsigned char r, g, b;
};

// Diverging: -1 -> blue, 0 -> white, +1 -> red.
Rgb diverging(double t) {
    t = std::clamp(t, -1.0, 1.0);
    const auto fade = [](double x) { return static_cast<unsigned char>(std::lround(255.0 * (1.0 - x))); };
    if (t >= 0.0) return {255, fade(t), fade(t)};
    return {fade(-t), fade(-t), 255};
}

}  // namespace

void write_heatmap_csv(const ExplanationMap& map, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error(fmt::format("cannot write {}", path.string()));
    const std::size_t per = map.grid.per_image();
    const std::size_t cols = map.grid.columns();
    out << "image_index,row,col,phi\n";
    for (std::size_t f = 0; f < map.phi.size(); ++f) {
        const std::size_t local = f % per;
        out << fmt::format("{},{},{},{:.17g}\n", f / per, local / cols, local % cols, map.phi[f]);
    }
    if (!out) throw io_error(fmt::format("write failed for {}", path.string()));
}

void write_heatmap_ppm(const ExplanationMap& map, const std::filesystem::path& path, std::uint32_t cell_pixels) {
    if (cell_pixels == 0) throw config_error("heatmap cell size must be positive");
    const std::size_t cols = map.grid.columns(), rows = map.grid.rows(), per = map.grid.per_image();
    if (map.phi.size() != 2 * per) throw data_error("explanation does not match its grid");

    double scale = 0.0;
    for (double p : map.phi) scale = std::max(scale, std::abs(p));

    const std::size_t gap = cell_pixels;
    const std::size_t width = 2 * cols * cell_pixels + gap;
    const std::size_t height = rows * cell_pixels;
    std::vector<unsigned char> pixels(width * height * 3, 255);
    for (std::size_t f = 0; f < map.phi.size(); ++f) {
        const std::size_t image = f / per, local = f % per;
        const std::size_t x0 = image * (cols * cell_pixels + gap) + (local % cols) * cell_pixels;
        const std::size_t y0 = (local / cols) * cell_pixels;
        const Rgb c = diverging(scale > 0.0 ? map.phi[f] / scale : 0.0);
        for (std::size_t y = y0; y < y0 + cell_pixels; ++y)
            for (std::size_t x = x0; x < x0 + cell_pixels; ++x) {
                auto* px = pixels.data() + (y * width + x) * 3;
                px[0] = c.r;
                px[1] = c.g;
                px[2] = c.b;
            }
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error(fmt::format("cannot write {}", path.string()));
    out << "P6\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (!out) throw io_error(fmt::format("write failed for {}", path.string()));
}

}  // namespace vinsp
