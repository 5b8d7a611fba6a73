#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ifsmod/barycentric.hpp"
#include "ifsmod/error.hpp"
#include "ifsmod/geometry.hpp"
#include "ifsmod/simplex.hpp"

namespace ifsmod {

/**
 * Fixed camera from world coordinates (y up) to window pixels (origin top-left, x right,
 * y down). The world box is fitted inside the window with uniform scale and centred;
 * `margin_frac` of each window dimension is kept free on every side.
 */
class Viewport {
public:
    Viewport(Box2 world_box, int pixel_w, int pixel_h, double margin_frac = 0.0)
        : box_(pad_empty(world_box)), w_(pixel_w), h_(pixel_h), margin_(margin_frac) {
        if (pixel_w < 1 || pixel_h < 1) throw InvalidArgument("viewport needs at least 1x1 pixels");
        if (!(margin_frac >= 0.0 && margin_frac <= 0.45))
            throw InvalidArgument("viewport margin must lie in [0, 0.45]");
        if (!(box_.xmin <= box_.xmax && box_.ymin <= box_.ymax))
            throw InvalidArgument("viewport world box is inverted");
        const double usable_w = w_ * (1.0 - 2.0 * margin_);
        const double usable_h = h_ * (1.0 - 2.0 * margin_);
        scale_ = std::min(usable_w / box_.width(), usable_h / box_.height());
        offset_x_ = 0.5 * (w_ - scale_ * box_.width());
        offset_y_ = 0.5 * (h_ - scale_ * box_.height());
    }

    const Box2& world_box() const { return box_; }
    int pixel_width() const { return w_; }
    int pixel_height() const { return h_; }
    double margin_frac() const { return margin_; }
    /// Pixels per world unit.
    double scale() const { return scale_; }

    Point2 world_to_window(const Point2& p) const {
        return {offset_x_ + (p.x - box_.xmin) * scale_, offset_y_ + (box_.ymax - p.y) * scale_};
    }

    Point2 window_to_world(const Point2& q) const {
        return {box_.xmin + (q.x - offset_x_) / scale_, box_.ymax - (q.y - offset_y_) / scale_};
    }

private:
    static Box2 pad_empty(Box2 box) {
        if (!(box.width() > 0.0)) {
            const double d = 1e-6 * std::max(1.0, std::abs(box.xmin));
            box.xmin -= d;
            box.xmax += d;
        }
        if (!(box.height() > 0.0)) {
            const double d = 1e-6 * std::max(1.0, std::abs(box.ymin));
            box.ymin -= d;
            box.ymax += d;
        }
        return box;
    }

    Box2 box_;
    int w_;
    int h_;
    double margin_;
    double scale_ = 1.0;
    double offset_x_ = 0.0;
    double offset_y_ = 0.0;
};

inline Point2 world_to_window(const Viewport& vp, const Point2& p) { return vp.world_to_window(p); }
inline Point2 window_to_world(const Viewport& vp, const Point2& q) { return vp.window_to_world(q); }

/**
 * Session camera: bounding box of the points and the triangle, padded by 5%, then widened
 * along one axis to the window's aspect ratio so that no letterbox slack remains.
 */
inline Viewport default_viewport(std::span<const Point2> points, const std::optional<AffineBasis>& basis,
                                 int pixel_w, int pixel_h, double margin_frac = 0.0) {
    std::vector<Point2> all(points.begin(), points.end());
    if (basis) all.insert(all.end(), {basis->a, basis->b, basis->c});
    if (all.empty()) all.push_back({0.0, 0.0});
    Box2 box = bounding_box(all).padded(0.05);
    if (box.width() > 0.0 && box.height() > 0.0 && pixel_w > 0 && pixel_h > 0) {
        const double aspect = static_cast<double>(pixel_w) / pixel_h;
        const Point2 mid = box.center();
        if (box.width() / box.height() < aspect) {
            const double half = 0.5 * box.height() * aspect;
            box.xmin = mid.x - half;
            box.xmax = mid.x + half;
        } else {
            const double half = 0.5 * box.width() / aspect;
            box.ymin = mid.y - half;
            box.ymax = mid.y + half;
        }
    }
    return Viewport(box, pixel_w, pixel_h, margin_frac);
}

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

namespace palette {
inline constexpr Rgb background{255, 255, 255};
inline constexpr Rgb point{0, 0, 0};
inline constexpr Rgb edge{220, 0, 0};
inline constexpr Rgb handle{0, 0, 200};
}  // namespace palette

/// Row-major RGB raster, origin top-left.
class RgbImage {
public:
    RgbImage(int width, int height, Rgb fill = palette::background)
        : width_(width), height_(height), data_(static_cast<std::size_t>(width) * height * 3) {
        if (width < 1 || height < 1) throw InvalidArgument("image needs at least 1x1 pixels");
        for (std::size_t i = 0; i < data_.size(); i += 3) {
            data_[i] = fill.r;
            data_[i + 1] = fill.g;
            data_[i + 2] = fill.b;
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::span<const std::uint8_t> bytes() const { return data_; }

    bool in_bounds(long long x, long long y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    Rgb at(int x, int y) const {
        const std::size_t i = offset(x, y);
        return {data_[i], data_[i + 1], data_[i + 2]};
    }

    void set(long long x, long long y, Rgb c) {
        if (!in_bounds(x, y)) return;
        const std::size_t i = offset(static_cast<int>(x), static_cast<int>(y));
        data_[i] = c.r;
        data_[i + 1] = c.g;
        data_[i + 2] = c.b;
    }

    std::size_t count(Rgb c) const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < data_.size(); i += 3)
            n += data_[i] == c.r && data_[i + 1] == c.g && data_[i + 2] == c.b;
        return n;
    }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    std::size_t offset(int x, int y) const {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)) * 3;
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

namespace detail {

// Liang-Barsky clip of segment p->q to [lo, hi]^2 box; false when nothing is left.
inline bool clip_segment(Point2& p, Point2& q, const Point2& lo, const Point2& hi) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = q.x - p.x, dy = q.y - p.y;
    const double ps[] = {-dx, dx, -dy, dy};
    const double qs[] = {p.x - lo.x, hi.x - p.x, p.y - lo.y, hi.y - p.y};
    for (int i = 0; i < 4; ++i) {
        if (ps[i] == 0.0) {
            if (qs[i] < 0.0) return false;
            continue;
        }
        const double t = qs[i] / ps[i];
        if (ps[i] < 0.0) t0 = std::max(t0, t);
        else t1 = std::min(t1, t);
        if (t0 > t1) return false;
    }
    const Point2 start = p;
    p = {start.x + t0 * dx, start.y + t0 * dy};
    q = {start.x + t1 * dx, start.y + t1 * dy};
    return true;
}

// Pixel whose centre (i + 0.5) is nearest to v, halves rounded up; that is floor(v).
inline long long pixel_index(double v) {
    return static_cast<long long>(std::floor(std::clamp(v, -1e15, 1e15)));
}

inline void draw_line(RgbImage& img, Point2 p, Point2 q, Rgb color) {
    if (!is_finite(p) || !is_finite(q)) return;
    if (!clip_segment(p, q, {0.0, 0.0}, {static_cast<double>(img.width()), static_cast<double>(img.height())}))
        return;
    long long x0 = std::min<long long>(pixel_index(p.x), img.width() - 1);
    long long y0 = std::min<long long>(pixel_index(p.y), img.height() - 1);
    const long long x1 = std::min<long long>(pixel_index(q.x), img.width() - 1);
    const long long y1 = std::min<long long>(pixel_index(q.y), img.height() - 1);
    const long long dx = std::llabs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const long long dy = -std::llabs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    long long err = dx + dy;
    while (true) {
        img.set(x0, y0, color);
        if (x0 == x1 && y0 == y1) break;
        const long long e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace detail

inline constexpr int kHandleHalfSize = 2;  // handles are 5x5 squares

/**
 * One foreground pixel per point, then (optionally) the control triangle: 1px edges and a
 * square handle on each vertex. Points outside the window are skipped.
 */
inline RgbImage rasterize(std::span<const Point2> points, const std::optional<AffineBasis>& basis,
                          const Viewport& vp) {
    RgbImage img(vp.pixel_width(), vp.pixel_height());
    for (const auto& p : points) {
        const Point2 q = vp.world_to_window(p);
        if (!is_finite(q)) continue;
        img.set(detail::pixel_index(q.x), detail::pixel_index(q.y), palette::point);
    }
    if (basis) {
        const Point2 v[] = {vp.world_to_window(basis->a), vp.world_to_window(basis->b),
                            vp.world_to_window(basis->c)};
        for (int i = 0; i < 3; ++i) detail::draw_line(img, v[i], v[(i + 1) % 3], palette::edge);
        for (const auto& c : v) {
            if (!is_finite(c)) continue;
            const long long cx = detail::pixel_index(c.x), cy = detail::pixel_index(c.y);
            if (cx < -kHandleHalfSize || cy < -kHandleHalfSize || cx > img.width() + kHandleHalfSize ||
                cy > img.height() + kHandleHalfSize)
                continue;
            for (long long dy = -kHandleHalfSize; dy <= kHandleHalfSize; ++dy)
                for (long long dx = -kHandleHalfSize; dx <= kHandleHalfSize; ++dx)
                    img.set(cx + dx, cy + dy, palette::handle);
        }
    }
    return img;
}

/// Binary PPM: "P6\n<w> <h>\n255\n" followed by RGB triples, rows top to bottom.
inline std::string encode_ppm(const RgbImage& img) {
    std::string out = "P6\n" + std::to_string(img.width()) + ' ' + std::to_string(img.height()) + "\n255\n";
    const auto bytes = img.bytes();
    out.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    return out;
}

namespace detail {
inline void append_fixed(std::string& out, double v) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 3);
    if (ec == std::errc{}) out.append(buf.data(), end);
    else out += "0";
}
}  // namespace detail

/// SVG with one radius-0.5 circle per visible point, plus the optional triangle overlay.
inline std::string encode_svg(std::span<const Point2> points, const std::optional<AffineBasis>& basis,
                              const Viewport& vp) {
    const int w = vp.pixel_width(), h = vp.pixel_height();
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
                      "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + ' ' +
                      std::to_string(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g fill=\"black\">\n";
    for (const auto& p : points) {
        const Point2 q = vp.world_to_window(p);
        if (!(q.x >= 0.0 && q.y >= 0.0 && q.x < w && q.y < h)) continue;
        out += "<circle cx=\"";
        detail::append_fixed(out, q.x);
        out += "\" cy=\"";
        detail::append_fixed(out, q.y);
        out += "\" r=\"0.5\"/>\n";
    }
    out += "</g>\n";
    if (basis) {
        out += "<polygon fill=\"none\" stroke=\"rgb(220,0,0)\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < 3; ++i) {
            const Point2 q = vp.world_to_window((*basis)[i]);
            if (i) out += ' ';
            detail::append_fixed(out, q.x);
            out += ',';
            detail::append_fixed(out, q.y);
        }
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace ifsmod
