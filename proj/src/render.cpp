#include "billiards/render.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace billiards {

namespace {

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// World-to-page map fitted to a bounding box, y pointing up.
class Canvas {
public:
    Canvas(const std::vector<Vec2d>& pts, const FigureStyle& st) : st_(st) {
        double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
        for (const auto& p : pts) {
            x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
        }
        if (pts.empty()) x0 = y0 = 0, x1 = y1 = 1;
        double w = std::max(x1 - x0, 1e-12), h = std::max(y1 - y0, 1e-12);
        k_ = (st.width - 2 * st.margin) / w;
        x0_ = x0;
        y1_ = y1;
        height_ = h * k_ + 2 * st.margin;
    }

    Vec2d map(const Vec2d& p) const { return {st_.margin + (p.x - x0_) * k_, st_.margin + (y1_ - p.y) * k_}; }

    std::string pts(const std::vector<Vec2d>& v) const {
        std::ostringstream o;
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto q = map(v[i]);
            o << (i ? " " : "") << num(q.x) << ',' << num(q.y);
        }
        return o.str();
    }

    static std::string num(double x) {
        std::ostringstream o;
        o.precision(6);
        o << std::fixed << x;
        std::string s = o.str();
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s == "-0" ? "0" : s;
    }

    void polygon(const std::vector<Vec2d>& v, const std::string& attrs) {
        body_ << "  <polygon points=\"" << pts(v) << "\" " << attrs << "/>\n";
    }
    void polyline(const std::vector<Vec2d>& v, const std::string& attrs) {
        body_ << "  <polyline points=\"" << pts(v) << "\" fill=\"none\" " << attrs << "/>\n";
    }
    void circle(const Vec2d& c, double r, const std::string& attrs) {
        auto q = map(c);
        body_ << "  <circle cx=\"" << num(q.x) << "\" cy=\"" << num(q.y) << "\" r=\"" << num(r) << "\" " << attrs
              << "/>\n";
    }
    void text(const Vec2d& at, const std::string& s) {
        auto q = map(at);
        body_ << "  <text x=\"" << num(q.x + st_.point_radius + 2) << "\" y=\"" << num(q.y - st_.point_radius - 2)
              << "\" font-family=\"sans-serif\" font-size=\"" << num(st_.font_size) << "\">" << esc(s)
              << "</text>\n";
    }
    void marks(const std::vector<MarkedPoint>& m) {
        for (const auto& p : m) {
            circle(p.point, st_.point_radius, "fill=\"#c0392b\" stroke=\"none\"");
            text(p.point, p.name);
        }
    }

    std::string doc() const {
        std::ostringstream o;
        o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(st_.width) << "\" height=\""
          << num(height_) << "\" viewBox=\"0 0 " << num(st_.width) << ' ' << num(height_) << "\">\n"
          << "  <rect x=\"0\" y=\"0\" width=\"" << num(st_.width) << "\" height=\"" << num(height_)
          << "\" fill=\"white\"/>\n"
          << body_.str() << "</svg>\n";
        return o.str();
    }

    const FigureStyle& style() const { return st_; }

private:
    FigureStyle st_;
    double k_ = 1, x0_ = 0, y1_ = 0, height_ = 0;
    std::ostringstream body_;
};

std::string stroke(const std::string& colour, double w) {
    return "stroke=\"" + colour + "\" stroke-width=\"" + Canvas::num(w) + "\" stroke-linejoin=\"round\"";
}

Vec2d reflect_line(const Vec2d& p, const Vec2d& d) {
    double k = 2 * dot(p, d) / norm2(d);
    return d * k - p;
}

}  // namespace

std::optional<FigureKind> parse_figure_kind(const std::string& s) {
    if (s == "polygon") return FigureKind::Polygon;
    if (s == "trajectory") return FigureKind::Trajectory;
    if (s == "unfolding-star") return FigureKind::UnfoldingStar;
    if (s == "tiling") return FigureKind::Tiling;
    return std::nullopt;
}

std::string render_polygon(const PolygonD& q, const std::vector<MarkedPoint>& marks, const FigureStyle& style) {
    std::vector<Vec2d> all = q.vertices();
    for (const auto& m : marks) all.push_back(m.point);
    Canvas c(all, style);
    c.polygon(q.vertices(), "fill=\"#f4f1e8\" " + stroke("black", style.stroke));
    c.marks(marks);
    return c.doc();
}

std::string render_trajectory(const PolygonD& q, const Trajectory<double>& t, const std::vector<MarkedPoint>& marks,
                              const FigureStyle& style) {
    std::vector<Vec2d> all = q.vertices();
    for (const auto& m : marks) all.push_back(m.point);
    Canvas c(all, style);
    c.polygon(q.vertices(), "fill=\"#f4f1e8\" " + stroke("black", style.stroke));
    std::vector<Vec2d> path{t.start};
    for (const auto& b : t.bounces) path.push_back(b.q);
    path.push_back(t.end);
    c.polyline(path, stroke("#1f5fa8", style.trajectory_stroke));
    c.circle(t.start, style.point_radius * 0.75, "fill=\"#1f5fa8\" stroke=\"none\"");
    c.marks(marks);
    return c.doc();
}

std::vector<std::vector<Vec2d>> star_copies(const PolygonD& q, std::size_t vertex) {
    const std::size_t n = q.size();
    auto snap = snap_to_rational_pi(q.interior_angle(vertex), 64, 1e-9);
    if (!snap || snap->num() != 1)
        throw GeometryError(ErrorKind::InputError, "vertex " + std::to_string(vertex) + " does not have angle π/n");
    const std::int64_t k = 2 * snap->den();
    std::vector<Vec2d> cur;
    for (std::size_t i = 0; i < n; ++i) cur.push_back(q.vertex(vertex + i) - q.vertex(vertex));
    // cur[1] lies on the first edge, cur[n-1] on the second; the copy spans the angle between them.
    std::vector<std::vector<Vec2d>> out;
    for (std::int64_t c = 0; c < k; ++c) {
        out.push_back(cur);
        Vec2d axis = (c % 2 == 0) ? cur[n - 1] : cur[1];
        for (auto& p : cur) p = reflect_line(p, axis);
    }
    return out;
}

std::string render_unfolding_star(const PolygonD& q, std::size_t vertex, double geodesic_angle,
                                  const FigureStyle& style) {
    auto copies = star_copies(q, vertex);
    std::vector<Vec2d> all;
    for (const auto& c : copies) all.insert(all.end(), c.begin(), c.end());
    Canvas c(all, style);
    for (std::size_t i = 0; i < copies.size(); ++i)
        c.polygon(copies[i], std::string("fill=\"") + (i % 2 ? "#e6eef7" : "#f4f1e8") + "\" " +
                                 stroke("black", style.stroke * 0.6));
    const std::size_t n = q.size();
    double r = std::min(norm(q.vertex(vertex + 1) - q.vertex(vertex)), norm(q.vertex(vertex + n - 1) - q.vertex(vertex)));
    Vec2d u{std::cos(geodesic_angle), std::sin(geodesic_angle)};
    c.polyline({u * (-0.8 * r), u * (0.8 * r)}, stroke("#c0392b", style.stroke) + " stroke-dasharray=\"6,4\"");
    c.circle({0, 0}, style.point_radius, "fill=\"black\" stroke=\"none\"");
    c.text({0, 0}, "O");
    return c.doc();
}

std::string render_tiling(const TiledPolygon& p, const std::vector<MarkedPoint>& marks, const FigureStyle& style) {
    const auto& tri = p.triangle();
    std::vector<Vec2d> all = p.polygon().vertices();
    for (const auto& m : marks) all.push_back(m.point);
    Canvas c(all, style);
    for (const auto& cell : p.cells()) {
        auto t = tri.tile(cell.i, cell.j, cell.o);
        c.polygon({tri.real(t[0]), tri.real(t[1]), tri.real(t[2])},
                  "fill=\"#f4f1e8\" " + stroke("#9a9a9a", style.stroke * 0.4));
    }
    c.polygon(p.polygon().vertices(), "fill=\"none\" " + stroke("black", style.stroke));
    for (const auto& a : p.a_images()) {
        const char* fill = a.where == Location::Interior ? "#1f5fa8" : "white";
        c.circle(tri.real(a.point), style.point_radius * 0.6, std::string("fill=\"") + fill + "\" " + stroke("#1f5fa8", 1));
    }
    for (const auto& v : p.vertices())
        if (v.type != VertexType::A && !v.corner)
            c.circle(tri.real(v.point), style.point_radius * 0.8, "fill=\"none\" " + stroke("#d35400", 1.5));
    c.marks(marks);
    return c.doc();
}

}  // namespace billiards
