#include "billiards/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace billiards {

namespace {

[[noreturn]] void input_error(std::size_t line, const std::string& what) {
    throw GeometryError(ErrorKind::InputError, "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line.substr(0, line.find('#')));
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
}

Rational number(const std::string& s, std::size_t line) {
    try {
        return parse_rational(s);
    } catch (const std::invalid_argument& e) {
        input_error(line, e.what());
    }
}

std::int64_t integer(const std::string& s, std::size_t line) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) input_error(line, "expected an integer: " + s);
    return v;
}

std::string format_literal(const Rational& q) { return q.get_str(); }

template <class P>
std::string write_poly(const P& q, const std::vector<MarkedPoint>& marks, const std::vector<AngleAssertion>& angles,
                       bool exact) {
    std::ostringstream out;
    for (const auto& v : q.vertices()) {
        if constexpr (std::is_same_v<P, PolygonQ>)
            out << "v " << format_literal(v.x) << ' ' << format_literal(v.y) << '\n';
        else
            out << "v " << format_number(v.x) << ' ' << format_number(v.y) << '\n';
    }
    for (const auto& a : angles) out << "a " << a.vertex << ' ' << a.angle.num() << ' ' << a.angle.den() << '\n';
    for (const auto& m : marks) {
        if (exact)
            out << "p " << m.name << ' ' << format_literal(m.exact.x) << ' ' << format_literal(m.exact.y) << '\n';
        else
            out << "p " << m.name << ' ' << format_number(m.point.x) << ' ' << format_number(m.point.y) << '\n';
    }
    return out.str();
}

}  // namespace

const MarkedPoint* PolygonFile::mark(const std::string& name) const {
    for (const auto& m : marks)
        if (m.name == name) return &m;
    return nullptr;
}

PolygonFile parse_polygon_file(const std::string& text, const Tolerance& tol) {
    PolygonFile f;
    f.exact = true;
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    auto coord = [&](const std::string& s) {
        if (!is_exact_literal(s)) f.exact = false;
        return number(s, no);
    };
    while (std::getline(in, line)) {
        ++no;
        auto t = tokens(line);
        if (t.empty()) continue;
        if (t[0] == "v") {
            if (t.size() != 3) input_error(no, "expected `v x y`");
            f.literals.push_back({coord(t[1]), coord(t[2])});
        } else if (t[0] == "a") {
            if (t.size() != 4) input_error(no, "expected `a i p q`");
            std::int64_t i = integer(t[1], no), p = integer(t[2], no), q = integer(t[3], no);
            if (i < 0 || q <= 0 || p <= 0) input_error(no, "bad angle assertion");
            f.angles.push_back({static_cast<std::size_t>(i), RationalAngle(p, q)});
        } else if (t[0] == "p") {
            if (t.size() != 4) input_error(no, "expected `p name x y`");
            if (f.mark(t[1])) input_error(no, "duplicate marked point " + t[1]);
            MarkedPoint m;
            m.name = t[1];
            m.exact = {number(t[2], no), number(t[3], no)};
            m.point = to_double(m.exact);
            f.marks.push_back(m);
        } else {
            input_error(no, "unknown record `" + t[0] + "`");
        }
    }
    if (f.literals.empty()) throw GeometryError(ErrorKind::InputError, "no vertices");
    std::vector<Vec2d> vd;
    for (const auto& v : f.literals) vd.push_back(to_double(v));
    f.polygon = PolygonD::validate(vd, tol);
    if (f.exact) f.polygon_exact = PolygonQ::validate(f.literals, tol);

    // Asserted angles refer to the vertex order as written; validation may reverse it.
    const std::size_t n = f.literals.size();
    const bool reversed = f.polygon.vertex(0) != vd[0];
    for (const auto& a : f.angles) {
        if (a.vertex >= n) throw GeometryError(ErrorKind::InputError, "angle assertion for missing vertex " + std::to_string(a.vertex));
        std::size_t k = reversed ? n - 1 - a.vertex : a.vertex;
        double got = f.polygon.interior_angle(k);
        if (std::fabs(got - a.angle.radians()) > 1e-9)
            throw GeometryError(ErrorKind::InputError, "vertex " + std::to_string(a.vertex) + " has angle " +
                                                           format_number(got) + ", asserted " + a.angle.str());
    }
    for (const auto& m : f.marks)
        if (!f.polygon.contains(m.point))
            throw GeometryError(ErrorKind::PointOutsidePolygon, "marked point " + m.name);
    return f;
}

PolygonFile read_polygon_file(const std::string& path, const Tolerance& tol) {
    return parse_polygon_file(read_text_file(path), tol);
}

std::string write_polygon_file(const PolygonQ& q, const std::vector<MarkedPoint>& marks,
                               const std::vector<AngleAssertion>& angles) {
    return write_poly(q, marks, angles, true);
}

std::string write_polygon_file(const PolygonD& q, const std::vector<MarkedPoint>& marks,
                               const std::vector<AngleAssertion>& angles) {
    return write_poly(q, marks, angles, false);
}

std::optional<LatticePoint> CellsFile::mark(const std::string& name) const {
    for (const auto& [n, p] : marks)
        if (n == name) return p;
    return std::nullopt;
}

CellsFile parse_cells_file(const std::string& text) {
    CellsFile f;
    std::istringstream in(text);
    std::string line;
    std::size_t no = 0;
    bool typed = false;
    while (std::getline(in, line)) {
        ++no;
        auto t = tokens(line);
        if (t.empty()) continue;
        if (t[0] == "type") {
            if (t.size() != 2) input_error(no, "expected `type p,q,r`");
            auto ty = parse_coxeter(t[1]);
            if (!ty) input_error(no, "unknown triangle " + t[1]);
            if (!f.cells.empty()) input_error(no, "`type` must precede the cells");
            f.triangle = CoxeterTriangle::make(*ty);
            typed = true;
        } else if (t[0] == "cell") {
            if (t.size() != 4) input_error(no, "expected `cell i j o`");
            Cell c{static_cast<int>(integer(t[1], no)), static_cast<int>(integer(t[2], no)),
                   static_cast<int>(integer(t[3], no))};
            if (c.o < 0 || c.o >= 2 * f.triangle.n) input_error(no, "wedge index out of range");
            f.cells.push_back(c);
        } else if (t[0] == "p") {
            if (t.size() != 4) input_error(no, "expected `p name a b`");
            if (f.mark(t[1])) input_error(no, "duplicate marked point " + t[1]);
            f.marks.push_back({t[1], LatticePoint{integer(t[2], no), integer(t[3], no)}});
        } else {
            input_error(no, "unknown record `" + t[0] + "`");
        }
    }
    if (!typed) f.triangle = CoxeterTriangle::make(CoxeterType::T244);
    if (f.cells.empty()) throw GeometryError(ErrorKind::InputError, "no cells");
    return f;
}

CellsFile read_cells_file(const std::string& path) { return parse_cells_file(read_text_file(path)); }

std::string write_cells_file(const CellsFile& f, const std::string& comment) {
    std::ostringstream out;
    if (!comment.empty()) {
        std::istringstream in(comment);
        std::string line;
        while (std::getline(in, line)) out << "# " << line << '\n';
    }
    out << "type " << coxeter_name(f.triangle.type) << '\n';
    for (const auto& [n, p] : f.marks) out << "p " << n << ' ' << p.a << ' ' << p.b << '\n';
    for (const auto& c : f.cells) out << "cell " << c.i << ' ' << c.j << ' ' << c.o << '\n';
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GeometryError(ErrorKind::InputError, "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GeometryError(ErrorKind::InputError, "cannot write " + path);
    out << text;
    if (!out) throw GeometryError(ErrorKind::InputError, "write failed: " + path);
}

Report& Report::add(const std::string& key, const std::string& value) {
    fields_.emplace_back(key, value);
    return *this;
}

Report& Report::add(const std::string& key, double value) { return add(key, format_number(value)); }

Report& Report::add(const std::string& key, long long value) { return add(key, std::to_string(value)); }

std::string Report::str() const {
    std::ostringstream out;
    out << "[" << title_ << "]\n";
    for (const auto& [k, v] : fields_) out << k << ": " << v << '\n';
    return out.str();
}

std::string format_number(double x) {
    if (x == 0) return "0";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc() ? std::string(buf, p) : std::to_string(x);
}

std::string format_point(const Vec2d& p) { return "(" + format_number(p.x) + ", " + format_number(p.y) + ")"; }

}  // namespace billiards
