#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "billiards/polygon.h"
#include "billiards/tokarsky.h"

namespace billiards {

struct MarkedPoint {
    std::string name;
    Vec2q exact;  // the literal as written
    Vec2d point;
};

struct AngleAssertion {
    std::size_t vertex = 0;
    RationalAngle angle;
};

// Line format: `v <x> <y>`, `a <i> <p> <q>`, `p <name> <x> <y>`, `#` comments.
struct PolygonFile {
    std::vector<Vec2q> literals;  // vertices as written
    bool exact = false;           // every coordinate literal is an integer or p/q
    PolygonD polygon;
    std::optional<PolygonQ> polygon_exact;
    std::vector<AngleAssertion> angles;
    std::vector<MarkedPoint> marks;

    const MarkedPoint* mark(const std::string& name) const;
};

// Throws GeometryError(InputError) on syntax errors and failed angle assertions,
// and the polygon's own GeometryError when the vertices do not form a valid polygon.
PolygonFile parse_polygon_file(const std::string& text, const Tolerance& tol = {});
PolygonFile read_polygon_file(const std::string& path, const Tolerance& tol = {});

// Exact polygons are written as p/q literals, float polygons with 17 significant digits.
std::string write_polygon_file(const PolygonQ& q, const std::vector<MarkedPoint>& marks = {},
                               const std::vector<AngleAssertion>& angles = {});
std::string write_polygon_file(const PolygonD& q, const std::vector<MarkedPoint>& marks = {},
                               const std::vector<AngleAssertion>& angles = {});

// Line format: `type <p,q,r>`, `cell <i> <j> <o>`, `p <name> <a> <b>` in lattice units, `#` comments.
struct CellsFile {
    CoxeterTriangle triangle;
    std::vector<Cell> cells;
    std::vector<std::pair<std::string, LatticePoint>> marks;

    std::optional<LatticePoint> mark(const std::string& name) const;
};

CellsFile parse_cells_file(const std::string& text);
CellsFile read_cells_file(const std::string& path);
std::string write_cells_file(const CellsFile& f, const std::string& comment = {});

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Plain-text report: one `key: value` line per field, in insertion order.
class Report {
public:
    explicit Report(std::string title) : title_(std::move(title)) {}
    Report& add(const std::string& key, const std::string& value);
    Report& add(const std::string& key, double value);
    Report& add(const std::string& key, long long value);
    Report& add(const std::string& key, std::size_t value) { return add(key, static_cast<long long>(value)); }
    Report& add(const std::string& key, int value) { return add(key, static_cast<long long>(value)); }
    Report& add(const std::string& key, bool value) { return add(key, std::string(value ? "yes" : "no")); }
    Report& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
    const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }
    std::string str() const;

private:
    std::string title_;
    std::vector<std::pair<std::string, std::string>> fields_;
};

std::string format_number(double x);  // shortest round-trip form
std::string format_point(const Vec2d& p);

}  // namespace billiards
