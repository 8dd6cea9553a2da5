#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <map>
#include <numbers>
#include <random>

#include "billiards/tokarsky.h"

namespace billiards {

namespace {

// Tiles of a window with the incidence data needed for local energy updates.
struct Window {
    std::vector<Cell> tiles;
    std::vector<std::array<int, 3>> tile_verts;
    std::vector<std::array<int, 3>> tile_edges;
    std::vector<LatticePoint> verts;
    std::vector<VertexType> vtype;
    std::vector<std::vector<int>> slots;  // tile per wedge slot around the vertex, -1 outside the window
    std::vector<std::array<int, 2>> edge_tiles;
    std::map<Cell, int> index;

    Window(const CoxeterTriangle& tri, int i0, int i1, int j0, int j1) {
        std::map<LatticePoint, int> vid;
        std::map<std::pair<int, int>, int> eid;
        for (int i = i0; i <= i1; ++i)
            for (int j = j0; j <= j1; ++j)
                for (int o = 0; o < 2 * tri.n; ++o) {
                    int id = static_cast<int>(tiles.size());
                    tiles.push_back({i, j, o});
                    index[{i, j, o}] = id;
                    auto t = tri.tile(i, j, o);
                    std::array<int, 3> tv{};
                    for (int e = 0; e < 3; ++e) {
                        auto [it, fresh] = vid.emplace(t[e], static_cast<int>(verts.size()));
                        if (fresh) verts.push_back(t[e]);
                        tv[e] = it->second;
                    }
                    tile_verts.push_back(tv);
                    std::array<int, 3> te{};
                    for (int e = 0; e < 3; ++e) {
                        int a = tv[e], b = tv[(e + 1) % 3];
                        auto key = std::minmax(a, b);
                        auto [it, fresh] = eid.emplace(std::pair<int, int>{key.first, key.second},
                                                       static_cast<int>(edge_tiles.size()));
                        if (fresh) edge_tiles.push_back({id, -1});
                        else edge_tiles[it->second][1] = id;
                        te[e] = it->second;
                    }
                    tile_edges.push_back(te);
                }
        vtype.resize(verts.size());
        slots.resize(verts.size());
        for (std::size_t v = 0; v < verts.size(); ++v) {
            vtype[v] = tri.vertex_type(verts[v]);
            int full = vtype[v] == VertexType::A ? 2 * tri.n
                       : vtype[v] == VertexType::B ? 2 * tri.n / tri.m
                                                   : 2 * tri.n / (tri.n - 1 - tri.m);
            slots[v].assign(full, -1);
        }
        // centroids around a vertex sit at ref + k·wedge; slot k keeps the cyclic order
        std::vector<std::vector<std::pair<double, int>>> around(verts.size());
        for (int id = 0; id < static_cast<int>(tiles.size()); ++id) {
            auto t = tri.tile(tiles[id].i, tiles[id].j, tiles[id].o);
            Vec2d c = (tri.real(t[0]) + tri.real(t[1]) + tri.real(t[2])) / 3.0;
            for (int e = 0; e < 3; ++e) {
                Vec2d d = c - tri.real(t[e]);
                around[tile_verts[id][e]].push_back({std::atan2(d.y, d.x), id});
            }
        }
        for (std::size_t v = 0; v < verts.size(); ++v) {
            const int full = static_cast<int>(slots[v].size());
            const double wedge = 2 * std::numbers::pi / full;
            const double ref = around[v].front().first;
            for (const auto& [ang, id] : around[v]) {
                long s = std::lround((ang - ref) / wedge);
                slots[v][((s % full) + full) % full] = id;
            }
        }
    }
};

struct VertexTerm {
    int corners = 0;
    int bad = 0;     // B/C vertex that is not a corner
    int pinch = 0;   // extra boundary arcs
};

class Annealer {
public:
    Annealer(const CoxeterTriangle& tri, const Window& w, std::vector<int> fixed, std::size_t max_cells,
             std::uint64_t seed)
        : tri_(tri), w_(w), fixed_(w.tiles.size(), 0), in_(w.tiles.size(), 0), rng_(seed), max_cells_(max_cells) {
        for (int t : fixed) fixed_[t] = 1;
        vcount_.assign(w.verts.size(), 0);
        ecount_.assign(w.edge_tiles.size(), 0);
        term_.assign(w.verts.size(), {});
    }

    void reset(const std::vector<int>& start) {
        std::fill(in_.begin(), in_.end(), 0);
        std::fill(vcount_.begin(), vcount_.end(), 0);
        std::fill(ecount_.begin(), ecount_.end(), 0);
        std::fill(term_.begin(), term_.end(), VertexTerm{});
        corners_ = bad_ = pinch_ = 0;
        V_ = E_ = F_ = 0;
        for (int t : start)
            if (!in_[t]) toggle(t);
    }

    double energy() const {
        long chi = static_cast<long>(V_) - static_cast<long>(E_) + static_cast<long>(F_);
        return corners_ + 6.0 * bad_ + 20.0 * pinch_ + 20.0 * std::labs(1 - chi);
    }
    bool valid() const { return bad_ == 0 && pinch_ == 0 && V_ - E_ + F_ == 1; }
    int corners() const { return corners_; }
    std::size_t cells() const { return F_; }
    std::vector<Cell> state() const {
        std::vector<Cell> out;
        for (std::size_t t = 0; t < in_.size(); ++t)
            if (in_[t]) out.push_back(w_.tiles[t]);
        return out;
    }

    // One annealing run; calls record() whenever the state is valid.
    template <class Record>
    void run(std::size_t steps, double t0, double t1, Record record) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(w_.tiles.size()) - 1);
        std::uniform_real_distribution<double> U(0, 1);
        double e = energy();
        for (std::size_t s = 0; s < steps; ++s) {
            double T = t0 * std::pow(t1 / t0, static_cast<double>(s) / static_cast<double>(steps));
            int t = pick(rng_);
            if (U(rng_) < 0.3 && bad_ + pinch_ > 0) {
                // repair move: a tile at a vertex that violates the corner rule
                std::vector<int> viol;
                for (std::size_t v = 0; v < term_.size(); ++v)
                    if (term_[v].bad || term_[v].pinch) viol.push_back(static_cast<int>(v));
                const auto& sl = w_.slots[viol[static_cast<std::size_t>(U(rng_) * viol.size()) % viol.size()]];
                t = sl[static_cast<std::size_t>(U(rng_) * sl.size()) % sl.size()];
                if (t < 0) continue;
            }
            if (fixed_[t]) continue;
            // single toggles, or a tile together with an edge neighbour to cross pinch barriers
            int u = -1;
            if (U(rng_) < 0.5) {
                u = neighbour(t, static_cast<int>(U(rng_) * 3) % 3);
                if (u < 0 || fixed_[u]) u = -1;
            }
            if (!in_[t] && !touches(t) && (u < 0 || !(in_[u] || touches(u)))) continue;
            toggle(t);
            if (u >= 0) toggle(u);
            if (F_ > max_cells_ || !connected()) {
                if (u >= 0) toggle(u);
                toggle(t);
                continue;
            }
            double e2 = energy();
            if (e2 <= e || U(rng_) < std::exp((e - e2) / T)) {
                e = e2;
                if (valid()) record(*this);
            } else {
                if (u >= 0) toggle(u);
                toggle(t);
            }
        }
    }

private:
    VertexTerm evaluate(int v) const {
        VertexTerm r;
        const auto& sl = w_.slots[v];
        const int full = static_cast<int>(sl.size());
        int present = 0;
        for (int t : sl) present += t >= 0 && in_[t];
        if (present == 0) return r;
        const bool nonA = w_.vtype[v] != VertexType::A;
        if (present == full) {
            r.bad = nonA;
            return r;
        }
        int runs = 0;
        for (int s = 0; s < full; ++s) {
            int t = sl[s], p = sl[(s + full - 1) % full];
            bool here = t >= 0 && in_[t], before = p >= 0 && in_[p];
            if (!here || before) continue;
            ++runs;
            int len = 0;
            for (int k = s; len < full; k = (k + 1) % full) {
                int u = sl[k];
                if (!(u >= 0 && in_[u])) break;
                ++len;
            }
            if (2 * len == full) r.bad += nonA;
            else ++r.corners;
        }
        r.pinch = runs - 1;
        return r;
    }

    void toggle(int t) {
        const int delta = in_[t] ? -1 : 1;
        in_[t] = static_cast<char>(!in_[t]);
        F_ += delta;
        for (int e : w_.tile_edges[t]) {
            if (ecount_[e] == 0 && delta > 0) ++E_;
            ecount_[e] += delta;
            if (ecount_[e] == 0 && delta < 0) --E_;
        }
        for (int v : w_.tile_verts[t]) {
            if (vcount_[v] == 0 && delta > 0) ++V_;
            vcount_[v] += delta;
            if (vcount_[v] == 0 && delta < 0) --V_;
            corners_ -= term_[v].corners;
            bad_ -= term_[v].bad;
            pinch_ -= term_[v].pinch;
            term_[v] = evaluate(v);
            corners_ += term_[v].corners;
            bad_ += term_[v].bad;
            pinch_ += term_[v].pinch;
        }
    }

    int neighbour(int t, int e) const {
        const auto& et = w_.edge_tiles[w_.tile_edges[t][e]];
        return et[0] == t ? et[1] : et[0];
    }

    bool touches(int t) const {
        for (int e = 0; e < 3; ++e) {
            int u = neighbour(t, e);
            if (u >= 0 && in_[u]) return true;
        }
        return false;
    }

    bool connected() const {
        int start = -1;
        std::size_t total = 0;
        for (std::size_t x = 0; x < in_.size(); ++x)
            if (in_[x]) {
                ++total;
                if (start < 0) start = static_cast<int>(x);
            }
        if (start < 0) return false;
        std::vector<char> seen(in_.size(), 0);
        std::deque<int> q{start};
        seen[start] = 1;
        std::size_t reached = 0;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            ++reached;
            for (int e = 0; e < 3; ++e) {
                int y = neighbour(x, e);
                if (y < 0 || !in_[y] || seen[y]) continue;
                seen[y] = 1;
                q.push_back(y);
            }
        }
        return reached == total;
    }

    const CoxeterTriangle& tri_;
    const Window& w_;
    std::vector<char> fixed_, in_;
    std::vector<int> vcount_, ecount_;
    std::vector<VertexTerm> term_;
    int corners_ = 0, bad_ = 0, pinch_ = 0;
    std::size_t V_ = 0, E_ = 0, F_ = 0;
    std::mt19937_64 rng_;
    std::size_t max_cells_;
};

// Shortest chain of edge-adjacent window tiles from one set to another.
std::vector<int> corridor(const Window& w, const std::vector<int>& from, const std::vector<int>& to) {
    std::vector<int> prev(w.tiles.size(), -2);
    std::deque<int> q;
    for (int t : from) {
        prev[t] = -1;
        q.push_back(t);
    }
    std::vector<char> goal(w.tiles.size(), 0);
    for (int t : to) goal[t] = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        if (goal[u]) {
            std::vector<int> path;
            for (int x = u; x >= 0; x = prev[x]) path.push_back(x);
            return path;
        }
        for (int e = 0; e < 3; ++e) {
            const auto& et = w.edge_tiles[w.tile_edges[u][e]];
            int x = et[0] == u ? et[1] : et[0];
            if (x < 0 || prev[x] != -2) continue;
            prev[x] = u;
            q.push_back(x);
        }
    }
    return {};
}

}  // namespace

std::vector<SearchResult> search_min_edges(const CoxeterTriangle& tri, const SearchBudget& budget) {
    std::vector<SearchResult> results;
    const int k = 2 * tri.n;
    if (budget.max_cells < static_cast<std::size_t>(2 * k)) return results;  // two full stars do not fit
    std::mt19937_64 seeder(budget.seed);
    // best cell count per edge count, over all offsets
    std::map<std::size_t, std::pair<std::vector<Cell>, std::pair<int, int>>> best;
    for (const auto& [di, dj] : budget.offsets) {
        if (di == 0 && dj == 0) continue;
        const int m = budget.margin;
        Window w(tri, std::min(0, di) - m, std::max(0, di) + m, std::min(0, dj) - m, std::max(0, dj) + m);
        std::vector<int> s1, s2;
        for (int o = 0; o < k; ++o) {
            s1.push_back(w.index.at({0, 0, o}));
            s2.push_back(w.index.at({di, dj, o}));
        }
        std::vector<int> fixed = s1;
        fixed.insert(fixed.end(), s2.begin(), s2.end());
        auto path = corridor(w, s1, s2);
        std::vector<int> start = fixed;
        start.insert(start.end(), path.begin(), path.end());
        for (std::size_t r = 0; r < budget.restarts; ++r) {
            Annealer an(tri, w, fixed, budget.max_cells, seeder());
            an.reset(start);
            an.run(budget.steps, 3.0, 0.05, [&](const Annealer& a) {
                auto e = static_cast<std::size_t>(a.corners());
                auto it = best.find(e);
                if (it == best.end() || a.cells() < it->second.first.size())
                    best[e] = {a.state(), {di, dj}};
            });
        }
    }
    std::size_t min_cells = std::numeric_limits<std::size_t>::max();
    for (const auto& [edges, entry] : best) {
        const auto& [cells, off] = entry;
        if (cells.size() >= min_cells) continue;
        try {
            auto P = TiledPolygon::compose(tri, cells);
            auto [b1, b2] = tri.star_lattice();
            LatticePoint p1{0, 0}, p2 = b1 * off.first + b2 * off.second;
            CertifyOptions co;
            co.search_on_failure = false;
            auto cert = certify(P, tri.real(p1), tri.real(p2), co);
            if (!cert.valid || P.edge_count() != edges) continue;
            min_cells = cells.size();
            results.push_back({edges, std::move(P), p1, p2, std::move(cert)});
        } catch (const GeometryError&) {
        }
    }
    return results;
}

}  // namespace billiards
