#include "billiards/unfolding.h"

#include <algorithm>
#include <deque>
#include <set>

namespace billiards {

ReflectionGroup::ReflectionGroup(std::vector<DihedralElement> elements, std::vector<DihedralElement> generators)
    : elements_(std::move(elements)), generators_(std::move(generators)) {
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
    for (std::size_t i = 0; i < elements_.size(); ++i) index_[elements_[i]] = static_cast<int>(i);
    const std::size_t n = elements_.size();
    table_.assign(n * n, -1);
    inverse_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) table_[i * n + j] = index_of(compose(elements_[i], elements_[j]));
        inverse_[i] = index_of(elements_[i].inverse());
    }
}

int ReflectionGroup::index_of(const DihedralElement& g) const {
    auto it = index_.find(g);
    return it == index_.end() ? -1 : it->second;
}

ReflectionGroup generate_group(const RationalityWitness& w, std::size_t max_elements) {
    std::vector<DihedralElement> gens;
    for (std::size_t i = 0; i < w.edge_axes.size(); ++i) gens.push_back(edge_reflection(w, i));
    std::set<DihedralElement> seen{DihedralElement::identity()};
    std::deque<DihedralElement> queue{DihedralElement::identity()};
    while (!queue.empty()) {
        auto g = queue.front();
        queue.pop_front();
        for (const auto& s : gens) {
            auto h = compose(g, s);
            if (seen.insert(h).second) {
                if (seen.size() > max_elements)
                    throw GeometryError(ErrorKind::NotRational, "group closure exceeds bound");
                queue.push_back(h);
            }
        }
    }
    return ReflectionGroup({seen.begin(), seen.end()}, gens);
}

template <class T>
UnfoldedSurface<T> UnfoldedSurface<T>::build(const Polygon<T>& q, std::int64_t max_den) {
    UnfoldedSurface S;
    S.base_ = q;
    S.witness_ = require_rational(q, max_den);
    S.group_ = generate_group(S.witness_);
    const int k = static_cast<int>(q.size());
    const int G = static_cast<int>(S.group_.order());
    for (int e = 0; e < k; ++e) S.refl_index_.push_back(S.group_.index_of(S.reflection(e)));

    S.glue_.resize(static_cast<std::size_t>(G) * k);
    for (int g = 0; g < G; ++g)
        for (int e = 0; e < k; ++e) S.glue_[static_cast<std::size_t>(g) * k + e] = {S.group_.mul(g, S.refl_index_[e]), e};

    // corner orbits: alternately cross the outgoing and incoming edge of the vertex
    S.vertex_orbit_.assign(static_cast<std::size_t>(G) * k, -1);
    for (int v = 0; v < k; ++v) {
        const int e_out = v, e_in = (v + k - 1) % k;
        for (int g0 = 0; g0 < G; ++g0) {
            if (S.vertex_orbit_[static_cast<std::size_t>(g0) * k + v] >= 0) continue;
            Singularity s;
            s.vertex = v;
            int g = g0;
            bool out = true;
            do {
                S.vertex_orbit_[static_cast<std::size_t>(g) * k + v] = static_cast<int>(S.sing_.size());
                s.sheets.push_back(g);
                g = S.group_.mul(g, S.refl_index_[out ? e_out : e_in]);
                out = !out;
                S.vertex_orbit_[static_cast<std::size_t>(g) * k + v] = static_cast<int>(S.sing_.size());
                if (std::find(s.sheets.begin(), s.sheets.end(), g) == s.sheets.end()) s.sheets.push_back(g);
                g = S.group_.mul(g, S.refl_index_[out ? e_out : e_in]);
                out = !out;
            } while (g != g0);
            std::sort(s.sheets.begin(), s.sheets.end());
            s.sheet = s.sheets.front();
            s.wedges = static_cast<int>(s.sheets.size());
            const auto& a = S.witness_.angles[v];
            // cone angle = wedges · pπ/q, a multiple of 2π
            std::int64_t num = s.wedges * a.num();
            if (num % (2 * a.den()) != 0) throw GeometryError(ErrorKind::NotRational, "cone angle not a multiple of 2π");
            s.cone_multiple = num / (2 * a.den());
            s.removable = s.cone_multiple == 1;
            S.sing_.push_back(std::move(s));
        }
    }
    return S;
}

template <class T>
bool UnfoldedSurface<T>::gauss_bonnet_holds() const {
    long total = 0;
    for (const auto& s : sing_) total += static_cast<long>(s.cone_multiple) - 1;
    return total == 2 * genus() - 2 && euler_characteristic() % 2 == 0;
}

template <class T>
std::vector<Vec2<T>> UnfoldedSurface<T>::copy_vertices(int sheet) const {
    std::vector<Vec2<T>> out;
    const auto& g = group_[sheet];
    for (const auto& p : base_.vertices()) {
        if constexpr (Scalar<T>::backend == Backend::Exact) out.push_back(apply(g, p));
        else out.push_back(apply(g, p, frame()));
    }
    return out;
}

template <class T>
T UnfoldedSurface<T>::copies_twice_area() const {
    T total{};
    for (int g = 0; g < static_cast<int>(copies()); ++g) {
        auto v = copy_vertices(g);
        T a{};
        for (std::size_t i = 0; i < v.size(); ++i) a += cross(v[i], v[(i + 1) % v.size()]);
        total += sign(a) < 0 ? T(-a) : a;
    }
    return total;
}

template <class T>
bool UnfoldedSurface<T>::gluing_consistent() const {
    const int k = static_cast<int>(base_.size());
    for (int g = 0; g < static_cast<int>(copies()); ++g) {
        auto cv = copy_vertices(g);
        for (int e = 0; e < k; ++e) {
            EdgeSlot s{g, e};
            EdgeSlot p = glued(s);
            if (p == s || !(glued(p) == s) || p.edge != e) return false;
            auto pv = copy_vertices(p.sheet);
            Vec2<T> a = cv[(e + 1) % k] - cv[e];
            Vec2<T> b = pv[(e + 1) % k] - pv[e];
            if constexpr (Scalar<T>::backend == Backend::Exact) {
                if (!(a == b)) return false;
            } else {
                if (norm(a - b) > 1e-12 * (1.0 + norm(a))) return false;
            }
        }
    }
    return true;
}

template <class T>
SurfacePoint<T> UnfoldedSurface<T>::lift_point(const Vec2<T>& a, const DihedralElement& g) const {
    int gi = group_.index_of(g);
    if (gi < 0) throw std::invalid_argument("sheet " + g.str() + " is not in the group");
    auto loc = base_.locate(a);
    switch (loc.where) {
        case Location::Outside:
            throw GeometryError(ErrorKind::PointOutsidePolygon, "point is not in the polygon");
        case Location::Interior:
            return {a, g};
        case Location::Edge: {
            EdgeSlot p = glued({gi, loc.index});
            return {a, std::min(g, group_[p.sheet])};
        }
        case Location::Vertex: {
            const auto& s = sing_[singularity_of(loc.index, gi)];
            return {base_.vertex(loc.index), group_[s.sheet]};
        }
    }
    return {a, g};
}

template <class T>
SurfacePoint<T> UnfoldedSurface<T>::group_action(const DihedralElement& g, const SurfacePoint<T>& x) const {
    return lift_point(x.base, compose(g, x.sheet));
}

template <class T>
std::vector<SurfacePoint<T>> UnfoldedSurface<T>::fiber(const Vec2<T>& a) const {
    std::vector<SurfacePoint<T>> out;
    for (const auto& g : group_.elements()) {
        auto p = lift_point(a, g);
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
}

DihedralElement twist_through_removable(std::int64_t n) { return twist(n); }

template class UnfoldedSurface<double>;
template class UnfoldedSurface<Rational>;

}  // namespace billiards
