#pragma once

#include <map>
#include <vector>

#include "billiards/dihedral.h"
#include "billiards/polygon.h"

namespace billiards {

class ReflectionGroup {
public:
    ReflectionGroup() = default;
    ReflectionGroup(std::vector<DihedralElement> elements, std::vector<DihedralElement> generators);

    std::size_t order() const { return elements_.size(); }
    const std::vector<DihedralElement>& elements() const { return elements_; }
    const std::vector<DihedralElement>& generators() const { return generators_; }
    const DihedralElement& operator[](std::size_t i) const { return elements_[i]; }

    // Index of g, or -1 when g is not in the group.
    int index_of(const DihedralElement& g) const;
    int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * order() + b]; }
    int inv(int a) const { return inverse_[a]; }
    bool contains(const DihedralElement& g) const { return index_of(g) >= 0; }

private:
    std::vector<DihedralElement> elements_;  // sorted, identity first
    std::vector<DihedralElement> generators_;
    std::map<DihedralElement, int> index_;
    std::vector<int> table_;
    std::vector<int> inverse_;
};

// Closure of the edge reflections. Throws NotRational past max_elements.
ReflectionGroup generate_group(const RationalityWitness& w, std::size_t max_elements = 10000);

template <class T>
ReflectionGroup generate_group(const Polygon<T>& q, std::size_t max_elements = 10000) {
    return generate_group(require_rational(q), max_elements);
}

struct EdgeSlot {
    int sheet = 0;  // group index
    int edge = 0;
    bool operator==(const EdgeSlot& o) const { return sheet == o.sheet && edge == o.edge; }
};

struct Singularity {
    int vertex = 0;             // vertex of Q
    int sheet = 0;              // canonical (smallest) sheet in the orbit
    int wedges = 0;             // corner copies around the lift
    std::int64_t cone_multiple = 1;  // cone angle / 2π
    bool removable = false;
    std::vector<int> sheets;    // all sheets whose corner joins this lift
};

template <class T>
struct SurfacePoint {
    Vec2<T> base;
    DihedralElement sheet;
    bool operator==(const SurfacePoint& o) const { return base == o.base && sheet == o.sheet; }
    bool operator<(const SurfacePoint& o) const {
        if (sheet != o.sheet) return sheet < o.sheet;
        if (base.x != o.base.x) return base.x < o.base.x;
        return base.y < o.base.y;
    }
};

template <class T>
class UnfoldedSurface {
public:
    static UnfoldedSurface build(const Polygon<T>& q, std::int64_t max_den = 64);

    const Polygon<T>& base() const { return base_; }
    const RationalityWitness& witness() const { return witness_; }
    const ReflectionGroup& group() const { return group_; }
    std::size_t copies() const { return group_.order(); }
    double frame() const { return witness_.frame; }

    EdgeSlot glued(const EdgeSlot& s) const { return glue_[static_cast<std::size_t>(s.sheet) * base_.size() + s.edge]; }
    const std::vector<Singularity>& singularities() const { return sing_; }
    // Index into singularities() of the lift of vertex v seen from the given sheet.
    int singularity_of(int vertex, int sheet) const { return vertex_orbit_[static_cast<std::size_t>(sheet) * base_.size() + vertex]; }

    DihedralElement reflection(std::size_t edge) const { return edge_reflection(witness_, edge); }
    int reflection_index(std::size_t edge) const { return refl_index_[edge]; }

    long vertices_count() const { return static_cast<long>(sing_.size()); }
    long edges_count() const { return static_cast<long>(copies() * base_.size() / 2); }
    long faces_count() const { return static_cast<long>(copies()); }
    long euler_characteristic() const { return vertices_count() - edges_count() + faces_count(); }
    long genus() const { return (2 - euler_characteristic()) / 2; }
    // Σ (cone_multiple − 1) = 2g − 2.
    bool gauss_bonnet_holds() const;

    // Copy φ_γ(Q) = γQ (v_γ = 0). Exact when γ has an exact matrix.
    std::vector<Vec2<T>> copy_vertices(int sheet) const;
    T copies_twice_area() const;  // Σ |area(γQ)|·2

    // Checks the gluing invariants: involution, no fixed points, parallel equal-length partners.
    bool gluing_consistent() const;

    SurfacePoint<T> lift_point(const Vec2<T>& a, const DihedralElement& g) const;
    SurfacePoint<T> group_action(const DihedralElement& g, const SurfacePoint<T>& x) const;
    std::vector<SurfacePoint<T>> fiber(const Vec2<T>& a) const;

private:
    Polygon<T> base_;
    RationalityWitness witness_;
    ReflectionGroup group_;
    std::vector<int> refl_index_;
    std::vector<EdgeSlot> glue_;
    std::vector<Singularity> sing_;
    std::vector<int> vertex_orbit_;
};

template <class T>
UnfoldedSurface<T> unfold(const Polygon<T>& q, std::int64_t max_den = 64) {
    return UnfoldedSurface<T>::build(q, max_den);
}

DihedralElement twist_through_removable(std::int64_t n);

}  // namespace billiards
