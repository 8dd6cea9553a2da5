#include "billiards/illumination.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace billiards {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Sample {
    double theta = 0.0;
    Trajectory<double> tr;
};

bool same_event(const Bounce<double>& x, const Bounce<double>& y) {
    return x.edge == y.edge && x.vertex == y.vertex;
}

double segment_distance(const Vec2d& s, const Vec2d& d, double len, const Vec2d& p, double skip_before) {
    Vec2d r = p - s;
    double along = std::clamp(dot(r, d), skip_before, std::max(skip_before, len));
    return norm(s + d * along - p);
}

// Developing data of the first `seg` events: sheet matrix and offset for segment `seg`.
struct Developed {
    Mat2<double> m;
    Vec2d c;
};

Developed develop_prefix(const Trajectory<double>& tr, std::size_t seg, const DihedralElement& start_sheet,
                         double frame) {
    DihedralElement tau = start_sheet;
    Mat2<double> M = matrix(tau, frame);
    Vec2d c{0, 0};
    for (std::size_t i = 0; i < seg; ++i) {
        const auto& b = tr.bounces[i];
        DihedralElement next = compose(tau, b.g);
        Mat2<double> N = matrix(next, frame);
        Vec2d diff = apply_matrix(Mat2<double>{M[0] - N[0], M[1] - N[1], M[2] - N[2], M[3] - N[3]}, b.q);
        c = c + diff;
        tau = next;
        M = N;
    }
    return {M, c};
}

DihedralElement end_word(const Trajectory<double>& tr, const DihedralElement& start_sheet) {
    DihedralElement tau = start_sheet;
    for (const auto& b : tr.bounces) tau = compose(tau, b.g);
    return tau;
}

class Sweeper {
public:
    Sweeper(const UnfoldedSurface<double>& m, const Vec2d& a, const Vec2d& b, const SearchOptions& opt,
            const DihedralElement& sheet)
        : m_(m), a_(a), b_(b), opt_(opt), sheet_(sheet), inv_(matrix(sheet.inverse(), m.frame())) {
        shoot_opt_.max_length = opt.length;
        shoot_opt_.policy = opt.policy;
        tol_ = opt.connect_tolerance * opt.length;
        self_ = norm(a - b) <= tol_;
        dev_a_ = apply(sheet, a, m.frame());
    }

    IlluminationReport run() {
        IlluminationReport rep;
        rep.a = a_;
        rep.b = b_;
        rep.options = opt_;
        rep.closest_approach = std::numeric_limits<double>::infinity();
        const std::size_t N = opt_.samples;
        Sample first = trace(angle(0));
        account(first, rep);
        Sample prev = first;
        for (std::size_t k = 1; k <= N; ++k) {
            Sample cur = (k == N) ? first : trace(angle(k));
            if (k == N) cur.theta += kTwoPi;
            else account(cur, rep);
            compare(prev, cur, rep);
            if (rep.connected && !opt_.collect_all) break;
            if (rep.connections.size() >= opt_.max_connections) break;
            prev = std::move(cur);
        }
        std::stable_sort(rep.connections.begin(), rep.connections.end(),
                         [](const Connection& x, const Connection& y) { return x.trajectory.length() < y.trajectory.length(); });
        return rep;
    }

private:
    double angle(std::size_t k) const {
        return kTwoPi * (static_cast<double>(k) + opt_.phase) / static_cast<double>(opt_.samples);
    }

    Vec2d base_direction(double theta) const {
        return apply_matrix(inv_, Vec2d{std::cos(theta), std::sin(theta)});
    }

    Sample trace(double theta) const {
        Sample s;
        s.theta = theta;
        s.tr = shoot(m_.base(), m_.witness(), PhaseState<double>{a_, base_direction(theta)}, shoot_opt_);
        return s;
    }

    void account(const Sample& s, IlluminationReport& rep) const {
        ++rep.directions_tried;
        if (s.tr.termination == Termination::HitVertex) ++rep.discarded_vertex;
        if (s.tr.termination == Termination::NumericalAmbiguity) ++rep.ambiguous;
        for (std::size_t j = 0; j < s.tr.segments(); ++j) {
            double t0 = s.tr.segment_t0(j);
            double t1 = (j + 1 < s.tr.segments()) ? s.tr.bounces[j].t : s.tr.t_end;
            double skip = (j == 0 && self_) ? tol_ : 0.0;
            double d = segment_distance(s.tr.segment_start(j), s.tr.direction(j), t1 - t0, b_, skip);
            rep.closest_approach = std::min(rep.closest_approach, d);
        }
    }

    // Signed offset of B from segment j and its along-parameter.
    static std::pair<double, double> offset(const Trajectory<double>& tr, std::size_t j, const Vec2d& b) {
        Vec2d r = b - tr.segment_start(j);
        const Vec2d& d = tr.direction(j);
        return {cross(d, r), dot(d, r)};
    }

    static double seg_len(const Trajectory<double>& tr, std::size_t j) {
        double t1 = (j + 1 < tr.segments()) ? tr.bounces[j].t : tr.t_end;
        return t1 - tr.segment_t0(j);
    }

    void compare(const Sample& p, const Sample& q, IlluminationReport& rep) {
        const std::size_t jmax = std::min(p.tr.segments(), q.tr.segments());
        for (std::size_t j = 0; j < jmax; ++j) {
            if (j > 0 && !same_event(p.tr.bounces[j - 1], q.tr.bounces[j - 1])) break;
            auto [f0, u0] = offset(p.tr, j, b_);
            auto [f1, u1] = offset(q.tr, j, b_);
            if ((f0 > 0) == (f1 > 0) && f0 != 0 && f1 != 0) continue;
            const double l0 = seg_len(p.tr, j), l1 = seg_len(q.tr, j);
            const double slack = tol_ + 1e-9 * m_.base().diameter();
            bool in0 = u0 >= -slack && u0 <= l0 + slack;
            bool in1 = u1 >= -slack && u1 <= l1 + slack;
            if (!in0 && !in1) continue;
            if (j == 0 && self_) continue;
            ++rep.candidates;
            refine(p, q, j, rep);
            if (rep.connected && !opt_.collect_all) return;
        }
    }

    // Bisection on the developed offset of the shared prefix, then one verifying trace.
    void refine(const Sample& p, const Sample& q, std::size_t j, IlluminationReport& rep) {
        Developed dv = develop_prefix(p.tr, j, sheet_, m_.frame());
        Vec2d bt = apply_matrix(dv.m, b_) + dv.c - dev_a_;  // B̃ relative to Ã
        if (norm(bt) <= tol_ || norm(bt) > opt_.length + tol_) return;
        auto g = [&](double th) { return cross(Vec2d{std::cos(th), std::sin(th)}, bt); };
        double lo = p.theta, hi = q.theta;
        double glo = g(lo), ghi = g(hi);
        if ((glo > 0) == (ghi > 0) && glo != 0 && ghi != 0) return;
        while (hi - lo > opt_.angle_tolerance) {
            double mid = 0.5 * (lo + hi);
            double gm = g(mid);
            if ((gm > 0) == (glo > 0)) { lo = mid; glo = gm; }
            else { hi = mid; ghi = gm; }
        }
        double th = std::fabs(glo) <= std::fabs(ghi) ? lo : hi;
        if (dot(Vec2d{std::cos(th), std::sin(th)}, bt) <= 0) return;
        ShootOptions<double> so = shoot_opt_;
        so.max_length = std::min(opt_.length, norm(bt) + 4 * tol_ + 1e-9);
        so.targets = {b_};
        so.target_eps = tol_ / m_.base().diameter();
        auto tr = shoot(m_.base(), m_.witness(), PhaseState<double>{a_, base_direction(th)}, so);
        if (tr.termination != Termination::ReachedTarget) return;
        if (self_ && tr.length() <= tol_) return;
        Connection c;
        c.angle = std::fmod(th, kTwoPi);
        c.miss = norm(tr.end - b_);
        c.end_sheet = end_word(tr, sheet_);
        c.trajectory = std::move(tr);
        auto key = std::make_pair(c.trajectory.bounces.size(), std::llround(c.angle * 1e9));
        if (!seen_.insert(key).second) return;
        rep.connected = true;
        rep.connections.push_back(std::move(c));
    }

    const UnfoldedSurface<double>& m_;
    Vec2d a_, b_;
    SearchOptions opt_;
    DihedralElement sheet_;
    Mat2<double> inv_;
    Vec2d dev_a_;
    ShootOptions<double> shoot_opt_;
    double tol_ = 0.0;
    bool self_ = false;
    std::set<std::pair<std::size_t, long long>> seen_;
};

}  // namespace

IlluminationReport illuminate_search(const UnfoldedSurface<double>& m, const Vec2d& a, const Vec2d& b,
                                     const SearchOptions& opt, const DihedralElement& start_sheet) {
    if (!m.base().contains(a) || !m.base().contains(b))
        throw GeometryError(ErrorKind::PointOutsidePolygon, "search endpoints must lie in Q");
    if (opt.samples == 0 || !(opt.length > 0)) throw std::invalid_argument("samples and length must be positive");
    Sweeper s(m, a, b, opt, start_sheet);
    return s.run();
}

double distance_to_trajectory(const Trajectory<double>& t, const Vec2d& p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < t.segments(); ++j) {
        Vec2d s = t.segment_start(j);
        Vec2d e = t.segment_end(j);
        Vec2d d = e - s;
        double L = norm(d);
        if (L == 0) { best = std::min(best, norm(p - s)); continue; }
        best = std::min(best, segment_distance(s, d / L, L, p, 0.0));
    }
    return best;
}

BlockingReport verify_blocking(const UnfoldedSurface<double>& m, const BlockingSet& e, const SearchOptions& opt,
                               double eps, const DihedralElement& start_sheet) {
    for (const auto& p : e.points) {
        if (norm(p - e.a) <= eps || norm(p - e.b) <= eps)
            throw std::invalid_argument("blocking points must differ from A and B");
    }
    SearchOptions o = opt;
    o.collect_all = true;
    BlockingReport rep;
    rep.search = illuminate_search(m, e.a, e.b, o, start_sheet);
    for (const auto& c : rep.search.connections) {
        ++rep.connections_checked;
        bool blocked = false;
        for (const auto& p : e.points)
            if (distance_to_trajectory(c.trajectory, p) <= eps) { blocked = true; break; }
        if (!blocked) {
            rep.consistent = false;
            rep.counterexamples.push_back(c);
        }
    }
    return rep;
}

std::vector<SurfacePoint<double>> lift_blocking_set(const UnfoldedSurface<double>& m, const std::vector<Vec2d>& e) {
    std::vector<SurfacePoint<double>> out;
    for (const auto& p : e)
        for (auto& x : m.fiber(p))
            if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
    return out;
}

namespace {

// Does the geodesic (trajectory with sheets τ·τ_i) pass within eps of a point of K?
bool meets_lifted_set(const UnfoldedSurface<double>& m, const Connection& c, const DihedralElement& tau,
                      const std::set<SurfacePoint<double>>& K, const std::vector<Vec2d>& base_points, double eps) {
    const auto& tr = c.trajectory;
    DihedralElement sheet = tau;
    for (std::size_t j = 0; j < tr.segments(); ++j) {
        if (j > 0) sheet = compose(sheet, tr.bounces[j - 1].g);
        Vec2d s = tr.segment_start(j), e = tr.segment_end(j);
        Vec2d d = e - s;
        double L = norm(d);
        for (const auto& p : base_points) {
            double dist = L == 0 ? norm(p - s) : segment_distance(s, d / L, L, p, 0.0);
            if (dist > eps) continue;
            if (K.count(m.lift_point(p, sheet))) return true;
        }
    }
    return false;
}

}  // namespace

InvarianceReport invariance_check(const UnfoldedSurface<double>& m, const Vec2d& a, const Vec2d& b,
                                  const std::vector<Vec2d>& blockers, const SearchOptions& opt, double eps) {
    InvarianceReport rep;
    const auto& G = m.group();
    auto lifted = lift_blocking_set(m, blockers);
    SearchOptions o = opt;
    o.collect_all = true;
    for (std::size_t ti = 0; ti < G.order(); ++ti) {
        const auto& tau = G[ti];
        // τK; K is a union of fibres so this is K itself, computed through the action
        std::set<SurfacePoint<double>> K;
        for (const auto& x : lifted) K.insert(m.group_action(tau, x));
        auto search = illuminate_search(m, a, b, o, tau);
        std::map<int, PairVerdict> by_gamma;
        for (std::size_t gi = 0; gi < G.order(); ++gi) by_gamma[static_cast<int>(gi)] = {tau, G[gi], 0, 0};
        for (const auto& c : search.connections) {
            // the endpoint lift B̃_γ: canonical sheet of B seen from the last sheet
            auto end = m.lift_point(b, c.end_sheet);
            int gi = G.index_of(end.sheet);
            auto& v = by_gamma[gi];
            ++v.connections;
            bool ok = !blockers.empty() && meets_lifted_set(m, c, tau, K, blockers, eps);
            if (!ok) ++v.violations;
        }
        for (auto& [gi, v] : by_gamma) {
            if (v.connections > 0) rep.dark = false;
            if (v.violations > 0) rep.consistent = false;
            rep.pairs.push_back(v);
        }
    }
    if (blockers.empty()) rep.consistent = rep.dark;
    return rep;
}

}  // namespace billiards
