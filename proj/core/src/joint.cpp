#include "drainage/joint.hpp"

#include <algorithm>
#include <stdexcept>

namespace drainage {

SpatialVec spatial_gap(const LatticePoint& a, const LatticePoint& b) {
    SpatialVec v{};
    for (int i = 0; i < a.d - 1; ++i) v[i] = a.c[i] - b.c[i];
    return v;
}

bool is_zero(const SpatialVec& v) {
    for (auto x : v)
        if (x != 0) return false;
    return true;
}

JointProcess::JointProcess(const Environment& env, std::vector<LatticePoint> starts)
    : env_(env), positions_(std::move(starts)) {
    if (positions_.empty()) throw std::invalid_argument("JointProcess: no walkers");
    start_level_ = positions_.front().level();
    for (const auto& p : positions_) {
        if (p.d != env.params().d)
            throw std::invalid_argument("JointProcess: walker dimension mismatch");
        if (p.level() != start_level_)
            throw std::invalid_argument("JointProcess: walkers must share the start level");
    }
    last_jump_.resize(positions_.size());
    refresh_levels();
}

void JointProcess::refresh_levels() {
    r_ = s_ = positions_.front().level();
    for (const auto& p : positions_) {
        r_ = std::min(r_, p.level());
        s_ = std::max(s_, p.level());
    }
}

void JointProcess::step() {
    last_advances_.clear();
    // Merged walkers share a vertex; compute each distinct successor once.
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        if (positions_[i].level() != r_) continue;
        SuccessorResult res;
        bool cached = false;
        for (const auto& adv : last_advances_) {
            if (adv.from == positions_[i]) {
                res = SuccessorResult{positions_[static_cast<std::size_t>(adv.walker)],
                                      adv.jump};
                cached = true;
                break;
            }
        }
        if (!cached) res = successor(env_, positions_[i]);
        last_advances_.push_back(Advance{static_cast<int>(i), positions_[i], res.level_jump});
        last_jump_[i] = Jump{positions_[i], res.next.level()};
        positions_[i] = res.next;
    }
    refresh_levels();
    ++step_;
}

bool JointProcess::fully_coalesced() const {
    for (std::size_t i = 1; i < positions_.size(); ++i)
        if (positions_[i] != positions_.front()) return false;
    return true;
}

std::vector<Trapezoid> JointProcess::history() const {
    std::vector<Trapezoid> out;
    for (const auto& j : last_jump_) {
        if (!j || j->top <= r_) continue;
        out.push_back(Trapezoid{j->base, r_ - j->base.level(), j->top - j->base.level()});
    }
    return out;
}

void run_joint(const Environment& env, const std::vector<LatticePoint>& starts,
               const std::function<bool(const RegenRecord&)>& on_renewal) {
    JointProcess proc(env, starts);
    RegenRecord rec;
    long last_tau = 0;
    while (true) {
        proc.step();
        if (!proc.at_renewal()) continue;
        rec.l += 1;
        rec.tau = proc.step_count();
        rec.sigma = rec.tau - last_tau;
        last_tau = rec.tau;
        rec.T = proc.levels_elapsed();
        rec.positions = proc.positions();
        if (!on_renewal(rec)) return;
    }
}

std::vector<RegenRecord> run_regenerations(const Environment& env,
                                           const std::vector<LatticePoint>& starts,
                                           long L) {
    std::vector<RegenRecord> out;
    if (L < 1) return out;
    run_joint(env, starts, [&](const RegenRecord& rec) {
        out.push_back(rec);
        if (rec.l >= L) return false;
        // A fully merged set of walkers renews every step from here on;
        // stop early (never applies to a single walker).
        bool merged = rec.positions.size() > 1;
        for (std::size_t i = 1; i < rec.positions.size(); ++i)
            if (rec.positions[i] != rec.positions.front()) merged = false;
        return !merged;
    });
    return out;
}

CoalescenceRecord pair_coalescence(const ModelParams& params, std::int64_t x_offset,
                                   std::int64_t t_cap) {
    if (params.d != 2) throw std::invalid_argument("pair_coalescence: d=2 only");
    if (x_offset < 1) throw std::invalid_argument("pair_coalescence: x_offset >= 1");
    Environment env(params);
    CoalescenceRecord out;
    run_joint(env, {LatticePoint{x_offset, 0}, LatticePoint{0, 0}},
              [&](const RegenRecord& rec) {
                  if (is_zero(rec.pair_gap())) {
                      out = CoalescenceRecord{rec.l, rec.T, false};
                      return false;
                  }
                  if (rec.T > t_cap) {
                      out = CoalescenceRecord{rec.l, rec.T, true};
                      return false;
                  }
                  return true;
              });
    return out;
}

namespace {

// First common vertex level of two paths started at level 0. Paths share
// every vertex from the merge on, so the first common knot is the meet.
std::optional<std::int64_t> first_shared_level(const PathRecord& a, const PathRecord& b) {
    std::size_t i = 0, j = 0;
    while (i < a.vertices.size() && j < b.vertices.size()) {
        const auto& va = a.vertices[i];
        const auto& vb = b.vertices[j];
        if (va == vb) return va.level();
        if (va.level() < vb.level())
            ++i;
        else if (vb.level() < va.level())
            ++j;
        else {
            ++i;
            ++j;
        }
    }
    return std::nullopt;
}

}  // namespace

TripleResult triple_collision(const ModelParams& params, std::int64_t x, std::int64_t y,
                              std::int64_t z, std::int64_t t_cap) {
    if (params.d != 2) throw std::invalid_argument("triple_collision: d=2 only");
    if (!(x < y && y < z)) throw std::invalid_argument("triple_collision: need x < y < z");
    Environment env(params);
    TripleResult out;
    run_joint(env, {LatticePoint{x, 0}, LatticePoint{y, 0}, LatticePoint{z, 0}},
              [&](const RegenRecord& rec) {
                  out.T.push_back(rec.T);
                  if (rec.l == 1) out.T1 = rec.T;
                  const SpatialVec gxy = spatial_gap(rec.positions[1], rec.positions[0]);
                  const SpatialVec gyz = spatial_gap(rec.positions[2], rec.positions[1]);
                  if (is_zero(gxy) || is_zero(gyz)) {
                      out.record = CoalescenceRecord{rec.l, rec.T, false};
                      return false;
                  }
                  if (rec.T > t_cap) {
                      out.record = CoalescenceRecord{rec.l, rec.T, true};
                      return false;
                  }
                  return true;
              });
    if (!out.record.hit_cap) {
        // nu: the first level at which the interpolants of an adjacent
        // pair meet. In this lattice model that is the level of the first
        // shared vertex (paths meet only at knots; see the non-crossing
        // argument), so scan the traced vertices directly.
        const std::int64_t horizon = out.record.T_at_coalescence;
        PathRecord pa = trace(env, LatticePoint{x, 0}, horizon);
        PathRecord pb = trace(env, LatticePoint{y, 0}, horizon);
        PathRecord pc = trace(env, LatticePoint{z, 0}, horizon);
        auto mxy = first_shared_level(pa, pb);
        auto myz = first_shared_level(pb, pc);
        std::optional<std::int64_t> nu;
        if (mxy) nu = *mxy;
        if (myz && (!nu || *myz < *nu)) nu = *myz;
        if (nu) {
            out.nu = *nu;
            out.nu_found = true;
        }
    }
    return out;
}

IndependentPairRecord independent_pair(const ModelParams& params, std::uint64_t seed_v,
                                       const LatticePoint& u, const LatticePoint& v,
                                       long L) {
    if (u.level() != v.level())
        throw std::invalid_argument("independent_pair: starts must share the level");
    Environment env_u(params);
    ModelParams pv = params;
    pv.seed = seed_v;
    Environment env_v(pv);

    IndependentPairRecord rec;
    rec.path_u.start = u;
    rec.path_u.vertices.push_back(u);
    rec.path_v.start = v;
    rec.path_v.vertices.push_back(v);

    std::size_t i = 0, j = 0;  // knot cursors
    long found = 0;
    long last_nu = 0, last_nv = 0;
    const std::int64_t base = u.level();
    while (found < L) {
        // Extend whichever path is behind, then look for a common level.
        const std::int64_t lu = rec.path_u.vertices[i].level();
        const std::int64_t lv = rec.path_v.vertices[j].level();
        if (lu == lv && (i > 0 || j > 0)) {
            ++found;
            rec.T.push_back(lu - base);
            rec.N_u.push_back(static_cast<long>(i));
            rec.N_v.push_back(static_cast<long>(j));
            rec.psi_u.push_back(spatial_gap(rec.path_u.vertices[i],
                                            rec.path_u.vertices[static_cast<std::size_t>(last_nu)]));
            rec.psi_v.push_back(spatial_gap(rec.path_v.vertices[j],
                                            rec.path_v.vertices[static_cast<std::size_t>(last_nv)]));
            last_nu = static_cast<long>(i);
            last_nv = static_cast<long>(j);
            if (found >= L) break;
        }
        if (lu <= lv) {
            if (i + 1 == rec.path_u.vertices.size())
                rec.path_u.vertices.push_back(
                    successor(env_u, rec.path_u.vertices.back()).next);
            ++i;
        } else {
            if (j + 1 == rec.path_v.vertices.size())
                rec.path_v.vertices.push_back(
                    successor(env_v, rec.path_v.vertices.back()).next);
            ++j;
        }
    }
    return rec;
}

}  // namespace drainage
