#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "drainage/dynamics.hpp"

namespace drainage {

using SpatialVec = std::array<std::int64_t, kMaxDim - 1>;

/// Spatial part (first d-1 coordinates) of a - b.
SpatialVec spatial_gap(const LatticePoint& a, const LatticePoint& b);
bool is_zero(const SpatialVec& v);

/// Per-renewal data: step count tau_l, step gap sigma_l, level T_l and
/// the walker positions (all at a common level).
struct RegenRecord {
    long l = 0;
    long tau = 0;
    long sigma = 0;
    std::int64_t T = 0;
    std::vector<LatticePoint> positions;

    /// Z_l for a two-walker record: spatial gap of walker 0 over walker 1.
    SpatialVec pair_gap() const { return spatial_gap(positions[0], positions[1]); }
};

/// The joint exploration of k walkers: every walker sitting at the
/// minimal level advances by one successor step, the others wait.
/// Renewals are the steps where all levels coincide (equivalently the
/// history region is empty). Walkers landing on a common vertex are
/// merged for good since the successor depends on the vertex alone.
class JointProcess {
public:
    JointProcess(const Environment& env, std::vector<LatticePoint> starts);

    void step();

    long step_count() const { return step_; }
    std::int64_t min_level() const { return r_; }
    std::int64_t max_level() const { return s_; }
    const std::vector<LatticePoint>& positions() const { return positions_; }

    /// True after a step at which all walker levels coincide.
    bool at_renewal() const { return step_ > 0 && r_ == s_; }
    /// Levels advanced since the common start level.
    std::int64_t levels_elapsed() const { return r_ - start_level_; }
    bool fully_coalesced() const;

    /// The active history region Delta_n: for each walker whose last
    /// exploration cone still pokes above the current minimal level, the
    /// trapezoid of that cone between the levels (r_n, jump top]. For
    /// two walkers this is at most one trapezoid, the paper's object;
    /// it is empty exactly at renewals.
    std::vector<Trapezoid> history() const;

    /// Walker moves made by the latest step: (walker, origin, jump height).
    struct Advance {
        int walker;
        LatticePoint from;
        std::int64_t jump;
    };
    const std::vector<Advance>& last_advances() const { return last_advances_; }

private:
    const Environment& env_;
    std::vector<LatticePoint> positions_;
    // Last jump per walker: the cone base it scanned from and the level
    // it landed on. Empty until the walker first moves.
    struct Jump {
        LatticePoint base;
        std::int64_t top = 0;
    };
    std::vector<std::optional<Jump>> last_jump_;
    std::vector<Advance> last_advances_;
    std::int64_t start_level_ = 0;
    std::int64_t r_ = 0, s_ = 0;
    long step_ = 0;

    void refresh_levels();
};

/// Runs the joint process, emitting a RegenRecord at every renewal until
/// L renewals have occurred or all walkers have coalesced.
std::vector<RegenRecord> run_regenerations(const Environment& env,
                                           const std::vector<LatticePoint>& starts,
                                           long L);

/// Streaming variant: on_renewal returns false to stop.
void run_joint(const Environment& env, const std::vector<LatticePoint>& starts,
               const std::function<bool(const RegenRecord&)>& on_renewal);

/// First renewal at which the walkers have merged, with level cap.
struct CoalescenceRecord {
    long n_steps = 0;          // renewal index of coalescence
    std::int64_t T_at_coalescence = 0;
    bool hit_cap = false;      // censored: ran past t_cap without merging
};

/// Two walkers from (x_offset,0) and (0,0) in d=2; renewals until the
/// gap hits zero or the level exceeds t_cap.
CoalescenceRecord pair_coalescence(const ModelParams& params, std::int64_t x_offset,
                                   std::int64_t t_cap);

/// Three walkers from (x,0), (y,0), (z,0), x < y < z.
struct TripleResult {
    CoalescenceRecord record;       // n_{x,y,z} and its level
    std::int64_t nu = 0;            // first collision level of a pair
    bool nu_found = false;
    std::vector<std::int64_t> T;    // renewal level sequence T_l^{x,y,z}
    std::int64_t T1 = 0;            // first renewal level
};
TripleResult triple_collision(const ModelParams& params, std::int64_t x, std::int64_t y,
                              std::int64_t z, std::int64_t t_cap);

/// Two walkers traced in independent environments (distinct seeds).
/// Simultaneous renewal levels are the common values of the two level
/// sequences, and psi_l the per-renewal spatial displacements.
struct IndependentPairRecord {
    PathRecord path_u, path_v;
    std::vector<std::int64_t> T;    // T^IND_l, levels above the start level
    std::vector<long> N_u, N_v;     // path step indices at each renewal
    std::vector<SpatialVec> psi_u, psi_v;
};
IndependentPairRecord independent_pair(const ModelParams& params, std::uint64_t seed_v,
                                       const LatticePoint& u, const LatticePoint& v,
                                       long L);

}  // namespace drainage
