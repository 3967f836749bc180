#pragma once

#include <string>
#include <vector>

#include "wavecrit/grid.hpp"

namespace wavecrit {

/// Monitored quantities at the end of each slab (and at t = 0).
struct SlabRecord {
    double t = 0.0;
    double energy = 0.0;
    double hs_crit = 0.0;             // ||u||_{H^{s_c}}
    double hs_crit_minus1_ut = 0.0;   // ||u_t||_{H^{s_c - 1}}, zero mode excluded
    double l_dplus1_accum = 0.0;      // ||u||_{L^{d+1}_{t,x}([0, t])}, trapezoid in time
    double morawetz_accum = 0.0;      // int_0^t int |u|^4 / |x| dx ds
    int picard_iters = 0;
    double residual = 0.0;
};

/// Time-indexed snapshots with per-slab records.
///
/// `times`/`states` hold the stored snapshots: every k-th slab boundary plus the
/// last accepted state. `records` has one entry per slab boundary.
struct Trajectory {
    std::vector<double> times;
    std::vector<StatePair> states;
    std::vector<SlabRecord> records;
    bool truncated = false;
    std::string truncation_reason;

    bool empty() const { return states.empty(); }
    const StatePair& final_state() const { return states.back(); }

    void push(double t, StatePair s) {
        times.push_back(t);
        states.push_back(std::move(s));
    }
};

}  // namespace wavecrit
