#pragma once

#include "apch/volmodel.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace apch {

/// Critical values z_k for the sequential homogeneity tests, one per grid
/// length. Calibrated schedules are affine in log-length, z(m) = C + D log m
/// with D <= 0; pointwise maxima of several schedules keep the explicit z
/// vector instead and leave C, D unset. The meta fields pin the Monte Carlo
/// provenance so a schedule file is reproducible.
struct CriticalValueSchedule {
    double C = std::numeric_limits<double>::quiet_NaN();
    double D = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> lengths; // grid lengths m_k, k = 0..K
    std::vector<double> z;            // aligned with lengths

    std::string family;
    ParamVector theta0;
    double r = 1.0;
    double rho = 1.0;
    std::size_t m0 = 0;
    double a = 0.0;
    std::size_t mc_reps = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> sources; // provenance of a composite schedule

    bool affine() const;

    /// z at interval length m: the affine line evaluated at m, or an exact
    /// lookup in `lengths` for composite schedules (throws when absent).
    double z_at_length(std::size_t m) const;

    /// Recomputes z from (C, D) over `lengths`; no-op for composites.
    void refresh_values();
};

std::string serialize_schedule(const CriticalValueSchedule& cv);
CriticalValueSchedule parse_schedule(std::istream& in);
CriticalValueSchedule parse_schedule_string(const std::string& text);
void save_schedule(const std::string& path, const CriticalValueSchedule& cv);
CriticalValueSchedule load_schedule(const std::string& path);

/// Pointwise maximum over a set of schedules sharing grid, r and rho; meta
/// records the source set. A singleton set returns its element unchanged.
CriticalValueSchedule conservative_schedule(const std::vector<CriticalValueSchedule>& schedules);

} // namespace apch
