// CSV serialization of observable time series.
#pragma once

#include <filesystem>
#include <string>

#include "nlse/observables.hpp"

namespace nlse {

inline constexpr const char* kSeriesHeader =
    "t,norm,x_mean,v_mean,p_total,force_full,force_partial,dg_violation,energy";

/// Write one row per sample at full precision (17 significant digits);
/// an absent energy becomes an empty cell. Deterministic byte-for-byte
/// for identical series.
void emit_series(const TimeSeries& series, const std::filesystem::path& path);

std::string series_to_csv(const TimeSeries& series);

}  // namespace nlse
