#include "nlse/series_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nlse {

namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

std::string series_to_csv(const TimeSeries& series) {
    std::string out = kSeriesHeader;
    out += '\n';
    for (const ObservableRecord& r : series.records) {
        append_number(out, r.t);
        out += ',';
        append_number(out, r.norm);
        out += ',';
        append_number(out, r.x_mean);
        out += ',';
        append_number(out, r.v_mean);
        out += ',';
        append_number(out, r.p_total);
        out += ',';
        append_number(out, r.force_full);
        out += ',';
        append_number(out, r.force_partial);
        out += ',';
        append_number(out, r.dg_violation);
        out += ',';
        if (r.energy) append_number(out, *r.energy);
        out += '\n';
    }
    return out;
}

void emit_series(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw std::runtime_error("emit_series: cannot open '" + path.string() +
                                 "' for writing");
    }
    file << series_to_csv(series);
    if (!file) {
        throw std::runtime_error("emit_series: write failed for '" + path.string() + "'");
    }
}

}  // namespace nlse
