#include "stpp/serialize.hpp"

#include <ostream>

#include "stpp/catalog.hpp"

namespace stpp {

namespace {

void check_grid(const LagGrid& g, std::size_t n) {
    if (g.cells() != n) throw InputError("surface size does not match its lag grid");
}

}  // namespace

void write_ksurface_csv(std::ostream& out, const KSurface& k) {
    check_grid(k.grid, k.values.size());
    out << "r,t,k_hat,k_poisson,diff\n";
    for (std::size_t a = 0; a < k.n_r(); ++a) {
        for (std::size_t b = 0; b < k.n_t(); ++b) {
            const double r = k.grid.r[a];
            const double t = k.grid.t[b];
            const double ref = cylinder_volume(r, t, k.dim);
            const double v = k.at(a, b);
            out << format_number(r) << ',' << format_number(t) << ',' << format_number(v) << ','
                << format_number(ref) << ',' << format_number(v - ref) << '\n';
        }
    }
}

nlohmann::json ksurface_json(const KSurface& k) {
    nlohmann::json j;
    j["C"] = k.c.to_string();
    j["D"] = k.d.to_string();
    j["scenario"] = to_string(k.scenario);
    j["erosion"] = to_string(k.erosion);
    j["weights_source"] = to_string(k.weights_source);
    if (k.weights_source == WeightsSource::Smoothed) {
        j["smoothing"] = {{"n", k.smooth_n}, {"retention", k.smooth_p}, {"empty_thinnings", k.empty_thinnings}};
    }
    j["d"] = k.dim;
    j["n_r"] = k.n_r();
    j["n_t"] = k.n_t();
    j["seed"] = k.seed ? nlohmann::json(*k.seed) : nlohmann::json(nullptr);
    j["floor_hits"] = k.floor_hits;
    j["empty_cells"] = k.empty_cells;
    j["warnings"] = k.warnings;
    return j;
}

void write_envelope_csv(std::ostream& out, const EnvelopeSet& e) {
    check_grid(e.grid, e.observed.size());
    out << "r,t,observed,lower,upper,exceeds\n";
    const std::size_t nt = e.grid.t.size();
    for (std::size_t a = 0; a < e.grid.r.size(); ++a) {
        for (std::size_t b = 0; b < nt; ++b) {
            const std::size_t c = a * nt + b;
            out << format_number(e.grid.r[a]) << ',' << format_number(e.grid.t[b]) << ','
                << format_number(e.observed[c]) << ',' << format_number(e.lower[c]) << ','
                << format_number(e.upper[c]) << ',' << (e.exceeds[c] ? 1 : 0) << '\n';
        }
    }
}

nlohmann::json envelope_json(const EnvelopeSet& e) {
    nlohmann::json j;
    j["rank_rule"] = to_string(e.rule);
    j["n_sim"] = e.n_sim;
    j["generator"] = e.generator;
    j["seed"] = e.seed;
    j["cells"] = e.exceeds.size();
    j["cells_exceeded"] = e.exceeded_cells();
    j["fraction_exceeded"] = e.exceeded_fraction();
    j["warnings"] = e.warnings;
    j["disclaimer"] = e.disclaimer;
    return j;
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw InputError("csv row width does not match header");
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
        out << '\n';
    }
}

}  // namespace stpp
