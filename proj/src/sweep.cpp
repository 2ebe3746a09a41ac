// Copyright 2026 The gkpqec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gkpqec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

namespace gkpqec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNormResidualFlag = 1e-5;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_values(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string v = trim(item);
        if (!v.empty()) out.push_back(v);
    }
    return out;
}

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                          "' has non-numeric value '" + v + "'");
    }
}

}  // namespace

double GainMode::gain_for(double eta) const {
    switch (kind) {
        case Kind::None: return 1.0;
        case Kind::PreAmp: return 1.0 / eta;
        default: return explicit_gain;
    }
}

std::string GainMode::name() const {
    switch (kind) {
        case Kind::None: return "none";
        case Kind::PreAmp: return "pre-amp";
        default: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "G=%.6g", explicit_gain);
            return buf;
        }
    }
}

GainMode GainMode::none() { return {Kind::None, 1.0}; }

GainMode GainMode::pre_amp() { return {Kind::PreAmp, 1.0}; }

GainMode GainMode::explicit_gain_of(double gain) {
    if (!(gain >= 1.0)) throw ConfigError("explicit gain must be >= 1");
    return {Kind::Explicit, gain};
}

SweepConfig parse_config(const std::string& text) {
    SweepConfig cfg;
    bool have_epsilon = false;
    bool have_eta = false;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    while (std::getline(ss, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        }
        const std::string key = trim(s.substr(0, eq));
        const std::vector<std::string> values = split_values(s.substr(eq + 1));
        if (values.empty()) {
            throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                              "' has no values");
        }
        auto single = [&]() -> const std::string& {
            if (values.size() != 1) {
                throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                                  "' takes a single value");
            }
            return values[0];
        };
        if (key == "epsilon") {
            cfg.epsilon_values.clear();
            for (const auto& v : values) {
                const double x = parse_double(v, key, line);
                if (!(x > 0.0)) throw ConfigError("key 'epsilon': values must be > 0");
                cfg.epsilon_values.push_back(x);
            }
            have_epsilon = true;
        } else if (key == "eta") {
            cfg.eta_values.clear();
            for (const auto& v : values) {
                const double x = parse_double(v, key, line);
                if (!(x > 0.0) || x > 1.0) throw ConfigError("key 'eta': values must lie in (0, 1]");
                cfg.eta_values.push_back(x);
            }
            have_eta = true;
        } else if (key == "gain_modes") {
            cfg.gain_modes.clear();
            for (const auto& v : values) {
                if (v == "none") {
                    cfg.gain_modes.push_back(GainMode::none());
                } else if (v == "pre-amp") {
                    cfg.gain_modes.push_back(GainMode::pre_amp());
                } else {
                    const double g = parse_double(v, key, line);
                    if (!(g >= 1.0)) throw ConfigError("key 'gain_modes': explicit gain must be >= 1");
                    cfg.gain_modes.push_back(GainMode::explicit_gain_of(g));
                }
            }
        } else if (key == "cutoff_threshold") {
            const double x = parse_double(single(), key, line);
            if (!(x > 0.0)) throw ConfigError("key 'cutoff_threshold': must be > 0");
            cfg.cutoff_threshold = x;
        } else if (key == "points_per_sigma") {
            const double x = parse_double(single(), key, line);
            if (!(x >= 6.0)) throw ConfigError("key 'points_per_sigma': must be >= 6");
            cfg.quadrature.points_per_sigma = x;
        } else if (key == "mass_tol") {
            const double x = parse_double(single(), key, line);
            if (!(x > 0.0)) throw ConfigError("key 'mass_tol': must be > 0");
            cfg.quadrature.mass_tol = x;
        } else if (key == "max_half_width") {
            const double x = parse_double(single(), key, line);
            if (!(x > 0.0)) throw ConfigError("key 'max_half_width': must be > 0");
            cfg.quadrature.max_half_width = x;
        } else if (key == "output") {
            cfg.output_path = single();
        } else if (key == "workers") {
            const double x = parse_double(single(), key, line);
            if (x < 1.0 || x != std::floor(x)) throw ConfigError("key 'workers': must be an integer >= 1");
            cfg.workers = static_cast<int>(x);
        } else {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    if (!have_epsilon || cfg.epsilon_values.empty()) {
        throw ConfigError("config is missing a non-empty 'epsilon' list");
    }
    if (!have_eta || cfg.eta_values.empty()) {
        throw ConfigError("config is missing a non-empty 'eta' list");
    }
    if (cfg.gain_modes.empty()) throw ConfigError("config has an empty 'gain_modes' list");
    return cfg;
}

std::vector<ResultRow> run_sweep(const SweepConfig& config) {
    if (config.epsilon_values.empty() || config.eta_values.empty() || config.gain_modes.empty()) {
        throw ConfigError("run_sweep: empty parameter grid");
    }
    struct Task {
        double eta;
        GainMode mode;
        double epsilon;
    };
    std::vector<Task> tasks;
    for (double eta : config.eta_values) {
        for (const GainMode& mode : config.gain_modes) {
            for (double eps : config.epsilon_values) {
                tasks.push_back({eta, mode, eps});
            }
        }
    }
    std::sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
        if (a.eta != b.eta) return a.eta < b.eta;
        if (a.mode.order_key() != b.mode.order_key()) return a.mode.order_key() < b.mode.order_key();
        if (a.mode.explicit_gain != b.mode.explicit_gain)
            return a.mode.explicit_gain < b.mode.explicit_gain;
        return a.epsilon < b.epsilon;
    });

    std::vector<ResultRow> rows(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) {
            const Task& task = tasks[t];
            const GkpParams params(task.epsilon);
            const ChannelParams ch(task.eta, task.mode.gain_for(task.eta));
            const CutoffRule cutoff{config.cutoff_threshold};
            const EcEngine engine(params, ch, cutoff);
            const ChannelFidelityResult res = engine.channel_fidelity(config.quadrature, 1);
            ResultRow& row = rows[t];
            row.epsilon = task.epsilon;
            row.squeezing_db = squeezing_db(params);
            row.eta = task.eta;
            row.gain_mode = task.mode.name();
            row.gain_value = ch.gain;
            row.channel_fidelity = res.channel_fidelity;
            row.channel_infidelity = 1.0 - res.channel_fidelity;
            row.mean_fidelities = res.mean_fidelities;
            row.quad_half_width = res.half_width;
            row.quad_spacing = res.spacing;
            row.norm_residual = res.max_norm_residual();
            row.flagged = row.norm_residual >= kNormResidualFlag || !res.converged;
        }
    };
    const size_t n_workers = std::min<size_t>(std::max(1, config.workers), tasks.size());
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return buf;
}

std::string format_csv(const SweepConfig& config, const std::string& config_text,
                       const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    char hash[24];
    std::snprintf(hash, sizeof hash, "0x%016llx",
                  static_cast<unsigned long long>(fnv1a_hash(config_text)));
    out << "# gkpqec sweep results\n";
    out << "# config_fnv1a = " << hash << "\n";
    out << "# cutoff_threshold = " << format_float(config.cutoff_threshold) << "\n";
    out << "# points_per_sigma = " << format_float(config.quadrature.points_per_sigma) << "\n";
    out << "# mass_tol = " << format_float(config.quadrature.mass_tol) << "\n";
    out << "# max_half_width = " << format_float(config.quadrature.max_half_width) << "\n";
    out << "epsilon,squeezing_db,eta,gain_mode,gain_value,channel_fidelity,channel_infidelity,"
           "mean_fidelity_xp,mean_fidelity_xm,mean_fidelity_yp,mean_fidelity_ym,"
           "mean_fidelity_zp,mean_fidelity_zm,quad_half_width,quad_spacing,norm_residual,"
           "flagged\n";
    for (const ResultRow& r : rows) {
        out << format_float(r.epsilon) << ',' << format_float(r.squeezing_db) << ','
            << format_float(r.eta) << ',' << r.gain_mode << ',' << format_float(r.gain_value)
            << ',' << format_float(r.channel_fidelity) << ','
            << format_float(r.channel_infidelity);
        for (double f : r.mean_fidelities) out << ',' << format_float(f);
        out << ',' << format_float(r.quad_half_width) << ',' << format_float(r.quad_spacing)
            << ',' << format_float(r.norm_residual) << ',' << (r.flagged ? 1 : 0) << '\n';
    }
    return out.str();
}

MarginalCurve compute_marginal(const GkpParams& params, const ChannelParams& ch,
                               const CutoffRule& cutoff, double q_max, int points) {
    if (points < 2) throw std::invalid_argument("compute_marginal: need at least 2 points");
    // Logical 0 is (sigma_0 + sigma_3)/N; its q-marginal collapses the
    // lattice onto even m1 with the m2 weights summed out.
    const double variance = ch.eta * ch.gain * 0.5 * std::tanh(params.epsilon) +
                            0.5 * ch.eta * (ch.gain - 1.0) + 0.5 * (1.0 - ch.eta);
    const double center_scale =
        std::sqrt(ch.eta * ch.gain) * (std::sqrt(kPi) / 2.0) / std::cosh(params.epsilon);
    const double n = trace_sigma(Pauli::I, params, cutoff) + trace_sigma(Pauli::Z, params, cutoff);

    std::map<int, double> groups;  // m1 -> summed weight
    for (Pauli k : {Pauli::I, Pauli::Z}) {
        for (const PeakIndex& m : retained_indices(k, params, cutoff)) {
            groups[m.m1] += weight_c(params, m) * sign_s(k, m);
        }
    }

    MarginalCurve curve;
    double extent = 0.0;
    for (const auto& [m1, w] : groups) extent = std::max(extent, std::abs(center_scale * m1));
    if (q_max <= 0.0) q_max = extent + 6.0 * std::sqrt(variance);
    curve.q.resize(points);
    curve.density.assign(points, 0.0);
    for (int i = 0; i < points; ++i) {
        curve.q[i] = -q_max + 2.0 * q_max * i / (points - 1);
    }
    const double sqpi = std::sqrt(kPi);
    const double s2v = std::sqrt(2.0 * variance);
    for (const auto& [m1, w] : groups) {
        const double mu = center_scale * m1;
        const double wn = w / n;
        for (int i = 0; i < points; ++i) {
            curve.density[i] += wn * gaussian_density_1d(curve.q[i], mu, variance);
        }
        // Mass in the bins whose nearest multiple of sqrt(pi) is odd.
        const int j_lo = static_cast<int>(std::floor((mu - 12.0 * std::sqrt(variance)) / (2.0 * sqpi)));
        const int j_hi = static_cast<int>(std::ceil((mu + 12.0 * std::sqrt(variance)) / (2.0 * sqpi)));
        for (int j = j_lo; j <= j_hi; ++j) {
            const double lo = (2 * j + 1) * sqpi - 0.5 * sqpi;
            const double hi = (2 * j + 1) * sqpi + 0.5 * sqpi;
            curve.misinterpreted_mass +=
                wn * 0.5 * (std::erf((hi - mu) / s2v) - std::erf((lo - mu) / s2v));
        }
    }
    return curve;
}

std::string format_marginal_csv(const GkpParams& params, const ChannelParams& ch,
                                const MarginalCurve& curve) {
    std::ostringstream out;
    out << "# gkpqec logical-0 q marginal\n";
    out << "# epsilon = " << format_float(params.epsilon) << "\n";
    out << "# eta = " << format_float(ch.eta) << "\n";
    out << "# gain = " << format_float(ch.gain) << "\n";
    out << "# misinterpreted_mass = " << format_float(curve.misinterpreted_mass) << "\n";
    out << "q,density\n";
    for (size_t i = 0; i < curve.q.size(); ++i) {
        out << format_float(curve.q[i]) << ',' << format_float(curve.density[i]) << '\n';
    }
    return out.str();
}

}  // namespace gkpqec
