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

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gkpqec/channels.hpp"
#include "gkpqec/gkp_core.hpp"
#include "gkpqec/qec.hpp"

namespace gkpqec {

/// Amplifier setting of a sweep point: the two presets of interest plus an
/// explicit gain for exploratory runs.
struct GainMode {
    enum class Kind { None, PreAmp, Explicit };

    Kind kind = Kind::None;
    double explicit_gain = 1.0;

    double gain_for(double eta) const;
    std::string name() const;
    /// Ordering key used for row sorting: none < pre-amp < explicit.
    int order_key() const { return static_cast<int>(kind); }

    static GainMode none();
    static GainMode pre_amp();
    static GainMode explicit_gain_of(double gain);
};

struct SweepConfig {
    std::vector<double> epsilon_values;
    std::vector<double> eta_values;
    std::vector<GainMode> gain_modes = {GainMode::none(), GainMode::pre_amp()};
    double cutoff_threshold = 23.0;
    QuadratureSpec quadrature;
    std::string output_path;
    int workers = 1;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parses the line-oriented `key = value[, value...]` format. '#' starts a
/// comment. Unknown keys and out-of-domain values are rejected with the
/// offending line number or key in the message.
SweepConfig parse_config(const std::string& text);

struct ResultRow {
    double epsilon = 0.0;
    double squeezing_db = 0.0;
    double eta = 0.0;
    std::string gain_mode;
    double gain_value = 1.0;
    double channel_fidelity = 0.0;
    double channel_infidelity = 0.0;
    std::array<double, 6> mean_fidelities = {};
    double quad_half_width = 0.0;
    double quad_spacing = 0.0;
    double norm_residual = 0.0;
    bool flagged = false;
};

/// One row per (eta, gain_mode, epsilon) triple, sorted in that order.
/// Deterministic and independent of the worker count.
std::vector<ResultRow> run_sweep(const SweepConfig& config);

/// CSV with a '#'-prefixed header block (config hash, cutoff, quadrature
/// parameters). Floats are formatted with 12 significant digits so repeated
/// runs are byte-identical.
std::string format_csv(const SweepConfig& config, const std::string& config_text,
                       const std::vector<ResultRow>& rows);

/// FNV-1a 64-bit hash used for the config audit line.
std::uint64_t fnv1a_hash(const std::string& text);

/// Analytic q-quadrature marginal of the logical-0 state after the channel,
/// plus the probability mass falling in intervals that nearest-sqrt(pi)
/// binning assigns to logical 1.
struct MarginalCurve {
    std::vector<double> q;
    std::vector<double> density;
    double misinterpreted_mass = 0.0;
};

MarginalCurve compute_marginal(const GkpParams& params, const ChannelParams& ch,
                               const CutoffRule& cutoff, double q_max = 0.0, int points = 2001);

/// CSV serialization of a marginal curve, with the channel parameters and
/// misinterpreted mass recorded in the '#' header.
std::string format_marginal_csv(const GkpParams& params, const ChannelParams& ch,
                                const MarginalCurve& curve);

/// 12-significant-digit scientific formatting used for all CSV floats.
std::string format_float(double v);

}  // namespace gkpqec
