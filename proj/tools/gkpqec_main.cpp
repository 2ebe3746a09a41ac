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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "gkpqec/sweep.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_path, int workers) {
    const std::string text = read_file(config_path);
    gkpqec::SweepConfig cfg = gkpqec::parse_config(text);
    if (workers > 0) cfg.workers = workers;
    if (!out_path.empty()) cfg.output_path = out_path;
    if (cfg.output_path.empty()) throw std::runtime_error("no output path given");
    const auto rows = gkpqec::run_sweep(cfg);
    write_file(cfg.output_path, gkpqec::format_csv(cfg, text, rows));
    int flagged = 0;
    for (const auto& r : rows) {
        if (r.flagged) {
            ++flagged;
            std::cerr << "flagged: epsilon=" << r.epsilon << " eta=" << r.eta << " mode="
                      << r.gain_mode << " norm_residual=" << r.norm_residual << "\n";
        }
    }
    if (flagged > 0) {
        std::cerr << flagged << " of " << rows.size() << " rows flagged\n";
        return 2;
    }
    return 0;
}

int run_marginal_cmd(double epsilon, double eta, const std::string& gain,
                     const std::string& out_path) {
    const gkpqec::GkpParams params(epsilon);
    double g = 1.0;
    if (gain == "none") {
        g = 1.0;
    } else if (gain == "pre-amp") {
        g = 1.0 / eta;
    } else {
        g = std::stod(gain);
    }
    const gkpqec::ChannelParams ch(eta, g);
    const auto curve = gkpqec::compute_marginal(params, ch, gkpqec::CutoffRule{});
    write_file(out_path, gkpqec::format_marginal_csv(params, ch, curve));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"teleportation-based GKP error correction sweeps"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int workers = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep and write a CSV table");
    sweep->add_option("--config", config_path, "sweep configuration file")->required();
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_option("--workers", workers, "worker thread count");

    double epsilon = 0.05, eta = 1.0;
    std::string gain = "none", marg_out;
    CLI::App* marginal =
        app.add_subcommand("marginal", "emit the loss-evolved logical-0 q marginal");
    marginal->add_option("--epsilon", epsilon, "GKP damping parameter")->required();
    marginal->add_option("--eta", eta, "loss channel transmissivity")->required();
    marginal->add_option("--gain", gain, "none, pre-amp, or an explicit gain value");
    marginal->add_option("--out", marg_out, "output CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed()) return run_sweep_cmd(config_path, out_path, workers);
        return run_marginal_cmd(epsilon, eta, gain, marg_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
