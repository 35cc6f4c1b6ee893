// SPDX-License-Identifier: Apache-2.0
//
// mmwsim - drop-based mmWave channel and end-to-end link simulator
// Copyright (C) 2026 mmwsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line front end: run a campaign, print the comparison table, or dump ECDFs.

#include <algorithm>
#include <cstdio>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "mmwsim/mmwsim.h"

namespace {

int report(mmw_status status)
{
    std::fprintf(stderr, "mmwsim: %s: %s\n", mmw_status_string(status), mmw_last_error());
    return 1;
}

int print_owned(mmw_status status, char* text)
{
    if (status != MMW_OK) {
        return report(status);
    }
    std::fputs(text, stdout);
    mmw_string_free(text);
    return 0;
}

int run(const std::string& config_path, std::string out_dir, bool out_given, long long seed, int workers)
{
    mmw_config* cfg = nullptr;
    if (auto st = mmw_config_load(config_path.c_str(), &cfg); st != MMW_OK) {
        return report(st);
    }
    int has_dir = 0;
    mmw_config_has(cfg, "output_dir", &has_dir);
    if (!out_given && has_dir) {
        out_dir.clear(); // the configured directory wins over the default
    }
    if (seed >= 0) {
        mmw_config_set_seed(cfg, static_cast<uint64_t>(seed));
    }
    mmw_campaign* campaign = nullptr;
    const auto st = mmw_run_campaign(cfg, out_dir.empty() ? nullptr : out_dir.c_str(), workers, &campaign);
    mmw_config_free(cfg);
    if (st != MMW_OK) {
        return report(st);
    }
    size_t records = 0;
    mmw_campaign_record_count(campaign, &records);
    std::printf("%zu realizations simulated\n\n", records);
    char* table = nullptr;
    const auto tst = mmw_campaign_table(campaign, MMW_TABLE_TEXT, &table);
    mmw_campaign_free(campaign);
    return print_owned(tst, table);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mmwsim: mmWave channel and end-to-end link simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(mmw_version()));

    std::string config_path;
    std::string out_dir = "results";
    long long seed = -1;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto* run_cmd = app.add_subcommand("run", "Run a simulation campaign");
    run_cmd->add_option("--config", config_path, "Campaign configuration file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", seed, "Base seed (overrides the configuration)")->check(CLI::NonNegativeNumber);
    run_cmd->add_option("--workers", workers, "Concurrent realizations")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", out_dir, "Output directory (defaults to output_dir from the configuration, else results)")->capture_default_str();

    std::string in_dir;
    bool csv = false;
    auto* table_cmd = app.add_subcommand("table", "Print the comparison table of a results directory");
    table_cmd->add_option("--in", in_dir, "Results directory")->required();
    table_cmd->add_flag("--csv", csv, "Emit CSV instead of the aligned text table");

    std::string metric = "sinr";
    auto* ecdf_cmd = app.add_subcommand("ecdf", "Print per-cell empirical CDFs as CSV");
    ecdf_cmd->add_option("--in", in_dir, "Results directory")->required();
    ecdf_cmd->add_option("--metric", metric, "sinr, throughput, latency or drop")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        return run(config_path, out_dir, run_cmd->count("--out") > 0, seed, workers);
    }
    char* text = nullptr;
    if (table_cmd->parsed()) {
        const auto st = mmw_table_from_dir(in_dir.c_str(), csv ? MMW_TABLE_CSV : MMW_TABLE_TEXT, &text);
        return print_owned(st, text);
    }
    const auto st = mmw_ecdf_from_dir(in_dir.c_str(), metric.c_str(), &text);
    return print_owned(st, text);
}
