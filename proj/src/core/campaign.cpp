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

#include "core/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "core/error.hpp"

namespace mmwsim {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kManifestName = "manifest.json";
constexpr const char* kCellDir = "cells";

std::string fixed(double v, int digits)
{
    if (!std::isfinite(v)) {
        return "NA";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string fixed(const std::optional<double>& v, int digits) { return v ? fixed(*v, digits) : "NA"; }

double mean_of(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path.string());
    }
    out << text;
    if (!out) {
        fail(ErrorCode::Io, "write failed for " + path.string());
    }
}

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ensure_writable(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        fail(ErrorCode::Io, "cannot create output directory " + dir + ": " + ec.message());
    }
    const fs::path probe = fs::path(dir) / ".mmwsim-write-probe";
    {
        std::ofstream out(probe, std::ios::binary | std::ios::trunc);
        if (!out || !(out << "ok")) {
            fail(ErrorCode::Io, "output directory " + dir + " is not writable");
        }
    }
    fs::remove(probe, ec);
}

const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "scenario",         "channel_model",   "condition",         "frequency_ghz",   "bandwidth_hz",
        "distance_m",       "tx_power_dbm",    "seed",              "realizations",    "sim_duration_s",
        "ple_los",          "ple_nlos",        "sigma_los",         "sigma_nlos",      "foliage_db_per_m",
        "o2i_mode",         "foliage_depth_m", "noise_figure_db",   "harq_max_attempts", "rlc_buffer_bytes",
        "warmup_s",         "tx_rows",         "tx_cols",           "rx_rows",         "rx_cols",
        "mcs_table",        "dump_pathloss",   "dump_mpc",          "workers",         "output_dir",
        "ue_height_m",      "gnb_height_m"};
    return keys;
}

std::optional<double> optional_double(const ConfigFile& cfg, const std::string& key)
{
    if (!cfg.has(key)) {
        return std::nullopt;
    }
    return cfg.get_double(key, 0.0);
}

ojson trace_json(const SinrTraceSummary& t)
{
    ojson j;
    j["slots"] = t.slots;
    j["min_db"] = t.min_db;
    j["mean_db"] = t.mean_db();
    j["max_db"] = t.max_db;
    return j;
}

double json_double(const ojson& j, const char* key)
{
    const auto& v = j.at(key);
    if (v.is_null()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return v.get<double>();
}

struct Job {
    std::size_t cell;
    int index;
};

} // namespace

std::string CellKey::label() const
{
    return std::string(to_string(model)) + "_" + std::string(to_string(scenario)) + "_" +
           std::string(to_string(condition));
}

CampaignSpec CampaignSpec::full_grid()
{
    CampaignSpec s;
    s.scenarios.assign(std::begin(kAllScenarios), std::end(kAllScenarios));
    s.models = {ChannelModel::NYUSIM, ChannelModel::SCM3GPP};
    s.conditions = {ConditionMode::FixedLOS, ConditionMode::FixedNLOS};
    return s;
}

CampaignSpec CampaignSpec::from_config(const ConfigFile& cfg)
{
    for (const auto& [key, value] : cfg.values()) {
        if (!known_keys().contains(key)) {
            fail(ErrorCode::InvalidParameter, "unknown configuration key '" + key + "'");
        }
    }
    CampaignSpec s = full_grid();
    if (cfg.has("scenario")) {
        s.scenarios.clear();
        for (const auto& v : cfg.get_list("scenario")) {
            s.scenarios.push_back(parse_scenario(v));
        }
    }
    if (cfg.has("channel_model")) {
        s.models.clear();
        for (const auto& v : cfg.get_list("channel_model")) {
            s.models.push_back(parse_channel_model(v));
        }
    }
    if (cfg.has("condition")) {
        s.conditions.clear();
        for (const auto& v : cfg.get_list("condition")) {
            s.conditions.push_back(parse_condition_mode(v));
        }
    }
    s.realizations = static_cast<int>(cfg.get_int("realizations", 50));
    s.duration_s = cfg.get_double("sim_duration_s", 9.0);
    s.warmup_s = cfg.get_double("warmup_s", 0.0);
    const std::int64_t seed = cfg.get_int("seed", 1);
    if (seed < 0) {
        fail(ErrorCode::InvalidParameter, "seed must be non-negative");
    }
    s.base_seed = static_cast<std::uint64_t>(seed);
    s.workers = static_cast<int>(cfg.get_int("workers", 1));
    s.output_dir = cfg.get_string("output_dir", "");
    s.dump_pathloss = cfg.get_bool("dump_pathloss", false);
    s.dump_mpc = cfg.get_bool("dump_mpc", false);

    auto& o = s.overrides;
    o.frequency_ghz = optional_double(cfg, "frequency_ghz");
    o.bandwidth_hz = optional_double(cfg, "bandwidth_hz");
    o.distance_m = optional_double(cfg, "distance_m");
    o.tx_power_dbm = optional_double(cfg, "tx_power_dbm");
    o.ue_height_m = optional_double(cfg, "ue_height_m");
    o.gnb_height_m = optional_double(cfg, "gnb_height_m");
    o.ple_los = optional_double(cfg, "ple_los");
    o.ple_nlos = optional_double(cfg, "ple_nlos");
    o.sigma_los = optional_double(cfg, "sigma_los");
    o.sigma_nlos = optional_double(cfg, "sigma_nlos");
    o.foliage_db_per_m = cfg.get_double("foliage_db_per_m", 0.0);
    o.foliage_depth_m = cfg.get_double("foliage_depth_m", -1.0);
    o.o2i_mode = parse_o2i_mode(cfg.get_string("o2i_mode", "off"));
    o.noise_figure_db = cfg.get_double("noise_figure_db", 5.0);
    o.harq_max_attempts = static_cast<int>(cfg.get_int("harq_max_attempts", 3));
    o.rlc_buffer_bytes = cfg.get_int("rlc_buffer_bytes", 3'000'000);
    o.tx_rows = static_cast<int>(cfg.get_int("tx_rows", 8));
    o.tx_cols = static_cast<int>(cfg.get_int("tx_cols", 8));
    o.rx_rows = static_cast<int>(cfg.get_int("rx_rows", 4));
    o.rx_cols = static_cast<int>(cfg.get_int("rx_cols", 4));
    o.mcs_table_path = cfg.get_string("mcs_table", "");
    if (!o.mcs_table_path.empty()) {
        s.mcs_table = load_mcs_table_csv(o.mcs_table_path);
    }
    s.validate();
    return s;
}

std::vector<CellKey> CampaignSpec::cells() const
{
    std::vector<CellKey> out;
    for (auto m : models) {
        for (auto sc : scenarios) {
            for (auto c : conditions) {
                out.push_back({sc, m, c});
            }
        }
    }
    return out;
}

RealizationConfig CampaignSpec::cell_config(const CellKey& cell) const
{
    RealizationConfig cfg = RealizationConfig::defaults(cell.scenario, cell.model);
    const auto& o = overrides;
    auto& p = cfg.params;
    p.condition_mode = cell.condition;
    p.frequency_ghz = o.frequency_ghz.value_or(p.frequency_ghz);
    p.bandwidth_hz = o.bandwidth_hz.value_or(p.bandwidth_hz);
    p.distance_2d_m = o.distance_m.value_or(p.distance_2d_m);
    p.tx_power_dbm = o.tx_power_dbm.value_or(p.tx_power_dbm);
    p.h_ue_m = o.ue_height_m.value_or(p.h_ue_m);
    p.h_gnb_m = o.gnb_height_m.value_or(p.h_gnb_m);
    if (o.ple_los) {
        cfg.large_scale.ple_los = {*o.ple_los, *o.ple_los};
    }
    if (o.ple_nlos) {
        cfg.large_scale.ple_nlos = {*o.ple_nlos, *o.ple_nlos};
    }
    if (o.sigma_los) {
        cfg.large_scale.sigma_los_db = {*o.sigma_los, *o.sigma_los};
    }
    if (o.sigma_nlos) {
        cfg.large_scale.sigma_nlos_db = {*o.sigma_nlos, *o.sigma_nlos};
    }
    cfg.o2i_mode = o.o2i_mode;
    cfg.foliage_db_per_m = o.foliage_db_per_m;
    cfg.foliage_depth_m = o.foliage_depth_m;
    cfg.noise_figure_db = o.noise_figure_db;
    cfg.tx_array.rows = o.tx_rows;
    cfg.tx_array.cols = o.tx_cols;
    cfg.rx_array.rows = o.rx_rows;
    cfg.rx_array.cols = o.rx_cols;
    cfg.link.slot.bandwidth_hz = p.bandwidth_hz;
    cfg.link.mcs_table = mcs_table;
    cfg.link.harq_max_attempts = o.harq_max_attempts;
    cfg.link.rlc_buffer_bytes = o.rlc_buffer_bytes;
    cfg.link.duration_s = duration_s;
    cfg.link.warmup_s = warmup_s;
    cfg.keep_multipaths = dump_mpc;
    return cfg;
}

void CampaignSpec::validate() const
{
    if (scenarios.empty() || models.empty() || conditions.empty()) {
        fail(ErrorCode::InvalidParameter, "campaign grid is empty");
    }
    if (realizations < 1) {
        fail(ErrorCode::InvalidParameter, "realizations must be at least 1");
    }
    if (workers < 1) {
        fail(ErrorCode::InvalidParameter, "workers must be at least 1");
    }
    const auto grid = cells();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            if (grid[i] == grid[j]) {
                fail(ErrorCode::InvalidParameter, "campaign grid repeats cell " + grid[i].label());
            }
        }
        cell_config(grid[i]).validate();
    }
}

std::uint64_t realization_seed(std::uint64_t base_seed, const CellKey& cell, int index)
{
    const std::string key = cell.label() + "#" + std::to_string(index);
    return splitmix64(splitmix64(base_seed) ^ fnv1a(key));
}

RealizationRecord RealizationRecord::from_result(const CellKey& cell, int index, const RealizationResult& r)
{
    RealizationRecord rec;
    rec.cell = cell;
    rec.index = index;
    rec.seed = r.seed;
    rec.link_condition = r.condition;
    rec.los_probability = r.los_probability;
    rec.path_loss = r.path_loss;
    rec.multipaths = static_cast<std::int64_t>(r.multipath_count);
    rec.bf_gain_db = 10.0 * std::log10(r.bf_gain);
    rec.sinr_db = r.sinr_db;
    rec.sinr_trace = r.metrics.sinr_trace;
    rec.mcs = r.mcs_index;
    rec.tb_bytes = r.tb_bytes;
    rec.throughput_mbps = r.throughput_mbps;
    rec.mean_latency_ms = r.mean_latency_ms;
    rec.drop_pct = r.drop_pct;
    rec.packets_tx = r.metrics.packets_tx;
    rec.packets_rx = r.metrics.packets_rx;
    rec.drops_overflow = r.metrics.drops_overflow;
    rec.drops_corrupted = r.metrics.drops_corrupted;
    rec.drops_residual = r.metrics.drops_residual;
    rec.tbs_sent = r.metrics.tbs_sent;
    rec.tbs_failed = r.metrics.tbs_failed;
    rec.harq_retransmissions = r.metrics.harq_retransmissions;
    return rec;
}

std::string RealizationRecord::to_json_line() const
{
    ojson j;
    j["seed"] = seed;
    j["model"] = to_string(cell.model);
    j["scenario"] = to_string(cell.scenario);
    j["condition"] = to_string(cell.condition);
    j["index"] = index;
    j["link_condition"] = to_string(link_condition);
    j["los_probability"] = los_probability;
    j["path_loss"] = {{"fspl_db", path_loss.fspl_1m_db}, {"dist_db", path_loss.distance_db},
                      {"at_db", path_loss.at_db},        {"o2i_db", path_loss.o2i_db},
                      {"fl_db", path_loss.fl_db},        {"shadow_db", path_loss.shadow_db},
                      {"total_db", path_loss.total_db}};
    j["multipaths"] = multipaths;
    j["bf_gain_db"] = bf_gain_db;
    j["sinr_db"] = sinr_db;
    j["sinr_db_trace_summary"] = trace_json(sinr_trace);
    j["mcs"] = mcs;
    j["tb_bytes"] = tb_bytes;
    j["throughput_mbps"] = throughput_mbps;
    j["mean_latency_ms"] = mean_latency_ms ? ojson(*mean_latency_ms) : ojson(nullptr);
    j["drop_pct"] = drop_pct;
    j["packets_tx"] = packets_tx;
    j["packets_rx"] = packets_rx;
    j["drops_overflow"] = drops_overflow;
    j["drops_corrupted"] = drops_corrupted;
    j["drops_residual"] = drops_residual;
    j["tbs_sent"] = tbs_sent;
    j["tbs_failed"] = tbs_failed;
    j["harq_retransmissions"] = harq_retransmissions;
    return j.dump();
}

RealizationRecord RealizationRecord::from_json_line(const std::string& line)
{
    ojson j;
    try {
        j = ojson::parse(line);
    } catch (const std::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("malformed record: ") + e.what());
    }
    try {
        RealizationRecord r;
        r.seed = j.at("seed").get<std::uint64_t>();
        r.cell.model = parse_channel_model(j.at("model").get<std::string>());
        r.cell.scenario = parse_scenario(j.at("scenario").get<std::string>());
        r.cell.condition = parse_condition_mode(j.at("condition").get<std::string>());
        r.index = j.at("index").get<int>();
        r.link_condition = parse_link_condition(j.at("link_condition").get<std::string>());
        r.los_probability = j.at("los_probability").get<double>();
        const auto& pl = j.at("path_loss");
        r.path_loss.fspl_1m_db = json_double(pl, "fspl_db");
        r.path_loss.distance_db = json_double(pl, "dist_db");
        r.path_loss.at_db = json_double(pl, "at_db");
        r.path_loss.o2i_db = json_double(pl, "o2i_db");
        r.path_loss.fl_db = json_double(pl, "fl_db");
        r.path_loss.shadow_db = json_double(pl, "shadow_db");
        r.path_loss.total_db = json_double(pl, "total_db");
        r.multipaths = j.at("multipaths").get<std::int64_t>();
        r.bf_gain_db = json_double(j, "bf_gain_db");
        r.sinr_db = json_double(j, "sinr_db");
        const auto& tr = j.at("sinr_db_trace_summary");
        r.sinr_trace.slots = tr.at("slots").get<std::int64_t>();
        r.sinr_trace.min_db = json_double(tr, "min_db");
        r.sinr_trace.max_db = json_double(tr, "max_db");
        r.sinr_trace.sum_db = json_double(tr, "mean_db") * static_cast<double>(r.sinr_trace.slots);
        r.mcs = j.at("mcs").get<int>();
        r.tb_bytes = j.at("tb_bytes").get<std::int64_t>();
        r.throughput_mbps = json_double(j, "throughput_mbps");
        if (!j.at("mean_latency_ms").is_null()) {
            r.mean_latency_ms = j.at("mean_latency_ms").get<double>();
        }
        r.drop_pct = json_double(j, "drop_pct");
        r.packets_tx = j.at("packets_tx").get<std::int64_t>();
        r.packets_rx = j.at("packets_rx").get<std::int64_t>();
        r.drops_overflow = j.at("drops_overflow").get<std::int64_t>();
        r.drops_corrupted = j.at("drops_corrupted").get<std::int64_t>();
        r.drops_residual = j.at("drops_residual").get<std::int64_t>();
        r.tbs_sent = j.at("tbs_sent").get<std::int64_t>();
        r.tbs_failed = j.at("tbs_failed").get<std::int64_t>();
        r.harq_retransmissions = j.at("harq_retransmissions").get<std::int64_t>();
        return r;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("incomplete record: ") + e.what());
    }
}

double CellResult::mean_throughput_mbps() const
{
    std::vector<double> v;
    for (const auto& r : records) {
        v.push_back(r.throughput_mbps);
    }
    return mean_of(v);
}

std::optional<double> CellResult::mean_latency_ms() const
{
    std::vector<double> v;
    for (const auto& r : records) {
        if (r.mean_latency_ms) {
            v.push_back(*r.mean_latency_ms);
        }
    }
    if (v.empty()) {
        return std::nullopt;
    }
    return mean_of(v);
}

double CellResult::mean_drop_pct() const
{
    std::vector<double> v;
    for (const auto& r : records) {
        v.push_back(r.drop_pct);
    }
    return mean_of(v);
}

const CellResult* CampaignResult::find(const CellKey& key) const
{
    for (const auto& c : cells) {
        if (c.key == key) {
            return &c;
        }
    }
    return nullptr;
}

std::size_t CampaignResult::record_count() const
{
    std::size_t n = 0;
    for (const auto& c : cells) {
        n += c.records.size();
    }
    return n;
}

std::vector<std::pair<double, double>> ecdf(std::vector<double> values)
{
    if (values.empty()) {
        fail(ErrorCode::InvalidInput, "ECDF of an empty sample");
    }
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(values.size());
    const auto n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.emplace_back(values[i], static_cast<double>(i + 1) / n);
    }
    return out;
}

Metric parse_metric(std::string_view name)
{
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "sinr") {
        return Metric::Sinr;
    }
    if (s == "throughput") {
        return Metric::Throughput;
    }
    if (s == "latency") {
        return Metric::Latency;
    }
    if (s == "drop") {
        return Metric::Drop;
    }
    fail(ErrorCode::InvalidParameter, "unknown metric '" + s + "' (expected sinr, throughput, latency or drop)");
}

std::string ecdf_csv(const CampaignResult& result, Metric metric)
{
    std::ostringstream out;
    out << "model,scenario,condition,value,fraction\n";
    for (const auto& key : result.grid) {
        const CellResult* cell = result.find(key);
        if (cell == nullptr) {
            continue;
        }
        std::vector<double> values;
        for (const auto& r : cell->records) {
            switch (metric) {
            case Metric::Sinr:
                values.push_back(r.sinr_db);
                break;
            case Metric::Throughput:
                values.push_back(r.throughput_mbps);
                break;
            case Metric::Latency:
                if (r.mean_latency_ms) {
                    values.push_back(*r.mean_latency_ms);
                }
                break;
            case Metric::Drop:
                values.push_back(r.drop_pct);
                break;
            }
        }
        if (values.empty()) {
            continue;
        }
        for (const auto& [v, f] : ecdf(std::move(values))) {
            out << to_string(key.model) << ',' << to_string(key.scenario) << ',' << to_string(key.condition) << ','
                << fixed(v, 12) << ',' << fixed(f, 12) << '\n';
        }
    }
    return out.str();
}

ComparisonTable emit_comparison_table(const CampaignResult& result)
{
    std::vector<std::string> missing;
    for (const auto& key : result.grid) {
        const CellResult* cell = result.find(key);
        const std::size_t have = cell ? cell->records.size() : 0;
        if (have < static_cast<std::size_t>(result.realizations)) {
            missing.push_back(key.label() + " (" + std::to_string(have) + " of " +
                              std::to_string(result.realizations) + " realizations)");
        }
    }
    if (!missing.empty()) {
        std::string msg = "campaign is incomplete; missing cells:";
        for (const auto& m : missing) {
            msg += "\n  " + m;
        }
        fail(ErrorCode::IncompleteCampaign, msg);
    }

    static constexpr ChannelModel models[] = {ChannelModel::NYUSIM, ChannelModel::SCM3GPP};
    static constexpr ConditionMode conds[] = {ConditionMode::FixedLOS, ConditionMode::FixedNLOS};
    static constexpr const char* metrics[] = {"throughput_mbps", "latency_ms", "drop_pct"};

    ComparisonTable t;
    t.rows.assign(std::begin(kAllScenarios), std::end(kAllScenarios));
    for (const char* metric : metrics) {
        for (auto c : conds) {
            for (auto m : models) {
                t.columns.push_back(std::string(metric) + "_" + std::string(to_string(c)) + "_" +
                                    std::string(to_string(m)));
            }
        }
    }
    for (auto sc : t.rows) {
        std::vector<std::optional<double>> row;
        for (int mi = 0; mi < 3; ++mi) {
            for (auto c : conds) {
                for (auto m : models) {
                    const CellResult* cell = result.find({sc, m, c});
                    if (cell == nullptr || cell->records.empty()) {
                        row.emplace_back(std::nullopt);
                    } else if (mi == 0) {
                        row.emplace_back(cell->mean_throughput_mbps());
                    } else if (mi == 1) {
                        row.push_back(cell->mean_latency_ms());
                    } else {
                        row.emplace_back(cell->mean_drop_pct());
                    }
                }
            }
        }
        t.values.push_back(std::move(row));
    }
    return t;
}

std::string ComparisonTable::to_csv() const
{
    std::ostringstream out;
    out << "scenario";
    for (const auto& c : columns) {
        out << ',' << c;
    }
    out << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << to_string(rows[r]);
        for (const auto& v : values[r]) {
            out << ',' << fixed(v, 12);
        }
        out << '\n';
    }
    return out.str();
}

ComparisonTable ComparisonTable::from_csv(const std::string& text)
{
    ComparisonTable t;
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        std::istringstream ss(s);
        while (std::getline(ss, cur, ',')) {
            out.push_back(cur);
        }
        return out;
    };
    if (!std::getline(in, line)) {
        fail(ErrorCode::InvalidInput, "comparison table is empty");
    }
    auto header = split(line);
    if (header.empty() || header[0] != "scenario") {
        fail(ErrorCode::InvalidInput, "comparison table header must start with 'scenario'");
    }
    t.columns.assign(header.begin() + 1, header.end());
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto fields = split(line);
        if (fields.size() != header.size()) {
            fail(ErrorCode::InvalidInput, "comparison table row has the wrong number of fields");
        }
        t.rows.push_back(parse_scenario(fields[0]));
        std::vector<std::optional<double>> row;
        for (std::size_t i = 1; i < fields.size(); ++i) {
            if (fields[i] == "NA") {
                row.emplace_back(std::nullopt);
            } else {
                row.emplace_back(std::stod(fields[i]));
            }
        }
        t.values.push_back(std::move(row));
    }
    return t;
}

std::string ComparisonTable::to_text() const
{
    std::ostringstream out;
    const char* groups[] = {"Avg. throughput (Mbps)", "Avg. latency (ms)", "Avg. packet drop (%)"};
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-9s", "");
    out << buf;
    for (const char* g : groups) {
        std::snprintf(buf, sizeof buf, " | %-35s", g);
        out << buf;
    }
    out << "\n";
    std::snprintf(buf, sizeof buf, "%-9s", "");
    out << buf;
    for (int g = 0; g < 3; ++g) {
        std::snprintf(buf, sizeof buf, " | %-17s %-17s", "LOS", "NLOS");
        out << buf;
    }
    out << "\n";
    std::snprintf(buf, sizeof buf, "%-9s", "Scenario");
    out << buf;
    for (int g = 0; g < 6; ++g) {
        std::snprintf(buf, sizeof buf, "%s%8s %8s", g % 2 == 0 ? " | " : " ", "NYUSIM", "3GPP");
        out << buf;
    }
    out << "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::snprintf(buf, sizeof buf, "%-9s", std::string(to_string(rows[r])).c_str());
        out << buf;
        for (std::size_t c = 0; c < values[r].size(); ++c) {
            const auto& v = values[r][c];
            const std::string cell = v ? fixed(*v, 2) : "-";
            std::snprintf(buf, sizeof buf, "%s%8s", c % 4 == 0 ? " | " : " ", cell.c_str());
            out << buf;
        }
        out << "\n";
    }
    return out.str();
}

namespace {

std::string manifest_json(const CampaignSpec& spec, const std::vector<CellKey>& grid)
{
    ojson j;
    j["format"] = "mmwsim-campaign";
    j["version"] = 1;
    j["base_seed"] = spec.base_seed;
    j["realizations"] = spec.realizations;
    j["sim_duration_s"] = spec.duration_s;
    j["warmup_s"] = spec.warmup_s;
    ojson cells = ojson::array();
    for (const auto& k : grid) {
        cells.push_back({{"model", to_string(k.model)},
                         {"scenario", to_string(k.scenario)},
                         {"condition", to_string(k.condition)},
                         {"file", std::string(kCellDir) + "/" + k.label() + ".jsonl"}});
    }
    j["grid"] = cells;
    const auto& o = spec.overrides;
    ojson settings;
    auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); };
    settings["frequency_ghz"] = opt(o.frequency_ghz);
    settings["bandwidth_hz"] = opt(o.bandwidth_hz);
    settings["distance_m"] = opt(o.distance_m);
    settings["tx_power_dbm"] = opt(o.tx_power_dbm);
    settings["ue_height_m"] = opt(o.ue_height_m);
    settings["gnb_height_m"] = opt(o.gnb_height_m);
    settings["ple_los"] = opt(o.ple_los);
    settings["ple_nlos"] = opt(o.ple_nlos);
    settings["sigma_los"] = opt(o.sigma_los);
    settings["sigma_nlos"] = opt(o.sigma_nlos);
    settings["foliage_db_per_m"] = o.foliage_db_per_m;
    settings["foliage_depth_m"] = o.foliage_depth_m;
    settings["o2i_mode"] = to_string(o.o2i_mode);
    settings["noise_figure_db"] = o.noise_figure_db;
    settings["harq_max_attempts"] = o.harq_max_attempts;
    settings["rlc_buffer_bytes"] = o.rlc_buffer_bytes;
    settings["tx_array"] = {o.tx_rows, o.tx_cols};
    settings["rx_array"] = {o.rx_rows, o.rx_cols};
    settings["mcs_table"] = o.mcs_table_path.empty() ? ojson("builtin") : ojson(o.mcs_table_path);
    j["settings"] = settings;
    return j.dump(2) + "\n";
}

std::string campaign_csv(const CampaignResult& result)
{
    std::ostringstream out;
    out << "model,scenario,condition,index,seed,link_condition,los_probability,path_loss_db,shadow_db,bf_gain_db,"
           "sinr_db,mcs,tb_bytes,throughput_mbps,mean_latency_ms,drop_pct,packets_tx,packets_rx\n";
    for (const auto& cell : result.cells) {
        for (const auto& r : cell.records) {
            out << to_string(cell.key.model) << ',' << to_string(cell.key.scenario) << ','
                << to_string(cell.key.condition) << ',' << r.index << ',' << r.seed << ','
                << to_string(r.link_condition) << ',' << fixed(r.los_probability, 6) << ','
                << fixed(r.path_loss.total_db, 6) << ',' << fixed(r.path_loss.shadow_db, 6) << ','
                << fixed(r.bf_gain_db, 6) << ',' << fixed(r.sinr_db, 6) << ',' << r.mcs << ',' << r.tb_bytes << ','
                << fixed(r.throughput_mbps, 6) << ',' << fixed(r.mean_latency_ms, 6) << ',' << fixed(r.drop_pct, 6)
                << ',' << r.packets_tx << ',' << r.packets_rx << '\n';
        }
    }
    return out.str();
}

std::string pathloss_csv(const CampaignResult& result)
{
    std::ostringstream out;
    out << "realization,model,scenario,condition,fspl_db,dist_db,o2i_db,fl_db,shadow_db,total_db\n";
    for (const auto& cell : result.cells) {
        for (const auto& r : cell.records) {
            const auto& pl = r.path_loss;
            out << r.index << ',' << to_string(cell.key.model) << ',' << to_string(cell.key.scenario) << ','
                << to_string(r.link_condition) << ',' << fixed(pl.fspl_1m_db, 6) << ',' << fixed(pl.distance_db, 6)
                << ',' << fixed(pl.o2i_db, 6) << ',' << fixed(pl.fl_db, 6) << ',' << fixed(pl.shadow_db, 6) << ','
                << fixed(pl.total_db, 6) << '\n';
        }
    }
    return out.str();
}

} // namespace

CampaignResult run_campaign(const CampaignSpec& spec)
{
    spec.validate();
    if (!spec.output_dir.empty()) {
        ensure_writable(spec.output_dir);
    }

    const auto grid = spec.cells();
    std::vector<RealizationConfig> configs;
    configs.reserve(grid.size());
    for (const auto& key : grid) {
        configs.push_back(spec.cell_config(key));
    }

    std::vector<Job> jobs;
    for (std::size_t c = 0; c < grid.size(); ++c) {
        for (int i = 0; i < spec.realizations; ++i) {
            jobs.push_back({c, i});
        }
    }
    std::vector<RealizationRecord> records(jobs.size());
    std::vector<std::vector<Multipath>> multipaths(spec.dump_mpc ? jobs.size() : 0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        while (true) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) {
                return;
            }
            try {
                const auto& job = jobs[j];
                const auto& key = grid[job.cell];
                RealizationResult r = run_realization(configs[job.cell], realization_seed(spec.base_seed, key, job.index));
                records[j] = RealizationRecord::from_result(key, job.index, r);
                if (spec.dump_mpc) {
                    multipaths[j] = std::move(r.multipaths);
                }
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                next.store(jobs.size());
                return;
            }
        }
    };
    const int n_threads = std::max(1, std::min<int>(spec.workers, static_cast<int>(jobs.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    CampaignResult result;
    result.grid = grid;
    result.realizations = spec.realizations;
    result.base_seed = spec.base_seed;
    for (const auto& key : grid) {
        result.cells.push_back({key, {}});
    }
    for (std::size_t j = 0; j < jobs.size(); ++j) {
        result.cells[jobs[j].cell].records.push_back(records[j]);
    }

    if (spec.output_dir.empty()) {
        return result;
    }
    const fs::path dir(spec.output_dir);
    std::error_code ec;
    fs::create_directories(dir / kCellDir, ec);
    if (ec) {
        fail(ErrorCode::Io, "cannot create " + (dir / kCellDir).string() + ": " + ec.message());
    }
    // Raw records go to disk before anything derived from them.
    for (const auto& cell : result.cells) {
        std::string text;
        for (const auto& r : cell.records) {
            text += r.to_json_line();
            text += '\n';
        }
        write_text(dir / kCellDir / (cell.key.label() + ".jsonl"), text);
    }
    write_text(dir / kManifestName, manifest_json(spec, grid));
    write_text(dir / "campaign.csv", campaign_csv(result));
    write_text(dir / "table.csv", emit_comparison_table(result).to_csv());
    write_text(dir / "ecdf_sinr.csv", ecdf_csv(result, Metric::Sinr));
    if (spec.dump_pathloss) {
        write_text(dir / "pathloss.csv", pathloss_csv(result));
    }
    if (spec.dump_mpc) {
        fs::create_directories(dir / "mpc", ec);
        if (ec) {
            fail(ErrorCode::Io, "cannot create " + (dir / "mpc").string() + ": " + ec.message());
        }
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            std::ostringstream os;
            write_mpc_csv(os, multipaths[j]);
            write_text(dir / "mpc" / (grid[jobs[j].cell].label() + "_" + std::to_string(jobs[j].index) + ".csv"),
                       os.str());
        }
    }
    return result;
}

CampaignResult load_campaign(const std::string& dir)
{
    const fs::path root(dir);
    const std::string text = read_text(root / kManifestName);
    ojson manifest;
    try {
        manifest = ojson::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("malformed manifest: ") + e.what());
    }
    CampaignResult result;
    try {
        result.realizations = manifest.at("realizations").get<int>();
        result.base_seed = manifest.at("base_seed").get<std::uint64_t>();
        for (const auto& c : manifest.at("grid")) {
            CellKey key;
            key.model = parse_channel_model(c.at("model").get<std::string>());
            key.scenario = parse_scenario(c.at("scenario").get<std::string>());
            key.condition = parse_condition_mode(c.at("condition").get<std::string>());
            result.grid.push_back(key);

            CellResult cell{key, {}};
            const fs::path file = root / c.at("file").get<std::string>();
            if (fs::exists(file)) {
                std::istringstream lines(read_text(file));
                std::string line;
                while (std::getline(lines, line)) {
                    if (!line.empty()) {
                        cell.records.push_back(RealizationRecord::from_json_line(line));
                    }
                }
            }
            result.cells.push_back(std::move(cell));
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        fail(ErrorCode::InvalidInput, std::string("manifest is missing fields: ") + e.what());
    }
    return result;
}

} // namespace mmwsim
