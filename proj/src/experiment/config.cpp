// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/experiment/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace chaoslab
{
namespace
{
std::string trim(std::string const& s)
{
    auto const first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    auto const last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string const& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');)
    {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

[[noreturn]] void bad_value(std::string const& key, std::string const& value)
{
    throw std::invalid_argument("config key '" + key + "': cannot parse '"
                                + value + "'");
}

double to_double(std::string const& key, std::string const& value)
{
    try
    {
        std::size_t used = 0;
        double const v = std::stod(value, &used);
        if (used != value.size())
            bad_value(key, value);
        return v;
    }
    catch (std::logic_error const&)
    {
        bad_value(key, value);
    }
}

long long to_int(std::string const& key, std::string const& value)
{
    long long v = 0;
    auto const [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        bad_value(key, value);
    return v;
}
}  // namespace

KeyValueConfig KeyValueConfig::parse(std::string const& text)
{
    KeyValueConfig cfg;
    std::stringstream ss(text);
    int line_no = 0;
    for (std::string line; std::getline(ss, line);)
    {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto const eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no)
                                        + ": expected key = value");
        auto const key = trim(line.substr(0, eq));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no)
                                        + ": empty key");
        if (cfg.has(key))
            throw std::invalid_argument("config key '" + key + "' repeated");
        cfg.values_[key] = trim(line.substr(eq + 1));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::from_file(std::string const& path)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open config " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    auto cfg = parse(ss.str());
    cfg.base_dir_ = std::filesystem::path(path).parent_path().string();
    return cfg;
}

void KeyValueConfig::set(std::string const& key, std::string const& value)
{
    values_[key] = value;
}

std::string KeyValueConfig::get_string(std::string const& key) const
{
    auto const it = values_.find(key);
    if (it == values_.end())
        throw std::invalid_argument("config key '" + key + "' missing");
    return it->second;
}

std::string KeyValueConfig::get_string(std::string const& key,
                                       std::string const& fallback) const
{
    return this->has(key) ? this->get_string(key) : fallback;
}

double KeyValueConfig::get_double(std::string const& key) const
{
    return to_double(key, this->get_string(key));
}

double KeyValueConfig::get_double(std::string const& key, double fallback) const
{
    return this->has(key) ? this->get_double(key) : fallback;
}

long long KeyValueConfig::get_int(std::string const& key) const
{
    return to_int(key, this->get_string(key));
}

long long KeyValueConfig::get_int(std::string const& key, long long fallback) const
{
    return this->has(key) ? this->get_int(key) : fallback;
}

std::uint64_t KeyValueConfig::get_u64(std::string const& key,
                                      std::uint64_t fallback) const
{
    if (!this->has(key))
        return fallback;
    auto const value = this->get_string(key);
    std::uint64_t v = 0;
    auto const [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        bad_value(key, value);
    return v;
}

bool KeyValueConfig::get_bool(std::string const& key, bool fallback) const
{
    if (!this->has(key))
        return fallback;
    auto const value = this->get_string(key);
    if (value == "true" || value == "1" || value == "yes")
        return true;
    if (value == "false" || value == "0" || value == "no")
        return false;
    bad_value(key, value);
}

std::vector<double> KeyValueConfig::get_doubles(std::string const& key) const
{
    std::vector<double> out;
    for (auto const& item : split_list(this->get_string(key)))
        out.push_back(to_double(key, item));
    return out;
}

std::vector<double>
KeyValueConfig::get_doubles(std::string const& key,
                            std::vector<double> const& fallback) const
{
    return this->has(key) ? this->get_doubles(key) : fallback;
}

std::vector<int> KeyValueConfig::get_ints(std::string const& key) const
{
    std::vector<int> out;
    for (auto const& item : split_list(this->get_string(key)))
        out.push_back(static_cast<int>(to_int(key, item)));
    return out;
}

std::vector<int> KeyValueConfig::get_ints(std::string const& key,
                                          std::vector<int> const& fallback) const
{
    return this->has(key) ? this->get_ints(key) : fallback;
}

std::vector<std::string> KeyValueConfig::get_strings(std::string const& key) const
{
    return split_list(this->get_string(key));
}

std::string KeyValueConfig::canonical_text() const
{
    std::string out;
    for (auto const& [k, v] : values_)
        out += k + "=" + v + "\n";
    return out;
}

std::string KeyValueConfig::hash() const
{
    return fnv1a_hex(this->canonical_text());
}

std::string fnv1a_hex(std::string const& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream)
{
    std::uint64_t z = base + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

//---------------------------------------------------------------------------//
ExperimentConfig ExperimentConfig::from_config(KeyValueConfig const& kv)
{
    ExperimentConfig cfg;
    cfg.kernel_path = kv.get_string("kernel", "");
    if (!cfg.kernel_path.empty())
    {
        std::filesystem::path p(cfg.kernel_path);
        if (p.is_relative() && !kv.base_dir().empty())
            p = std::filesystem::path(kv.base_dir()) / p;
        cfg.kernel = KernelSpec::from_file(p.string());
    }
    cfg.initial_cos = kv.get_doubles("initial_cos", {});
    cfg.initial_sin = kv.get_doubles("initial_sin", {});
    cfg.dim = static_cast<int>(kv.get_int("dim", 1));
    cfg.n_list = kv.get_ints("n_list", {});
    cfg.j_list = kv.get_ints("j_list", cfg.j_list);
    cfg.order = static_cast<int>(kv.get_int("order", cfg.order));
    cfg.horizon = kv.get_double("horizon", 0.0);
    cfg.output_times = kv.get_doubles("output_times", {cfg.horizon});
    cfg.dt = kv.get_double("dt", cfg.dt);
    cfg.replicas = static_cast<int>(kv.get_int("replicas", cfg.replicas));
    cfg.seed = kv.get_u64("seed", cfg.seed);
    cfg.grid_points = static_cast<int>(kv.get_int("grid_points", cfg.grid_points));
    if (kv.has("observables"))
        cfg.observables = kv.get_strings("observables");
    cfg.chi_squared = kv.get_bool("chi_squared", cfg.chi_squared);
    cfg.histogram_bins
        = static_cast<int>(kv.get_int("histogram_bins", cfg.histogram_bins));
    cfg.bootstrap_resamples = static_cast<int>(
        kv.get_int("bootstrap_resamples", cfg.bootstrap_resamples));
    cfg.output_dir = kv.get_string("output_dir", "");
    cfg.config_hash = kv.hash();
    return cfg;
}

GridField ExperimentConfig::initial_density() const
{
    if (dim < 1 || dim > 2)
        throw std::invalid_argument("dim must be 1 or 2");
    TorusGrid const line(1, grid_points);
    auto const f = GridField::from_function(line, [&](double x) {
        double v = 1;
        for (std::size_t n = 0; n < initial_cos.size(); ++n)
            v += initial_cos[n] * std::cos(2 * std::numbers::pi * (n + 1) * x);
        for (std::size_t n = 0; n < initial_sin.size(); ++n)
            v += initial_sin[n] * std::sin(2 * std::numbers::pi * (n + 1) * x);
        return v;
    });
    if (dim == 1)
        return f;
    // Same node order as the d = 2 grid: coordinate 0 slowest
    auto const square = tensor_power(f, 2).values();
    return GridField(TorusGrid(2, grid_points), 1,
                     std::vector<double>(square.begin(), square.end()));
}

void ExperimentConfig::validate() const
{
    if (n_list.empty())
        throw std::invalid_argument("n_list is empty");
    if (j_list.empty())
        throw std::invalid_argument("j_list is empty");
    int const j_top = *std::max_element(j_list.begin(), j_list.end());
    for (int n : n_list)
        if (n < j_top)
            throw std::invalid_argument("every N must be at least max j");
    if (*std::min_element(j_list.begin(), j_list.end()) < 1)
        throw std::invalid_argument("j must be positive");
    if (order < 0 || order > 2)
        throw std::invalid_argument("order must be 0, 1 or 2");
    if (!(horizon > 0))
        throw std::invalid_argument("horizon must be positive");
    if (output_times.empty())
        throw std::invalid_argument("output_times is empty");
    for (double t : output_times)
        if (t < 0 || t > horizon + 1e-12)
            throw std::invalid_argument("output times must lie in [0, horizon]");
    if (replicas < 2)
        throw std::invalid_argument("need at least two replicas");
    if (grid_points < 4)
        throw std::invalid_argument("grid_points too small");
    double const floor_value = this->initial_density().min();
    if (floor_value < min_initial_density)
        throw std::invalid_argument("initial density falls below 1e-3 on the grid");
}

}  // namespace chaoslab
