// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chaoslab/core/grid_field.hpp"
#include "chaoslab/core/kernel.hpp"

namespace chaoslab
{
/*!
 * Flat `key = value` text with `#` comments; lists are comma-separated.
 *
 * Keys are unique. Typed getters throw std::invalid_argument on a missing
 * key (without a default) or an unparsable value.
 */
class KeyValueConfig
{
  public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::string const& text);
    static KeyValueConfig from_file(std::string const& path);

    bool has(std::string const& key) const { return values_.count(key) > 0; }
    void set(std::string const& key, std::string const& value);

    std::string get_string(std::string const& key) const;
    std::string get_string(std::string const& key, std::string const& fallback) const;
    double get_double(std::string const& key) const;
    double get_double(std::string const& key, double fallback) const;
    long long get_int(std::string const& key) const;
    long long get_int(std::string const& key, long long fallback) const;
    std::uint64_t get_u64(std::string const& key, std::uint64_t fallback) const;
    bool get_bool(std::string const& key, bool fallback) const;
    std::vector<double> get_doubles(std::string const& key) const;
    std::vector<double> get_doubles(std::string const& key,
                                    std::vector<double> const& fallback) const;
    std::vector<int> get_ints(std::string const& key) const;
    std::vector<int> get_ints(std::string const& key,
                              std::vector<int> const& fallback) const;
    std::vector<std::string> get_strings(std::string const& key) const;

    //! Canonical `key=value` lines in key order
    std::string canonical_text() const;
    //! FNV-1a of the canonical text, as 16 hex digits
    std::string hash() const;

    //! Directory of the file the config came from (empty if parsed text)
    std::string const& base_dir() const { return base_dir_; }

  private:
    std::map<std::string, std::string> values_;
    std::string base_dir_;
};

//! 64-bit FNV-1a as 16 hex digits
std::string fnv1a_hex(std::string const& text);

//! Independent seed for a sub-stream (splitmix64 finalizer of base + stream)
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/*!
 * Parameters of a simulate/solve/compare run.
 *
 * The initial density is 1 + sum_n (c_n cos 2 pi n x + s_n sin 2 pi n x)
 * with n counted from 1, sampled on the grid.
 */
struct ExperimentConfig
{
    std::string kernel_path;
    KernelSpec kernel;
    std::vector<double> initial_cos;
    std::vector<double> initial_sin;
    int dim = 1;
    std::vector<int> n_list;
    std::vector<int> j_list{1, 2};
    int order = 1;
    double horizon = 0;
    std::vector<double> output_times;
    double dt = 1e-3;
    int replicas = 1;
    std::uint64_t seed = 0;
    int grid_points = 64;
    std::vector<std::string> observables{"cos1"};
    bool chi_squared = true;
    int histogram_bins = 16;
    int bootstrap_resamples = 200;
    std::string output_dir;
    //! Hash of the source key-value text
    std::string config_hash;

    //! Read every field; relative kernel paths resolve against the config file
    static ExperimentConfig from_config(KeyValueConfig const& kv);

    //! Initial density on the d = 1 grid of `grid_points` nodes
    GridField initial_density() const;
    void validate() const;
};

//! Smallest value the initial density may take on its grid
inline constexpr double min_initial_density = 1e-3;

}  // namespace chaoslab
