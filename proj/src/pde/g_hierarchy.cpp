// Copyright 2026 The chaoslab Authors
// SPDX-License-Identifier: Apache-2.0
#include "chaoslab/pde/g_hierarchy.hpp"

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "chaoslab/pde/hierarchy_terms.hpp"
#include "chaoslab/pde/imex.hpp"
#include "chaoslab/pde/mckean_vlasov.hpp"

namespace chaoslab
{
namespace
{
std::string index_name(TriangularIndex idx)
{
    return "(" + std::to_string(idx.i) + "," + std::to_string(idx.j) + ")";
}

FactorLookup table_lookup(CorrectionTable const& table)
{
    return [&table](int order, int size) -> GridField const& {
        auto it = table.find({order, size});
        if (it == table.end())
            throw std::logic_error("hierarchy term refers to a missing entry");
        return it->second;
    };
}

}  // namespace

GridField const& GTable::at(TriangularIndex idx, std::size_t node) const
{
    auto it = entries.find(idx);
    if (it == entries.end())
        throw std::out_of_range("no entry " + index_name(idx));
    return it->second.at(node);
}

CorrectionTable GTable::slice(std::size_t node) const
{
    CorrectionTable out;
    for (auto const& [idx, frames] : entries)
        out.emplace(idx, frames.at(node));
    return out;
}

std::size_t GTable::node_at(double t) const
{
    for (std::size_t n = 0; n < times.size(); ++n)
        if (std::abs(times[n] - t) <= 1e-12 * std::max(1.0, std::abs(t)))
            return n;
    throw std::out_of_range("time is not a saved node");
}

std::size_t hierarchy_memory_bytes(int i_max,
                                   TorusGrid const& grid,
                                   TimeGrid const& tg)
{
    std::size_t const frames = tg.saved_steps().size() + 2;
    std::size_t total = 0;
    for (auto idx : triangular_solve_order(i_max))
        total += frames * grid.nodes(idx.j) * sizeof(double);
    return total;
}

double max_coordinate_marginal(GridField const& g)
{
    double worst = 0;
    for (int c = 0; c < g.arity(); ++c)
        worst = std::max(worst, integrate_coordinate(g, c).max_abs());
    return worst;
}

GTable solve_g_hierarchy(GridField const& f,
                         KernelSpec const& k,
                         TimeGrid const& tg,
                         HierarchyOptions const& opts)
{
    tg.validate();
    if (opts.i_max < 0 || opts.i_max > max_correction_order)
        throw std::invalid_argument("i_max must be in 0.."
                                    + std::to_string(max_correction_order));
    auto const& grid = f.grid();
    if (grid.dim() != 1 && opts.i_max > 0)
        throw std::invalid_argument("correction fields support d=1 only");
    std::size_t const need = hierarchy_memory_bytes(opts.i_max, grid, tg);
    if (need > opts.memory_budget_bytes)
    {
        std::ostringstream msg;
        msg << "hierarchy needs " << need << " bytes (" << need / (1 << 20)
            << " MiB) but the budget is " << opts.memory_budget_bytes
            << " bytes";
        throw std::length_error(msg.str());
    }
    check_initial_density(f);
    check_kernel_band(k, grid);
    // Same validation path as the standalone mean-field solve.
    solve_mckean_vlasov(f, k, TimeGrid{tg.dt, 0, 1});

    auto const order = triangular_solve_order(opts.i_max);
    CorrectionTable cur;
    std::map<TriangularIndex, std::vector<HierarchyTerm>> terms;
    std::map<TriangularIndex, ImexStepper> steppers;
    for (auto idx : order)
    {
        cur.emplace(idx, idx.i == 0 ? f : GridField(grid, idx.j));
        if (idx.i > 0)
            terms.emplace(idx, enumerate_g_terms(idx.i, idx.j));
        steppers.emplace(std::piecewise_construct,
                         std::forward_as_tuple(idx),
                         std::forward_as_tuple(grid, idx.j, tg.dt));
    }

    GTable gt;
    gt.grid = grid;
    gt.time_grid = tg;
    gt.i_max = opts.i_max;
    gt.kernel_hash = k.hash();
    auto record_marginals = [&] {
        for (auto idx : order)
            if (idx.i > 0)
            {
                double& worst = gt.max_marginal[idx];
                worst = std::max(worst, max_coordinate_marginal(cur.at(idx)));
            }
    };
    auto save = [&](double t) {
        gt.times.push_back(t);
        for (auto idx : order)
            gt.entries[idx].push_back(cur.at(idx));
    };
    record_marginals();
    save(0.0);

    auto const saved = tg.saved_steps();
    std::size_t next = 1;
    auto const lookup = table_lookup(cur);
    std::map<TriangularIndex, std::vector<GridField>> flux;
    for (int n = 1; n <= tg.n_steps; ++n)
    {
        for (auto idx : order)
        {
            auto& fl = flux[idx];
            if (idx.i == 0)
            {
                fl = mckean_vlasov_flux(k, cur.at(idx));
                continue;
            }
            fl.assign(idx.j, GridField(grid, idx.j));
            accumulate_fluxes(terms.at(idx), k, lookup, grid, idx.j, fl);
        }
        for (auto idx : order)
            steppers.at(idx).step(cur.at(idx), flux.at(idx));
        double const lo = cur.at({0, 1}).min();
        if (lo < -negativity_tolerance)
            throw std::runtime_error("density became negative at step "
                                     + std::to_string(n) + "; reduce dt");
        record_marginals();
        if (next < saved.size() && saved[next] == n)
        {
            save(n * tg.dt);
            ++next;
        }
    }
    return gt;
}

CorrectionTable hierarchy_time_derivative(CorrectionTable const& slice,
                                          KernelSpec const& k,
                                          int i_max)
{
    auto const& grid = slice.at({0, 1}).grid();
    auto const lookup = table_lookup(slice);
    CorrectionTable out;
    for (auto idx : triangular_solve_order(i_max))
    {
        ImexStepper ops(grid, idx.j, 1.0);
        std::vector<GridField> fl;
        if (idx.i == 0)
            fl = mckean_vlasov_flux(k, slice.at(idx));
        else
        {
            fl.assign(idx.j, GridField(grid, idx.j));
            accumulate_fluxes(enumerate_g_terms(idx.i, idx.j), k, lookup, grid,
                              idx.j, fl);
        }
        GridField d = ops.laplacian(slice.at(idx));
        d += ops.divergence(fl);
        out.emplace(idx, std::move(d));
    }
    return out;
}

namespace
{
std::string frame_file(TriangularIndex idx, std::size_t node)
{
    return "g_" + std::to_string(idx.i) + "_" + std::to_string(idx.j) + "_"
           + std::to_string(node) + ".f64";
}

void write_le(std::ofstream& os, std::span<double const> v)
{
    static_assert(std::endian::native == std::endian::little,
                  "raw field files assume a little-endian host");
    os.write(reinterpret_cast<char const*>(v.data()),
             static_cast<std::streamsize>(v.size_bytes()));
}

}  // namespace

void save_gtable(GTable const& gt, std::string const& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    nlohmann::json meta;
    meta["grid"] = {{"dim", gt.grid.dim()}, {"points", gt.grid.points()}};
    meta["time_grid"] = {{"dt", gt.time_grid.dt},
                         {"n_steps", gt.time_grid.n_steps},
                         {"save_every", gt.time_grid.save_every}};
    meta["times"] = gt.times;
    meta["kernel_hash"] = gt.kernel_hash;
    meta["i_max"] = gt.i_max;
    meta["layout"] = "row-major, x_1 slowest, little-endian float64";
    nlohmann::json entries = nlohmann::json::array();
    for (auto const& [idx, frames] : gt.entries)
    {
        nlohmann::json e{{"i", idx.i}, {"j", idx.j}};
        auto it = gt.max_marginal.find(idx);
        if (it != gt.max_marginal.end())
            e["max_marginal"] = it->second;
        entries.push_back(e);
        for (std::size_t n = 0; n < frames.size(); ++n)
        {
            std::ofstream os(fs::path(dir) / frame_file(idx, n),
                             std::ios::binary);
            write_le(os, frames[n].values());
            if (!os)
                throw std::runtime_error("failed writing g table frame");
        }
    }
    meta["entries"] = entries;
    std::ofstream(fs::path(dir) / "meta.json") << meta.dump(2) << "\n";
}

GTable load_gtable(std::string const& dir)
{
    namespace fs = std::filesystem;
    std::ifstream is(fs::path(dir) / "meta.json");
    if (!is)
        throw std::runtime_error("missing meta.json in " + dir);
    auto const meta = nlohmann::json::parse(is);
    GTable gt;
    gt.grid = TorusGrid(meta["grid"]["dim"], meta["grid"]["points"]);
    gt.time_grid = TimeGrid{meta["time_grid"]["dt"],
                            meta["time_grid"]["n_steps"],
                            meta["time_grid"]["save_every"]};
    gt.times = meta["times"].get<std::vector<double>>();
    gt.kernel_hash = meta["kernel_hash"];
    gt.i_max = meta["i_max"];
    for (auto const& e : meta["entries"])
    {
        TriangularIndex idx{e["i"], e["j"]};
        if (e.contains("max_marginal"))
            gt.max_marginal[idx] = e["max_marginal"];
        auto& frames = gt.entries[idx];
        for (std::size_t n = 0; n < gt.times.size(); ++n)
        {
            GridField field(gt.grid, idx.j);
            std::ifstream fs_in(fs::path(dir) / frame_file(idx, n),
                                std::ios::binary);
            fs_in.read(reinterpret_cast<char*>(field.values().data()),
                       static_cast<std::streamsize>(field.size() * sizeof(double)));
            if (!fs_in)
                throw std::runtime_error("truncated g table frame "
                                         + frame_file(idx, n));
            frames.push_back(std::move(field));
        }
    }
    return gt;
}

}  // namespace chaoslab
